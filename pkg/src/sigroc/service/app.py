"""HTTP facade over the core package.

Every endpoint is a stateless wrapper: validate with pydantic, call the
library, shape the result.  Domain precondition violations surface as
400s; malformed payloads are FastAPI's usual 422s.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import develop, identities, paths, signatures, winding
from . import schemas as S


def _gen_path(req: S.GenerateRequest):
    if req.name == "line":
        v = req.v if req.v is not None else [1.0, 0.0]
        return paths.line(v)
    if req.name == "square":
        return paths.square_loop()
    if req.name == "figure8":
        return paths.figure_eight()
    return paths.brownian_sample(req.steps, req.seed, d=req.dimension)


def create_app() -> FastAPI:
    app = FastAPI(
        title="sigroc",
        description="Signatures, log-signatures and finite-ROC identity batteries "
        "for piecewise-linear paths.",
        version="0.1.0",
    )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/paths/generate", response_model=S.PathModel)
    def generate(req: S.GenerateRequest) -> S.PathModel:
        return S.PathModel.from_path(_gen_path(req))

    @app.post("/signature", response_model=S.TensorDump)
    def sig(req: S.TensorRequest) -> S.TensorDump:
        with _domain_errors():
            x = signatures.signature(req.path.to_path(), req.depth)
        return S.TensorDump.from_tensor(x)

    @app.post("/logsignature", response_model=S.TensorDump)
    def logsig(req: S.TensorRequest) -> S.TensorDump:
        with _domain_errors():
            x = signatures.log_signature(req.path.to_path(), req.depth)
        return S.TensorDump.from_tensor(x)

    @app.post("/roc", response_model=S.RocResponse)
    def roc(req: S.RocRequest) -> S.RocResponse:
        with _domain_errors():
            prof = signatures.roc_profile(
                signatures.log_signature(req.path.to_path(), req.depth)
            )
        return S.RocResponse(
            norms=prof.norms, r=prof.r, slope=prof.slope, window=prof.window,
            verdict=prof.verdict,
        )

    @app.post("/check", response_model=S.CheckResponse)
    def check(req: S.CheckRequest) -> S.CheckResponse:
        p = req.path.to_path()
        reports = []
        with _domain_errors():
            names = (
                ["lineint", "doubint", "iterint", "genform"]
                if req.battery == "all"
                else [req.battery]
            )
            for name in names:
                if name == "lineint":
                    kwargs: dict = {"k_max": req.kmax}
                elif name == "doubint":
                    kwargs = {"k_range": req.krange}
                elif name == "iterint":
                    kwargs = {"m_max": req.mmax, "k_bound": req.kbound}
                else:
                    kwargs = {}
                if req.tol is not None:
                    kwargs["engine_tol"] = req.tol
                reports.append(identities.ALL_BATTERIES[name](p, **kwargs))
        return S.CheckResponse(
            reports=[S.ReportModel(**r.to_json_dict()) for r in reports]
        )

    @app.post("/develop", response_model=S.DevelopResponse)
    def dev(req: S.DevelopRequest) -> S.DevelopResponse:
        p = req.path.to_path()
        rates = [complex(re, im) for re, im in req.rates]
        m = len(rates)
        rows = []
        with _domain_errors():
            if m == 1:
                # one rate: the entire-function identity of the
                # two-dimensional development; at lattice rates it
                # degenerates to the bare line-integral conclusion
                lam = rates[0]
                resid, tail = develop.develop_2d_identity_residual(p, lam, 1.0, req.depth)
                rows.append(
                    S.DevelopRow(
                        id="2d-identity",
                        params={"lambda": str(lam)},
                        residual=resid,
                        tail=tail,
                    )
                )
            else:
                for k in range(1, m + 1):
                    resid, tail = develop.fdk_residual(p, rates, k, req.depth)
                    rows.append(
                        S.DevelopRow(id="fdk", params={"k": k}, residual=resid, tail=tail)
                    )
                word = req.word if req.word is not None else list(range(1, m + 1))
                if any(i > m for i in word):
                    raise ValueError("word letters exceed the number of rates")
                resid, tail = develop.dm_dev_coeff_residual(p, rates, word, req.depth)
                rows.append(
                    S.DevelopRow(
                        id="dm-corner", params={"word": word}, residual=resid, tail=tail
                    )
                )
        return S.DevelopResponse(rows=rows, depth=req.depth)

    @app.post("/winding")
    def wind(req: S.WindingRequest):
        p = req.path.to_path()
        with _domain_errors():
            if req.point is not None:
                return S.WindingValue(value=winding.winding_number(p, req.point))
            grid = winding.winding_field(
                p, req.grid.bounds, req.grid.nx, req.grid.ny
            )
        return S.WindingGridModel(**grid.to_json_dict())

    return app


class _domain_errors:
    """Map library ValueErrors to client-error responses."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and issubclass(
            exc_type, (ValueError, ZeroDivisionError, ArithmeticError)
        ):
            raise HTTPException(status_code=400, detail=str(exc))
        return False


app = create_app()
