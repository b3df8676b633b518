"""Command-line client for the sigroc service.

The CLI is a thin HTTP client: by default it mounts the FastAPI app
in-process (no daemon needed); ``--server URL`` or the SIGROC_SERVER
environment variable points it at a running instance instead.  All
output is JSON with deterministic bytes for identical invocations.

Word indexing in tensor dumps is little-endian: level n lists the d**n
coefficients of all length-n words, the word (j1..jn) at index
j1 + j2*d + ... + jn*d**(n-1), each coefficient as an [re, im] pair.

Exit codes: 0 = ran (verdicts are data, not errors), 2 = usage or
malformed input.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

MAX_DEPTH = 18


class Client:
    def __init__(self, server: str | None):
        self._server = server

    def _request(self, route: str, payload: dict) -> httpx.Response:
        if self._server:
            with httpx.Client(base_url=self._server, timeout=600.0) as client:
                return client.post(route, json=payload)

        # in-process: mount the ASGI app behind an event loop per call
        import asyncio

        from .service.app import app

        async def go() -> httpx.Response:
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://sigroc.internal", timeout=600.0
            ) as client:
                return await client.post(route, json=payload)

        return asyncio.run(go())

    def post(self, route: str, payload: dict) -> dict:
        try:
            resp = self._request(route, payload)
        except httpx.HTTPError as exc:
            raise click.UsageError(f"cannot reach server: {exc}")
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise click.UsageError(f"{route}: {detail}")
        return resp.json()


pass_client = click.make_pass_decorator(Client)


@click.group()
@click.option("--server", envvar="SIGROC_SERVER", default=None, metavar="URL",
              help="URL of a running sigroc service; default runs in-process.")
@click.pass_context
def main(ctx, server):
    """Signatures, log-signatures and finite-ROC identity batteries."""
    ctx.obj = Client(server)


def _emit(data: dict | list, out: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_path(path_file: str) -> dict:
    try:
        with open(path_file) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read path file {path_file}: {exc}")
    if not isinstance(data, dict) or "vertices" not in data:
        raise click.UsageError(f"{path_file} is not a path file")
    return data


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise click.UsageError(f"cannot parse {text!r} as comma-separated numbers")


def _parse_complex(text: str) -> tuple[float, float]:
    try:
        z = complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise click.UsageError(f"cannot parse {text!r} as a complex number (use e.g. 1+2i)")
    return (z.real, z.imag)


@main.command()
@click.argument("name", type=click.Choice(["line", "square", "figure8", "brownian"]))
@click.option("--v", "vector", default=None, help="line endpoint, e.g. 1,0")
@click.option("--steps", default=64, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--dim", default=2, show_default=True, type=click.IntRange(1, 8))
@click.option("--out", default=None, metavar="FILE")
@pass_client
def gen(client, name, vector, steps, seed, dim, out):
    """Write a builder path as a JSON path file."""
    payload = {"name": name, "steps": steps, "seed": seed, "dimension": dim}
    if vector is not None:
        payload["v"] = _parse_floats(vector)
    _emit(client.post("/paths/generate", payload), out)


def _tensor_cmd(client, path_file, depth, out, route):
    data = _load_path(path_file)
    if depth > MAX_DEPTH:
        raise click.UsageError(f"depth {depth} exceeds the cap {MAX_DEPTH}")
    _emit(client.post(route, {"path": data, "depth": depth}), out)


@main.command()
@click.argument("path_file")
@click.option("--depth", default=6, show_default=True, type=click.IntRange(min=0))
@click.option("--out", default=None, metavar="FILE")
@pass_client
def sig(client, path_file, depth, out):
    """Signature coefficients of a path file, per level."""
    _tensor_cmd(client, path_file, depth, out, "/signature")


@main.command()
@click.argument("path_file")
@click.option("--depth", default=6, show_default=True, type=click.IntRange(min=0))
@click.option("--out", default=None, metavar="FILE")
@pass_client
def logsig(client, path_file, depth, out):
    """Log-signature coefficients of a path file, per level."""
    _tensor_cmd(client, path_file, depth, out, "/logsignature")


@main.command()
@click.argument("path_file")
@click.option("--depth", default=12, show_default=True, type=click.IntRange(6, MAX_DEPTH))
@click.option("--out", default=None, metavar="FILE")
@pass_client
def roc(client, path_file, depth, out):
    """Tail-growth profile and ROC-consistency verdict."""
    _emit(client.post("/roc", {"path": _load_path(path_file), "depth": depth}), out)


@main.command()
@click.argument("path_file")
@click.option("--battery", default="all", show_default=True,
              type=click.Choice(["lineint", "doubint", "iterint", "genform", "all"]))
@click.option("--kmax", default=5, show_default=True, type=click.IntRange(1, 32))
@click.option("--krange", default=3, show_default=True, type=click.IntRange(1, 8))
@click.option("--mmax", default=3, show_default=True, type=click.IntRange(1, 4))
@click.option("--kbound", default=3, show_default=True, type=click.IntRange(1, 6))
@click.option("--tol", default=None, type=float, help="override engine tolerance")
@click.option("--out", default=None, metavar="FILE")
@pass_client
def check(client, path_file, battery, kmax, krange, mmax, kbound, tol, out):
    """Run identity batteries; the verdict never changes the exit code."""
    payload = {
        "path": _load_path(path_file),
        "battery": battery,
        "kmax": kmax,
        "krange": krange,
        "mmax": mmax,
        "kbound": kbound,
    }
    if tol is not None:
        payload["tol"] = tol
    reports = client.post("/check", payload)["reports"]
    _emit(reports[0] if len(reports) == 1 else reports, out)


@main.command()
@click.argument("path_file")
@click.option("--m", "order", default=None, type=click.IntRange(1, 6),
              help="number of rates (defaults to the count in --rates)")
@click.option("--rates", required=True, help="comma-separated complex rates, e.g. 6.28i,2+1i")
@click.option("--depth", default=14, show_default=True, type=click.IntRange(4, MAX_DEPTH))
@click.option("--word", default=None, help="one-based rate indices, e.g. 1,2")
@click.option("--out", default=None, metavar="FILE")
@pass_client
def develop(client, path_file, order, rates, depth, word, out):
    """Develop log-signature projections and report identity residuals."""
    rate_pairs = [_parse_complex(tok) for tok in rates.split(",") if tok]
    if order is not None and order != len(rate_pairs):
        raise click.UsageError(f"--m {order} disagrees with {len(rate_pairs)} rates")
    payload = {"path": _load_path(path_file), "rates": rate_pairs, "depth": depth}
    if word is not None:
        payload["word"] = [int(t) for t in word.split(",")]
    _emit(client.post("/develop", payload), out)


@main.command()
@click.argument("path_file")
@click.option("--point", default=None, help="query point, e.g. 0.5,0.5")
@click.option("--grid", default=None, help="bounds x0,x1,y0,y1")
@click.option("--res", default="50,50", show_default=True, help="grid resolution nx,ny")
@click.option("--out", default=None, metavar="FILE")
@pass_client
def winding(client, path_file, point, grid, res, out):
    """Winding number at a point, or an integer winding grid."""
    if (point is None) == (grid is None):
        raise click.UsageError("pass exactly one of --point or --grid")
    payload: dict = {"path": _load_path(path_file)}
    if point is not None:
        coords = _parse_floats(point)
        if len(coords) != 2:
            raise click.UsageError("--point needs two coordinates")
        payload["point"] = coords
    else:
        bounds = _parse_floats(grid)
        if len(bounds) != 4:
            raise click.UsageError("--grid needs x0,x1,y0,y1")
        nx, ny = (int(t) for t in res.split(","))
        payload["grid"] = {"bounds": bounds, "nx": nx, "ny": ny}
    _emit(client.post("/winding", payload), out)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
