"""Request/response models for the HTTP service.

Complex numbers cross the wire as [re, im] pairs; tensor dumps are
per-level flat coefficient arrays in the little-endian word-index
convention of the core package.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

ComplexPair = tuple[float, float]

# user-facing truncation cap for two-letter dumps (the library itself
# allows a little more for internal convergence studies)
MAX_DEPTH = 18


class PathModel(BaseModel):
    dimension: int = Field(ge=1, le=8)
    vertices: list[list[float]] = Field(min_length=1)
    name: Optional[str] = None

    @model_validator(mode="after")
    def _check_vertices(self):
        for v in self.vertices:
            if len(v) != self.dimension:
                raise ValueError(f"vertex {v} does not have {self.dimension} coordinates")
        return self

    @classmethod
    def from_path(cls, p) -> "PathModel":
        return cls(
            dimension=p.dimension,
            vertices=[[float(c.real) for c in v] for v in p.vertices],
            name=p.name,
        )

    def to_path(self):
        from ..paths import PiecewisePath

        return PiecewisePath(self.vertices, name=self.name)


class GenerateRequest(BaseModel):
    name: Literal["line", "square", "figure8", "brownian"]
    v: Optional[list[float]] = None
    steps: int = Field(default=64, ge=1)
    seed: int = 0
    dimension: int = Field(default=2, ge=1, le=8)


class TensorRequest(BaseModel):
    path: PathModel
    depth: int = Field(ge=0, le=MAX_DEPTH)


class TensorDump(BaseModel):
    dimension: int
    depth: int
    levels: list[list[ComplexPair]]

    @classmethod
    def from_tensor(cls, x) -> "TensorDump":
        return cls(
            dimension=x.d,
            depth=x.depth,
            levels=[[(float(c.real), float(c.imag)) for c in lv] for lv in x.levels],
        )


class RocRequest(BaseModel):
    path: PathModel
    depth: int = Field(default=12, ge=6, le=MAX_DEPTH)


class RocResponse(BaseModel):
    norms: list[float]
    r: list[float]
    slope: Optional[float]
    window: tuple[int, int]
    verdict: str


class CheckRequest(BaseModel):
    path: PathModel
    battery: Literal["lineint", "doubint", "iterint", "genform", "all"] = "all"
    kmax: int = Field(default=5, ge=1, le=32)
    krange: int = Field(default=3, ge=1, le=8)
    mmax: int = Field(default=3, ge=1, le=4)
    kbound: int = Field(default=3, ge=1, le=6)
    tol: Optional[float] = Field(default=None, gt=0)


class ReportRowModel(BaseModel):
    id: str
    params: dict
    residual: float


class ReportModel(BaseModel):
    path: str
    battery: str
    rows: list[ReportRowModel]
    verdict: str
    engine: dict


class CheckResponse(BaseModel):
    reports: list[ReportModel]


class DevelopRequest(BaseModel):
    path: PathModel
    rates: list[ComplexPair] = Field(min_length=1, max_length=6)
    depth: int = Field(default=14, ge=4, le=MAX_DEPTH)
    word: Optional[list[int]] = None

    @field_validator("word")
    @classmethod
    def _word_letters(cls, w, info):
        if w is not None and any(i < 1 for i in w):
            raise ValueError("word letters are one-based rate indices")
        return w


class DevelopRow(BaseModel):
    id: str
    params: dict
    residual: float
    tail: float


class DevelopResponse(BaseModel):
    rows: list[DevelopRow]
    depth: int


class GridSpec(BaseModel):
    bounds: tuple[float, float, float, float]
    nx: int = Field(default=50, ge=2, le=2000)
    ny: int = Field(default=50, ge=2, le=2000)


class WindingRequest(BaseModel):
    path: PathModel
    point: Optional[tuple[float, float]] = None
    grid: Optional[GridSpec] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.point is None) == (self.grid is None):
            raise ValueError("pass exactly one of point or grid")
        return self


class WindingValue(BaseModel):
    value: int


class WindingGridModel(BaseModel):
    bounds: list[float]
    nx: int
    ny: int
    values: list[list[Optional[int]]]
