"""Signatures, log-signatures and radius-of-convergence identity checks
for piecewise-linear paths."""

from .paths import (
    PathTime,
    PiecewisePath,
    brownian_sample,
    concat,
    conjugated_line,
    figure_eight,
    line,
    normalize,
    reverse,
    square_loop,
    tilde,
)
from .signatures import log_signature, roc_profile, signature, signature_interval
from .tensor import GradedTensor

__version__ = "0.1.0"

__all__ = [
    "GradedTensor",
    "PathTime",
    "PiecewisePath",
    "brownian_sample",
    "concat",
    "conjugated_line",
    "figure_eight",
    "line",
    "log_signature",
    "normalize",
    "reverse",
    "roc_profile",
    "signature",
    "signature_interval",
    "square_loop",
    "tilde",
]
