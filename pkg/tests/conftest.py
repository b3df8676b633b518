import numpy as np
import pytest

from sigroc import paths as P


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def figure8():
    return P.figure_eight()


@pytest.fixture
def square():
    return P.square_loop()


@pytest.fixture
def diagonal():
    return P.PiecewisePath([(0.0, 0.0), (1.0, 1.0)], name="diag")


@pytest.fixture
def conj_line():
    """One-segment conjugation of the unit x-step, vertical arc."""
    return P.conjugated_line(P.PiecewisePath([(0.0, 0.0), (0.0, 1.0)]))


@pytest.fixture
def conj_line_slanted():
    """Conjugated line whose development tail decays slowly enough to see."""
    return P.conjugated_line(P.PiecewisePath([(0.0, 0.0), (0.9, 2.4)]))


def random_path(rng, n_segments: int, d: int = 2, scale: float = 1.0) -> P.PiecewisePath:
    steps = rng.normal(size=(n_segments, d)) * scale
    verts = np.vstack([np.zeros((1, d)), np.cumsum(steps, axis=0)])
    return P.PiecewisePath(verts)


def random_normalized_path(rng, n_segments: int) -> P.PiecewisePath:
    while True:
        p = random_path(rng, n_segments)
        if np.linalg.norm(p.end - p.start) > 0.2:
            return P.normalize(p)
