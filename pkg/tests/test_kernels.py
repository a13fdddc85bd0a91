import numpy as np
import pytest

from conftest import unit_rows
from coreselect.kernels import _numpy

try:
    from coreselect.kernels import _core
except ImportError:
    _core = None

needs_ext = pytest.mark.skipif(_core is None, reason="compiled kernels not built")


@needs_ext
def test_backends_agree_on_assignment(rng):
    x = rng.normal(size=(300, 8))
    c = rng.normal(size=(7, 8))
    labels_py, d_py = _numpy.nearest_centroids(x, c)
    labels_cy, d_cy = _core.nearest_centroids(x, c)
    assert np.array_equal(labels_py, labels_cy)
    assert np.allclose(d_py, d_cy, atol=1e-9)


@needs_ext
def test_backends_agree_on_greedy(rng):
    x = unit_rows(rng, 400, 6).astype(np.float64)
    sel_py = _numpy.greedy_select(x, 17, 40)
    sel_cy = _core.greedy_select(x, 17, 40)
    assert np.array_equal(sel_py, sel_cy)


def test_assignment_tie_breaks_low():
    x = np.array([[0.0, 0.0]])
    c = np.array([[1.0, 0.0], [-1.0, 0.0]])
    for backend in filter(None, (_numpy, _core)):
        labels, d = backend.nearest_centroids(x, c)
        assert labels[0] == 0
        assert d[0] == pytest.approx(1.0)


def test_greedy_never_repeats_on_duplicates():
    x = np.tile(np.array([[1.0, 0.0]]), (5, 1))
    for backend in filter(None, (_numpy, _core)):
        sel = backend.greedy_select(x, 2, 5)
        assert list(sel) == [2, 0, 1, 3, 4]
