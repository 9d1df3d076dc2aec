"""Both kernel backends must implement the same recursion, verified against
a test-local reference loop and against each other."""

import importlib
import os

import numpy as np
import pytest

from itsa import _kernels
from itsa._kernels import _pykernels

try:
    _ckernels = importlib.import_module("itsa._kernels._ckernels")
except ImportError:
    _ckernels = None

BACKENDS = [("python", _pykernels)] + (
    [("compiled", _ckernels)] if _ckernels is not None else []
)


def reference_recursion(innov, phi, theta, e0, a0):
    out = []
    e_prev, a_prev = e0, a0
    for a in innov:
        e_prev = phi * e_prev + a + theta * a_prev
        out.append(e_prev)
        a_prev = a
    return np.array(out)


@pytest.mark.parametrize("name,impl", BACKENDS)
class TestRecursion:
    def test_matches_reference(self, name, impl):
        rng = np.random.default_rng(8)
        innov = rng.normal(size=300)
        got = np.asarray(impl.arma_recursion(innov, 0.6, -0.25, 1.4, -0.3))
        np.testing.assert_allclose(
            got, reference_recursion(innov, 0.6, -0.25, 1.4, -0.3), rtol=1e-12
        )

    def test_zero_parameters_pass_through(self, name, impl):
        innov = np.arange(5, dtype=np.float64)
        np.testing.assert_array_equal(
            np.asarray(impl.arma_recursion(innov, 0.0, 0.0, 9.0, 9.0)), innov
        )

    def test_batch_equals_stacked_singles(self, name, impl):
        rng = np.random.default_rng(9)
        innov = rng.normal(size=(7, 40))
        e0 = rng.normal(size=7)
        a0 = rng.normal(size=7)
        batch = np.asarray(impl.arma_recursion_batch(innov.copy(), 0.5, 0.2, e0, a0))
        singles = np.stack(
            [
                np.asarray(impl.arma_recursion(innov[i].copy(), 0.5, 0.2, e0[i], a0[i]))
                for i in range(7)
            ]
        )
        np.testing.assert_allclose(batch, singles, rtol=1e-13)


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(10)
    innov = rng.normal(size=10_000)
    a = np.asarray(_pykernels.arma_recursion(innov, 0.7, 0.3, 0.5, -0.1))
    b = np.asarray(_ckernels.arma_recursion(innov, 0.7, 0.3, 0.5, -0.1))
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)

    innov2 = rng.normal(size=(20, 100))
    e0 = rng.normal(size=20)
    a0 = rng.normal(size=20)
    a2 = np.asarray(_pykernels.arma_recursion_batch(innov2, -0.4, 0.6, e0, a0))
    b2 = np.asarray(_ckernels.arma_recursion_batch(innov2, -0.4, 0.6, e0, a0))
    np.testing.assert_allclose(a2, b2, rtol=1e-12, atol=1e-12)


def test_active_backend_exposed():
    assert _kernels.BACKEND in ("compiled", "python")
    if os.environ.get("ITSA_PURE_PYTHON") == "1":
        assert _kernels.BACKEND == "python"
    elif _ckernels is not None:
        assert _kernels.BACKEND == "compiled"
