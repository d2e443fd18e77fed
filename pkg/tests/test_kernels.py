"""Kernel backends: correctness of each and parity between them."""

import math

import numpy as np
import pytest

from memkinetics import _kernels

from conftest import max_rel_err


class TestScalarABM:
    def test_zero_rate_is_constant(self, kernel_backend):
        y = kernel_backend.abm_linear_scalar(0.7, 3.5, 0.0, 1, 0.0, 0.0, 0.0, 0.01, 100)
        assert np.all(y == 3.5)

    def test_classical_exponential(self, kernel_backend):
        y = kernel_backend.abm_linear_scalar(1.0, 100.0, 0.0, 1, 0.1, 0.0, 0.0, 1e-3, 1000)
        exact = 100.0 * np.exp(0.1 * np.linspace(0.0, 1.0, 1001))
        assert max_rel_err(exact, y) <= 1e-6

    def test_forcing_steady_state(self, kernel_backend):
        # D^1 y = 2 - 0.5 y: y(t) = 4 - 3 exp(-t/2).
        y = kernel_backend.abm_linear_scalar(1.0, 1.0, 0.0, 1, -0.5, 0.0, 2.0, 0.01, 2000)
        assert y[-1] == pytest.approx(4.0 - 3.0 * math.exp(-10.0), rel=1e-7)

    def test_overflow_raises(self, kernel_backend):
        with pytest.raises(OverflowError):
            kernel_backend.abm_linear_scalar(1.0, 1.0, 0.0, 1, 100.0, 0.0, 0.0, 0.1, 200)


class TestSystemABM:
    def test_scalar_embedding(self, kernel_backend):
        # 1x1 system must match the scalar kernel.
        M = np.array([[0.5]])
        xs = kernel_backend.abm_linear_system(0.8, M, np.array([1.0]), 1e-3, 500)
        ys = kernel_backend.abm_linear_scalar(0.8, 1.0, 0.0, 1, 0.5, 0.0, 0.0, 1e-3, 500)
        assert max_rel_err(ys, xs[:, 0]) <= 1e-12

    def test_chain_reconstructs_square_root_orders(self, kernel_backend):
        # D^(1/2) applied twice: x2 = D^(1/2) x1 and D^(1/2) x2 = lam x1
        # solves D^1 x1 = lam x1.
        lam = -0.3
        M = np.array([[0.0, 1.0], [lam, 0.0]])
        xs = kernel_backend.abm_linear_system(0.5, M, np.array([1.0, 0.0]), 1e-3, 1000)
        exact = np.exp(lam * np.linspace(0.0, 1.0, 1001))
        assert max_rel_err(exact, xs[:, 0]) <= 1e-3

    def test_overflow_raises(self, kernel_backend):
        M = np.array([[100.0]])
        with pytest.raises(OverflowError):
            kernel_backend.abm_linear_system(1.0, M, np.array([1.0]), 0.1, 200)


class TestL1Batch:
    def test_linear_exact(self, kernel_backend):
        t = np.linspace(0.0, 1.0, 501)
        d = kernel_backend.caputo_l1_batch(t, 0.5, t[1])
        exact = t**0.5 / math.gamma(1.5)
        assert np.isnan(d[0])
        assert max_rel_err(exact[1:], d[1:]) <= 1e-12


@pytest.mark.skipif(
    len(_kernels.available_backends()) < 2, reason="compiled kernels not built"
)
class TestBackendParity:
    def setup_method(self):
        self.cy = _kernels.get_backend("cython")
        self.py = _kernels.get_backend("python")

    @pytest.mark.parametrize(
        "args",
        [
            (0.5, 1.0, 0.0, 1, 0.5, 0.0, 0.0, 1e-3, 700),
            (0.8, 2.0, 0.0, 1, -0.4, 0.5, 0.0, 2e-3, 500),
            (1.5, 1.0, 0.25, 2, 0.3, 0.0, 0.0, 1e-3, 400),
            (0.8, 1.0, 0.0, 1, -0.5, 0.0, 2.0, 1e-3, 600),
        ],
    )
    def test_scalar(self, args):
        a = self.cy.abm_linear_scalar(*args)
        b = self.py.abm_linear_scalar(*args)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)

    def test_system(self):
        rng = np.random.default_rng(7)
        M = rng.normal(scale=0.3, size=(5, 5))
        x0 = rng.normal(size=5)
        a = self.cy.abm_linear_system(0.25, M, x0, 1e-3, 400)
        b = self.py.abm_linear_system(0.25, M, x0, 1e-3, 400)
        np.testing.assert_allclose(a, b, rtol=1e-11, atol=1e-13)

    def test_l1(self):
        t = np.linspace(0.0, 2.0, 801)
        v = np.exp(np.sin(t))
        a = self.cy.caputo_l1_batch(v, 0.65, t[1])
        b = self.py.caputo_l1_batch(v, 0.65, t[1])
        np.testing.assert_allclose(a[1:], b[1:], rtol=1e-12)

    def test_backend_names(self):
        assert self.cy.BACKEND == "cython"
        assert self.py.BACKEND == "python"
        assert _kernels.BACKEND in ("cython", "python")
