"""Discrete Caputo derivative and weakly singular fractional integral.

Operates on uniformly sampled functions.  The fractional derivative uses
the L1 scheme (piecewise-linear interpolation under the power-law kernel)
for orders in (0, 1); orders in (1, 2) apply L1 of order alpha-1 to a
second-order finite-difference first derivative; integer orders route to
the classical finite differences they reduce to.

Used to verify that analytic trajectories satisfy their defining equations
(residual checks) and to evaluate power-kernel convolutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, InsufficientSamplesError

__all__ = [
    "FractionalOrder",
    "SampledFunction",
    "caputo_derivative",
    "caputo_derivative_batch",
    "rl_fractional_integral",
    "power_kernel_cumulative",
]


@dataclass(frozen=True)
class FractionalOrder:
    """Differentiation order alpha with its initial-condition count n.

    n - 1 < alpha <= n; integer alpha keeps n = alpha so the operator is the
    classical derivative of that order.
    """

    alpha: float
    n: int

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0) or not math.isfinite(self.alpha):
            raise DomainError(f"order alpha must lie in (0, 2], got {self.alpha}")
        if not (self.n - 1 < self.alpha <= self.n):
            raise DomainError(
                f"n must satisfy n-1 < alpha <= n, got alpha={self.alpha}, n={self.n}"
            )

    @classmethod
    def from_alpha(cls, alpha: float) -> "FractionalOrder":
        return cls(alpha=alpha, n=int(math.ceil(alpha)) if alpha > 0 else 0)

    @property
    def is_integer(self) -> bool:
        return self.alpha == self.n


@dataclass(frozen=True)
class SampledFunction:
    """Samples values[j] = f(t0 + j*h) on a uniform grid (t0 = 0 here)."""

    h: float
    values: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if not (self.h > 0.0):
            raise DomainError(f"step h must be > 0, got {self.h}")
        if self.values.ndim != 1 or self.values.shape[0] < 2:
            raise InsufficientSamplesError("need at least 2 samples")

    def __len__(self) -> int:
        return self.values.shape[0]


def _l1_weights(alpha: float, j: int) -> np.ndarray:
    k = np.arange(j, dtype=float)
    return (k + 1) ** (1.0 - alpha) - k ** (1.0 - alpha)


def _l1_at(values: np.ndarray, alpha: float, h: float, j: int) -> float:
    w = _l1_weights(alpha, j)
    dv = np.diff(values[: j + 1])
    return float(np.dot(w, dv[::-1])) * h**-alpha / math.gamma(2.0 - alpha)


def _first_derivative_samples(values: np.ndarray, h: float) -> np.ndarray:
    """Second-order finite-difference first derivative on the whole grid."""
    n = values.shape[0]
    if n < 3:
        raise InsufficientSamplesError("need at least 3 samples for this order")
    g = np.empty(n)
    g[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    g[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
    g[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return g


def _classical_derivative(values: np.ndarray, h: float, order: int, j: int) -> float:
    n = values.shape[0] - 1
    if order == 1:
        if j == 0:
            return float(-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
        if j == n:
            return float(3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h)
        return float(values[j + 1] - values[j - 1]) / (2.0 * h)
    if order == 2:
        if j == 0:
            j = 1
        elif j == n:
            j = n - 1
        return float(values[j + 1] - 2.0 * values[j] + values[j - 1]) / (h * h)
    raise DomainError(f"classical order {order} not supported")


def caputo_derivative(f: SampledFunction, ord: FractionalOrder, at_index: int) -> float:
    """Caputo derivative of order ord.alpha at grid index at_index.

    L1 scheme for 0 < alpha < 1 (error O(h^{2-alpha}) for smooth samples);
    for 1 < alpha < 2, L1 of order alpha-1 applied to a centered first
    derivative (O(h^{3-alpha})); integer alpha falls back to classical
    centered differences.
    """
    n_samples = len(f)
    if not (1 <= at_index <= n_samples - 1):
        raise InsufficientSamplesError(
            f"at_index must lie in [1, {n_samples - 1}], got {at_index}"
        )
    if n_samples < ord.n + 1:
        raise InsufficientSamplesError(
            f"need at least {ord.n + 1} samples for order {ord.alpha}"
        )
    if ord.is_integer:
        return _classical_derivative(f.values, f.h, ord.n, at_index)
    if ord.alpha < 1.0:
        return _l1_at(f.values, ord.alpha, f.h, at_index)
    g = _first_derivative_samples(f.values, f.h)
    return _l1_at(g, ord.alpha - 1.0, f.h, at_index)


def caputo_derivative_batch(f: SampledFunction, ord: FractionalOrder) -> np.ndarray:
    """Caputo derivative at every admissible index; index 0 is NaN."""
    if ord.is_integer:
        out = np.empty(len(f))
        out[0] = np.nan
        for j in range(1, len(f)):
            out[j] = _classical_derivative(f.values, f.h, ord.n, j)
        return out
    if ord.alpha < 1.0:
        return _kernels.caputo_l1_batch(f.values, ord.alpha, f.h)
    g = _first_derivative_samples(f.values, f.h)
    return _kernels.caputo_l1_batch(g, ord.alpha - 1.0, f.h)


def _product_trapezoid_weights(alpha: float, j: int) -> np.ndarray:
    """Weights W s.t. integral_0^{t_j} (t_j - tau)^(alpha-1) g(tau) dtau
    ~= h^alpha/(alpha*(alpha+1)) * sum_k W[k] g[k], exact for piecewise-
    linear g."""
    w = np.empty(j + 1)
    w[0] = (j - 1.0) ** (alpha + 1.0) - (j - 1.0 - alpha) * float(j) ** alpha
    k = np.arange(1, j, dtype=float)
    w[1:j] = (j - k + 1.0) ** (alpha + 1.0) + (j - k - 1.0) ** (alpha + 1.0) - 2.0 * (
        j - k
    ) ** (alpha + 1.0)
    w[j] = 1.0
    return w


def rl_fractional_integral(f: SampledFunction, alpha: float, at_index: int) -> float:
    """Product-trapezoidal value of integral_0^{t_j} (t_j-tau)^(alpha-1) f(tau) dtau.

    The power-law weight is handled exactly; f is interpolated linearly on
    each cell, giving O(h^2) error for smooth f.
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if not (1 <= at_index <= len(f) - 1):
        raise InsufficientSamplesError(
            f"at_index must lie in [1, {len(f) - 1}], got {at_index}"
        )
    w = _product_trapezoid_weights(alpha, at_index)
    pref = f.h**alpha / (alpha * (alpha + 1.0))
    return pref * float(np.dot(w, f.values[: at_index + 1]))


def power_kernel_cumulative(f: SampledFunction, alpha: float) -> np.ndarray:
    """integral_0^{t_j} xi^(alpha-1) f(xi) dxi for every j, same quadrature.

    Equivalent to rl_fractional_integral fed with time-reversed samples at
    each index (substituting xi = t_j - tau), which is how convolutions
    whose integrand depends on t - tau only are evaluated; that structure
    makes the interior weights independent of j, so the whole batch
    telescopes into running prefix sums, O(N) total.
    """
    if not (alpha > 0.0) or not math.isfinite(alpha):
        raise DomainError(f"alpha must be > 0, got {alpha}")
    g = f.values
    N = g.shape[0] - 1
    pref = f.h**alpha / (alpha * (alpha + 1.0))
    out = np.empty(N + 1)
    out[0] = 0.0
    interior = 0.0  # sum_{m=1}^{j-1} c_m g[m], c_m the interior weight
    for j in range(1, N + 1):
        if j > 1:
            m = j - 1.0
            interior += (
                (m + 1.0) ** (alpha + 1.0) + (m - 1.0) ** (alpha + 1.0) - 2.0 * m ** (alpha + 1.0)
            ) * g[j - 1]
        a_j0 = (j - 1.0) ** (alpha + 1.0) - (j - 1.0 - alpha) * float(j) ** alpha
        out[j] = pref * (a_j0 * g[j] + interior + g[0])
    return out
