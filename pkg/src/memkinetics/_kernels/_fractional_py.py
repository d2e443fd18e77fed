"""Pure-Python (numpy) implementations of the O(N^2) history kernels.

Same contracts as the compiled module `_fractional_cy`; the package picks
one at import time.  The inner history sums are numpy dot products /
convolutions, so this fallback stays usable for desk-scale grids.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_OVERFLOW_LIMIT = 1e300


def _abm_weights(alpha: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Predictor (rectangle) and interior corrector (trapezoid) weights."""
    m = np.arange(0, N + 1, dtype=float)
    b = m**alpha - np.maximum(m - 1, 0) ** alpha
    c = (m + 1) ** (alpha + 1) + np.maximum(m - 1, 0) ** (alpha + 1) - 2 * m ** (alpha + 1)
    return b, c


def abm_linear_scalar(
    alpha: float,
    y0: float,
    y1: float,
    n: int,
    lam: float,
    power: float,
    forcing: float,
    h: float,
    N: int,
) -> np.ndarray:
    """PECE Adams-Bashforth-Moulton for D^alpha y = forcing + lam * t^power * y.

    One corrector pass, product-rectangle predictor, product-trapezoid
    corrector, starting values from the initial conditions only.  Returns
    the N+1 solution samples on the uniform grid of step h.
    """
    b, c = _abm_weights(alpha, N)
    ha1 = h**alpha / math.gamma(alpha + 1.0)
    ha2 = h**alpha / math.gamma(alpha + 2.0)
    y = np.empty(N + 1)
    f = np.empty(N + 1)
    y[0] = y0
    f[0] = forcing + lam * (0.0**power) * y0
    for j in range(1, N + 1):
        t = j * h
        tail = y0 + t * y1 if n == 2 else y0
        coeff = lam * t**power
        pred = tail + ha1 * float(np.dot(b[1 : j + 1], f[j - 1 :: -1]))
        a_j0 = (j - 1.0) ** (alpha + 1.0) - (j - 1.0 - alpha) * float(j) ** alpha
        hist = a_j0 * f[0]
        if j > 1:
            hist += float(np.dot(c[1:j], f[j - 1 : 0 : -1]))
        y[j] = tail + ha2 * (hist + forcing + coeff * pred)
        if abs(y[j]) > _OVERFLOW_LIMIT:
            raise OverflowError(f"abm_linear_scalar: |y| exceeded 1e300 at step {j}")
        f[j] = forcing + coeff * y[j]
    return y


def abm_linear_system(
    gamma: float, M: np.ndarray, x0: np.ndarray, h: float, N: int
) -> np.ndarray:
    """PECE Adams-Bashforth-Moulton for the linear system D^gamma x = M x.

    gamma is expected in (0, 1] (commensurate reductions only need that).
    Returns the (N+1, d) state history.
    """
    M = np.asarray(M, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    d = x0.shape[0]
    b, c = _abm_weights(gamma, N)
    ha1 = h**gamma / math.gamma(gamma + 1.0)
    ha2 = h**gamma / math.gamma(gamma + 2.0)
    x = np.empty((N + 1, d))
    f = np.empty((N + 1, d))
    x[0] = x0
    f[0] = M @ x0
    for j in range(1, N + 1):
        pred = x0 + ha1 * (b[1 : j + 1] @ f[j - 1 :: -1])
        a_j0 = (j - 1.0) ** (gamma + 1.0) - (j - 1.0 - gamma) * float(j) ** gamma
        hist = a_j0 * f[0]
        if j > 1:
            hist = hist + c[1:j] @ f[j - 1 : 0 : -1]
        x[j] = x0 + ha2 * (hist + M @ pred)
        if np.max(np.abs(x[j])) > _OVERFLOW_LIMIT:
            raise OverflowError(f"abm_linear_system: |x| exceeded 1e300 at step {j}")
        f[j] = M @ x[j]
    return x


def caputo_l1_batch(values: np.ndarray, alpha: float, h: float) -> np.ndarray:
    """L1 Caputo derivative (0 < alpha < 1) at every grid index j >= 1.

    Element 0 is NaN (the scheme needs at least one step of history).
    """
    values = np.asarray(values, dtype=float)
    N = values.shape[0] - 1
    k = np.arange(N, dtype=float)
    w = (k + 1) ** (1.0 - alpha) - k ** (1.0 - alpha)
    dv = np.diff(values)
    conv = np.convolve(w, dv)[:N]
    out = np.empty(N + 1)
    out[0] = np.nan
    out[1:] = conv * (h**-alpha / math.gamma(2.0 - alpha))
    return out
