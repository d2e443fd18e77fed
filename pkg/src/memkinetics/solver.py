"""Trajectory producers: closed-form evaluators and the ABM oracle.

Every linear constant-pace problem handled here is written as the Cauchy
problem

    D^alpha Y - mu * D^beta Y = forcing + lam * t^p * Y,   Y^(k)(0) = Y_k,

and solved two independent ways: by the closed-form series built from the
Mittag-Leffler function family, and by an Adams-Bashforth-Moulton
predictor-corrector that knows nothing about those series.  Their
agreement is the package's primary correctness check.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .caputo import FractionalOrder
from .errors import DomainError, NonCommensurateError
from .specialfn import SeriesControl, fox_wright_psi11, mittag_leffler

log = logging.getLogger("memkinetics.solver")

__all__ = [
    "TrajectoryGrid",
    "Trajectory",
    "CauchyProblem",
    "analytic_growth",
    "analytic_power_price",
    "analytic_two_param",
    "analytic_fixed_assets",
    "analytic_fixed_assets_convolution",
    "analytic_solution",
    "solve_abm",
    "equation_residual",
    "empirical_convergence_order",
    "ConvergenceReport",
]


@dataclass(frozen=True)
class TrajectoryGrid:
    """Uniform grid t_j = j*h over [0, T] with h = T/N."""

    T: float
    N: int

    def __post_init__(self):
        if not (self.T > 0.0) or not math.isfinite(self.T):
            raise DomainError(f"horizon T must be > 0, got {self.T}")
        if self.N < 1:
            raise DomainError(f"step count N must be >= 1, got {self.N}")

    @property
    def h(self) -> float:
        return self.T / self.N

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.N + 1)


@dataclass(frozen=True)
class Trajectory:
    grid: TrajectoryGrid
    values: np.ndarray
    method: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.shape != (self.grid.N + 1,):
            raise DomainError("trajectory length must match its grid")


def _finished(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{what}: trajectory contains non-finite values")
    return values


@dataclass(frozen=True)
class CauchyProblem:
    """Orders, coefficients and initial data consumed by both solver routes.

    decay_coeff is the fixed-assets disposal coefficient B; when present it
    is folded into lam = -B so the ABM right-hand side reads
    forcing_const - B*Y.
    """

    ord: FractionalOrder
    initial_values: tuple
    lam: float = 0.0
    secondary_ord: FractionalOrder | None = None
    mu: float = 0.0
    price_exponent: float = 0.0
    forcing_const: float = 0.0
    decay_coeff: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "initial_values", tuple(float(v) for v in self.initial_values))
        if len(self.initial_values) != self.ord.n:
            raise DomainError(
                f"need exactly {self.ord.n} initial values for order {self.ord.alpha}, "
                f"got {len(self.initial_values)}"
            )
        if self.secondary_ord is not None and not (
            self.ord.alpha > self.secondary_ord.alpha > 0.0
        ):
            raise DomainError(
                "two-term problems require alpha > beta > 0, got "
                f"alpha={self.ord.alpha}, beta={self.secondary_ord.alpha}"
            )
        if self.price_exponent < 0.0:
            raise DomainError(f"price exponent must be >= 0, got {self.price_exponent}")
        if self.decay_coeff != 0.0 and self.lam != -self.decay_coeff:
            raise DomainError(
                "decay problems must carry lam = -decay_coeff "
                f"(got lam={self.lam}, decay_coeff={self.decay_coeff})"
            )


def _require(cond: bool, msg: str):
    if not cond:
        raise DomainError(msg)


# --------------------------------------------------------------------------
# Closed-form evaluators
# --------------------------------------------------------------------------


def analytic_growth(
    prob: CauchyProblem, grid: TrajectoryGrid, ctl: SeriesControl | None = None
) -> Trajectory:
    """Y(t) = sum_k Y_k t^k E_{alpha,k+1}(lam * t^alpha)."""
    _require(prob.secondary_ord is None, "analytic_growth: no secondary order allowed")
    _require(prob.price_exponent == 0.0, "analytic_growth: time-invariant coefficient only")
    _require(
        prob.forcing_const == 0.0 and prob.decay_coeff == 0.0,
        "analytic_growth: homogeneous problems only",
    )
    alpha = prob.ord.alpha
    values = np.empty(grid.N + 1)
    for j, t in enumerate(grid.times()):
        acc = 0.0
        for k, yk in enumerate(prob.initial_values):
            if yk != 0.0:
                acc += yk * t**k * mittag_leffler(alpha, k + 1.0, prob.lam * t**alpha, ctl)
        values[j] = acc
    return Trajectory(grid, _finished(values, "analytic_growth"), "analytic")


def analytic_power_price(
    prob: CauchyProblem, grid: TrajectoryGrid, ctl: SeriesControl | None = None
) -> Trajectory:
    """Y(t) = sum_k Y_k/k! t^k E^{KS}_{alpha, 1+p/alpha, (p+k)/alpha}(lam * t^(alpha+p))."""
    _require(prob.secondary_ord is None, "analytic_power_price: no secondary order allowed")
    _require(
        prob.forcing_const == 0.0 and prob.decay_coeff == 0.0,
        "analytic_power_price: homogeneous problems only",
    )
    from .specialfn import kilbas_saigo

    alpha = prob.ord.alpha
    p = prob.price_exponent
    values = np.empty(grid.N + 1)
    for j, t in enumerate(grid.times()):
        acc = 0.0
        for k, yk in enumerate(prob.initial_values):
            if yk != 0.0:
                acc += (
                    yk
                    / math.factorial(k)
                    * t**k
                    * kilbas_saigo(
                        alpha, 1.0 + p / alpha, (p + k) / alpha, prob.lam * t ** (alpha + p), ctl
                    )
                )
        values[j] = acc
    return Trajectory(grid, _finished(values, "analytic_power_price"), "analytic")


def _two_param_component(
    j: int,
    alpha: float,
    beta: float,
    mu: float,
    lam: float,
    t: float,
    ctl: SeriesControl,
    with_correction: bool,
) -> float:
    """Basis trajectory with unit j-th initial value for the two-term problem.

    sum_k lam^k t^(k*alpha+j)/k! Psi[(k+1,1);(alpha k+j+1, d)](mu t^d)
    - mu * sum_k lam^k t^(k*alpha+j+d)/k! Psi[(k+1,1);(alpha k+j+1+d, d)](mu t^d)

    with d = alpha - beta; the correction sum only applies while j <= ceil(beta)-1.
    """
    d = alpha - beta
    z = mu * t**d

    def outer(shift: float) -> float:
        acc = 0.0
        small = 0
        factor = t ** (j + shift)  # lam^k t^(k alpha + j + shift) / k!
        for k in range(ctl.max_terms):
            term = factor * fox_wright_psi11(k + 1.0, 1.0, alpha * k + j + 1.0 + shift, d, z, ctl)
            acc += term
            if k >= 4 and abs(term) < ctl.rtol * abs(acc):
                small += 1
                if small >= ctl.consecutive_small:
                    return acc
            else:
                small = 0
            factor *= lam * t**alpha / (k + 1.0)
        from .errors import ConvergenceError

        raise ConvergenceError("analytic_two_param: outer series did not converge")

    value = outer(0.0)
    if with_correction:
        value -= mu * outer(d)
    return value


def analytic_two_param(
    prob: CauchyProblem, grid: TrajectoryGrid, ctl: SeriesControl | None = None
) -> Trajectory:
    """Two-term memory solution Y(t) = sum_j Y_j * Y_j(t), Y_j built from Psi_{1,1}."""
    _require(prob.secondary_ord is not None, "analytic_two_param: secondary order required")
    ctl = ctl or SeriesControl()
    alpha = prob.ord.alpha
    beta = prob.secondary_ord.alpha
    n = prob.ord.n
    m = prob.secondary_ord.n
    values = np.empty(grid.N + 1)
    for i, t in enumerate(grid.times()):
        if t == 0.0:
            values[i] = prob.initial_values[0]
            continue
        acc = 0.0
        for j, yj in enumerate(prob.initial_values):
            if yj != 0.0:
                acc += yj * _two_param_component(
                    j, alpha, beta, prob.mu, prob.lam, t, ctl, with_correction=(j <= m - 1)
                )
        values[i] = acc
    return Trajectory(grid, _finished(values, "analytic_two_param"), "analytic")


def analytic_fixed_assets(
    prob: CauchyProblem, grid: TrajectoryGrid, ctl: SeriesControl | None = None
) -> Trajectory:
    """K(t) = (A/B)(1 - E_{alpha,1}(-B t^alpha)) + sum_k K_k t^k E_{alpha,k+1}(-B t^alpha)."""
    _require(prob.decay_coeff > 0.0, "analytic_fixed_assets: decay coefficient B must be > 0")
    _require(prob.secondary_ord is None, "analytic_fixed_assets: no secondary order allowed")
    alpha = prob.ord.alpha
    A, B = prob.forcing_const, prob.decay_coeff
    values = np.empty(grid.N + 1)
    for j, t in enumerate(grid.times()):
        z = -B * t**alpha
        acc = A / B * (1.0 - mittag_leffler(alpha, 1.0, z, ctl))
        for k, kk in enumerate(prob.initial_values):
            if kk != 0.0:
                acc += kk * t**k * mittag_leffler(alpha, k + 1.0, z, ctl)
        values[j] = acc
    return Trajectory(grid, _finished(values, "analytic_fixed_assets"), "analytic")


def analytic_fixed_assets_convolution(
    prob: CauchyProblem, grid: TrajectoryGrid, ctl: SeriesControl | None = None
) -> Trajectory:
    """Convolution form of the fixed-assets solution.

    A * integral_0^t (t-tau)^(alpha-1) E_{alpha,alpha}(-B (t-tau)^alpha) dtau
    + homogeneous terms.  The integrand depends on t - tau only, so the
    product-trapezoidal sum telescopes into running prefix sums; exists to
    confirm numerically that this form equals the closed form.
    """
    _require(prob.decay_coeff > 0.0, "analytic_fixed_assets_convolution: B must be > 0")
    _require(prob.secondary_ord is None, "analytic_fixed_assets_convolution: single order only")
    from .caputo import SampledFunction, power_kernel_cumulative

    alpha = prob.ord.alpha
    A, B = prob.forcing_const, prob.decay_coeff
    times = grid.times()
    kern = np.array([mittag_leffler(alpha, alpha, -B * t**alpha, ctl) for t in times])
    conv = power_kernel_cumulative(SampledFunction(h=grid.h, values=kern), alpha)
    values = A * conv
    for k, kk in enumerate(prob.initial_values):
        if kk != 0.0:
            values += kk * times**k * np.array(
                [mittag_leffler(alpha, k + 1.0, -B * t**alpha, ctl) for t in times]
            )
    return Trajectory(grid, _finished(values, "analytic_fixed_assets_convolution"), "analytic")


def analytic_solution(
    prob: CauchyProblem, grid: TrajectoryGrid, ctl: SeriesControl | None = None
) -> Trajectory:
    """Dispatch to the closed form matching the problem's shape."""
    if prob.secondary_ord is not None:
        return analytic_two_param(prob, grid, ctl)
    if prob.decay_coeff != 0.0 or prob.forcing_const != 0.0:
        return analytic_fixed_assets(prob, grid, ctl)
    if prob.price_exponent > 0.0:
        return analytic_power_price(prob, grid, ctl)
    return analytic_growth(prob, grid, ctl)


# --------------------------------------------------------------------------
# Numerical oracle
# --------------------------------------------------------------------------

_MAX_COMMON_DENOMINATOR = 100


def _commensurate_base(alpha: float, beta: float) -> tuple[int, int, int]:
    """(q, p1, p2) with alpha = p1/q, beta = p2/q, q <= 100."""
    fa = Fraction(alpha).limit_denominator(_MAX_COMMON_DENOMINATOR)
    fb = Fraction(beta).limit_denominator(_MAX_COMMON_DENOMINATOR)
    if abs(float(fa) - alpha) > 1e-9 or abs(float(fb) - beta) > 1e-9:
        raise NonCommensurateError(
            f"orders ({alpha}, {beta}) are not rational with denominator <= "
            f"{_MAX_COMMON_DENOMINATOR}"
        )
    q = math.lcm(fa.denominator, fb.denominator)
    if q > _MAX_COMMON_DENOMINATOR:
        raise NonCommensurateError(
            f"common denominator {q} of orders ({alpha}, {beta}) exceeds "
            f"{_MAX_COMMON_DENOMINATOR}"
        )
    return q, round(alpha * q), round(beta * q)


def solve_abm(prob: CauchyProblem, grid: TrajectoryGrid) -> Trajectory:
    """Predictor-corrector (PECE) solution of the problem on the grid.

    Single-term problems run the scalar kernel directly.  Two-term problems
    are reduced to a commensurate system of order-1/q equations
    (D^(1/q) x_i = x_{i+1} chains) solved with the same kernel arithmetic.
    Global error O(h^min(2, 1+alpha)) away from the first steps.
    """
    if prob.secondary_ord is None:
        y1 = prob.initial_values[1] if prob.ord.n == 2 else 0.0
        values = _kernels.abm_linear_scalar(
            prob.ord.alpha,
            prob.initial_values[0],
            y1,
            prob.ord.n,
            prob.lam,
            prob.price_exponent,
            prob.forcing_const,
            grid.h,
            grid.N,
        )
        return Trajectory(grid, _finished(values, "solve_abm"), "abm")

    q, p1, p2 = _commensurate_base(prob.ord.alpha, prob.secondary_ord.alpha)
    log.debug(
        "two-term reduction: alpha=%s beta=%s -> order 1/%d system of size %d",
        prob.ord.alpha,
        prob.secondary_ord.alpha,
        q,
        p1,
    )
    d = p1
    M = np.zeros((d, d))
    for i in range(d - 1):
        M[i, i + 1] = 1.0
    # top equation: D^(1/q) x_d = lam * x_1 + mu * x_(p2+1)
    M[d - 1, 0] = prob.lam
    M[d - 1, p2] += prob.mu
    x0 = np.zeros(d)
    for k, yk in enumerate(prob.initial_values):
        x0[k * q] = yk  # states at integer derivative levels carry the Y_k
    states = _kernels.abm_linear_system(1.0 / q, M, x0, grid.h, grid.N)
    return Trajectory(grid, _finished(states[:, 0], "solve_abm"), "abm")


def equation_residual(prob: CauchyProblem, traj: Trajectory) -> np.ndarray:
    """Residual of the defining equation along a trajectory, index 0 NaN.

    Applies the discrete Caputo operator(s) to the samples and subtracts
    the right-hand side; for an exact trajectory this is pure
    discretization error of the scheme.
    """
    from .caputo import SampledFunction, caputo_derivative_batch

    f = SampledFunction(h=traj.grid.h, values=traj.values)
    lhs = caputo_derivative_batch(f, prob.ord)
    if prob.secondary_ord is not None:
        lhs = lhs - prob.mu * caputo_derivative_batch(f, prob.secondary_ord)
    t = traj.grid.times()
    rhs = prob.forcing_const + prob.lam * t**prob.price_exponent * traj.values
    return lhs - rhs


@dataclass(frozen=True)
class ConvergenceReport:
    """Outcome of an empirical order measurement.

    order is None when every refinement is already at round-off level
    (the 'exact' case, e.g. a constant problem).
    """

    order: float | None
    errors: tuple  # ((N, max_error), ...) on the second half of [0, T]
    exact: bool


def empirical_convergence_order(
    prob: CauchyProblem,
    T: float,
    steps,
    ctl: SeriesControl | None = None,
) -> ConvergenceReport:
    """Least-squares slope of log(error) against log(h) over doubling grids.

    The error per grid is the max deviation from the closed form over
    t >= T/2: the scheme's first steps carry a known O(h^(2*alpha)) startup
    error that is not representative of its interior order.
    """
    steps = [int(s) for s in steps]
    if len(steps) < 3:
        raise DomainError("need at least 3 step counts")
    for a, b in zip(steps, steps[1:]):
        if b != 2 * a:
            raise DomainError(f"step counts must double, got {steps}")
    errors = []
    scale = 0.0
    for N in steps:
        grid = TrajectoryGrid(T, N)
        ref = analytic_solution(prob, grid, ctl)
        num = solve_abm(prob, grid)
        mask = grid.times() >= T / 2.0
        errors.append((N, float(np.max(np.abs(num.values - ref.values)[mask]))))
        scale = max(scale, float(np.max(np.abs(ref.values))))
    if all(err <= 1e-12 * max(scale, 1e-300) for _, err in errors):
        return ConvergenceReport(order=None, errors=tuple(errors), exact=True)
    hs = np.log([T / N for N, _ in errors])
    es = np.log([max(err, 1e-300) for _, err in errors])
    slope = float(np.polyfit(hs, es, 1)[0])
    return ConvergenceReport(order=slope, errors=tuple(errors), exact=False)
