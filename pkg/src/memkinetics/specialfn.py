"""Mittag-Leffler family special functions.

Evaluates the three series kernels that the closed-form trajectories are
built from:

* two-parameter Mittag-Leffler  E_{a,b}(z)  = sum_k z^k / Gamma(a*k + b)
* Kilbas-Saigo                  E_{a,b,c}(z) = sum_k A_k z^k  with
  A_0 = 1, A_{k+1} = A_k * Gamma(a*(b*k+c)+1) / Gamma(a*(b*k+c+1)+1)
* Fox-Wright Psi_{1,1}          sum_k Gamma(au*k + a)/Gamma(bl*k + b) * z^k/k!

All three are computed by direct summation with compensated (Neumaier)
accumulation.  Alternating arguments can cancel catastrophically in double
precision (the summation condition number Sum|t_k| / |Sum t_k| reaches 1e12
already for E_{1/2,1}(-5)), so every evaluation tracks its own condition
number and escalates: first to the negative-axis algebraic asymptotics of
the Mittag-Leffler function when their error bound is good enough, then to
an arbitrary-precision re-summation of the same series via mpmath.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass

import mpmath as mp

from .errors import ConvergenceError, DomainError, PoleError

log = logging.getLogger("memkinetics.specialfn")

__all__ = [
    "SeriesControl",
    "KilbasSaigoParams",
    "FoxWrightParams",
    "ln_gamma",
    "reciprocal_gamma",
    "mittag_leffler",
    "kilbas_saigo",
    "fox_wright_psi11",
]

# Largest admissible exp() argument for E_{a,b}: |z| <= ML_ARG_CAP**a keeps
# z**(1/a) <= ML_ARG_CAP and the function value inside double range.
ML_ARG_CAP = 700.0

_MACHINE_EPS = 2.2204460492503131e-16


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy shared by every infinite-series evaluation.

    rtol              relative tolerance on the returned value
    max_terms         hard cap on the number of summed terms
    consecutive_small successive below-tolerance terms required to stop
                      (Mittag-Leffler terms are not monotone for
                      non-integer order, so one small term is not a safe
                      stopping signal)
    """

    rtol: float = 1e-12
    max_terms: int = 10_000
    consecutive_small: int = 3

    def __post_init__(self):
        if not (0.0 < self.rtol < 1.0):
            raise DomainError(f"rtol must lie in (0, 1), got {self.rtol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if self.consecutive_small < 1:
            raise DomainError(
                f"consecutive_small must be >= 1, got {self.consecutive_small}"
            )


_DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class KilbasSaigoParams:
    """Parameters (alpha, b, c) of the Kilbas-Saigo function."""

    alpha: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.alpha > 0.0) or not math.isfinite(self.alpha):
            raise DomainError(f"Kilbas-Saigo alpha must be > 0, got {self.alpha}")
        if not (math.isfinite(self.b) and math.isfinite(self.c)):
            raise DomainError("Kilbas-Saigo b, c must be finite")


@dataclass(frozen=True)
class FoxWrightParams:
    """Parameters of Psi_{1,1} with upper pair (a, alpha_u), lower (b, beta_l)."""

    a: float
    alpha_u: float
    b: float
    beta_l: float

    def __post_init__(self):
        if self.alpha_u < 0.0:
            raise DomainError(f"upper weight alpha_u must be >= 0, got {self.alpha_u}")
        # Entire-function regime; outside it the series has a finite or zero
        # radius and this evaluator does not support it.
        if not (self.beta_l - self.alpha_u + 1.0 > 0.0):
            raise DomainError(
                "Fox-Wright convergence requires beta_l - alpha_u + 1 > 0, "
                f"got beta_l={self.beta_l}, alpha_u={self.alpha_u}"
            )
        for name in ("a", "b"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"Fox-Wright parameter {name} must be finite")


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0.5 and abs(x - round(x)) <= 1e-12 * max(1.0, abs(x))


def ln_gamma(x: float) -> tuple[float, int]:
    """Return (ln|Gamma(x)|, sign of Gamma(x)).

    Negative arguments go through the reflection formula (inside the stdlib
    lgamma); the sign follows the pole parity of Gamma on the negative axis.
    """
    if _is_nonpositive_int(x):
        raise PoleError(f"Gamma pole at x = {x}")
    if x > 0.0:
        return math.lgamma(x), 1
    sign = -1 if math.floor(x) % 2 else 1
    return math.lgamma(x), sign


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x), continued by 0 at the poles x = 0, -1, -2, ..."""
    if _is_nonpositive_int(x):
        return 0.0
    ln, sign = ln_gamma(x)
    if ln > 709.0:  # 1/Gamma underflows to 0 long before overflow matters
        return 0.0
    return sign * math.exp(-ln)


# --------------------------------------------------------------------------
# Compensated summation with the shared stopping rule
# --------------------------------------------------------------------------


class _NeumaierSum:
    __slots__ = ("s", "comp", "abs_sum")

    def __init__(self):
        self.s = 0.0
        self.comp = 0.0
        self.abs_sum = 0.0

    def add(self, t: float):
        self.abs_sum += abs(t)
        tmp = self.s + t
        if abs(self.s) >= abs(t):
            self.comp += (self.s - tmp) + t
        else:
            self.comp += (t - tmp) + self.s
        self.s = tmp

    @property
    def value(self) -> float:
        return self.s + self.comp


def _sum_series(terms, ctl: SeriesControl, what: str) -> tuple[float, float, float]:
    """Sum a stream of (term, error_bound) pairs under the stopping rule.

    Stops after ctl.consecutive_small successive terms with
    |term| < rtol * |partial sum| once at least 5 terms (k >= 4) are in.
    Returns (value, abs_sum, err_bound).  A stream that ends by itself
    (a truncating coefficient recursion) counts as exactly converged.
    The error bound accumulates each term's own rounding bound, so it
    tracks the true loss even when the exponents fed to exp() are large.
    """
    acc = _NeumaierSum()
    err = 0.0
    small = 0
    prev_mag = math.inf
    for k, (t, e) in enumerate(terms):
        if k >= ctl.max_terms:
            raise ConvergenceError(
                f"{what}: no convergence within {ctl.max_terms} terms"
            )
        acc.add(t)
        err += e
        mag = abs(t)
        if k >= 4 and mag < ctl.rtol * abs(acc.value):
            small += 1
            # The consecutive-small trigger alone can leave a slowly
            # decaying geometric tail bigger than rtol*|value|; demand the
            # tail bound too before stopping.
            ratio = min(mag / prev_mag, 0.995) if prev_mag > 0.0 else 0.0
            tail = mag * ratio / (1.0 - ratio)
            if small >= ctl.consecutive_small and tail <= 0.25 * ctl.rtol * abs(acc.value):
                break
        else:
            small = 0
        if mag > 0.0:
            prev_mag = mag
    return acc.value, acc.abs_sum, err


def _needs_escalation(value: float, err_bound: float, rtol: float) -> bool:
    """True when the double-precision sum cannot guarantee 0.25*rtol."""
    if value == 0.0:
        return err_bound != 0.0
    return err_bound > 0.25 * rtol * abs(value)


# Escalated evaluations serialize on one lock: mpmath's working precision
# is process-global and the coefficient caches grow in place.  The
# double-precision fast path never takes it.
_MP_LOCK = threading.Lock()


def _mp_escalated_sum(term_fn, ctl: SeriesControl, abs_sum_dbl: float, what: str) -> float:
    """Re-sum a series with mpmath, raising precision until 0.25*rtol holds.

    ``term_fn(k, dps)`` returns the k-th term as an mpf at the given
    working precision (callers cache their coefficient tables per dps).
    """
    # First guess straight from the double-precision condition estimate.
    dps = 30
    if abs_sum_dbl > 0.0:
        dps += max(0, int(math.log10(abs_sum_dbl)) + 5)
    log.debug("%s: escalating to %d-digit summation", what, dps)
    with _MP_LOCK:
        return _mp_sum_locked(term_fn, ctl, dps, what)


def _mp_sum_locked(term_fn, ctl: SeriesControl, dps: int, what: str) -> float:
    for _ in range(6):
        with mp.workdps(dps):
            acc = mp.mpf(0)
            abs_acc = mp.mpf(0)
            floor = mp.mpf(10) ** (2 - dps)
            small = 0
            prev_mag = mp.inf
            for k in range(ctl.max_terms + 1):
                if k == ctl.max_terms:
                    raise ConvergenceError(
                        f"{what}: no convergence within {ctl.max_terms} terms"
                    )
                t = term_fn(k, dps)
                acc += t
                abs_acc += abs(t)
                mag = abs(t)
                if k >= 4 and mag < floor * abs_acc:
                    small += 1
                    ratio = min(mag / prev_mag, mp.mpf("0.995")) if prev_mag > 0 else mp.mpf(0)
                    tail = mag * ratio / (1 - ratio)
                    if small >= ctl.consecutive_small and tail <= floor * abs_acc:
                        break
                else:
                    small = 0
                if mag > 0:
                    prev_mag = mag
            if acc != 0 and abs_acc * mp.mpf(10) ** (3 - dps) <= 0.25 * ctl.rtol * abs(acc):
                return float(acc)
            lost = mp.log10(abs_acc / abs(acc)) if acc != 0 else dps
        dps += int(lost) + 15
    raise ConvergenceError(f"{what}: precision escalation failed to settle")


# --------------------------------------------------------------------------
# Mittag-Leffler
# --------------------------------------------------------------------------


def _ml_terms(alpha: float, beta: float, z: float):
    t0 = reciprocal_gamma(beta)
    yield t0, 4.0 * _MACHINE_EPS * abs(t0)
    ln_az = math.log(abs(z))
    k = 1
    while True:
        x = alpha * k + beta
        if _is_nonpositive_int(x):
            yield 0.0, 0.0
        else:
            ln, sign = ln_gamma(x)
            if z < 0.0 and k % 2:
                sign = -sign
            e = k * ln_az - ln
            if e > 709.0:
                raise DomainError("mittag_leffler: series term overflows")
            t = sign * math.exp(e)
            yield t, (4.0 + abs(k * ln_az) + abs(ln)) * _MACHINE_EPS * abs(t)
        k += 1


class _MpMLCoeffs:
    """Per-(alpha, beta, dps) cache of 1/Gamma(alpha*k + beta) as mpf."""

    def __init__(self):
        self._store: dict[tuple[float, float, int], list] = {}

    def term(self, alpha: float, beta: float, z: float, k: int, dps: int):
        key = (alpha, beta, dps)
        coeffs = self._store.setdefault(key, [])
        while len(coeffs) <= k:
            i = len(coeffs)
            coeffs.append(mp.rgamma(mp.mpf(alpha) * i + beta))
        return coeffs[k] * mp.mpf(z) ** k


_ML_MP_CACHE = _MpMLCoeffs()


def _ml_asymptotic_negative(alpha: float, beta: float, z: float):
    """Algebraic large-|z| expansion on the negative axis, with error bound.

    E_{a,b}(z) ~ -sum_{k>=1} z^{-k} / Gamma(b - a*k) for z -> -inf,
    truncated by the smallest-term rule.  The bound adds the magnitude of
    the leading oscillatory exponential, which is not exponentially
    negligible for 1 < a < 2 at moderate |z|.  Returns
    (value, abs_error_bound).
    """
    x = -z
    lnx = math.log(x)
    acc = _NeumaierSum()
    ln_prev = math.inf
    trunc = None
    zero_run = 0
    # Gamma poles sit 1/alpha apart in k; a longer run of vanishing terms
    # means the expansion terminated exactly (integer alpha).
    zero_run_cap = int(1.0 / alpha) + 2
    k = 1
    while k <= 400:
        arg = beta - alpha * k
        if _is_nonpositive_int(arg):
            zero_run += 1
            if zero_run >= zero_run_cap:
                trunc = 0.0
                break
            k += 1
            continue
        zero_run = 0
        ln_g, s_g = ln_gamma(arg)
        ln_mag = -k * lnx - ln_g
        if ln_mag >= ln_prev:
            trunc = math.exp(min(ln_mag, 709.0))
            break
        if ln_mag < -700.0:
            trunc = math.exp(ln_mag)
            break
        sign = -s_g * (-1 if k % 2 else 1)
        acc.add(sign * math.exp(ln_mag))
        ln_prev = ln_mag
        k += 1
    if trunc is None:
        trunc = math.exp(ln_prev) if math.isfinite(ln_prev) else 0.0
    cosf = math.cos(math.pi / alpha) if alpha >= 1.0 else -1.0
    ln_osc = math.log(2.0 / alpha) + (1.0 - beta) / alpha * lnx + cosf * x ** (1.0 / alpha)
    osc = math.exp(ln_osc) if ln_osc < 709.0 else math.inf
    return acc.value, trunc + osc


def mittag_leffler(
    alpha: float, beta: float, z: float, ctl: SeriesControl | None = None
) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.

    Supported domain: 0 < alpha <= 2, |z| <= 700**alpha (overflow guard).
    Relative accuracy tracks ctl.rtol; evaluations whose plain double
    summation would lose more than that escalate automatically (see module
    docstring).
    """
    ctl = ctl or _DEFAULT_CONTROL
    if not (0.0 < alpha <= 2.0) or not math.isfinite(alpha):
        raise DomainError(f"mittag_leffler: alpha must lie in (0, 2], got {alpha}")
    if not math.isfinite(beta):
        raise DomainError(f"mittag_leffler: beta must be finite, got {beta}")
    if not math.isfinite(z) or abs(z) > ML_ARG_CAP**alpha:
        raise DomainError(
            f"mittag_leffler: |z| exceeds overflow guard {ML_ARG_CAP}**alpha, got {z}"
        )
    if z == 0.0:
        return reciprocal_gamma(beta)

    value, abs_sum, err = _sum_series(_ml_terms(alpha, beta, z), ctl, "mittag_leffler")
    if not _needs_escalation(value, err, ctl.rtol):
        return value

    if z < 0.0:
        asym, bound = _ml_asymptotic_negative(alpha, beta, z)
        if bound <= 0.25 * ctl.rtol * abs(asym):
            return asym

    return _mp_escalated_sum(
        lambda k, dps: _ML_MP_CACHE.term(alpha, beta, z, k, dps),
        ctl,
        abs_sum,
        "mittag_leffler",
    )


# --------------------------------------------------------------------------
# Kilbas-Saigo
# --------------------------------------------------------------------------


def _ks_ratio_args(alpha: float, b: float, c: float, j: int) -> tuple[float, float]:
    return alpha * (b * j + c) + 1.0, alpha * (b * j + c + 1.0) + 1.0


def _ks_terms(p: KilbasSaigoParams, z: float):
    """Terms A_k z^k; ends (finite polynomial) on a denominator Gamma pole."""
    yield 1.0, 0.0
    ln_az = math.log(abs(z))
    ln_a = 0.0
    ln_a_err = 0.0  # accumulated rounding of the log-coefficient recursion
    sign_a = 1
    j = 0
    while True:
        xn, xd = _ks_ratio_args(p.alpha, p.b, p.c, j)
        if _is_nonpositive_int(xn):
            raise PoleError(
                f"kilbas_saigo: numerator Gamma pole at argument {xn} (step {j})"
            )
        if _is_nonpositive_int(xd):
            return  # zero coefficient: every later term vanishes
        ln_n, s_n = ln_gamma(xn)
        ln_d, s_d = ln_gamma(xd)
        ln_a += ln_n - ln_d
        ln_a_err += (abs(ln_n) + abs(ln_d) + 2.0) * _MACHINE_EPS
        sign_a *= s_n * s_d
        j += 1
        sign = sign_a * (-1 if (z < 0.0 and j % 2) else 1)
        e = ln_a + j * ln_az
        if e > 709.0:
            raise DomainError("kilbas_saigo: series term overflows")
        t = sign * math.exp(e)
        yield t, (4.0 * _MACHINE_EPS + ln_a_err + abs(j * ln_az) * _MACHINE_EPS) * abs(t)


class _MpKSCoeffs:
    """Per-(params, dps) cache of Kilbas-Saigo coefficients A_k as mpf."""

    def __init__(self):
        self._store: dict[tuple, list] = {}

    def term(self, p: KilbasSaigoParams, z: float, k: int, dps: int):
        key = (p.alpha, p.b, p.c, dps)
        coeffs = self._store.setdefault(key, [mp.mpf(1)])
        while len(coeffs) <= k:
            j = len(coeffs) - 1
            # Arguments in exact mpf arithmetic: the double-rounded
            # alpha*(b*j+c)+1 would skew identities once a cancelling sum
            # amplifies the argument error.
            a, b, c = mp.mpf(p.alpha), mp.mpf(p.b), mp.mpf(p.c)
            xn_f, xd_f = _ks_ratio_args(p.alpha, p.b, p.c, j)
            if _is_nonpositive_int(xn_f):
                raise PoleError(
                    f"kilbas_saigo: numerator Gamma pole at argument {xn_f} (step {j})"
                )
            if _is_nonpositive_int(xd_f):
                coeffs.append(mp.mpf(0))
            else:
                coeffs.append(
                    coeffs[-1]
                    * mp.gamma(a * (b * j + c) + 1)
                    * mp.rgamma(a * (b * j + c + 1) + 1)
                )
        return coeffs[k] * mp.mpf(z) ** k


_KS_MP_CACHE = _MpKSCoeffs()


def kilbas_saigo(
    alpha: float, b: float, c: float, z: float, ctl: SeriesControl | None = None
) -> float:
    """Kilbas-Saigo generalized Mittag-Leffler function E_{alpha,b,c}(z).

    The coefficient recursion runs over the product index j = 0..k-1:
    A_k = prod_j Gamma(alpha*(b*j+c)+1) / Gamma(alpha*(b*j+c+1)+1), the
    form that reproduces k! E_{alpha,k+1} at b = 1, c = k/alpha.  A pole in
    a denominator Gamma truncates the series to a polynomial; a pole in a
    numerator raises PoleError.
    """
    ctl = ctl or _DEFAULT_CONTROL
    p = KilbasSaigoParams(alpha, b, c)
    if not math.isfinite(z):
        raise DomainError(f"kilbas_saigo: z must be finite, got {z}")
    if z == 0.0:
        return 1.0

    value, abs_sum, err = _sum_series(_ks_terms(p, z), ctl, "kilbas_saigo")
    if not _needs_escalation(value, err, ctl.rtol):
        return value
    return _mp_escalated_sum(
        lambda k, dps: _KS_MP_CACHE.term(p, z, k, dps), ctl, abs_sum, "kilbas_saigo"
    )


# --------------------------------------------------------------------------
# Fox-Wright Psi_{1,1}
# --------------------------------------------------------------------------


def _fw_terms(p: FoxWrightParams, z: float):
    ln_az = math.log(abs(z)) if z != 0.0 else 0.0
    k = 0
    while True:
        xn = p.alpha_u * k + p.a
        xd = p.beta_l * k + p.b
        if _is_nonpositive_int(xn):
            raise PoleError(
                f"fox_wright_psi11: numerator Gamma pole at argument {xn} (k={k})"
            )
        if _is_nonpositive_int(xd):
            yield 0.0, 0.0
        else:
            ln_n, s_n = ln_gamma(xn)
            ln_d, s_d = ln_gamma(xd)
            ln_f = math.lgamma(k + 1.0)
            sign = s_n * s_d * (-1 if (z < 0.0 and k % 2) else 1)
            e = ln_n - ln_d - ln_f + k * ln_az
            if e > 709.0:
                raise DomainError("fox_wright_psi11: series term overflows")
            t = sign * math.exp(e)
            yield t, (6.0 + abs(ln_n) + abs(ln_d) + ln_f + abs(k * ln_az)) * _MACHINE_EPS * abs(t)
        k += 1
        if z == 0.0:
            return


class _MpFWCoeffs:
    """Per-(params, dps) cache of Gamma(au*k+a)/Gamma(bl*k+b)/k! as mpf."""

    def __init__(self):
        self._store: dict[tuple, list] = {}

    def term(self, p: FoxWrightParams, z: float, k: int, dps: int):
        key = (p.a, p.alpha_u, p.b, p.beta_l, dps)
        coeffs = self._store.setdefault(key, [])
        while len(coeffs) <= k:
            i = len(coeffs)
            if _is_nonpositive_int(p.alpha_u * i + p.a):
                raise PoleError(
                    f"fox_wright_psi11: numerator Gamma pole at argument {p.alpha_u * i + p.a} (k={i})"
                )
            if _is_nonpositive_int(p.beta_l * i + p.b):
                coeffs.append(mp.mpf(0))
            else:
                coeffs.append(
                    mp.gamma(mp.mpf(p.alpha_u) * i + mp.mpf(p.a))
                    * mp.rgamma(mp.mpf(p.beta_l) * i + mp.mpf(p.b))
                    / mp.factorial(i)
                )
        return coeffs[k] * mp.mpf(z) ** k


_FW_MP_CACHE = _MpFWCoeffs()


def fox_wright_psi11(
    a: float,
    alpha_u: float,
    b: float,
    beta_l: float,
    z: float,
    ctl: SeriesControl | None = None,
) -> float:
    """Fox-Wright Psi_{1,1} with upper pair (a, alpha_u), lower (b, beta_l)."""
    ctl = ctl or _DEFAULT_CONTROL
    p = FoxWrightParams(a, alpha_u, b, beta_l)
    if not math.isfinite(z):
        raise DomainError(f"fox_wright_psi11: z must be finite, got {z}")

    value, abs_sum, err = _sum_series(_fw_terms(p, z), ctl, "fox_wright_psi11")
    if not _needs_escalation(value, err, ctl.rtol):
        return value
    return _mp_escalated_sum(
        lambda k, dps: _FW_MP_CACHE.term(p, z, k, dps), ctl, abs_sum, "fox_wright_psi11"
    )
