"""Economic scenarios and their mapping onto Cauchy problems.

Five scenario families share the same mathematical core:

* Growth          D^a Y = lam * Y,          lam = m * P * L
* PowerPrice      D^a Y = lam * t^beta * Y, lam = m * p * L, P(t) = p * t^beta
* TwoParamMemory  D^a Y - mu * D^b Y = lam * Y
* Inflation       D^a P = R * P             (the growth kernel under new names)
* FixedAssets     D^a K = A - B * K         (A: constant investment inflow,
                                             B: disposal coefficient; the
                                             steady state is A/B)

The market is assumed unsaturated: all production is sold, so no
demand-side state appears anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .caputo import FractionalOrder
from .errors import DomainError, ValidationError
from .solver import CauchyProblem, Trajectory

__all__ = [
    "Growth",
    "PowerPrice",
    "TwoParamMemory",
    "Inflation",
    "FixedAssets",
    "DerivedSeries",
    "SCENARIO_KINDS",
    "compile",
    "derived_series",
    "spec_from_dict",
    "spec_to_dict",
]


@dataclass(frozen=True)
class Growth:
    """Constant-pace output growth; lam = m * P * L.

    m  norm of the net investment (share of income reinvested), 0 < m < 1
    P  fixed price
    L  accelerator rate
    """

    alpha: float
    m: float
    P: float
    L: float
    initial_values: tuple

    kind = "growth"


@dataclass(frozen=True)
class PowerPrice:
    """Output growth under the power-law price P(t) = p * t^beta; lam = m * p * L."""

    alpha: float
    beta: float
    m: float
    p: float
    L: float
    initial_values: tuple

    kind = "power_price"


@dataclass(frozen=True)
class TwoParamMemory:
    """Growth with two memory-fading exponents: D^alpha Y - mu D^beta Y = lam Y."""

    alpha: float
    beta: float
    mu: float
    lam: float
    initial_values: tuple

    kind = "two_param_memory"


@dataclass(frozen=True)
class Inflation:
    """Price growth at constant inflation pace R."""

    alpha: float
    R: float
    initial_prices: tuple

    kind = "inflation"


@dataclass(frozen=True)
class FixedAssets:
    """Fixed-assets stock under constant investment A and disposal rate B."""

    alpha: float
    A: float
    B: float
    initial_assets: tuple

    kind = "fixed_assets"


SCENARIO_KINDS = {
    cls.kind: cls for cls in (Growth, PowerPrice, TwoParamMemory, Inflation, FixedAssets)
}

_INITIAL_FIELD = {
    "growth": "initial_values",
    "power_price": "initial_values",
    "two_param_memory": "initial_values",
    "inflation": "initial_prices",
    "fixed_assets": "initial_assets",
}


def _initial_values(spec) -> tuple:
    return tuple(float(v) for v in getattr(spec, _INITIAL_FIELD[spec.kind]))


def _validate(spec) -> list[str]:
    problems = []
    alpha = spec.alpha
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and 0.0 < alpha <= 2.0):
        problems.append(f"alpha must lie in (0, 2], got {alpha}")
        return problems  # n is meaningless below
    n = int(math.ceil(alpha)) if alpha != int(alpha) else int(alpha)
    iv = _initial_values(spec)
    if len(iv) != n:
        problems.append(
            f"order {alpha} needs exactly {n} initial value(s), got {len(iv)}"
        )
    if any(not math.isfinite(v) for v in iv):
        problems.append("initial values must be finite")
    if isinstance(spec, (Growth, PowerPrice)):
        if not (0.0 < spec.m < 1.0):
            problems.append(f"net investment norm m must lie in (0, 1), got {spec.m}")
        if not (spec.L > 0.0):
            problems.append(f"accelerator rate L must be > 0, got {spec.L}")
    if isinstance(spec, Growth) and not (spec.P > 0.0):
        problems.append(f"price P must be > 0, got {spec.P}")
    if isinstance(spec, PowerPrice):
        if not (spec.p > 0.0):
            problems.append(f"price scale p must be > 0, got {spec.p}")
        if not (spec.beta >= 0.0):
            problems.append(f"price exponent beta must be >= 0, got {spec.beta}")
    if isinstance(spec, TwoParamMemory) and not (alpha > spec.beta > 0.0):
        problems.append(
            f"two-parameter memory requires alpha > beta > 0, got alpha={alpha}, beta={spec.beta}"
        )
    if isinstance(spec, FixedAssets) and not (spec.B > 0.0):
        problems.append(f"disposal coefficient B must be > 0, got {spec.B}")
    return problems


def compile(spec) -> CauchyProblem:
    """Map a scenario onto the Cauchy problem whose solution it is."""
    problems = _validate(spec)
    if problems:
        raise ValidationError(problems)
    ord = FractionalOrder.from_alpha(spec.alpha)
    iv = _initial_values(spec)
    if isinstance(spec, Growth):
        return CauchyProblem(ord=ord, initial_values=iv, lam=spec.m * spec.P * spec.L)
    if isinstance(spec, PowerPrice):
        return CauchyProblem(
            ord=ord,
            initial_values=iv,
            lam=spec.m * spec.p * spec.L,
            price_exponent=spec.beta,
        )
    if isinstance(spec, TwoParamMemory):
        return CauchyProblem(
            ord=ord,
            initial_values=iv,
            lam=spec.lam,
            secondary_ord=FractionalOrder.from_alpha(spec.beta),
            mu=spec.mu,
        )
    if isinstance(spec, Inflation):
        return CauchyProblem(ord=ord, initial_values=iv, lam=spec.R)
    if isinstance(spec, FixedAssets):
        return CauchyProblem(
            ord=ord,
            initial_values=iv,
            lam=-spec.B,
            forcing_const=spec.A,
            decay_coeff=spec.B,
        )
    raise DomainError(f"unknown scenario type {type(spec).__name__}")


@dataclass(frozen=True)
class DerivedSeries:
    """Pointwise net investment I(t) and income Q(t) along a trajectory."""

    investment: np.ndarray
    income: np.ndarray


def derived_series(spec, traj: Trajectory) -> DerivedSeries:
    """Investment I = m * P * Y and income Q = P * Y along the trajectory.

    Defined for the output scenarios (Growth, PowerPrice); the price,
    inflation and assets scenarios have no investment decomposition.
    """
    if isinstance(spec, Growth):
        price = np.full(traj.values.shape, spec.P)
    elif isinstance(spec, PowerPrice):
        price = spec.p * traj.grid.times() ** spec.beta
    else:
        raise DomainError(
            f"derived series are defined for output scenarios, not {spec.kind!r}"
        )
    income = price * traj.values
    return DerivedSeries(investment=spec.m * income, income=income)


def spec_to_dict(spec) -> dict:
    """JSON-ready dict with the scenario kind tag."""
    out = {"kind": spec.kind}
    for name in spec.__dataclass_fields__:
        value = getattr(spec, name)
        out[name] = list(value) if isinstance(value, tuple) else value
    return out


def spec_from_dict(d: dict):
    """Inverse of spec_to_dict; raises ValidationError on malformed input."""
    problems = []
    if not isinstance(d, dict):
        raise ValidationError(["scenario must be a JSON object"])
    kind = d.get("kind")
    cls = SCENARIO_KINDS.get(kind)
    if cls is None:
        raise ValidationError(
            [f"unknown scenario kind {kind!r}; expected one of {sorted(SCENARIO_KINDS)}"]
        )
    kwargs = {}
    for name in cls.__dataclass_fields__:
        if name not in d:
            problems.append(f"scenario field {name!r} is required for kind {kind!r}")
            continue
        value = d[name]
        if name in ("initial_values", "initial_prices", "initial_assets"):
            if not isinstance(value, (list, tuple)) or not all(
                isinstance(v, (int, float)) for v in value
            ):
                problems.append(f"scenario field {name!r} must be a list of numbers")
                continue
            value = tuple(float(v) for v in value)
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            problems.append(f"scenario field {name!r} must be a number")
            continue
        else:
            value = float(value)
        kwargs[name] = value
    extra = set(d) - set(cls.__dataclass_fields__) - {"kind"}
    if extra:
        problems.append(f"unknown scenario field(s): {sorted(extra)}")
    if problems:
        raise ValidationError(problems)
    spec = cls(**kwargs)
    problems = _validate(spec)
    if problems:
        raise ValidationError(problems)
    return spec
