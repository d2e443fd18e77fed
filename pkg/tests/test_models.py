"""Scenario mapping tests."""

import numpy as np
import pytest

from memkinetics.errors import DomainError, ValidationError
from memkinetics.models import (
    FixedAssets,
    Growth,
    Inflation,
    PowerPrice,
    TwoParamMemory,
    compile,
    derived_series,
    spec_from_dict,
    spec_to_dict,
)
from memkinetics.solver import TrajectoryGrid, analytic_solution


class TestCompile:
    def test_growth_rate_product(self):
        prob = compile(Growth(alpha=1.0, m=0.2, P=10.0, L=0.05, initial_values=(100.0,)))
        assert prob.lam == pytest.approx(0.1, rel=1e-15)
        assert prob.ord.alpha == 1.0 and prob.initial_values == (100.0,)

    def test_inflation_maps_pace_to_rate(self):
        prob = compile(Inflation(alpha=0.8, R=0.03, initial_prices=(1.0,)))
        assert prob.lam == 0.03
        assert prob.forcing_const == 0.0 and prob.secondary_ord is None

    def test_fixed_assets_mapping(self):
        prob = compile(FixedAssets(alpha=0.8, A=2.0, B=0.5, initial_assets=(1.0,)))
        assert prob.forcing_const == 2.0
        assert prob.decay_coeff == 0.5
        assert prob.lam == -0.5

    def test_power_price_mapping(self):
        prob = compile(
            PowerPrice(alpha=0.8, beta=0.5, m=0.2, p=6.0, L=0.25, initial_values=(1.0,))
        )
        assert prob.lam == pytest.approx(0.3, rel=1e-15)
        assert prob.price_exponent == 0.5

    def test_two_param_mapping(self):
        prob = compile(
            TwoParamMemory(alpha=0.9, beta=0.4, mu=0.2, lam=0.5, initial_values=(1.0,))
        )
        assert prob.secondary_ord.alpha == 0.4 and prob.mu == 0.2

    def test_determinism(self):
        spec = Growth(alpha=0.8, m=0.2, P=10.0, L=0.05, initial_values=(1.0,))
        assert compile(spec) == compile(spec)

    def test_rate_is_the_only_channel(self):
        # Different (m, P, L) with the same product give identical problems
        # and identical trajectories.
        a = compile(Growth(alpha=0.8, m=0.5, P=1.0, L=0.06, initial_values=(1.0,)))
        b = compile(Growth(alpha=0.8, m=0.25, P=2.0, L=0.06, initial_values=(1.0,)))
        assert a == b
        grid = TrajectoryGrid(2.0, 50)
        np.testing.assert_array_equal(
            analytic_solution(a, grid).values, analytic_solution(b, grid).values
        )

    def test_inflation_growth_isomorphism(self):
        grid = TrajectoryGrid(2.0, 50)
        p_inf = compile(Inflation(alpha=0.8, R=0.03, initial_prices=(5.0,)))
        p_gro = compile(Growth(alpha=0.8, m=0.5, P=1.0, L=0.06, initial_values=(5.0,)))
        np.testing.assert_array_equal(
            analytic_solution(p_inf, grid).values, analytic_solution(p_gro, grid).values
        )

    def test_validation_lists_every_violation(self):
        with pytest.raises(ValidationError) as err:
            compile(Growth(alpha=0.8, m=1.5, P=-1.0, L=0.0, initial_values=(1.0,)))
        assert len(err.value.problems) == 3

    def test_second_order_needs_two_initial_values(self):
        with pytest.raises(ValidationError):
            compile(Growth(alpha=1.5, m=0.2, P=10.0, L=0.05, initial_values=(1.0,)))
        compile(Growth(alpha=1.5, m=0.2, P=10.0, L=0.05, initial_values=(1.0, 0.0)))

    @pytest.mark.parametrize(
        "spec",
        [
            Growth(alpha=2.5, m=0.2, P=1.0, L=1.0, initial_values=(1.0,)),
            TwoParamMemory(alpha=0.4, beta=0.9, mu=0.1, lam=0.1, initial_values=(1.0,)),
            FixedAssets(alpha=0.8, A=2.0, B=0.0, initial_assets=(1.0,)),
            PowerPrice(alpha=0.8, beta=-0.5, m=0.2, p=1.0, L=1.0, initial_values=(1.0,)),
        ],
    )
    def test_invalid_specs(self, spec):
        with pytest.raises(ValidationError):
            compile(spec)


class TestDerivedSeries:
    def test_fixed_price_products(self):
        spec = Growth(alpha=1.0, m=0.2, P=10.0, L=0.05, initial_values=(100.0,))
        grid = TrajectoryGrid(1.0, 4)
        traj = analytic_solution(compile(spec), grid)
        ds = derived_series(spec, traj)
        assert ds.investment[0] == pytest.approx(200.0, rel=1e-12)
        assert ds.income[0] == pytest.approx(1000.0, rel=1e-12)
        np.testing.assert_allclose(ds.investment, spec.m * ds.income, rtol=1e-15)

    def test_positive_investment_along_growth(self):
        spec = Growth(alpha=0.8, m=0.2, P=10.0, L=0.25, initial_values=(1.0,))
        traj = analytic_solution(compile(spec), TrajectoryGrid(2.0, 100))
        ds = derived_series(spec, traj)
        assert np.all(ds.investment > 0.0)

    def test_power_price_vanishes_at_origin(self):
        spec = PowerPrice(alpha=0.8, beta=0.5, m=0.2, p=6.0, L=0.25, initial_values=(1.0,))
        traj = analytic_solution(compile(spec), TrajectoryGrid(1.0, 10))
        ds = derived_series(spec, traj)
        assert ds.income[0] == 0.0 and ds.investment[0] == 0.0
        assert np.all(ds.income[1:] > 0.0)

    def test_undefined_for_price_scenarios(self):
        spec = Inflation(alpha=0.8, R=0.03, initial_prices=(1.0,))
        traj = analytic_solution(compile(spec), TrajectoryGrid(1.0, 10))
        with pytest.raises(DomainError):
            derived_series(spec, traj)


class TestSerialization:
    @pytest.mark.parametrize(
        "spec",
        [
            Growth(alpha=0.8, m=0.2, P=10.0, L=0.05, initial_values=(1.0,)),
            PowerPrice(alpha=0.8, beta=0.5, m=0.2, p=6.0, L=0.25, initial_values=(1.0,)),
            TwoParamMemory(alpha=0.9, beta=0.4, mu=0.2, lam=0.5, initial_values=(1.0,)),
            Inflation(alpha=0.8, R=0.03, initial_prices=(1.0,)),
            FixedAssets(alpha=1.5, A=2.0, B=0.5, initial_assets=(1.0, 0.0)),
        ],
    )
    def test_round_trip(self, spec):
        assert spec_from_dict(spec_to_dict(spec)) == spec

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            spec_from_dict({"kind": "oscillator"})

    def test_missing_field_reported(self):
        with pytest.raises(ValidationError) as err:
            spec_from_dict({"kind": "growth", "alpha": 0.8})
        assert any("m" in p for p in err.value.problems)

    def test_unknown_field_reported(self):
        doc = spec_to_dict(Growth(alpha=0.8, m=0.2, P=10.0, L=0.05, initial_values=(1.0,)))
        doc["surprise"] = 1
        with pytest.raises(ValidationError):
            spec_from_dict(doc)

    def test_non_numeric_rejected(self):
        doc = spec_to_dict(Growth(alpha=0.8, m=0.2, P=10.0, L=0.05, initial_values=(1.0,)))
        doc["P"] = "ten"
        with pytest.raises(ValidationError):
            spec_from_dict(doc)
