"""Hydrogenic sudden-kick matrix elements and the W_ion table."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molstrip.form_factor import (
    IonizationTable,
    ProjectileSpec,
    bound_survival_probability,
    build_ionization_table,
    elastic_form_factor,
    ionization_probability,
)


class TestProjectileSpec:
    @pytest.mark.parametrize("n_p,z_eff", [(1, 26.0), (2, 25.0), (3, 24.0)])
    def test_default_effective_charge(self, n_p, z_eff):
        assert ProjectileSpec(26.0, n_p).Z_eff == pytest.approx(z_eff)

    def test_effective_charge_override(self):
        assert ProjectileSpec(26.0, 2, z_eff=25.5).Z_eff == pytest.approx(25.5)

    def test_net_charge(self):
        assert ProjectileSpec(26.0, 3).net_charge == pytest.approx(23.0)

    @pytest.mark.parametrize("n_p", [0, 4])
    def test_electron_count_range(self, n_p):
        with pytest.raises(ValueError):
            ProjectileSpec(26.0, n_p)

    def test_requires_positive_net_charge(self):
        with pytest.raises(ValueError):
            ProjectileSpec(3.0, 3)

    def test_rejects_nonpositive_override(self):
        with pytest.raises(ValueError):
            ProjectileSpec(26.0, 1, z_eff=0.0)


class TestElasticFormFactor:
    def test_normalization_at_zero_kick(self):
        assert elastic_form_factor(0.0, 26.0) == 1.0

    def test_closed_form_at_twice_z(self):
        assert elastic_form_factor(52.0, 26.0) == pytest.approx(0.25, rel=1e-14)

    def test_scaling_law(self):
        for q in (0.3, 2.0, 40.0):
            assert elastic_form_factor(q, 7.0) == pytest.approx(
                elastic_form_factor(3.0 * q, 21.0), rel=1e-10
            )

    def test_domain(self):
        with pytest.raises(ValueError):
            elastic_form_factor(-1.0, 26.0)
        with pytest.raises(ValueError):
            elastic_form_factor(1.0, 0.0)


class TestBoundSurvival:
    def test_identity_at_zero_kick(self):
        assert bound_survival_probability(0.0, n_max=12) == pytest.approx(1.0, abs=1e-10)

    def test_vanishes_at_large_kick(self):
        assert bound_survival_probability(40.0) < 1e-3

    def test_elastic_only_matches_closed_form(self):
        # n_max = 1 keeps just the ground-state term, F(s)^2.
        for s in (0.2, 1.0, 3.0, 7.0):
            expected = elastic_form_factor(s, 1.0) ** 2
            assert bound_survival_probability(s, n_max=1) == pytest.approx(expected, abs=1e-8)

    def test_domain(self):
        with pytest.raises(ValueError):
            bound_survival_probability(-0.1)
        with pytest.raises(ValueError):
            bound_survival_probability(1.0, n_max=0)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=0.0, max_value=50.0))
    def test_is_a_probability(self, s):
        assert 0.0 <= bound_survival_probability(s, n_max=10) <= 1.0


class TestIonizationProbability:
    def test_zero_kick(self):
        assert ionization_probability(0.0) == 0.0

    def test_saturates_at_large_kick(self):
        assert ionization_probability(30.0) == pytest.approx(1.0, abs=1e-3)

    def test_subset_of_inelastic(self):
        # Ionization cannot exceed the total inelastic probability 1 - F^2.
        for s in np.linspace(0.05, 10.0, 30):
            bound_total = 1.0 - elastic_form_factor(s, 1.0) ** 2
            assert ionization_probability(s) <= bound_total + 1e-10

    def test_small_kick_sum_rule(self):
        # 1 - F^2 = s^2 + O(s^4) from the <r^2> moment of the 1s density.
        for s in (0.01, 0.05, 0.1):
            inelastic = 1.0 - elastic_form_factor(s, 1.0) ** 2
            assert abs(inelastic / s**2 - 1.0) <= 0.05

    def test_shell_cutoff_convergence(self):
        for s in np.linspace(0.0, 20.0, 41):
            w10 = ionization_probability(s, n_max=10)
            w20 = ionization_probability(s, n_max=20)
            assert abs(w20 - w10) <= 5e-4


class TestIonizationTable:
    def test_grid_preconditions(self):
        with pytest.raises(ValueError):
            build_ionization_table(s_max=10.0)
        with pytest.raises(ValueError):
            build_ionization_table(n_points=100)
        with pytest.raises(ValueError):
            build_ionization_table(n_max=5)

    def test_zero_and_bounds(self, ionization_table):
        assert ionization_table(0.0) == 0.0
        assert np.all(ionization_table.w_values >= 0.0)
        assert np.all(ionization_table.w_values <= 1.0)
        assert np.all(np.diff(ionization_table.w_values) >= 0.0)
        assert ionization_table.w_values[-1] == pytest.approx(1.0, abs=1e-3)

    def test_interpolation_matches_direct_evaluation(self, ionization_table):
        rng = np.random.default_rng(1234)
        s = rng.uniform(0.0, ionization_table.s_max, 1000)
        direct = np.array([ionization_probability(v, ionization_table.n_max) for v in s])
        assert np.max(np.abs(ionization_table(s) - direct)) <= 1e-4

    def test_interpolation_stays_bracketed(self, ionization_table):
        grid, vals = ionization_table.s_grid, ionization_table.w_values
        rng = np.random.default_rng(5)
        idx = rng.integers(0, grid.size - 1, 200)
        frac = rng.uniform(0.0, 1.0, 200)
        s_mid = grid[idx] + frac * (grid[idx + 1] - grid[idx])
        w_mid = ionization_table(s_mid)
        lo = np.minimum(vals[idx], vals[idx + 1]) - 1e-12
        hi = np.maximum(vals[idx], vals[idx + 1]) + 1e-12
        assert np.all(w_mid >= lo) and np.all(w_mid <= hi)

    def test_beyond_grid_uses_elastic_complement(self, ionization_table):
        s = ionization_table.s_max + 5.0
        expected = 1.0 - (1.0 + 0.25 * s * s) ** -4
        assert ionization_table(s) == pytest.approx(expected, rel=1e-12)

    def test_csv_roundtrip(self, ionization_table, tmp_path):
        path = tmp_path / "w_ion.csv"
        ionization_table.save_csv(path)
        loaded = IonizationTable.load_csv(path, n_max=ionization_table.n_max)
        # save_csv writes 9 significant digits -> up to ~5e-9 relative rounding.
        assert np.allclose(loaded.s_grid, ionization_table.s_grid, rtol=1e-8)
        assert np.allclose(loaded.w_values, ionization_table.w_values, rtol=1e-8, atol=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=40.0),
        st.floats(min_value=0.0, max_value=5.0),
    )
    def test_monotone_and_clipped(self, ionization_table, s, ds):
        w_lo, w_hi = ionization_table(s), ionization_table(s + ds)
        assert 0.0 <= w_lo <= 1.0
        assert w_hi >= w_lo - 1e-9
