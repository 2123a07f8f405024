"""Unit model tests: linear maps, TES integration, conservation properties."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecodispatch.plant import (PlantInputs, TesState, UnitRatings,
                               evaluate_units, tes_energy, tes_step)

C_TH = 65e6 / 90.0  # Wh per degC for the default ratings


class TestUnitRatings:
    def test_defaults_match_reference_plant(self):
        r = UnitRatings()
        assert r.chp_heat_max == 2.8e6
        assert r.chp_el_max == 1.2e6
        assert r.chp_gas_max == 12.0
        assert r.gb_heat_max == 7.0e6
        assert r.gb_gas_max == 194.0
        assert r.hp_heat_max == 5.0e5
        assert r.hp_el_max == 1.25e5
        assert r.dh_max == 6.0e6
        assert r.tes_capacity == 65.0e6
        assert r.tes_temp_range == (0.0, 90.0)

    def test_rejects_non_positive_rating(self):
        with pytest.raises(ValueError, match="gb_heat_max"):
            UnitRatings(gb_heat_max=0.0)

    def test_rejects_inverted_temp_range(self):
        with pytest.raises(ValueError, match="tes_temp_range"):
            UnitRatings(tes_temp_range=(90.0, 0.0))

    def test_heat_capacity(self):
        assert UnitRatings().tes_heat_capacity == pytest.approx(C_TH, rel=1e-12)


class TestEvaluateUnits:
    def test_all_zero_inputs_give_all_zero_outputs(self, ratings):
        out = evaluate_units(PlantInputs(), ratings)
        assert out.p_h_chp == 0 and out.p_e_chp == 0 and out.m_chp == 0
        assert out.p_h_gb == 0 and out.m_gb == 0
        assert out.p_h_hp == 0 and out.p_e_hp == 0 and out.p_dh == 0

    def test_full_chp_hits_rated_maxima(self, ratings):
        out = evaluate_units(PlantInputs(lf_chp=1.0), ratings)
        assert out.p_h_chp == 2.8e6
        assert out.p_e_chp == 1.2e6
        assert out.m_chp == 12.0

    def test_half_gb_is_midpoint(self, ratings):
        out = evaluate_units(PlantInputs(lf_gb=0.5), ratings)
        assert out.p_h_gb == 3.5e6
        assert out.m_gb == 97.0

    def test_dh_delivers_requested_power(self, ratings):
        out = evaluate_units(PlantInputs(p_dh_req=4.2e6), ratings)
        assert out.p_dh == 4.2e6

    @pytest.mark.parametrize("field,value,pattern", [
        ("lf_chp", 1.2, "lf_chp"),
        ("lf_chp", -0.1, "lf_chp"),
        ("lf_gb", 2.0, "lf_gb"),
        ("lf_hp", 0.5, "lf_hp"),
        ("t_source", 10.0, "t_source"),
        ("t_source", 60.0, "t_source"),
        ("p_dh_req", 7e6, "p_dh_req"),
        ("p_dh_req", -1.0, "p_dh_req"),
    ])
    def test_out_of_interval_input_names_field(self, ratings, field, value, pattern):
        inputs = PlantInputs(**{field: value})
        with pytest.raises(ValueError, match=pattern):
            evaluate_units(inputs, ratings)

    @given(lf=st.floats(0.0, 1.0), alpha=st.floats(0.0, 1.0))
    def test_homogeneity_in_load_factor(self, lf, alpha):
        ratings = UnitRatings()
        base = evaluate_units(PlantInputs(lf_chp=lf, lf_gb=lf), ratings)
        scaled = evaluate_units(
            PlantInputs(lf_chp=alpha * lf, lf_gb=alpha * lf), ratings)
        for name in ("p_h_chp", "p_e_chp", "m_chp", "p_h_gb", "m_gb"):
            assert getattr(scaled, name) == pytest.approx(
                alpha * getattr(base, name), rel=1e-12, abs=1e-9)

    @given(lo=st.floats(0.0, 1.0), hi=st.floats(0.0, 1.0))
    def test_monotone_in_each_load_factor(self, lo, hi):
        ratings = UnitRatings()
        lo, hi = min(lo, hi), max(lo, hi)
        below = evaluate_units(PlantInputs(lf_chp=lo, lf_gb=lo), ratings)
        above = evaluate_units(PlantInputs(lf_chp=hi, lf_gb=hi), ratings)
        assert above.p_h_chp >= below.p_h_chp
        assert above.p_e_chp >= below.p_e_chp
        assert above.m_chp >= below.m_chp
        assert above.p_h_gb >= below.p_h_gb
        assert above.m_gb >= below.m_gb

    def test_outputs_within_ratings_at_extremes(self, ratings):
        out = evaluate_units(
            PlantInputs(lf_chp=1.0, lf_gb=1.0, lf_hp=1, p_dh_req=6e6), ratings)
        assert 0 <= out.p_h_chp <= ratings.chp_heat_max
        assert 0 <= out.p_h_gb <= ratings.gb_heat_max
        assert 0 <= out.p_h_hp <= ratings.hp_heat_max
        assert 0 <= out.p_e_hp <= ratings.hp_el_max
        assert 0 <= out.p_dh <= ratings.dh_max


class TestTesState:
    def test_at_temperature_consistency(self, ratings):
        state = TesState.at_temperature(50.0, ratings)
        assert state.q_tes == pytest.approx(C_TH * 50.0, rel=1e-12)

    def test_rejects_inconsistent_energy(self, ratings):
        with pytest.raises(ValueError, match="inconsistent"):
            TesState(t_tes=50.0, q_tes=1.0, heat_capacity=C_TH)

    def test_from_energy_round_trip(self, ratings):
        state = TesState.from_energy(32.5e6, ratings)
        assert state.t_tes == pytest.approx(45.0, rel=1e-12)


class TestTesStep:
    def test_balanced_powers_leave_state_unchanged(self, ratings):
        state = TesState.at_temperature(50.0, ratings)
        after = tes_step(state, 3e6, 3e6, 3600.0)
        assert after.t_tes == state.t_tes
        assert after.q_tes == state.q_tes

    def test_charge_oracle(self, ratings):
        # dT = net * dt / 3600 / c_th by hand: 722222.2 / (65e6/90) ~ 1.0
        state = TesState.at_temperature(50.0, ratings)
        after = tes_step(state, 722_222.2, 0.0, 3600.0)
        assert after.t_tes == pytest.approx(51.0, abs=1e-6)

    def test_discharge_oracle(self, ratings):
        state = TesState.at_temperature(50.0, ratings)
        after = tes_step(state, 0.0, 1.444444e6, 3600.0)
        assert after.t_tes == pytest.approx(48.0, abs=1e-6)

    def test_state_not_clamped_outside_band(self, ratings):
        state = TesState.at_temperature(1.0, ratings)
        after = tes_step(state, 0.0, 5e6, 3600.0)
        assert after.t_tes < 0.0  # infeasible but representable

    def test_rejects_non_positive_dt(self, ratings):
        state = TesState.at_temperature(50.0, ratings)
        with pytest.raises(ValueError, match="dt"):
            tes_step(state, 1e6, 0.0, 0.0)

    def test_rejects_negative_powers(self, ratings):
        state = TesState.at_temperature(50.0, ratings)
        with pytest.raises(ValueError):
            tes_step(state, -1.0, 0.0, 3600.0)

    @given(st.lists(
        st.tuples(st.floats(0, 16.3e6), st.floats(0, 10e6)),
        min_size=1, max_size=50))
    @settings(max_examples=50)
    def test_energy_conservation_over_sequences(self, flows):
        ratings = UnitRatings()
        state = TesState.at_temperature(50.0, ratings)
        initial_q = state.q_tes
        for charge, demand in flows:
            state = tes_step(state, charge, demand, 3600.0)
        expected = sum((c - d) * 3600.0 / 3600.0 for c, d in flows)
        delta = state.q_tes - initial_q
        assert delta == pytest.approx(expected, rel=1e-9, abs=1e-6)

    @given(t0=st.floats(0.0, 90.0), net=st.floats(-14e6, 14e6),
           dt=st.floats(60.0, 7200.0))
    @settings(max_examples=200)
    def test_reverse_step_restores_state(self, t0, net, dt):
        # Lossless model: the reverse net power undoes a step. Bit-exact
        # equality is not an IEEE identity, so allow 1-ulp-scale error.
        ratings = UnitRatings()
        state = TesState.at_temperature(t0, ratings)
        charge, demand = (net, 0.0) if net >= 0 else (0.0, -net)
        forward = tes_step(state, charge, demand, dt)
        back = tes_step(forward, demand, charge, dt)
        assert math.isclose(back.q_tes, state.q_tes, rel_tol=1e-12, abs_tol=1e-3)
        assert math.isclose(back.t_tes, state.t_tes, rel_tol=1e-12, abs_tol=1e-9)


class TestTesEnergy:
    def test_zero_temperature_is_zero_energy(self, ratings):
        assert tes_energy(0.0, ratings) == 0.0

    def test_full_band_is_full_capacity(self, ratings):
        assert tes_energy(90.0, ratings) == pytest.approx(65e6, rel=1e-12)

    def test_linearity_midpoint(self, ratings):
        assert tes_energy(45.0, ratings) == pytest.approx(32.5e6, rel=1e-12)
