import math
import warnings

import numpy as np
import pytest

from kgcoherent.classical import ClassicalHelix, helix_derived
from kgcoherent.freefield import FreeCoherentState, energy_moments, velocity_moments
from kgcoherent.magnetic import (
    LandauMode,
    MagneticCoherentState,
    MatchedWidthWarning,
    SeriesNonConvergenceError,
    SeriesSpec,
    auto_series_spec,
    conserved_expectations,
    free_limit_check,
    kg_field,
    landau_energy,
    momentum_expectations,
    nonrel_expectations,
    parallel_motion,
    r_sq_closed_form,
    series_constants,
    transverse_position,
    x3_uncertainty,
)

TABLE_STATE = MagneticCoherentState(
    Lambda=0.01, lambda_perp=0.1, lambda3=1e-3, p1_mean=1.2, p3_mean=1.6
)
WIDE_STATE = MagneticCoherentState(
    Lambda=0.01, lambda_perp=0.5, lambda3=0.5, p1_mean=1.2, p3_mean=1.6
)
GAMMA = math.sqrt(5.0)


def spec_for(state, tail=1e-12):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MatchedWidthWarning)
        return auto_series_spec(state, SeriesSpec(tail_tol=tail))


class TestLandauEnergy:
    def test_lowest_tower(self):
        assert landau_energy(LandauMode(0, 3, 0.0), 0.05) == pytest.approx(1.05)

    def test_negative_angular_momentum_raises_tower(self):
        assert landau_energy(LandauMode(0, -1, 0.0), 0.05) == pytest.approx(1.15)

    def test_free_limit(self):
        assert landau_energy(LandauMode(4, 2, 0.7), 0.0) == pytest.approx(1.49)

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            LandauMode(-1, 0, 0.0)


class TestSeriesConstants:
    def test_matched_width_limit(self):
        state = MagneticCoherentState(
            Lambda=0.01, lambda_perp=0.1, lambda3=0.5, p1_mean=1.2, p3_mean=0.0
        )
        with pytest.warns(MatchedWidthWarning):
            c = series_constants(state)
        # 0.1**2 is one ulp off 0.01, so s is tiny rather than exactly zero
        assert abs(c.s) < 1e-14
        assert c.su == pytest.approx(1.2**2 / (2 * 0.01), rel=1e-12)
        assert abs(c.u) > 1e12

    def test_wide_packet_values(self):
        c = series_constants(WIDE_STATE)
        assert c.s == pytest.approx(-0.24 / 0.26, rel=1e-12)
        assert c.su == pytest.approx(2 * 0.01 * 1.44 / 0.26**2, rel=1e-12)

    def test_no_transverse_momentum(self):
        state = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=0.25)
        c = series_constants(state)
        assert c.u == 0.0
        assert c.F_amp == 0.0


class TestConservedExpectations:
    def test_table_row_narrow(self):
        ce = conserved_expectations(TABLE_STATE, sspec=spec_for(TABLE_STATE))
        assert ce.E_mean / GAMMA == pytest.approx(1.00086, abs=2e-3)
        assert ce.R_mean / 120.0 == pytest.approx(1.00174, abs=2e-3)
        assert ce.R_sq_mean / 14400.0 == pytest.approx(1.00694, abs=2e-3)
        assert math.sqrt(ce.R_var) / 120.0 == pytest.approx(0.05887, abs=2e-3)

    def test_table_row_wide(self):
        ce = conserved_expectations(WIDE_STATE, sspec=spec_for(WIDE_STATE))
        assert ce.E_mean / GAMMA == pytest.approx(1.01375, abs=2e-3)
        assert ce.R_sq_mean / 14400.0 == pytest.approx(1.08694, abs=2e-3)

    def test_angular_momentum_cancels_exactly(self):
        for state in (TABLE_STATE, WIDE_STATE):
            ce = conserved_expectations(state, sspec=spec_for(state))
            assert abs(ce.L3_mean) < 1e-12

    def test_r_sq_matches_closed_form(self):
        for state in (TABLE_STATE, WIDE_STATE):
            ce = conserved_expectations(state, sspec=spec_for(state))
            assert ce.R_sq_mean == pytest.approx(r_sq_closed_form(state), rel=1e-10)

    def test_lambda3_independence(self):
        vals = []
        for l3 in (1e-3, 0.25, 0.5):
            st = MagneticCoherentState(
                Lambda=0.01, lambda_perp=0.25, lambda3=l3, p1_mean=1.2, p3_mean=1.6
            )
            ce = conserved_expectations(st, sspec=spec_for(st))
            vals.append((ce.R_mean, ce.R_sq_mean, ce.L3_mean))
        base = np.array(vals[0])
        for v in vals[1:]:
            assert np.max(np.abs(np.array(v) - base) / np.maximum(np.abs(base), 1.0)) < 1e-12

    def test_energy_above_lowest_tower(self):
        for state in (TABLE_STATE, WIDE_STATE):
            ce = conserved_expectations(state, sspec=spec_for(state))
            assert ce.E_mean >= math.sqrt(1.0 + state.Lambda + state.p3_mean**2)


class TestParallelMotion:
    def test_zero_parallel_momentum(self):
        st = MagneticCoherentState(Lambda=0.01, lambda_perp=0.1, lambda3=0.5, p1_mean=1.2)
        pm = parallel_motion(st, 3.0, sspec=spec_for(st))
        assert pm.x3dot_mean == pytest.approx(0.0, abs=1e-13)

    def test_table_velocity_ratio(self):
        pm = parallel_motion(TABLE_STATE, 0.0, sspec=spec_for(TABLE_STATE))
        assert pm.x3dot_mean / (1.6 / GAMMA) == pytest.approx(0.99943, abs=5e-4)

    def test_field_sweep_small_momentum(self):
        st = MagneticCoherentState(
            Lambda=0.1, lambda_perp=0.25, lambda3=0.25, p1_mean=0.6e-3, p3_mean=0.8e-3
        )
        pm = parallel_motion(st, 0.0, sspec=spec_for(st))
        gam = math.sqrt(1.0 + 1e-6)
        assert pm.x3dot_mean / (0.8e-3 / gam) == pytest.approx(0.93013, abs=1e-3)

    def test_drift_is_linear(self):
        pm1 = parallel_motion(TABLE_STATE, 1.0, sspec=spec_for(TABLE_STATE))
        pm5 = parallel_motion(TABLE_STATE, 5.0, sspec=spec_for(TABLE_STATE))
        assert pm5.x3_mean == pytest.approx(5.0 * pm1.x3_mean, rel=1e-12)


class TestTransversePosition:
    def test_initial_condition(self):
        st = WIDE_STATE
        x1, x2 = transverse_position(st, 0.0, sspec=spec_for(st))
        assert x1 == 0.0
        assert abs(x2) < 1e-6 * (st.p1_mean / st.Lambda)

    def test_zero_transverse_momentum_stays_put(self):
        st = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=0.25, p3_mean=1.0)
        x1, x2 = transverse_position(st, 7.0, sspec=spec_for(st))
        assert x1 == 0.0 and x2 == 0.0

    def test_tracks_classical_helix(self):
        st = MagneticCoherentState(
            Lambda=0.001, lambda_perp=math.sqrt(0.001), lambda3=1e-3, p1_mean=1.2, p3_mean=1.6
        )
        sspec = spec_for(st)
        hd = helix_derived(ClassicalHelix(Lambda=0.001, p_perp=1.2, p3=1.6))
        taus = np.linspace(0.0, 2.0 * hd.period, 9)
        x1, x2 = transverse_position(st, taus, sspec=sspec)
        cx1 = hd.radius * np.sin(hd.omega_B * taus)
        cx2 = hd.radius * (np.cos(hd.omega_B * taus) - 1.0)
        dev = max(np.max(np.abs(x1 - cx1)), np.max(np.abs(x2 - cx2))) / hd.radius
        assert dev < 5e-3

    def test_printed_variant_beats_symmetric(self):
        st = MagneticCoherentState(
            Lambda=0.001, lambda_perp=math.sqrt(0.001), lambda3=1e-3, p1_mean=1.2, p3_mean=1.6
        )
        sspec = spec_for(st)
        hd = helix_derived(ClassicalHelix(Lambda=0.001, p_perp=1.2, p3=1.6))
        taus = np.linspace(0.0, 2.0 * hd.period, 9)
        devs = {}
        for variant in ("printed", "symmetric"):
            x1, x2 = transverse_position(st, taus, sspec=sspec, variant=variant)
            cx1 = hd.radius * np.sin(hd.omega_B * taus)
            cx2 = hd.radius * (np.cos(hd.omega_B * taus) - 1.0)
            devs[variant] = max(np.max(np.abs(x1 - cx1)), np.max(np.abs(x2 - cx2)))
        assert devs["printed"] < 0.2 * devs["symmetric"]

    def test_nonrelativistic_closed_forms(self):
        st = MagneticCoherentState(
            Lambda=1e-4, lambda_perp=1e-2, lambda3=1e-3, p1_mean=0.6e-3, p3_mean=0.8e-3
        )
        sspec = spec_for(st)
        rcl = st.p1_mean / st.Lambda
        gam = math.sqrt(1.0 + 1e-6)
        taus = np.linspace(0.0, 2 * math.pi * gam / st.Lambda, 7)
        x1, x2 = transverse_position(st, taus, sspec=sspec)
        me = momentum_expectations(st, taus, sspec=sspec)
        for i, tau in enumerate(taus):
            nr = nonrel_expectations(st, float(tau))
            assert abs(x1[i] - nr.x1) < 1e-3 * rcl
            assert abs(x2[i] - nr.x2) < 1e-3 * rcl
            assert abs(me.p1[i] - nr.p1) < 1e-3 * st.p1_mean
            assert abs(me.p2[i] - nr.p2) < 1e-3 * st.p1_mean

    def test_damped_oscillation_shape(self):
        # wider packets: amplitude decays while the center holds (figure behavior)
        st = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=0.25, p1_mean=1.2, p3_mean=1.6)
        sspec = spec_for(st)
        hd = helix_derived(ClassicalHelix(Lambda=0.01, p_perp=1.2, p3=1.6))
        quarters = hd.period * (0.25 + np.arange(5))
        x1, _ = transverse_position(st, quarters, sspec=sspec)
        peaks = np.abs(x1)
        assert np.all(np.diff(peaks) < 0.0)
        assert peaks[0] < hd.radius

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            transverse_position(WIDE_STATE, 0.0, variant="other")


class TestMomentumExpectations:
    def test_initial_values(self):
        st = WIDE_STATE
        me = momentum_expectations(st, 0.0, sspec=spec_for(st))
        assert me.p1 == pytest.approx(st.p1_mean, rel=1e-7)
        assert me.p2 == pytest.approx(0.0, abs=1e-12)
        assert me.p3 == st.p3_mean
        assert me.Pi1 == pytest.approx(st.p1_mean, rel=1e-6)
        assert me.Pi2 == pytest.approx(0.0, abs=1e-12)

    def test_gyration_center_constant(self):
        st = WIDE_STATE
        sspec = spec_for(st)
        hd = helix_derived(ClassicalHelix(Lambda=st.Lambda, p_perp=st.p1_mean, p3=st.p3_mean))
        taus = np.linspace(0.0, 5.0 * hd.period, 26)
        x1, x2 = transverse_position(st, taus, sspec=sspec)
        me = momentum_expectations(st, taus, sspec=sspec)
        g1 = x1 / 2.0 + me.p2 / st.Lambda
        g2 = x2 / 2.0 - me.p1 / st.Lambda
        assert np.max(np.abs(g1 - g1[0])) < 1e-10
        assert np.max(np.abs(g2 - g2[0])) < 1e-10 * abs(g2[0])
        assert g2[0] == pytest.approx(-st.p1_mean / st.Lambda, rel=1e-6)


class TestX3Uncertainty:
    def test_initial_minimum(self):
        assert x3_uncertainty(TABLE_STATE, 0.0, sspec=spec_for(TABLE_STATE)) == 0.5

    def test_weak_field_reproduces_free_spreading(self):
        st = MagneticCoherentState(
            Lambda=1e-8, lambda_perp=1e-3, lambda3=0.5, p1_mean=0.0, p3_mean=1.0
        )
        free = FreeCoherentState(lam=0.5, p_mean=1.0)
        v = velocity_moments(free)
        for tau in (5.0, 20.0):
            want = 0.5 * math.sqrt(1.0 + 0.25 * v.v_var * tau**2)
            assert x3_uncertainty(st, tau, sspec=spec_for(st)) == pytest.approx(want, abs=1e-6)

    def test_grows_with_field(self):
        # the plotted regime carries transverse momentum; there the product
        # increases with the field across three decades
        vals = []
        for Lam in (1e-3, 0.01, 0.1):
            st = MagneticCoherentState(Lambda=Lam, lambda_perp=0.25, lambda3=0.25, p1_mean=1.2, p3_mean=1.6)
            vals.append(x3_uncertainty(st, 50.0, sspec=spec_for(st)))
        assert vals[0] < vals[1] < vals[2]


class TestFreeLimit:
    def test_requires_zero_transverse_momentum(self):
        with pytest.raises(ValueError):
            free_limit_check(TABLE_STATE, 0.0)

    def test_matches_free_field(self):
        st = MagneticCoherentState(Lambda=1e-8, lambda_perp=1e-3, lambda3=0.5, p1_mean=0.0, p3_mean=1.0)
        closed = free_limit_check(st, 4.0)
        free = FreeCoherentState(lam=0.5, p_mean=1.0)
        assert closed.E_mean == pytest.approx(energy_moments(free).E_mean, abs=1e-12)
        assert closed.v_mean == pytest.approx(velocity_moments(free).v_mean, abs=1e-12)
        # and the full Landau series at the proxy field agrees too
        sspec = spec_for(st)
        assert conserved_expectations(st, sspec=sspec).E_mean == pytest.approx(closed.E_mean, abs=1e-6)
        assert parallel_motion(st, 0.0, sspec=sspec).x3dot_mean == pytest.approx(closed.v_mean, abs=1e-6)
        x1, x2 = transverse_position(st, 4.0, sspec=sspec)
        assert x1 == 0.0 and x2 == 0.0


class TestNonrelExpectations:
    def test_sweep_energy_cell(self):
        st = MagneticCoherentState(
            Lambda=0.1, lambda_perp=0.25, lambda3=0.25, p1_mean=0.6e-3, p3_mean=0.8e-3
        )
        gam = math.sqrt(1.0 + 1e-6)
        assert nonrel_expectations(st, 0.0).E_mean / gam == pytest.approx(1.06344, abs=1e-5)

    def test_periodicity(self):
        st = WIDE_STATE
        nr = nonrel_expectations(st, 2.0 * math.pi / st.Lambda)
        assert nr.x1 == pytest.approx(0.0, abs=1e-9)
        assert nr.x2 == pytest.approx(0.0, abs=1e-9)

    def test_free_limit_of_energy(self):
        st = MagneticCoherentState(Lambda=1e-12, lambda_perp=1e-6, lambda3=0.5, p1_mean=0.0, p3_mean=1.0)
        want = 1.0 + 0.5**2 / 8.0 + 0.5
        assert nonrel_expectations(st, 0.0).E_mean == pytest.approx(want, abs=1e-9)


class TestKgField:
    def test_on_axis_angle_independence(self):
        st = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=0.25, p1_mean=1e-3, p3_mean=1e-3)
        sspec = spec_for(st)
        a = kg_field(st, 0.0, 0.0, 0.0, 0.5, sspec=sspec)
        b = kg_field(st, 0.0, 0.0, 1.7, 0.5, sspec=sspec)
        assert a == b

    def test_small_momentum_matches_gaussian(self):
        st = MagneticCoherentState(Lambda=0.01, lambda_perp=0.25, lambda3=0.25, p1_mean=1e-3, p3_mean=1e-3)
        sspec = spec_for(st)

        def fcoh_sq(rho, x3):
            return (
                st.lambda_perp**2
                / (2 * math.pi)
                * math.sqrt(st.lambda3**2 / (2 * math.pi))
                * math.exp(-st.lambda_perp**2 * rho**2 / 2 - st.lambda3**2 * x3**2 / 2)
            )

        peak = fcoh_sq(0.0, 0.0)
        for x in (0.0, 2.0, 5.0, 8.0):
            got = abs(kg_field(st, 0.0, x, 0.0, 0.0, sspec=sspec)) ** 2
            assert got == pytest.approx(fcoh_sq(x, 0.0), abs=0.05 * peak)
            got3 = abs(kg_field(st, 0.0, 0.0, 0.0, x, sspec=sspec)) ** 2
            assert got3 == pytest.approx(fcoh_sq(0.0, x), abs=0.05 * peak)

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            kg_field(WIDE_STATE, 0.0, -1.0, 0.0, 0.0)


class TestSeriesSpecHandling:
    def test_insufficient_caps_raise(self):
        spec = SeriesSpec(n_max=16, ell_max=4)
        with pytest.raises(SeriesNonConvergenceError):
            conserved_expectations(WIDE_STATE, sspec=spec)

    def test_validation(self):
        with pytest.raises(ValueError):
            SeriesSpec(n_max=0)
        with pytest.raises(ValueError):
            SeriesSpec(tail_tol=-1.0)

    def test_state_validation(self):
        with pytest.raises(ValueError):
            MagneticCoherentState(Lambda=-0.1, lambda_perp=0.5, lambda3=0.5)
        with pytest.raises(ValueError):
            MagneticCoherentState(Lambda=0.1, lambda_perp=0.5, lambda3=0.5, p1_mean=-1.0)
