"""Determinant-reconstruction tests against a frozen scalar-model oracle."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from speclab import (
    GLParameters,
    RationalDecay,
    Spectrum,
    SquareWell,
    WEval,
    logdet_profile,
    primitive_error,
    psi_log_derivative,
    reconstruct_q,
    square_well_spectrum,
    w_matrix,
    w_x_derivatives,
)
from speclab.reconstruct import _sinhc

# 50-digit scalar reference for the N=1 model (xi = 1.3, ratio = 0.7)
LOGDET_X025 = -0.3065800048524742593
D1_X025 = 0.5945796273030625
D2_X025 = 4.569417795150044673
LOGDET_X090 = 1.049328973525674216
D1_X090 = 2.968611082860167334
D2_X090 = 0.5512320299675570955
SINHC_1E6 = 1.000000000000166666666667

P1 = GLParameters(zeta=(1.3, math.log(0.7)))
P2 = GLParameters(zeta=(0.7, 1.9, math.log(1.2), math.log(0.4)))
P3 = GLParameters(zeta=(0.5, 1.4, 2.9, 0.1, -0.3, 0.8))
P4 = GLParameters(zeta=(0.4, 1.1, 2.3, 3.7,
                        math.log(0.9), math.log(2.0), math.log(3.5),
                        math.log(5.0)))


def five_point(params, x0, h):
    """5-point central differences of the log-determinant at x0."""
    xs = np.array([x0 - 2 * h, x0 - h, x0, x0 + h, x0 + 2 * h])
    ld = np.array([ev.logdet for ev in logdet_profile(params, xs)])
    d1 = (-ld[4] + 8 * ld[3] - 8 * ld[1] + ld[0]) / (12 * h)
    d2 = (-ld[4] + 16 * ld[3] - 30 * ld[2] + 16 * ld[1] - ld[0]) / (12 * h * h)
    return d1, d2


class TestSinhc:
    def test_frozen_small_argument(self):
        assert float(_sinhc(1e-6)) == pytest.approx(SINHC_1E6, rel=1e-15)

    def test_value_at_zero(self):
        assert float(_sinhc(0.0)) == 1.0

    def test_even_function(self):
        assert float(_sinhc(-0.3)) == float(_sinhc(0.3))
        assert float(_sinhc(-5e-5)) == float(_sinhc(5e-5))

    def test_vectorized_matches_scalar(self):
        zs = np.array([0.0, 1e-7, 5e-5, 0.5, 30.0])
        vec = _sinhc(zs)
        assert vec.shape == zs.shape
        for z, v in zip(zs, vec):
            assert float(_sinhc(float(z))) == float(v)

    @given(z=st.floats(min_value=1e-5, max_value=1e-3))
    def test_series_and_direct_agree_near_threshold(self, z):
        # direct sinh(z)/z is cancellation-free here, so it referees the
        # series branch across the 1e-4 switch
        direct = math.sinh(z) / z
        assert float(_sinhc(z)) == pytest.approx(direct, rel=1e-13)


class TestGLParameters:
    def test_properties(self):
        assert P2.N == 2
        assert P2.xi == (0.7, 1.9)
        assert P2.log_ratio == (math.log(1.2), math.log(0.4))
        assert P2.ratio == pytest.approx((1.2, 0.4), rel=1e-15)

    def test_from_spectrum_round_trip(self):
        spec = Spectrum(omega=10.0,
                        xi=(5.389771378626996, 8.2308322061795,
                            9.584578536230211),
                        C=(119.69324758304073, 57.518613137906856,
                           14.734405166203452))
        params = GLParameters.from_spectrum(spec)
        assert params.xi == spec.xi
        expected = tuple(4.0 * x * x / c for x, c in zip(spec.xi, spec.C))
        assert params.ratio == pytest.approx(expected, rel=1e-14)

    def test_integer_entries_coerced(self):
        params = GLParameters(zeta=(1, 0))
        assert params.xi == (1.0,)
        assert params.ratio == (1.0,)

    def test_odd_length_rejected(self):
        with pytest.raises(ValueError):
            GLParameters(zeta=(1.0, 2.0, 3.0))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            GLParameters(zeta=())

    def test_nonpositive_xi_rejected(self):
        with pytest.raises(ValueError):
            GLParameters(zeta=(0.0, 1.0, 0.1, 0.1))
        with pytest.raises(ValueError):
            GLParameters(zeta=(-0.5, 1.0, 0.1, 0.1))

    def test_coincident_xi_rejected(self):
        with pytest.raises(ValueError):
            GLParameters(zeta=(1.0, 1.0, 0.1, 0.2))

    def test_nonfinite_entries_rejected(self):
        with pytest.raises(ValueError):
            GLParameters(zeta=(math.inf, 0.0))
        with pytest.raises(ValueError):
            GLParameters(zeta=(1.0, math.nan))


class TestWMatrix:
    def test_zero_x_is_ratio_diagonal(self):
        raw, scaled, scale = w_matrix(P4, 0.0)
        expected = np.diag(P4.ratio)
        assert np.array_equal(raw, expected)
        assert np.array_equal(scaled, expected)
        assert scale == 0.0

    def test_negative_x_rejected(self):
        with pytest.raises(ValueError):
            w_matrix(P2, -0.1)

    def test_symmetry(self):
        for x in (0.37, 5.0, 60.0):
            raw, scaled, _ = w_matrix(P4, x)
            assert np.array_equal(scaled, scaled.T)
            finite = np.isfinite(raw)
            assert np.array_equal(finite, finite.T)
            assert np.array_equal(raw[finite],
                                  raw.T[finite.T])

    def test_scaled_is_conjugated_raw(self):
        xi = np.asarray(P3.xi)
        for x in (0.2, 1.0, 3.0):
            raw, scaled, _ = w_matrix(P3, x)
            d = np.exp(-xi * x)
            conj = d[:, None] * raw * d[None, :]
            assert scaled == pytest.approx(conj, rel=1e-12, abs=1e-15)

    def test_scale_exponent(self):
        _, _, scale = w_matrix(P4, 2.5)
        assert scale == 2.5 * 2.0 * sum(P4.xi)

    def test_large_x_scaled_stays_finite(self):
        # raw overflows near xi x ~ 350; the scaled matrix must not
        _, scaled, _ = w_matrix(P4, 500.0)
        assert np.all(np.isfinite(scaled))

    def test_wide_rate_spread_no_nan(self):
        # sinh((xi_s - xi_r) x) alone would overflow here; the far branch
        # keeps the off-diagonal finite
        params = GLParameters(zeta=(0.5, 9.0, 0.0, 0.0))
        _, scaled, _ = w_matrix(params, 200.0)
        assert np.all(np.isfinite(scaled))


class TestWDerivatives:
    def test_all_vanish_at_zero(self):
        w1, w2, w1s, w2s = w_x_derivatives(P4, 0.0)
        zero = np.zeros((P4.N, P4.N))
        assert np.array_equal(w1, zero)
        assert np.array_equal(w2, zero)
        assert np.array_equal(w1s, zero)
        assert np.array_equal(w2s, zero)

    def test_negative_x_rejected(self):
        with pytest.raises(ValueError):
            w_x_derivatives(P2, -1.0)

    def test_scaled_forms_are_conjugations(self):
        xi = np.asarray(P4.xi)
        x = 0.6
        w1, w2, w1s, w2s = w_x_derivatives(P4, x)
        d = np.exp(-xi * x)
        assert w1s == pytest.approx(d[:, None] * w1 * d[None, :], rel=1e-12)
        assert w2s == pytest.approx(d[:, None] * w2 * d[None, :], rel=1e-12)

    def test_d1_matches_finite_difference(self):
        d1, _ = five_point(P2, 0.5, 5e-3)
        ev = logdet_profile(P2, np.array([0.5]))[0]
        assert abs(d1 - ev.d1) < 1e-7

    def test_d2_matches_finite_difference(self):
        _, d2 = five_point(P4, 0.8, 5e-3)
        ev = logdet_profile(P4, np.array([0.8]))[0]
        assert abs(d2 - ev.d2) < 1e-6


class TestLogdetProfile:
    def test_frozen_scalar_model(self):
        evs = logdet_profile(P1, np.array([0.25, 0.9]))
        assert evs[0].logdet == pytest.approx(LOGDET_X025, rel=1e-10)
        assert evs[0].d1 == pytest.approx(D1_X025, rel=1e-10)
        assert evs[0].d2 == pytest.approx(D2_X025, rel=1e-10)
        assert evs[1].logdet == pytest.approx(LOGDET_X090, rel=1e-10)
        assert evs[1].d1 == pytest.approx(D1_X090, rel=1e-10)
        assert evs[1].d2 == pytest.approx(D2_X090, rel=1e-10)

    def test_zero_x_values(self):
        ev = logdet_profile(P4, np.array([0.0]))[0]
        assert abs(ev.logdet - sum(P4.log_ratio)) < 1e-12
        assert ev.d1 == 0.0
        assert ev.d2 == 0.0
        assert not ev.singular

    def test_matches_unscaled_slogdet(self):
        # criterion: scaled and direct evaluations agree while the raw
        # matrix is still representable
        for x in np.linspace(0.05, 6.0, 25):
            raw, _, _ = w_matrix(P3, float(x))
            _, ld_raw = np.linalg.slogdet(raw)
            ev = logdet_profile(P3, np.array([x]))[0]
            assert abs(ev.logdet - ld_raw) <= 1e-9 * max(1.0, abs(ld_raw))

    def test_returns_weval(self):
        ev = logdet_profile(P2, np.array([0.4]))[0]
        assert isinstance(ev, WEval)
        assert ev.condition_estimate >= 1.0
        assert math.isfinite(ev.condition_estimate)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            logdet_profile(P2, np.array([]))
        with pytest.raises(ValueError):
            logdet_profile(P2, np.array([[0.1, 0.2]]))
        with pytest.raises(ValueError):
            logdet_profile(P2, np.array([-0.1, 0.2]))
        with pytest.raises(ValueError):
            logdet_profile(P2, np.array([0.2, 0.2]))

    def test_d2_profile_is_continuous(self):
        evs = logdet_profile(P4, np.linspace(0.0, 3.0, 241))
        d2 = np.array([ev.d2 for ev in evs])
        assert np.all(np.isfinite(d2))
        assert np.max(np.abs(np.diff(d2))) < 1.0

    @given(data=st.data())
    def test_zero_x_logdet_is_sum_of_log_ratios(self, data):
        n = data.draw(st.integers(min_value=1, max_value=4))
        xi = data.draw(st.lists(st.floats(min_value=0.1, max_value=5.0),
                                min_size=n, max_size=n, unique=True))
        lr = data.draw(st.lists(st.floats(min_value=-1.0, max_value=1.5),
                                min_size=n, max_size=n))
        params = GLParameters(zeta=tuple(xi) + tuple(lr))
        ev = logdet_profile(params, np.array([0.0]))[0]
        assert abs(ev.logdet - sum(lr)) < 1e-12 * max(1.0, abs(sum(lr)))


class TestPsiLogDerivative:
    def test_equals_profile_d1(self):
        grid = np.linspace(0.0, 2.0, 21)
        pairs = psi_log_derivative(P3, grid)
        evs = logdet_profile(P3, grid)
        assert [p[0] for p in pairs] == [ev.x for ev in evs]
        assert [p[1] for p in pairs] == [ev.d1 for ev in evs]

    def test_zero_at_origin(self):
        pairs = psi_log_derivative(P2, np.array([0.0]))
        assert pairs == [(0.0, 0.0)]


class TestReconstructQ:
    def test_omega_validation(self):
        with pytest.raises(ValueError):
            reconstruct_q(P2, 0.0, np.array([0.1]))
        with pytest.raises(ValueError):
            reconstruct_q(P2, -3.0, np.array([0.1]))

    def test_row_schema(self):
        rows = reconstruct_q(P2, 4.0, np.array([0.0, 0.5]))
        assert set(rows[0]) == {"x", "logdet", "d1", "d2",
                                "q_reconstructed", "flag"}
        assert all(row["flag"] == "ok" for row in rows)

    def test_scaling_relation(self):
        grid = np.linspace(0.0, 1.5, 16)
        omega = 7.0
        rows = reconstruct_q(P4, omega, grid)
        evs = logdet_profile(P4, grid)
        for row, ev in zip(rows, evs):
            assert row["d2"] == ev.d2
            assert row["q_reconstructed"] == (2.0 / omega ** 2) * ev.d2

    def test_square_well_profile(self):
        spec = square_well_spectrum(10.0)
        params = GLParameters.from_spectrum(spec)
        rows = reconstruct_q(params, 10.0, np.linspace(0.0, 1.5, 151))
        assert all(row["flag"] == "ok" for row in rows)
        assert all(math.isfinite(row["q_reconstructed"]) for row in rows)
        assert rows[0]["q_reconstructed"] == 0.0


class TestPrimitiveError:
    def grid_rows(self, potential, xs):
        return [{"x": float(x), "logdet": 0.0, "d1": 0.0, "d2": 0.0,
                 "q_reconstructed": potential.q(float(x)), "flag": "ok"}
                for x in xs]

    def test_identical_inputs_give_zero(self):
        q1 = RationalDecay()
        rows = self.grid_rows(q1, np.linspace(0.0, 2.0, 81))
        rep = primitive_error(q1, rows, 2.0)
        assert rep.direct == 0.0
        assert rep.doubled > 0.0
        assert rep.n_excluded == 0

    def test_singular_rows_excluded(self):
        q1 = RationalDecay()
        rows = self.grid_rows(q1, np.linspace(0.0, 2.0, 81))
        rows[10]["flag"] = "singular"
        rows[40]["flag"] = "singular"
        rep = primitive_error(q1, rows, 2.0)
        assert rep.n_excluded == 2
        assert rep.direct < 1e-4

    def test_window_filter(self):
        q1 = RationalDecay()
        xs = np.linspace(0.0, 3.0, 121)
        rows = self.grid_rows(q1, xs)
        rows_in = [row for row in rows if row["x"] <= 2.0]
        rep_all = primitive_error(q1, rows, 2.0)
        rep_in = primitive_error(q1, rows_in, 2.0)
        assert rep_all == rep_in

    def test_too_few_points_rejected(self):
        q1 = RationalDecay()
        rows = self.grid_rows(q1, np.array([0.0, 0.5]))
        with pytest.raises(ValueError):
            primitive_error(q1, rows, 2.0)

    def test_square_well_reconstruction_error(self):
        # regression guard: observed 0.088 for the direct bookkeeping at
        # omega = 10 on a 151-point grid
        spec = square_well_spectrum(10.0)
        params = GLParameters.from_spectrum(spec)
        sw = SquareWell()
        rows = reconstruct_q(params, 10.0, np.linspace(0.0, 1.5, 151))
        rep = primitive_error(sw, rows, 1.5)
        assert rep.n_excluded == 0
        assert 0.0 < rep.direct < 0.2
        assert rep.doubled > rep.direct
