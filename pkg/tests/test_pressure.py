"""Pressure values, derivative jets, and the constraint-sum quadruple."""

import math

import mpmath as mp
import numpy as np
import pytest

from thermoforge.errors import (
    DomainError,
    OrderLimitError,
    SizeLimitError,
    UnsupportedConfigurationError,
)
from thermoforge.pressure import (
    MAX_JET_ORDER,
    TaylorJet,
    finite_difference_jet,
    pressure,
    pressure_jet,
    pressure_spectral,
    q_values,
    verify_derivative_formulas,
)
from thermoforge.symbolic import CylinderPotential, SubshiftSpec


def _phi(values, window=1, transition=None):
    values = np.asarray(values, dtype=np.float64)
    n = round(len(values) ** (1.0 / window))
    return CylinderPotential(SubshiftSpec(n, transition), window, values)


def _transfer_log_radius(values, n, window, t):
    """Independent spectral oracle: dense transfer matrix on (window-1)-words."""
    values = np.asarray(values, dtype=np.float64)
    if window == 1:
        # Degenerate case: the closed form is its own oracle.
        return math.log(np.exp(t * values).sum())
    states = n ** (window - 1)
    matrix = np.zeros((states, states))
    for word_value in range(n**window):
        prefix = word_value // n
        suffix = word_value % states
        matrix[prefix, suffix] += math.exp(t * values[word_value])
    eigenvalues = np.linalg.eigvals(matrix)
    return math.log(max(abs(eigenvalues)))


class TestPressureValues:
    def test_two_symbol_closed_form(self):
        phi = _phi([0.0, 1.0])
        assert pressure(phi, 1.0) == pytest.approx(math.log(1.0 + math.e), rel=1e-15)
        assert pressure(phi, 0.0) == pytest.approx(math.log(2.0), rel=1e-15)
        assert pressure(phi, -1.0) == pytest.approx(
            math.log(1.0 + math.exp(-1.0)), rel=1e-15
        )

    def test_zero_potential_gives_log_alphabet_size(self):
        for n in (2, 3, 5):
            phi = _phi([0.0] * n)
            assert pressure(phi, 3.7) == pytest.approx(math.log(n), rel=1e-15)
        for window in (2, 3):
            phi = _phi([0.0] * 2**window, window=window)
            assert pressure(phi, 1.3) == pytest.approx(math.log(2.0), rel=1e-12)

    def test_wide_window_matches_dense_eigenvalue_oracle(self):
        rng = np.random.Generator(np.random.Philox(42))
        for window in (2, 3):
            for n in (2, 3):
                values = rng.uniform(-1.5, 1.5, size=n**window)
                phi = _phi(values, window=window)
                for t in (-0.7, 0.0, 1.0, 2.3):
                    expected = _transfer_log_radius(values, n, window, t)
                    assert pressure(phi, t) == pytest.approx(expected, abs=1e-10)

    def test_window_lift_preserves_pressure(self):
        # Viewing a window-1 potential as window-2 (ignore the second
        # symbol) must not change the pressure.
        rng = np.random.Generator(np.random.Philox(7))
        values = rng.uniform(-1.0, 1.0, size=3)
        lifted = np.repeat(values, 3)
        for t in (-1.0, 0.5, 2.0):
            assert pressure(_phi(lifted, window=2), t) == pytest.approx(
                pressure(_phi(values), t), abs=1e-11
            )

    def test_golden_mean_graph_spectral_value(self):
        phi = CylinderPotential(SubshiftSpec(2, ((1, 1), (1, 0))), 1, [0.0, 0.0])
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        assert pressure_spectral(phi, 1.0) == pytest.approx(math.log(golden), rel=1e-12)

    def test_all_ones_graph_matches_full_shift_closed_form(self):
        values = [0.3, -0.2, 1.1]
        ones = tuple((1,) * 3 for _ in range(3))
        constrained = CylinderPotential(SubshiftSpec(3, ones), 1, values)
        assert pressure_spectral(constrained, 0.8) == pytest.approx(
            pressure(_phi(values), 0.8), abs=1e-12
        )

    def test_spectral_entry_point_rejects_full_shift(self):
        with pytest.raises(UnsupportedConfigurationError):
            pressure_spectral(_phi([0.0, 1.0]), 1.0)

    def test_pressure_rejects_transition_constrained_space(self):
        phi = CylinderPotential(SubshiftSpec(2, ((1, 1), (1, 0))), 1, [0.0, 0.0])
        with pytest.raises(UnsupportedConfigurationError):
            pressure(phi, 1.0)


class TestPressureProperties:
    def test_convexity_in_parameter(self):
        rng = np.random.Generator(np.random.Philox(11))
        values = rng.uniform(-2.0, 2.0, size=4)
        phi = _phi(values)
        ts = np.linspace(-2.0, 2.0, 17)
        ps = [pressure(phi, t) for t in ts]
        for a, b, c in zip(ps, ps[1:], ps[2:]):
            assert b <= 0.5 * (a + c) + 1e-12

    def test_shift_equivariance(self):
        phi = _phi([0.1, -0.4, 0.9])
        for t in (-1.5, 0.0, 0.7, 2.0):
            for delta in (-3.0, 0.25, 10.0):
                assert pressure(phi.shifted(delta), t) == pytest.approx(
                    pressure(phi, t) + t * delta, rel=1e-13, abs=1e-13
                )

    def test_monotone_in_potential(self):
        rng = np.random.Generator(np.random.Philox(23))
        low = rng.uniform(-1.0, 1.0, size=4)
        high = low + rng.uniform(0.0, 0.5, size=4)
        for t in (0.5, 1.0, 2.0):
            assert pressure(_phi(low), t) <= pressure(_phi(high), t) + 1e-14


class TestPressureJet:
    def test_against_high_precision_differentiation(self):
        phi = _phi([0.0, 1.0])
        jet = pressure_jet(phi, 1.0, 6)
        with mp.workdps(40):
            f = lambda t: mp.log(1 + mp.exp(t))  # noqa: E731 - oracle closure
            for k in range(7):
                expected = float(mp.diff(f, mp.mpf(1), k))
                assert jet.derivs[k] == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_order_zero_and_metadata(self):
        phi = _phi([0.0, 1.0])
        jet = pressure_jet(phi, 2.0, 0)
        assert jet.order == 0
        assert jet.t_star == 2.0
        assert jet.derivs == (pressure(phi, 2.0),)

    def test_first_derivative_is_weighted_mean(self):
        values = np.array([-0.3, 0.8, 1.7])
        phi = _phi(values)
        jet = pressure_jet(phi, 0.6, 1)
        weights = np.exp(0.6 * values)
        weights /= weights.sum()
        assert jet.derivs[1] == pytest.approx(float(weights @ values), rel=1e-14)

    def test_constant_potential_has_flat_jet(self):
        phi = _phi([1.5, 1.5, 1.5])
        jet = pressure_jet(phi, 1.0, 4)
        assert jet.derivs[0] == pytest.approx(math.log(3.0) + 1.5, rel=1e-15)
        assert jet.derivs[1] == pytest.approx(1.5, rel=1e-15)
        assert jet.derivs[2:] == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)

    def test_order_limits(self):
        phi = _phi([0.0, 1.0])
        with pytest.raises(OrderLimitError):
            pressure_jet(phi, 1.0, MAX_JET_ORDER + 1)
        with pytest.raises(DomainError):
            pressure_jet(phi, 1.0, -1)

    def test_requires_window_one(self):
        phi = _phi([0.0, 1.0, 2.0, 3.0], window=2)
        with pytest.raises(UnsupportedConfigurationError):
            pressure_jet(phi, 1.0, 2)


class TestQValues:
    def test_hand_example(self):
        q = q_values([0.0, 1.0], 1.0)
        e = math.e
        assert q.log_scale == 0.0
        assert q.q0 == pytest.approx(1.0 + e, rel=1e-15)
        assert q.q1 == pytest.approx(e, rel=1e-15)
        assert q.q2 == pytest.approx(e, rel=1e-15)
        assert q.r2 == pytest.approx(e, rel=1e-15)

    def test_identity_holds_for_random_inputs(self):
        rng = np.random.Generator(np.random.Philox(5))
        for _ in range(200):
            z = rng.uniform(-3.0, 3.0, size=rng.integers(1, 9))
            t = rng.uniform(-2.0, 2.0)
            q = q_values(z, t)
            # The subtracted form loses accuracy to cancellation at the
            # scale of q0*r2, so the comparison budget must carry both terms.
            residual = abs(q.q2 - (q.q0 * q.r2 - q.q1**2))
            assert residual <= 1e-12 * abs(q.q2) + 1e-12 * abs(q.q0 * q.r2) + 1e-300

    def test_extreme_inputs_use_scaled_representation(self):
        q = q_values([0.0, 400.0], 1.0)
        assert q.log_scale == 400.0
        assert all(map(math.isfinite, (q.q0, q.q1, q.q2, q.r2)))
        # Ratios of same-scale fields are scale-free.
        assert q.q1 / q.q0 == pytest.approx(400.0, rel=1e-150)

    def test_moderate_shift_is_unscaled(self):
        q = q_values([0.0, 200.0], 1.0)
        assert q.log_scale == 0.0
        assert q.q0 == pytest.approx(1.0 + math.exp(200.0), rel=1e-15)

    def test_near_constant_values_do_not_raise(self):
        for eps in (0.0, 1e-12, 1e-8):
            q = q_values([1.0, 1.0 + eps, 1.0 - eps], 1.0)
            assert q.q2 >= 0.0

    def test_input_validation(self):
        with pytest.raises(DomainError):
            q_values([], 1.0)
        with pytest.raises(DomainError):
            q_values([0.0, np.nan], 1.0)
        with pytest.raises(SizeLimitError):
            q_values(np.zeros(2049), 1.0)


class TestDerivativeVerification:
    def test_passes_on_random_potentials(self):
        rng = np.random.Generator(np.random.Philox(17))
        for _ in range(30):
            n = int(rng.integers(2, 7))
            values = rng.uniform(-2.0, 2.0, size=n)
            t_star = float(rng.uniform(0.1, 2.5))
            report = verify_derivative_formulas(_phi(values), t_star)
            assert report["passed"], report
            for name in ("second", "third", "fourth"):
                assert report[name]["ok"]
                assert report[name]["residual"] <= report[name]["tolerance"]

    def test_report_shape(self):
        report = verify_derivative_formulas(_phi([0.0, 1.0]), 1.0)
        assert set(report) == {"second", "third", "fourth", "passed"}
        entry = report["second"]
        assert set(entry) == {"derivative", "moment_form", "residual", "tolerance", "ok"}


class TestFiniteDifferenceJet:
    def test_agrees_with_analytic_jet(self):
        rng = np.random.Generator(np.random.Philox(29))
        for _ in range(10):
            n = int(rng.integers(2, 6))
            values = rng.uniform(-2.0, 2.0, size=n)
            t_star = float(rng.uniform(0.2, 2.0))
            phi = _phi(values)
            analytic = pressure_jet(phi, t_star, 4)
            numeric = finite_difference_jet(phi, t_star, 4)
            for k in range(5):
                scale = max(1.0, abs(analytic.derivs[k]))
                assert abs(numeric.derivs[k] - analytic.derivs[k]) <= 1e-6 * scale

    def test_order_guard(self):
        phi = _phi([0.0, 1.0])
        with pytest.raises(OrderLimitError):
            finite_difference_jet(phi, 1.0, 5)
        with pytest.raises(OrderLimitError):
            finite_difference_jet(phi, 1.0, 0)


def test_taylor_jet_coerces_to_floats():
    jet = TaylorJet(1, (2, 3))
    assert jet.t_star == 1.0
    assert jet.derivs == (2.0, 3.0)
    assert jet.order == 1
