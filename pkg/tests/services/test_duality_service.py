import numpy as np
import pytest

from app.services.duality_service import DualityService
from app.utils.exceptions import InvalidParameterError

from tests.conftest import AssertionHelpers


def _downlink_sinr(eff: np.ndarray, beamformer: np.ndarray, noise: np.ndarray) -> np.ndarray:
    power = np.abs(eff.conj() @ beamformer) ** 2
    signal = np.diagonal(power)
    return signal / (power.sum(axis=1) - signal + noise)


class TestWaterfill:
    """Test the water-filling power allocation."""

    def test_both_users_active(self):
        """Test q = (1/nu - 1/eps)^+ when both users get power."""
        powers, nu = DualityService.waterfill_with_level([1.0, 4.0], 1.0)
        np.testing.assert_allclose(powers, [0.125, 0.875])
        assert nu == pytest.approx(1.0 / 1.125)

    def test_weak_user_switched_off(self):
        """Test that a user below the water level gets zero power."""
        powers = DualityService.waterfill([1.0, 100.0], 0.5)
        np.testing.assert_allclose(powers, [0.0, 0.5])

    def test_kkt_conditions(self, rng):
        """Test sum q = P and 1/nu - 1/eps_k = q_k on the active set."""
        gains = rng.exponential(size=6)
        powers, nu = DualityService.waterfill_with_level(gains, 3.0)
        assert powers.sum() == pytest.approx(3.0)
        active = powers > 0
        np.testing.assert_allclose(powers[active] + 1.0 / gains[active], 1.0 / nu)
        assert np.all(1.0 / gains[~active] >= 1.0 / nu - 1e-12)

    def test_matches_scalar_bisection(self):
        """Test eps=(4, 2, 1), P=1 against a plain bisection on the water level."""
        gains = np.array([4.0, 2.0, 1.0])
        low, high = 0.0, 1.0 + np.max(1.0 / gains)
        for _ in range(200):
            level = 0.5 * (low + high)
            if np.maximum(level - 1.0 / gains, 0.0).sum() > 1.0:
                high = level
            else:
                low = level
        expected = np.maximum(0.5 * (low + high) - 1.0 / gains, 0.0)

        powers = DualityService.waterfill(gains, 1.0)
        np.testing.assert_allclose(powers, expected, rtol=0, atol=1e-9)
        np.testing.assert_allclose(powers, [0.625, 0.375, 0.0], rtol=0, atol=1e-9)
        assert powers.sum() == pytest.approx(1.0, abs=1e-12)

    def test_zero_gain_gets_no_power(self):
        """Test that users with zero gain are skipped."""
        powers = DualityService.waterfill([0.0, 2.0], 1.0)
        np.testing.assert_allclose(powers, [0.0, 1.0])

    @pytest.mark.parametrize(
        "gains,power",
        [([1.0, 2.0], 0.0), ([1.0, -2.0], 1.0), ([0.0, 0.0], 1.0), ([np.inf, 1.0], 1.0)],
    )
    def test_invalid_inputs(self, gains, power):
        """Test rejected budgets and gains."""
        with pytest.raises(InvalidParameterError):
            DualityService.waterfill(gains, power)


class TestCssm:
    """Test the dual uplink solve."""

    def test_single_user_matched_filter(self, factory, rng):
        """Test that K=1 gives the matched filter with all the power."""
        h = factory.complex_vector(5, rng)[np.newaxis, :]
        dual = DualityService.cssm_solve(h, np.array([0.5]), 2.0)
        np.testing.assert_allclose(np.abs(np.vdot(dual.directions[:, 0], h[0])), np.linalg.norm(h[0]))
        np.testing.assert_allclose(dual.uplink_powers, [2.0])
        assert dual.uplink_sinr[0] == pytest.approx(2.0 * np.linalg.norm(h[0]) ** 2 / 0.5)

    def test_directions_are_unit_norm(self, factory, rng):
        """Test unit receive directions and the power budget."""
        eff = np.stack([factory.complex_vector(4, rng) for _ in range(3)])
        dual = DualityService.cssm_solve(eff, np.ones(3), 4.0)
        np.testing.assert_allclose(np.linalg.norm(dual.directions, axis=0), 1.0)
        assert dual.uplink_powers.sum() == pytest.approx(4.0)
        assert dual.converged

    def test_rate_trace_non_decreasing(self, factory, rng):
        """Test that the uplink sum-rate never drops across CSSM iterations."""
        eff = np.stack([factory.complex_vector(4, rng) for _ in range(3)])
        dual = DualityService.cssm_solve(eff, np.ones(3), 10.0)
        assert len(dual.rate_trace) >= 2
        AssertionHelpers.assert_non_decreasing(dual.rate_trace)

    def test_directions_maximize_sinr(self, factory, rng):
        """Test that no random unit direction beats the max-SINR one."""
        eff = np.stack([factory.complex_vector(3, rng) for _ in range(2)])
        powers = np.array([0.7, 1.3])
        noise = np.ones(2)
        best = DualityService.max_sinr_direction(eff, powers, noise, 0)
        best_sinr = DualityService.uplink_sinr(eff, powers, noise, np.stack([best, best], axis=1))[0]
        for _ in range(50):
            v = factory.complex_vector(3, rng)
            v /= np.linalg.norm(v)
            sinr = DualityService.uplink_sinr(eff, powers, noise, np.stack([v, v], axis=1))[0]
            assert sinr <= best_sinr + 1e-10

    def test_invalid_power(self, factory, rng):
        """Test that P must be positive."""
        with pytest.raises(InvalidParameterError):
            DualityService.cssm_solve(factory.complex_vector(3, rng)[np.newaxis, :], np.ones(1), 0.0)


class TestPowerMap:
    """Test the uplink to downlink power mapping."""

    def test_downlink_reproduces_uplink_sinr(self, factory, rng):
        """Test that mapped downlink powers achieve the uplink SINRs with the same total power."""
        eff = np.stack([factory.complex_vector(4, rng) for _ in range(3)])
        noise = np.ones(3)
        dual = DualityService.cssm_solve(eff, noise, 5.0)
        powers = DualityService.downlink_powers(dual, eff, noise)
        beamformer = DualityService.downlink_power_map(dual, eff, noise)
        np.testing.assert_allclose(_downlink_sinr(eff, beamformer, noise), dual.uplink_sinr, rtol=1e-6)
        assert powers.sum() == pytest.approx(dual.uplink_powers.sum(), rel=1e-6)

    def test_uplink_power_check(self, factory, rng):
        """Test that the transposed system recovers the uplink powers."""
        eff = np.stack([factory.complex_vector(3, rng) for _ in range(2)])
        noise = np.ones(2)
        dual = DualityService.cssm_solve(eff, noise, 2.0)
        np.testing.assert_allclose(
            DualityService.uplink_power_check(dual, eff, noise), dual.uplink_powers, rtol=1e-6, atol=1e-10
        )

    def test_design_digital_meets_budget(self, factory, rng):
        """Test that the digital design radiates exactly P."""
        eff = np.stack([factory.complex_vector(3, rng) for _ in range(2)])
        f_rf = np.eye(3)
        f_bb, dual = DualityService.design_digital(eff, np.ones(2), f_rf, 3.0)
        assert np.linalg.norm(f_rf @ f_bb) ** 2 == pytest.approx(3.0)
        assert dual.uplink_sum_rate > 0

    def test_normalize_zero_beamformer(self):
        """Test that a silent beamformer cannot be normalized."""
        with pytest.raises(InvalidParameterError):
            DualityService.normalize_to_power(np.eye(2), np.zeros((2, 2)), 1.0)
