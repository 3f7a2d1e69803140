import numpy as np
import pytest

from app.models.codebook import PhaseCodebook
from app.models.design import HeuristicOpts, StopReason
from app.models.power import Architecture
from app.services.codebook_service import CodebookService
from app.services.heuristic_service import HeuristicService
from app.services.metrics_service import MetricsService
from app.utils.exceptions import InvalidParameterError

from tests.conftest import cssm_sum_rate, enumerate_assignments


def _rate(channel_set, analog, f_bb):
    return MetricsService.sum_rate(channel_set, CodebookService.materialize(analog), f_bb)


class TestRowSearch:
    """Test the row-wise analog search."""

    def test_best_row_matches_naive_search(self, factory, rng):
        """Test the rank-one search against re-evaluating every candidate."""
        channel_set = factory.gaussian_channel_set(6, 2, rng)
        analog = factory.analog(6, 2, 2, rng)
        f_bb = factory.digital(2, 2, rng)
        for row in range(6):
            best_value = -np.inf
            for phase in range(4):
                for rf in range(2):
                    rf_index = np.array(analog.rf_index)
                    phase_index = np.array(analog.phase_index)
                    rf_index[row], phase_index[row] = rf, phase
                    best_value = max(best_value, _rate(channel_set, analog.with_rows(rf_index, phase_index), f_bb))
            rf, phase = HeuristicService.best_row_assignment(channel_set, analog, f_bb, row)
            rf_index = np.array(analog.rf_index)
            phase_index = np.array(analog.phase_index)
            rf_index[row], phase_index[row] = rf, phase
            chosen = _rate(channel_set, analog.with_rows(rf_index, phase_index), f_bb)
            assert chosen == pytest.approx(best_value, rel=1e-9)

    def test_current_row_kept_when_optimal(self, factory, rng):
        """Test that a row already at its optimum is not moved."""
        channel_set = factory.gaussian_channel_set(4, 2, rng)
        analog = factory.analog(4, 2, 1, rng)
        f_bb = factory.digital(2, 2, rng)
        swept = HeuristicService.analog_sweep(channel_set, analog, f_bb)
        rf, phase = HeuristicService.best_row_assignment(channel_set, swept, f_bb, 3)
        assert (rf, phase) == (swept.rf_index[3], swept.phase_index[3])

    def test_sweep_never_lowers_sum_rate(self, factory, rng):
        """Test that one sweep with F_BB fixed cannot decrease the sum-rate."""
        channel_set = factory.gaussian_channel_set(8, 3, rng)
        analog = factory.analog(8, 3, 2, rng)
        f_bb = factory.digital(3, 3, rng)
        swept = HeuristicService.analog_sweep(channel_set, analog, f_bb)
        assert _rate(channel_set, swept, f_bb) >= _rate(channel_set, analog, f_bb) - 1e-12

    def test_allowed_rf_is_respected(self, factory, rng):
        """Test that a frozen partition only changes phases."""
        channel_set = factory.gaussian_channel_set(6, 2, rng)
        partition = CodebookService.fixed_partition(6, 2)
        analog = factory.analog(6, 2, 2, rng).with_rows(partition, np.zeros(6, dtype=np.int64))
        swept = HeuristicService.analog_sweep(channel_set, analog, factory.digital(2, 2, rng), allowed_rf=partition)
        np.testing.assert_array_equal(swept.rf_index, partition)


class TestHeuristicDesign:
    """Test the alternating heuristic design."""

    def test_returns_best_iterate(self, channels, codebook):
        """Test that the result is the best sum-rate in the trace."""
        result = HeuristicService.heuristic_design(channels, 10.0, codebook, 2)
        assert result.sum_rate == pytest.approx(max(record.sum_rate for record in result.trace))
        assert result.sum_rate == pytest.approx(MetricsService.sum_rate(channels, result.f_rf, result.f_bb))
        assert result.sum_rate_trace == sorted(result.sum_rate_trace)

    def test_result_is_feasible(self, channels, codebook):
        """Test the structure and power of the output."""
        result = HeuristicService.heuristic_design(channels, 10.0, codebook, 2)
        assert result.scheme == "heuristic"
        assert result.architecture == Architecture.DYNAMIC_SUBARRAY
        np.testing.assert_array_equal(np.count_nonzero(result.f_rf, axis=1), np.ones(16))
        assert MetricsService.transmit_power(result.f_rf, result.f_bb) == pytest.approx(10.0)

    def test_single_user_bound(self, factory, rng):
        """Test K=1 against the unquantized co-phasing bound."""
        channel_set = factory.gaussian_channel_set(8, 1, rng, noise_var=0.5)
        result = HeuristicService.heuristic_design(channel_set, 2.0, PhaseCodebook(bits=3, nt=8), 1)
        h = channel_set.channels[0]
        bound = np.log2(1 + 2.0 * np.sum(np.abs(h)) ** 2 / (8 * 0.5))
        assert result.sum_rate <= bound + 1e-9
        assert result.sum_rate >= result.trace[0].sum_rate

    def test_iteration_cap(self, channels, codebook):
        """Test the outer iteration cap."""
        result = HeuristicService.heuristic_design(
            channels, 10.0, codebook, 2, HeuristicOpts(outer_max_iters=1, outer_tol=1e-15)
        )
        assert result.iterations == 1
        assert result.stop_reason in (StopReason.MAX_ITERS, StopReason.STALLED, StopReason.TOLERANCE)

    def test_below_global_enumeration(self, factory, rng):
        """Test nt=4, n_rf=K=2, B=1: no design beats the best of all 256 assignments with CSSM digital."""
        codebook = PhaseCodebook(bits=1, nt=4)
        assignments = list(enumerate_assignments(codebook, 2))
        for _ in range(5):
            channel_set = factory.gaussian_channel_set(4, 2, rng)
            optimum = max(cssm_sum_rate(channel_set, analog, 3.0) for analog in assignments)
            result = HeuristicService.heuristic_design(channel_set, 3.0, codebook, 2)
            assert result.sum_rate <= optimum + 1e-9
            assert result.sum_rate == pytest.approx(cssm_sum_rate(channel_set, result.analog, 3.0), rel=1e-9)

    def test_fewer_chains_than_users(self, factory, rng):
        """Test that K users need at least K RF chains."""
        channel_set = factory.gaussian_channel_set(6, 3, rng)
        with pytest.raises(InvalidParameterError):
            HeuristicService.heuristic_design(channel_set, 1.0, PhaseCodebook(bits=1, nt=6), 2)
