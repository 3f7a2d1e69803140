"""Heuristic hybrid beamformer design: row-wise analog search plus duality-based digital stage."""

import logging
from typing import Optional, Tuple

import numpy as np

from app.models.channel import ChannelSet
from app.models.codebook import AnalogBeamformer, PhaseCodebook
from app.models.design import DesignResult, HeuristicOpts, IterationRecord, StopReason
from app.models.power import Architecture
from app.services.codebook_service import CodebookService
from app.services.duality_service import DualityService
from app.services.initialization import InitializationService
from app.services.metrics_service import MetricsService

logger = logging.getLogger(__name__)


class HeuristicService:
    """Service class for the heuristic alternating design."""

    @staticmethod
    def _rate_values(channels: ChannelSet, gains: np.ndarray) -> np.ndarray:
        sinr = MetricsService.sinr_from_gains(gains, channels.noise_vars)
        return np.sum(np.log2(1.0 + sinr), axis=-1)

    @staticmethod
    def best_row_assignment(
        channels: ChannelSet,
        f_rf: AnalogBeamformer,
        f_bb: np.ndarray,
        row_index: int,
        allowed_rf: Optional[np.ndarray] = None,
    ) -> Tuple[int, int]:
        """
        Best (rf_index, phase_index) for one antenna with all other rows fixed.

        All n_rf * 2^B candidates are scored by the sum-rate through a
        rank-one update of the gain matrix. The current pair is kept unless a
        candidate is strictly better; among equal maxima the smallest phase,
        then the smallest chain, wins.

        Args:
            channels: Channel set
            f_rf: Current analog assignment
            f_bb: Digital beamformer (held fixed)
            row_index: Antenna to update
            allowed_rf: Optional chain each antenna is restricted to

        Returns:
            Tuple[int, int]: Chosen rf_index and phase_index
        """
        f_bb = np.asarray(f_bb)
        dense = CodebookService.materialize(f_rf)
        gains = MetricsService.gain_matrix(channels, dense, f_bb)
        return HeuristicService._best_row(channels, f_rf, gains, f_bb, row_index, allowed_rf)[:2]

    @staticmethod
    def _best_row(
        channels: ChannelSet,
        f_rf: AnalogBeamformer,
        gains: np.ndarray,
        f_bb: np.ndarray,
        row: int,
        allowed_rf: Optional[np.ndarray],
    ) -> Tuple[int, int, np.ndarray]:
        current_rf = int(f_rf.rf_index[row])
        current_phase = int(f_rf.phase_index[row])
        candidates = MetricsService.row_candidate_gains(
            channels.channels, gains, f_rf.codebook.entries, current_rf, current_phase, f_bb, row
        )
        values = HeuristicService._rate_values(channels, candidates)
        if allowed_rf is not None:
            mask = np.full(values.shape, -np.inf)
            mask[:, allowed_rf[row]] = 0.0
            values = values + mask
        current = float(values[current_phase, current_rf])
        phase, rf = np.unravel_index(np.argmax(values), values.shape)
        if not np.isfinite(current) or values[phase, rf] > current + 1e-12 * max(1.0, abs(current)):
            return int(rf), int(phase), candidates[phase, rf]
        return current_rf, current_phase, candidates[current_phase, current_rf]

    @staticmethod
    def analog_sweep(
        channels: ChannelSet,
        f_rf: AnalogBeamformer,
        f_bb: np.ndarray,
        allowed_rf: Optional[np.ndarray] = None,
    ) -> AnalogBeamformer:
        """One pass over antennas 0..nt-1 applying ``best_row_assignment`` in order."""
        f_bb = np.asarray(f_bb)
        rf_index = np.array(f_rf.rf_index)
        phase_index = np.array(f_rf.phase_index)
        current = f_rf
        gains = MetricsService.gain_matrix(channels, CodebookService.materialize(f_rf), f_bb)
        for row in range(f_rf.nt):
            rf, phase, gains = HeuristicService._best_row(channels, current, gains, f_bb, row, allowed_rf)
            if rf != rf_index[row] or phase != phase_index[row]:
                rf_index[row], phase_index[row] = rf, phase
                current = f_rf.with_rows(rf_index, phase_index)
        return current

    @staticmethod
    def heuristic_design(
        channels: ChannelSet,
        total_power: float,
        codebook: PhaseCodebook,
        n_rf: int,
        opts: Optional[HeuristicOpts] = None,
        allowed_rf: Optional[np.ndarray] = None,
        scheme: str = "heuristic",
    ) -> DesignResult:
        """
        Alternate an analog row sweep with a duality-based digital stage.

        The digital stage re-solves CSSM on the new effective channels,
        maps the dual powers to the downlink and normalizes to P. The best
        iterate seen is returned. The loop continues from a new iterate only
        when it is within ``outer_tol`` of the best; otherwise it stops as
        stalled.

        Args:
            channels: Channel set
            total_power: Power budget P
            codebook: Phase codebook
            n_rf: Number of RF chains
            opts: Outer stopping rule and CSSM options
            allowed_rf: Freeze antenna i to chain allowed_rf[i] (fixed-subarray search)
            scheme: Label stored in the result

        Returns:
            DesignResult: Best iterate with the trace of best-so-far sum-rates
        """
        opts = opts or HeuristicOpts()
        InitializationService.validate_problem(channels, total_power, codebook, n_rf)

        analog, f_bb, _ = InitializationService.initial_point(channels, total_power, codebook, n_rf, opts.cssm)
        rate = MetricsService.sum_rate(channels, CodebookService.materialize(analog), f_bb)
        best = (analog, f_bb, rate)
        trace = [IterationRecord(iteration=0, sum_rate=rate, best_sum_rate=rate)]
        stop_reason = StopReason.MAX_ITERS
        iteration = 0

        for iteration in range(1, opts.outer_max_iters + 1):
            new_analog = HeuristicService.analog_sweep(channels, analog, f_bb, allowed_rf)
            f_rf = CodebookService.materialize(new_analog)
            eff = MetricsService.effective_channels(channels, f_rf)
            new_f_bb, _ = DualityService.design_digital(eff, channels.noise_vars, f_rf, total_power, opts.cssm)
            new_rate = MetricsService.sum_rate(channels, f_rf, new_f_bb)
            changed_rows = int(np.count_nonzero(
                (new_analog.rf_index != analog.rf_index) | (new_analog.phase_index != analog.phase_index)
            ))

            accepted = new_rate > best[2]
            if accepted:
                best = (new_analog, new_f_bb, new_rate)
            trace.append(IterationRecord(
                iteration=iteration,
                sum_rate=new_rate,
                best_sum_rate=best[2],
                changed_rows=changed_rows,
                accepted=accepted,
            ))
            logger.debug(f"Heuristic iteration {iteration}: sum-rate {new_rate:.6f}, {changed_rows} rows changed")

            if new_rate < best[2] - opts.outer_tol * max(1.0, best[2]):
                stop_reason = StopReason.STALLED
                break
            previous = rate
            analog, f_bb, rate = new_analog, new_f_bb, new_rate
            if abs(rate - previous) < opts.outer_tol * max(1.0, previous):
                stop_reason = StopReason.TOLERANCE
                break

        converged = stop_reason != StopReason.MAX_ITERS
        if not converged:
            logger.warning(f"Heuristic design did not converge within {opts.outer_max_iters} iterations")

        best_analog, best_f_bb, best_rate = best
        architecture = Architecture.FIXED_SUBARRAY if allowed_rf is not None else Architecture.DYNAMIC_SUBARRAY
        return DesignResult(
            scheme=scheme,
            architecture=architecture,
            f_rf=CodebookService.materialize(best_analog),
            f_bb=best_f_bb,
            analog=best_analog,
            sum_rate=best_rate,
            iterations=iteration,
            converged=converged,
            stop_reason=stop_reason,
            trace=trace,
        )
