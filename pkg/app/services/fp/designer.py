"""FP-based hybrid beamformer design loop."""

import logging
from typing import Optional

import numpy as np

from app.models.channel import ChannelSet
from app.models.codebook import PhaseCodebook
from app.models.design import AnalogSolver, DesignResult, FpOptions, FpState, IterationRecord, StopReason
from app.models.power import Architecture
from app.services.codebook_service import CodebookService
from app.services.fp.analog import FpAnalog
from app.services.fp.auxiliary import FpAuxiliary
from app.services.fp.digital import FpDigital
from app.services.initialization import InitializationService
from app.services.metrics_service import MetricsService

logger = logging.getLogger(__name__)


class FpDesigner:
    """Alternating r -> t -> analog -> digital updates."""

    @staticmethod
    def fp_design(
        channels: ChannelSet,
        total_power: float,
        codebook: PhaseCodebook,
        n_rf: int,
        opts: Optional[FpOptions] = None,
    ) -> DesignResult:
        """
        Design a dynamic-subarray hybrid beamformer with the FP algorithm.

        Each iteration updates r and t in closed form, runs the analog step on
        delta and re-solves the digital step with a fresh multiplier search.
        An iteration whose sum-rate falls below the incumbent is replaced by a
        digital-only update on the incumbent F_RF; when that does not help
        either the run stops as stalled. The loop ends when the relative
        sum-rate change drops below ``opts.tol`` or after ``opts.max_iters``.

        Args:
            channels: Channel set
            total_power: Power budget P
            codebook: Phase codebook
            n_rf: Number of RF chains
            opts: Stopping rule and analog solver choice

        Returns:
            DesignResult: Final beamformers, sum-rate and the per-iteration trace

        Raises:
            InvalidParameterError: If the inputs are inconsistent
            ExactSolverBudgetError: If the exact analog solver is selected for a too large instance
        """
        opts = opts or FpOptions()
        InitializationService.validate_problem(channels, total_power, codebook, n_rf)

        analog, f_bb, _ = InitializationService.initial_point(channels, total_power, codebook, n_rf, opts.cssm)
        f_rf = CodebookService.materialize(analog)
        rate = MetricsService.sum_rate(channels, f_rf, f_bb)
        trace = [IterationRecord(iteration=0, sum_rate=rate, best_sum_rate=rate)]
        stop_reason = StopReason.MAX_ITERS
        iteration = 0

        for iteration in range(1, opts.max_iters + 1):
            r = FpAuxiliary.update_r(channels, f_rf, f_bb)
            t = FpAuxiliary.update_t(channels, f_rf, f_bb, r)
            state = FpState(f_rf=analog, f_bb=f_bb, r=r, t=t, iteration_trace=trace)
            form = FpAuxiliary.build_delta_form(channels, state.r, state.t)

            if opts.analog_solver == AnalogSolver.EXACT:
                new_analog = FpAnalog.solve_analog_exact(
                    form, f_bb, codebook, n_rf, incumbent=analog, budget=opts.exact_budget
                )
            else:
                new_analog = FpAnalog.solve_analog_coordinate(form, analog, f_bb, opts.max_passes)
            new_f_rf = CodebookService.materialize(new_analog)
            new_f_bb, mu = FpDigital.solve_digital_with_multiplier(channels, new_f_rf, r, t, total_power)
            new_rate = MetricsService.sum_rate(channels, new_f_rf, new_f_bb)
            changed_rows = int(np.count_nonzero(
                (new_analog.rf_index != analog.rf_index) | (new_analog.phase_index != analog.phase_index)
            ))

            slack = 1e-12 * max(1.0, rate)
            if new_rate < rate - slack:
                logger.debug(f"FP iteration {iteration}: full step lowered sum-rate, trying digital-only step")
                new_analog, new_f_rf, changed_rows = analog, f_rf, 0
                new_f_bb, mu = FpDigital.solve_digital_with_multiplier(channels, f_rf, r, t, total_power)
                new_rate = MetricsService.sum_rate(channels, f_rf, new_f_bb)
                if new_rate < rate - slack:
                    trace.append(FpDesigner._record(
                        iteration, channels, new_f_rf, new_f_bb, r, t, form, mu, 0, rate, new_rate, False
                    ))
                    stop_reason = StopReason.STALLED
                    break

            trace.append(FpDesigner._record(
                iteration, channels, new_f_rf, new_f_bb, r, t, form, mu, changed_rows, max(rate, new_rate), new_rate, True
            ))
            previous = rate
            analog, f_rf, f_bb, rate = new_analog, new_f_rf, new_f_bb, new_rate
            logger.debug(f"FP iteration {iteration}: sum-rate {rate:.6f}, {changed_rows} rows changed")
            if abs(rate - previous) < opts.tol * max(1.0, previous):
                stop_reason = StopReason.TOLERANCE
                break

        converged = stop_reason != StopReason.MAX_ITERS
        if not converged:
            logger.warning(f"FP design did not converge within {opts.max_iters} iterations")

        return DesignResult(
            scheme="fp",
            architecture=Architecture.DYNAMIC_SUBARRAY,
            f_rf=f_rf,
            f_bb=f_bb,
            analog=analog,
            sum_rate=rate,
            iterations=iteration,
            converged=converged,
            stop_reason=stop_reason,
            trace=trace,
        )

    @staticmethod
    def _record(
        iteration, channels, f_rf, f_bb, r, t, form, mu, changed_rows, best_rate, rate, accepted
    ) -> IterationRecord:
        return IterationRecord(
            iteration=iteration,
            sum_rate=rate,
            best_sum_rate=best_rate,
            f_q=FpAuxiliary.quadratic_objective(channels, f_rf, f_bb, r, t),
            delta=FpAnalog.delta_value(form, f_rf, f_bb),
            mu=mu,
            changed_rows=changed_rows,
            accepted=accepted,
        )
