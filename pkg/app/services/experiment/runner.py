"""
Monte-Carlo experiment runner.

Every (sweep point, trial) pair is one work item. Channels of trial t are
drawn from sub-streams of the master seed keyed by (t, user), so all
schemes of a trial see the same ChannelSet and results do not depend on
the number of workers.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.models.channel import ChannelRecord, ChannelSet
from app.models.codebook import PhaseCodebook
from app.models.design import DesignResult
from app.models.experiment import (
    ConvergenceRow,
    ExperimentConfig,
    ResultRow,
    Scheme,
    SweepPoint,
    TrialOutcome,
)
from app.services.baseline_service import BaselineService
from app.services.channel_service import ChannelService
from app.services.fp import FpService
from app.services.heuristic_service import HeuristicService
from app.services.metrics_service import MetricsService

logger = logging.getLogger(__name__)


class ExperimentRunner:
    """Service class for experiment execution and aggregation."""

    @staticmethod
    def design(
        scheme: Scheme,
        channels: ChannelSet,
        total_power: float,
        codebook: PhaseCodebook,
        n_rf: int,
        config: ExperimentConfig,
    ) -> DesignResult:
        """Dispatch one design call to the scheme's service."""
        if scheme == Scheme.FP:
            return FpService.fp_design(channels, total_power, codebook, n_rf, config.fp)
        if scheme == Scheme.HEURISTIC:
            return HeuristicService.heuristic_design(channels, total_power, codebook, n_rf, config.heuristic)
        if scheme == Scheme.FIXED_SUBARRAY:
            return BaselineService.fixed_subarray_design(channels, total_power, codebook, n_rf, config.heuristic)
        return BaselineService.fully_digital_design(channels, total_power, config.heuristic.cssm)

    @staticmethod
    def channels_for(config: ExperimentConfig, point: SweepPoint, trial_index: int) -> ChannelSet:
        return ChannelService.generate_channel_set(
            point.geometry,
            point.users,
            config.master_seed,
            trial_index=trial_index,
            num_paths=config.num_paths,
            noise_var=1.0,
        )

    @staticmethod
    def channel_records(config: ExperimentConfig, points: Optional[List[SweepPoint]] = None) -> List[ChannelRecord]:
        """One replayable record per (sweep point, trial), in run order."""
        points = points if points is not None else config.sweep_points()
        records = []
        for point in points:
            for trial in range(config.num_trials):
                record = ChannelService.to_record(ExperimentRunner.channels_for(config, point, trial), trial)
                records.append(record.model_copy(update={"sweep_value": point.value}))
        return records

    @staticmethod
    def run_trial(
        config: ExperimentConfig,
        point: SweepPoint,
        point_index: int,
        trial_index: int,
        keep_trace: bool = False,
    ) -> List[TrialOutcome]:
        """
        Run every configured scheme on one channel realization.

        Args:
            config: Experiment configuration
            point: Resolved sweep point
            point_index: Position of the point in the sweep
            trial_index: Trial counter
            keep_trace: Store per-iteration records in the outcomes

        Returns:
            List[TrialOutcome]: One outcome per scheme, in configuration order
        """
        channels = ExperimentRunner.channels_for(config, point, trial_index)
        codebook = PhaseCodebook(bits=point.bits, nt=point.geometry.nt)
        outcomes = []
        for scheme in config.schemes:
            start = time.perf_counter()
            result = ExperimentRunner.design(scheme, channels, point.total_power, codebook, point.n_rf, config)
            elapsed = time.perf_counter() - start
            efficiency = MetricsService.energy_efficiency(
                result.sum_rate,
                scheme.architecture,
                config.power_model,
                config.ee_transmit_power_w(point),
                point.geometry.nt,
                point.n_rf,
                point.bits,
            )
            outcomes.append(TrialOutcome(
                point_index=point_index,
                trial_index=trial_index,
                scheme=scheme,
                sum_rate=result.sum_rate,
                energy_efficiency=efficiency,
                iterations=result.iterations,
                converged=result.converged,
                wall_clock_s=elapsed,
                sum_rate_trace=result.sum_rate_trace,
                trace=[record.model_dump() for record in result.trace] if keep_trace else [],
            ))
        return outcomes

    @staticmethod
    def run_outcomes(
        config: ExperimentConfig,
        threads: Optional[int] = None,
        keep_trace: bool = False,
        points: Optional[List[SweepPoint]] = None,
    ) -> List[TrialOutcome]:
        """All trial outcomes ordered by (sweep point, trial, scheme)."""
        points = points if points is not None else config.sweep_points()
        threads = threads or config.threads
        items: List[Tuple[int, SweepPoint, int]] = [
            (index, point, trial) for index, point in enumerate(points) for trial in range(config.num_trials)
        ]

        def work(item: Tuple[int, SweepPoint, int]) -> List[TrialOutcome]:
            index, point, trial = item
            return ExperimentRunner.run_trial(config, point, index, trial, keep_trace)

        if threads == 1:
            batches = [work(item) for item in items]
        else:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                batches = list(executor.map(work, items))

        outcomes = [outcome for batch in batches for outcome in batch]
        outcomes.sort(key=lambda o: (o.point_index, o.trial_index))
        return outcomes

    @staticmethod
    def aggregate(config: ExperimentConfig, outcomes: List[TrialOutcome]) -> List[ResultRow]:
        """
        Fold trial outcomes into one ResultRow per (sweep point, scheme).

        The standard error is the sample standard deviation of the per-trial
        sum-rates over sqrt(n); it is 0 for a single trial.
        """
        points = config.sweep_points()
        grouped: Dict[Tuple[int, Scheme], List[TrialOutcome]] = {}
        for outcome in outcomes:
            grouped.setdefault((outcome.point_index, outcome.scheme), []).append(outcome)

        rows = []
        for index, point in enumerate(points):
            for scheme in config.schemes:
                cell = sorted(grouped.get((index, scheme), []), key=lambda o: o.trial_index)
                if not cell:
                    continue
                rates = np.array([o.sum_rate for o in cell])
                std_error = float(np.std(rates, ddof=1) / np.sqrt(rates.size)) if rates.size > 1 else 0.0
                rows.append(ResultRow(
                    sweep_variable=config.sweep,
                    sweep_value=point.value,
                    scheme=scheme,
                    num_trials=len(cell),
                    mean_sum_rate=float(np.mean(rates)),
                    std_error=std_error,
                    mean_energy_efficiency=float(np.mean([o.energy_efficiency for o in cell])),
                    mean_iterations=float(np.mean([o.iterations for o in cell])),
                    mean_wall_clock_s=float(np.mean([o.wall_clock_s for o in cell])),
                    transmit_power_w=config.ee_transmit_power_w(point),
                ))
        return rows

    @staticmethod
    def run_experiment(
        config: ExperimentConfig,
        threads: Optional[int] = None,
        traces: Optional[List[dict]] = None,
    ) -> List[ResultRow]:
        """
        Run a configured Monte-Carlo experiment.

        Args:
            config: Validated experiment configuration
            threads: Worker count (defaults to ``config.threads``)
            traces: When given, per-iteration trace records are appended to it

        Returns:
            List[ResultRow]: Rows ordered by sweep point, then scheme
        """
        points = config.sweep_points()
        logger.info(
            f"Running {config.sweep.value} sweep: {len(points)} points x {config.num_trials} trials x "
            f"{len(config.schemes)} schemes, seed {config.master_seed}"
        )
        start = time.perf_counter()
        outcomes = ExperimentRunner.run_outcomes(config, threads, keep_trace=traces is not None, points=points)
        rows = ExperimentRunner.aggregate(config, outcomes)
        for row in rows:
            logger.info(
                f"{config.sweep.value}={row.sweep_value} {row.scheme.value}: "
                f"sum-rate {row.mean_sum_rate:.4f} +/- {row.std_error:.4f}"
            )
        not_converged = sum(1 for o in outcomes if not o.converged)
        if not_converged:
            logger.warning(f"{not_converged} of {len(outcomes)} designs stopped at their iteration cap")
        if traces is not None:
            traces.extend(ExperimentRunner.trace_records(points, outcomes))
        logger.info(f"Experiment finished in {time.perf_counter() - start:.1f} s")
        return rows

    @staticmethod
    def trace_records(points: List[SweepPoint], outcomes: List[TrialOutcome]) -> List[dict]:
        records = []
        for outcome in outcomes:
            for record in outcome.trace:
                records.append({
                    "sweep_value": points[outcome.point_index].value,
                    "trial_index": outcome.trial_index,
                    "scheme": outcome.scheme.value,
                    **record,
                })
        return records

    @staticmethod
    def run_convergence(config: ExperimentConfig, threads: Optional[int] = None) -> List[ConvergenceRow]:
        """
        Mean best-so-far sum-rate versus iteration for each scheme.

        Only the first sweep point is used. Traces shorter than the longest
        one of their scheme are padded with their final value.
        """
        point = config.sweep_points()[0]
        outcomes = ExperimentRunner.run_outcomes(config, threads, points=[point])
        rows = []
        for scheme in config.schemes:
            traces = [o.sum_rate_trace for o in outcomes if o.scheme == scheme]
            length = max(len(trace) for trace in traces)
            padded = np.array([trace + [trace[-1]] * (length - len(trace)) for trace in traces])
            means = padded.mean(axis=0)
            rows.extend(
                ConvergenceRow(scheme=scheme, iteration=i, mean_sum_rate=float(m), num_trials=len(traces))
                for i, m in enumerate(means)
            )
        return rows
