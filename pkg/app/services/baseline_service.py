"""Reference schemes: fully-digital and fixed-subarray hybrid beamforming."""

import logging
from typing import Optional

import numpy as np

from app.models.channel import ChannelSet
from app.models.codebook import PhaseCodebook
from app.models.design import CssmOptions, DesignResult, HeuristicOpts, IterationRecord, StopReason
from app.models.power import Architecture
from app.services.codebook_service import CodebookService
from app.services.duality_service import DualityService
from app.services.heuristic_service import HeuristicService
from app.services.metrics_service import MetricsService
from app.utils.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)


class BaselineService:
    """Service class for the comparison schemes."""

    @staticmethod
    def fully_digital_design(
        channels: ChannelSet, total_power: float, cssm: Optional[CssmOptions] = None
    ) -> DesignResult:
        """
        Fully-digital beamformer from the duality machinery on the raw channels.

        F_RF is the nt x nt identity so the metrics apply unchanged.

        Args:
            channels: Channel set
            total_power: Power budget P
            cssm: CSSM stopping rule

        Returns:
            DesignResult: Single-shot design
        """
        if not np.isfinite(total_power) or total_power <= 0:
            raise InvalidParameterError("Total power must be positive")
        f_rf = np.eye(channels.nt, dtype=np.complex128)
        f_bb, dual = DualityService.design_digital(
            channels.channels, channels.noise_vars, f_rf, total_power, cssm
        )
        rate = MetricsService.sum_rate(channels, f_rf, f_bb)
        if not dual.converged:
            logger.warning("Fully-digital CSSM solve hit its iteration cap")
        return DesignResult(
            scheme="fully_digital",
            architecture=Architecture.FULLY_DIGITAL,
            f_rf=f_rf,
            f_bb=f_bb,
            sum_rate=rate,
            iterations=dual.iterations,
            converged=dual.converged,
            stop_reason=StopReason.SINGLE_SHOT,
            trace=[IterationRecord(iteration=0, sum_rate=rate, best_sum_rate=rate)],
        )

    @staticmethod
    def fixed_subarray_design(
        channels: ChannelSet,
        total_power: float,
        codebook: PhaseCodebook,
        n_rf: int,
        opts: Optional[HeuristicOpts] = None,
    ) -> DesignResult:
        """Heuristic design with antenna i frozen to chain ceil(i * n_rf / nt); only phases are searched."""
        partition = CodebookService.fixed_partition(channels.nt, n_rf)
        return HeuristicService.heuristic_design(
            channels, total_power, codebook, n_rf, opts, allowed_rf=partition, scheme="fixed_subarray"
        )
