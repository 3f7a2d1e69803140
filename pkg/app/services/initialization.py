"""Shared starting point of the iterative hybrid designers."""

import logging
from typing import Optional, Tuple

import numpy as np

from app.models.channel import ChannelSet
from app.models.codebook import AnalogBeamformer, PhaseCodebook
from app.models.design import CssmOptions, DualState
from app.services.codebook_service import CodebookService
from app.services.duality_service import DualityService
from app.services.metrics_service import MetricsService
from app.utils.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)


class InitializationService:
    """Deterministic feasible (F_RF, F_BB) used by every iterative designer."""

    @staticmethod
    def validate_problem(channels: ChannelSet, total_power: float, codebook: PhaseCodebook, n_rf: int) -> None:
        """
        Reject inconsistent design inputs.

        Raises:
            InvalidParameterError: If P <= 0, the codebook does not match the array, or n_rf is outside [K, nt]
        """
        if not np.isfinite(total_power) or total_power <= 0:
            raise InvalidParameterError("Total power must be positive")
        if codebook.nt != channels.nt:
            raise InvalidParameterError(f"Codebook is built for {codebook.nt} antennas, channels have {channels.nt}")
        if not 1 <= n_rf <= channels.nt:
            raise InvalidParameterError(f"n_rf must lie in [1, {channels.nt}]")
        if channels.num_users > n_rf:
            raise InvalidParameterError(
                f"{channels.num_users} users need at least as many RF chains, got n_rf={n_rf}"
            )

    @staticmethod
    def initial_analog(channels: ChannelSet, codebook: PhaseCodebook, n_rf: int) -> AnalogBeamformer:
        """
        Contiguous partition with each antenna's phase aligned to its strongest user.

        Antenna i goes to chain ceil(i * n_rf / nt) (1-based); its phase is the
        codebook phase nearest to arg h_k(i) for the user k with the largest
        |h_k(i)|.
        """
        h = channels.channels
        strongest = np.argmax(np.abs(h), axis=0)
        angles = np.angle(h[strongest, np.arange(channels.nt)])
        return AnalogBeamformer(
            codebook=codebook,
            n_rf=n_rf,
            rf_index=CodebookService.fixed_partition(channels.nt, n_rf),
            phase_index=CodebookService.quantize_phase(angles, codebook.bits),
        )

    @staticmethod
    def initial_point(
        channels: ChannelSet,
        total_power: float,
        codebook: PhaseCodebook,
        n_rf: int,
        cssm: Optional[CssmOptions] = None,
    ) -> Tuple[AnalogBeamformer, np.ndarray, DualState]:
        """
        Initial analog assignment plus its duality-based digital beamformer.

        Args:
            channels: Channel set
            total_power: Power budget P
            codebook: Phase codebook (its nt must match the channels)
            n_rf: Number of RF chains
            cssm: CSSM stopping rule

        Returns:
            Tuple[AnalogBeamformer, np.ndarray, DualState]: Assignment, F_BB and the dual solve
        """
        analog = InitializationService.initial_analog(channels, codebook, n_rf)
        f_rf = CodebookService.materialize(analog)
        eff = MetricsService.effective_channels(channels, f_rf)
        f_bb, dual = DualityService.design_digital(eff, channels.noise_vars, f_rf, total_power, cssm)
        logger.debug(f"Initial point: sum-rate {MetricsService.sum_rate(channels, f_rf, f_bb):.6f}")
        return analog, f_bb, dual
