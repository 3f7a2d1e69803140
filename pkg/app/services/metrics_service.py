"""SINR, sum-rate, transmit power and energy efficiency of a hybrid beamformer."""

import numpy as np

from app.models.channel import ChannelSet
from app.models.power import Architecture, PowerModel
from app.utils.exceptions import InvalidParameterError


class MetricsService:
    """Service class for evaluating (F_RF, F_BB) pairs."""

    @staticmethod
    def gain_matrix(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray) -> np.ndarray:
        """G[k, j] = h_k^H F_RF f_BB,j."""
        f_rf = np.asarray(f_rf)
        f_bb = np.asarray(f_bb)
        if f_rf.shape[0] != channels.nt or f_rf.shape[1] != f_bb.shape[0]:
            raise InvalidParameterError(
                f"Inconsistent dimensions: channels nt={channels.nt}, F_RF {f_rf.shape}, F_BB {f_bb.shape}"
            )
        if f_bb.shape[1] != channels.num_users:
            raise InvalidParameterError("F_BB needs one column per user")
        return channels.channels.conj() @ f_rf @ f_bb

    @staticmethod
    def sinr_from_gains(gains: np.ndarray, noise_vars: np.ndarray) -> np.ndarray:
        power = np.abs(gains) ** 2
        signal = np.diagonal(power, axis1=-2, axis2=-1)
        interference = power.sum(axis=-1) - signal
        return signal / (interference + noise_vars)

    @staticmethod
    def row_candidate_gains(
        channel_matrix: np.ndarray,
        gains: np.ndarray,
        entries: np.ndarray,
        rf_index: int,
        phase_index: int,
        f_bb: np.ndarray,
        row: int,
    ) -> np.ndarray:
        """
        Gain matrices for every (phase, rf) choice of one analog row.

        The current row's contribution conj(h(row)) (F_RF(row, :) F_BB) is
        removed from ``gains`` and each candidate's contribution added back.

        Args:
            channel_matrix: K x nt channels (row k is h_k)
            gains: Current K x K gain matrix
            entries: Codebook entries
            rf_index: Current chain of the row
            phase_index: Current phase index of the row
            f_bb: Digital beamformer (n_rf x K)
            row: Antenna index

        Returns:
            np.ndarray: Array of shape (2^B, n_rf, K, K)
        """
        column = channel_matrix[:, row].conj()
        without_row = gains - np.outer(column, entries[phase_index] * f_bb[rf_index])
        contribution = (
            column[np.newaxis, np.newaxis, :, np.newaxis]
            * entries[:, np.newaxis, np.newaxis, np.newaxis]
            * f_bb[np.newaxis, :, np.newaxis, :]
        )
        return without_row + contribution

    @staticmethod
    def sinr_vector(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray) -> np.ndarray:
        gains = MetricsService.gain_matrix(channels, f_rf, f_bb)
        return MetricsService.sinr_from_gains(gains, channels.noise_vars)

    @staticmethod
    def sinr(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray, k: int) -> float:
        """
        SINR of user k.

        Args:
            channels: Channel set
            f_rf: Dense analog beamformer (nt x n_rf)
            f_bb: Digital beamformer (n_rf x K)
            k: User index

        Returns:
            float: |h_k^H F_RF f_k|^2 / (sum_{j != k} |h_k^H F_RF f_j|^2 + sigma_k^2)
        """
        if not 0 <= k < channels.num_users:
            raise InvalidParameterError(f"User index {k} out of range")
        return float(MetricsService.sinr_vector(channels, f_rf, f_bb)[k])

    @staticmethod
    def rate_from_sinr(sinr: np.ndarray) -> float:
        return float(np.sum(np.log2(1.0 + np.asarray(sinr))))

    @staticmethod
    def sum_rate(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray) -> float:
        """Sum over users of log2(1 + SINR_k), in bits/s/Hz."""
        return MetricsService.rate_from_sinr(MetricsService.sinr_vector(channels, f_rf, f_bb))

    @staticmethod
    def effective_channels(channels: ChannelSet, f_rf: np.ndarray) -> np.ndarray:
        """K x n_rf array whose row k is h~_k = F_RF^H h_k."""
        return channels.channels @ np.asarray(f_rf).conj()

    @staticmethod
    def transmit_power(f_rf: np.ndarray, f_bb: np.ndarray) -> float:
        """Squared Frobenius norm of F_RF F_BB."""
        return float(np.linalg.norm(np.asarray(f_rf) @ np.asarray(f_bb), "fro") ** 2)

    @staticmethod
    def total_power_mw(
        arch: Architecture,
        power_model: PowerModel,
        transmit_power_w: float,
        nt: int,
        n_rf: int,
        bits: int = 2,
    ) -> float:
        """
        Base-station power consumption in mW for one architecture.

        Fully digital uses nt RF chains and no phase shifters; the hybrid
        variants add n_rf chains plus their phase shifters (and switches for
        dynamic subarrays).
        """
        if transmit_power_w < 0:
            raise InvalidParameterError("Transmit power must be nonnegative")
        transmit_mw = 1000.0 * transmit_power_w
        base = transmit_mw + power_model.p_bb
        p_ps = power_model.phase_shifter_power(bits)

        if arch == Architecture.FULLY_DIGITAL:
            return base + nt * power_model.p_rf
        if arch == Architecture.FULLY_CONNECTED:
            return base + n_rf * power_model.p_rf + nt * n_rf * p_ps
        fixed = base + n_rf * power_model.p_rf + nt * p_ps
        if arch == Architecture.FIXED_SUBARRAY:
            return fixed
        return fixed + nt * power_model.p_sw

    @staticmethod
    def energy_efficiency(
        rate: float,
        arch: Architecture,
        power_model: PowerModel,
        transmit_p: float,
        nt: int,
        n_rf: int,
        bits: int = 2,
    ) -> float:
        """Sum-rate divided by total consumed power in W (bits/Hz/J)."""
        total_mw = MetricsService.total_power_mw(arch, power_model, transmit_p, nt, n_rf, bits)
        return rate / (total_mw / 1000.0)
