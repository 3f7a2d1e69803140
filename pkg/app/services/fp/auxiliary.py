"""
Auxiliary-variable updates of the FP design.

The Lagrangian dual transform introduces r (one SINR surrogate per user),
the quadratic transform introduces t (one complex scalar per user).
"""

import numpy as np

from app.models.channel import ChannelSet
from app.models.design import DeltaForm
from app.services.metrics_service import MetricsService


class FpAuxiliary:
    """Closed-form updates of r and t and the two transformed objectives."""

    @staticmethod
    def update_r(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray) -> np.ndarray:
        """Optimal r for fixed beamformers: r_k = SINR_k."""
        return MetricsService.sinr_vector(channels, f_rf, f_bb)

    @staticmethod
    def received_power(gains: np.ndarray, noise_vars: np.ndarray) -> np.ndarray:
        """C_k = sum_j |h_k^H F_RF f_j|^2 + sigma_k^2."""
        return np.sum(np.abs(gains) ** 2, axis=1) + noise_vars

    @staticmethod
    def update_t(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray, r: np.ndarray) -> np.ndarray:
        """
        Optimal t for fixed beamformers and r.

        Args:
            channels: Channel set
            f_rf: Dense analog beamformer
            f_bb: Digital beamformer
            r: SINR surrogates

        Returns:
            np.ndarray: t_k = sqrt(1 + r_k) h_k^H F_RF f_k / C_k
        """
        gains = MetricsService.gain_matrix(channels, f_rf, f_bb)
        return np.sqrt(1.0 + np.asarray(r)) * np.diagonal(gains) / FpAuxiliary.received_power(
            gains, channels.noise_vars
        )

    @staticmethod
    def lagrangian_objective(channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray, r: np.ndarray) -> float:
        """f_r = sum log2(1 + r_k) - sum r_k + sum (1 + r_k) |h_k^H F_RF f_k|^2 / C_k."""
        r = np.asarray(r, dtype=np.float64)
        gains = MetricsService.gain_matrix(channels, f_rf, f_bb)
        ratio = np.abs(np.diagonal(gains)) ** 2 / FpAuxiliary.received_power(gains, channels.noise_vars)
        return float(np.sum(np.log2(1.0 + r)) - np.sum(r) + np.sum((1.0 + r) * ratio))

    @staticmethod
    def quadratic_objective(
        channels: ChannelSet, f_rf: np.ndarray, f_bb: np.ndarray, r: np.ndarray, t: np.ndarray
    ) -> float:
        """f_q: the fractional term of f_r replaced by 2 sqrt(1 + r_k) Re{t_k^* h_k^H F_RF f_k} - |t_k|^2 C_k."""
        r = np.asarray(r, dtype=np.float64)
        t = np.asarray(t, dtype=np.complex128)
        gains = MetricsService.gain_matrix(channels, f_rf, f_bb)
        quadratic = (
            2 * np.sqrt(1.0 + r) * np.real(t.conj() * np.diagonal(gains))
            - np.abs(t) ** 2 * FpAuxiliary.received_power(gains, channels.noise_vars)
        )
        return float(np.sum(np.log2(1.0 + r)) - np.sum(r) + np.sum(quadratic))

    @staticmethod
    def constant_terms(channels: ChannelSet, r: np.ndarray, t: np.ndarray) -> float:
        """The part of f_q that does not depend on the beamformers."""
        r = np.asarray(r, dtype=np.float64)
        return float(
            np.sum(np.log2(1.0 + r)) - np.sum(r) - np.sum(np.abs(t) ** 2 * channels.noise_vars)
        )

    @staticmethod
    def build_delta_form(channels: ChannelSet, r: np.ndarray, t: np.ndarray) -> DeltaForm:
        return DeltaForm(
            channels=channels.channels,
            r=np.asarray(r, dtype=np.float64),
            t=np.asarray(t, dtype=np.complex128),
        )
