"""Digital step of the FP design: closed-form F_BB with a power multiplier."""

import logging
from typing import Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import bisect

from app.models.channel import ChannelSet
from app.services.fp.auxiliary import FpAuxiliary
from app.utils.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

MAX_BRACKET_DOUBLINGS = 200


class FpDigital:
    """Service class for the digital FP step."""

    @staticmethod
    def solve_digital_with_multiplier(
        channels: ChannelSet, f_rf: np.ndarray, r: np.ndarray, t: np.ndarray, total_power: float
    ) -> Tuple[np.ndarray, float]:
        """
        Maximize delta over F_BB subject to ||F_RF F_BB||_F^2 = P.

        f_k(mu) = (A + mu D)^{-1} sqrt(1 + r_k) t_k F_RF^H h_k with
        A = F_RF^H (sum_j |t_j|^2 h_j h_j^H) F_RF and D = F_RF^H F_RF, restricted
        to the chains that own at least one antenna. In the generalized
        eigenbasis A w = lambda D w the power is sum_i beta_i / (lambda_i + mu)^2,
        strictly decreasing in mu on (-lambda_min, inf):
          - power(0) > P: mu > 0 by bisection, bracket doubled from 1;
          - power(0) < P and A positive definite: mu in (-lambda_min, 0) by bisection;
          - otherwise F_BB(0) is rescaled by sqrt(P / power).

        Args:
            channels: Channel set
            f_rf: Dense analog beamformer (nt x n_rf)
            r: SINR surrogates
            t: Quadratic-transform auxiliaries
            total_power: Power budget P

        Returns:
            Tuple[np.ndarray, float]: F_BB (zero rows for empty chains) and the multiplier mu

        Raises:
            InvalidParameterError: If P <= 0
        """
        if total_power <= 0:
            raise InvalidParameterError("Total power must be positive")
        f_rf = np.asarray(f_rf)
        n_rf = f_rf.shape[1]
        form = FpAuxiliary.build_delta_form(channels, r, t)
        f_bb = np.zeros((n_rf, channels.num_users), dtype=np.complex128)

        used = np.flatnonzero(np.linalg.norm(f_rf, axis=0) > 0)
        sub = f_rf[:, used]
        rhs = sub.conj().T @ form.linear.T
        if not np.any(rhs):
            logger.warning("Digital step has an all-zero right-hand side; returning a zero beamformer")
            return f_bb, 0.0

        system = sub.conj().T @ form.hermitian @ sub
        system = (system + system.conj().T) / 2
        metric = np.real(np.diag(np.diag(sub.conj().T @ sub)))
        eigvals, eigvecs = scipy.linalg.eigh(system, metric)
        projected = eigvecs.conj().T @ rhs
        beta = np.sum(np.abs(projected) ** 2, axis=1)

        scale = max(float(np.abs(eigvals).max()), 1.0)
        tiny = 1e-12 * scale
        beta_tiny = 1e-24 * max(float(beta.max()), 1e-300)
        excited = beta > beta_tiny

        def power(mu: float) -> float:
            shifted = eigvals + mu
            if np.any(excited & (np.abs(shifted) <= tiny)):
                return np.inf
            return float(np.sum(np.where(excited, beta / np.where(excited, shifted, 1.0) ** 2, 0.0)))

        def solution(mu: float) -> np.ndarray:
            shifted = eigvals + mu
            keep = excited & (np.abs(shifted) > tiny)
            coeffs = np.where(keep[:, np.newaxis], projected / np.where(keep, shifted, 1.0)[:, np.newaxis], 0.0)
            return eigvecs @ coeffs

        def excess(mu: float) -> float:
            return power(mu) - total_power

        at_zero = power(0.0)
        mu = 0.0
        if at_zero > total_power:
            upper = 1.0
            for _ in range(MAX_BRACKET_DOUBLINGS):
                if power(upper) < total_power:
                    break
                upper *= 2
            mu = bisect(excess, 0.0, upper, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=5000)
        elif at_zero < total_power and eigvals[0] > tiny:
            lower = -eigvals[0] * (1 - 1e-12)
            if power(lower) > total_power:
                mu = bisect(excess, lower, 0.0, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=5000)
            else:
                logger.debug("Digital step hit the hard case; rescaling the unconstrained solution")

        sub_bb = solution(mu)
        achieved = float(np.linalg.norm(sub @ sub_bb, "fro") ** 2)
        if achieved <= 0:
            logger.warning("Digital step produced a beamformer without radiated power")
            return f_bb, float(mu)
        f_bb[used] = sub_bb * np.sqrt(total_power / achieved)
        return f_bb, float(mu)

    @staticmethod
    def solve_digital(
        channels: ChannelSet, f_rf: np.ndarray, r: np.ndarray, t: np.ndarray, total_power: float
    ) -> np.ndarray:
        f_bb, _ = FpDigital.solve_digital_with_multiplier(channels, f_rf, r, t, total_power)
        return f_bb
