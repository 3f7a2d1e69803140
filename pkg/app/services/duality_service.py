"""Digital beamforming through uplink-downlink SINR duality.

The dual uplink problem is solved by cyclic self-SINR maximization (CSSM):
max-SINR receive directions alternate with water-filled uplink powers. The
uplink powers are then mapped to downlink powers that reproduce the same
SINRs.

Effective channels are passed as a K x n array whose row k is h~_k, so that
h~_k^H f = conj(row_k) . f.
"""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import bisect

from app.models.design import CssmOptions, DualState
from app.utils.exceptions import DualitySingularError, InvalidParameterError

logger = logging.getLogger(__name__)

# Largest condition number accepted for the downlink power-mapping system.
MAX_POWER_MAP_CONDITION = 1e12
MAX_BACKTRACKS = 30


class DualityService:
    """Service class for the dual uplink solve and the downlink power map."""

    @staticmethod
    def _covariance(eff_channels: np.ndarray, uplink_powers: np.ndarray) -> np.ndarray:
        """sum_j q_j h~_j h~_j^H."""
        return (eff_channels.T * uplink_powers) @ eff_channels.conj()

    @staticmethod
    def interference_plus_noise(
        eff_channels: np.ndarray, uplink_powers: np.ndarray, noise_vars: np.ndarray, k: int
    ) -> np.ndarray:
        h_k = eff_channels[k]
        q_minus_k = np.array(uplink_powers, dtype=np.float64, copy=True)
        q_minus_k[k] = 0.0
        cov = DualityService._covariance(eff_channels, q_minus_k)
        return cov + noise_vars[k] * np.eye(h_k.shape[0])

    @staticmethod
    def _solve_direction(
        eff_channels: np.ndarray, uplink_powers: np.ndarray, noise_vars: np.ndarray, k: int
    ) -> Tuple[np.ndarray, float]:
        """Unit max-SINR direction for user k and its gain epsilon_k = h~^H Q_k^{-1} h~."""
        h_k = eff_channels[k]
        q_k = DualityService.interference_plus_noise(eff_channels, uplink_powers, noise_vars, k)
        x = scipy.linalg.solve(q_k, h_k, assume_a="her")
        gain = float(np.real(np.vdot(h_k, x)))
        norm = np.linalg.norm(x)
        if norm == 0.0:
            # zero effective channel: every direction is equally useless
            direction = np.zeros_like(h_k)
            direction[0] = 1.0
            return direction, 0.0
        return x / norm, max(gain, 0.0)

    @staticmethod
    def max_sinr_direction(
        eff_channels: np.ndarray, uplink_powers: np.ndarray, noise_vars: np.ndarray, k: int
    ) -> np.ndarray:
        """
        Max-SINR receive direction of user k.

        Args:
            eff_channels: K x n effective channels (row k is h~_k)
            uplink_powers: Uplink powers q
            noise_vars: Noise variances sigma_k^2
            k: User index

        Returns:
            np.ndarray: Unit vector proportional to (sum_{j != k} q_j h~_j h~_j^H + sigma_k^2 I)^{-1} h~_k
        """
        direction, _ = DualityService._solve_direction(
            np.asarray(eff_channels, dtype=np.complex128),
            np.asarray(uplink_powers, dtype=np.float64),
            np.asarray(noise_vars, dtype=np.float64),
            k,
        )
        return direction

    @staticmethod
    def directions_and_gains(
        eff_channels: np.ndarray, uplink_powers: np.ndarray, noise_vars: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray]:
        """All users' max-SINR directions (n x K, unit columns) and effective gains epsilon."""
        num_users, dim = eff_channels.shape
        directions = np.zeros((dim, num_users), dtype=np.complex128)
        gains = np.zeros(num_users)
        for k in range(num_users):
            directions[:, k], gains[k] = DualityService._solve_direction(
                eff_channels, uplink_powers, noise_vars, k
            )
        return directions, gains

    @staticmethod
    def uplink_sinr(
        eff_channels: np.ndarray, uplink_powers: np.ndarray, noise_vars: np.ndarray, directions: np.ndarray
    ) -> np.ndarray:
        """Dual uplink SINR of every user for unit-norm receive directions."""
        coupling = np.abs(eff_channels.conj() @ directions) ** 2
        weighted = uplink_powers[:, np.newaxis] * coupling
        signal = np.diagonal(weighted)
        interference = weighted.sum(axis=0) - signal
        return signal / (interference + noise_vars)

    @staticmethod
    def waterfill_with_level(effective_gains, total_power: float) -> Tuple[np.ndarray, float]:
        """
        Water-filling q_k = (1/nu - 1/eps_k)^+ with sum q = P.

        The level nu is located by bisection on [eps_min * delta, eps_max] with
        delta = 1 / (1 + P eps_min), which brackets the root. The active set it
        yields is then turned into the exact level with the sorted closed form.

        Args:
            effective_gains: Gains eps_k (zero entries receive no power)
            total_power: Power budget P

        Returns:
            Tuple[np.ndarray, float]: Powers q and the level nu

        Raises:
            InvalidParameterError: If P <= 0 or the gains are negative, non-finite or all zero
        """
        gains = np.asarray(effective_gains, dtype=np.float64)
        if total_power <= 0:
            raise InvalidParameterError("Total power must be positive")
        if np.any(~np.isfinite(gains)) or np.any(gains < 0):
            raise InvalidParameterError("Effective gains must be finite and nonnegative")
        usable = gains > 0
        if not np.any(usable):
            raise InvalidParameterError("At least one effective gain must be positive")

        inverse = np.full(gains.shape, np.inf)
        inverse[usable] = 1.0 / gains[usable]

        def excess(nu: float) -> float:
            return float(np.sum(np.maximum(1.0 / nu - inverse, 0.0))) - total_power

        eps_min = float(gains[usable].min())
        nu_low = eps_min / (1.0 + total_power * eps_min)
        nu_high = float(gains.max())
        if excess(nu_low) <= 0.0:
            nu = nu_low
        else:
            nu = bisect(excess, nu_low, nu_high, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=5000)

        active = inverse < 1.0 / nu
        level = DualityService._closed_form_level(inverse, active, total_power)
        if level is None:
            logger.debug("Bisection active set inconsistent with closed form; using sorted search")
            active, level = DualityService._sorted_active_set(inverse, total_power)

        powers = np.where(active, level - inverse, 0.0)
        return powers, 1.0 / level

    @staticmethod
    def _closed_form_level(inverse: np.ndarray, active: np.ndarray, total_power: float) -> Optional[float]:
        if not np.any(active):
            return None
        level = (total_power + inverse[active].sum()) / active.sum()
        if np.all(inverse[active] < level) and np.all(inverse[~active] >= level):
            return float(level)
        return None

    @staticmethod
    def _sorted_active_set(inverse: np.ndarray, total_power: float) -> Tuple[np.ndarray, float]:
        order = np.argsort(inverse, kind="stable")
        sorted_inverse = inverse[order]
        finite = int(np.isfinite(sorted_inverse).sum())
        for m in range(finite, 0, -1):
            level = (total_power + sorted_inverse[:m].sum()) / m
            if sorted_inverse[m - 1] < level:
                active = np.zeros(inverse.shape, dtype=bool)
                active[order[:m]] = True
                return active, float(level)
        raise InvalidParameterError("Water-filling found no active user")

    @staticmethod
    def waterfill(effective_gains, total_power: float) -> np.ndarray:
        """Water-filled powers only; see ``waterfill_with_level``."""
        powers, _ = DualityService.waterfill_with_level(effective_gains, total_power)
        return powers

    @staticmethod
    def cssm_solve(
        eff_channels: np.ndarray,
        noise_vars: np.ndarray,
        total_power: float,
        tol: float = 1e-6,
        max_iters: int = 200,
    ) -> DualState:
        """
        Solve the dual uplink sum-rate problem by CSSM.

        Starting from equal powers, directions and water-filled powers are
        updated alternately until max_k |q_k^(n+1) - q_k^(n)| < tol. A power
        step that lowers the uplink sum-rate for the current directions is
        halved towards the previous powers; when no fraction helps the solve
        stops.

        Args:
            eff_channels: K x n effective channels
            noise_vars: Noise variances
            total_power: Power budget P
            tol: Stopping threshold on the power-vector change
            max_iters: Iteration cap

        Returns:
            DualState: Last state; ``converged`` is False when max_iters was hit
        """
        eff = np.asarray(eff_channels, dtype=np.complex128)
        noise = np.asarray(noise_vars, dtype=np.float64)
        if total_power <= 0:
            raise InvalidParameterError("Total power must be positive")
        num_users = eff.shape[0]

        powers = np.full(num_users, total_power / num_users)
        directions, gains = DualityService.directions_and_gains(eff, powers, noise)
        rate = DualityService._uplink_rate(eff, powers, noise, directions)
        trace = [rate]
        water_level = float("nan")
        converged = False
        iterations = 0

        for iterations in range(1, max_iters + 1):
            target, water_level = DualityService.waterfill_with_level(gains, total_power)
            candidate = target
            candidate_rate = DualityService._uplink_rate(eff, candidate, noise, directions)
            step = 1.0
            for _ in range(MAX_BACKTRACKS):
                if candidate_rate >= rate - 1e-12 * max(1.0, abs(rate)):
                    break
                step /= 2
                candidate = powers + step * (target - powers)
                candidate_rate = DualityService._uplink_rate(eff, candidate, noise, directions)
            if candidate_rate < rate - 1e-12 * max(1.0, abs(rate)):
                converged = True
                break

            change = float(np.max(np.abs(candidate - powers)))
            powers = candidate
            directions, gains = DualityService.directions_and_gains(eff, powers, noise)
            rate = DualityService._uplink_rate(eff, powers, noise, directions)
            trace.append(rate)
            if change < tol:
                converged = True
                break

        if not converged:
            logger.warning(f"CSSM did not converge within {max_iters} iterations")

        return DualState(
            directions=directions,
            uplink_powers=powers,
            water_level=water_level,
            uplink_sinr=DualityService.uplink_sinr(eff, powers, noise, directions),
            iterations=iterations,
            converged=converged,
            rate_trace=trace,
        )

    @staticmethod
    def _uplink_rate(eff: np.ndarray, powers: np.ndarray, noise: np.ndarray, directions: np.ndarray) -> float:
        return float(np.sum(np.log2(1.0 + DualityService.uplink_sinr(eff, powers, noise, directions))))

    @staticmethod
    def _coupling(dual: DualState, eff_channels: np.ndarray) -> np.ndarray:
        """C[i, j] = |h~_i^H f_j|^2."""
        return np.abs(np.asarray(eff_channels).conj() @ dual.directions) ** 2

    @staticmethod
    def _power_map_system(dual: DualState, eff_channels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Matrix B over the users with positive uplink SINR, and their indices."""
        coupling = DualityService._coupling(dual, eff_channels)
        active = np.flatnonzero(dual.uplink_sinr > 0)
        system = -coupling[np.ix_(active, active)]
        system[np.diag_indices(active.size)] = coupling[active, active] / dual.uplink_sinr[active]
        return system, active

    @staticmethod
    def _solve_power_system(system: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        if np.linalg.cond(system) > MAX_POWER_MAP_CONDITION:
            logger.warning("Downlink power-mapping matrix is ill-conditioned")
            raise DualitySingularError()
        try:
            solution = scipy.linalg.solve(system, rhs)
        except (np.linalg.LinAlgError, ValueError):
            raise DualitySingularError()
        if np.any(~np.isfinite(solution)) or np.any(solution < -1e-9 * max(1.0, np.abs(solution).max())):
            raise DualitySingularError("Downlink power mapping produced negative powers")
        return np.maximum(solution, 0.0)

    @staticmethod
    def downlink_powers(dual: DualState, eff_channels: np.ndarray, noise_vars: np.ndarray) -> np.ndarray:
        """
        Downlink powers p reproducing the uplink SINRs with the same directions.

        With B[i, j] = -|h~_i^H f_j|^2 off the diagonal and
        |h~_i^H f_i|^2 / SINR_i on it, the downlink SINR equations read
        B p = sigma. Users with zero uplink SINR get p = 0.

        Raises:
            DualitySingularError: If B is singular for the active users
        """
        noise = np.asarray(noise_vars, dtype=np.float64)
        powers = np.zeros(noise.shape[0])
        system, active = DualityService._power_map_system(dual, eff_channels)
        if active.size:
            powers[active] = DualityService._solve_power_system(system, noise[active])
        return powers

    @staticmethod
    def uplink_power_check(dual: DualState, eff_channels: np.ndarray, noise_vars: np.ndarray) -> np.ndarray:
        """Solve the transposed system B^T q = sigma, which returns the uplink powers."""
        noise = np.asarray(noise_vars, dtype=np.float64)
        powers = np.zeros(noise.shape[0])
        system, active = DualityService._power_map_system(dual, eff_channels)
        if active.size:
            powers[active] = DualityService._solve_power_system(system.T, noise[active])
        return powers

    @staticmethod
    def downlink_power_map(dual: DualState, eff_channels: np.ndarray, noise_vars: np.ndarray) -> np.ndarray:
        """Unnormalized downlink beamformer with columns sqrt(p_k) f_k (n x K)."""
        powers = DualityService.downlink_powers(dual, eff_channels, noise_vars)
        return dual.directions * np.sqrt(powers)

    @staticmethod
    def normalize_to_power(f_rf: np.ndarray, f_bb_raw: np.ndarray, total_power: float) -> np.ndarray:
        """
        Scale F_BB so that ||F_RF F_BB||_F^2 = P.

        Raises:
            InvalidParameterError: If P <= 0 or F_RF F_BB is zero
        """
        if total_power <= 0:
            raise InvalidParameterError("Total power must be positive")
        norm = np.linalg.norm(np.asarray(f_rf) @ np.asarray(f_bb_raw), "fro")
        if norm == 0.0:
            raise InvalidParameterError("Cannot normalize a beamformer that radiates no power")
        return np.sqrt(total_power) * np.asarray(f_bb_raw) / norm

    @staticmethod
    def design_digital(
        eff_channels: np.ndarray,
        noise_vars: np.ndarray,
        f_rf: np.ndarray,
        total_power: float,
        options: Optional[CssmOptions] = None,
    ) -> Tuple[np.ndarray, DualState]:
        """CSSM, downlink power map and normalization in one call."""
        options = options or CssmOptions()
        dual = DualityService.cssm_solve(eff_channels, noise_vars, total_power, options.tol, options.max_iters)
        raw = DualityService.downlink_power_map(dual, eff_channels, noise_vars)
        return DualityService.normalize_to_power(f_rf, raw, total_power), dual
