"""
Analog step of the FP design: maximize delta over dynamic-subarray assignments.

With r, t and F_BB fixed, delta is a quadratic in F_RF. Writing F_RF = S F_set
turns the step into a 0/1 program over the selection matrix S; both solvers
here work on the equivalent (rf_index, phase_index) representation.
"""

import logging
from typing import Optional

import numpy as np

from app.models.codebook import AnalogBeamformer, PhaseCodebook
from app.models.design import DeltaForm
from app.services.codebook_service import CodebookService
from app.services.metrics_service import MetricsService
from app.utils.config import RuntimeConfig
from app.utils.exceptions import ExactSolverBudgetError

logger = logging.getLogger(__name__)


def _improvement_tol(value: float) -> float:
    return 1e-12 * max(1.0, abs(value))


class FpAnalog:
    """Coordinate-ascent and branch-and-bound solvers for the analog step."""

    @staticmethod
    def delta_from_gains(form: DeltaForm, gains: np.ndarray) -> np.ndarray:
        """delta for gain matrices G[k, j] = h_k^H F_RF f_j; leading axes are batch axes."""
        diag = np.diagonal(gains, axis1=-2, axis2=-1)
        linear = 2 * np.sum(form.scale * np.real(form.t.conj() * diag), axis=-1)
        interference = np.sum(form.weights * np.sum(np.abs(gains) ** 2, axis=-1), axis=-1)
        return linear - interference

    @staticmethod
    def delta_value(form: DeltaForm, f_rf: np.ndarray, f_bb: np.ndarray) -> float:
        """
        Surrogate objective delta of the analog and digital steps.

        Args:
            form: Quadratic data for the current r and t
            f_rf: Dense analog beamformer
            f_bb: Digital beamformer

        Returns:
            float: sum_k 2 sqrt(1 + r_k) Re{t_k^* h_k^H F_RF f_k} - sum_k f_k^H A f_k
        """
        gains = form.channels.conj() @ np.asarray(f_rf) @ np.asarray(f_bb)
        return float(FpAnalog.delta_from_gains(form, gains))

    @staticmethod
    def solve_analog_coordinate(
        form: DeltaForm,
        f_rf_init: AnalogBeamformer,
        f_bb: np.ndarray,
        max_passes: int = 100,
    ) -> AnalogBeamformer:
        """
        Cyclic coordinate ascent on delta over the rows of F_RF.

        Each antenna in turn takes the (rf, phase) pair maximizing delta with
        all other rows fixed; gains are updated by a rank-one row swap. A row
        changes only on a strict improvement, so delta never decreases and the
        output is never worse than ``f_rf_init``. Passes repeat until no row
        changes.

        Args:
            form: Quadratic data for the current r and t
            f_rf_init: Starting assignment
            f_bb: Digital beamformer (held fixed)
            max_passes: Cap on full passes over the antennas

        Returns:
            AnalogBeamformer: Assignment at which no single-row change improves delta
        """
        entries = f_rf_init.codebook.entries
        rf_index = np.array(f_rf_init.rf_index)
        phase_index = np.array(f_rf_init.phase_index)
        f_bb = np.asarray(f_bb)

        for pass_number in range(1, max_passes + 1):
            f_rf = CodebookService.materialize(f_rf_init.with_rows(rf_index, phase_index))
            gains = form.channels.conj() @ f_rf @ f_bb
            current = float(FpAnalog.delta_from_gains(form, gains))
            changed = 0
            for row in range(f_rf_init.nt):
                candidates = MetricsService.row_candidate_gains(
                    form.channels, gains, entries, rf_index[row], phase_index[row], f_bb, row
                )
                values = FpAnalog.delta_from_gains(form, candidates)
                phase, rf = np.unravel_index(np.argmax(values), values.shape)
                if values[phase, rf] > current + _improvement_tol(current):
                    phase_index[row], rf_index[row] = phase, rf
                    gains = candidates[phase, rf]
                    current = float(values[phase, rf])
                    changed += 1
            logger.debug(f"Coordinate pass {pass_number}: {changed} rows changed, delta {current:.6e}")
            if changed == 0:
                break
        else:
            logger.debug(f"Coordinate ascent stopped at the pass cap ({max_passes})")

        return f_rf_init.with_rows(rf_index, phase_index)

    @staticmethod
    def solve_analog_exact(
        form: DeltaForm,
        f_bb: np.ndarray,
        codebook: PhaseCodebook,
        n_rf: Optional[int] = None,
        incumbent: Optional[AnalogBeamformer] = None,
        budget: Optional[int] = None,
    ) -> AnalogBeamformer:
        """
        Global maximizer of delta by depth-first branch-and-bound over antennas.

        Write delta(X) = 2 Re sum(X * L) - q(X) with q(X) = Re tr(X^H M X P),
        L = conj(B)^T F_BB^T and P = F_BB F_BB^H. For assigned rows X_A and
        free rows X_R, q(X_A + X_R) = q(X_A) + q(X_R) + 2 Re tr(X_R^H M X_A P)
        and q(X_R) >= 0 because M and P are PSD. Dropping q(X_R) leaves a sum
        of per-row terms 2 Re(c U_ij) with U = L - conj(M X_A P), so the sum
        of each free row's best candidate bounds every completion from above.

        Args:
            form: Quadratic data for the current r and t
            f_bb: Digital beamformer (n_rf x K)
            codebook: Phase codebook
            n_rf: Number of RF chains (defaults to the rows of f_bb)
            incumbent: Starting incumbent (coordinate ascent from the fixed partition if omitted)
            budget: Largest admissible (n_rf * 2^B)^nt

        Returns:
            AnalogBeamformer: Maximizer of delta; ties keep the first found in phase-then-rf order

        Raises:
            ExactSolverBudgetError: If the assignment count exceeds the budget
        """
        f_bb = np.asarray(f_bb)
        n_rf = n_rf or f_bb.shape[0]
        nt = codebook.nt
        budget = budget or RuntimeConfig.get_exact_budget()
        count = (n_rf * codebook.size) ** nt
        if count > budget:
            raise ExactSolverBudgetError(
                f"Exhaustive analog search needs {count} assignments, budget is {budget}"
            )

        if incumbent is None:
            start = AnalogBeamformer(
                codebook=codebook,
                n_rf=n_rf,
                rf_index=CodebookService.fixed_partition(nt, n_rf),
                phase_index=np.zeros(nt, dtype=np.int64),
            )
            incumbent = FpAnalog.solve_analog_coordinate(form, start, f_bb)

        entries = codebook.entries
        linear = form.linear.conj().T @ f_bb.T
        hermitian = form.hermitian
        outer = f_bb @ f_bb.conj().T

        def value(x: np.ndarray) -> float:
            quadratic = np.real(np.trace(x.conj().T @ hermitian @ x @ outer))
            return float(2 * np.real(np.sum(x * linear)) - quadratic)

        def bound(x: np.ndarray, depth: int) -> float:
            if depth == nt:
                return value(x)
            coupling = (hermitian @ x @ outer)[depth:]
            free = linear[depth:] - coupling.conj()
            row_best = np.max(
                2 * np.real(entries[np.newaxis, :, np.newaxis] * free[:, np.newaxis, :]), axis=(1, 2)
            )
            return value(x) + float(np.sum(row_best))

        best = {
            "value": value(CodebookService.materialize(incumbent)),
            "rf": np.array(incumbent.rf_index),
            "phase": np.array(incumbent.phase_index),
        }
        x = np.zeros((nt, n_rf), dtype=np.complex128)
        rf_choice = np.zeros(nt, dtype=np.int64)
        phase_choice = np.zeros(nt, dtype=np.int64)
        visited = 0

        def visit(depth: int) -> None:
            nonlocal visited
            visited += 1
            if depth == nt:
                leaf = value(x)
                if leaf > best["value"] + _improvement_tol(best["value"]):
                    best.update(value=leaf, rf=rf_choice.copy(), phase=phase_choice.copy())
                return
            for phase in range(codebook.size):
                for rf in range(n_rf):
                    x[depth, :] = 0
                    x[depth, rf] = entries[phase]
                    rf_choice[depth], phase_choice[depth] = rf, phase
                    if bound(x, depth + 1) <= best["value"] + _improvement_tol(best["value"]):
                        continue
                    visit(depth + 1)
            x[depth, :] = 0

        visit(0)
        logger.debug(f"Branch-and-bound visited {visited} nodes of {count} leaves, delta {best['value']:.6e}")
        return AnalogBeamformer(codebook=codebook, n_rf=n_rf, rf_index=best["rf"], phase_index=best["phase"])
