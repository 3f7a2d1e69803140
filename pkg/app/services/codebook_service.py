"""Phase-shifter codebook and dynamic-subarray analog beamformer operations."""

from typing import Optional

import numpy as np

from app.models.codebook import AnalogBeamformer, PhaseCodebook, SelectionMatrix
from app.utils.exceptions import InvalidParameterError, SelectionMatrixError


class CodebookService:
    """Service class for analog beamformer representations."""

    @staticmethod
    def materialize(fb: AnalogBeamformer) -> np.ndarray:
        """
        Build the dense nt x n_rf analog matrix F_RF.

        Args:
            fb: Analog beamformer assignment

        Returns:
            np.ndarray: Matrix with exactly one nonzero codebook entry per row
        """
        f_rf = np.zeros((fb.nt, fb.n_rf), dtype=np.complex128)
        f_rf[np.arange(fb.nt), fb.rf_index] = fb.row_values()
        return f_rf

    @staticmethod
    def set_matrix(codebook: PhaseCodebook, n_rf: int) -> np.ndarray:
        """Block-diagonal F_set of shape (n_rf * 2^B) x n_rf holding f_set in each block."""
        return np.kron(np.eye(n_rf), codebook.entries[:, np.newaxis])

    @staticmethod
    def to_selection(fb: AnalogBeamformer) -> SelectionMatrix:
        """Column rf * 2^B + phase of row i is set when antenna i uses that slot."""
        matrix = np.zeros((fb.nt, fb.n_rf * fb.codebook.size), dtype=np.int8)
        matrix[np.arange(fb.nt), fb.rf_index * fb.codebook.size + fb.phase_index] = 1
        return SelectionMatrix(matrix=matrix, n_rf=fb.n_rf, bits=fb.bits)

    @staticmethod
    def from_selection(selection: SelectionMatrix, codebook: PhaseCodebook) -> AnalogBeamformer:
        """
        Decode a selection matrix back into an assignment.

        Args:
            selection: Binary selection matrix
            codebook: Codebook matching the matrix width

        Returns:
            AnalogBeamformer: Decoded beamformer

        Raises:
            SelectionMatrixError: If an entry is not binary or a row does not hold exactly one 1
        """
        matrix = selection.matrix
        if selection.bits != codebook.bits or matrix.shape[0] != codebook.nt:
            raise SelectionMatrixError("Selection matrix does not match the codebook dimensions")
        if not np.all((matrix == 0) | (matrix == 1)):
            raise SelectionMatrixError("Selection matrix entries must be 0 or 1")
        row_sums = matrix.sum(axis=1)
        bad_rows = np.flatnonzero(row_sums != 1)
        if bad_rows.size:
            raise SelectionMatrixError(
                f"Row {int(bad_rows[0])} of the selection matrix sums to {int(row_sums[bad_rows[0]])}, expected 1"
            )
        columns = np.argmax(matrix, axis=1)
        return AnalogBeamformer(
            codebook=codebook,
            n_rf=selection.n_rf,
            rf_index=columns // codebook.size,
            phase_index=columns % codebook.size,
        )

    @staticmethod
    def fixed_partition(nt: int, n_rf: int) -> np.ndarray:
        """Contiguous partition: 1-based antenna i goes to 1-based chain ceil(i * n_rf / nt)."""
        if nt < 1 or n_rf < 1:
            raise InvalidParameterError("nt and n_rf must be positive")
        antennas = np.arange(1, nt + 1)
        return -(-(antennas * n_rf) // nt) - 1

    @staticmethod
    def quantize_phase(angles, bits: int) -> np.ndarray:
        """Index of the nearest codebook phase for each angle (radians)."""
        size = 2 ** bits
        steps = np.asarray(angles, dtype=np.float64) / (2 * np.pi / size)
        return np.mod(np.floor(steps + 0.5), size).astype(np.int64)

    @staticmethod
    def subarray_sizes(fb: AnalogBeamformer) -> np.ndarray:
        return np.bincount(fb.rf_index, minlength=fb.n_rf)

    @staticmethod
    def dumps_assignment(fb: AnalogBeamformer) -> str:
        """Text form: header ``nt n_rf B`` then one ``antenna rf_index phase_index`` line per antenna."""
        lines = [f"{fb.nt} {fb.n_rf} {fb.bits}"]
        lines.extend(
            f"{i} {int(rf)} {int(ph)}" for i, (rf, ph) in enumerate(zip(fb.rf_index, fb.phase_index))
        )
        return "\n".join(lines) + "\n"

    @staticmethod
    def loads_assignment(text: str) -> AnalogBeamformer:
        """
        Parse the text form written by ``dumps_assignment``.

        Raises:
            InvalidParameterError: If the header or a row is malformed or antennas are missing
        """
        rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
        if not rows or len(rows[0]) != 3:
            raise InvalidParameterError("Assignment text must start with 'nt n_rf B'")
        try:
            nt, n_rf, bits = (int(v) for v in rows[0])
            triples = [tuple(int(v) for v in row) for row in rows[1:]]
        except ValueError as e:
            raise InvalidParameterError(f"Assignment text contains a non-integer field: {e}")
        if any(len(t) != 3 for t in triples):
            raise InvalidParameterError("Each assignment row must be 'antenna rf_index phase_index'")

        if nt < 1 or n_rf < 1 or bits < 1:
            raise InvalidParameterError("Header values nt, n_rf and B must be positive")

        rf_index = np.full(nt, -1, dtype=np.int64)
        phase_index = np.full(nt, -1, dtype=np.int64)
        for antenna, rf, phase in triples:
            if not 0 <= antenna < nt:
                raise InvalidParameterError(f"Antenna index {antenna} out of range")
            if not 0 <= rf < n_rf:
                raise InvalidParameterError(f"Antenna {antenna}: rf_index {rf} outside [0, {n_rf})")
            if not 0 <= phase < 2 ** bits:
                raise InvalidParameterError(f"Antenna {antenna}: phase_index {phase} outside [0, {2 ** bits})")
            if rf_index[antenna] >= 0:
                raise InvalidParameterError(f"Antenna {antenna} is assigned twice")
            rf_index[antenna], phase_index[antenna] = rf, phase
        if np.any(rf_index < 0):
            raise InvalidParameterError("Every antenna needs exactly one assignment")

        try:
            return AnalogBeamformer(
                codebook=PhaseCodebook(bits=bits, nt=nt), n_rf=n_rf, rf_index=rf_index, phase_index=phase_index
            )
        except ValueError as e:
            raise InvalidParameterError(str(e))

    @staticmethod
    def random_assignment(
        codebook: PhaseCodebook, n_rf: int, rng: Optional[np.random.Generator] = None
    ) -> AnalogBeamformer:
        rng = rng or np.random.default_rng()
        return AnalogBeamformer(
            codebook=codebook,
            n_rf=n_rf,
            rf_index=rng.integers(0, n_rf, codebook.nt),
            phase_index=rng.integers(0, codebook.size, codebook.nt),
        )
