import numpy as np
import pytest
from pydantic import ValidationError

from app.models.codebook import AnalogBeamformer, PhaseCodebook, SelectionMatrix


class TestPhaseCodebook:
    """Test PhaseCodebook entries."""

    def test_size_and_magnitude(self):
        """Test that a B-bit codebook holds 2^B entries of magnitude 1/sqrt(nt)."""
        codebook = PhaseCodebook(bits=3, nt=16)
        assert codebook.size == 8
        np.testing.assert_allclose(np.abs(codebook.entries), 0.25)

    def test_index_zero_is_phase_zero(self):
        """Test that entries are sorted by phase starting at 0."""
        codebook = PhaseCodebook(bits=2, nt=4)
        np.testing.assert_allclose(codebook.phases, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
        assert codebook.entries[0].real == pytest.approx(0.5)

    def test_one_bit_is_plus_minus(self):
        """Test the 1-bit codebook {+1, -1}/sqrt(nt)."""
        codebook = PhaseCodebook(bits=1, nt=1)
        np.testing.assert_allclose(codebook.entries, [1.0, -1.0], atol=1e-15)

    def test_bits_range(self):
        """Test that zero bits are rejected."""
        with pytest.raises(ValidationError):
            PhaseCodebook(bits=0, nt=4)


class TestAnalogBeamformer:
    """Test AnalogBeamformer invariants."""

    def test_valid_assignment(self):
        """Test a valid assignment and its row values."""
        codebook = PhaseCodebook(bits=1, nt=3)
        fb = AnalogBeamformer(codebook=codebook, n_rf=2, rf_index=[0, 1, 1], phase_index=[1, 0, 1])
        assert fb.nt == 3
        assert fb.bits == 1
        np.testing.assert_allclose(fb.row_values(), np.array([-1, 1, -1]) / np.sqrt(3), atol=1e-15)

    def test_rf_index_out_of_range(self):
        """Test that chain indices must lie below n_rf."""
        codebook = PhaseCodebook(bits=1, nt=2)
        with pytest.raises(ValidationError):
            AnalogBeamformer(codebook=codebook, n_rf=2, rf_index=[0, 2], phase_index=[0, 0])

    def test_phase_index_out_of_range(self):
        """Test that phase indices must lie below 2^B."""
        codebook = PhaseCodebook(bits=1, nt=2)
        with pytest.raises(ValidationError):
            AnalogBeamformer(codebook=codebook, n_rf=1, rf_index=[0, 0], phase_index=[0, 2])

    def test_one_assignment_per_antenna(self):
        """Test that every antenna needs exactly one assignment."""
        codebook = PhaseCodebook(bits=1, nt=3)
        with pytest.raises(ValidationError):
            AnalogBeamformer(codebook=codebook, n_rf=1, rf_index=[0, 0], phase_index=[0, 0])

    def test_non_integer_rejected(self):
        """Test that fractional indices are rejected."""
        codebook = PhaseCodebook(bits=1, nt=2)
        with pytest.raises(ValidationError):
            AnalogBeamformer(codebook=codebook, n_rf=1, rf_index=[0, 0.5], phase_index=[0, 0])

    def test_with_rows_and_same_assignment(self):
        """Test replacing rows and comparing assignments."""
        codebook = PhaseCodebook(bits=1, nt=2)
        fb = AnalogBeamformer(codebook=codebook, n_rf=2, rf_index=[0, 1], phase_index=[0, 0])
        moved = fb.with_rows([1, 1], [0, 0])
        assert not fb.same_assignment(moved)
        assert moved.same_assignment(fb.with_rows([1, 1], [0, 0]))

    def test_indices_are_read_only(self):
        """Test that stored index arrays cannot be modified in place."""
        codebook = PhaseCodebook(bits=1, nt=2)
        fb = AnalogBeamformer(codebook=codebook, n_rf=1, rf_index=[0, 0], phase_index=[0, 1])
        with pytest.raises(ValueError):
            fb.rf_index[0] = 0


class TestSelectionMatrix:
    """Test SelectionMatrix shape validation."""

    def test_width_must_match(self):
        """Test that the matrix needs n_rf * 2^B columns."""
        with pytest.raises(ValidationError):
            SelectionMatrix(matrix=np.zeros((2, 3)), n_rf=2, bits=1)

    def test_valid_width(self):
        """Test a correctly sized matrix."""
        selection = SelectionMatrix(matrix=np.zeros((2, 4)), n_rf=2, bits=1)
        assert selection.matrix.shape == (2, 4)
