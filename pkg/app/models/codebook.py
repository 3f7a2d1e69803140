from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class PhaseCodebook(BaseModel):
    """
    Phase set of a B-bit phase shifter.

    Entries are (1/sqrt(nt)) * exp(j*2*pi*b/2^B) for b = 0..2^B-1, so index 0
    is phase 0 and entries are sorted by phase.
    """
    model_config = ConfigDict(frozen=True)

    bits: int = Field(ge=1, le=12, description="Phase-shifter resolution B")
    nt: int = Field(ge=1, description="Total antenna count")

    @property
    def size(self) -> int:
        return 2 ** self.bits

    @cached_property
    def phases(self) -> np.ndarray:
        values = 2 * np.pi * np.arange(self.size) / self.size
        values.flags.writeable = False
        return values

    @cached_property
    def entries(self) -> np.ndarray:
        values = np.exp(1j * self.phases) / np.sqrt(self.nt)
        values.flags.writeable = False
        return values

    @property
    def magnitude(self) -> float:
        return 1.0 / np.sqrt(self.nt)


class AnalogBeamformer(BaseModel):
    """
    Dynamic-subarray analog beamformer stored as one (rf_index, phase_index)
    pair per antenna. The dense nt x n_rf matrix is built on demand by
    ``CodebookService.materialize``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    codebook: PhaseCodebook
    n_rf: int = Field(ge=1)
    rf_index: np.ndarray
    phase_index: np.ndarray

    @field_validator("rf_index", "phase_index", mode="before")
    @classmethod
    def validate_index_array(cls, v):
        arr = np.array(v, copy=True)
        if arr.ndim != 1:
            raise ValueError("assignment indices must be one-dimensional")
        if arr.size and not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("assignment indices must be integers")
        arr = arr.astype(np.int64)
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def validate_assignment(self):
        nt = self.codebook.nt
        if self.rf_index.shape != (nt,) or self.phase_index.shape != (nt,):
            raise ValueError(f"exactly one assignment per antenna is required ({nt} antennas)")
        if np.any(self.rf_index < 0) or np.any(self.rf_index >= self.n_rf):
            raise ValueError(f"rf_index must lie in [0, {self.n_rf})")
        if np.any(self.phase_index < 0) or np.any(self.phase_index >= self.codebook.size):
            raise ValueError(f"phase_index must lie in [0, {self.codebook.size})")
        return self

    @property
    def nt(self) -> int:
        return self.codebook.nt

    @property
    def bits(self) -> int:
        return self.codebook.bits

    def row_values(self) -> np.ndarray:
        """The nonzero entry of every row, in antenna order."""
        return self.codebook.entries[self.phase_index]

    def with_rows(self, rf_index, phase_index) -> "AnalogBeamformer":
        return AnalogBeamformer(
            codebook=self.codebook, n_rf=self.n_rf, rf_index=rf_index, phase_index=phase_index
        )

    def same_assignment(self, other: "AnalogBeamformer") -> bool:
        return (
            self.n_rf == other.n_rf
            and self.codebook.bits == other.codebook.bits
            and self.codebook.nt == other.codebook.nt
            and np.array_equal(self.rf_index, other.rf_index)
            and np.array_equal(self.phase_index, other.phase_index)
        )


class SelectionMatrix(BaseModel):
    """Binary nt x (n_rf * 2^B) matrix S with F_RF = S F_set."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    n_rf: int = Field(ge=1)
    bits: int = Field(ge=1)

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v):
        arr = np.array(v, copy=True)
        if arr.ndim != 2:
            raise ValueError("selection matrix must be two-dimensional")
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def validate_width(self):
        if self.matrix.shape[1] != self.n_rf * 2 ** self.bits:
            raise ValueError("selection matrix must have n_rf * 2^B columns")
        return self
