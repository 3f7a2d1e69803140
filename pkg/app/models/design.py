from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.codebook import AnalogBeamformer
from app.models.power import Architecture


class AnalogSolver(str, Enum):
    COORDINATE = "coordinate"
    EXACT = "exact"


class StopReason(str, Enum):
    TOLERANCE = "tolerance"
    STALLED = "stalled"
    MAX_ITERS = "max_iters"
    SINGLE_SHOT = "single_shot"


class CssmOptions(BaseModel):
    """Stopping rule of the cyclic self-SINR-maximization solve."""
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-6, gt=0)
    max_iters: int = Field(default=200, ge=1)


class FpOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-4, gt=0, description="Relative sum-rate tolerance")
    max_iters: int = Field(default=50, ge=1)
    analog_solver: AnalogSolver = AnalogSolver.COORDINATE
    exact_budget: Optional[int] = Field(default=None, ge=1)
    max_passes: int = Field(default=100, ge=1, description="Coordinate-ascent pass cap")
    cssm: CssmOptions = Field(default_factory=CssmOptions)


class HeuristicOpts(BaseModel):
    model_config = ConfigDict(frozen=True)

    outer_tol: float = Field(default=1e-4, gt=0)
    outer_max_iters: int = Field(default=20, ge=1)
    cssm: CssmOptions = Field(default_factory=CssmOptions)


class DualState(BaseModel):
    """
    Result of a dual uplink solve.

    ``directions`` is n x K with unit-norm columns f_k; ``uplink_powers`` sums
    to at most P; ``water_level`` is the multiplier nu of the last water-filling.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    directions: np.ndarray
    uplink_powers: np.ndarray
    water_level: float
    uplink_sinr: np.ndarray
    iterations: int = 0
    converged: bool = True
    rate_trace: List[float] = Field(default_factory=list)

    @property
    def uplink_sum_rate(self) -> float:
        return float(np.sum(np.log2(1.0 + self.uplink_sinr)))


class DeltaForm(BaseModel):
    """
    Quadratic data of the analog/digital surrogate delta for fixed r and t.

    delta = sum_k 2 Re{b_k^H F_RF f_k} - sum_k f_k^H F_RF^H M F_RF f_k, with
    b_k = sqrt(1 + r_k) t_k h_k and M = sum_j |t_j|^2 h_j h_j^H.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    channels: np.ndarray
    r: np.ndarray
    t: np.ndarray

    @property
    def scale(self) -> np.ndarray:
        return np.sqrt(1.0 + self.r)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.t) ** 2

    @property
    def linear(self) -> np.ndarray:
        """K x nt array whose row k is b_k."""
        return (self.scale * self.t)[:, np.newaxis] * self.channels

    @property
    def hermitian(self) -> np.ndarray:
        """The nt x nt positive semidefinite matrix M."""
        return self.channels.T @ (self.weights[:, np.newaxis] * self.channels.conj())


class IterationRecord(BaseModel):
    iteration: int
    sum_rate: float
    best_sum_rate: float
    f_q: Optional[float] = None
    delta: Optional[float] = None
    mu: Optional[float] = None
    changed_rows: int = 0
    accepted: bool = True


class FpState(BaseModel):
    """Iterate of the FP-based design: beamformers plus the auxiliaries r and t."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    f_rf: AnalogBeamformer
    f_bb: np.ndarray
    r: np.ndarray
    t: np.ndarray
    iteration_trace: List[IterationRecord] = Field(default_factory=list)

    @field_validator("r")
    @classmethod
    def validate_r(cls, v):
        if np.any(v < 0):
            raise ValueError("auxiliary SINR surrogates must be nonnegative")
        return v


class DesignResult(BaseModel):
    """Converged hybrid beamformer with its sum-rate trace."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    scheme: str
    architecture: Architecture
    f_rf: np.ndarray
    f_bb: np.ndarray
    analog: Optional[AnalogBeamformer] = None
    sum_rate: float
    iterations: int
    converged: bool
    stop_reason: StopReason
    trace: List[IterationRecord] = Field(default_factory=list)

    @property
    def n_rf(self) -> int:
        return self.f_rf.shape[1]

    @property
    def sum_rate_trace(self) -> List[float]:
        """Best-so-far sum-rate per iteration, starting with the initial point."""
        return [record.best_sum_rate for record in self.trace]
