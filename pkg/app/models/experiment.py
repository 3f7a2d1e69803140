from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.models.channel import ArrayGeometry
from app.models.design import AnalogSolver, FpOptions, HeuristicOpts, StopReason
from app.models.power import Architecture, PowerModel


class Scheme(str, Enum):
    FP = "fp"
    HEURISTIC = "heuristic"
    FIXED_SUBARRAY = "fixed_subarray"
    FULLY_DIGITAL = "fully_digital"

    @property
    def architecture(self) -> Architecture:
        if self == Scheme.FULLY_DIGITAL:
            return Architecture.FULLY_DIGITAL
        if self == Scheme.FIXED_SUBARRAY:
            return Architecture.FIXED_SUBARRAY
        return Architecture.DYNAMIC_SUBARRAY


class SweepVariable(str, Enum):
    SNR = "snr"
    NT = "nt"
    USERS = "users"
    BITS = "bits"


class SweepPoint(BaseModel):
    """Fully resolved parameters of one sweep value."""
    model_config = ConfigDict(frozen=True)

    value: str
    geometry: ArrayGeometry
    users: int
    n_rf: int
    bits: int
    snr_db: float

    @property
    def total_power(self) -> float:
        """P for unit noise variance: SNR = P / sigma^2."""
        return 10.0 ** (self.snr_db / 10.0)


class ExperimentConfig(BaseModel):
    """
    Monte-Carlo experiment description.

    Parameters not swept keep their scalar value (``nx``/``ny``, ``users``,
    ``bits``, ``snr_db``); the swept one takes its values from the matching
    grid.
    """
    model_config = ConfigDict(extra="forbid")

    nx: int = Field(default=4, ge=1)
    ny: int = Field(default=4, ge=1)
    spacing_over_wavelength: float = Field(default=0.5, gt=0)
    n_rf: int = Field(default=2, ge=1)
    users: int = Field(default=2, ge=1)
    bits: int = Field(default=2, ge=1, le=12)
    sweep: SweepVariable = SweepVariable.SNR
    snr_grid: List[float] = Field(default_factory=lambda: [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])
    snr_db: float = 10.0
    nt_grid: List[str] = Field(default_factory=list)
    users_grid: List[int] = Field(default_factory=list)
    bits_grid: List[int] = Field(default_factory=list)
    rf_follows_users: bool = True
    num_trials: int = Field(default=500, ge=1)
    master_seed: int = Field(default=0, ge=0)
    schemes: List[Scheme] = Field(default_factory=lambda: list(Scheme))
    power_model: PowerModel = Field(default_factory=PowerModel)
    transmit_power_w: float = Field(default=1.0, gt=0, description="Radiated power used in the EE model")
    watts_per_unit_power: float = Field(
        default=0.01, gt=0, description="W per unit of P when an SNR sweep sets the EE transmit power"
    )
    num_paths: int = Field(default=5, ge=1)
    threads: int = Field(default=1, ge=1)
    fp: FpOptions = Field(default_factory=FpOptions)
    heuristic: HeuristicOpts = Field(default_factory=HeuristicOpts)

    @field_validator("nt_grid")
    @classmethod
    def validate_nt_grid(cls, v):
        for item in v:
            ArrayGeometry.parse(item)
        return v

    @field_validator("users_grid", "bits_grid")
    @classmethod
    def validate_positive_grid(cls, v):
        if any(item < 1 for item in v):
            raise ValueError("grid values must be positive integers")
        return v

    @field_validator("schemes")
    @classmethod
    def validate_schemes(cls, v):
        if not v:
            raise ValueError("at least one scheme is required")
        if len(set(v)) != len(v):
            raise ValueError("schemes must not repeat")
        return v

    @model_validator(mode="after")
    def validate_sweep(self):
        grid = {
            SweepVariable.SNR: self.snr_grid,
            SweepVariable.NT: self.nt_grid,
            SweepVariable.USERS: self.users_grid,
            SweepVariable.BITS: self.bits_grid,
        }[self.sweep]
        if not grid:
            raise ValueError(f"{self.sweep.value}_grid must not be empty for a {self.sweep.value} sweep")
        if self.sweep == SweepVariable.BITS and max(self.bits_grid) > 12:
            raise ValueError("bits_grid values must not exceed 12")
        for point in self.sweep_points():
            if point.n_rf < point.users:
                raise ValueError(f"n_rf ({point.n_rf}) must be at least the number of users ({point.users})")
            if point.n_rf > point.geometry.nt:
                raise ValueError(f"n_rf ({point.n_rf}) exceeds the antenna count ({point.geometry.nt})")
        return self

    def ee_transmit_power_w(self, point: SweepPoint) -> float:
        """
        Radiated power charged in the EE model at one sweep point.

        An SNR sweep varies P at unit noise, so the radiated power follows it
        through ``watts_per_unit_power``; other sweeps use ``transmit_power_w``.
        """
        if self.sweep == SweepVariable.SNR:
            return point.total_power * self.watts_per_unit_power
        return self.transmit_power_w

    @property
    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry(nx=self.nx, ny=self.ny, spacing_over_wavelength=self.spacing_over_wavelength)

    def sweep_points(self) -> List[SweepPoint]:
        """Resolved parameters for every sweep value, in grid order."""
        base = dict(
            geometry=self.geometry, users=self.users, n_rf=self.n_rf, bits=self.bits, snr_db=self.snr_db
        )
        points = []
        if self.sweep == SweepVariable.SNR:
            for snr in self.snr_grid:
                points.append(SweepPoint(**{**base, "value": f"{snr:g}", "snr_db": snr}))
        elif self.sweep == SweepVariable.NT:
            for label in self.nt_grid:
                geometry = ArrayGeometry.parse(label, self.spacing_over_wavelength)
                points.append(SweepPoint(**{**base, "value": geometry.label(), "geometry": geometry}))
        elif self.sweep == SweepVariable.USERS:
            for users in self.users_grid:
                n_rf = users if self.rf_follows_users else self.n_rf
                points.append(SweepPoint(**{**base, "value": str(users), "users": users, "n_rf": n_rf}))
        else:
            for bits in self.bits_grid:
                points.append(SweepPoint(**{**base, "value": str(bits), "bits": bits}))
        return points


class ResultRow(BaseModel):
    """Aggregate of one (sweep value, scheme) cell over all trials."""
    sweep_variable: SweepVariable
    sweep_value: str
    scheme: Scheme
    num_trials: int
    mean_sum_rate: float
    std_error: float
    mean_energy_efficiency: float
    mean_iterations: float
    mean_wall_clock_s: float
    transmit_power_w: float


class ConvergenceRow(BaseModel):
    scheme: Scheme
    iteration: int
    mean_sum_rate: float
    num_trials: int


class TrialOutcome(BaseModel):
    """One scheme's result on one channel realization."""
    point_index: int
    trial_index: int
    scheme: Scheme
    sum_rate: float
    energy_efficiency: float
    iterations: int
    converged: bool
    wall_clock_s: float
    sum_rate_trace: List[float] = Field(default_factory=list)
    trace: List[dict] = Field(default_factory=list)


class DesignRequest(BaseModel):
    """One seeded design run requested over HTTP."""
    model_config = ConfigDict(extra="forbid")

    scheme: Scheme = Scheme.FP
    nx: int = Field(default=4, ge=1, le=16)
    ny: int = Field(default=4, ge=1, le=16)
    users: int = Field(default=2, ge=1)
    n_rf: int = Field(default=2, ge=1)
    bits: int = Field(default=2, ge=1, le=8)
    snr_db: float = 10.0
    master_seed: int = Field(default=0, ge=0)
    trial_index: int = Field(default=0, ge=0)
    num_paths: int = Field(default=5, ge=1)
    analog_solver: AnalogSolver = AnalogSolver.COORDINATE
    watts_per_unit_power: float = Field(default=0.01, gt=0, description="EE charges P times this many W")

    @model_validator(mode="after")
    def validate_dimensions(self):
        if self.n_rf < self.users:
            raise ValueError("n_rf must be at least the number of users")
        if self.n_rf > self.nx * self.ny:
            raise ValueError("n_rf must not exceed the antenna count")
        return self


class DesignResponse(BaseModel):
    scheme: Scheme
    architecture: Architecture
    sum_rate: float
    energy_efficiency: float
    iterations: int
    converged: bool
    stop_reason: StopReason
    sum_rate_trace: List[float]
    rf_index: Optional[List[int]] = None
    phase_index: Optional[List[int]] = None
    subarray_sizes: Optional[List[int]] = None


class ExperimentResponse(BaseModel):
    metadata: dict
    rows: List[ResultRow]
