import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


class ArrayGeometry(BaseModel):
    """Uniform planar array with nx horizontal and ny vertical elements."""
    model_config = ConfigDict(frozen=True)

    nx: int = Field(ge=1, description="Antenna count, horizontal")
    ny: int = Field(ge=1, description="Antenna count, vertical")
    spacing_over_wavelength: float = Field(default=0.5, gt=0, description="d / lambda")

    @property
    def nt(self) -> int:
        return self.nx * self.ny

    @classmethod
    def parse(cls, text: str, spacing_over_wavelength: float = 0.5) -> "ArrayGeometry":
        """Build a geometry from an ``"NxxNy"`` string such as ``"6x6"``."""
        parts = text.lower().replace(" ", "").split("x")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"Array size must look like '4x4', got '{text}'")
        return cls(nx=int(parts[0]), ny=int(parts[1]), spacing_over_wavelength=spacing_over_wavelength)

    def label(self) -> str:
        return f"{self.nx}x{self.ny}"


class PathParams(BaseModel):
    """One propagation path: complex gain plus horizontal/vertical angles of departure."""
    model_config = ConfigDict(frozen=True)

    gain: complex
    azimuth: float
    elevation: float

    @field_validator("gain", mode="before")
    @classmethod
    def validate_gain(cls, v):
        # JSON dumps store the gain as [re, im]
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError("Gain must be given as [re, im]")
            return complex(float(v[0]), float(v[1]))
        return v

    @field_serializer("gain")
    def serialize_gain(self, gain: complex) -> List[float]:
        return [gain.real, gain.imag]


class AngleRanges(BaseModel):
    """Uniform sampling ranges for the angles of departure, in radians."""
    model_config = ConfigDict(frozen=True)

    azimuth_min: float = -math.pi / 2
    azimuth_max: float = math.pi / 2
    elevation_min: float = -math.pi / 4
    elevation_max: float = math.pi / 4

    @model_validator(mode="after")
    def validate_order(self):
        if self.azimuth_min > self.azimuth_max:
            raise ValueError("azimuth_min must not exceed azimuth_max")
        if self.elevation_min > self.elevation_max:
            raise ValueError("elevation_min must not exceed elevation_max")
        return self


class ChannelSet(BaseModel):
    """
    The K downlink channel vectors of one Monte-Carlo trial.

    ``channels`` is a K x nt complex array whose row k is h_k. ``geometry`` and
    ``paths`` are absent for effective or synthetic channels built with
    ``from_matrix``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    channels: np.ndarray
    noise_vars: np.ndarray
    geometry: Optional[ArrayGeometry] = None
    paths: List[List[PathParams]] = Field(default_factory=list)
    seed: Optional[int] = None

    @field_validator("channels", mode="before")
    @classmethod
    def validate_channels(cls, v):
        arr = np.array(v, dtype=np.complex128, copy=True)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("channels must be a non-empty K x nt matrix")
        arr.flags.writeable = False
        return arr

    @field_validator("noise_vars", mode="before")
    @classmethod
    def validate_noise_vars(cls, v):
        arr = np.atleast_1d(np.array(v, dtype=np.float64, copy=True))
        if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("noise variances must be positive")
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def validate_shapes(self):
        if self.noise_vars.shape != (self.channels.shape[0],):
            raise ValueError("one noise variance is required per user")
        if self.geometry is not None and self.channels.shape[1] != self.geometry.nt:
            raise ValueError("channel length must equal geometry.nt")
        if self.paths and len(self.paths) != self.channels.shape[0]:
            raise ValueError("one path list is required per user")
        return self

    @property
    def num_users(self) -> int:
        return self.channels.shape[0]

    @property
    def nt(self) -> int:
        return self.channels.shape[1]

    @classmethod
    def from_matrix(cls, channels, noise_vars=1.0) -> "ChannelSet":
        """Wrap a raw K x n channel matrix; a scalar noise variance is shared by all users."""
        arr = np.atleast_2d(np.asarray(channels, dtype=np.complex128))
        noise = np.broadcast_to(np.asarray(noise_vars, dtype=np.float64), (arr.shape[0],))
        return cls(channels=arr, noise_vars=noise)


class ChannelRecord(BaseModel):
    """One line of a channel dump: everything needed to replay a trial."""
    seed: Optional[int] = None
    trial_index: Optional[int] = None
    sweep_value: Optional[str] = None
    geometry: ArrayGeometry
    paths: List[List[PathParams]]
    noise_vars: List[float]
