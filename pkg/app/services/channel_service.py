"""Clustered multipath mmWave MISO channels over a uniform planar array."""

import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.models.channel import AngleRanges, ArrayGeometry, ChannelRecord, ChannelSet, PathParams
from app.utils.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

DEFAULT_NUM_PATHS = 5


class ChannelService:
    """Service class for steering vectors and seeded channel generation."""

    @staticmethod
    def steering_vector(geometry: ArrayGeometry, azimuth: float, elevation: float) -> np.ndarray:
        """
        Unit-norm UPA steering vector a_x(azimuth, elevation) kron a_y(elevation).

        The horizontal index varies slowest: element nx_idx * ny + ny_idx.

        Args:
            geometry: Array geometry
            azimuth: Horizontal angle of departure in radians
            elevation: Vertical angle of departure in radians

        Returns:
            np.ndarray: Complex vector of length geometry.nt
        """
        k_d = 2 * np.pi * geometry.spacing_over_wavelength
        a_y = np.exp(1j * k_d * np.cos(elevation) * np.arange(geometry.ny)) / np.sqrt(geometry.ny)
        a_x = np.exp(
            1j * k_d * np.sin(elevation) * np.sin(azimuth) * np.arange(geometry.nx)
        ) / np.sqrt(geometry.nx)
        return np.kron(a_x, a_y)

    @staticmethod
    def channel_from_paths(geometry: ArrayGeometry, paths: Sequence[PathParams]) -> np.ndarray:
        """Evaluate h = sqrt(nt / L) * sum_l gain_l * a(azimuth_l, elevation_l)."""
        if not paths:
            raise InvalidParameterError("At least one propagation path is required")
        h = np.zeros(geometry.nt, dtype=np.complex128)
        for path in paths:
            h += path.gain * ChannelService.steering_vector(geometry, path.azimuth, path.elevation)
        return np.sqrt(geometry.nt / len(paths)) * h

    @staticmethod
    def generate_channel(
        geometry: ArrayGeometry,
        num_paths: int,
        rng_seed: Union[int, np.random.Generator],
        angles: Optional[AngleRanges] = None,
    ) -> Tuple[np.ndarray, List[PathParams]]:
        """
        Draw one user's channel.

        Gains are CN(0, 1); angles are uniform over ``angles``. Draw order is
        gains (real parts, then imaginary parts), azimuths, elevations.

        Args:
            geometry: Array geometry
            num_paths: Number of propagation paths L
            rng_seed: Integer seed or an existing generator
            angles: Angle sampling ranges (defaults to the mmWave ranges)

        Returns:
            Tuple[np.ndarray, List[PathParams]]: Channel vector and its paths

        Raises:
            InvalidParameterError: If num_paths < 1
        """
        if num_paths < 1:
            raise InvalidParameterError("num_paths must be at least 1")
        angles = angles or AngleRanges()
        rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)

        gains = (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)) / np.sqrt(2)
        azimuths = rng.uniform(angles.azimuth_min, angles.azimuth_max, num_paths)
        elevations = rng.uniform(angles.elevation_min, angles.elevation_max, num_paths)

        paths = [
            PathParams(gain=complex(g), azimuth=float(az), elevation=float(el))
            for g, az, el in zip(gains, azimuths, elevations)
        ]
        return ChannelService.channel_from_paths(geometry, paths), paths

    @staticmethod
    def derive_seed(master_seed: int, *counters: int) -> int:
        """
        Sub-stream seed for a (trial, user, ...) counter tuple.

        Seeds come from ``SeedSequence(master_seed, spawn_key=counters)`` so any
        work item can be regenerated without replaying the others.
        """
        sequence = np.random.SeedSequence(master_seed, spawn_key=tuple(int(c) for c in counters))
        return int(sequence.generate_state(1, dtype=np.uint64)[0])

    @staticmethod
    def generate_channel_set(
        geometry: ArrayGeometry,
        num_users: int,
        master_seed: int,
        trial_index: int = 0,
        num_paths: Union[int, Sequence[int]] = DEFAULT_NUM_PATHS,
        noise_var: Union[float, Sequence[float]] = 1.0,
        angles: Optional[AngleRanges] = None,
    ) -> ChannelSet:
        """
        Generate all users' channels for one trial.

        User k of trial t draws from ``derive_seed(master_seed, t, k)``.

        Args:
            geometry: Array geometry
            num_users: Number of users K
            master_seed: Experiment master seed
            trial_index: Trial counter
            num_paths: Path count shared by all users, or one count per user
            noise_var: Noise variance shared by all users, or one per user
            angles: Angle sampling ranges

        Returns:
            ChannelSet: Channels with their path parameters
        """
        if num_users < 1:
            raise InvalidParameterError("num_users must be at least 1")
        path_counts = [num_paths] * num_users if isinstance(num_paths, int) else list(num_paths)
        if len(path_counts) != num_users:
            raise InvalidParameterError("one path count is required per user")

        channels, paths = [], []
        for user in range(num_users):
            seed = ChannelService.derive_seed(master_seed, trial_index, user)
            h, user_paths = ChannelService.generate_channel(geometry, path_counts[user], seed, angles)
            channels.append(h)
            paths.append(user_paths)

        noise = np.broadcast_to(np.asarray(noise_var, dtype=np.float64), (num_users,))
        return ChannelSet(
            channels=np.vstack(channels),
            noise_vars=noise,
            geometry=geometry,
            paths=paths,
            seed=master_seed,
        )

    @staticmethod
    def regenerate(channel_set: ChannelSet) -> np.ndarray:
        """Rebuild the K x nt channel matrix from stored geometry and paths."""
        if channel_set.geometry is None or not channel_set.paths:
            raise InvalidParameterError("Channel set carries no geometry/path parameters")
        return np.vstack([
            ChannelService.channel_from_paths(channel_set.geometry, user_paths)
            for user_paths in channel_set.paths
        ])

    @staticmethod
    def to_record(channel_set: ChannelSet, trial_index: Optional[int] = None) -> ChannelRecord:
        if channel_set.geometry is None:
            raise InvalidParameterError("Only generated channel sets can be dumped")
        return ChannelRecord(
            seed=channel_set.seed,
            trial_index=trial_index,
            geometry=channel_set.geometry,
            paths=channel_set.paths,
            noise_vars=[float(v) for v in channel_set.noise_vars],
        )

    @staticmethod
    def from_record(record: ChannelRecord) -> ChannelSet:
        channels = np.vstack([
            ChannelService.channel_from_paths(record.geometry, user_paths)
            for user_paths in record.paths
        ])
        return ChannelSet(
            channels=channels,
            noise_vars=record.noise_vars,
            geometry=record.geometry,
            paths=record.paths,
            seed=record.seed,
        )

    @staticmethod
    def dump_channel_records(path: Union[str, Path], records: Iterable[ChannelRecord]) -> int:
        """Write channel records as JSON lines; returns the number written."""
        count = 0
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(record.model_dump_json() + "\n")
                count += 1
        logger.debug(f"Wrote {count} channel records to {path}")
        return count

    @staticmethod
    def load_channel_records(path: Union[str, Path]) -> List[ChannelRecord]:
        records = []
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    records.append(ChannelRecord.model_validate(json.loads(line)))
        return records
