"""Named experiment presets."""

from typing import Dict, List

from app.models.experiment import ExperimentConfig, Scheme, SweepVariable
from .exceptions import ExperimentConfigError

PRESETS: Dict[str, dict] = {
    # 16 antennas, two users, sum-rate and EE versus SNR
    "desk": dict(
        nx=4, ny=4, n_rf=2, users=2, bits=2,
        sweep=SweepVariable.SNR, snr_grid=[-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
        num_trials=500,
    ),
    # 36 antennas, three users; expect hours of run time
    "large": dict(
        nx=6, ny=6, n_rf=3, users=3, bits=2,
        sweep=SweepVariable.SNR, snr_grid=[-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
        num_trials=100_000,
    ),
    "bits": dict(
        nx=4, ny=4, n_rf=2, users=2,
        sweep=SweepVariable.BITS, bits_grid=[1, 2, 3, 4, 5], snr_db=10.0,
        num_trials=500, schemes=[Scheme.HEURISTIC],
    ),
    "users": dict(
        nx=4, ny=4, bits=2,
        sweep=SweepVariable.USERS, users_grid=[1, 2, 3, 4], snr_db=10.0, rf_follows_users=True,
        num_trials=500,
    ),
    "antennas": dict(
        n_rf=2, users=2, bits=2,
        sweep=SweepVariable.NT, nt_grid=["2x2", "3x3", "4x4", "5x5", "6x6"], snr_db=10.0,
        num_trials=500,
    ),
}


class Presets:
    """Lookup of the named experiment configurations."""

    @staticmethod
    def names() -> List[str]:
        return sorted(PRESETS)

    @staticmethod
    def get(name: str) -> ExperimentConfig:
        if name not in PRESETS:
            raise ExperimentConfigError(f"unknown preset '{name}', choose from {', '.join(Presets.names())}")
        return ExperimentConfig(**PRESETS[name])
