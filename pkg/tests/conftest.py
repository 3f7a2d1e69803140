import os
from typing import AsyncGenerator

import httpx
import numpy as np
import pytest

# Set test environment variables before the app reads them
os.environ["TESTING"] = "true"
os.environ.setdefault("HBF_API_MAX_TRIALS", "20")

from app.main import app
from app.models.channel import ArrayGeometry, ChannelSet
from app.models.codebook import AnalogBeamformer, PhaseCodebook
from app.models.design import CssmOptions
from app.services.channel_service import ChannelService
from app.services.codebook_service import CodebookService
from app.services.duality_service import DualityService
from app.services.metrics_service import MetricsService


@pytest.fixture
async def async_client() -> AsyncGenerator[httpx.AsyncClient, None]:
    """Create an async test client for the FastAPI app."""
    async with httpx.AsyncClient(transport=httpx.ASGITransport(app=app), base_url="http://testserver") as client:
        yield client


class BeamformerFactory:
    """Factory for seeded channels and random beamformers in tests."""

    @staticmethod
    def channel_set(nx: int = 4, ny: int = 4, users: int = 2, seed: int = 0, trial: int = 0) -> ChannelSet:
        """Generated mmWave channels with unit noise variance."""
        return ChannelService.generate_channel_set(ArrayGeometry(nx=nx, ny=ny), users, seed, trial_index=trial)

    @staticmethod
    def gaussian_channel_set(nt: int, users: int, rng: np.random.Generator, noise_var: float = 1.0) -> ChannelSet:
        """i.i.d. CN(0, 1) channels without geometry."""
        h = (rng.standard_normal((users, nt)) + 1j * rng.standard_normal((users, nt))) / np.sqrt(2)
        return ChannelSet.from_matrix(h, noise_var)

    @staticmethod
    def analog(nt: int, n_rf: int, bits: int, rng: np.random.Generator) -> AnalogBeamformer:
        return CodebookService.random_assignment(PhaseCodebook(bits=bits, nt=nt), n_rf, rng)

    @staticmethod
    def digital(n_rf: int, users: int, rng: np.random.Generator) -> np.ndarray:
        return (rng.standard_normal((n_rf, users)) + 1j * rng.standard_normal((n_rf, users))) / np.sqrt(2)

    @staticmethod
    def complex_vector(size: int, rng: np.random.Generator) -> np.ndarray:
        return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


@pytest.fixture
def factory() -> type:
    return BeamformerFactory


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def channels() -> ChannelSet:
    """Two users on a 4x4 array."""
    return BeamformerFactory.channel_set()


@pytest.fixture
def codebook() -> PhaseCodebook:
    """2-bit codebook for 16 antennas."""
    return PhaseCodebook(bits=2, nt=16)


@pytest.fixture
def tiny_instance(rng):
    """nt=4, n_rf=K=2, B=1: 256 analog assignments."""
    channel_set = BeamformerFactory.gaussian_channel_set(4, 2, rng)
    codebook = PhaseCodebook(bits=1, nt=4)
    return channel_set, codebook


def enumerate_assignments(codebook: PhaseCodebook, n_rf: int):
    """Every analog assignment, in lexicographic order of (rf, phase) per antenna."""
    choices = [(rf, phase) for rf in range(n_rf) for phase in range(codebook.size)]
    nt = codebook.nt
    for flat in range(len(choices) ** nt):
        rf_index = np.zeros(nt, dtype=np.int64)
        phase_index = np.zeros(nt, dtype=np.int64)
        for antenna in range(nt):
            flat, pick = divmod(flat, len(choices))
            rf_index[antenna], phase_index[antenna] = choices[pick]
        yield AnalogBeamformer(codebook=codebook, n_rf=n_rf, rf_index=rf_index, phase_index=phase_index)


def cssm_sum_rate(channel_set: ChannelSet, analog: AnalogBeamformer, total_power: float) -> float:
    """Sum-rate of an analog assignment paired with the duality-based digital stage."""
    f_rf = CodebookService.materialize(analog)
    eff = MetricsService.effective_channels(channel_set, f_rf)
    f_bb, _ = DualityService.design_digital(eff, channel_set.noise_vars, f_rf, total_power, CssmOptions())
    return MetricsService.sum_rate(channel_set, f_rf, f_bb)


class AssertionHelpers:
    """Helper methods for test assertions."""

    @staticmethod
    def assert_error_response(response, expected_message: str):
        """Assert that response contains expected error message."""
        data = response.json()
        if "detail" in data:
            assert expected_message in str(data["detail"])
        else:
            assert expected_message in str(data)

    @staticmethod
    def assert_non_decreasing(values, slack: float = 1e-8):
        for before, after in zip(values, values[1:]):
            assert after >= before - slack
