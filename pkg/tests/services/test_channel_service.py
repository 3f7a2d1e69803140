import numpy as np
import pytest

from app.models.channel import ArrayGeometry, ChannelSet, PathParams
from app.services.channel_service import ChannelService
from app.utils.exceptions import InvalidParameterError


class TestSteeringVector:
    """Test UPA steering vectors."""

    def test_unit_norm(self):
        """Test that steering vectors have unit norm."""
        a = ChannelService.steering_vector(ArrayGeometry(nx=6, ny=6), 0.3, -0.2)
        assert np.linalg.norm(a) == pytest.approx(1.0)

    def test_element_ordering(self):
        """Test that the horizontal index varies slowest."""
        geometry = ArrayGeometry(nx=2, ny=3)
        azimuth, elevation = 0.4, 0.7
        a = ChannelService.steering_vector(geometry, azimuth, elevation)
        for ix in range(2):
            for iy in range(3):
                phase = np.pi * (ix * np.sin(elevation) * np.sin(azimuth) + iy * np.cos(elevation))
                assert a[ix * 3 + iy] == pytest.approx(np.exp(1j * phase) / np.sqrt(6))

    def test_broadside_is_uniform_horizontally(self):
        """Test that zero azimuth gives equal phases along x."""
        a = ChannelService.steering_vector(ArrayGeometry(nx=4, ny=1), 0.0, 0.3)
        np.testing.assert_allclose(a, a[0] * np.ones(4))


class TestChannelGeneration:
    """Test seeded channel generation."""

    def test_single_path_scaling(self):
        """Test h = sqrt(nt) * gain * a for one path."""
        geometry = ArrayGeometry(nx=2, ny=2)
        path = PathParams(gain=0.5 - 0.5j, azimuth=0.1, elevation=0.2)
        h = ChannelService.channel_from_paths(geometry, [path])
        expected = 2.0 * (0.5 - 0.5j) * ChannelService.steering_vector(geometry, 0.1, 0.2)
        np.testing.assert_allclose(h, expected)

    def test_empty_paths_rejected(self):
        """Test that at least one path is required."""
        with pytest.raises(InvalidParameterError):
            ChannelService.channel_from_paths(ArrayGeometry(nx=2, ny=2), [])

    def test_num_paths_validated(self):
        """Test that num_paths must be positive."""
        with pytest.raises(InvalidParameterError):
            ChannelService.generate_channel(ArrayGeometry(nx=2, ny=2), 0, 1)

    def test_angles_within_ranges(self):
        """Test that sampled angles respect the default ranges."""
        _, paths = ChannelService.generate_channel(ArrayGeometry(nx=4, ny=4), 50, 7)
        assert all(-np.pi / 2 <= p.azimuth <= np.pi / 2 for p in paths)
        assert all(-np.pi / 4 <= p.elevation <= np.pi / 4 for p in paths)

    def test_same_seed_same_channels(self):
        """Test reproducibility under a fixed master seed."""
        geometry = ArrayGeometry(nx=4, ny=4)
        first = ChannelService.generate_channel_set(geometry, 3, 99, trial_index=5)
        second = ChannelService.generate_channel_set(geometry, 3, 99, trial_index=5)
        np.testing.assert_array_equal(first.channels, second.channels)

    def test_trials_differ(self):
        """Test that different trials draw different channels."""
        geometry = ArrayGeometry(nx=4, ny=4)
        first = ChannelService.generate_channel_set(geometry, 2, 99, trial_index=0)
        second = ChannelService.generate_channel_set(geometry, 2, 99, trial_index=1)
        assert not np.allclose(first.channels, second.channels)

    def test_user_stream_independent_of_user_count(self):
        """Test that user k's channel does not depend on how many users follow it."""
        geometry = ArrayGeometry(nx=4, ny=4)
        two = ChannelService.generate_channel_set(geometry, 2, 3)
        four = ChannelService.generate_channel_set(geometry, 4, 3)
        np.testing.assert_array_equal(two.channels, four.channels[:2])

    def test_derive_seed(self):
        """Test that sub-stream seeds are deterministic and distinct."""
        assert ChannelService.derive_seed(1, 0, 0) == ChannelService.derive_seed(1, 0, 0)
        assert ChannelService.derive_seed(1, 0, 0) != ChannelService.derive_seed(1, 0, 1)
        assert ChannelService.derive_seed(1, 0, 0) != ChannelService.derive_seed(2, 0, 0)

    def test_per_user_path_counts(self):
        """Test that each user can have its own path count."""
        channel_set = ChannelService.generate_channel_set(ArrayGeometry(nx=2, ny=2), 2, 0, num_paths=[1, 3])
        assert [len(p) for p in channel_set.paths] == [1, 3]

    def test_path_count_list_length(self):
        """Test that a path-count list needs one entry per user."""
        with pytest.raises(InvalidParameterError):
            ChannelService.generate_channel_set(ArrayGeometry(nx=2, ny=2), 2, 0, num_paths=[1])

    def test_regenerate_matches(self, channels):
        """Test that stored paths rebuild the channel matrix."""
        np.testing.assert_allclose(ChannelService.regenerate(channels), channels.channels)

    def test_mean_channel_energy(self):
        """Test that the mean of ||h||^2 over 10^4 draws is within 5% of nt (nt=16, L=5)."""
        geometry = ArrayGeometry(nx=4, ny=4)
        rng = np.random.default_rng(2718)
        energies = [
            np.linalg.norm(ChannelService.generate_channel(geometry, 5, rng)[0]) ** 2 for _ in range(10_000)
        ]
        assert np.mean(energies) == pytest.approx(16.0, rel=0.05)


class TestChannelRecords:
    """Test the JSON-lines channel dump."""

    def test_dump_and_replay(self, tmp_path, channels):
        """Test that a dumped trial replays to the same channels."""
        path = tmp_path / "channels.jsonl"
        written = ChannelService.dump_channel_records(path, [ChannelService.to_record(channels, trial_index=0)])
        records = ChannelService.load_channel_records(path)
        assert written == 1
        assert records[0].trial_index == 0
        replayed = ChannelService.from_record(records[0])
        np.testing.assert_allclose(replayed.channels, channels.channels, rtol=1e-12)

    def test_matrix_sets_cannot_be_dumped(self):
        """Test that geometry-free sets have no record form."""
        with pytest.raises(InvalidParameterError):
            ChannelService.to_record(ChannelSet.from_matrix(np.ones((1, 4))))
