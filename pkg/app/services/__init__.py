"""Service layer for beamformer design and evaluation."""

from .channel_service import ChannelService
from .codebook_service import CodebookService
from .metrics_service import MetricsService
from .duality_service import DualityService
from .initialization import InitializationService
from .fp import FpService
from .heuristic_service import HeuristicService
from .baseline_service import BaselineService
from .experiment import ExperimentService, ExperimentConfigError

__all__ = [
    "ChannelService",
    "CodebookService",
    "MetricsService",
    "DualityService",
    "InitializationService",
    "FpService",
    "HeuristicService",
    "BaselineService",
    "ExperimentService",
    "ExperimentConfigError",
]
