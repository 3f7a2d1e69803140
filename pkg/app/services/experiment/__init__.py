"""
Experiment harness package.

Configuration loading, presets, the Monte-Carlo runner and the result
writers live in separate modules; ``ExperimentService`` combines them.
"""

from .config_loader import ConfigLoader
from .exceptions import ExperimentConfigError
from .export import RESULT_COLUMNS, ResultExporter
from .presets import Presets
from .runner import ExperimentRunner


class ExperimentService:
    """Unified experiment service."""

    # Configuration
    load_config = staticmethod(ConfigLoader.load_config)
    get_preset = staticmethod(Presets.get)
    preset_names = staticmethod(Presets.names)

    # Execution
    run_experiment = staticmethod(ExperimentRunner.run_experiment)
    run_convergence = staticmethod(ExperimentRunner.run_convergence)
    run_trial = staticmethod(ExperimentRunner.run_trial)
    channel_records = staticmethod(ExperimentRunner.channel_records)

    # Output
    build_metadata = staticmethod(ResultExporter.build_metadata)
    emit_results = staticmethod(ResultExporter.emit_results)
    emit_convergence = staticmethod(ResultExporter.emit_convergence)
    emit_trace = staticmethod(ResultExporter.emit_trace)
    read_results = staticmethod(ResultExporter.read_results)


__all__ = [
    "ExperimentService",
    "ConfigLoader",
    "ExperimentConfigError",
    "ExperimentRunner",
    "Presets",
    "ResultExporter",
    "RESULT_COLUMNS",
]
