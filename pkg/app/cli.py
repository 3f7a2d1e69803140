"""Command line entry point for hybrid beamforming experiments."""

import logging
import sys
from pathlib import Path
from typing import Optional

import click

from app.models.experiment import ExperimentConfig
from app.services.channel_service import ChannelService
from app.services.experiment import ExperimentConfigError, ExperimentService
from app.utils.config import RuntimeConfig
from app.utils.exceptions import BeamformingError

logger = logging.getLogger(__name__)

EXIT_INVALID_CONFIG = 2


def _configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or RuntimeConfig.get_log_level()).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _resolve_config(config_path: Optional[Path], preset: Optional[str]) -> ExperimentConfig:
    if (config_path is None) == (preset is None):
        raise ExperimentConfigError("pass exactly one of --config or --preset")
    if preset is not None:
        return ExperimentService.get_preset(preset)
    return ExperimentService.load_config(config_path)


def _fail(error: BeamformingError) -> None:
    click.echo(error.message, err=True)
    sys.exit(EXIT_INVALID_CONFIG)


@click.group()
def main():
    """Monte-Carlo experiments for dynamic-subarray hybrid beamforming."""


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None, help="JSON or key=value file")
@click.option("--preset", type=str, default=None, help="Named preset (see `presets`)")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Result file")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads (default: config or HBF_THREADS)")
@click.option("--trace", is_flag=True, default=False, help="Also write per-iteration traces next to --out")
@click.option(
    "--dump-channels", type=click.Path(path_type=Path), default=None,
    help="Write one channel record per (sweep value, trial) as JSON lines",
)
@click.option("--log-level", type=str, default=None, help="Overrides HBF_LOG_LEVEL")
def run(
    config_path: Optional[Path],
    preset: Optional[str],
    out: Path,
    fmt: str,
    threads: Optional[int],
    trace: bool,
    dump_channels: Optional[Path],
    log_level: Optional[str],
):
    """Run a sweep and write one row per (sweep value, scheme)."""
    _configure_logging(log_level)
    try:
        config = _resolve_config(config_path, preset)
    except BeamformingError as e:
        _fail(e)
        return
    if threads is not None and threads < 1:
        _fail(ExperimentConfigError("--threads must be positive"))
        return

    threads = threads or max(config.threads, RuntimeConfig.get_threads())
    traces = [] if trace else None
    try:
        rows = ExperimentService.run_experiment(config, threads=threads, traces=traces)
    except BeamformingError as e:
        raise click.ClickException(e.message) from e

    ExperimentService.emit_results(rows, out, fmt, ExperimentService.build_metadata(config))
    if traces is not None:
        trace_path = out.with_name(out.stem + ".trace.jsonl")
        ExperimentService.emit_trace(traces, trace_path)
    if dump_channels is not None:
        written = ChannelService.dump_channel_records(dump_channels, ExperimentService.channel_records(config))
        click.echo(f"Wrote {written} channel records to {dump_channels}")
    click.echo(f"Wrote {len(rows)} rows to {out}")


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None, help="JSON or key=value file")
@click.option("--preset", type=str, default=None, help="Named preset (see `presets`)")
@click.option("--out", required=True, type=click.Path(path_type=Path), help="Result file")
@click.option("--threads", type=int, default=None, help="Worker threads")
@click.option("--log-level", type=str, default=None, help="Overrides HBF_LOG_LEVEL")
def convergence(
    config_path: Optional[Path],
    preset: Optional[str],
    out: Path,
    threads: Optional[int],
    log_level: Optional[str],
):
    """Mean sum-rate versus iteration at the first sweep point."""
    _configure_logging(log_level)
    try:
        config = _resolve_config(config_path, preset)
    except BeamformingError as e:
        _fail(e)
        return
    rows = ExperimentService.run_convergence(config, threads=threads or config.threads)
    ExperimentService.emit_convergence(rows, out, ExperimentService.build_metadata(config))
    click.echo(f"Wrote {len(rows)} convergence points to {out}")


@main.command()
def presets():
    """List the named presets."""
    for name in ExperimentService.preset_names():
        config = ExperimentService.get_preset(name)
        click.echo(
            f"{name}: {config.nx}x{config.ny}, K={config.users}, N_RF={config.n_rf}, B={config.bits}, "
            f"sweep={config.sweep.value}, trials={config.num_trials}"
        )


if __name__ == "__main__":
    main()
