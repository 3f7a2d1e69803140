"""Result and trace files written by the harness."""

import csv
import json
import logging
from pathlib import Path
from typing import Iterable, List, Union

from app.models.experiment import ConvergenceRow, ExperimentConfig, ResultRow, SweepVariable
from app.utils.config import LIBRARY_VERSION
from .exceptions import ExperimentConfigError

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "sweep_variable",
    "sweep_value",
    "scheme",
    "num_trials",
    "mean_sum_rate",
    "std_error",
    "mean_energy_efficiency",
    "mean_iterations",
    "mean_wall_clock_s",
]
TIMING_COLUMNS = {"mean_wall_clock_s"}
CONVERGENCE_COLUMNS = ["scheme", "iteration", "mean_sum_rate", "num_trials"]
FORMATS = ("csv", "jsonl")


class ResultExporter:
    """Writers for result rows, convergence curves and iteration traces."""

    @staticmethod
    def build_metadata(config: ExperimentConfig) -> dict:
        """Config echo, library version and seed; no timestamps so reruns are byte-identical."""
        return {
            "library_version": LIBRARY_VERSION,
            "master_seed": config.master_seed,
            "ee_transmit_power": (
                {"watts_per_unit_power": config.watts_per_unit_power}
                if config.sweep == SweepVariable.SNR
                else {"fixed_w": config.transmit_power_w}
            ),
            "config": config.model_dump(mode="json"),
        }

    @staticmethod
    def _row_values(row: ResultRow) -> dict:
        data = row.model_dump(mode="json")
        return {column: data[column] for column in RESULT_COLUMNS}

    @staticmethod
    def emit_results(
        rows: Iterable[ResultRow],
        path: Union[str, Path],
        fmt: str = "csv",
        metadata: dict = None,
    ) -> None:
        """
        Write result rows as CSV or JSON lines.

        CSV output starts with ``# metadata: {json}``, then the header in
        ``RESULT_COLUMNS`` order. JSON lines output starts with a
        ``{"record": "metadata", ...}`` object followed by one object per row.

        Args:
            rows: Result rows
            path: Output file
            fmt: ``csv`` or ``jsonl``
            metadata: Metadata record (see ``build_metadata``)

        Raises:
            ExperimentConfigError: If the format is unknown
        """
        if fmt not in FORMATS:
            raise ExperimentConfigError(f"unknown output format '{fmt}'")
        metadata = metadata or {}
        rows = list(rows)
        path = Path(path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)

        with open(path, "w", encoding="utf-8", newline="") as handle:
            if fmt == "csv":
                handle.write(f"# metadata: {json.dumps(metadata, sort_keys=True)}\n")
                writer = csv.DictWriter(handle, fieldnames=RESULT_COLUMNS, lineterminator="\n")
                writer.writeheader()
                for row in rows:
                    writer.writerow(ResultExporter._row_values(row))
            else:
                handle.write(json.dumps({"record": "metadata", **metadata}, sort_keys=True) + "\n")
                for row in rows:
                    handle.write(json.dumps({"record": "result", **row.model_dump(mode="json")}, sort_keys=True) + "\n")
        logger.info(f"Wrote {len(rows)} result rows to {path}")

    @staticmethod
    def emit_convergence(rows: Iterable[ConvergenceRow], path: Union[str, Path], metadata: dict = None) -> None:
        rows = list(rows)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(f"# metadata: {json.dumps(metadata or {}, sort_keys=True)}\n")
            writer = csv.DictWriter(handle, fieldnames=CONVERGENCE_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row.model_dump(mode="json"))
        logger.info(f"Wrote {len(rows)} convergence points to {path}")

    @staticmethod
    def emit_trace(records: Iterable[dict], path: Union[str, Path]) -> int:
        """Per-iteration design records as JSON lines; returns the number written."""
        count = 0
        with open(path, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True) + "\n")
                count += 1
        logger.info(f"Wrote {count} trace records to {path}")
        return count

    @staticmethod
    def read_results(path: Union[str, Path], drop_timing: bool = False) -> List[dict]:
        """Read a CSV result file back, optionally without the timing columns."""
        with open(path, "r", encoding="utf-8", newline="") as handle:
            lines = [line for line in handle if not line.startswith("#")]
        rows = list(csv.DictReader(lines))
        if drop_timing:
            rows = [{k: v for k, v in row.items() if k not in TIMING_COLUMNS} for row in rows]
        return rows
