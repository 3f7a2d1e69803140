"""
Experiment configuration files.

Two formats are accepted: JSON, and ``key=value`` lines read with
python-dotenv. In the key/value form list fields are comma separated and
nested fields use dotted keys such as ``power_model.p_rf=250``.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from dotenv import dotenv_values
from pydantic import ValidationError

from app.models.experiment import ExperimentConfig
from .exceptions import ExperimentConfigError

logger = logging.getLogger(__name__)

LIST_FIELDS = {"snr_grid", "nt_grid", "users_grid", "bits_grid", "schemes"}


class ConfigLoader:
    """Read and validate experiment configurations."""

    @staticmethod
    def parse_key_values(values: Dict[str, Any]) -> Dict[str, Any]:
        """
        Turn flat ``key=value`` pairs into the nested mapping ExperimentConfig expects.

        Args:
            values: Raw string values keyed by (possibly dotted) field name

        Returns:
            Dict[str, Any]: Mapping ready for ``ExperimentConfig.model_validate``

        Raises:
            ExperimentConfigError: If a key has no value
        """
        data: Dict[str, Any] = {}
        for key, raw in values.items():
            key = key.strip()
            if raw is None:
                raise ExperimentConfigError(f"'{key}' has no value")
            raw = raw.strip()
            target = data
            parts = key.split(".")
            for part in parts[:-1]:
                target = target.setdefault(part, {})
            if parts[-1] in LIST_FIELDS and len(parts) == 1:
                target[parts[-1]] = [item.strip() for item in raw.split(",") if item.strip()]
            else:
                target[parts[-1]] = raw
        return data

    @staticmethod
    def validate(data: Dict[str, Any]) -> ExperimentConfig:
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ExperimentConfigError.from_validation(e)

    @staticmethod
    def load_config(path: Union[str, Path]) -> ExperimentConfig:
        """
        Load an experiment configuration from a JSON or key/value file.

        Args:
            path: Configuration file

        Returns:
            ExperimentConfig: Validated configuration

        Raises:
            ExperimentConfigError: If the file is missing, unparsable or invalid
        """
        path = Path(path)
        if not path.is_file():
            raise ExperimentConfigError(f"file not found: {path}")
        text = path.read_text(encoding="utf-8")

        if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise ExperimentConfigError(f"invalid JSON in {path}: {e}")
        else:
            data = ConfigLoader.parse_key_values(dotenv_values(path))

        logger.debug(f"Loaded experiment configuration from {path}")
        return ConfigLoader.validate(data)
