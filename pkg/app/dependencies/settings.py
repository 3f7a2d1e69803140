"""Runtime-settings dependencies for FastAPI routes."""

from fastapi import Depends

from app.utils.config import RuntimeConfig


def get_max_trials() -> int:
    """Largest num_trials an HTTP experiment request may ask for."""
    return RuntimeConfig.get_api_max_trials()


def get_exact_budget() -> int:
    return RuntimeConfig.get_exact_budget()


MaxTrials = Depends(get_max_trials)
ExactBudget = Depends(get_exact_budget)
