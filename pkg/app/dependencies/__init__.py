"""Dependencies for FastAPI route handlers."""

from .settings import get_max_trials, get_exact_budget, MaxTrials, ExactBudget

__all__ = [
    "get_max_trials",
    "get_exact_budget",
    "MaxTrials",
    "ExactBudget",
]
