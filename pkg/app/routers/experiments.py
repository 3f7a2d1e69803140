from typing import Dict

from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from app.dependencies.settings import MaxTrials
from app.models.experiment import ExperimentConfig, ExperimentResponse
from app.services.experiment import ExperimentConfigError, ExperimentService
from app.utils.exceptions import handle_service_exception

router = APIRouter()


@router.post("/experiments", response_model=ExperimentResponse)
async def run_experiment(config: ExperimentConfig, max_trials: int = MaxTrials):
    """
    Run a small Monte-Carlo experiment and return its rows.

    Args:
        config: Experiment configuration
        max_trials: Cap on num_trials accepted over HTTP

    Returns:
        ExperimentResponse: Metadata record and one row per (sweep value, scheme)

    Raises:
        HTTPException: If the trial count exceeds the cap
    """
    try:
        if config.num_trials > max_trials:
            raise ExperimentConfigError(f"num_trials is limited to {max_trials} over HTTP")
        rows = await run_in_threadpool(ExperimentService.run_experiment, config)
        return ExperimentResponse(metadata=ExperimentService.build_metadata(config), rows=rows)
    except Exception as e:
        handle_service_exception(e)


@router.get("/presets", response_model=Dict[str, ExperimentConfig])
async def list_presets():
    """All named presets with their full configuration."""
    return {name: ExperimentService.get_preset(name) for name in ExperimentService.preset_names()}
