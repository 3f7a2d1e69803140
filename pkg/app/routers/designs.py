from fastapi import APIRouter

from app.dependencies.settings import ExactBudget
from app.models.channel import ArrayGeometry
from app.models.codebook import PhaseCodebook
from app.models.design import FpOptions
from app.models.experiment import DesignRequest, DesignResponse, Scheme
from app.models.power import PowerModel
from app.services import (
    BaselineService,
    ChannelService,
    CodebookService,
    FpService,
    HeuristicService,
    MetricsService,
)
from app.utils.exceptions import handle_service_exception

router = APIRouter()


@router.post("/designs", response_model=DesignResponse)
async def create_design(request: DesignRequest, exact_budget: int = ExactBudget):
    """
    Run one seeded design on a generated channel realization.

    Args:
        request: Array size, users, chains, resolution, SNR, seed and scheme
        exact_budget: Enumeration budget of the exact analog solver

    Returns:
        DesignResponse: Sum-rate, energy efficiency, trace and analog assignment

    Raises:
        HTTPException: If the design parameters are invalid
    """
    try:
        geometry = ArrayGeometry(nx=request.nx, ny=request.ny)
        channels = ChannelService.generate_channel_set(
            geometry, request.users, request.master_seed, request.trial_index, request.num_paths
        )
        codebook = PhaseCodebook(bits=request.bits, nt=geometry.nt)
        total_power = 10.0 ** (request.snr_db / 10.0)

        if request.scheme == Scheme.FP:
            opts = FpOptions(analog_solver=request.analog_solver, exact_budget=exact_budget)
            result = FpService.fp_design(channels, total_power, codebook, request.n_rf, opts)
        elif request.scheme == Scheme.HEURISTIC:
            result = HeuristicService.heuristic_design(channels, total_power, codebook, request.n_rf)
        elif request.scheme == Scheme.FIXED_SUBARRAY:
            result = BaselineService.fixed_subarray_design(channels, total_power, codebook, request.n_rf)
        else:
            result = BaselineService.fully_digital_design(channels, total_power)

        efficiency = MetricsService.energy_efficiency(
            result.sum_rate,
            result.architecture,
            PowerModel(),
            total_power * request.watts_per_unit_power,
            geometry.nt,
            request.n_rf,
            request.bits,
        )
        analog = result.analog
        return DesignResponse(
            scheme=request.scheme,
            architecture=result.architecture,
            sum_rate=result.sum_rate,
            energy_efficiency=efficiency,
            iterations=result.iterations,
            converged=result.converged,
            stop_reason=result.stop_reason,
            sum_rate_trace=result.sum_rate_trace,
            rf_index=analog.rf_index.tolist() if analog is not None else None,
            phase_index=analog.phase_index.tolist() if analog is not None else None,
            subarray_sizes=CodebookService.subarray_sizes(analog).tolist() if analog is not None else None,
        )
    except Exception as e:
        handle_service_exception(e)
