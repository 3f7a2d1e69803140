"""
FP-based hybrid beamformer design.

Separate modules hold the auxiliary-variable updates, the analog step, the
digital step and the outer loop; ``FpService`` gathers them in one class.
"""

from .auxiliary import FpAuxiliary
from .analog import FpAnalog
from .digital import FpDigital
from .designer import FpDesigner


class FpService:
    """Unified FP design service."""

    # Auxiliary variables
    update_r = staticmethod(FpAuxiliary.update_r)
    update_t = staticmethod(FpAuxiliary.update_t)
    lagrangian_objective = staticmethod(FpAuxiliary.lagrangian_objective)
    quadratic_objective = staticmethod(FpAuxiliary.quadratic_objective)
    build_delta_form = staticmethod(FpAuxiliary.build_delta_form)

    # Analog step
    delta_value = staticmethod(FpAnalog.delta_value)
    solve_analog_coordinate = staticmethod(FpAnalog.solve_analog_coordinate)
    solve_analog_exact = staticmethod(FpAnalog.solve_analog_exact)

    # Digital step
    solve_digital = staticmethod(FpDigital.solve_digital)
    solve_digital_with_multiplier = staticmethod(FpDigital.solve_digital_with_multiplier)

    # Design loop
    fp_design = staticmethod(FpDesigner.fp_design)


__all__ = [
    "FpService",
    "FpAuxiliary",
    "FpAnalog",
    "FpDigital",
    "FpDesigner",
]
