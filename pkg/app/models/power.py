from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class Architecture(str, Enum):
    FULLY_DIGITAL = "fully_digital"
    FULLY_CONNECTED = "fully_connected"
    FIXED_SUBARRAY = "fixed_subarray"
    DYNAMIC_SUBARRAY = "dynamic_subarray"


class PowerModel(BaseModel):
    """
    Hardware power consumption in mW.

    Phase-shifter power follows the two anchor points (B=1 -> 10 mW,
    B=2 -> 20 mW) linearly unless ``p_ps`` fixes it explicitly.
    """
    model_config = ConfigDict(frozen=True)

    p_bb: float = Field(default=200.0, ge=0, description="Baseband processor")
    p_rf: float = Field(default=300.0, ge=0, description="Per RF chain")
    p_ps: Optional[float] = Field(default=None, ge=0, description="Per phase shifter, overrides the anchors")
    p_sw: float = Field(default=5.0, ge=0, description="Per switch")
    p_ps_one_bit: float = Field(default=10.0, ge=0)
    p_ps_two_bit: float = Field(default=20.0, ge=0)

    def phase_shifter_power(self, bits: int) -> float:
        if self.p_ps is not None:
            return self.p_ps
        slope = self.p_ps_two_bit - self.p_ps_one_bit
        return max(0.0, self.p_ps_one_bit + slope * (bits - 1))
