from .channel import (
    ArrayGeometry, PathParams, AngleRanges, ChannelSet, ChannelRecord
)
from .codebook import (
    PhaseCodebook, AnalogBeamformer, SelectionMatrix
)
from .power import Architecture, PowerModel
from .design import (
    AnalogSolver, StopReason, CssmOptions, FpOptions, HeuristicOpts,
    DualState, DeltaForm, IterationRecord, FpState, DesignResult
)
from .experiment import (
    Scheme, SweepVariable, SweepPoint, ExperimentConfig, ResultRow,
    ConvergenceRow, TrialOutcome, DesignRequest, DesignResponse, ExperimentResponse
)
