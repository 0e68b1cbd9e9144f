"""Flavor entanglement of three-flavor neutrino oscillations in the
time-averaged wave-packet picture."""

from .measures import (
    CrossValidationError,
    EntanglementReport,
    average_log_negativity,
    concurrence_closed,
    concurrence_general,
    log_negativity_closed,
    log_negativity_general,
    report,
)
from .params import (
    HBAR_C_EV_M,
    MixingAngles,
    OscillationParams,
    build_pmns,
    default_params,
    phase_argument,
)
from .qubit_ops import Bipartition, partial_trace, partial_transpose, spin_flip, trace_norm
from .scan import SweepConfig, SweepResult, emit_csv, emit_json, run_sweep
from .wavepacket import (
    FlavorKernel,
    asymptotic_kernel,
    decoherence_factor,
    density_matrix,
    flavor_kernel,
    transition_probability,
)

__version__ = "0.1.0"
