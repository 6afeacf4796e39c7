"""Steady-state quantum coherence of uncoupled qubits in a collective bosonic bath.

The package propagates the reduced density matrix of N qubits coupled
through a collective operator to a bath with an exponentially decaying
memory, in three flavours: non-Markovian with a thermal bath, non-Markovian
with a two-mode-squeezed bath, and the Markovian Lindblad limit. On top of
the propagator sit steady-state detection, an analytic two-qubit Markovian
oracle, and a deterministic parallel sweep engine with CSV output.
"""

__version__ = "0.1.0"

from .operators import (
    Channel,
    SystemSpec,
    build_hamiltonian,
    build_lindblad,
    l1_coherence,
    basis_density_matrix,
)
from .bath import (
    BathParams,
    SqueezeParams,
    CorrelationKind,
    CorrelationSet,
    alpha_thermal,
    eta_thermal,
    thermal_correlations,
    squeezed_correlations,
    spectral_density,
)
from .dynamics import (
    Regime,
    IntegratorConfig,
    ThermalMemory,
    SqueezedMemory,
    PropagationState,
    Trajectory,
    NumericsError,
    rhs_lindblad,
    rhs_nonmarkovian_thermal,
    rhs_nonmarkovian_squeezed,
    propagate,
)
from .analysis import (
    SteadyStateResult,
    SweepResult,
    PeakResult,
    detect_steady_state,
    find_peak,
    markov_steady_state_analytic,
)
from .config import (
    RunConfig,
    SweepSpec,
    ConfigError,
    parse_config,
    emit_config,
    apply_axis,
    preset,
    PRESET_NAMES,
)
from .sweep import (
    PointResult,
    SweepOutcome,
    run_single,
    run_sweep,
    run_trajectory,
    write_sweep_outputs,
)

__all__ = [
    "__version__",
    "Channel", "SystemSpec", "build_hamiltonian", "build_lindblad",
    "l1_coherence", "basis_density_matrix",
    "BathParams", "SqueezeParams", "CorrelationKind", "CorrelationSet",
    "alpha_thermal", "eta_thermal", "thermal_correlations",
    "squeezed_correlations", "spectral_density",
    "Regime", "IntegratorConfig", "ThermalMemory", "SqueezedMemory",
    "PropagationState", "Trajectory", "NumericsError",
    "rhs_lindblad", "rhs_nonmarkovian_thermal", "rhs_nonmarkovian_squeezed",
    "propagate",
    "SteadyStateResult", "SweepResult", "PeakResult",
    "detect_steady_state", "find_peak", "markov_steady_state_analytic",
    "RunConfig", "SweepSpec", "ConfigError", "parse_config", "emit_config",
    "apply_axis", "preset", "PRESET_NAMES",
    "PointResult", "SweepOutcome", "run_single", "run_sweep",
    "run_trajectory", "write_sweep_outputs",
]
