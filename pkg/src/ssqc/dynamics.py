"""Time propagation of the density matrix coupled to bath memory operators.

Three generators are supported:

* non-Markovian thermal: rho evolves under the memory master equation

      d rho/dt = -i[H, rho] + [L, rho O^+] - [L^+, O rho]
                             + [L^+, rho Q^+] - [L, Q rho]

  with the memory operators O(t), Q(t) obeying

      dO/dt = alpha(0,0) L  - (i w0 + gamma) O - [A, O]
      dQ/dt = eta(0,0) L^+  + (i w0 - gamma) Q - [A, Q]
      A     = i H + L^+ O + L Q

* non-Markovian squeezed: same master equation with O = O1 + O2 and
  Q = Q1 + Q2, the four operators driven by the squeezed correlation
  diagonals alpha_k(0,0), eta_k(0,0) and decay rates gamma -+ i w0 in the
  alternating pattern of their defining ODEs;

* Markovian Lindblad limit:

      d rho/dt = -i[H, rho] + (Gamma T / 2) [ (2 L rho L^+ - L^+L rho - rho L^+L)
                                            + (2 L^+ rho L - L L^+ rho - rho L L^+) ]

All memory operators start at exactly zero (their defining integral vanishes
at t=0). Propagation is fixed-step RK4 over the stacked autonomous system;
after each step rho is symmetrized and renormalized, with the pre-repair
drift maxima recorded so tests can tell "preserved" from "repaired".
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .bath import BathParams, CorrelationKind, CorrelationSet, SqueezeParams, \
    squeezed_correlations, thermal_correlations
from .operators import SystemSpec, basis_density_matrix, build_hamiltonian, \
    build_lindblad, check_density_matrix

__all__ = [
    "Regime",
    "IntegratorConfig",
    "ThermalMemory",
    "SqueezedMemory",
    "PropagationState",
    "Trajectory",
    "NumericsError",
    "rhs_lindblad",
    "rhs_nonmarkovian_thermal",
    "rhs_nonmarkovian_squeezed",
    "propagate",
]

# dt * bandwidth and dt * max|omega| must stay at or below this for the
# fixed-step RK4 to resolve the fastest explicit scales.
STABILITY_LIMIT = 0.1


class Regime(Enum):
    NONMARKOVIAN = "nonmarkovian"
    MARKOVIAN = "markovian"


class NumericsError(RuntimeError):
    """Propagation produced a non-finite value; carries the failing step."""

    def __init__(self, message: str, step: int | None = None, time: float | None = None):
        super().__init__(message)
        self.step = step
        self.time = time


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings; sample_every thins the stored trajectory."""

    dt: float = 0.01
    t_max: float = 200.0
    sample_every: int = 10
    scheme: str = "rk4"
    strict_stability_guard: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.t_max < self.dt:
            raise ValueError(f"t_max {self.t_max} is shorter than one step dt {self.dt}")
        if self.sample_every < 1:
            raise ValueError(f"sample_every must be >= 1, got {self.sample_every}")
        if self.scheme.lower() != "rk4":
            raise ValueError(f"unsupported integration scheme {self.scheme!r}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.t_max / self.dt)))


@dataclass
class ThermalMemory:
    """Memory operators for the thermal master equation; zero at t=0."""

    O: np.ndarray
    Q: np.ndarray

    @classmethod
    def zeros(cls, dim: int) -> "ThermalMemory":
        return cls(np.zeros((dim, dim), dtype=np.complex128),
                   np.zeros((dim, dim), dtype=np.complex128))


@dataclass
class SqueezedMemory:
    """Memory operators for the squeezed master equation; all zero at t=0."""

    O1: np.ndarray
    O2: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray

    @classmethod
    def zeros(cls, dim: int) -> "SqueezedMemory":
        z = lambda: np.zeros((dim, dim), dtype=np.complex128)
        return cls(z(), z(), z(), z())


@dataclass
class PropagationState:
    """Joint integration state: time, density matrix, memory operators."""

    t: float
    rho: np.ndarray
    mem: ThermalMemory | SqueezedMemory


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _check_dims(rho: np.ndarray, H: np.ndarray, L: np.ndarray):
    if not (rho.shape == H.shape == L.shape):
        raise ValueError(
            f"dimension mismatch: rho {rho.shape}, H {H.shape}, L {L.shape}"
        )


def rhs_lindblad(rho: np.ndarray, H: np.ndarray, L: np.ndarray,
                 bath: BathParams) -> np.ndarray:
    """Markovian Lindblad right side with rate Gamma*T/2 on both dissipators."""
    _check_dims(rho, H, L)
    rate = bath.coupling * bath.temperature / 2.0
    Ld = L.conj().T
    ldl = Ld @ L
    lld = L @ Ld
    return -1j * _comm(H, rho) + rate * (
        2.0 * (L @ rho @ Ld) - ldl @ rho - rho @ ldl
        + 2.0 * (Ld @ rho @ L) - lld @ rho - rho @ lld
    )


def _drho_memory(rho, H, L, Ld, Oe, Qe):
    return (
        -1j * _comm(H, rho)
        + _comm(L, rho @ Oe.conj().T)
        - _comm(Ld, Oe @ rho)
        + _comm(Ld, rho @ Qe.conj().T)
        - _comm(L, Qe @ rho)
    )


def rhs_nonmarkovian_thermal(state: PropagationState, H: np.ndarray, L: np.ndarray,
                             corr: CorrelationSet):
    """Right sides (drho, dO, dQ) of the thermal memory master equation."""
    if corr.kind is not CorrelationKind.THERMAL:
        raise ValueError("thermal right side needs a thermal correlation set")
    if not isinstance(state.mem, ThermalMemory):
        raise ValueError("thermal right side needs ThermalMemory operators")
    rho, O, Q = state.rho, state.mem.O, state.mem.Q
    _check_dims(rho, H, L)
    Ld = L.conj().T
    a00, e00 = corr.initial_values()
    w0 = corr.bath.center_frequency
    g = corr.bath.bandwidth
    A = 1j * H + Ld @ O + L @ Q
    dO = a00 * L - (1j * w0 + g) * O - _comm(A, O)
    dQ = e00 * Ld + (1j * w0 - g) * Q - _comm(A, Q)
    drho = _drho_memory(rho, H, L, Ld, O, Q)
    return drho, dO, dQ


def rhs_nonmarkovian_squeezed(state: PropagationState, H: np.ndarray, L: np.ndarray,
                              corr: CorrelationSet):
    """Right sides (drho, dO1, dO2, dQ1, dQ2) of the squeezed memory master equation."""
    if corr.kind is not CorrelationKind.SQUEEZED:
        raise ValueError("squeezed right side needs a squeezed correlation set")
    if not isinstance(state.mem, SqueezedMemory):
        raise ValueError("squeezed right side needs SqueezedMemory operators")
    rho = state.rho
    m = state.mem
    _check_dims(rho, H, L)
    Ld = L.conj().T
    a1, a2, e1, e2 = corr.initial_values()
    w0 = corr.bath.center_frequency
    g = corr.bath.bandwidth
    Osum = m.O1 + m.O2
    Qsum = m.Q1 + m.Q2
    A = 1j * H + Ld @ Osum + L @ Qsum
    dO1 = a1 * L - (1j * w0 + g) * m.O1 - _comm(A, m.O1)
    dO2 = a2 * L - (-1j * w0 + g) * m.O2 - _comm(A, m.O2)
    dQ1 = e1 * Ld - (-1j * w0 + g) * m.Q1 - _comm(A, m.Q1)
    dQ2 = e2 * Ld - (1j * w0 + g) * m.Q2 - _comm(A, m.Q2)
    drho = _drho_memory(rho, H, L, Ld, Osum, Qsum)
    return drho, dO1, dO2, dQ1, dQ2


@dataclass
class Trajectory:
    """Sampled propagation output plus integrator diagnostics.

    max_trace_defect / max_hermiticity_drift are per-step maxima measured
    before the symmetrize/renormalize repair.
    """

    times: np.ndarray
    coherence: np.ndarray
    rhos: np.ndarray
    regime: Regime
    dt: float
    n_steps: int
    max_trace_defect: float
    max_hermiticity_drift: float

    @property
    def final_rho(self) -> np.ndarray:
        return self.rhos[-1]

    @property
    def final_coherence(self) -> float:
        return float(self.coherence[-1])

    def __len__(self) -> int:
        return len(self.times)


def _stability_guard(config: IntegratorConfig, spec: SystemSpec, bath: BathParams):
    limit = STABILITY_LIMIT * (1.0 + 1e-9)
    problems = []
    w_max = max(abs(w) for w in spec.omegas)
    if config.dt * w_max > limit:
        problems.append(
            f"dt*max|omega| = {config.dt * w_max:.4g} exceeds {STABILITY_LIMIT}"
        )
    if config.dt * bath.bandwidth > limit:
        problems.append(
            f"dt*bandwidth = {config.dt * bath.bandwidth:.4g} exceeds {STABILITY_LIMIT}"
        )
    if not problems:
        return
    message = "stability guard: " + "; ".join(problems)
    if config.strict_stability_guard:
        raise ValueError(message)
    warnings.warn(message, stacklevel=3)


def _initial_rho(initial, spec: SystemSpec) -> np.ndarray:
    if initial is None:
        initial = "g" * spec.n_qubits
    if isinstance(initial, str):
        return basis_density_matrix(initial, spec.n_qubits)
    rho = np.asarray(initial, dtype=np.complex128)
    if rho.shape != (spec.dim, spec.dim):
        raise ValueError(f"initial state shape {rho.shape} != ({spec.dim}, {spec.dim})")
    check_density_matrix(rho)
    return rho.copy()


def _kernel_inputs(spec: SystemSpec, bath: BathParams, squeeze: SqueezeParams | None,
                   regime: Regime, dim: int):
    """Mode flag, initial operator stack, and packed coefficients for the kernel."""
    w0 = bath.center_frequency
    g = bath.bandwidth
    c_o = g + 1j * w0
    c_q = g - 1j * w0
    if regime is Regime.MARKOVIAN:
        mode = _kernels.MODE_LINDBLAD
        n_ops = 1
        coeffs = np.array([bath.coupling * bath.temperature / 2.0], dtype=np.complex128)
    elif squeeze is None:
        mode = _kernels.MODE_THERMAL
        n_ops = 3
        a00, e00 = thermal_correlations(bath).initial_values()
        coeffs = np.array([a00, e00, c_o, c_q], dtype=np.complex128)
    else:
        mode = _kernels.MODE_SQUEEZED
        n_ops = 5
        a1, a2, e1, e2 = squeezed_correlations(bath, squeeze).initial_values()
        coeffs = np.array([a1, a2, e1, e2, c_o, c_q, c_q, c_o], dtype=np.complex128)
    y0 = np.zeros((n_ops, dim, dim), dtype=np.complex128)
    return mode, y0, coeffs


def propagate(initial, spec: SystemSpec, bath: BathParams,
              squeeze: SqueezeParams | None = None,
              config: IntegratorConfig | None = None,
              regime: Regime = Regime.NONMARKOVIAN) -> Trajectory:
    """Propagate from `initial` (basis label, 'mixed', matrix, or None = all ground).

    Returns the sampled trajectory with coherence precomputed per sample.
    Raises NumericsError if a non-finite value appears, ValueError if the
    stability guard rejects the step size.
    """
    if config is None:
        config = IntegratorConfig()
    if regime is Regime.MARKOVIAN and squeeze is not None:
        raise ValueError("the Markovian generator has no squeezed variant")
    _stability_guard(config, spec, bath)

    H = build_hamiltonian(spec)
    L = build_lindblad(spec)
    Ld = L.conj().T
    rho0 = _initial_rho(initial, spec)

    mode, y0, coeffs = _kernel_inputs(spec, bath, squeeze, regime, spec.dim)
    y0[0] = rho0

    n_steps = config.n_steps
    stride = config.sample_every
    n_samples = _kernels.sample_count(n_steps, stride)
    rho_out = np.empty((n_samples, spec.dim, spec.dim), dtype=np.complex128)
    t_out = np.empty(n_samples, dtype=np.float64)

    bad_step, max_tr, max_herm = _kernels.rk4_propagate(
        mode, y0, H, L, Ld, coeffs, float(config.dt), n_steps, stride,
        rho_out, t_out,
    )
    if bad_step >= 0:
        t_bad = bad_step * config.dt
        raise NumericsError(
            f"non-finite value at step {bad_step} (t = {t_bad:.6g}) for "
            f"regime={regime.value}, bath={bath}, squeeze={squeeze}, dt={config.dt}",
            step=bad_step, time=t_bad,
        )

    abs_rho = np.abs(rho_out)
    coherence = abs_rho.sum(axis=(1, 2)) - abs_rho.diagonal(axis1=1, axis2=2).sum(axis=1)
    return Trajectory(
        times=t_out,
        coherence=coherence,
        rhos=rho_out,
        regime=regime,
        dt=config.dt,
        n_steps=n_steps,
        max_trace_defect=float(max_tr),
        max_hermiticity_drift=float(max_herm),
    )
