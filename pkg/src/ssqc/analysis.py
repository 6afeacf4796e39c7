"""Steady-state detection, peak finding, and the analytic Markovian oracle.

Convergence is declared on the coherence series with a windowed
max-deviation test rather than a derivative test: slowly decaying
oscillations (strong memory, small bandwidth) would pass a derivative test
at their nodes but fail a window test, which is the honest answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import BathParams
from .dynamics import Trajectory, rhs_lindblad
from .operators import Channel, SystemSpec, build_hamiltonian, build_lindblad, \
    l1_coherence

__all__ = [
    "SteadyStateResult",
    "SweepResult",
    "PeakResult",
    "detect_steady_state",
    "find_peak",
    "markov_steady_state_analytic",
]

DEFAULT_TOLERANCE = 1e-4
DEFAULT_WINDOW = 20.0
# Relative deviations are measured against max(C_final, COHERENCE_FLOOR) so
# that trajectories settling to zero coherence do not divide by zero.
COHERENCE_FLOOR = 1e-6


@dataclass
class SteadyStateResult:
    """Detected steady-state coherence with convergence metadata."""

    ssqc: float
    t_converged: float          # nan when not converged
    converged: bool
    residual: float             # max relative deviation over the trailing window
    final_rho: np.ndarray


def detect_steady_state(trajectory: Trajectory, tol: float = DEFAULT_TOLERANCE,
                        window: float = DEFAULT_WINDOW) -> SteadyStateResult:
    """Judge convergence of C(t) over the trailing `window` time units.

    Converged iff max_{t in window} |C(t) - C(end)| / max(C(end), floor) <= tol.
    t_converged is the earliest sampled time from which every later sample
    stays within that band (nan if the trailing window itself fails).
    """
    times = np.asarray(trajectory.times)
    c = np.asarray(trajectory.coherence)
    span = times[-1] - times[0]
    if span < 2.0 * window:
        raise ValueError(
            f"trajectory spans {span:.6g} time units; need at least 2*window = {2 * window:.6g}"
        )
    c_end = float(c[-1])
    denom = max(c_end, COHERENCE_FLOOR)
    deviation = np.abs(c - c_end) / denom

    in_window = times >= times[-1] - window
    residual = float(deviation[in_window].max())
    converged = residual <= tol

    if converged:
        # running max of deviation from the end of the series backwards
        tail_max = np.maximum.accumulate(deviation[::-1])[::-1]
        stable = tail_max <= tol
        t_converged = float(times[np.argmax(stable)])
    else:
        t_converged = math.nan

    final_rho = trajectory.final_rho
    return SteadyStateResult(
        ssqc=l1_coherence(final_rho),
        t_converged=t_converged,
        converged=converged,
        residual=residual,
        final_rho=final_rho,
    )


@dataclass
class SweepResult:
    """Steady-state coherence along one swept parameter axis."""

    axis_name: str
    axis_values: np.ndarray
    ssqc_values: np.ndarray
    converged: np.ndarray       # bool per point
    t_converged: np.ndarray     # nan where not converged
    residuals: np.ndarray

    def __post_init__(self):
        self.axis_values = np.asarray(self.axis_values, dtype=np.float64)
        self.ssqc_values = np.asarray(self.ssqc_values, dtype=np.float64)
        self.converged = np.asarray(self.converged, dtype=bool)
        self.t_converged = np.asarray(self.t_converged, dtype=np.float64)
        self.residuals = np.asarray(self.residuals, dtype=np.float64)
        n = len(self.axis_values)
        for name in ("ssqc_values", "converged", "t_converged", "residuals"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} length does not match axis length {n}")
        if n >= 2 and not np.all(np.diff(self.axis_values) > 0):
            raise ValueError("axis values must be strictly increasing")

    def __len__(self) -> int:
        return len(self.axis_values)


@dataclass
class PeakResult:
    """Location and value of the sweep maximum."""

    axis_value: float
    ssqc: float
    is_interior: bool
    tied: bool   # True when the maximum value occurs at more than one point


def find_peak(sweep: SweepResult) -> PeakResult:
    """Arg-max over a sweep; ties resolve to the smallest axis value.

    is_interior is True only for a maximum strictly above both neighbours
    and away from the endpoints.
    """
    n = len(sweep)
    if n < 3:
        raise ValueError(f"peak finding needs at least 3 points, got {n}")
    values = sweep.ssqc_values
    idx = int(np.argmax(values))
    tied = bool(np.count_nonzero(values == values[idx]) > 1)
    is_interior = bool(
        0 < idx < n - 1
        and values[idx] > values[idx - 1]
        and values[idx] > values[idx + 1]
    )
    return PeakResult(
        axis_value=float(sweep.axis_values[idx]),
        ssqc=float(values[idx]),
        is_interior=is_interior,
        tied=tied,
    )


def markov_steady_state_analytic(omega1: float, omega2: float,
                                 n_qubits: int = 2,
                                 channel: Channel = Channel.SIGMA_X) -> np.ndarray:
    """Closed-form steady state of the two-qubit Markovian generator.

    Degenerate frequencies give populations (1/3, 1/6, 1/6, 1/3) with a real
    coherence of 1/6 between |eg> and |ge>; any detuning destroys that
    coherence and the steady state is maximally mixed. The result is a fixed
    point of rhs_lindblad for every positive coupling and temperature; the
    rate drops out entirely.
    """
    if n_qubits != 2:
        raise ValueError(f"analytic steady state is available for 2 qubits only, got {n_qubits}")
    if channel is not Channel.SIGMA_X:
        raise ValueError("analytic steady state requires the collective sigma_x channel")
    scale = max(1.0, abs(omega1), abs(omega2))
    if abs(omega1 - omega2) <= 1e-12 * scale:
        rho = np.diag([1 / 3, 1 / 6, 1 / 6, 1 / 3]).astype(np.complex128)
        rho[1, 2] = rho[2, 1] = 1 / 6
        return rho
    return np.eye(4, dtype=np.complex128) / 4.0


def lindblad_fixed_point_residual(rho: np.ndarray, omega1: float, omega2: float,
                                  bath: BathParams) -> float:
    """max |d rho/dt| of the two-qubit Markovian generator at rho (oracle helper)."""
    spec = SystemSpec(2, (omega1, omega2), Channel.SIGMA_X)
    H = build_hamiltonian(spec)
    L = build_lindblad(spec)
    return float(np.abs(rhs_lindblad(rho, H, L, bath)).max())
