"""Hot propagation loop, JIT-compiled when numba is available.

The integration state is a stack ``y`` of d x d complex matrices:

* Lindblad mode:       y = [rho]
* thermal memory mode: y = [rho, O, Q]
* squeezed memory mode: y = [rho, O1, O2, Q1, Q2]

``coeffs`` packs the scalar coefficients of the memory ODEs:

* Lindblad: [rate]                          with rate = Gamma*T/2
* thermal:  [a00, e00, cO, cQ]              dO = a00*L - cO*O - [A, O]
                                            dQ = e00*Ld - cQ*Q - [A, Q]
* squeezed: [a1, a2, e1, e2, c1, c2, c3, c4] analogous, with the shared
                                            commutator operator A built from
                                            O1+O2 and Q1+Q2

with cO = gamma + i*omega0 and cQ = gamma - i*omega0 (and the alternating
pattern c1..c4 = cO, cQ, cQ, cO for the squeezed quadruple).

Everything here is deterministic: fixed-step RK4, no threading inside a
single propagation. If numba is missing the same code runs as plain numpy,
just slower.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap

MODE_LINDBLAD = 0
MODE_THERMAL = 1
MODE_SQUEEZED = 2


@njit(cache=True)
def _comm(a, b):
    return a @ b - b @ a


@njit(cache=True)
def _drho_memory(rho, H, L, Ld, Oe, Qe):
    """Master-equation right side given effective memory operators Oe, Qe."""
    r_od = rho @ Oe.conj().T
    o_r = Oe @ rho
    r_qd = rho @ Qe.conj().T
    q_r = Qe @ rho
    return (
        -1j * _comm(H, rho)
        + (L @ r_od - r_od @ L)
        - (Ld @ o_r - o_r @ Ld)
        + (Ld @ r_qd - r_qd @ Ld)
        - (L @ q_r - q_r @ L)
    )


@njit(cache=True)
def _rhs(mode, y, H, L, Ld, coeffs):
    dy = np.empty_like(y)
    if mode == MODE_LINDBLAD:
        rho = y[0]
        rate = coeffs[0].real
        ldl = Ld @ L
        lld = L @ Ld
        dy[0] = -1j * _comm(H, rho) + rate * (
            2.0 * (L @ rho @ Ld) - ldl @ rho - rho @ ldl
            + 2.0 * (Ld @ rho @ L) - lld @ rho - rho @ lld
        )
    elif mode == MODE_THERMAL:
        rho, O, Q = y[0], y[1], y[2]
        A = 1j * H + Ld @ O + L @ Q
        dy[0] = _drho_memory(rho, H, L, Ld, O, Q)
        dy[1] = coeffs[0] * L - coeffs[2] * O - _comm(A, O)
        dy[2] = coeffs[1] * Ld - coeffs[3] * Q - _comm(A, Q)
    else:
        rho = y[0]
        Osum = y[1] + y[2]
        Qsum = y[3] + y[4]
        A = 1j * H + Ld @ Osum + L @ Qsum
        dy[0] = _drho_memory(rho, H, L, Ld, Osum, Qsum)
        dy[1] = coeffs[0] * L - coeffs[4] * y[1] - _comm(A, y[1])
        dy[2] = coeffs[1] * L - coeffs[5] * y[2] - _comm(A, y[2])
        dy[3] = coeffs[2] * Ld - coeffs[6] * y[3] - _comm(A, y[3])
        dy[4] = coeffs[3] * Ld - coeffs[7] * y[4] - _comm(A, y[4])
    return dy


@njit(cache=True)
def rk4_propagate(mode, y0, H, L, Ld, coeffs, dt, n_steps, stride,
                  rho_out, t_out):
    """Fixed-step RK4 over the stacked system, sampling rho every `stride` steps.

    Returns (bad_step, max_trace_defect, max_herm_drift). bad_step is -1 on
    success, otherwise the 1-based step at which a non-finite value appeared.
    The two maxima are measured on rho after each step but before the
    symmetrize/renormalize repair, so they quantify raw integrator drift.
    """
    y = y0.copy()
    rho_out[0] = y[0]
    t_out[0] = 0.0
    sample_idx = 0
    max_trace_defect = 0.0
    max_herm_drift = 0.0

    for step in range(1, n_steps + 1):
        k1 = _rhs(mode, y, H, L, Ld, coeffs)
        k2 = _rhs(mode, y + (0.5 * dt) * k1, H, L, Ld, coeffs)
        k3 = _rhs(mode, y + (0.5 * dt) * k2, H, L, Ld, coeffs)
        k4 = _rhs(mode, y + dt * k3, H, L, Ld, coeffs)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        rho = y[0]
        rho_dag = rho.conj().T
        trace_defect = abs(np.trace(rho) - 1.0)
        herm_drift = np.abs(rho - rho_dag).max()
        if trace_defect > max_trace_defect:
            max_trace_defect = trace_defect
        if herm_drift > max_herm_drift:
            max_herm_drift = herm_drift

        repaired = 0.5 * (rho + rho_dag)
        y[0] = repaired / np.trace(repaired).real

        if not np.isfinite(y).all():
            return step, max_trace_defect, max_herm_drift

        if step % stride == 0 or step == n_steps:
            sample_idx += 1
            rho_out[sample_idx] = y[0]
            t_out[sample_idx] = step * dt

    return -1, max_trace_defect, max_herm_drift


def sample_count(n_steps: int, stride: int) -> int:
    """Number of samples rk4_propagate writes, including t=0 and the final step."""
    n = n_steps // stride + 1
    if n_steps % stride:
        n += 1
    return n
