"""Dense operator algebra for a register of N uncoupled qubits.

Conventions (fixed once, used everywhere):

* Computational basis is the big-endian tensor product: qubit 1 is the most
  significant bit, so for N=2 the basis order is |ee>, |eg>, |ge>, |gg>.
* The excited state |e> maps to index 0 and sigma_z |e> = +|e>, i.e.
  sigma_z = diag(+1, -1).
* The lowering operator maps e -> g: sigma_minus = [[0, 0], [1, 0]].

Everything is stored dense complex128; register sizes of interest are small
(N=2 in all shipped presets) and the propagation cost is dominated by the
time loop, not the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Channel",
    "SystemSpec",
    "DEFAULT_MAX_QUBITS",
    "SIGMA_X",
    "SIGMA_Z",
    "SIGMA_MINUS",
    "build_hamiltonian",
    "build_lindblad",
    "l1_coherence",
    "basis_index",
    "basis_density_matrix",
    "check_density_matrix",
    "hermiticity_defect",
    "trace_defect",
]

# Raising N by one doubles the dimension; 2^12 = 4096 dense complex is the
# largest register the dense solver is meant to handle.
DEFAULT_MAX_QUBITS = 12

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)
_IDENTITY_2 = np.eye(2, dtype=np.complex128)


class Channel(Enum):
    """System operator through which the collective bath couples."""

    SIGMA_X = "sigma_x"
    SIGMA_Z = "sigma_z"
    SIGMA_MINUS = "sigma_minus"


_CHANNEL_MATRIX = {
    Channel.SIGMA_X: SIGMA_X,
    Channel.SIGMA_Z: SIGMA_Z,
    Channel.SIGMA_MINUS: SIGMA_MINUS,
}


@dataclass(frozen=True)
class SystemSpec:
    """Qubit register: count, transition frequencies, coupling channel.

    Frequencies are in units of the reference frequency (hbar = 1).
    """

    n_qubits: int
    omegas: tuple[float, ...]
    channel: Channel = Channel.SIGMA_X

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        object.__setattr__(self, "omegas", tuple(float(w) for w in self.omegas))
        if len(self.omegas) != self.n_qubits:
            raise ValueError(
                f"expected {self.n_qubits} frequencies, got {len(self.omegas)}"
            )
        if not isinstance(self.channel, Channel):
            object.__setattr__(self, "channel", Channel(self.channel))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


def _check_register_size(spec: SystemSpec, max_qubits: int):
    if spec.n_qubits > max_qubits:
        raise ValueError(
            f"register of {spec.n_qubits} qubits exceeds the configured maximum "
            f"of {max_qubits} (dimension 2^{spec.n_qubits})"
        )


def _embed_single(op: np.ndarray, site: int, n_qubits: int) -> np.ndarray:
    """Tensor a single-qubit operator into slot `site` (0-based) of the register."""
    out = np.array([[1.0 + 0.0j]])
    for k in range(n_qubits):
        out = np.kron(out, op if k == site else _IDENTITY_2)
    return out


def build_hamiltonian(spec: SystemSpec, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Sum of omega_i * sigma_z on each qubit; diagonal in the computational basis."""
    _check_register_size(spec, max_qubits)
    d = spec.dim
    h = np.zeros(d, dtype=np.float64)
    for site, omega in enumerate(spec.omegas):
        # sigma_z eigenvalue of basis state `idx` on `site`: +1 if the bit is 0 (|e>)
        bit = (np.arange(d) >> (spec.n_qubits - 1 - site)) & 1
        h += omega * (1.0 - 2.0 * bit)
    return np.diag(h).astype(np.complex128)


def build_lindblad(spec: SystemSpec, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Collective coupling operator: the chosen single-qubit operator summed over sites."""
    _check_register_size(spec, max_qubits)
    op = _CHANNEL_MATRIX[spec.channel]
    total = np.zeros((spec.dim, spec.dim), dtype=np.complex128)
    for site in range(spec.n_qubits):
        total += _embed_single(op, site, spec.n_qubits)
    return total


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of |rho_ij| over all off-diagonal entries (the l1 coherence measure)."""
    a = np.abs(rho)
    return float(a.sum() - np.trace(a))


# ---------------------------------------------------------------------------
# State construction and invariant checks
# ---------------------------------------------------------------------------

def basis_index(label: str, n_qubits: int) -> int:
    """Index of a computational basis state given as a string like 'eg' or '01'.

    'e'/'0' is the excited state (bit 0), 'g'/'1' the ground state (bit 1);
    leftmost character is qubit 1 (most significant).
    """
    if len(label) != n_qubits:
        raise ValueError(f"basis label {label!r} does not match {n_qubits} qubits")
    idx = 0
    for ch in label:
        if ch in ("e", "0"):
            bit = 0
        elif ch in ("g", "1"):
            bit = 1
        else:
            raise ValueError(f"basis label {label!r} has invalid character {ch!r}")
        idx = (idx << 1) | bit
    return idx


def basis_density_matrix(label: str, n_qubits: int) -> np.ndarray:
    """Density matrix for a basis-state label, or the maximally mixed state for 'mixed'."""
    d = 2**n_qubits
    if label == "mixed":
        return np.eye(d, dtype=np.complex128) / d
    rho = np.zeros((d, d), dtype=np.complex128)
    idx = basis_index(label, n_qubits)
    rho[idx, idx] = 1.0
    return rho


def hermiticity_defect(rho: np.ndarray) -> float:
    """max |rho - rho^dagger| entrywise."""
    return float(np.abs(rho - rho.conj().T).max())


def trace_defect(rho: np.ndarray) -> float:
    """|Tr rho - 1|."""
    return float(abs(np.trace(rho) - 1.0))


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                         trace_tol: float = 1e-8, neg_tol: float = 1e-8):
    """Raise if rho violates the density-matrix invariants.

    Hermitian within herm_tol, unit trace within trace_tol, real diagonal with
    negativity no worse than neg_tol (small negative populations are tolerated
    as integration error).
    """
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    h = hermiticity_defect(rho)
    if h > herm_tol:
        raise ValueError(f"density matrix not Hermitian: defect {h:.3e} > {herm_tol:.1e}")
    t = trace_defect(rho)
    if t > trace_tol:
        raise ValueError(f"density matrix trace off unity by {t:.3e} > {trace_tol:.1e}")
    diag = np.diag(rho)
    if float(diag.real.min()) < -neg_tol:
        raise ValueError(f"negative population {diag.real.min():.3e} below -{neg_tol:.1e}")
