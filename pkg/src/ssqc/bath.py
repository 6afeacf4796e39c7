"""Closed-form bath correlation functions.

The bath enters the dynamics only through its two-time correlation functions,
which take an exponentially decaying (Ornstein-Uhlenbeck) form with decay
rate gamma and rotation frequency omega0:

    alpha(t, s) = (Gamma*gamma/2) (T + omega0 - i*gamma) e^{-i*omega0*(t-s) - gamma*|t-s|}
    eta(t, s)   = (Gamma*T*gamma/2)                      e^{+i*omega0*(t-s) - gamma*|t-s|}

The phase is carried with the signed time difference so that
eta(t, s) = conj(eta(s, t)); for t >= s this coincides with writing the
whole exponent against |t-s|.

For a bath prepared in a symmetric two-mode squeezed state (strength r,
direction theta) each correlation splits into two non-stationary pieces
carrying explicit e^{+-2i*omega0*s} factors; r=0 collapses them back onto the
thermal pair. Only the equal-time diagonals alpha(0,0)-style values feed the
memory-operator ODEs, but the full (t, s) surfaces are exposed for
validation.

The Lorentz-Drude spectral density is included for documentation and
sanity checks only; it never enters the propagation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "BathParams",
    "SqueezeParams",
    "CorrelationKind",
    "CorrelationSet",
    "alpha_thermal",
    "eta_thermal",
    "thermal_correlations",
    "squeezed_correlations",
    "spectral_density",
]


@dataclass(frozen=True)
class BathParams:
    """Bath parameters: coupling Gamma, bandwidth gamma, temperature T, center omega0.

    1/bandwidth is the environmental memory time; bandwidth -> infinity is the
    Markov (white-noise) limit. Units: k_B = hbar = 1.
    """

    coupling: float        # Gamma >= 0
    bandwidth: float       # gamma > 0
    temperature: float     # T >= 0
    center_frequency: float = 1.0  # omega0

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be nonnegative, got {self.coupling}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")


@dataclass(frozen=True)
class SqueezeParams:
    """Two-mode squeezing of the bath initial state: strength r, direction theta."""

    strength: float   # r >= 0
    direction: float  # theta in [0, 2*pi)

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"squeezing strength must be nonnegative, got {self.strength}")
        if not 0.0 <= self.direction < 2.0 * math.pi:
            raise ValueError(
                f"squeezing direction must lie in [0, 2*pi), got {self.direction}"
            )

    @property
    def u(self) -> float:
        return math.cosh(self.strength)

    @property
    def w(self) -> float:
        return math.sinh(self.strength)

    @property
    def v(self) -> complex:
        """w * e^{i*theta}; satisfies u^2 - |v|^2 = 1."""
        return self.w * cmath.exp(1j * self.direction)


class CorrelationKind(Enum):
    THERMAL = "thermal"
    SQUEEZED = "squeezed"


def _phase(t: float, s: float, bath: BathParams, rotation_sign: float) -> complex:
    """e^{rotation_sign * i * omega0 * (t-s) - gamma * |t-s|}."""
    tau = t - s
    return cmath.exp(rotation_sign * 1j * bath.center_frequency * tau
                     - bath.bandwidth * abs(tau))


def alpha_thermal(t: float, s: float, bath: BathParams) -> complex:
    """Thermal-bath correlation alpha(t, s)."""
    pref = (bath.coupling * bath.bandwidth / 2.0) * (
        bath.temperature + bath.center_frequency - 1j * bath.bandwidth
    )
    return pref * _phase(t, s, bath, -1.0)


def eta_thermal(t: float, s: float, bath: BathParams) -> complex:
    """Thermal-bath correlation eta(t, s); vanishes identically at T=0."""
    pref = bath.coupling * bath.temperature * bath.bandwidth / 2.0
    return pref * _phase(t, s, bath, +1.0)


def spectral_density(omega: float, bath: BathParams) -> float:
    """Ohmic spectral density with a Lorentz-Drude cutoff (documentation grade)."""
    if omega < 0:
        raise ValueError(f"spectral density is defined for omega >= 0, got {omega}")
    g = bath.bandwidth
    return (bath.coupling / math.pi) * omega * g**2 / (
        g**2 + (bath.center_frequency - omega) ** 2
    )


@dataclass(frozen=True)
class CorrelationSet:
    """Bundle of correlation functions driving one propagation.

    Thermal kind exposes (alpha, eta); squeezed kind exposes the quadruple
    (alpha1, alpha2, eta1, eta2) with alpha = alpha1 + alpha2 and
    eta = eta1 + eta2. `initial_values()` returns the t=s=0 diagonal values
    in the order the memory-operator ODEs consume them.
    """

    kind: CorrelationKind
    bath: BathParams
    squeeze: SqueezeParams | None = None

    def __post_init__(self):
        if self.kind is CorrelationKind.SQUEEZED and self.squeeze is None:
            raise ValueError("squeezed correlations require SqueezeParams")

    # -- thermal pair ------------------------------------------------------

    def alpha(self, t: float, s: float) -> complex:
        if self.kind is CorrelationKind.THERMAL:
            return alpha_thermal(t, s, self.bath)
        return self.alpha1(t, s) + self.alpha2(t, s)

    def eta(self, t: float, s: float) -> complex:
        if self.kind is CorrelationKind.THERMAL:
            return eta_thermal(t, s, self.bath)
        return self.eta1(t, s) + self.eta2(t, s)

    # -- squeezed quadruple --------------------------------------------------

    def _squeeze_factors(self, s: float):
        q = self.squeeze
        u, v = q.u, q.v
        w0 = self.bath.center_frequency
        minus = u * u - v * u * cmath.exp(-2j * w0 * s)
        plus = u * u - v * u * cmath.exp(2j * w0 * s)
        conj_minus = abs(v) ** 2 - v.conjugate() * u * cmath.exp(-2j * w0 * s)
        conj_plus = abs(v) ** 2 - v.conjugate() * u * cmath.exp(2j * w0 * s)
        return minus, plus, conj_minus, conj_plus

    def alpha1(self, t: float, s: float) -> complex:
        self._require_squeezed()
        b = self.bath
        pref = (b.coupling * b.bandwidth / 2.0) * (
            b.temperature + b.center_frequency - 1j * b.bandwidth
        )
        return pref * self._squeeze_factors(s)[0] * _phase(t, s, b, -1.0)

    def alpha2(self, t: float, s: float) -> complex:
        self._require_squeezed()
        b = self.bath
        pref = (b.coupling * b.bandwidth / 2.0) * (
            b.temperature - b.center_frequency - 1j * b.bandwidth
        )
        return pref * self._squeeze_factors(s)[3] * _phase(t, s, b, +1.0)

    def eta1(self, t: float, s: float) -> complex:
        self._require_squeezed()
        b = self.bath
        pref = b.coupling * b.temperature * b.bandwidth / 2.0
        return pref * self._squeeze_factors(s)[1] * _phase(t, s, b, +1.0)

    def eta2(self, t: float, s: float) -> complex:
        self._require_squeezed()
        b = self.bath
        pref = b.coupling * b.temperature * b.bandwidth / 2.0
        return pref * self._squeeze_factors(s)[2] * _phase(t, s, b, -1.0)

    def _require_squeezed(self):
        if self.kind is not CorrelationKind.SQUEEZED:
            raise ValueError("squeezed correlation requested from a thermal set")

    # -- diagonal values feeding the memory-operator ODEs --------------------

    def initial_values(self) -> np.ndarray:
        """t=s=0 values: [alpha, eta] (thermal) or [alpha1, alpha2, eta1, eta2]."""
        if self.kind is CorrelationKind.THERMAL:
            return np.array(
                [self.alpha(0.0, 0.0), self.eta(0.0, 0.0)], dtype=np.complex128
            )
        return np.array(
            [
                self.alpha1(0.0, 0.0),
                self.alpha2(0.0, 0.0),
                self.eta1(0.0, 0.0),
                self.eta2(0.0, 0.0),
            ],
            dtype=np.complex128,
        )


def thermal_correlations(bath: BathParams) -> CorrelationSet:
    """Correlation set for a bath prepared in a thermal (or vacuum) state."""
    return CorrelationSet(CorrelationKind.THERMAL, bath)


def squeezed_correlations(bath: BathParams, squeeze: SqueezeParams) -> CorrelationSet:
    """Correlation set for a bath prepared in a two-mode squeezed state."""
    return CorrelationSet(CorrelationKind.SQUEEZED, bath, squeeze)
