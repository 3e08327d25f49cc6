"""Bloch-sphere geometry of a two-level system in conjugate variables.

A normalized two-amplitude state lives on S^3; discarding the global phase
projects it onto the Bloch sphere S^2 (the first Hopf fibration).  On the
sphere we use a canonically conjugate chart: the population difference

    z = |a1|^2 - |a2|^2            (momentum-like)

and the phase difference

    phi = arg(a2) - arg(a1)        (position-like, stored in [0, 2*pi))

in which the Cartesian Bloch coordinates read

    (X, Y, Z) = (sqrt(1-z^2) cos(phi), sqrt(1-z^2) sin(phi), z).

With this orientation of phi the identity ``conjugate_to_bloch(
amplitudes_to_conjugate(s)) == hopf_project(s)`` holds exactly; the
opposite sign choice flips Y and breaks the round trip.

The expectation value of ``sum_i eta_i sigma_i`` defines a classical
Hamiltonian function on the sphere (``mmst_energy``); the factor convention
follows the functional form used by the dynamics modules,

    H0 = -2 eta1 sqrt(1-z^2) cos(phi) - 2 eta2 sqrt(1-z^2) sin(phi) + 2 eta3 z,

which differs from the literal Pauli expectation by constant factors (the
quantum correspondence is pinned at the equation-of-motion level in
:mod:`tlsmap.quantum`).

Everything here is a pure function of its inputs; hbar = 1 throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NormalizationError, PhaseUndefinedError

__all__ = [
    "ComplexAmplitudePair",
    "BlochVector",
    "ConjugatePair",
    "PauliCoefficients",
    "TlsParams",
    "BasisRotation",
    "hopf_project",
    "amplitudes_to_conjugate",
    "conjugate_to_bloch",
    "conjugate_to_amplitudes",
    "mmst_energy",
    "mixing_angle",
    "lr_transform",
    "wrap_phase",
]

TWO_PI = 2.0 * math.pi

#: Tolerance on |a1|^2 + |a2|^2 - 1 before a state is rejected.
NORM_TOL = 1e-9

#: Below this modulus an amplitude's phase is treated as undefined.
PHASE_TOL = 1e-12


def wrap_phase(phi: float) -> float:
    """Wrap an angle to [0, 2*pi)."""
    phi = math.fmod(phi, TWO_PI)
    if phi < 0.0:
        phi += TWO_PI
    # fmod can return exactly TWO_PI after the correction when phi ~ -1e-17
    return 0.0 if phi >= TWO_PI else phi


@dataclass(frozen=True)
class ComplexAmplitudePair:
    """Normalized pair of complex amplitudes (a1, a2), |a1|^2 + |a2|^2 = 1."""

    a1: complex
    a2: complex

    def __post_init__(self):
        n = abs(self.a1) ** 2 + abs(self.a2) ** 2
        if not math.isfinite(n) or abs(n - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"state norm^2 = {n!r} deviates from 1 by more than {NORM_TOL}"
            )

    @classmethod
    def normalized(cls, a1: complex, a2: complex) -> "ComplexAmplitudePair":
        """Build a pair from arbitrary (not both zero) amplitudes, normalizing."""
        n = math.sqrt(abs(a1) ** 2 + abs(a2) ** 2)
        if n == 0.0 or not math.isfinite(n):
            raise NormalizationError("cannot normalize a zero or non-finite state")
        return cls(a1 / n, a2 / n)

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.a1) ** 2 + abs(self.a2) ** 2)


@dataclass(frozen=True)
class BlochVector:
    """Point on the unit sphere S^2 of Pauli expectation values."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = self.x**2 + self.y**2 + self.z**2
        if not math.isfinite(n) or abs(n - 1.0) > NORM_TOL:
            raise NormalizationError(f"Bloch norm^2 = {n!r} is not 1 within {NORM_TOL}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class ConjugatePair:
    """Canonical pair (z, phi): population difference and phase difference.

    z is momentum-like and confined to [-1, 1]; phi is position-like and
    stored wrapped to [0, 2*pi).
    """

    z: float
    phi: float

    def __post_init__(self):
        if not math.isfinite(self.z) or abs(self.z) > 1.0 + 1e-12:
            raise ValueError(f"population difference z = {self.z!r} outside [-1, 1]")
        object.__setattr__(self, "z", min(1.0, max(-1.0, self.z)))
        object.__setattr__(self, "phi", wrap_phase(self.phi))


@dataclass(frozen=True)
class PauliCoefficients:
    """Real coefficients (eta1, eta2, eta3) of a Pauli-basis Hamiltonian."""

    eta1: float
    eta2: float
    eta3: float

    def __post_init__(self):
        for v in (self.eta1, self.eta2, self.eta3):
            if not math.isfinite(v):
                raise ValueError("Pauli coefficients must be finite")


@dataclass(frozen=True)
class TlsParams:
    """Tunneling splitting and left/right asymmetry of one two-level system.

    delta >= 0 by convention (a sign can always be absorbed into the phase
    origin); epsilon is the energy bias between the localized states.
    """

    delta: float
    epsilon: float

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.epsilon)):
            raise ValueError("delta and epsilon must be finite")
        if self.delta < 0.0:
            raise ValueError("delta must be >= 0 (absorb the sign into the phase origin)")


@dataclass(frozen=True)
class BasisRotation:
    """Mixing angle theta of the delocalized <-> localized basis change."""

    theta: float

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")

    @property
    def matrix(self) -> np.ndarray:
        s, c = math.sin(self.theta), math.cos(self.theta)
        return np.array([[s, c], [c, -s]])


def hopf_project(state: ComplexAmplitudePair) -> BlochVector:
    """Project a normalized state onto the Bloch sphere.

    Returns (2 Re(a1* a2), 2 Im(a1* a2), |a1|^2 - |a2|^2), i.e. the Pauli
    expectation values; the global phase of the state drops out.
    """
    cross = state.a1.conjugate() * state.a2
    return BlochVector(
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(state.a1) ** 2 - abs(state.a2) ** 2,
    )


def amplitudes_to_conjugate(state: ComplexAmplitudePair) -> ConjugatePair:
    """Extract the conjugate chart (z, phi) from a normalized state.

    phi = arg(a2) - arg(a1), the orientation for which the round trip
    through :func:`conjugate_to_bloch` reproduces :func:`hopf_project`
    exactly.  Raises :class:`PhaseUndefinedError` at the poles, where one
    amplitude vanishes and the phase difference is meaningless.
    """
    if abs(state.a1) < PHASE_TOL or abs(state.a2) < PHASE_TOL:
        raise PhaseUndefinedError(
            "phase difference undefined: an amplitude modulus is below "
            f"{PHASE_TOL}"
        )
    z = abs(state.a1) ** 2 - abs(state.a2) ** 2
    phi = cmath.phase(state.a2) - cmath.phase(state.a1)
    return ConjugatePair(z, phi)


def conjugate_to_bloch(c: ConjugatePair) -> BlochVector:
    """Map (z, phi) to Cartesian Bloch coordinates.

    (sqrt(1-z^2) cos(phi), sqrt(1-z^2) sin(phi), z); unit norm by
    construction.
    """
    r = math.sqrt(max(0.0, 1.0 - c.z * c.z))
    return BlochVector(r * math.cos(c.phi), r * math.sin(c.phi), c.z)


def conjugate_to_amplitudes(c: ConjugatePair) -> ComplexAmplitudePair:
    """Inverse of :func:`amplitudes_to_conjugate` with arg(a1) = 0 gauge."""
    return ComplexAmplitudePair(
        complex(math.sqrt((1.0 + c.z) / 2.0), 0.0),
        cmath.rect(math.sqrt((1.0 - c.z) / 2.0), c.phi),
    )


def mmst_energy(eta: PauliCoefficients, c: ConjugatePair) -> float:
    """Classical Hamiltonian function of a Pauli-basis two-level Hamiltonian.

    H0 = -2 eta1 sqrt(1-z^2) cos(phi) - 2 eta2 sqrt(1-z^2) sin(phi)
         + 2 eta3 z
    """
    r = math.sqrt(max(0.0, 1.0 - c.z * c.z))
    return (
        -2.0 * eta.eta1 * r * math.cos(c.phi)
        - 2.0 * eta.eta2 * r * math.sin(c.phi)
        + 2.0 * eta.eta3 * c.z
    )


def mixing_angle(p: TlsParams) -> BasisRotation:
    """Mixing angle of the delocalized -> localized basis rotation.

    theta = atan2(delta, epsilon) / 2, so tan(2 theta) = delta / epsilon
    with the quadrant handled for epsilon <= 0.
    """
    if p.delta == 0.0 and p.epsilon == 0.0:
        raise ValueError("mixing angle undefined for delta = epsilon = 0")
    return BasisRotation(0.5 * math.atan2(p.delta, p.epsilon))


def lr_transform(
    rot: BasisRotation, plus_minus: ComplexAmplitudePair
) -> ComplexAmplitudePair:
    """Rotate amplitudes between the delocalized and localized bases.

    Applies the symmetric orthogonal matrix [[sin t, cos t], [cos t, -sin t]];
    being its own inverse, applying it twice is the identity.
    """
    s, c = math.sin(rot.theta), math.cos(rot.theta)
    return ComplexAmplitudePair(
        s * plus_minus.a1 + c * plus_minus.a2,
        c * plus_minus.a1 - s * plus_minus.a2,
    )
