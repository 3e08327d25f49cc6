"""Hamiltonian functions and equations of motion in conjugate variables.

Three system types share the H0 = -2 d sqrt(1-z^2) cos(phi) + 2 e z building
block:

* an isolated two-level system (TLS) with parameters (delta, epsilon);
* two TLSs coupled bilinearly through one of four channels
  (cos Phi cos phi, Z z, z cos Phi, Z cos phi) with strength Lambda;
* a central TLS coupled to N environment TLSs through the
  population-population ("momentum-momentum") channel, H_I = Z sum_i L_i z_i.

All default right-hand sides are generated as exact Hamilton equations of the
corresponding energy function (dz/dt = -dH/dphi, dphi/dt = +dH/dz), which is
what makes the total energy a conserved quantity along the flow.  The
``*_verbatim`` variants instead reproduce a historically printed form of the
pair and bath equations whose factors are not Hamilton-consistent (delta vs
2*delta in two of the four pair equations, and a coupling term Z*sum(L)
instead of L_i*Z in the bath phase equations).  They exist for side-by-side
comparison and for the boundedness probe, and are excluded from conservation
guarantees.

Flat state layout (used by the integrators and the vectorized RHS/energy
functions; a pair is the N = 1 case of the bath layout):

    isolated : [z, phi]
    pair     : [Z, Phi, z, phi]
    bath     : [Z, Phi, z_1 .. z_N, phi_1 .. phi_N]

Population differences are momentum-like and bounded, |z| <= 1; the
factor sqrt(1-z^2) in dz/dt vanishes at the boundary, so the
momentum-momentum flow can never leave the physical domain.  The remaining
channels do not have this property, which is exactly what the boundedness
probe demonstrates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .geometry import ConjugatePair, TlsParams

__all__ = [
    "CouplingKind",
    "PairSystem",
    "PairState",
    "BathSystem",
    "BathState",
    "isolated_energy",
    "isolated_rhs",
    "pair_energy",
    "pair_rhs",
    "bath_energy",
    "bath_rhs",
    "symplectic_gradient_check",
    "make_isolated_rhs",
    "make_pair_rhs",
    "make_pair_rhs_verbatim",
    "make_bath_rhs",
    "make_bath_rhs_verbatim",
    "make_pair_energy",
    "make_bath_energy",
    "population_indices",
    "pair_state_to_flat",
    "bath_state_to_flat",
    "flat_to_bath_state",
]

#: States with a population difference at least this close to +-1 are
#: rejected by the point-wise RHS evaluators (coordinate singularity).
SINGULARITY_TOL = 1e-12


class CouplingKind(enum.Enum):
    """Bilinear coupling channel between two TLSs."""

    POSITION_POSITION = "pp"  # Lambda * cos(Phi) * cos(phi)
    MOMENTUM_MOMENTUM = "mm"  # Lambda * Z * z (the only bounded channel)
    MOMENTUM_POSITION = "mp"  # Lambda * z * cos(Phi)
    POSITION_MOMENTUM = "pm"  # Lambda * Z * cos(phi)


@dataclass(frozen=True)
class PairSystem:
    """Two coupled TLSs: parameters, coupling channel and strength."""

    tls1: TlsParams
    tls2: TlsParams
    coupling: CouplingKind
    lam: float

    def __post_init__(self):
        if not math.isfinite(self.lam):
            raise ValueError("coupling strength must be finite")


@dataclass(frozen=True)
class PairState:
    """Conjugate-variable state (Z, Phi) x (z, phi) of a coupled pair."""

    c1: ConjugatePair
    c2: ConjugatePair


@dataclass(frozen=True)
class BathSystem:
    """Central TLS plus N non-interacting environment TLSs.

    The central TLS couples to environment TLS i through its population
    difference with strength lambdas[i]; the environment TLSs do not couple
    to each other.
    """

    system: TlsParams
    env: tuple[TlsParams, ...]
    lambdas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "env", tuple(self.env))
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if len(self.env) != len(self.lambdas):
            raise ValueError("env and lambdas must have equal length")
        if len(self.env) < 1:
            raise ValueError("environment must contain at least one TLS")
        if not all(math.isfinite(v) for v in self.lambdas):
            raise ValueError("coupling strengths must be finite")

    @property
    def n_env(self) -> int:
        return len(self.env)

    @classmethod
    def uniform(
        cls, system: TlsParams, env_tls: TlsParams, lam: float, n: int
    ) -> "BathSystem":
        """Environment of n identical TLSs, all coupled with the same strength."""
        return cls(system, (env_tls,) * n, (lam,) * n)


@dataclass(frozen=True)
class BathState:
    """Conjugate-variable state of the central TLS and each environment TLS."""

    central: ConjugatePair
    env: tuple[ConjugatePair, ...]

    def __post_init__(self):
        object.__setattr__(self, "env", tuple(self.env))


# ---------------------------------------------------------------------------
# flat-state helpers
# ---------------------------------------------------------------------------

def population_indices(n_env: int) -> np.ndarray:
    """Indices of the population-difference coordinates in the flat layout."""
    if n_env == 0:
        return np.array([0])
    return np.r_[0, 2 : 2 + n_env]


def pair_state_to_flat(st: PairState) -> np.ndarray:
    return np.array([st.c1.z, st.c1.phi, st.c2.z, st.c2.phi])


def bath_state_to_flat(st: BathState) -> np.ndarray:
    n = len(st.env)
    y = np.empty(2 + 2 * n)
    y[0], y[1] = st.central.z, st.central.phi
    y[2 : 2 + n] = [c.z for c in st.env]
    y[2 + n :] = [c.phi for c in st.env]
    return y


def flat_to_bath_state(y: np.ndarray, n_env: int) -> BathState:
    env = tuple(
        ConjugatePair(y[2 + i], y[2 + n_env + i]) for i in range(n_env)
    )
    return BathState(ConjugatePair(y[0], y[1]), env)


def _clamped_root(z, guard: float):
    """Clamp populations to +-(1 - guard) and return (z_clamped, sqrt(1-z^2))."""
    zc = np.clip(z, -(1.0 - guard), 1.0 - guard)
    return zc, np.sqrt(np.maximum(0.0, 1.0 - zc * zc))


def _check_interior(*zs: float):
    for z in zs:
        if abs(z) >= 1.0 - SINGULARITY_TOL:
            raise ValueError(
                f"|z| = {abs(z)!r} at or beyond the coordinate singularity at 1"
            )


# ---------------------------------------------------------------------------
# isolated TLS
# ---------------------------------------------------------------------------

def isolated_energy(p: TlsParams, c: ConjugatePair) -> float:
    """H0 = -2 delta sqrt(1-z^2) cos(phi) + 2 epsilon z."""
    r = math.sqrt(max(0.0, 1.0 - c.z * c.z))
    return -2.0 * p.delta * r * math.cos(c.phi) + 2.0 * p.epsilon * c.z


def isolated_rhs(p: TlsParams, c: ConjugatePair) -> tuple[float, float]:
    """(dz/dt, dphi/dt) of the isolated TLS; the symplectic gradient of H0."""
    _check_interior(c.z)
    r = math.sqrt(1.0 - c.z * c.z)
    dz = -2.0 * p.delta * r * math.sin(c.phi)
    dphi = 2.0 * p.delta * c.z * math.cos(c.phi) / r + 2.0 * p.epsilon
    return dz, dphi


def make_isolated_rhs(p: TlsParams, guard: float = 0.0):
    """Vectorized flat RHS f(t, y) for y[..., 0] = z, y[..., 1] = phi."""

    def rhs(t, y):
        z, r = _clamped_root(y[..., 0], guard)
        phi = y[..., 1]
        out = np.empty_like(y)
        out[..., 0] = -2.0 * p.delta * r * np.sin(phi)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[..., 1] = 2.0 * p.delta * z * np.cos(phi) / r + 2.0 * p.epsilon
        return out

    return rhs


# ---------------------------------------------------------------------------
# coupled pair
# ---------------------------------------------------------------------------

def _interaction_energy(kind: CouplingKind, lam, Z, Phi, z, phi):
    if kind is CouplingKind.POSITION_POSITION:
        return lam * np.cos(Phi) * np.cos(phi)
    if kind is CouplingKind.MOMENTUM_MOMENTUM:
        return lam * Z * z
    if kind is CouplingKind.MOMENTUM_POSITION:
        return lam * z * np.cos(Phi)
    return lam * Z * np.cos(phi)  # POSITION_MOMENTUM


def pair_energy(s: PairSystem, st: PairState) -> float:
    """H_T = H1 + H2 + H_I with H_I set by the coupling channel."""
    h = isolated_energy(s.tls1, st.c1) + isolated_energy(s.tls2, st.c2)
    return h + float(
        _interaction_energy(
            s.coupling, s.lam, st.c1.z, st.c1.phi, st.c2.z, st.c2.phi
        )
    )


def make_pair_energy(s: PairSystem):
    """Vectorized flat energy H(y) for the pair layout [Z, Phi, z, phi]."""
    d1, e1 = s.tls1.delta, s.tls1.epsilon
    d2, e2 = s.tls2.delta, s.tls2.epsilon

    def energy(y):
        Z, Phi, z, phi = y[..., 0], y[..., 1], y[..., 2], y[..., 3]
        rZ = np.sqrt(np.maximum(0.0, 1.0 - Z * Z))
        rz = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        h = (
            -2.0 * d1 * rZ * np.cos(Phi) + 2.0 * e1 * Z
            - 2.0 * d2 * rz * np.cos(phi) + 2.0 * e2 * z
        )
        return h + _interaction_energy(s.coupling, s.lam, Z, Phi, z, phi)

    return energy


def make_pair_rhs(s: PairSystem, guard: float = 0.0):
    """Hamilton-consistent flat RHS f(t, y) for the selected channel."""
    d1, e1 = s.tls1.delta, s.tls1.epsilon
    d2, e2 = s.tls2.delta, s.tls2.epsilon
    kind, lam = s.coupling, s.lam

    def rhs(t, y):
        Z, rZ = _clamped_root(y[..., 0], guard)
        z, rz = _clamped_root(y[..., 2], guard)
        Phi, phi = y[..., 1], y[..., 3]
        sinP, cosP = np.sin(Phi), np.cos(Phi)
        sinp, cosp = np.sin(phi), np.cos(phi)
        out = np.empty_like(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[..., 0] = -2.0 * d1 * rZ * sinP
            out[..., 1] = 2.0 * e1 + 2.0 * d1 * Z * cosP / rZ
            out[..., 2] = -2.0 * d2 * rz * sinp
            out[..., 3] = 2.0 * e2 + 2.0 * d2 * z * cosp / rz
        if kind is CouplingKind.POSITION_POSITION:
            out[..., 0] += lam * sinP * cosp
            out[..., 2] += lam * cosP * sinp
        elif kind is CouplingKind.MOMENTUM_MOMENTUM:
            out[..., 1] += lam * z
            out[..., 3] += lam * Z
        elif kind is CouplingKind.MOMENTUM_POSITION:
            out[..., 0] += lam * z * sinP
            out[..., 3] += lam * cosP
        else:  # POSITION_MOMENTUM
            out[..., 1] += lam * cosp
            out[..., 2] += lam * Z * sinp
        return out

    return rhs


def pair_rhs(s: PairSystem, st: PairState) -> tuple[float, float, float, float]:
    """(dZ/dt, dPhi/dt, dz/dt, dphi/dt), Hamilton equations of pair_energy."""
    _check_interior(st.c1.z, st.c2.z)
    y = pair_state_to_flat(st)
    return tuple(make_pair_rhs(s)(0.0, y))


def make_pair_rhs_verbatim(s: PairSystem, guard: float = 0.0):
    """Printed form of the general pair equations (all channels, as published).

    Differs from the Hamilton-consistent RHS by a missing factor 2 on the
    delta_1 terms of the first two equations; retained for comparison runs
    and the boundedness probe, not for conservation tests.
    """
    d1, e1 = s.tls1.delta, s.tls1.epsilon
    d2, e2 = s.tls2.delta, s.tls2.epsilon
    lpp = s.lam if s.coupling is CouplingKind.POSITION_POSITION else 0.0
    lmm = s.lam if s.coupling is CouplingKind.MOMENTUM_MOMENTUM else 0.0
    lmp = s.lam if s.coupling is CouplingKind.MOMENTUM_POSITION else 0.0
    lpm = s.lam if s.coupling is CouplingKind.POSITION_MOMENTUM else 0.0

    def rhs(t, y):
        Z, rZ = _clamped_root(y[..., 0], guard)
        z, rz = _clamped_root(y[..., 2], guard)
        Phi, phi = y[..., 1], y[..., 3]
        sinP, cosP = np.sin(Phi), np.cos(Phi)
        sinp, cosp = np.sin(phi), np.cos(phi)
        # division guard: the probe runs with clamping disabled, so keep the
        # ratio finite rather than raising inside an integration step
        rZs = np.maximum(rZ, 1e-15)
        rzs = np.maximum(rz, 1e-15)
        out = np.empty_like(y)
        out[..., 0] = -d1 * rZ * sinP + lpp * sinP * cosp + lmp * z * sinP
        out[..., 1] = 2.0 * e1 + d1 * Z * cosP / rZs + lmm * z + lpm * cosp
        out[..., 2] = -d2 * rz * sinp + lpp * cosP * sinp + lpm * Z * sinp
        out[..., 3] = 2.0 * e2 + 2.0 * d2 * z * cosp / rzs + lmm * Z + lmp * cosP
        return out

    return rhs


# ---------------------------------------------------------------------------
# central TLS + environment
# ---------------------------------------------------------------------------

def bath_energy(s: BathSystem, st: BathState) -> float:
    """H = H_S + sum_i H_Ei + Z * sum_i L_i z_i."""
    h = isolated_energy(s.system, st.central)
    for p, c in zip(s.env, st.env):
        h += isolated_energy(p, c)
    h += st.central.z * sum(l * c.z for l, c in zip(s.lambdas, st.env))
    return h


def _bath_params(s: BathSystem):
    ds = np.array([p.delta for p in s.env])
    es = np.array([p.epsilon for p in s.env])
    ls = np.array(s.lambdas)
    return s.system.delta, s.system.epsilon, ds, es, ls


def make_bath_energy(s: BathSystem):
    """Vectorized flat energy H(y) for the bath layout."""
    d0, e0, ds, es, ls = _bath_params(s)
    n = s.n_env

    def energy(y):
        Z, Phi = y[..., 0], y[..., 1]
        z, phi = y[..., 2 : 2 + n], y[..., 2 + n :]
        rZ = np.sqrt(np.maximum(0.0, 1.0 - Z * Z))
        rz = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        h = -2.0 * d0 * rZ * np.cos(Phi) + 2.0 * e0 * Z
        h = h + np.sum(-2.0 * ds * rz * np.cos(phi) + 2.0 * es * z, axis=-1)
        return h + Z * (z @ ls)

    return energy


def make_bath_rhs(s: BathSystem, guard: float = 0.0):
    """Hamilton-consistent flat RHS f(t, y) of the bath energy."""
    d0, e0, ds, es, ls = _bath_params(s)
    n = s.n_env

    def rhs(t, y):
        Z, rZ = _clamped_root(y[..., 0], guard)
        z, rz = _clamped_root(y[..., 2 : 2 + n], guard)
        Phi, phi = y[..., 1], y[..., 2 + n :]
        out = np.empty_like(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[..., 0] = -2.0 * d0 * rZ * np.sin(Phi)
            out[..., 1] = 2.0 * e0 + 2.0 * d0 * Z * np.cos(Phi) / rZ + z @ ls
            out[..., 2 : 2 + n] = -2.0 * ds * rz * np.sin(phi)
            out[..., 2 + n :] = (
                2.0 * es + 2.0 * ds * z * np.cos(phi) / rz + ls * Z[..., None]
            )
        return out

    return rhs


def make_bath_rhs_verbatim(s: BathSystem, guard: float = 0.0):
    """Printed form of the bath equations: the phase coupling term is
    Z * sum_j L_j for every environment TLS instead of L_i * Z.  Not the
    Hamilton equations of bath_energy unless N = 1 with uniform coupling."""
    d0, e0, ds, es, ls = _bath_params(s)
    n = s.n_env
    lsum = float(np.sum(ls))

    def rhs(t, y):
        Z, rZ = _clamped_root(y[..., 0], guard)
        z, rz = _clamped_root(y[..., 2 : 2 + n], guard)
        Phi, phi = y[..., 1], y[..., 2 + n :]
        out = np.empty_like(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[..., 0] = -2.0 * d0 * rZ * np.sin(Phi)
            out[..., 1] = 2.0 * e0 + 2.0 * d0 * Z * np.cos(Phi) / rZ + z @ ls
            out[..., 2 : 2 + n] = -2.0 * ds * rz * np.sin(phi)
            out[..., 2 + n :] = (
                2.0 * es + 2.0 * ds * z * np.cos(phi) / rz + lsum * Z[..., None]
            )
        return out

    return rhs


def bath_rhs(s: BathSystem, st: BathState) -> np.ndarray:
    """Flat derivative [dZ, dPhi, dz_1.., dphi_1..] of the bath state."""
    _check_interior(st.central.z, *(c.z for c in st.env))
    return make_bath_rhs(s)(0.0, bath_state_to_flat(st))


# ---------------------------------------------------------------------------
# Hamilton-consistency check
# ---------------------------------------------------------------------------

def symplectic_gradient_check(
    energy_fn, rhs_fn, state: np.ndarray, step: float = 1e-6
) -> float:
    """Max relative deviation between a RHS and the finite-difference
    symplectic gradient of its energy function.

    ``state`` is a flat interior state in the bath layout (a pair is N = 1,
    an isolated TLS is the two-coordinate case); conjugate pairing is
    inferred from the layout.  Deviation is
    max_i |rhs_i - fd_i| / (1 + |rhs_i|).
    """
    y = np.asarray(state, dtype=float)
    d = y.size
    if d % 2 != 0:
        raise ValueError("flat state must have even length")
    n = (d - 2) // 2
    pairs = [(0, 1)] + [(2 + i, 2 + n + i) for i in range(n)]

    grad = np.empty(d)
    for i in range(d):
        yp, ym = y.copy(), y.copy()
        yp[i] += step
        ym[i] -= step
        grad[i] = (energy_fn(yp) - energy_fn(ym)) / (2.0 * step)

    expected = np.empty(d)
    for ip, iq in pairs:
        expected[ip] = -grad[iq]  # dz/dt = -dH/dphi
        expected[iq] = +grad[ip]  # dphi/dt = +dH/dz
    rhs = np.asarray(rhs_fn(0.0, y), dtype=float)
    return float(np.max(np.abs(rhs - expected) / (1.0 + np.abs(rhs))))
