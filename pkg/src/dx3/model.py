"""
Problem instances and basic phase-space functions of the Darboux III oscillator.

The N-dimensional Hamiltonian is

    H(q, p) = (p^2 + m^2 w^2 q^2) / (2 m (1 + lam q^2))

and, for a fixed squared angular momentum l^2, the radial reduction reads

    H(r, p) = F(r) * (p^2/2m + l^2/(2 m r^2) + m w^2 r^2 / 2),   F(r) = 1/(1 + lam r^2).

lam = 0 is the flat isotropic oscillator.  For lam < 0 the conformal factor
blows up at r_s = 1/sqrt(|lam|); everything here (except ``effective_potential``,
which is also used to draw the outer branch) refuses to evaluate at or beyond r_s.

Scalar functions accept numpy arrays where that is natural (potentials,
on-shell momenta) and return plain floats for scalar input.
"""
import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import DomainError, MetricSingular, NoRealRoots

# relative width of the "exactly at threshold" band used by classify_energy
CLASSIFY_RTOL = 1e-12


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


@dataclass(frozen=True)
class Params:
    """Physical constants of one radial problem: mass, frequency, deformation, |L|."""

    m: float = 1.0
    omega: float = 1.0
    lam: float = 0.0
    l: float = 1.0

    def __post_init__(self):
        for name in ("m", "omega", "lam", "l"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.m <= 0:
            raise DomainError("m must be positive")
        if self.omega <= 0:
            raise DomainError("omega must be positive")
        if self.l < 0:
            raise DomainError("l must be non-negative")

    @property
    def r_s(self):
        """Singular radius 1/sqrt(|lam|) for lam < 0, otherwise None."""
        return singular_radius(self)

    @property
    def energy_threshold(self):
        """m w^2 / (2 lam): the escape energy for lam > 0 (inf otherwise)."""
        if self.lam > 0:
            return self.m * self.omega**2 / (2 * self.lam)
        return math.inf

    def replace(self, **changes):
        return replace(self, **changes)


class RadialState(NamedTuple):
    r: float
    p: float


@dataclass(frozen=True)
class CartesianState:
    """Full phase-space point (q, p) in R^N."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if q.shape != p.shape or q.ndim != 1:
            raise DomainError(f"q and p must be 1-d vectors of equal length, got {q.shape} and {p.shape}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def dim(self):
        return self.q.shape[0]


class EnergyRegime(enum.Enum):
    FORBIDDEN = "Forbidden"
    CIRCULAR = "Circular"
    BOUNDED = "Bounded"
    CRITICAL = "Critical"
    UNBOUNDED = "Unbounded"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FradkinTensor:
    """Symmetric N x N matrix of Demkov-Fradkin invariants I_ij."""

    entries: np.ndarray = field(repr=False)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __getitem__(self, idx):
        return self.entries[idx]

    @property
    def trace(self):
        return float(np.trace(self.entries))

    def is_symmetric(self, atol=0.0):
        return bool(np.allclose(self.entries, self.entries.T, rtol=0.0, atol=atol))


# ---------------------------------------------------------------------------
# Hamiltonians and potentials
# ---------------------------------------------------------------------------

def singular_radius(params):
    if params.lam < 0:
        return 1.0 / math.sqrt(-params.lam)
    return None


def _metric(params, r2):
    """1 + lam r^2, raising if it is not strictly positive."""
    g = 1.0 + params.lam * np.asarray(r2, dtype=float)
    if np.any(g <= 0):
        raise MetricSingular(f"1 + lam r^2 <= 0 (r_s = {singular_radius(params)})")
    return g


def kinetic_factor(params, r):
    """Conformal factor F(r) = 1/(1 + lam r^2); singular only at r = r_s."""
    r = np.asarray(r, dtype=float)
    g = 1.0 + params.lam * r * r
    if np.any(g == 0):
        raise MetricSingular(f"kinetic factor is singular at r_s = {singular_radius(params)}")
    return _out(1.0 / g)


def hamiltonian_nd(params, state):
    q, p = state.q, state.p
    q2 = float(q @ q)
    g = _metric(params, q2)
    m, w = params.m, params.omega
    return float((p @ p + m * m * w * w * q2) / (2 * m * g))


def euclidean_radial_hamiltonian(params, r, p):
    """H_0(r, p) = p^2/2m + l^2/(2 m r^2) + m w^2 r^2/2, ignoring lam."""
    r = np.asarray(r, dtype=float)
    p = np.asarray(p, dtype=float)
    m, w, l = params.m, params.omega, params.l
    return _out(p * p / (2 * m) + l * l / (2 * m * r * r) + m * w * w * r * r / 2)


def radial_hamiltonian(params, state):
    r, p = state
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radial coordinate must be positive")
    g = _metric(params, r * r)
    return _out(euclidean_radial_hamiltonian(params, r, p) / g)


def effective_potential(params, r):
    """l^2/(2 m r^2 (1+lam r^2)) + m w^2 r^2 / (2 (1+lam r^2)).

    For lam < 0 this is also evaluated beyond r_s (the negative-kinetic branch),
    but never at r_s itself.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radial coordinate must be positive")
    m, w, l = params.m, params.omega, params.l
    F = kinetic_factor(params, r)
    return _out(F * (l * l / (2 * m * r * r) + m * w * w * r * r / 2))


def potential_minimum(params):
    """Closed-form (r_min, V_eff(r_min)); for lam < 0 the minimum inside (0, r_s)."""
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    if l <= 0:
        raise DomainError("effective potential has no interior minimum for l = 0")
    root = math.sqrt(lam * lam + m * m * w * w / (l * l))
    v_min = (l * l / m) * (root - lam)
    # (l^2/m^2 w^2)(lam + root) rewritten as 1/(root - lam): no cancellation for lam < 0
    r2 = 1.0 / (root - lam)
    return math.sqrt(r2), v_min


def classify_energy(params, E):
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    v_min = potential_minimum(params)[1] if l > 0 else 0.0
    tol = CLASSIFY_RTOL * max(1.0, abs(E), abs(v_min))
    if E < v_min - tol:
        return EnergyRegime.FORBIDDEN
    if abs(E - v_min) <= tol:
        return EnergyRegime.CIRCULAR
    if lam > 0:
        e_crit = m * w * w / (2 * lam)
        tol_c = CLASSIFY_RTOL * max(1.0, abs(E), abs(e_crit))
        if abs(E - e_crit) <= tol_c:
            return EnergyRegime.CRITICAL
        if E > e_crit:
            return EnergyRegime.UNBOUNDED
    return EnergyRegime.BOUNDED


def momentum_on_shell(params, E, r):
    """Non-negative radial momentum on the energy shell H = E at radius r."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radial coordinate must be positive")
    g = _metric(params, r * r)
    v = effective_potential(params, r)
    gap = np.asarray(E - v, dtype=float)
    tol = 1e-12 * np.maximum(1.0, np.maximum(abs(E), np.abs(v)))
    if np.any(gap < -tol):
        raise DomainError(f"energy {E} lies below the effective potential")
    gap = np.where(gap < 0, 0.0, gap)
    return _out(np.sqrt(2 * params.m * g * gap))


def turning_points(params, E):
    """Radii where E = V_eff(r).

    Zeros of 2 m E r^2 - l^2 - m^2 r^4 (w^2 - 2 lam E/m), solved as a quadratic
    in r^2.  Returns (r_lo, r_hi); r_hi is inf when the motion is unbounded.
    """
    regime = classify_energy(params, E)
    if regime is EnergyRegime.FORBIDDEN:
        raise NoRealRoots(f"E = {E} is below the minimum of the effective potential")
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    if regime is EnergyRegime.CIRCULAR and l > 0:
        r_min = potential_minimum(params)[0]
        return r_min, r_min
    # a x^2 + b x + c = 0 with x = r^2
    a = m * m * (w * w - 2 * lam * E / m)
    b = -2 * m * E
    c = l * l
    disc = b * b - 4 * a * c
    if disc < 0:
        # only reachable through rounding right next to the circular orbit
        disc = 0.0
    big = (-b + math.sqrt(disc)) / 2
    x_small = c / big
    if regime is EnergyRegime.BOUNDED and a > 0:
        return math.sqrt(x_small), math.sqrt(big / a)
    return math.sqrt(x_small), math.inf


def radicand(params, E, r):
    """2 m E r^2 - l^2 - m^2 r^4 (w^2 - 2 lam E/m), equal to (r p)^2 on shell."""
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    r2 = np.asarray(r, dtype=float) ** 2
    return _out(2 * m * E * r2 - l * l - m * m * r2 * r2 * (w * w - 2 * lam * E / m))


# ---------------------------------------------------------------------------
# N-dimensional structure
# ---------------------------------------------------------------------------

def demkov_fradkin(params, state):
    q, p = state.q, state.p
    H = hamiltonian_nd(params, state)
    m = params.m
    k = m * m * (params.omega**2 - 2 * params.lam * H / m)
    return FradkinTensor(np.outer(p, p) + k * np.outer(q, q))


def to_hyperspherical(state):
    """(r, p_r, L^2) with p^2 = p_r^2 + L^2/r^2."""
    q, p = state.q, state.p
    r = float(np.linalg.norm(q))
    if r == 0:
        raise DomainError("hyperspherical reduction is undefined at q = 0")
    pr = float(q @ p) / r
    # L^2 = |q|^2 |p|^2 - (q.p)^2, computed from the wedge components
    L2 = float(np.sum(np.triu(np.outer(q, p) - np.outer(p, q), 1) ** 2))
    return r, pr, L2
