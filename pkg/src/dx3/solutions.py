"""
Closed-form radial motion.

Bounded orbits (lam of either sign, w^2 - 2 lam E/m > 0) are parametrised by the
orbit phase Phi = Omega t + theta.  With x_lo, x_hi the squared turning radii,

    psi(r)   = arccos((2 r^2 - x_hi - x_lo) / (x_hi - x_lo))
    kappa(r) = lam s^2 / (w^2 - lam E/m) * sqrt((r^2 - x_lo)(x_hi - r^2))

the inward half-period (p <= 0) satisfies Phi = psi + kappa and the outward
half-period (p >= 0) satisfies Phi = 2 pi - psi - kappa.  kappa is the
lam-dependent phase correction coming from the ladder exponent; it vanishes at
both turning points, so r_hi is reached at Phi = 0 and r_lo at Phi = pi.

Unbounded orbits (lam > 0, E > m w^2 / 2 lam) satisfy

    zeta t + theta = arccosh((1 + r^2/a~^2) / eps~) + lam a~^2/(1 - lam a~^2) * sqrt((1 + r^2/a~^2)^2 - eps~^2)

on the outgoing branch.  Both sides are evaluated in a form that stays regular
at E = m w^2 / lam, where zeta and the prefactor diverge together.

arccos/arccosh are computed through atan2/log1p of the factorised radicands,
so rounding at the turning points cannot produce NaN.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, OffShell, RegimeError
from .model import (
    EnergyRegime,
    classify_energy,
    momentum_on_shell,
    radial_hamiltonian,
    turning_points,
)
from .sga import SGARegime, amplitude, ladder, phase, shape_factor

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class OrbitGeometry:
    """Trajectory constants.

    ``a_sq``/``eps`` are a^2 and epsilon for bounded orbits, a~^2 and eps~ for
    unbounded ones; ``freq`` is Omega(E) or zeta(E) respectively.
    """

    a_sq: float
    eps: float
    freq: float
    amplitude: float
    theta: float
    regime: SGARegime


class TrajectorySample(NamedTuple):
    t: float
    r: float
    p: float


def _bounded_regime(params, E):
    regime = classify_energy(params, E)
    if regime not in (EnergyRegime.BOUNDED, EnergyRegime.CIRCULAR):
        raise RegimeError(f"E = {E} is {regime}, expected a bounded orbit")
    return regime


def _unbounded_regime(params, E):
    regime = classify_energy(params, E)
    if regime is not EnergyRegime.UNBOUNDED:
        raise RegimeError(f"E = {E} is {regime}, expected an unbounded orbit")


def orbit_geometry(params, E, theta=0.0):
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    regime = classify_energy(params, E)
    if regime in (EnergyRegime.FORBIDDEN, EnergyRegime.CRITICAL):
        raise RegimeError(f"no orbit geometry for a {regime} energy")
    s2 = shape_factor(params, E)
    theta = theta % TWO_PI
    if regime is EnergyRegime.UNBOUNDED:
        s2 = -s2
        denom = lam * E / m - w * w
        freq = 2 * s2 * math.sqrt(s2) / denom if denom != 0 else math.copysign(math.inf, denom)
        return OrbitGeometry(
            a_sq=E / (m * s2),
            eps=math.sqrt(1 + s2 * l * l / (E * E)),
            freq=freq,
            amplitude=amplitude(params, E, SGARegime.UNBOUNDED),
            theta=theta,
            regime=SGARegime.UNBOUNDED,
        )
    eps2 = 1 - s2 * l * l / (E * E)
    return OrbitGeometry(
        a_sq=E / (m * s2),
        eps=0.0 if regime is EnergyRegime.CIRCULAR else math.sqrt(max(eps2, 0.0)),
        freq=2 * s2 * math.sqrt(s2) / (w * w - lam * E / m),
        amplitude=amplitude(params, E, SGARegime.BOUNDED),
        theta=theta,
        regime=SGARegime.EUCLIDEAN if lam == 0 else SGARegime.BOUNDED,
    )


def radial_period(params, E):
    """T = 2 pi / Omega(E); pi/w in the flat case."""
    _bounded_regime(params, E)
    return TWO_PI / orbit_geometry(params, E).freq


# ---------------------------------------------------------------------------
# Euclidean closed form
# ---------------------------------------------------------------------------

def euclid_trajectory(params, E, theta0, t):
    """Flat-space r(t), p(t); accepts scalar or array t."""
    if params.lam != 0:
        raise DomainError("euclid_trajectory requires lam = 0")
    m, w, l = params.m, params.omega, params.l
    if E < l * w * (1 - 1e-12):
        raise DomainError(f"E = {E} is below the minimum l w = {l * w}")
    q0 = math.sqrt(max(E * E / (w * w) - l * l, 0.0))
    arg = 2 * w * np.asarray(t, dtype=float) + theta0
    r = np.sqrt(E / (m * w * w) + q0 / (m * w) * np.cos(arg))
    p = -q0 * np.sin(arg) / r
    if r.ndim == 0:
        return float(r), float(p)
    return r, p


# ---------------------------------------------------------------------------
# Bounded deformed motion, t(r) and its inverse
# ---------------------------------------------------------------------------

def _squared_turning_points(params, E):
    r_lo, r_hi = turning_points(params, E)
    return r_lo * r_lo, r_hi * r_hi


def _check_between(r2, x_lo, x_hi):
    tol = 1e-12 * x_hi
    if np.any(r2 < x_lo - tol) or np.any(r2 > x_hi + tol):
        raise DomainError("radius outside the turning points [r_lo, r_hi]")


def _bounded_phase(params, E, r2, x_lo, x_hi):
    """psi(r) + kappa(r): the orbit phase on the inward half-period."""
    m, w, lam = params.m, params.omega, params.lam
    s2 = shape_factor(params, E)
    root = np.sqrt(np.maximum((r2 - x_lo) * (x_hi - r2), 0.0))
    psi = np.arctan2(2 * root, 2 * r2 - x_hi - x_lo)
    kappa = lam * s2 / (w * w - lam * E / m) * root
    return psi + kappa


def time_of_radius_bounded(params, E, theta, r, branch="in"):
    """Time at which the bounded orbit with phase constant theta passes radius r.

    branch="in" is the half-period on which r decreases from r_hi (t = -theta/Omega)
    to r_lo (t = (pi - theta)/Omega); branch="out" is its mirror image on which r
    grows back, ending at t = (2 pi - theta)/Omega.
    """
    if _bounded_regime(params, E) is EnergyRegime.CIRCULAR:
        raise RegimeError("circular orbit: the radius does not move")
    if branch not in ("in", "out"):
        raise ValueError(f"branch must be 'in' or 'out', not {branch!r}")
    x_lo, x_hi = _squared_turning_points(params, E)
    r = np.asarray(r, dtype=float)
    r2 = r * r
    _check_between(r2, x_lo, x_hi)
    Phi = _bounded_phase(params, E, r2, x_lo, x_hi)
    if branch == "out":
        Phi = TWO_PI - Phi
    t = (Phi - theta) / orbit_geometry(params, E).freq
    return float(t) if t.ndim == 0 else t


def phase_from_initial(params, E, state, tol=1e-9):
    """Phase constant theta in [0, 2 pi) of the bounded orbit through ``state`` at t = 0.

    This is arg A^+(state): the time-dependent constant Q^+ = q e^{i theta}.
    """
    H = radial_hamiltonian(params, state)
    if abs(H - E) > tol * max(1.0, abs(E)):
        raise OffShell(f"H(state) = {H} differs from E = {E}")
    if _bounded_regime(params, E) is EnergyRegime.CIRCULAR:
        return 0.0
    return phase(ladder(params, state).a_plus) % TWO_PI


def invert_time(params, E, theta, t):
    """(r, p) on the bounded orbit at time t; scalar or array t.

    The orbit phase is reduced modulo 2 pi, the monotone half-period is picked
    from it, and psi + kappa = Phi is solved for r by bracketed root finding.
    """
    regime = _bounded_regime(params, E)
    t_arr = np.asarray(t, dtype=float)
    if regime is EnergyRegime.CIRCULAR:
        r_min = turning_points(params, E)[0]
        r = np.full(t_arr.shape, r_min)
        p = np.zeros(t_arr.shape)
        return (float(r), float(p)) if t_arr.ndim == 0 else (r, p)

    x_lo, x_hi = _squared_turning_points(params, E)
    r_lo, r_hi = math.sqrt(x_lo), math.sqrt(x_hi)
    Omega = orbit_geometry(params, E).freq

    def solve(Phi):
        if Phi <= 0.0:
            return r_hi
        if Phi >= math.pi:
            return r_lo

        def g(r):
            return _bounded_phase(params, E, r * r, x_lo, x_hi) - Phi

        return brentq(g, r_lo, r_hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)

    flat = t_arr.ravel()
    r_out = np.empty_like(flat)
    p_out = np.empty_like(flat)
    for k, tk in enumerate(flat):
        Phi = (Omega * tk + theta) % TWO_PI
        outward = Phi > math.pi
        half = TWO_PI - Phi if outward else Phi
        r_k = solve(half)
        # exactly zero at the turning points, where the on-shell root is pure rounding noise
        p_k = 0.0 if half <= 0.0 or half >= math.pi else momentum_on_shell(params, E, r_k)
        r_out[k] = r_k
        p_out[k] = p_k if outward else -p_k
    if t_arr.ndim == 0:
        return float(r_out[0]), float(p_out[0])
    return r_out.reshape(t_arr.shape), p_out.reshape(t_arr.shape)


def closed_form_samples(params, E, theta, times):
    """Bounded closed-form trajectory as a list of TrajectorySample."""
    r, p = invert_time(params, E, theta, np.asarray(times, dtype=float))
    return [TrajectorySample(float(t), float(a), float(b)) for t, a, b in zip(times, r, p)]


# ---------------------------------------------------------------------------
# Unbounded motion
# ---------------------------------------------------------------------------

def time_of_radius_unbounded(params, E, theta, r, branch="out"):
    """Time at which the escaping orbit passes radius r >= r_lo.

    branch="out" is the outgoing leg (t(r_lo) = -theta/zeta, t increasing with r);
    branch="in" is its time reverse.
    """
    _unbounded_regime(params, E)
    if branch not in ("in", "out"):
        raise ValueError(f"branch must be 'in' or 'out', not {branch!r}")
    m, w, lam = params.m, params.omega, params.lam
    geo = orbit_geometry(params, E)
    a2, eps = geo.a_sq, geo.eps
    # r_lo from the stable quadratic, so that t(r_lo) is exactly zero
    x_lo = turning_points(params, E)[0] ** 2
    x_neg = -a2 * (eps + 1)
    r = np.asarray(r, dtype=float)
    r2 = r * r
    if np.any(r2 < x_lo * (1 - 1e-12)):
        raise DomainError("radius inside the periapsis r_lo")
    d = np.maximum(r2 - x_lo, 0.0)
    root = np.sqrt(d * (r2 - x_neg))
    acosh_term = np.log1p((d + root) / (a2 * eps))
    rad = root / a2
    s2 = 2 * lam * E / m - w * w
    shift = lam * E / m - w * w
    # = (acosh_term + lam a~^2/(1 - lam a~^2) * rad) / zeta, without the 0/0 at shift = 0
    t = (acosh_term * shift + (lam * E / m) * rad) / (2 * s2 * math.sqrt(s2))
    if branch == "in":
        t = -t
    if theta:
        if not math.isfinite(geo.freq):
            raise RegimeError("zeta(E) diverges at E = m w^2 / lam; use theta = 0")
        t = t - theta / geo.freq
    return float(t) if t.ndim == 0 else t
