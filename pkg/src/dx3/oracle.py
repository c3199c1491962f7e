"""
Brute-force reference dynamics used to check every closed-form result.

Hamilton's equations are integrated with an adaptive embedded Runge-Kutta
scheme (scipy's DOP853, dense output).  Nothing here uses the ladder
functions or the t(r) formulas: turning points come from root finding on the
effective potential, the potential minimum from a grid scan plus golden-section
refinement evaluated in extended precision, and periods from p = 0 events.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import mpmath
import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import DomainError, EventNotFound, RegimeError, SingularityApproach, StepFailure
from .model import (
    CartesianState,
    EnergyRegime,
    classify_energy,
    demkov_fradkin,
    effective_potential,
    hamiltonian_nd,
    radial_hamiltonian,
    singular_radius,
    to_hyperspherical,
)
from .sga import (
    SGARegime,
    ladder_deformed,
    ladder_euclidean,
    ladder_unbounded,
    normalize_angle,
    structure_functions,
)
from .solutions import TrajectorySample, orbit_geometry


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    # None means 1e-6 * r_s
    guard_radius: Optional[float] = None
    method: str = "DOP853"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("integrator tolerances must be positive")
        if self.guard_radius is not None and self.guard_radius < 0:
            raise DomainError("guard_radius must be non-negative")

    def guard(self, params):
        r_s = singular_radius(params)
        if r_s is None:
            return 0.0
        return 1e-6 * r_s if self.guard_radius is None else self.guard_radius


@dataclass(frozen=True)
class ConservationReport:
    h_drift: float
    l2_drift: float
    fradkin_drift: float
    q_mod_drift: float
    q_arg_drift: float

    @property
    def q_const_drift(self):
        return max(self.q_mod_drift, self.q_arg_drift)

    def worst(self):
        return max(self.h_drift, self.l2_drift, self.fradkin_drift, self.q_const_drift)


@dataclass
class RadialTrajectory:
    t: np.ndarray
    r: np.ndarray
    p: np.ndarray
    sign_flipped: bool = False
    dense: object = field(default=None, repr=False)
    events: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.t)

    def __iter__(self):
        for t, r, p in zip(self.t, self.r, self.p):
            yield TrajectorySample(float(t), float(r), float(p))

    def __getitem__(self, k):
        return TrajectorySample(float(self.t[k]), float(self.r[k]), float(self.p[k]))


@dataclass
class CartesianTrajectory:
    t: np.ndarray
    q: np.ndarray  # shape (n_samples, N)
    p: np.ndarray
    dense: object = field(default=None, repr=False)

    def __len__(self):
        return len(self.t)

    def state(self, k):
        return CartesianState(self.q[k], self.p[k])

    def radial(self):
        """Projection onto (|q|, q.p/|q|)."""
        r = np.linalg.norm(self.q, axis=1)
        return RadialTrajectory(self.t, r, np.einsum("ij,ij->i", self.q, self.p) / r)


class PeriodMeasurement(NamedTuple):
    period: float
    analytic: bool


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------

def radial_gradient(params, r, p):
    """(dH/dr, dH/dp) of the radial Hamiltonian."""
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    F = 1.0 / (1.0 + lam * r * r)
    H0 = p * p / (2 * m) + l * l / (2 * m * r * r) + m * w * w * r * r / 2
    dH0 = -l * l / (m * r**3) + m * w * w * r
    return F * dH0 - 2 * lam * r * F * F * H0, F * p / m


def nd_gradient(params, q, p):
    """(dH/dq, dH/dp) of the N-dimensional Hamiltonian."""
    m, w, lam = params.m, params.omega, params.lam
    g = 1.0 + lam * (q @ q)
    H = (p @ p + m * m * w * w * (q @ q)) / (2 * m * g)
    return q * (m * w * w - 2 * lam * H) / g, p / (m * g)


def _check_radial_gradient(params, r, p):
    h = 1e-6
    dr, dp = radial_gradient(params, r, p)
    fr = (radial_hamiltonian(params, (r + h * r, p)) - radial_hamiltonian(params, (r - h * r, p))) / (2 * h * r)
    hp = h * (1 + abs(p))
    fp = (radial_hamiltonian(params, (r, p + hp)) - radial_hamiltonian(params, (r, p - hp))) / (2 * hp)
    scale = 1.0 + abs(dr) + abs(dp)
    if abs(fr - dr) > 1e-5 * scale or abs(fp - dp) > 1e-5 * scale:
        raise RuntimeError(f"analytic gradient disagrees with finite differences at r={r}, p={p}")


def _guard_events(params, config, outer_region, radius):
    r_s = singular_radius(params)
    if r_s is None:
        return []
    g = config.guard(params)
    if outer_region:
        def ev(t, y):
            return radius(y) - (r_s + g)
        ev.direction = -1
    else:
        def ev(t, y):
            return radius(y) - (r_s - g)
        ev.direction = 1
    ev.terminal = True
    return [ev]


def _check_start(params, config, r0, outer_region):
    r_s = singular_radius(params)
    if outer_region and r_s is None:
        raise DomainError("outer-region integration only exists for lam < 0")
    if r_s is None:
        return
    g = config.guard(params)
    if outer_region and r0 <= r_s + g:
        raise SingularityApproach(f"initial radius {r0} not beyond r_s + guard = {r_s + g}")
    if not outer_region and r0 >= r_s - g:
        raise SingularityApproach(f"initial radius {r0} not inside r_s - guard = {r_s - g}")


def _solve(fun, t_span, y0, config, t_eval, dense_output, events):
    sol = solve_ivp(
        fun, t_span, y0,
        method=config.method, rtol=config.rel_tol, atol=config.abs_tol,
        max_step=config.max_step, t_eval=t_eval, dense_output=dense_output,
        events=events or None,
    )
    if sol.status == -1:
        raise StepFailure(sol.message)
    return sol


def integrate_radial(params, initial, t_span, config=None, t_eval=None,
                     dense_output=False, outer_region=False, events=None):
    """Integrate the radial Hamilton equations from ``initial`` over ``t_span``.

    ``t_eval`` selects output times (default: the solver's own steps).  With
    ``outer_region=True`` (lam < 0 only) the sign-flipped Hamiltonian -H is
    integrated beyond r_s and the result is labelled ``sign_flipped``.
    Extra ``events`` are passed to the solver; their hits are exposed on
    ``trajectory.events``.
    """
    config = config or IntegratorConfig()
    r0, p0 = float(initial[0]), float(initial[1])
    if r0 <= 0:
        raise DomainError("initial radius must be positive")
    _check_start(params, config, r0, outer_region)
    t0, t1 = map(float, t_span)
    if t0 == t1:
        return RadialTrajectory(np.array([t0]), np.array([r0]), np.array([p0]), outer_region)
    _check_radial_gradient(params, r0, p0)
    sign = -1.0 if outer_region else 1.0

    def fun(t, y):
        dr, dp = radial_gradient(params, y[0], y[1])
        return [sign * dp, -sign * dr]

    guards = _guard_events(params, config, outer_region, lambda y: y[0])
    extra = list(events or [])
    sol = _solve(fun, (t0, t1), [r0, p0], config, t_eval, dense_output, extra + guards)
    if guards and sol.t_events[len(extra)].size:
        raise SingularityApproach(f"trajectory reached the guard band around r_s at t = {sol.t_events[len(extra)][0]}")
    hits = list(zip(sol.t_events[: len(extra)], sol.y_events[: len(extra)])) if extra else []
    return RadialTrajectory(sol.t, sol.y[0], sol.y[1], outer_region, sol.sol, hits)


def integrate_nd(params, initial, t_span, config=None, t_eval=None, dense_output=False):
    """Integrate the full N-dimensional Hamilton equations."""
    config = config or IntegratorConfig()
    q0, p0 = initial.q, initial.p
    n = q0.shape[0]
    _check_start(params, config, float(np.linalg.norm(q0)), False)
    t0, t1 = map(float, t_span)
    if t0 == t1:
        return CartesianTrajectory(np.array([t0]), q0[None, :].copy(), p0[None, :].copy())

    def fun(t, y):
        dq, dp = nd_gradient(params, y[:n], y[n:])
        return np.concatenate([dp, -dq])

    guards = _guard_events(params, config, False, lambda y: math.sqrt(y[:n] @ y[:n]))
    sol = _solve(fun, (t0, t1), np.concatenate([q0, p0]), config, t_eval, dense_output, guards)
    if guards and sol.t_events[0].size:
        raise SingularityApproach(f"trajectory reached the guard band around r_s at t = {sol.t_events[0][0]}")
    return CartesianTrajectory(sol.t, sol.y[:n].T, sol.y[n:].T, sol.sol)


# ---------------------------------------------------------------------------
# conservation monitoring
# ---------------------------------------------------------------------------

def _rel_drift(values, ref):
    scale = max(abs(ref), 1e-300)
    return float(np.max(np.abs(np.asarray(values) - ref)) / scale)


def _q_constant_drift(params, t, r, p):
    """Drift of |Q^+| (relative) and arg Q^+ (radians) along a radial trajectory."""
    E0 = radial_hamiltonian(params, (r[0], p[0]))
    try:
        sf = structure_functions(params, E0)
    except RegimeError:
        return math.nan, math.nan
    ladder_fn = {
        SGARegime.EUCLIDEAN: ladder_euclidean,
        SGARegime.BOUNDED: ladder_deformed,
        SGARegime.UNBOUNDED: ladder_unbounded,
    }[sf.regime]
    Q = []
    try:
        for tk, rk, pk in zip(t, r, p):
            A = ladder_fn(params, (rk, pk)).a_plus
            if sf.regime is SGARegime.UNBOUNDED:
                Q.append(A * math.exp(sf.alpha * tk))
            else:
                Q.append(A * complex(math.cos(sf.alpha * tk), -math.sin(sf.alpha * tk)))
    except RegimeError:
        # the integrated energy drifted across the escape threshold
        return math.nan, math.nan
    Q = np.array(Q)
    mod = np.abs(Q)
    mod_drift = _rel_drift(mod, mod[0])
    if mod[0] < 1e-12 * max(1.0, abs(E0)):
        return mod_drift, 0.0
    arg0 = np.angle(Q[0])
    arg_drift = max(abs(normalize_angle(a - arg0)) for a in np.angle(Q))
    return mod_drift, float(arg_drift)


def conservation_report(params, trajectory):
    """Maximum drifts of the first integrals along an oracle trajectory.

    Radial trajectories report H and Q^+; Cartesian ones additionally report
    L^2 and the Demkov-Fradkin tensor (relative to its largest initial entry).
    """
    if len(trajectory) == 0:
        raise DomainError("empty trajectory")
    if isinstance(trajectory, CartesianTrajectory):
        states = [trajectory.state(k) for k in range(len(trajectory))]
        H = [hamiltonian_nd(params, s) for s in states]
        hyp = [to_hyperspherical(s) for s in states]
        L2 = [h[2] for h in hyp]
        I = np.array([demkov_fradkin(params, s).entries for s in states])
        I0 = I[0]
        fr = float(np.max(np.abs(I - I0)) / max(np.max(np.abs(I0)), 1e-300))
        reduced = params.replace(l=math.sqrt(L2[0]))
        r = np.array([h[0] for h in hyp])
        p = np.array([h[1] for h in hyp])
        qm, qa = _q_constant_drift(reduced, trajectory.t, r, p)
        return ConservationReport(_rel_drift(H, H[0]), _rel_drift(L2, L2[0]), fr, qm, qa)
    if trajectory.sign_flipped:
        H = [-radial_hamiltonian(params, s) for s in zip(trajectory.r, trajectory.p)]
        return ConservationReport(_rel_drift(H, H[0]), 0.0, 0.0, math.nan, math.nan)
    H = radial_hamiltonian(params, (trajectory.r, trajectory.p))
    H = np.atleast_1d(H)
    qm, qa = _q_constant_drift(params, trajectory.t, trajectory.r, trajectory.p)
    return ConservationReport(_rel_drift(H, H[0]), 0.0, 0.0, qm, qa)


# ---------------------------------------------------------------------------
# potential minimum, turning points, periods
# ---------------------------------------------------------------------------

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section(f, a, b, tol):
    """Minimise a unimodal f on [a, b] until the bracket is narrower than tol."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def grid_minimize_potential(params, n_grid=2001, tol=1e-10):
    """Numerical (r_min, V_min): grid scan then golden-section refinement.

    The refinement compares potentials evaluated with 40 significant digits;
    in double precision V_eff is flat to rounding over a window of width
    ~1e-8 around the minimum, which would cap the attainable accuracy.
    """
    m, w, l, lam = params.m, params.omega, params.l, params.lam
    if l <= 0:
        raise DomainError("effective potential has no interior minimum for l = 0")
    r_s = singular_radius(params)
    scale = math.sqrt(l / (m * w))
    if r_s is None:
        grid = np.geomspace(1e-3 * scale, 1e3 * scale, n_grid)
    else:
        grid = np.linspace(1e-4 * r_s, (1 - 1e-6) * r_s, n_grid)
    k = int(np.argmin(effective_potential(params, grid)))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, n_grid - 1)]

    with mpmath.workdps(40):
        mm, ww, ll, la = map(mpmath.mpf, (m, w, l, lam))

        def v(r):
            r = mpmath.mpf(r)
            return (ll * ll / (2 * mm * r * r) + mm * ww * ww * r * r / 2) / (1 + la * r * r)

        r_min = golden_section(v, a, b, tol)
    return float(r_min), float(effective_potential(params, r_min))


def oracle_turning_points(params, E):
    """Turning radii from bracketed root finding on V_eff(r) - E."""
    regime = classify_energy(params, E)
    if regime in (EnergyRegime.FORBIDDEN, EnergyRegime.CIRCULAR):
        raise RegimeError(f"no separated turning points for a {regime} energy")

    def g(r):
        return effective_potential(params, r) - E

    r_min = grid_minimize_potential(params)[0] if params.l > 0 else 0.0
    lo = r_min
    while g(lo) < 0:
        lo = max(lo / 2, 1e-300) if lo > 0 else 1e-12
    inner = brentq(g, lo, r_min, xtol=1e-15, rtol=1e-15, maxiter=500) if lo < r_min else lo
    if regime in (EnergyRegime.UNBOUNDED, EnergyRegime.CRITICAL):
        return inner, math.inf
    r_s = singular_radius(params)
    if r_s is not None:
        hi = r_s * (1 - 1e-12)
    else:
        hi = 2 * max(r_min, 1.0)
        while g(hi) < 0:
            hi *= 2
    outer = brentq(g, r_min, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    return inner, outer


def _p_event(direction, t_start):
    def ev(t, y):
        # the trajectory starts at p = 0; ignore that zero
        return y[1] if t > t_start else -1.0
    ev.direction = direction
    ev.terminal = True
    return ev


def oracle_period(params, E, config=None):
    """Radial period measured as the first return to (r_hi, p = 0)."""
    config = config or IntegratorConfig()
    regime = classify_energy(params, E)
    if regime is EnergyRegime.CIRCULAR:
        return PeriodMeasurement(2 * math.pi / orbit_geometry(params, E).freq, True)
    if regime is not EnergyRegime.BOUNDED:
        raise RegimeError(f"E = {E} is {regime}; no radial period")
    r_hi = oracle_turning_points(params, E)[1]
    horizon = 10 * 2 * math.pi / orbit_geometry(params, E).freq
    traj = integrate_radial(params, (r_hi, 0.0), (0.0, horizon), config, events=[_p_event(-1, 0.0)])
    hits = traj.events[0][0]
    if hits.size == 0:
        raise EventNotFound(f"no return to p = 0 within {horizon}")
    return PeriodMeasurement(float(hits[0]), False)


def oracle_time_of_radius(params, E, radii, config=None, r_max=None):
    """Times at which the oracle trajectory passes the given radii.

    Bounded: start at (r_hi, 0) at t = 0 and follow the inward half-period.
    Unbounded: start at (r_lo, 0) at t = 0 and follow the outgoing leg out to
    ``r_max`` (default: the largest requested radius).
    """
    config = config or IntegratorConfig()
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    regime = classify_energy(params, E)
    r_lo, r_hi = oracle_turning_points(params, E)
    if regime is EnergyRegime.BOUNDED:
        horizon = 2 * math.pi / orbit_geometry(params, E).freq
        traj = integrate_radial(params, (r_hi, 0.0), (0.0, horizon), config,
                                dense_output=True, events=[_p_event(1, 0.0)])
        hits = traj.events[0][0]
        if hits.size == 0:
            raise EventNotFound("inner turning point not reached within one period")
        t_end, start, stop = float(hits[0]), r_hi, traj.events[0][1][0][0]
    elif regime is EnergyRegime.UNBOUNDED:
        r_max = float(np.max(radii)) * 1.01 if r_max is None else r_max

        def reach(t, y):
            return y[0] - r_max
        reach.terminal = True
        reach.direction = 1
        traj = integrate_radial(params, (r_lo, 0.0), (0.0, 1e6), config, dense_output=True, events=[reach])
        hits = traj.events[0][0]
        if hits.size == 0:
            raise EventNotFound(f"r = {r_max} not reached")
        t_end, start, stop = float(hits[0]), r_lo, r_max
    else:
        raise RegimeError(f"E = {E} is {regime}")

    def r_of_t(t):
        return float(traj.dense(t)[0])

    out = np.empty_like(radii)
    for k, rk in enumerate(radii):
        # turning points are answered by the event time: t(r) has infinite slope there
        if np.isclose(rk, start, rtol=1e-10, atol=0):
            out[k] = 0.0
        elif np.isclose(rk, stop, rtol=1e-10, atol=0):
            out[k] = t_end
        elif (rk - start) * (rk - stop) > 0:
            raise DomainError(f"radius {rk} not traversed by the trajectory")
        else:
            out[k] = brentq(lambda t: r_of_t(t) - rk, 0.0, t_end, xtol=1e-13, rtol=1e-15, maxiter=500)
    return out
