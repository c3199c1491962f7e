"""Invariant suites run by ``dx3 verify``: bracket closure, oracle agreement, flat limits."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DX3Error
from .model import CartesianState, Params, hamiltonian_nd, momentum_on_shell, radial_hamiltonian, to_hyperspherical, turning_points
from .oracle import IntegratorConfig, conservation_report, integrate_nd, oracle_period, oracle_time_of_radius
from .sga import (
    SGARegime,
    ladder_deformed,
    ladder_euclidean,
    ladder_unbounded,
    poisson_bracket,
    structure_functions,
)
from .solutions import radial_period, time_of_radius_bounded, time_of_radius_unbounded

DEFAULT_TOL = 1e-6
SUITES = ("sga", "oracle", "limits")
# drift monitors at the 1e-8 level need the integrator well below it
CONSERVATION_TIGHTEN = 1e-2


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tol: float

    @property
    def passed(self):
        return bool(self.error <= self.tol)

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: max error {self.error:.3e} (tol {self.tol:.1e})"


# (label, lam, energy range, regime)
SGA_CASES = (
    ("euclidean", 0.0, (1.2, 5.0), SGARegime.EUCLIDEAN),
    ("bounded lam=0.2", 0.2, (1.0, 2.3), SGARegime.BOUNDED),
    ("bounded lam=-0.2", -0.2, (1.5, 8.0), SGARegime.BOUNDED),
    ("unbounded lam=0.2", 0.2, (2.8, 3.8), SGARegime.UNBOUNDED),
)

LADDERS = {
    SGARegime.EUCLIDEAN: ladder_euclidean,
    SGARegime.BOUNDED: ladder_deformed,
    SGARegime.UNBOUNDED: ladder_unbounded,
}


def random_states(rng, lam, e_range, n, l_range=(0.5, 2.0)):
    """(params, state) pairs with on-shell states spread between the turning points."""
    out = []
    while len(out) < n:
        params = Params(lam=lam, l=rng.uniform(*l_range))
        E = rng.uniform(*e_range)
        try:
            r_lo, r_hi = turning_points(params, E)
        except ValueError:
            continue
        if r_hi == math.inf:
            r_hi = 5 * r_lo
        if not r_hi > r_lo * (1 + 1e-3):
            continue
        r = rng.uniform(r_lo + 0.05 * (r_hi - r_lo), r_hi - 0.05 * (r_hi - r_lo))
        p = momentum_on_shell(params, E, r) * rng.choice((-1.0, 1.0))
        out.append((params, (r, p)))
    return out


def bracket_errors(params, state, regime):
    """Relative residuals of the three SGA identities at one state."""
    lad = LADDERS[regime]

    def a_plus(pr, s):
        return lad(pr, s).a_plus

    def a_minus(pr, s):
        return lad(pr, s).a_minus

    H = radial_hamiltonian(params, state)
    sf = structure_functions(params, H, regime)
    val = lad(params, state)
    hb = poisson_bracket(radial_hamiltonian, a_plus, params, state)
    ab = poisson_bracket(a_plus, a_minus, params, state)
    # |A+| = |A-| except in the unbounded regime, where A+ alone can be small by cancellation
    scale = abs(sf.alpha) * max(abs(val.a_plus), math.sqrt(abs(val.a_plus * val.a_minus)))
    if regime is SGARegime.UNBOUNDED:
        # alpha, beta hold the imaginary parts: {H, A+} = alpha A+, {A+, A-} = -beta
        e_h = abs(hb - sf.alpha * val.a_plus) / scale
        e_a = abs(ab + sf.beta) / abs(sf.beta)
    else:
        e_h = abs(hb + 1j * sf.alpha * val.a_plus) / scale
        e_a = abs(ab - 1j * sf.beta) / abs(sf.beta)
    l2 = params.l**2
    e_f = abs(val.a_plus * val.a_minus + sf.gamma + l2) / max(abs(sf.gamma), l2)
    return e_h, e_a, e_f


def sga_suite(seed=0, tol=DEFAULT_TOL, n=100):
    rng = np.random.default_rng(seed)
    results = []
    for label, lam, e_range, regime in SGA_CASES:
        errs = np.array([bracket_errors(pr, st, regime) for pr, st in random_states(rng, lam, e_range, n)])
        results.append(CheckResult(f"sga {label}: {{H,A+}} closure", float(errs[:, 0].max()), tol))
        results.append(CheckResult(f"sga {label}: {{A+,A-}} closure", float(errs[:, 1].max()), tol))
        results.append(CheckResult(f"sga {label}: factorization", float(errs[:, 2].max()), 1e-10))
    return results


ORACLE_CASES = ((0.0, 2.0), (0.05, 2.0), (0.2, 2.0), (-0.2, 2.0), (0.2, 3.0))


def closed_vs_oracle(lam, E, config, n_radii=50):
    """max |t_closed(r) - t_oracle(r)| over n_radii radii, and the time scale max(1, T)."""
    params = Params(lam=lam)
    r_lo, r_hi = turning_points(params, E)
    if r_hi == math.inf:
        radii = np.linspace(r_lo, 10 * r_lo, n_radii)
        closed = time_of_radius_unbounded(params, E, 0.0, radii)
        scale = 1.0
    else:
        radii = np.linspace(r_lo, r_hi, n_radii)
        closed = time_of_radius_bounded(params, E, 0.0, radii)
        scale = max(1.0, radial_period(params, E))
    oracle = oracle_time_of_radius(params, E, radii, config)
    return float(np.max(np.abs(closed - oracle))), scale


def oracle_suite(seed=0, tol=DEFAULT_TOL, config=None):
    config = config or IntegratorConfig()
    results = []
    for lam, E in ORACLE_CASES:
        try:
            err, scale = closed_vs_oracle(lam, E, config)
            err /= scale
        except DX3Error:
            err = math.inf
        results.append(CheckResult(f"oracle t(r) lam={lam} E={E}", err, tol))
    for lam, E in ((0.0, 2.0), (0.2, 2.0), (-0.2, 2.0)):
        params = Params(lam=lam)
        T = radial_period(params, E)
        try:
            err = abs(oracle_period(params, E, config).period - T) / T
        except DX3Error:
            err = math.inf
        results.append(CheckResult(f"oracle period lam={lam} E={E}", err, tol))
    tight = IntegratorConfig(rel_tol=config.rel_tol * CONSERVATION_TIGHTEN,
                             abs_tol=config.abs_tol * CONSERVATION_TIGHTEN,
                             max_step=config.max_step, guard_radius=config.guard_radius, method=config.method)
    rng = np.random.default_rng(seed)
    for lam in (0.2, 0.0, -0.2):
        params = Params(lam=lam)
        q = rng.uniform(-0.8, 0.8, 3)
        p = rng.uniform(-0.8, 0.8, 3)
        state = CartesianState(q, p)
        E = hamiltonian_nd(params, state)
        reduced = params.replace(l=math.sqrt(to_hyperspherical(state)[2]))
        T = radial_period(reduced, E)
        try:
            traj = integrate_nd(params, state, (0.0, 10 * T), tight, t_eval=np.linspace(0.0, 10 * T, 200))
            rep = conservation_report(params, traj)
            worst = max(rep.h_drift, rep.l2_drift, rep.fradkin_drift, rep.q_mod_drift)
        except DX3Error:
            worst = math.inf
        results.append(CheckResult(f"oracle conservation N=3 lam={lam}", worst, 1e-8))
    return results


def limit_errors(lam, E=2.0, n=40):
    """Max deviation of t(r; lam) and of the structure functions from the flat case."""
    flat = Params()
    params = Params(lam=lam)
    r_lo, r_hi = turning_points(flat, E)
    pad = 0.1 * (r_hi - r_lo)
    radii = np.linspace(r_lo + pad, r_hi - pad, n)
    m, w, l = flat.m, flat.omega, flat.l
    q0 = math.sqrt(E * E / (w * w) - l * l)
    t_flat = np.arccos((m * w * radii**2 - E / w) / q0) / (2 * w)
    t_err = float(np.max(np.abs(time_of_radius_bounded(params, E, 0.0, radii) - t_flat)))
    sf = structure_functions(params, E, SGARegime.BOUNDED)
    ref = (2 * w, 4 * E / w, -E * E / (w * w))
    s_err = max(abs(sf.alpha - ref[0]), abs(sf.beta - ref[1]), abs(sf.gamma - ref[2]))
    return t_err, s_err


def limits_suite(seed=0, tol=DEFAULT_TOL):
    t1, s1 = limit_errors(1e-4)
    t2, s2 = limit_errors(1e-5)
    # the error must shrink tenfold when lam does: |ratio - 10| <= 5%
    return [
        CheckResult("limits t(r) linear in lam", abs(t1 / t2 / 10 - 1), 0.05),
        CheckResult("limits structure functions linear in lam", abs(s1 / s2 / 10 - 1), 0.05),
    ]


def run(suite, seed=0, tol=DEFAULT_TOL, config=None):
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        if name == "sga":
            results += sga_suite(seed, tol)
        elif name == "oracle":
            results += oracle_suite(seed, tol, config)
        elif name == "limits":
            results += limits_suite(seed, tol)
        else:
            raise ValueError(f"unknown suite {name!r}")
    return results
