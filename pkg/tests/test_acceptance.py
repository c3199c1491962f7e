"""
Acceptance criteria, one test each.

Every test prints a single PASS/FAIL line with the measured numbers, so the
outcome is visible both under ``pytest -v`` and when this file is executed
directly (``python3 tests/test_acceptance.py``).
"""
import contextlib
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from dx3 import (
    CartesianState,
    EnergyRegime,
    IntegratorConfig,
    Params,
    SGARegime,
    classify_energy,
    conservation_report,
    demkov_fradkin,
    effective_potential,
    euclid_trajectory,
    grid_minimize_potential,
    hamiltonian_nd,
    integrate_nd,
    potential_minimum,
    radial_period,
    singular_radius,
    time_of_radius_bounded,
    time_of_radius_unbounded,
    to_hyperspherical,
)
from dx3.checks import bracket_errors, closed_vs_oracle, limit_errors, random_states
from dx3.model import euclidean_radial_hamiltonian

_capsys = None


@pytest.fixture(autouse=True)
def _keep_capsys(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} | {detail}"
    ctx = _capsys.disabled() if _capsys is not None else contextlib.nullcontext()
    with ctx:
        print("\n" + line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# ---------------------------------------------------------------------------

def test_criterion_1_singular_radius():
    with Timer() as tm:
        params = Params(lam=-0.2)
        r_s = singular_radius(params)
        err_exact = abs(r_s - math.sqrt(5))
        err_fig = abs(r_s - 2.2360680)
        radii = r_s * (1 - np.logspace(-1, -12, 60))
        v = effective_potential(params, radii)
        monotone = bool(np.all(np.diff(v) > 0))
    ok = err_exact <= 1e-12 and err_fig < 5e-8 and monotone and v[-1] > 1e10 and tm.elapsed < 1.0
    report(1, "singular radius", ok,
           f"r_s={r_s!r} |r_s-sqrt5|={err_exact:.1e} monotone={monotone} "
           f"V(r_s(1-1e-12))={v[-1]:.3e} t={tm.elapsed:.2f}s")


def test_criterion_2_euclidean_closed_form():
    with Timer() as tm:
        params = Params()
        E = 2.0
        t = np.linspace(0.0, 2 * math.pi, 1000)
        r, p = euclid_trajectory(params, E, 0.0, t)
        resid = float(np.max(np.abs(euclidean_radial_hamiltonian(params, r, p) - E)))
        r_hi, _ = euclid_trajectory(params, E, 0.0, 0.0)
        r_lo, _ = euclid_trajectory(params, E, 0.0, math.pi / 2)
        r_shift, _ = euclid_trajectory(params, E, 0.0, t + math.pi)
        period_err = max(float(np.max(np.abs(r_shift - r))), abs(radial_period(params, E) - math.pi))
        bounds_ok = r.min() >= r_lo - 1e-12 and r.max() <= r_hi + 1e-12
        err_lo = abs(r_lo - math.sqrt(2 - math.sqrt(3)))
        err_hi = abs(r_hi - math.sqrt(2 + math.sqrt(3)))
    ok = (resid < 1e-12 and period_err < 1e-12 and bounds_ok and max(err_lo, err_hi) < 1e-12
          and abs(r_lo - 0.5176381) < 5e-8 and abs(r_hi - 1.9318517) < 5e-8 and tm.elapsed < 1.0)
    report(2, "Euclidean closed form", ok,
           f"r in [{r_lo:.7f}, {r_hi:.7f}] period err={period_err:.1e} "
           f"max|H0-2|={resid:.1e} t={tm.elapsed:.2f}s")


def test_criterion_3_sga_brackets():
    cases = (
        ("Euclidean", 0.0, (1.2, 5.0), SGARegime.EUCLIDEAN),
        ("Bounded lam=0.2", 0.2, (1.0, 2.3), SGARegime.BOUNDED),
        ("Bounded lam=-0.2", -0.2, (1.5, 8.0), SGARegime.BOUNDED),
    )
    rng = np.random.default_rng(2024)
    worst_br, worst_fac, parts = 0.0, 0.0, []
    with Timer() as tm:
        for label, lam, e_range, regime in cases:
            errs = np.array([bracket_errors(pr, st, regime) for pr, st in random_states(rng, lam, e_range, 100)])
            br, fac = float(errs[:, :2].max()), float(errs[:, 2].max())
            worst_br, worst_fac = max(worst_br, br), max(worst_fac, fac)
            parts.append(f"{label}: {br:.1e}/{fac:.1e}")
    ok = worst_br < 1e-6 and worst_fac < 1e-10 and tm.elapsed < 5.0
    report(3, "SGA bracket closure", ok, "; ".join(parts) + f" t={tm.elapsed:.2f}s")


def test_criterion_4_closed_form_vs_oracle():
    config = IntegratorConfig(rel_tol=1e-10)
    parts, equiv_ok = [], True
    with Timer() as tm:
        for lam, E in ((0.0, 2.0), (0.05, 2.0), (0.2, 2.0), (-0.2, 2.0), (0.2, 3.0)):
            err, scale = closed_vs_oracle(lam, E, config, n_radii=50)
            equiv_ok &= err < 1e-6 * scale
            parts.append(f"({lam},{E}): {err:.1e}")
        pos = Params(lam=0.2)
        T = radial_period(pos, 2.0)
        t3 = time_of_radius_bounded(pos, 2.0, 0.0, 3.0)
        t2 = time_of_radius_unbounded(pos, 3.0, 0.0, 2.0)
    # spot values as stated, each with the criterion's own tolerance 1e-6 max(1, T)
    spot_b = abs(t3 - 3.4449886) < 1e-6 * max(1.0, T)
    spot_u = abs(t2 - 1.0009609) < 1e-6
    ok = equiv_ok and spot_b and spot_u and tm.elapsed < 30.0
    report(4, "closed form vs oracle", ok,
           f"max|dt| {' '.join(parts)} equivalence={'ok' if equiv_ok else 'FAILED'}; "
           f"spot t(3)={t3:.7f} (stated 3.4449886, {'ok' if spot_b else 'mismatch'}), "
           f"t(2)={t2:.7f} (stated 1.0009609, {'ok' if spot_u else 'mismatch'}) t={tm.elapsed:.2f}s")


def test_criterion_5_conservation():
    rng = np.random.default_rng(7)
    config = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    worst, worst_trace, parts = 0.0, 0.0, []
    for lam in (0.2, 0.0, -0.2):
        params = Params(lam=lam)
        state = CartesianState(rng.uniform(-0.8, 0.8, 3), rng.uniform(-0.8, 0.8, 3))
        E = hamiltonian_nd(params, state)
        reduced = params.replace(l=math.sqrt(to_hyperspherical(state)[2]))
        T = radial_period(reduced, E)
        t = np.linspace(0.0, 10 * T, 400)
        traj = integrate_nd(params, state, (0.0, 10 * T), config, t_eval=t)
        rep = conservation_report(params, traj)
        drift = max(rep.h_drift, rep.l2_drift, rep.fradkin_drift, rep.q_mod_drift)
        for k in range(len(traj)):
            s = traj.state(k)
            H = hamiltonian_nd(params, s)
            worst_trace = max(worst_trace, abs(demkov_fradkin(params, s).trace - 2 * params.m * H) / (2 * params.m * H))
        worst = max(worst, drift)
        parts.append(f"lam={lam}: H {rep.h_drift:.1e} L2 {rep.l2_drift:.1e} "
                     f"I {rep.fradkin_drift:.1e} |Q+| {rep.q_mod_drift:.1e}")
    ok = worst < 1e-8 and worst_trace < 1e-12
    report(5, "conservation suite", ok, "; ".join(parts) + f"; trace {worst_trace:.1e}")


def test_criterion_6_minima_and_thresholds():
    errs = {}
    for lam in (0.0, 0.2, -0.2):
        params = Params(lam=lam)
        errs[lam] = abs(grid_minimize_potential(params)[0] - potential_minimum(params)[0])
    params = Params(lam=0.2)
    e_c = params.m * params.omega**2 / (2 * params.lam)
    lo, hi = 2.0, 3.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if classify_energy(params, mid) is EnergyRegime.BOUNDED:
            lo = mid
        else:
            hi = mid
    # hi is the first energy that is no longer Bounded; the band around e_c is Critical
    flips = (classify_energy(params, e_c) is EnergyRegime.CRITICAL
             and classify_energy(params, e_c * (1 - 1e-9)) is EnergyRegime.BOUNDED
             and classify_energy(params, e_c * (1 + 1e-9)) is EnergyRegime.UNBOUNDED)
    ok = max(errs.values()) < 1e-9 and flips and e_c == 2.5 and abs(hi - 2.5) < 1e-11
    report(6, "minima and thresholds", ok,
           " ".join(f"|dr_min|(lam={k})={v:.1e}" for k, v in errs.items())
           + f" flip at E={hi!r} (E_c={e_c})")


def test_criterion_7_limit_recovery():
    t1, s1 = limit_errors(1e-4)
    t2, s2 = limit_errors(1e-5)
    rt, rs = t1 / t2, s1 / s2
    ok = abs(rt / 10 - 1) <= 0.05 and abs(rs / 10 - 1) <= 0.05
    report(7, "limit recovery", ok, f"t(r) ratio {rt:.4f}, structure ratio {rs:.4f} (target 10 +- 5%)")


def _cli(*argv):
    res = subprocess.run([sys.executable, "-m", "dx3", *argv], capture_output=True, text=True)
    return res.returncode, res.stdout


def test_criterion_8_figure_data():
    energies = ["1.00", "1.25", "1.50", "1.75", "2.00", "2.25"]
    with Timer() as tm:
        code_p, out = _cli("phase", "--lambda", "0.2", "--energies", *energies, "--samples", "200")
        lines = out.splitlines()
        header, rows = lines[0], [ln.split(",") for ln in lines[1:]]
        contours = {}
        for row in rows:
            contours.setdefault(row[0], []).append(row)
        closed = all(
            c[0][2] == c[0][3] == c[-1][2] == c[-1][3] == "0.0"
            and math.isfinite(float(c[-1][1]))
            for c in contours.values()
        )
        sweep = ("sweep", "--lambdas", "0", "0.05", "0.10", "0.20", "0.50", "--E", "2")
        code_a, first = _cli(*sweep)
        code_b, second = _cli(*sweep)
    ok = (code_p == code_a == code_b == 0 and header == "E,r,p_plus,p_minus" and len(contours) == 6
          and closed and first == second and len(first.splitlines()) == 6 and tm.elapsed < 10.0)
    report(8, "figure data regeneration", ok,
           f"{len(contours)} contours, endpoints p=0: {closed}, sweep deterministic: {first == second} "
           f"t={tm.elapsed:.2f}s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
