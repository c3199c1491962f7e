"""
Command-line front end: figure data as CSV, verification suites, parameter sweeps.

    dx3 potential --lambda -0.2 --r-lo 0.3 --r-hi 4 --samples 400
    dx3 phase --lambda 0.2 --energies 1 1.25 1.5 1.75 2 2.25
    dx3 orbit --lambda 0.2 --E 2 --oracle
    dx3 verify --suite all
    dx3 sweep --lambdas 0 0.05 0.1 0.2 0.5 --E 2

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 regime error.
Data goes to --out (default stdout); warnings go to stderr.
"""
import argparse
import csv
import io
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import checks
from .errors import DomainError, DX3Error, RegimeError
from .model import (
    EnergyRegime,
    Params,
    classify_energy,
    effective_potential,
    momentum_on_shell,
    potential_minimum,
    singular_radius,
    turning_points,
)
from .oracle import IntegratorConfig, integrate_radial
from .solutions import (
    euclid_trajectory,
    invert_time,
    orbit_geometry,
    radial_period,
    time_of_radius_unbounded,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REGIME = 0, 1, 2, 3

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def decimal(text):
    """argparse type accepting plain decimal numerals only (no nan, inf, hex)."""
    if not _DECIMAL.match(text.strip()):
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}")
    return float(text)


def fmt(x):
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return repr(float(x))


def warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def write_table(out, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise AssertionError("row width does not match header")
        w.writerow([fmt(v) for v in row])
    if out == "-":
        sys.stdout.write(buf.getvalue())
        sys.stdout.flush()
    else:
        with open(out, "w", newline="") as fh:
            fh.write(buf.getvalue())


def _params(args):
    return Params(m=args.m, omega=args.omega, lam=args.lam, l=args.l)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_potential(args):
    params = _params(args)
    if not 0 < args.r_lo < args.r_hi:
        raise DomainError("need 0 < --r-lo < --r-hi")
    grid = np.linspace(args.r_lo, args.r_hi, args.samples)
    r_s = singular_radius(params)
    if r_s is not None and args.r_lo < r_s < args.r_hi:
        near = np.abs(grid - r_s) <= 1e-6 * r_s
        warn(f"grid straddles the singular radius r_s = {r_s!r}; "
             f"{int(near.sum())} sample(s) within 1e-6 r_s omitted")
        grid = grid[~near]
    rows = [(r, effective_potential(params, r)) for r in grid]
    write_table(args.out, ["r", "V_eff"], rows)
    return EXIT_OK


def phase_rows(params, E, samples, r_cap):
    regime = classify_energy(params, E)
    if regime is EnergyRegime.FORBIDDEN:
        warn(f"E = {E!r} is below the potential minimum; skipped")
        return []
    r_lo, r_hi = turning_points(params, E)
    if regime is EnergyRegime.CIRCULAR:
        return [(E, r_lo, 0.0, 0.0)]
    closed = math.isfinite(r_hi)
    if not closed:
        if r_cap <= r_lo:
            warn(f"E = {E!r}: --r-cap {r_cap!r} is inside the periapsis {r_lo!r}; skipped")
            return []
        r_hi = r_cap
    radii = np.linspace(r_lo, r_hi, samples)
    p = momentum_on_shell(params, E, radii)
    p[0] = 0.0
    if closed:
        p[-1] = 0.0
    return [(E, r, pk, 0.0 - pk) for r, pk in zip(radii, p)]


def cmd_phase(args):
    params = _params(args)
    energies = [e for item in args.energies for e in item]
    rows = []
    for E in energies:
        rows += phase_rows(params, E, args.samples, args.r_cap)
    write_table(args.out, ["E", "r", "p_plus", "p_minus"], rows)
    return EXIT_OK


def cmd_orbit(args):
    params = _params(args)
    E = args.E
    regime = classify_energy(params, E)
    config = IntegratorConfig(rel_tol=args.rel_tol)
    if regime in (EnergyRegime.BOUNDED, EnergyRegime.CIRCULAR):
        t_max = args.t_max if args.t_max is not None else radial_period(params, E)
        times = np.linspace(0.0, t_max, args.samples)
        if params.lam == 0:
            r_c, p_c = euclid_trajectory(params, E, args.theta, times)
        else:
            r_c, p_c = invert_time(params, E, args.theta, times)
        if not args.oracle:
            write_table(args.out, ["t", "r_closed", "p_closed"], zip(times, r_c, p_c))
            return EXIT_OK
        traj = integrate_radial(params, (r_c[0], p_c[0]), (0.0, t_max), config, t_eval=times)
        write_table(args.out, ["t", "r_closed", "p_closed", "r_oracle", "p_oracle"],
                    zip(times, r_c, p_c, traj.r, traj.p))
        return EXIT_OK

    if regime is EnergyRegime.UNBOUNDED and not args.oracle:
        r_lo = turning_points(params, E)[0]
        radii = np.linspace(r_lo, max(args.r_cap, r_lo), args.samples)
        t = time_of_radius_unbounded(params, E, args.theta, radii)
        write_table(args.out, ["r", "t_of_r_unbounded"], zip(radii, t))
        return EXIT_OK
    if regime in (EnergyRegime.UNBOUNDED, EnergyRegime.CRITICAL) and args.oracle:
        if args.theta:
            warn("theta is ignored for escaping orbits; t = 0 is the periapsis passage")
        r_lo = turning_points(params, E)[0]
        t_max = args.t_max if args.t_max is not None else 10.0
        times = np.linspace(0.0, t_max, args.samples)
        traj = integrate_radial(params, (r_lo, 0.0), (0.0, t_max), config, t_eval=times)
        if regime is EnergyRegime.CRITICAL:
            write_table(args.out, ["t", "r_oracle", "p_oracle"], zip(traj.t, traj.r, traj.p))
        else:
            t_closed = time_of_radius_unbounded(params, E, 0.0, traj.r)
            write_table(args.out, ["t", "r_oracle", "p_oracle", "t_closed_of_r_oracle"],
                        zip(traj.t, traj.r, traj.p, t_closed))
        return EXIT_OK
    if regime is EnergyRegime.CRITICAL:
        raise RegimeError(f"E = {E!r} is {regime}: no closed-form orbit, rerun with --oracle")
    raise RegimeError(f"E = {E!r} is {regime}: below the potential minimum")


def cmd_verify(args):
    tol = args.tol
    if tol is None:
        env = os.environ.get("DX3_TOL")
        tol = decimal(env) if env else checks.DEFAULT_TOL
    config = IntegratorConfig(rel_tol=args.rel_tol)
    results = checks.run(args.suite, seed=args.seed, tol=tol, config=config)
    for res in results:
        print(res.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def sweep_row(params, E):
    row = {"lambda": params.lam, "r_min": None, "V_min": None, "regime": "",
           "Omega_or_zeta": None, "T_or_none": None, "error": ""}
    try:
        row["r_min"], row["V_min"] = potential_minimum(params)
        regime = classify_energy(params, E)
        row["regime"] = str(regime)
        if regime in (EnergyRegime.BOUNDED, EnergyRegime.CIRCULAR, EnergyRegime.UNBOUNDED):
            row["Omega_or_zeta"] = orbit_geometry(params, E).freq
        if regime in (EnergyRegime.BOUNDED, EnergyRegime.CIRCULAR):
            row["T_or_none"] = radial_period(params, E)
    except DX3Error as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


SWEEP_HEADER = ["lambda", "r_min", "V_min", "regime", "Omega_or_zeta", "T_or_none", "error"]


def cmd_sweep(args):
    lambdas = [v for item in args.lambdas for v in item]
    base = dict(m=args.m, omega=args.omega, l=args.l)
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(lambda lam: sweep_row(Params(lam=lam, **base), args.E), lambdas))
    write_table(args.out, SWEEP_HEADER, [[row[k] for k in SWEEP_HEADER] for row in rows])
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _decimal_list(text):
    return [decimal(part) for part in text.split(",") if part.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=decimal, default=1.0, help="mass (default 1)")
    common.add_argument("--omega", type=decimal, default=1.0, help="frequency (default 1)")
    common.add_argument("--l", type=decimal, default=1.0, help="angular momentum |L| (default 1)")
    common.add_argument("--lambda", dest="lam", type=decimal, default=0.0, help="deformation parameter (default 0)")
    common.add_argument("--out", default="-", help="output CSV path, '-' for stdout")

    parser = argparse.ArgumentParser(prog="dx3", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", parents=[common], help="effective potential V_eff(r)")
    p.add_argument("--r-lo", type=decimal, default=0.3)
    p.add_argument("--r-hi", type=decimal, default=3.0)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("phase", parents=[common], help="phase-plane contours p(r) at given energies")
    p.add_argument("--energies", type=_decimal_list, nargs="+", required=True,
                   help="energies, space- or comma-separated")
    p.add_argument("--samples", type=int, default=200, help="radii per contour")
    p.add_argument("--r-cap", type=decimal, default=10.0, help="outer radius for escaping contours")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("orbit", parents=[common], help="closed-form (and oracle) r(t), p(t)")
    p.add_argument("--E", type=decimal, required=True, help="energy")
    p.add_argument("--theta", type=decimal, default=0.0, help="phase constant (radians)")
    p.add_argument("--t-max", type=decimal, default=None, help="end time (default: one radial period)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--oracle", action="store_true", help="add numerically integrated columns")
    p.add_argument("--rel-tol", type=decimal, default=1e-10, help="oracle relative tolerance")
    p.add_argument("--r-cap", type=decimal, default=10.0, help="outer radius for escaping t(r) tables")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=["sga", "oracle", "limits", "all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=decimal, default=None,
                   help="verification tolerance (default: $DX3_TOL or 1e-6)")
    p.add_argument("--rel-tol", type=decimal, default=1e-10, help="oracle integrator relative tolerance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="per-lambda summary at fixed energy")
    p.add_argument("--lambdas", type=_decimal_list, nargs="+", required=True)
    p.add_argument("--E", type=decimal, required=True)
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("samples", "workers"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name} must be at least 1")
    try:
        return args.func(args)
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (DomainError, argparse.ArgumentTypeError) as exc:
        print(f"dx3: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
