"""
First integrals along a 3-D trajectory
======================================

Integrate the full Hamiltonian in R^3 and watch H, L^2, the Demkov-Fradkin
tensor and |Q+|.  Loosening the integrator makes the drift obvious.
"""
import math

import numpy as np

from dx3 import (
    CartesianState,
    IntegratorConfig,
    Params,
    conservation_report,
    demkov_fradkin,
    hamiltonian_nd,
    integrate_nd,
    radial_period,
    to_hyperspherical,
)

params = Params(lam=0.2)
state = CartesianState([0.6, -0.1, 0.3], [0.2, 0.5, -0.4])
E = hamiltonian_nd(params, state)
L2 = to_hyperspherical(state)[2]
T = radial_period(params.replace(l=math.sqrt(L2)), E)
print("E =", E, " L^2 =", L2, " T =", T)
print("I_ij at t=0:\n", np.asarray(demkov_fradkin(params, state)))

t = np.linspace(0, 10 * T, 400)
for rel_tol in (1e-12, 1e-10, 1e-6, 1e-3):
    traj = integrate_nd(params, state, (0, 10 * T), IntegratorConfig(rel_tol=rel_tol, abs_tol=rel_tol * 1e-2), t_eval=t)
    rep = conservation_report(params, traj)
    print(f"rel_tol={rel_tol:.0e}  H {rep.h_drift:.1e}  L2 {rep.l2_drift:.1e}  "
          f"I {rep.fradkin_drift:.1e}  |Q+| {rep.q_mod_drift:.1e}  arg Q+ {rep.q_arg_drift:.1e}")
