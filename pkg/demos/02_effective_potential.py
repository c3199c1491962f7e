"""
Effective potential across deformations
=======================================

lam > 0 flattens the potential and lets orbits escape above E = m w^2 / 2 lam;
lam < 0 squeezes everything inside the ball r < 1/sqrt(|lam|).
"""
import numpy as np

from dx3 import Params, classify_energy, effective_potential, potential_minimum, singular_radius

r = np.linspace(0.3, 4.0, 8)

for lam in (0.0, 0.05, 0.1, 0.2, 0.5):
    params = Params(lam=lam)
    r_min, v_min = potential_minimum(params)
    print(f"lam={lam:<5} r_min={r_min:.6f} V_min={v_min:.6f} escape at E={params.energy_threshold:.3g}")
    print("   V_eff:", np.round(effective_potential(params, r), 4))

###############################################################################
# The same energy in different regimes

for lam in (0.0, 0.2, 0.5):
    print(lam, classify_energy(Params(lam=lam), 2.0))

###############################################################################
# Negative lam: the potential blows up at the singular radius

neg = Params(lam=-0.2)
r_s = singular_radius(neg)
approach = r_s * (1 - np.logspace(-1, -8, 8))
print("r_s =", r_s)
print(np.c_[approach, effective_potential(neg, approach)])
