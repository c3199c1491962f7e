"""
The flat isotropic oscillator (lam = 0)
=======================================

Radial motion at m = w = l = 1, E = 2 swings between r^2 = 2 -+ sqrt(3) with
period pi; the ladder functions turn that into a uniform rotation of a
complex constant.
"""
import math

import numpy as np

from dx3 import Params, euclid_trajectory, ladder, radial_period, time_dependent_constant, turning_points

params = Params()
E = 2.0

###############################################################################
# Turning points and period

r_lo, r_hi = turning_points(params, E)
print("turning points:", r_lo, r_hi)
print("period:", radial_period(params, E), "vs pi =", math.pi)

###############################################################################
# Sample one period of r(t), p(t)

t = np.linspace(0, math.pi, 9)
r, p = euclid_trajectory(params, E, 0.0, t)
for tk, rk, pk in zip(t, r, p):
    print(f"t={tk:6.3f}  r={rk:.6f}  p={pk:+.6f}")

###############################################################################
# A+ rotates at frequency 2w, so A+ e^{-2iwt} stays put

for tk, rk, pk in zip(t[:4], r[:4], p[:4]):
    a = ladder(params, (rk, pk)).a_plus
    Q = time_dependent_constant(params, E, (rk, pk), tk)
    print(f"A+ = {a:.6f}   Q+ = {Q:.6f}")
