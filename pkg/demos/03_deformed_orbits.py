"""
Bounded deformed orbits
=======================

For lam = 0.2, E = 2 the closed form gives t(r); inverting it yields r(t).
The orbit keeps a single frequency Omega, but the time spent near r_hi
stretches as lam grows.
"""
import numpy as np

from dx3 import Params, invert_time, orbit_geometry, radial_period, time_of_radius_bounded, turning_points

params = Params(lam=0.2)
E = 2.0
geo = orbit_geometry(params, E)
print("a^2 =", geo.a_sq, " eps =", geo.eps, " Omega =", geo.freq, " q =", geo.amplitude)
T = radial_period(params, E)
print("period T =", T)

r_lo, r_hi = turning_points(params, E)
radii = np.linspace(r_lo, r_hi, 6)
print("inward leg t(r):", time_of_radius_bounded(params, E, 0.0, radii))
print("outward leg t(r):", time_of_radius_bounded(params, E, 0.0, radii, branch="out"))

###############################################################################
# r(t) over one period: most of the time is spent far out

t = np.linspace(0, T, 11)
r, p = invert_time(params, E, 0.0, t)
for tk, rk, pk in zip(t, r, p):
    print(f"{tk:8.3f} {rk:9.5f} {pk:+9.5f}")

###############################################################################
# lam < 0: the orbit is squeezed and faster

neg = Params(lam=-0.2)
print("lam=-0.2:", turning_points(neg, E), "T =", radial_period(neg, E))
