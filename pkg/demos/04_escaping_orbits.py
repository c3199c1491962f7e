"""
Escaping orbits
===============

Above the threshold the motion is hyperbolic: r comes in to a periapsis
and leaves for good.  The closed-form t(r) is compared against direct
integration.
"""
import numpy as np

from dx3 import Params, orbit_geometry, oracle_time_of_radius, time_of_radius_unbounded, turning_points

params = Params(lam=0.2)
E = 3.0
geo = orbit_geometry(params, E)
print("a~^2 =", geo.a_sq, " eps~ =", geo.eps, " zeta =", geo.freq)

r_lo = turning_points(params, E)[0]
radii = np.linspace(r_lo, 8 * r_lo, 8)
closed = time_of_radius_unbounded(params, E, 0.0, radii)
numeric = oracle_time_of_radius(params, E, radii)
for r, a, b in zip(radii, closed, numeric):
    print(f"r={r:.4f}  closed={a:.10f}  integrated={b:.10f}  diff={a - b:+.1e}")

###############################################################################
# E = m w^2 / lam: zeta diverges but t(r) is perfectly regular

print(time_of_radius_unbounded(params, 5.0, 0.0, np.array([1.0, 2.0, 4.0])))
