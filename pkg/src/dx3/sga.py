"""
Spectrum generating algebra of the radial problem.

The Hamiltonian is factorised as A^+ A^- + gamma(H) = -l^2 with complex ladder
functions A^+-, which close the Poisson algebra

    {H, A^+-} = -+ i alpha(H) A^+-,     {A^+, A^-} = i beta(H).

Three regimes are distinguished by the sign of s^2 = w^2 - 2 lam H / m:

* EUCLIDEAN  (lam == 0):  alpha = 2w, beta = 4H/w, gamma = -H^2/w^2
* BOUNDED    (s^2 > 0):   deformed ladder with a unimodular phase factor e^{+-f}
* UNBOUNDED  (s^2 < 0):   hyperbolic ladder; alpha, beta become purely imaginary

In the unbounded regime ``StructureFunctions.alpha`` and ``.beta`` hold the
*imaginary parts* of the purely imaginary structure functions, i.e. the
algebra reads {H, A^+-} = +- alpha A^+- and {A^+, A^-} = -beta.  This alpha
coincides with the hyperbolic frequency zeta(E) used by the solutions module.

Complex numbers are Python ``complex``; phases are normalised to (-pi, pi].
"""
import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError, OffShell, RegimeError
from .model import radial_hamiltonian, singular_radius


class SGARegime(enum.Enum):
    EUCLIDEAN = "Euclidean"
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class StructureFunctions:
    alpha: float
    beta: float
    gamma: float
    regime: SGARegime


@dataclass(frozen=True)
class LadderValue:
    """A^+ and A^- at one phase-space point.

    ``f_phase`` is the exponent of the phase factor: f = i * f_phase in the
    bounded regimes (so |e^f| = 1) and the real hyperbolic exponent in the
    unbounded regime.
    """

    a_plus: complex
    a_minus: complex
    f_phase: float


def normalize_angle(x):
    """Map an angle into (-pi, pi]."""
    y = math.remainder(x, 2 * math.pi)
    return math.pi if y <= -math.pi else y


def phase(z):
    return normalize_angle(cmath.phase(z))


def shape_factor(params, H):
    """s^2 = w^2 - 2 lam H / m; its sign selects the bounded/unbounded branch."""
    return params.omega**2 - 2 * params.lam * H / params.m


def sga_regime(params, E):
    if params.lam == 0:
        return SGARegime.EUCLIDEAN
    s2 = shape_factor(params, E)
    if s2 > 0:
        return SGARegime.BOUNDED
    if s2 < 0:
        return SGARegime.UNBOUNDED
    raise RegimeError(f"E = {E} sits exactly on the escape threshold; the algebra degenerates")


def ladder_euclidean(params, state):
    if params.lam != 0:
        raise DomainError("ladder_euclidean requires lam = 0")
    r, p = state
    H = radial_hamiltonian(params, state)
    base = params.m * params.omega * r * r - H / params.omega
    return LadderValue(complex(base, -r * p), complex(base, r * p), 0.0)


def ladder_deformed(params, state):
    r, p = state
    m, w, lam = params.m, params.omega, params.lam
    H = radial_hamiltonian(params, state)
    s2 = shape_factor(params, H)
    if s2 <= 0:
        raise RegimeError(f"bounded ladder needs w^2 - 2 lam H/m > 0, got {s2}")
    s = math.sqrt(s2)
    base = m * r * r * s - H / s
    f_phase = -lam * r * p * s / (m * (w * w - lam * H / m))
    rot = cmath.exp(1j * f_phase)
    return LadderValue(complex(base, -r * p) * rot, complex(base, r * p) / rot, f_phase)


def ladder_unbounded(params, state):
    r, p = state
    m, w, lam = params.m, params.omega, params.lam
    if lam <= 0:
        raise RegimeError("unbounded ladder requires lam > 0")
    H = radial_hamiltonian(params, state)
    s2 = -shape_factor(params, H)
    if s2 <= 0:
        raise RegimeError(f"unbounded ladder needs 2 lam H/m - w^2 > 0, got {s2}")
    s = math.sqrt(s2)
    base = m * r * r * s + H / s
    expo = lam * r * p * s / (m * (w * w - lam * H / m))
    return LadderValue(
        1j * (base - r * p) * math.exp(expo),
        1j * (base + r * p) * math.exp(-expo),
        expo,
    )


def ladder(params, state):
    """Ladder functions for whichever regime the state's own energy falls in."""
    regime = sga_regime(params, radial_hamiltonian(params, state))
    if regime is SGARegime.EUCLIDEAN:
        return ladder_euclidean(params, state)
    if regime is SGARegime.BOUNDED:
        return ladder_deformed(params, state)
    return ladder_unbounded(params, state)


def structure_functions(params, E, regime=None):
    m, w, lam = params.m, params.omega, params.lam
    actual = sga_regime(params, E)
    if regime is None:
        regime = actual
    regime = SGARegime(regime)
    # lam = 0 is also a legitimate (flat) instance of the bounded formulas
    if regime is not actual and not (regime is SGARegime.BOUNDED and actual is SGARegime.EUCLIDEAN):
        raise RegimeError(f"E = {E} with lam = {lam} is {actual}, not {regime}")
    if regime is SGARegime.EUCLIDEAN:
        return StructureFunctions(2 * w, 4 * E / w, -E * E / (w * w), regime)
    s2 = shape_factor(params, E)
    c = w * w - lam * E / m
    if regime is SGARegime.BOUNDED:
        s = math.sqrt(s2)
        return StructureFunctions(2 * s2 * s / c, 4 * E / s, -E * E / s2, regime)
    s = math.sqrt(-s2)
    return StructureFunctions(-2 * s * s * s / c, -4 * E / s, E * E / -s2, regime)


def poisson_bracket(fn_a, fn_b, params, state, step=None):
    """{a, b} = da/dr db/dp - da/dp db/dr by central differences.

    ``fn_a`` and ``fn_b`` are called as fn(params, RadialState) and may return
    real or complex values.  The default step is 1e-6 * (1 + |x|) per coordinate.
    """
    r, p = state
    hr = step if step is not None else 1e-6 * (1 + abs(r))
    hp = step if step is not None else 1e-6 * (1 + abs(p))
    if r - hr <= 0:
        raise DomainError("finite-difference stencil crosses r = 0")
    r_s = singular_radius(params)
    if r_s is not None and r < r_s <= r + hr:
        raise DomainError("finite-difference stencil crosses the singular radius")

    def d(fn):
        dr = (fn(params, (r + hr, p)) - fn(params, (r - hr, p))) / (2 * hr)
        dp = (fn(params, (r, p + hp)) - fn(params, (r, p - hp))) / (2 * hp)
        return dr, dp

    ar, ap = d(fn_a)
    br, bp = d(fn_b)
    return complex(ar * bp - ap * br)


def amplitude(params, E, regime=None):
    """Modulus q (bounded, Euclidean) or q~ (unbounded) of the constants of motion."""
    regime = sga_regime(params, E) if regime is None else SGARegime(regime)
    l2 = params.l**2
    s2 = shape_factor(params, E)
    if regime is SGARegime.UNBOUNDED:
        if s2 >= 0:
            raise RegimeError(f"E = {E} is not in the unbounded regime")
        return math.sqrt(l2 + E * E / -s2)
    if s2 <= 0:
        raise RegimeError(f"E = {E} is not in a bounded regime")
    val = -l2 + E * E / s2
    if val < 0:
        if val < -1e-12 * max(1.0, l2):
            raise DomainError(f"E = {E} is below the minimum of the effective potential")
        val = 0.0
    return math.sqrt(val)


def time_dependent_constant(params, E, state, t, tol=1e-9):
    """Q^+ = A^+(state) exp(-i alpha(E) t), constant along true trajectories.

    Unbounded energies are also accepted; there alpha is imaginary and the
    factor becomes the real exponential exp(alpha_im * t).
    """
    H = radial_hamiltonian(params, state)
    if abs(H - E) > tol * max(1.0, abs(E)):
        raise OffShell(f"H(state) = {H} differs from E = {E}")
    sf = structure_functions(params, E)
    if sf.regime is SGARegime.UNBOUNDED:
        return ladder_unbounded(params, state).a_plus * math.exp(sf.alpha * t)
    a_plus = ladder(params, state).a_plus
    return a_plus * cmath.exp(-1j * sf.alpha * t)
