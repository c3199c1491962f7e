import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dx3 import (
    DomainError,
    OffShell,
    Params,
    RegimeError,
    SGARegime,
    amplitude,
    ladder,
    ladder_deformed,
    ladder_euclidean,
    ladder_unbounded,
    momentum_on_shell,
    poisson_bracket,
    radial_hamiltonian,
    structure_functions,
    time_dependent_constant,
    turning_points,
)
from dx3.checks import bracket_errors
from dx3.sga import normalize_angle, sga_regime


def test_structure_functions_flat(unit):
    sf = structure_functions(unit, 2.0)
    assert sf.regime is SGARegime.EUCLIDEAN
    assert (sf.alpha, sf.beta, sf.gamma) == (2.0, 8.0, -4.0)


def test_structure_functions_bounded_matches_flat_formula_at_zero(unit):
    sf = structure_functions(unit, 2.0, SGARegime.BOUNDED)
    assert (sf.alpha, sf.beta, sf.gamma) == pytest.approx((2.0, 8.0, -4.0))


def test_structure_functions_regime_mismatch(pos):
    with pytest.raises(RegimeError):
        structure_functions(pos, 3.0, SGARegime.BOUNDED)
    with pytest.raises(RegimeError):
        structure_functions(pos, 2.5)


def test_unbounded_alpha_is_zeta(pos):
    # zeta = 2 (2 lam E/m - w^2)^{3/2} / (lam E/m - w^2) at E = 3: -2/sqrt(20)
    sf = structure_functions(pos, 3.0)
    assert sf.regime is SGARegime.UNBOUNDED
    assert sf.alpha == pytest.approx(-0.44721359549995865, rel=1e-14)


def test_ladder_conjugate_pair(pos):
    val = ladder_deformed(pos, (1.3, 0.7))
    assert val.a_minus == pytest.approx(val.a_plus.conjugate(), rel=1e-15)


def test_ladder_reduces_to_flat():
    state = (1.1, -0.6)
    flat = ladder_euclidean(Params(), state)
    tiny = ladder_deformed(Params(lam=1e-9), state)
    assert abs(tiny.a_plus - flat.a_plus) < 1e-7


def test_ladder_regime_guards(pos, unit):
    with pytest.raises(DomainError):
        ladder_euclidean(pos, (1.0, 0.5))
    state = (1.0, 3.0)
    assert radial_hamiltonian(pos, state) > 2.5
    with pytest.raises(RegimeError):
        ladder_deformed(pos, state)
    with pytest.raises(RegimeError):
        ladder_unbounded(unit, (1.0, 1.0))
    assert ladder(pos, state) == ladder_unbounded(pos, state)


@pytest.mark.parametrize(
    "lam,E,regime",
    [(0.0, 2.0, SGARegime.EUCLIDEAN), (0.2, 2.0, SGARegime.BOUNDED),
     (-0.2, 2.0, SGARegime.BOUNDED), (0.2, 3.0, SGARegime.UNBOUNDED)],
)
def test_brackets_close(lam, E, regime):
    params = Params(lam=lam)
    lo, hi = turning_points(params, E)
    hi = hi if math.isfinite(hi) else 4 * lo
    for r in np.linspace(lo, hi, 9)[1:-1]:
        p = momentum_on_shell(params, E, r)
        for sign in (1, -1):
            errs = bracket_errors(params, (r, sign * p), regime)
            assert max(errs[:2]) < 1e-6
            assert errs[2] < 1e-10


@settings(max_examples=40, deadline=None)
@given(
    r=st.floats(0.3, 2.0),
    p=st.floats(-1.5, 1.5),
    lam=st.sampled_from([0.0, 0.1, -0.1, 0.2]),
)
def test_factorization_everywhere(r, p, lam):
    params = Params(lam=lam, l=0.8)
    H = radial_hamiltonian(params, (r, p))
    try:
        sf = structure_functions(params, H)
    except RegimeError:
        return
    val = ladder(params, (r, p))
    lhs = val.a_plus * val.a_minus + sf.gamma
    assert abs(lhs + 0.64) <= 1e-10 * max(abs(sf.gamma), 0.64)


def test_poisson_bracket_canonical(unit):
    def r_fn(pr, s):
        return s[0]

    def p_fn(pr, s):
        return s[1]

    assert poisson_bracket(r_fn, p_fn, unit, (1.0, 0.3)) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        poisson_bracket(r_fn, p_fn, unit, (1e-7, 0.3))


def test_amplitude(unit, pos):
    assert amplitude(unit, 2.0) == pytest.approx(math.sqrt(3))
    assert amplitude(pos, 3.0) == pytest.approx(6.782329983125265, rel=1e-14)
    with pytest.raises(DomainError):
        amplitude(unit, 0.5)


def test_time_dependent_constant_flat(unit):
    # flat orbit at E = 2 starting at r_hi: Q+ = A+ with |A+| = q
    r_hi = turning_points(unit, 2.0)[1]
    Q = time_dependent_constant(unit, 2.0, (r_hi, 0.0), 0.0)
    assert abs(Q) == pytest.approx(math.sqrt(3), rel=1e-12)
    with pytest.raises(OffShell):
        time_dependent_constant(unit, 2.5, (r_hi, 0.0), 0.0)


def test_normalize_angle():
    assert normalize_angle(-math.pi) == math.pi
    assert normalize_angle(3 * math.pi) == pytest.approx(math.pi)
    assert normalize_angle(0.5) == 0.5
    assert sga_regime(Params(lam=0.2), 1.0) is SGARegime.BOUNDED
    assert cmath.isclose(cmath.exp(1j * normalize_angle(7.0)), cmath.exp(7j))
