import math

import numpy as np
import pytest

from dx3 import (
    CartesianState,
    DomainError,
    IntegratorConfig,
    Params,
    RegimeError,
    SingularityApproach,
    conservation_report,
    grid_minimize_potential,
    hamiltonian_nd,
    integrate_nd,
    integrate_radial,
    oracle_period,
    oracle_time_of_radius,
    potential_minimum,
    radial_period,
    time_of_radius_bounded,
    turning_points,
)
from dx3.oracle import golden_section, nd_gradient, oracle_turning_points, radial_gradient


def test_golden_section_quadratic():
    assert golden_section(lambda x: (x - 0.3) ** 2, -1.0, 2.0, 1e-10) == pytest.approx(0.3, abs=1e-9)


@pytest.mark.parametrize("lam", [0.0, 0.2, -0.2, 1.5])
def test_grid_minimum_matches_closed_form(lam):
    params = Params(lam=lam)
    r_num, v_num = grid_minimize_potential(params)
    r_cf, v_cf = potential_minimum(params)
    assert abs(r_num - r_cf) < 1e-9
    assert v_num == pytest.approx(v_cf, rel=1e-14)


@pytest.mark.parametrize("lam,E", [(0.0, 2.0), (0.2, 2.0), (-0.2, 2.0), (0.2, 3.0)])
def test_oracle_turning_points(lam, E):
    params = Params(lam=lam)
    got = oracle_turning_points(params, E)
    want = turning_points(params, E)
    assert got[0] == pytest.approx(want[0], rel=1e-12)
    assert got[1] == pytest.approx(want[1], rel=1e-12)


def test_radial_gradient_matches_differences(pos):
    r, p, h = 1.2, 0.4, 1e-6
    dr, dp = radial_gradient(pos, r, p)
    from dx3 import radial_hamiltonian as H
    assert dr == pytest.approx((H(pos, (r + h, p)) - H(pos, (r - h, p))) / (2 * h), rel=1e-8)
    assert dp == pytest.approx((H(pos, (r, p + h)) - H(pos, (r, p - h))) / (2 * h), rel=1e-8)


def test_nd_gradient_matches_differences(neg):
    q = np.array([0.3, -0.2, 0.5])
    p = np.array([0.1, 0.4, -0.3])
    dq, dp = nd_gradient(neg, q, p)
    h = 1e-6
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        fd_q = (hamiltonian_nd(neg, CartesianState(q + e, p)) - hamiltonian_nd(neg, CartesianState(q - e, p))) / (2 * h)
        fd_p = (hamiltonian_nd(neg, CartesianState(q, p + e)) - hamiltonian_nd(neg, CartesianState(q, p - e))) / (2 * h)
        assert dq[i] == pytest.approx(fd_q, rel=1e-7, abs=1e-10)
        assert dp[i] == pytest.approx(fd_p, rel=1e-7, abs=1e-10)


def test_radial_flow_conserves(pos):
    T = radial_period(pos, 2.0)
    r_hi = turning_points(pos, 2.0)[1]
    traj = integrate_radial(pos, (r_hi, 0.0), (0.0, 3 * T), t_eval=np.linspace(0, 3 * T, 300))
    rep = conservation_report(pos, traj)
    assert rep.h_drift < 1e-9
    assert rep.q_mod_drift < 1e-8
    assert rep.q_arg_drift < 1e-7


def test_zero_span(pos):
    traj = integrate_radial(pos, (1.0, 0.3), (2.0, 2.0))
    assert len(traj) == 1 and traj[0].r == 1.0


def test_oracle_period(unit, pos):
    m = oracle_period(unit, 2.0)
    assert not m.analytic
    assert m.period == pytest.approx(math.pi, abs=1e-7)
    assert oracle_period(pos, 2.0).period == pytest.approx(radial_period(pos, 2.0), rel=1e-9)
    assert oracle_period(unit, 1.0).analytic
    with pytest.raises(RegimeError):
        oracle_period(pos, 3.0)


def test_oracle_time_of_radius(pos):
    lo, hi = turning_points(pos, 2.0)
    radii = np.linspace(lo, hi, 12)
    got = oracle_time_of_radius(pos, 2.0, radii)
    want = time_of_radius_bounded(pos, 2.0, 0.0, radii)
    assert np.max(np.abs(got - want)) < 1e-8
    with pytest.raises(DomainError):
        oracle_time_of_radius(pos, 2.0, [hi * 1.5])


def test_singularity_guard(neg):
    r_s = math.sqrt(5)
    with pytest.raises(SingularityApproach):
        integrate_radial(neg, (r_s * (1 - 1e-9), 0.0), (0.0, 1.0))


def test_integrator_config_validation():
    with pytest.raises(DomainError):
        IntegratorConfig(rel_tol=0.0)
    assert IntegratorConfig().guard(Params(lam=-0.25)) == pytest.approx(2e-6)


def test_nd_conservation_and_trace():
    params = Params(lam=0.2)
    state = CartesianState([0.6, -0.1, 0.3], [0.2, 0.5, -0.4])
    t = np.linspace(0, 60, 200)
    traj = integrate_nd(params, state, (0, 60), t_eval=t)
    rep = conservation_report(params, traj)
    assert max(rep.h_drift, rep.l2_drift, rep.fradkin_drift, rep.q_mod_drift) < 1e-8
    radial = traj.radial()
    assert radial.r.shape == t.shape


def test_loose_tolerance_is_detected():
    params = Params(lam=0.2)
    state = CartesianState([0.6, -0.1, 0.3], [0.2, 0.5, -0.4])
    traj = integrate_nd(params, state, (0, 60), IntegratorConfig(rel_tol=1e-3, abs_tol=1e-6),
                        t_eval=np.linspace(0, 60, 200))
    assert conservation_report(params, traj).worst() > 1e-8
