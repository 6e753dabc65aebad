import math

import numpy as np
import pytest

from exceptions.sim_exceptions import DomainException, NumericException
from schemas.contact import ContactMode, ContactParams, ContactState
from services.contact import (
    critical_damping,
    latch_sinkage,
    quasi_static_penetration,
    reported_sinkage,
    step_vertical_ode,
    stiffness,
    update_contact,
)
from services.model import sinkage

M_WHEEL = 21.63 / 4.0
G = 1.62
DT = 1.0 / 30.0


def test_stiffness(contact_params):
    assert stiffness(8.72, -9.822, 0.01, 1, contact_params) == pytest.approx(439.92, rel=1e-4)
    assert stiffness(8.72, -9.822, 0.01, 2, contact_params) == pytest.approx(219.96, rel=1e-4)


def test_stiffness_floors(contact_params):
    assert stiffness(0.0, -0.0001, 0.0, 1, contact_params) == pytest.approx(500.0)


@pytest.mark.parametrize("k, m, expected", [(439.92, 5.4075, 97.55), (1.0, 0.25, 1.0), (100.0, 1.0, 20.0)])
def test_critical_damping(k, m, expected):
    assert critical_damping(k, m) == pytest.approx(expected, abs=0.01)


def test_critical_damping_domain():
    with pytest.raises(DomainException):
        critical_damping(0.0, 1.0)


def test_quasi_static_penetration():
    k = 8.72 / 0.019822
    assert quasi_static_penetration(8.72, k) == pytest.approx(0.019822)
    assert reported_sinkage(quasi_static_penetration(8.72, k), 0.01) == pytest.approx(-9.822)
    assert quasi_static_penetration(0.0, k) == 0.0
    assert quasi_static_penetration(2.0 * k, k) == pytest.approx(2.0)


def test_quasi_static_round_trip(sinkage_params, geom):
    rng = np.random.default_rng(11)
    for N in (1, 2, 4):
        params = ContactParams(N=N)
        for s, F_z in zip(rng.uniform(0.0, 1.0, 200), rng.uniform(0.5, 20.0, 200)):
            target = sinkage(s, F_z, sinkage_params)
            state = update_contact(F_z, s, 0.5, geom, sinkage_params, params, ContactState(), M_WHEEL, G, DT)
            assert reported_sinkage(state.p, geom.h) == pytest.approx(target, abs=1e-9)


def test_ode_equilibrium_is_fixed_point():
    k = 439.92
    p_eq = M_WHEEL * G / k
    state = ContactState(k=k, c=critical_damping(k, M_WHEEL), z_body=-p_eq, p=p_eq)
    for _ in range(30):
        state = step_vertical_ode(state, M_WHEEL, G, DT)
    assert state.p == pytest.approx(p_eq, abs=1e-9)
    assert state.zdot == pytest.approx(0.0, abs=1e-9)


def test_ode_critically_damped_drop():
    k = 439.92
    c = critical_damping(k, M_WHEEL)
    p_eq = M_WHEEL * G / k
    tau = 2.0 * M_WHEEL / c
    state = ContactState(k=k, c=c)

    penetrations, velocities = [], []
    for _ in range(math.ceil(6.0 * tau / DT)):
        state = step_vertical_ode(state, M_WHEEL, G, DT)
        penetrations.append(state.p)
        velocities.append(state.zdot)

    assert max(penetrations) <= p_eq * 1.05
    assert penetrations[-1] >= 0.98 * p_eq
    signs = np.sign([v for v in velocities if abs(v) > 1e-12])
    assert np.count_nonzero(np.diff(signs)) <= 1


def test_ode_rigid_contact():
    k = 1.0e9
    state = ContactState(k=k, c=critical_damping(k, 5.4))
    for _ in range(30):
        state = step_vertical_ode(state, 5.4, G, DT)
    assert state.p == pytest.approx(5.4 * G / k, rel=1e-3)


def test_ode_without_damping_never_gains_energy():
    k, m = 100.0, 1.0
    state = ContactState(k=k, c=0.0, z_body=-0.05)

    def energy(st: ContactState) -> float:
        return 0.5 * m * st.zdot**2 + 0.5 * k * max(0.0, -st.z_body) ** 2

    previous = energy(state)
    for _ in range(120):
        state = step_vertical_ode(state, m, 0.0, DT)
        current = energy(state)
        assert current <= previous + 1e-12
        previous = current


def test_ode_rejects_non_finite_state():
    with pytest.raises(NumericException):
        step_vertical_ode(ContactState(k=100.0, z_body=float("nan")), 1.0, G, DT)


def test_ode_rejects_bad_timestep():
    with pytest.raises(DomainException):
        step_vertical_ode(ContactState(), 1.0, G, 0.0)


@pytest.mark.parametrize(
    "z_prev, z_new, v, expected",
    [
        (-12.0, -4.0, 0.05, -12.0),
        (-12.0, -4.0, 0.5, -4.0),
        (-4.0, -12.0, 0.05, -12.0),
        (None, 1.5355, 0.0, 1.5355),
    ],
)
def test_latch_sinkage(z_prev, z_new, v, expected):
    assert latch_sinkage(z_prev, z_new, v, 0.1) == expected


def test_update_contact_steady_roll(sinkage_params, contact_params, geom):
    state = update_contact(8.72, 0.0566, 1.1, geom, sinkage_params, contact_params, ContactState(), M_WHEEL, G, DT)
    assert reported_sinkage(state.p, geom.h) == pytest.approx(sinkage(0.0566, 8.72, sinkage_params), abs=1e-6)
    assert reported_sinkage(state.p, geom.h) == pytest.approx(-5.009496, abs=1e-6)
    assert state.c == pytest.approx(critical_damping(state.k, M_WHEEL))


def test_update_contact_keeps_latched_sinkage_at_rest(sinkage_params, contact_params, geom):
    previous = ContactState(z_latched=-15.0)
    state = update_contact(8.72, 0.0, 0.0, geom, sinkage_params, contact_params, previous, M_WHEEL, G, DT)
    assert state.z_latched == -15.0
    assert reported_sinkage(state.p, geom.h) == pytest.approx(-15.0)


def test_update_contact_load_response(sinkage_params, contact_params, geom):
    light = update_contact(8.72, 0.2, 1.0, geom, sinkage_params, contact_params, ContactState(), M_WHEEL, G, DT)
    heavy = update_contact(17.44, 0.2, 1.0, geom, sinkage_params, contact_params, ContactState(), M_WHEEL, G, DT)
    delta = reported_sinkage(heavy.p, geom.h) - reported_sinkage(light.p, geom.h)
    assert delta == pytest.approx(sinkage_params.c_F * 8.72)


def test_update_contact_uses_stiffness_override(sinkage_params, contact_params, geom):
    previous = ContactState(z_latched=-7.0)
    state = update_contact(
        8.72, 0.2, 1.0, geom, sinkage_params, contact_params, previous, M_WHEEL, G, DT, k_override=1.0e9
    )
    assert state.k == 1.0e9
    assert state.z_latched == -7.0
    assert state.p == pytest.approx(8.72e-9)


def test_update_contact_ode_converges_to_target(sinkage_params, geom):
    params = ContactParams(mode=ContactMode.ode)
    state = ContactState()
    for _ in range(300):
        state = update_contact(8.72, 0.2, 1.0, geom, sinkage_params, params, state, M_WHEEL, G, DT)
    assert reported_sinkage(state.p, geom.h) == pytest.approx(-9.822, abs=1e-3)


def test_update_contact_rejects_non_finite_input(sinkage_params, contact_params, geom):
    with pytest.raises(NumericException):
        update_contact(float("inf"), 0.2, 1.0, geom, sinkage_params, contact_params, ContactState(), M_WHEEL, G, DT)
