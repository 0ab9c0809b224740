"""Bargmann triangles and the closed-form orbit metric/symplectic coefficients."""

import numpy as np
import pytest

from majorana import (DegenerateTriangleError, InputError, SpinState, bargmann,
                      coherent_state, fidelity, number_orbit_state,
                      orbit_form_closed, orbit_form_numeric, orbit_form_richardson,
                      state_to_constellation)
from majorana.lieb_solovej import sample_fubini_study, su2_rotation


def test_closed_form_values():
    for n in (1, 2, 5):
        assert orbit_form_closed(n, 0) == (n / 4, n / 4)  # coherent orbit: both agree
    assert orbit_form_closed(1, 0) == (0.25, 0.25)        # Bloch sphere of radius 1/2
    for n in (2, 4, 6):
        _, w = orbit_form_closed(n, n // 2)
        assert w == 0.0                                   # balanced piles: form vanishes
    assert orbit_form_closed(4, 1) == (2.5, 0.5)


def test_number_orbit_state_special_points():
    for n, k in [(3, 1), (5, 2)]:
        assert fidelity(number_orbit_state(n, k, 0.0), SpinState.number_state(n, k)) > 1 - 1e-14
    z = 0.4 - 0.9j
    assert fidelity(number_orbit_state(4, 0, z), coherent_state(z, 4)) > 1 - 1e-12
    c = state_to_constellation(number_orbit_state(2, 1, 1.0))
    thetas = sorted(s.theta for s in c.stars)
    phis = sorted(s.phi for s in c.stars)
    assert np.abs(np.array(thetas) - np.pi / 2).max() < 1e-10
    assert abs(phis[0] - 0) < 1e-10 and abs(phis[1] - np.pi) < 1e-10
    assert fidelity(number_orbit_state(3, 1, complex("inf")),
                    SpinState.number_state(3, 2)) > 1 - 1e-14


def test_bargmann_degenerate_and_symmetries():
    psi = sample_fubini_study(3, seed=41)
    tri = bargmann(psi, psi, psi)
    assert max(tri.d01, tri.d12, tri.d20) < 1e-7
    assert abs(tri.area_phase) < 1e-12
    a = number_orbit_state(3, 1, 0.0)
    b = number_orbit_state(3, 1, 0.05)
    c = number_orbit_state(3, 1, 0.05j)
    t_abc = bargmann(a, b, c)
    t_bca = bargmann(b, c, a)
    t_acb = bargmann(a, c, b)
    assert abs(t_abc.area_phase - t_bca.area_phase) < 1e-13   # cyclic invariance
    assert abs(t_abc.area_phase + t_acb.area_phase) < 1e-13   # swap flips the sign
    with pytest.raises(DegenerateTriangleError):
        bargmann(SpinState.number_state(2, 0), SpinState.number_state(2, 2),
                 SpinState.number_state(2, 1))


def test_small_triangle_phase_matches_symplectic_coefficient():
    # coherent triangle at 0, delta, i delta on one star: phase = 4 w delta^2
    delta = 1e-3
    tri = bargmann(coherent_state(0.0, 1), coherent_state(delta, 1),
                   coherent_state(1j * delta, 1))
    assert abs(tri.area_phase - delta**2) / delta**2 < 1e-2  # w = 1/4 at n=1, k=0


def test_numeric_matches_closed_form():
    for n in range(1, 6):
        for k in range(n + 1):
            g_c, w_c = orbit_form_closed(n, k)
            g_r, w_r = orbit_form_richardson(n, k, 1e-3)
            assert abs(g_r - g_c) / g_c < 1e-6
            if w_c != 0.0:
                assert abs(w_r - w_c) / abs(w_c) < 1e-6


def test_symplectic_zero_cases_are_exact():
    for n, k in [(2, 1), (4, 2), (6, 3)]:
        _, w_est = orbit_form_numeric(n, k, 1e-3)
        assert abs(w_est) < 1e-9


def test_convergence_is_at_least_linear():
    g_c, w_c = orbit_form_closed(4, 1)
    errors = []
    for delta in (1e-2, 1e-3, 1e-4):
        g_e, w_e = orbit_form_numeric(4, 1, delta)
        errors.append(max(abs(g_e - g_c), abs(w_e - w_c)))
    assert errors[1] < errors[0] / 5
    assert errors[2] < errors[1] / 5


def test_sign_convention_tracks_pile_imbalance():
    for n in (3, 4, 5):
        for k in range(n + 1):
            if 2 * k == n:
                continue
            _, w_est = orbit_form_numeric(n, k, 1e-3)
            _, w_c = orbit_form_closed(n, k)
            assert np.sign(w_est) == np.sign(w_c) == np.sign(n - 2 * k)


def test_edge_lengths_are_rotation_invariant(rng):
    a = number_orbit_state(4, 1, 0.1 + 0.2j)
    b = number_orbit_state(4, 1, -0.3 + 0.05j)
    c = number_orbit_state(4, 1, 0.02 - 0.4j)
    ref = bargmann(a, b, c)
    axis = rng.normal(size=3)
    u = su2_rotation(4, axis, 1.234)
    rot = bargmann(SpinState(u @ a.amps), SpinState(u @ b.amps), SpinState(u @ c.amps))
    assert abs(ref.d01 - rot.d01) < 1e-10
    assert abs(ref.d12 - rot.d12) < 1e-10
    assert abs(ref.d20 - rot.d20) < 1e-10
    assert abs(ref.area_phase - rot.area_phase) < 1e-10


def test_delta_validation():
    with pytest.raises(InputError):
        orbit_form_numeric(3, 1, 0.5)
    with pytest.raises(InputError):
        orbit_form_numeric(3, 1, 0.0)
    with pytest.raises(InputError):
        orbit_form_closed(3, 4)
