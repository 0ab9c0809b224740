"""Geometry of rotation orbits through two-pile star configurations.

A state with n-k stars at one point and k at the antipode sweeps out a
two-dimensional orbit under rotations.  Its intrinsic metric and symplectic
form are both multiples of the round unit-sphere metric; the closed-form
coefficients are compared against a numeric limit built from the Bargmann
invariant of a small geodesic triangle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangleError, InputError
from .states import Constellation, SpinState, Star, constellation_to_state, overlap

# Overlap magnitudes below this leave the triangle phase undefined.
_OVERLAP_FLOOR = 1e-15


@dataclass(frozen=True)
class TriangleData:
    """Geodesic edge lengths and symplectic area phase of a state triangle."""

    d01: float
    d12: float
    d20: float
    area_phase: float  # principal value in (-pi, pi]


def number_orbit_state(n: int, k: int, z1) -> SpinState:
    """Normalized state with n-k stars at z1 and k stars at its antipode."""
    if not 0 <= k <= n:
        raise InputError(f"pile split k={k} outside 0..{n}")
    if z1 is None or not np.isfinite(abs(complex(z1))):
        big, small = Star(np.pi, 0.0), Star(0.0, 0.0)
    else:
        big = Star.from_root(complex(z1))
        small = big.antipode()
    return constellation_to_state(Constellation([big] * (n - k) + [small] * k))


def bargmann(psi0: SpinState, psi1: SpinState, psi2: SpinState) -> TriangleData:
    """Decompose <0|1><1|2><2|0> into cos(edge) factors and the area phase."""
    o01 = overlap(psi0, psi1)
    o12 = overlap(psi1, psi2)
    o20 = overlap(psi2, psi0)
    for o in (o01, o12, o20):
        if abs(o) < _OVERLAP_FLOOR:
            raise DegenerateTriangleError("vanishing overlap, triangle undefined")
    edges = [float(np.arccos(min(1.0, abs(o)))) for o in (o01, o12, o20)]
    return TriangleData(*edges, area_phase=float(np.angle(o01 * o12 * o20)))


def orbit_form_closed(n: int, k: int):
    """Coefficients (metric, symplectic) multiplying the round-sphere forms."""
    if not 0 <= k <= n:
        raise InputError(f"pile split k={k} outside 0..{n}")
    return (n + 2 * k * (n - k)) / 4.0, (n - 2 * k) / 4.0


def orbit_form_numeric(n: int, k: int, delta: float = 1e-3):
    """Second-order numeric estimate of the orbit coefficients.

    Uses the triangle of orbit points at z1 = 0, delta, i delta, traversed
    in that order (the sign convention for positive symplectic area).  At
    z = 0 the metric gives edge^2 = 4 g delta^2 and the symplectic area of
    the coordinate triangle is 8 w delta^2 / 2.
    """
    if not 0.0 < delta <= 1e-2:
        raise InputError(f"delta {delta} outside (0, 1e-2]")
    psis = [number_orbit_state(n, k, z) for z in (0.0, delta, 1j * delta)]
    tri = bargmann(*psis)
    g_est = tri.d01**2 / (4.0 * delta**2)
    w_est = tri.area_phase / (4.0 * delta**2)
    return g_est, w_est


def orbit_form_richardson(n: int, k: int, delta: float = 1e-3):
    """Richardson extrapolation of the numeric estimate (O(delta^2) error model)."""
    g1, w1 = orbit_form_numeric(n, k, delta)
    g2, w2 = orbit_form_numeric(n, k, delta / 2)
    return (4 * g2 - g1) / 3.0, (4 * w2 - w1) / 3.0
