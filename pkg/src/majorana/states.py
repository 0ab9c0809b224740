"""Spin states and their star constellations.

A pure spin state with n stars lives in the (n+1)-dimensional space spanned
by the number states |n-k, k>, k = 0..n.  The same state is encoded by a
degree-n polynomial whose coefficient of zeta^(n-k) is (-1)^k sqrt(C(n,k))
times the k-th amplitude; its n roots, pushed onto the unit sphere by
inverse stereographic projection z = tan(theta/2) e^(i phi), are the stars.
Roots at infinity (degree deficiency) are stars at the South Pole and are
kept explicitly, so a constellation always carries exactly n stars.

Conversion runs exactly in both directions: multiplying out root factors
gives the amplitudes, companion-matrix root finding recovers the stars.
Everything here is a pure function of immutable values.
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from math import lgamma

import numpy as np

from .errors import DimensionMismatchError, InputError, ZeroStateError

# A colatitude this close to pi is treated as the South Pole (root at infinity).
SOUTH_POLE_EPS = 1e-12

# Leading polynomial coefficients below this fraction of the largest one are
# treated as exact zeros (roots at infinity).
DEGREE_DEFICIENCY_RTOL = 1e-12


@lru_cache(maxsize=None)
def sqrt_binomials(n: int) -> np.ndarray:
    """sqrt(C(n,k)) for k = 0..n, computed through log-gammas."""
    k = np.arange(n + 1)
    lg = np.array([lgamma(i + 1) for i in range(n + 1)])
    out = np.exp(0.5 * (lg[n] - lg[k] - lg[n - k]))
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Star:
    """A point on the unit sphere: colatitude theta in [0, pi], longitude phi."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi + 1e-12):
            raise InputError(f"colatitude {self.theta} outside [0, pi]")
        object.__setattr__(self, "theta", float(min(self.theta, np.pi)))
        object.__setattr__(self, "phi", float(self.phi % (2 * np.pi)))

    @property
    def at_south_pole(self) -> bool:
        return self.theta > np.pi - SOUTH_POLE_EPS

    def root(self) -> complex:
        """Stereographic coordinate tan(theta/2) e^(i phi); infinite at the South Pole."""
        if self.at_south_pole:
            return complex("inf")
        return np.tan(self.theta / 2) * np.exp(1j * self.phi)

    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    def antipode(self) -> "Star":
        return Star(np.pi - self.theta, self.phi + np.pi)

    @staticmethod
    def from_root(z: complex) -> "Star":
        if z == complex("inf") or not np.isfinite(abs(z)):
            return Star(np.pi, 0.0)
        return Star(2 * np.arctan(abs(z)), np.angle(z) if z != 0 else 0.0)

    @staticmethod
    def from_unit_vector(v) -> "Star":
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return Star(np.arccos(np.clip(v[2], -1.0, 1.0)), np.arctan2(v[1], v[0]))


class Constellation:
    """An unordered multiset of n stars; coincident stars stay repeated."""

    def __init__(self, stars):
        self.stars = tuple(s if isinstance(s, Star) else Star(*s) for s in stars)
        self.n = len(self.stars)

    def __iter__(self):
        return iter(self.stars)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Constellation(n={self.n})"

    def unit_vectors(self) -> np.ndarray:
        """(n, 3) array of Cartesian star positions."""
        return np.array([s.unit_vector() for s in self.stars]).reshape(self.n, 3)

    def antipodal(self) -> "Constellation":
        return Constellation([s.antipode() for s in self.stars])

    def rotated(self, matrix) -> "Constellation":
        return Constellation([Star.from_unit_vector(np.asarray(matrix) @ s.unit_vector())
                              for s in self.stars])

    def to_dict(self) -> dict:
        return {"n": self.n,
                "stars": [{"theta": s.theta, "phi": s.phi} for s in self.stars]}

    @staticmethod
    def from_dict(d) -> "Constellation":
        stars = [Star(s["theta"], s["phi"]) for s in d["stars"]]
        if d.get("n", len(stars)) != len(stars):
            raise InputError("star count does not match declared n")
        return Constellation(stars)


class SpinState:
    """Amplitude vector psi_k, k = 0..n, in the number basis |n-k, k>."""

    def __init__(self, amps):
        amps = np.asarray(amps, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise InputError("amplitudes must be a nonempty vector")
        self.amps = amps.copy()
        self.amps.flags.writeable = False
        self.n = amps.size - 1

    def __repr__(self):
        return f"SpinState(n={self.n})"

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def require_normalized(self, tol: float = 1e-12):
        if abs(self.norm - 1.0) > tol:
            raise InputError(f"state not normalized: |psi| = {self.norm}")
        return self

    def normalized(self) -> "SpinState":
        nrm = self.norm
        if nrm == 0.0:
            raise ZeroStateError("cannot normalize the zero vector")
        return SpinState(self.amps / nrm)

    def phase_fixed(self) -> "SpinState":
        """Global phase chosen so the first nonzero amplitude is real positive."""
        idx = np.flatnonzero(np.abs(self.amps) > 1e-12)
        if idx.size == 0:
            raise ZeroStateError("all amplitudes vanish")
        return SpinState(self.amps * np.exp(-1j * np.angle(self.amps[idx[0]])))

    def to_dict(self) -> dict:
        return {"n": self.n, "amps": [[z.real, z.imag] for z in self.amps]}

    @staticmethod
    def from_dict(d) -> "SpinState":
        amps = np.array([complex(re, im) for re, im in d["amps"]])
        if d.get("n", amps.size - 1) != amps.size - 1:
            raise InputError("amplitude count does not match declared n")
        return SpinState(amps)

    @staticmethod
    def number_state(n: int, k: int) -> "SpinState":
        if not 0 <= k <= n:
            raise InputError(f"number state index k={k} outside 0..{n}")
        amps = np.zeros(n + 1, dtype=complex)
        amps[k] = 1.0
        return SpinState(amps)


@dataclass(frozen=True)
class PolygonSpec:
    """Stars piled at the poles plus regular polygons on latitude circles.

    rings is a sequence of (count, latitude, twist); ring r of count k at
    colatitude theta places stars at longitudes twist + 2 pi j / k.
    """

    k_north: int
    rings: tuple
    k_south: int

    def __post_init__(self):
        rings = tuple((int(c), float(t), float(a)) for c, t, a in self.rings)
        object.__setattr__(self, "rings", rings)
        if self.k_north < 0 or self.k_south < 0:
            raise InputError("pole star counts must be nonnegative")
        for count, theta, _ in rings:
            if count < 1:
                raise InputError("each ring needs at least one star")
            if not 0.0 < theta < np.pi:
                raise InputError(f"ring latitude {theta} outside (0, pi)")

    @property
    def total(self) -> int:
        return self.k_north + sum(c for c, _, _ in self.rings) + self.k_south


def constellation_to_state(c: Constellation) -> SpinState:
    """Expand the root polynomial of a constellation into a normalized state.

    m stars at the South Pole drop the polynomial degree to n - m; the
    finite-root coefficients then occupy amplitude slots k = m..n.
    """
    if c.n < 1:
        raise InputError("a constellation needs at least one star")
    finite = [s.root() for s in c.stars if not s.at_south_pole]
    m = c.n - len(finite)
    coeffs = np.array([1.0 + 0j])
    for z in finite:
        coeffs = np.convolve(coeffs, [1.0, -z])
    amps = np.zeros(c.n + 1, dtype=complex)
    ks = np.arange(m, c.n + 1)
    amps[ks] = coeffs * (-1.0) ** ks / sqrt_binomials(c.n)[ks]
    return SpinState(amps).normalized().phase_fixed()


def state_to_constellation(s: SpinState) -> Constellation:
    """Solve for the Majorana roots of a state and map them onto the sphere."""
    n = s.n
    if n < 1:
        raise InputError("scalar states carry no stars")
    signs = (-1.0) ** np.arange(n + 1)
    coeffs = signs * sqrt_binomials(n) * s.amps  # coefficient of zeta^(n-k)
    scale = np.abs(coeffs).max()
    if scale == 0.0:
        raise ZeroStateError("zero state has no constellation")
    m = 0
    while m <= n and abs(coeffs[m]) < DEGREE_DEFICIENCY_RTOL * scale:
        m += 1
    stars = [Star(np.pi, 0.0)] * m
    if m <= n - 1:
        roots = np.roots(coeffs[m:])
        stars.extend(Star.from_root(z) for z in roots)
    return Constellation(stars)


def coherent_state(z, n: int) -> SpinState:
    """State with all n stars at the point whose stereographic coordinate is z.

    z may be infinite (South Pole pile).  Evaluated through half-angle powers
    so arbitrarily large |z| stays finite.
    """
    if n < 1:
        raise InputError("coherent states need n >= 1")
    if z is None or not np.isfinite(abs(complex(z))):
        return SpinState.number_state(n, n)
    z = complex(z)
    theta = 2 * np.arctan(abs(z))
    phase = z / abs(z) if z != 0 else 1.0
    k = np.arange(n + 1)
    amps = (sqrt_binomials(n)
            * np.sin(theta / 2) ** k
            * np.cos(theta / 2) ** (n - k)
            * phase ** k)
    return SpinState(amps)


def overlap(a: SpinState, b: SpinState) -> complex:
    """Hermitian inner product <a|b>."""
    if a.n != b.n:
        raise DimensionMismatchError(f"overlap of n={a.n} with n={b.n}")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: SpinState, b: SpinState) -> float:
    """|<a|b>| for normalized inputs; global-phase blind."""
    return abs(overlap(a, b))


def polygon_constellation(spec: PolygonSpec, n: int | None = None):
    """Realize a polygon spec as (Constellation, SpinState).

    A single ring leaves only two amplitudes nonzero; two rings at most four,
    three when the ring counts coincide.
    """
    if n is not None and n != spec.total:
        raise InputError(f"spec places {spec.total} stars, expected {n}")
    stars = [Star(0.0, 0.0)] * spec.k_north
    for count, theta, twist in spec.rings:
        stars.extend(Star(theta, twist + 2 * np.pi * j / count) for j in range(count))
    stars.extend([Star(np.pi, 0.0)] * spec.k_south)
    c = Constellation(stars)
    return c, constellation_to_state(c)


def time_reverse(s: SpinState) -> SpinState:
    """Antipodal map on the constellation: psi_k -> (-1)^k conj(psi_(n-k))."""
    s.require_normalized()
    signs = (-1.0) ** np.arange(s.n + 1)
    return SpinState(signs * np.conj(s.amps[::-1])).phase_fixed()


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Right-handed rotation of the celestial sphere about a unit axis."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    K = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * (K @ K)


def save_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj.to_dict(), fh, indent=1)
        fh.write("\n")


def load_state(path) -> SpinState:
    with open(path, encoding="utf-8") as fh:
        return SpinState.from_dict(json.load(fh))


def load_constellation(path) -> Constellation:
    with open(path, encoding="utf-8") as fh:
        return Constellation.from_dict(json.load(fh))
