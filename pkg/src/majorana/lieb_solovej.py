"""The Lieb-Solovej channel and its spectral patterns.

One application of the channel lifts a density matrix on the (n+1)-dim
space to the (n+2)-dim space through the two oscillator creation operators,
dividing by n+2 to preserve the trace.  It commutes with rotations, so all
coherent states share one image spectrum, and that spectrum majorizes the
image spectrum of every other state.  Applying the channel twice to a pure
state gives rank at most three, which makes the cloud of sample spectra a
picture inside a two-dimensional simplex.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import DimensionMismatchError, InputError, NumericalError
from .states import SpinState

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10


@dataclass(frozen=True)
class SpinOperators:
    """Angular momentum matrices on the n-star block; Sz is diagonal (n-2k)/2."""

    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


class DensityMatrix:
    """Hermitian, positive semidefinite, trace-one matrix."""

    def __init__(self, m, validate: bool = True):
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError("density matrix must be square")
        self.m = m.copy()
        self.m.flags.writeable = False
        self.dim = m.shape[0]
        if validate:
            self.validate()

    def validate(self):
        if np.abs(self.m - self.m.conj().T).max() > HERMITICITY_TOL:
            raise InputError("matrix is not Hermitian")
        if abs(np.trace(self.m).real - 1.0) > TRACE_TOL:
            raise InputError(f"trace is {np.trace(self.m).real}, not 1")
        if np.linalg.eigvalsh(self.m).min() < PSD_FLOOR:
            raise InputError("matrix has a negative eigenvalue")
        return self

    @staticmethod
    def pure(state: SpinState) -> "DensityMatrix":
        v = state.normalized().amps
        return DensityMatrix(np.outer(v, v.conj()), validate=False)


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalue list of a density matrix; sums to one."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
            raise InputError("spectrum must be sorted descending")
        if any(v < PSD_FLOOR or v > 1.0 + 1e-10 for v in vals):
            raise InputError("spectrum entries outside [0, 1]")
        if abs(sum(vals) - 1.0) > 1e-10:
            raise InputError(f"spectrum sums to {sum(vals)}, not 1")
        # clip jitter so downstream majorization sees clean simplex points
        object.__setattr__(self, "values", tuple(min(max(v, 0.0), 1.0) for v in vals))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def top(self, r: int) -> np.ndarray:
        return np.array(self.values[:r])


def spin_operators(n: int) -> SpinOperators:
    """Sx, Sy, Sz on the (n+1)-dimensional number basis."""
    k = np.arange(n + 1)
    sz = np.diag((n - 2 * k) / 2.0).astype(complex)
    sp = np.zeros((n + 1, n + 1), dtype=complex)
    for kk in range(1, n + 1):
        sp[kk - 1, kk] = np.sqrt((n - kk + 1) * kk)
    sx = (sp + sp.conj().T) / 2
    sy = (sp - sp.conj().T) / 2j
    for a in (sx, sy, sz):
        a.flags.writeable = False
    return SpinOperators(sx, sy, sz)


def su2_rotation(n: int, axis, angle: float) -> np.ndarray:
    """exp(-i angle axis.S) on the n-star block, via the eigenbasis of axis.S."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    ops = spin_operators(n)
    h = axis[0] * ops.sx + axis[1] * ops.sy + axis[2] * ops.sz
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * angle * evals)) @ evecs.conj().T


def raising_pair(n: int):
    """Matrices of the two creation operators, mapping dim n+1 to dim n+2."""
    up = np.zeros((n + 2, n + 1))
    down = np.zeros((n + 2, n + 1))
    for k in range(n + 1):
        up[k, k] = np.sqrt(n - k + 1.0)
        down[k + 1, k] = np.sqrt(k + 1.0)
    return up, down


def phi1(rho: DensityMatrix) -> DensityMatrix:
    """One step of the channel: dim n+1 -> n+2, trace preserved."""
    rho.validate()
    n = rho.dim - 1
    up, down = raising_pair(n)
    out = (up @ rho.m @ up.T + down @ rho.m @ down.T) / (n + 2)
    return DensityMatrix(out, validate=False)


def phi_iter(rho: DensityMatrix, steps: int) -> DensityMatrix:
    """steps-fold composition; rank grows by at most one per step."""
    if steps < 0:
        raise InputError("steps must be nonnegative")
    if steps == 0:
        return DensityMatrix(rho.m, validate=False)
    out = phi1(rho)
    for _ in range(steps - 1):
        out = phi1(out)
    return out


def spectrum(rho: DensityMatrix, residual_tol: float = 1e-10) -> Spectrum:
    """Descending eigenvalues, with a residual check on every eigenpair."""
    if np.abs(rho.m - rho.m.conj().T).max() > HERMITICITY_TOL:
        raise InputError("matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(rho.m)
    residual = np.abs(rho.m @ evecs - evecs * evals).max()
    if residual > residual_tol:
        raise NumericalError(f"eigenpair residual {residual} above {residual_tol}")
    return Spectrum(tuple(np.sort(evals)[::-1]))


def majorizes(p: Spectrum, q: Spectrum, tol: float = 1e-10) -> bool:
    """True when every descending partial sum of p reaches that of q minus tol."""
    if len(p) != len(q):
        raise DimensionMismatchError("spectra of different length")
    return bool(np.all(np.cumsum(np.array(p.values)) >= np.cumsum(np.array(q.values)) - tol))


def sample_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Counter-based generator for stream (seed, index); identical on every platform."""
    key = np.array([seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_fubini_study(n: int, seed: int, index: int = 0) -> SpinState:
    """Unitarily invariant random pure state: normalized complex Gaussian vector."""
    rng = sample_rng(seed, index)
    v = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    return SpinState(v / np.linalg.norm(v))


def barycentric(top3) -> tuple:
    """Map a rank-3 spectrum to planar coordinates in an equilateral triangle."""
    lam = np.asarray(top3, dtype=float)
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    x, y = lam @ corners
    return float(x), float(y)


@dataclass
class SpectraCloud:
    """Sample spectra of the iterated channel plus the labeled special points."""

    n: int
    steps: int
    samples: list = field(default_factory=list)
    number_images: list = field(default_factory=list)   # (k, Spectrum)
    segments: list = field(default_factory=list)        # (k, k', [Spectrum])

    @property
    def coherent_image(self) -> Spectrum:
        """Image spectrum shared by every coherent state (k = 0 pile)."""
        for k, spec in self.number_images:
            if k == 0:
                return spec
        raise NumericalError("cloud carries no number-state images")


def _number_pair_state(n, k_low, k_high, weight):
    amps = np.zeros(n + 1, dtype=complex)
    amps[k_low] = np.sqrt(1.0 - weight)
    amps[k_high] = np.sqrt(weight)
    return SpinState(amps)


def spectra_cloud(n: int, steps: int, count: int, seed: int,
                  segment_points: int = 41) -> SpectraCloud:
    """Spectra of the steps-fold channel on random pure states.

    Also emits the images of all number states and, for every number-state
    pair separated by more than two slots, the segment of spectra swept by
    their real mixtures.  count = 0 yields the special points alone.
    """
    cloud = SpectraCloud(n=n, steps=steps)
    for k in range(n + 1):
        img = phi_iter(DensityMatrix.pure(SpinState.number_state(n, k)), steps)
        cloud.number_images.append((k, spectrum(img)))
    for k_low in range(n + 1):
        for k_high in range(k_low + 3, n + 1):
            curve = []
            for t in np.linspace(0.0, 1.0, segment_points):
                rho = DensityMatrix.pure(_number_pair_state(n, k_low, k_high, t))
                curve.append(spectrum(phi_iter(rho, steps)))
            cloud.segments.append((k_low, k_high, curve))
    for i in range(count):
        rho = DensityMatrix.pure(sample_fubini_study(n, seed, i))
        cloud.samples.append(spectrum(phi_iter(rho, steps)))
    return cloud


def in_permutation_hull(point, vertex, slack: float = 1e-9) -> bool:
    """Is `point` inside the convex hull of all permutations of `vertex`?

    Solved as a linear-programming feasibility problem with a tolerance
    band of width `slack` around the convexity constraints.
    """
    from itertools import permutations

    p = np.asarray(point, dtype=float)
    verts = np.array(sorted(set(permutations(np.asarray(vertex, dtype=float)))))
    m = verts.shape[0]
    res = linprog(np.zeros(m),
                  A_ub=np.vstack([verts.T, -verts.T]),
                  b_ub=np.concatenate([p + slack, -(p - slack)]),
                  A_eq=np.ones((1, m)), b_eq=[1.0],
                  bounds=[(0.0, None)] * m, method="highs")
    return bool(res.success)


def covariance_check(n: int, steps: int, trials: int, seed: int) -> float:
    """Worst-case deviation of the channel from rotation covariance.

    For random density matrices and random rotations, compares the channel
    of the rotated input against the rotated channel output, checks that
    both share one spectrum, and checks the commutator identity with each
    spin generator.  Returns the largest deviation seen.
    """
    worst = 0.0
    small_ops = spin_operators(n)
    big_ops = spin_operators(n + steps)
    for trial in range(trials):
        rng = sample_rng(seed, trial)
        g = rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
        rho = DensityMatrix((g @ g.conj().T) / np.trace(g @ g.conj().T).real,
                            validate=False)
        axis = rng.normal(size=3)
        angle = rng.uniform(0.0, 2 * np.pi)
        u_small = su2_rotation(n, axis, angle)
        u_big = su2_rotation(n + steps, axis, angle)
        rotated_in = DensityMatrix(u_small @ rho.m @ u_small.conj().T, validate=False)
        lhs = phi_iter(rotated_in, steps).m
        rhs = u_big @ phi_iter(rho, steps).m @ u_big.conj().T
        worst = max(worst, float(np.abs(lhs - rhs).max()))
        ev_rot = np.linalg.eigvalsh(lhs)
        ev_ref = np.linalg.eigvalsh(phi_iter(rho, steps).m)
        worst = max(worst, float(np.abs(ev_rot - ev_ref).max()))
        for s_small, s_big in [(small_ops.sx, big_ops.sx),
                               (small_ops.sy, big_ops.sy),
                               (small_ops.sz, big_ops.sz)]:
            comm_in = s_small @ rho.m - rho.m @ s_small
            lifted = _apply_raw(comm_in, steps)
            out = phi_iter(rho, steps).m
            worst = max(worst, float(np.abs(lifted - (s_big @ out - out @ s_big)).max()))
    return worst


def _apply_raw(matrix, steps):
    """Channel algebra applied to an arbitrary (not necessarily valid) matrix."""
    out = np.asarray(matrix, dtype=complex)
    for _ in range(steps):
        n = out.shape[0] - 1
        up, down = raising_pair(n)
        out = (up @ out @ up.T + down @ out @ down.T) / (n + 2)
    return out
