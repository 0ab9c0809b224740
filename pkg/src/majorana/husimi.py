"""Husimi function and Wehrl entropy by spherical quadrature.

The Husimi density of a state is its squared overlap with the coherent
state at each point of the sphere.  With the POVM weight (n+1)/4pi it
integrates to one, and the integrand is band-limited: a product rule with
Gauss-Legendre nodes in cos(theta) and a uniform grid in phi is exact for
the normalization once n_theta >= n+1 and n_phi >= 2n+2.  The entropy
integrand Q ln Q is not band-limited, so the grid is doubled until two
successive estimates agree.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import roots_legendre

from .errors import QuadratureConvergenceError
from .states import SpinState, Star, sqrt_binomials

# Keep each evaluation block under ~2M grid nodes.
_BLOCK_NODES = 1 << 21


@dataclass(frozen=True)
class QuadratureConfig:
    """Coarsest grid, plus the doubling-refinement stopping rule."""

    n_theta: int = 16
    n_phi: int = 32
    tol: float = 1e-9
    max_refinements: int = 12

    def coarsest(self, n: int):
        """Grid floor that makes degree-2n integrands exact."""
        return max(self.n_theta, n + 1), max(self.n_phi, 2 * n + 2)


class WehrlResult(NamedTuple):
    value: float
    achieved_tol: float
    n_theta: int
    n_phi: int


def _amplitude_rows(amps, theta_half_sin, theta_half_cos, n_phi):
    """Coherent-state overlap amplitude on a (theta rows) x (phi) grid.

    Row i, column j holds sum_k sqrt(C(n,k)) psi_k s_i^k c_i^(n-k) e^(-ik phi_j),
    evaluated as one matrix product.
    """
    n = amps.size - 1
    k = np.arange(n + 1)
    b = sqrt_binomials(n) * amps
    rows = (b[None, :]
            * theta_half_sin[:, None] ** k[None, :]
            * theta_half_cos[:, None] ** (n - k)[None, :])
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    return rows @ np.exp(-1j * np.outer(k, phi))


def _integrate_level(amps, n_theta, n_phi):
    """One quadrature level; returns (entropy integral, normalization)."""
    n = amps.size - 1
    t, w = roots_legendre(n_theta)
    s_half = np.sqrt((1.0 - t) / 2.0)
    c_half = np.sqrt((1.0 + t) / 2.0)
    block = max(1, _BLOCK_NODES // n_phi)
    ent = 0.0
    nrm = 0.0
    for lo in range(0, n_theta, block):
        hi = min(lo + block, n_theta)
        A = _amplitude_rows(amps, s_half[lo:hi], c_half[lo:hi], n_phi)
        Q = A.real**2 + A.imag**2
        lnQ = np.log(Q, out=np.zeros_like(Q), where=Q > 0.0)
        ent -= float(w[lo:hi] @ (Q * lnQ).sum(axis=1))
        nrm += float(w[lo:hi] @ Q.sum(axis=1))
    scale = (n + 1) / (2.0 * n_phi)
    return scale * ent, scale * nrm


def husimi(s: SpinState, star: Star) -> float:
    """Husimi density Q at one point: squared overlap with the coherent state there."""
    s.require_normalized()
    n = s.n
    k = np.arange(n + 1)
    a = (sqrt_binomials(n) * s.amps
         * np.sin(star.theta / 2) ** k
         * np.cos(star.theta / 2) ** (n - k)
         * np.exp(-1j * k * star.phi))
    return float(abs(a.sum()) ** 2)


def husimi_normalization(s: SpinState, q: QuadratureConfig = QuadratureConfig()) -> float:
    """(n+1)/4pi times the integral of Q; equals the squared norm of the input."""
    n_theta, n_phi = q.coarsest(s.n)
    _, nrm = _integrate_level(s.amps, n_theta, n_phi)
    return nrm


def wehrl_entropy(s: SpinState, q: QuadratureConfig = QuadratureConfig()) -> WehrlResult:
    """Converged Wehrl entropy -(n+1)/4pi integral of Q ln Q.

    Doubles the grid until two successive estimates differ by less than
    q.tol; the Q = 0 limit of the integrand contributes exactly zero.
    Raises QuadratureConvergenceError (carrying the last two estimates)
    if the refinement budget runs out.
    """
    s.require_normalized()
    n_theta, n_phi = q.coarsest(s.n)
    previous = None
    for _ in range(q.max_refinements + 1):
        est, _ = _integrate_level(s.amps, n_theta, n_phi)
        if previous is not None and abs(est - previous) < q.tol:
            return WehrlResult(est, abs(est - previous), n_theta, n_phi)
        previous = est
        n_theta *= 2
        n_phi *= 2
    raise QuadratureConvergenceError(
        f"entropy not converged to {q.tol} after {q.max_refinements} refinements",
        (previous, est))


def entropy_fixed_grid(amps: np.ndarray, n_theta: int, n_phi: int) -> float:
    """Entropy on one fixed grid, no refinement.

    The result is a smooth function of the amplitudes, which makes it the
    right objective for optimizers; accuracy is whatever the grid buys.
    """
    est, _ = _integrate_level(np.asarray(amps, dtype=complex), n_theta, n_phi)
    return est
