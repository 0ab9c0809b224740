"""Channel algebra, spectra, majorization, and Fubini-Study sampling."""

import numpy as np
import pytest
from scipy.stats import beta, kstest

from majorana import (DensityMatrix, InputError, SpinState, Spectrum,
                      covariance_check, in_permutation_hull, majorizes, phi1,
                      phi_iter, sample_fubini_study, spectra_cloud, spectrum,
                      spin_operators, su2_rotation)
from majorana.lieb_solovej import barycentric, raising_pair, sample_rng


def channel_by_definition(rho: np.ndarray) -> np.ndarray:
    """Independent oracle: apply the ladder rules entry by entry.

    Acting on |n-k,k><n-l,l|, the two creation operators contribute
    sqrt((n-k+1)(n-l+1)) at (k,l) and sqrt((k+1)(l+1)) at (k+1,l+1),
    all divided by n+2.
    """
    n = rho.shape[0] - 1
    out = np.zeros((n + 2, n + 2), dtype=complex)
    for k in range(n + 1):
        for l in range(n + 1):
            out[k, l] += np.sqrt((n - k + 1) * (n - l + 1)) * rho[k, l]
            out[k + 1, l + 1] += np.sqrt((k + 1) * (l + 1)) * rho[k, l]
    return out / (n + 2)


def random_density(n, seed, index=0) -> DensityMatrix:
    rng = sample_rng(seed, index)
    g = rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def test_spin_operator_algebra():
    for n in (1, 3, 6):
        ops = spin_operators(n)
        comm = ops.sx @ ops.sy - ops.sy @ ops.sx
        assert np.abs(comm - 1j * ops.sz).max() < 1e-12
        comm = ops.sy @ ops.sz - ops.sz @ ops.sy
        assert np.abs(comm - 1j * ops.sx).max() < 1e-12
        expected = np.diag([(n - 2 * k) / 2 for k in range(n + 1)])
        assert np.abs(ops.sz - expected).max() == 0.0


def test_one_step_on_extreme_states():
    rho = phi1(DensityMatrix.pure(SpinState.number_state(1, 0)))
    assert np.abs(np.sort(np.linalg.eigvalsh(rho.m))[::-1][:2]
                  - np.array([2 / 3, 1 / 3])).max() < 1e-14
    for n in (2, 4, 6):
        rho = phi1(DensityMatrix.pure(SpinState.number_state(n, 0)))
        top = np.sort(np.linalg.eigvalsh(rho.m))[::-1][:2]
        expected = np.array([(n + 1) / (n + 2), 1 / (n + 2)])
        assert np.abs(top - expected).max() < 1e-13


def test_one_step_matches_definition_oracle():
    for n in (1, 3, 5):
        rho = random_density(n, seed=60, index=n)
        got = phi1(rho).m
        assert np.abs(got - channel_by_definition(rho.m)).max() < 1e-14


def test_trace_preservation_and_positivity():
    for i in range(10):
        rho = random_density(4, seed=61, index=i)
        out = phi_iter(rho, 2)
        assert abs(np.trace(out.m).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(out.m).min() > -1e-10
    mixed = DensityMatrix(np.eye(5) / 5)
    assert abs(np.trace(phi1(mixed).m).real - 1.0) < 1e-13


def test_iteration_and_rank_growth():
    psi = sample_fubini_study(3, seed=62)
    rho = DensityMatrix.pure(psi)
    assert np.abs(phi_iter(rho, 0).m - rho.m).max() == 0.0
    sv1 = np.linalg.svd(phi_iter(rho, 1).m, compute_uv=False)
    sv2 = np.linalg.svd(phi_iter(rho, 2).m, compute_uv=False)
    assert (sv1 > 1e-10).sum() <= 2
    assert (sv2 > 1e-10).sum() <= 3
    assert phi_iter(rho, 2).dim == 6
    with pytest.raises(InputError):
        phi_iter(rho, -1)


def test_spectrum_contract():
    spec = spectrum(DensityMatrix(np.diag([0.5, 0.3, 0.2])))
    assert spec.values == (0.5, 0.3, 0.2)
    psi = sample_fubini_study(4, seed=63)
    spec = spectrum(DensityMatrix.pure(psi))
    assert abs(spec.values[0] - 1.0) < 1e-12
    assert max(spec.values[1:]) < 1e-12
    bad = np.eye(3, dtype=complex)
    bad[0, 1] = 0.5
    with pytest.raises(InputError):
        spectrum(DensityMatrix(bad / 3, validate=False))


def test_density_matrix_validation():
    with pytest.raises(InputError):
        DensityMatrix(np.eye(3))             # trace 3
    with pytest.raises(InputError):
        DensityMatrix(np.diag([1.5, -0.5]))  # negative eigenvalue
    with pytest.raises(InputError):
        Spectrum((0.2, 0.5, 0.3))            # not descending
    with pytest.raises(InputError):
        Spectrum((0.9, 0.2))                 # sums to 1.1


def test_majorization():
    pure = Spectrum((1.0, 0.0, 0.0))
    mid = Spectrum((0.5, 0.3, 0.2))
    flat = Spectrum((1 / 3, 1 / 3, 1 / 3))
    assert majorizes(pure, mid) and majorizes(pure, flat)
    assert not majorizes(flat, mid)
    assert majorizes(mid, flat)
    with pytest.raises(InputError):
        majorizes(pure, Spectrum((1.0, 0.0)))


def test_sampling_determinism_and_moments():
    a = sample_fubini_study(4, seed=7)
    b = sample_fubini_study(4, seed=7)
    assert np.abs(a.amps - b.amps).max() == 0.0
    n = 3
    count = 20000
    weights = np.array([np.abs(sample_fubini_study(n, 90, i).amps) ** 2
                        for i in range(count)])
    mean = weights.mean(axis=0)
    sigma = weights.std(axis=0).max() / np.sqrt(count)
    assert np.abs(mean - 1 / (n + 1)).max() < 3 * sigma + 1e-4


def test_overlap_distribution_is_beta():
    n = 4
    probe = SpinState.number_state(n, 0)
    samples = np.array([abs(np.vdot(probe.amps, sample_fubini_study(n, 91, i).amps)) ** 2
                        for i in range(4000)])
    stat = kstest(samples, beta(1, n).cdf)
    assert stat.pvalue > 0.01


def test_cloud_special_points_only():
    cloud = spectra_cloud(3, steps=2, count=0, seed=1)
    assert cloud.samples == []
    assert [k for k, _ in cloud.number_images] == [0, 1, 2, 3]
    assert [(a, b) for a, b, _ in cloud.segments] == [(0, 3)]
    coh = cloud.coherent_image
    assert abs(sum(coh.values) - 1.0) < 1e-12


def test_cloud_segments_reach_the_simplex_center():
    # mixing the extreme pair at weight 2/3 lands on the uniform rank-3 spectrum
    amps = np.zeros(5, dtype=complex)
    amps[0], amps[3] = np.sqrt(1 / 3), np.sqrt(2 / 3)
    rho = phi_iter(DensityMatrix.pure(SpinState(amps)), 2)
    top = spectrum(rho).top(3)
    assert np.abs(top - 1 / 3).max() < 1e-12


def test_cloud_majorization_and_hull():
    cloud = spectra_cloud(3, steps=2, count=300, seed=5)
    coh = cloud.coherent_image
    for sample in cloud.samples:
        assert majorizes(coh, sample)
    verts = coh.top(3)
    for sample in cloud.samples[:40]:
        assert in_permutation_hull(sample.top(3), verts)
    outside = np.array([0.9, 0.05, 0.05])
    assert not in_permutation_hull(outside, verts)


def test_segment_spectra_stay_on_lines():
    # mixtures of far-apart number states trace straight eigenvalue branches:
    # at weight t the multiset is (1-t) mu + t mu-reversed, mu the endpoint
    cloud = spectra_cloud(3, steps=2, count=0, seed=1, segment_points=9)
    _, _, curve = cloud.segments[0]
    mu = curve[0].top(3)
    for spec, t in zip(curve, np.linspace(0.0, 1.0, 9)):
        branches = (1 - t) * mu + t * mu[::-1]
        assert np.abs(spec.top(3) - np.sort(branches)[::-1]).max() < 1e-9


def test_covariance_and_isospectrality():
    assert covariance_check(2, steps=1, trials=25, seed=17) < 1e-10
    assert covariance_check(3, steps=2, trials=10, seed=18) < 1e-10
    # commuting special case: diagonal state, rotation about the z axis
    rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]))
    u = su2_rotation(2, [0, 0, 1], 0.77)
    u_big = su2_rotation(3, [0, 0, 1], 0.77)
    lhs = phi1(DensityMatrix(u @ rho.m @ u.conj().T, validate=False)).m
    rhs = u_big @ phi1(rho).m @ u_big.conj().T
    assert np.abs(lhs - rhs).max() < 1e-12


def test_barycentric_corners():
    assert barycentric([1, 0, 0]) == (0.0, 0.0)
    assert barycentric([0, 1, 0]) == (1.0, 0.0)
    x, y = barycentric([0, 0, 1])
    assert abs(x - 0.5) < 1e-15 and abs(y - np.sqrt(3) / 2) < 1e-15


def test_raising_pair_completeness():
    for n in (1, 4):
        up, down = raising_pair(n)
        total = up.T @ up + down.T @ down
        assert np.abs(total - (n + 2) * np.eye(n + 1)).max() < 1e-12
