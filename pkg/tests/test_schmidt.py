import math
import warnings

import numpy as np
import pytest

from trapent.errors import UndefinedChannelError
from trapent.numerics import build_angular_grid, build_radial_grid
from trapent.partial_waves import compute_kernels, default_angular_points
from trapent.radial_solver import TautSolution
from trapent.schmidt import (
    ChannelSpectrum,
    TruncationWarning,
    channel_participation,
    channel_purity,
    channel_purity_matrix,
    real_modes,
    reconstruct_psi,
    schmidt_decompose,
)
from trapent.wavefunction import SpatialWavefunction, eval_psi

SQRT2 = math.sqrt(2.0)


def test_free_single_rank(free):
    spec = free.spectra[0]
    assert spec.rank == 1
    assert abs(spec.kappas[0] - 1.0) < 1e-8
    r = spec.grid.nodes
    # Normalized single-particle radial amplitude of exp(-r^2) in 2D.
    assert np.max(np.abs(spec.chis[0] - 2.0 * np.sqrt(r) * np.exp(-r * r))) < 1e-8


def test_free_purities(free):
    assert abs(channel_purity(free.spectra[0]) - 1.0) < 1e-8
    assert abs(channel_purity(free.spectra[1])) < 1e-10


def test_trace_identity(taut):
    # Sum of retained occupancies against the directly integrated eta_l.
    worst = max(abs(s.lambdas.sum() - k.eta) for s, k in zip(taut.spectra, taut.kernels))
    assert worst < 1e-10


def test_occupancy_sum_within_invariant(taut, mid):
    for a in (taut, mid):
        for s, k in zip(a.spectra, a.kernels):
            assert np.all(s.lambdas >= 0)
            assert abs(s.lambdas.sum() - k.eta) < 1e-8


def test_orthonormal_orbitals(mid):
    for s in mid.spectra:
        gram = (s.chis * s.grid.weights) @ s.chis.T
        assert np.max(np.abs(gram - np.eye(s.rank))) < 1e-8


def test_kernel_reconstruction(taut):
    # Against the discrete kernel that was decomposed, in the weighted Frobenius norm.
    for s, k in zip(taut.spectra[:6], taut.kernels[:6]):
        w = k.grid.weights
        discrete = k.operator / np.sqrt(np.outer(w, w))
        rec = (s.chis.T * s.kappas) @ s.chis
        diff = math.sqrt(w @ ((discrete - rec) ** 2) @ w)
        assert diff / math.sqrt(w @ (discrete**2) @ w) < 1e-8


def test_point_samples_close_to_discrete_kernel(taut):
    # Point samples and the projected kernel differ only by the projection error at the cusp.
    for s, k in zip(taut.spectra[:6], taut.kernels[:6]):
        rec = (s.chis.T * s.kappas) @ s.chis
        assert np.max(np.abs(k.values - rec)) < 1e-3


def test_doubled_grid_oracle():
    w = SpatialWavefunction(TautSolution())
    ang = build_angular_grid(default_angular_points(SQRT2, 0))
    coarse = schmidt_decompose(compute_kernels(w, build_radial_grid(64, 11.78), ang, 0)[0])
    fine = schmidt_decompose(compute_kernels(w, build_radial_grid(128, 11.78), ang, 0)[0])
    n = coarse.rank
    assert np.max(np.abs(coarse.lambdas[:n] - fine.lambdas[:n])) < 1e-6


def test_refinement_stability_strong(strong):
    from trapent.pipeline import AnalysisConfig, analyze

    fine = analyze(20.0, AnalysisConfig(grid_points=128))
    for a, b in zip(strong.spectra, fine.spectra):
        n = a.rank
        assert np.max(np.abs(a.lambdas - b.lambdas[:n])) < 1e-6


def test_near_rank_one_at_strong_coupling():
    from conftest import cached_analysis

    a = cached_analysis(100.0)
    for s, k in zip(a.spectra, a.kernels):
        if k.eta > 1e-3:
            assert s.lambdas[0] / k.eta >= 0.95


def test_cauchy_schwarz(mid):
    for s in mid.spectra:
        assert channel_purity(s) <= s.lambdas.sum() ** 2 + 1e-15


def test_purity_paths_agree(mid):
    for s in mid.spectra:
        assert abs(channel_purity(s, cross_check=False) - channel_purity_matrix(s)) <= 1e-10 * channel_purity(s) + 1e-30


def _synthetic(kappas):
    grid = build_radial_grid(16, 4.0)
    return ChannelSpectrum(1, np.asarray(kappas, float), np.zeros((len(kappas), 16)), grid)


def test_participation_examples():
    assert channel_participation(_synthetic([0.3])) == 1.0
    assert abs(channel_participation(_synthetic([0.2, -0.2])) - 0.5) < 1e-15
    with pytest.raises(UndefinedChannelError):
        channel_participation(_synthetic([]))


def test_signs_deterministic(mid):
    for s in mid.spectra:
        for chi in s.chis:
            mag = np.abs(chi)
            assert chi[np.argmax(mag > 0.5 * mag.max())] > 0


def test_real_modes_structure(mid):
    for s in mid.spectra:
        modes = real_modes(s)
        if s.l == 0:
            assert len(modes) == s.rank
            assert all(m.angular_kind == "isotropic" for m in modes)
        else:
            assert len(modes) == 2 * s.rank
            assert {m.angular_kind for m in modes} == {"cosine", "sine"}


def _mode_gram(modes, m_phi=64):
    phi = 2 * math.pi * np.arange(m_phi) / m_phi
    grid = modes[0].grid
    radial = np.array([m.radial_at_nodes() for m in modes])
    ang = np.array([m.angular(phi) for m in modes])
    rad_gram = (radial * grid.weights * grid.nodes) @ radial.T
    ang_gram = ang @ ang.T * (2 * math.pi / m_phi)
    return rad_gram * ang_gram


def test_real_modes_orthonormal(mid):
    modes = [m for s in mid.spectra[:4] for m in real_modes(s)]
    assert np.max(np.abs(_mode_gram(modes) - np.eye(len(modes)))) < 1e-8


def test_reconstruct_free_product():
    from conftest import cached_analysis

    a = cached_analysis(0.0)
    r1, r2, th = np.meshgrid(np.linspace(0.05, 3, 6), np.linspace(0.05, 3, 5), np.linspace(0, 6, 4))
    rec = reconstruct_psi(a.spectra[:1], 1, r1, r2, th)
    assert np.max(np.abs(rec.values - eval_psi(a.wavefunction, r1, r2, th))) < 1e-8


def _relative_l2(a, ranks):
    grid = build_radial_grid(48, 7.0)
    m = 64
    th = 2 * math.pi * np.arange(m) / m
    r1, r2, t = np.meshgrid(grid.nodes, grid.nodes, th, indexing="ij")
    exact = eval_psi(a.wavefunction, r1, r2, t)
    rec = reconstruct_psi(a.spectra, ranks, r1, r2, t).values
    wts = np.einsum("i,j->ij", grid.weights * grid.nodes, grid.weights * grid.nodes)[:, :, None]
    return math.sqrt(np.sum(wts * (exact - rec) ** 2) / np.sum(wts * exact**2))


def test_reconstruct_taut_defaults(taut):
    assert _relative_l2(taut, max(s.rank for s in taut.spectra)) <= 1e-6


def test_reconstruct_rank_one_strong(strong):
    assert _relative_l2(strong, 1) < 1e-2


def test_reconstruct_phi_independent(mid):
    r1, r2, th = 0.9, 1.4, 2.1
    a = reconstruct_psi(mid.spectra, 5, r1, r2, th, phi1=0.0).values
    b = reconstruct_psi(mid.spectra, 5, r1, r2, th, phi1=1.3).values
    assert abs(a - b) < 1e-12


def test_reconstruct_truncation_warning(mid):
    with pytest.warns(TruncationWarning):
        rec = reconstruct_psi(mid.spectra[1:], 2, 1.0, 1.0, 0.3)
    assert rec.truncated
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not reconstruct_psi(mid.spectra, 2, 1.0, 1.0, 0.3).truncated
