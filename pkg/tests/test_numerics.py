import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapent.errors import ConfigurationError, InvalidInputError
from trapent.numerics import (
    build_angular_grid,
    build_radial_grid,
    gauss_legendre,
    symmetric_eigendecompose,
)


def test_constant_integrates_to_length():
    grid = build_radial_grid(16, 6.0)
    assert abs(grid.weights.sum() - 6.0) < 1e-12


def test_free_radial_density_normalized():
    grid = build_radial_grid(64, 8.0)
    r = grid.nodes
    assert abs(grid.integrate(2 * r * np.exp(-r * r)) - 1.0) < 1e-10


def test_gaussian_third_moment():
    grid = build_radial_grid(64, 8.0)
    r = grid.nodes
    assert abs(grid.integrate(r**3 * np.exp(-r * r)) - 0.5) < 1e-10


def test_half_gaussian():
    grid = build_radial_grid(48, 6.5)
    r = grid.nodes
    assert abs(grid.integrate(np.exp(-r * r)) - math.sqrt(math.pi) / 2) < 1e-10


def test_grid_invariants():
    grid = build_radial_grid(32, 5.0)
    assert np.all(np.diff(grid.nodes) > 0)
    assert grid.nodes[0] > 0 and grid.nodes[-1] < 5.0
    assert np.all(grid.weights > 0)


@pytest.mark.parametrize("n, r_max", [(15, 5.0), (16, 0.0), (16, -1.0)])
def test_grid_rejects_bad_config(n, r_max):
    with pytest.raises(ConfigurationError):
        build_radial_grid(n, r_max)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(16, 80), k=st.integers(0, 200), r_max=st.floats(0.5, 20.0))
def test_monomials_exact(n, k, r_max):
    k = k % (2 * n)
    grid = build_radial_grid(n, r_max)
    exact = r_max ** (k + 1) / (k + 1)
    assert abs(grid.integrate(grid.nodes**k) - exact) <= 1e-12 * exact


def test_interpolation_reproduces_polynomials():
    grid = build_radial_grid(20, 3.0)
    f = lambda r: 1 - 2 * r + r**5 - 0.1 * r**19
    x = np.linspace(0.01, 2.99, 37)
    err = np.max(np.abs(grid.interpolate(f(grid.nodes), x) - f(x)))
    assert err < 1e-10 * np.max(np.abs(f(x)))


def test_uniform_rule_orthogonality():
    m = 32
    ang = build_angular_grid(m, "uniform")
    th = ang.nodes
    for a in range(m // 2):
        for b in range(m // 2):
            val = ang.weight * np.sum(np.cos(a * th) * np.cos(b * th))
            expect = (2 * math.pi if a == 0 else math.pi) if a == b else 0.0
            assert abs(val - expect) < 1e-12


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("r1, r2", [(1.0, 1.3), (0.7, 0.7 + 1e-7), (2.0, 2.0), (0.01, 3.0)])
def test_coalescence_rule_integrates_cusp(r1, r2):
    # Against an adaptive reference on an integrand with the |r1 - r2|-cusp.
    from scipy.integrate import quad

    ang = build_angular_grid(64)
    th, w, rel = ang.pair_rule(np.array([r1]), np.array([r2]))
    assert abs(w.sum() - 2 * math.pi) < 1e-12
    f = lambda t: np.exp(-np.sqrt(r1 * r1 + r2 * r2 - 2 * r1 * r2 * np.cos(t))) * np.cos(3 * t)
    got = np.sum(w * np.exp(-np.sqrt(rel)) * np.cos(3 * th))
    ref = 2 * quad(f, 0, math.pi, points=[0.0, 1e-6, 1e-4, 1e-2], limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    assert abs(got - ref) < 1e-11


def test_angular_grid_minimum():
    with pytest.raises(ConfigurationError):
        build_angular_grid(4)
    with pytest.raises(ConfigurationError):
        build_angular_grid(16, "simpson")


def test_eig_identity():
    vals, vecs = symmetric_eigendecompose(np.eye(3))
    assert np.allclose(vals, 1.0)
    assert np.allclose(vecs.T @ vecs, np.eye(3))


def test_eig_ordering_by_magnitude():
    vals, _ = symmetric_eigendecompose(np.diag([3.0, -5.0, 2.0]))
    assert np.allclose(vals, [-5.0, 3.0, 2.0])


def test_eig_two_by_two():
    vals, vecs = symmetric_eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(sorted(vals), [-1.0, 1.0])
    for v in vecs.T:
        assert abs(abs(v[0]) - 1 / math.sqrt(2)) < 1e-12 and abs(abs(v[1]) - 1 / math.sqrt(2)) < 1e-12


@pytest.mark.parametrize(
    "bad",
    [np.ones((2, 3)), np.array([[1.0, np.nan], [np.nan, 1.0]]), np.array([[1.0, 2.0], [0.0, 1.0]])],
)
def test_eig_rejects(bad):
    with pytest.raises(InvalidInputError):
        symmetric_eigendecompose(bad)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 30), seed=st.integers(0, 2**31 - 1), psd=st.booleans())
def test_eig_reconstruction(n, seed, psd):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    m = a @ a.T if psd else a + a.T
    vals, vecs = symmetric_eigendecompose(m)
    rec = (vecs * vals) @ vecs.T
    assert np.linalg.norm(m - rec) <= 1e-10 * max(np.linalg.norm(m), 1e-300)
    assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-10)
    assert np.all(np.diff(np.abs(vals)) <= 1e-12 * np.abs(vals).max())
    if psd:
        assert vals.min() >= -1e-10 * max(1.0, vals.max())


def test_gauss_legendre_interval():
    x, w = gauss_legendre(10, 2.0, 5.0)
    assert np.all((x > 2) & (x < 5))
    assert abs(w.sum() - 3.0) < 1e-13
