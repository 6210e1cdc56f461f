import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from trapent.errors import ExtrapolationError, InvalidInputError
from trapent.numerics import build_radial_grid
from trapent.radial_solver import solve_ground_radial
from trapent.wigner_limit import (
    HarmonicRadial,
    _check_sequence,
    asymptotic_spectrum,
    classical_radius,
    equilibrium_separation,
    extrapolate,
    harmonic_u,
)


@pytest.fixture(scope="module")
def asym():
    return asymptotic_spectrum()


def test_classical_radius():
    assert abs(classical_radius(2.0) - 0.5) < 1e-15
    assert abs(classical_radius(16.0) - 1.0) < 1e-15
    with pytest.raises(InvalidInputError):
        classical_radius(0.0)


@pytest.mark.parametrize("g", [3.0, 50.0, 700.0])
def test_minimum_of_potential(g):
    res = minimize_scalar(lambda r: r * r + g / r, bounds=(1e-3, 50.0), method="bounded", options={"xatol": 1e-10})
    assert abs(res.x - 2 * classical_radius(g)) < 1e-6


def test_harmonic_peak_and_norm():
    g = 50.0
    r0 = equilibrium_separation(g)
    x = np.linspace(r0 - 1, r0 + 1, 20001)
    assert abs(x[np.argmax(harmonic_u(g, x))] - r0) < 1e-4
    # Full-line Gaussian normalization.
    from scipy.integrate import quad

    val = quad(lambda r: harmonic_u(g, r) ** 2, r0 - 15, r0 + 15, points=[r0], epsabs=1e-14)[0]
    assert abs(val - 1.0) < 1e-10


def test_harmonic_warns_for_small_g():
    with pytest.warns(RuntimeWarning):
        harmonic_u(10.0, 1.0)


def test_harmonic_energy():
    h = HarmonicRadial(1000.0)
    r0 = h.r0
    assert abs(h.energy - (r0 * r0 + 1000.0 / r0 + math.sqrt(3))) < 1e-12


def _harmonic_distance(g):
    sol = solve_ground_radial(g)
    grid = build_radial_grid(200, sol.r_max)
    r = grid.nodes
    return math.sqrt(grid.integrate((sol.u(r) - HarmonicRadial(g).u(r)) ** 2))


def test_distance_to_variational_state_shrinks():
    assert _harmonic_distance(1000.0) < _harmonic_distance(250.0)


def test_distance_to_variational_state_bound():
    assert _harmonic_distance(1000.0) <= 0.02


def test_asymptotic_invariants(asym):
    assert 0 < asym.omega_inf < 1
    assert all(b > a for a, b in zip(asym.lambda_ratios, asym.lambda_ratios[1:]))
    for p in asym.points:
        assert all(b > a for a, b in zip(p.lambda_ratios, p.lambda_ratios[1:]))
        assert abs(p.classical_radius - 0.5 * (p.g / 2) ** (1 / 3)) < 1e-12


def test_angular_concentration(asym):
    var = asym.diagnostics["circular_variance"]
    assert all(b < a for a, b in zip(var, var[1:]))


def test_channel_equality_improves(asym):
    spread = asym.diagnostics["channel_spread"]
    assert all(b < a for a, b in zip(spread, spread[1:]))
    assert spread[-1] < 1e-3


def test_extrapolation_exact_line():
    g = np.array([100.0, 300.0, 900.0])
    a, b, res = extrapolate(g, 2.0 + 3.0 * g ** (-1 / 3))
    assert abs(a - 2.0) < 1e-12 and abs(b - 3.0) < 1e-10
    assert np.max(np.abs(res)) < 1e-12


def test_extrapolation_rejects_non_monotone():
    with pytest.raises(ExtrapolationError):
        _check_sequence("x", [100.0, 200.0, 400.0], [1.0, 1.2, 1.1])


def test_extrapolation_rejects_bad_fit():
    with pytest.raises(ExtrapolationError):
        _check_sequence("x", [100.0, 200.0, 400.0], [1.0, 1.001, 2.0])


@pytest.mark.parametrize("g_list", [(200.0, 500.0), (500.0, 200.0, 1000.0), (50.0, 200.0, 500.0)])
def test_invalid_g_list(g_list):
    with pytest.raises(InvalidInputError):
        asymptotic_spectrum(g_list)
