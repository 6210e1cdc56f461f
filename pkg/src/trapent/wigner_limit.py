"""Strong-coupling asymptotics from the harmonic approximation of the relative motion.

Around the minimum ``r0 = (g/2)^(1/3)`` of ``V(r) = r^2 + g/r`` the curvature
is ``V''(r0) = 6`` independent of ``g``, so the relative amplitude becomes a
Gaussian of fixed width centred at a radius that grows with ``g``. The channel
quantities are computed at several large couplings and extrapolated linearly
in ``g^(-1/3)`` (the leading anharmonic correction scales like ``1/r0``).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ExtrapolationError, InvalidInputError
from .numerics import AngularGrid, RadialGrid, build_angular_grid, build_radial_grid
from .partial_waves import (
    PairQuadrature,
    build_pair_quadrature,
    compute_kernels,
    default_angular_points,
    kernel_parity_overlap,
)
from .schmidt import channel_participation, schmidt_decompose
from .wavefunction import SpatialWavefunction

DEFAULT_G_LIST = (200.0, 500.0, 1000.0, 2000.0)
HARMONIC_WARN_BELOW = 50.0
SQRT3 = float(np.sqrt(3.0))
_NORM = (SQRT3 / np.pi) ** 0.25
CHANNEL_EQUALITY_TOL = 1e-3
# Relative fit residual (in units of the spread of the fitted values) above
# which the extrapolation is rejected.
FIT_RESIDUAL_TOL = 0.1
N_RATIOS = 3


def _check_g(g: float) -> float:
    g = float(g)
    if not g > 0:
        raise InvalidInputError("coupling must be positive", g=g)
    return g


def equilibrium_separation(g: float) -> float:
    """Minimizer ``(g/2)^(1/3)`` of ``r^2 + g/r``."""
    return (_check_g(g) / 2.0) ** (1.0 / 3.0)


def classical_radius(g: float) -> float:
    """Distance of each localized particle from the trap centre."""
    return 0.5 * equilibrium_separation(g)


def harmonic_u(g: float, r):
    """Normalized Gaussian ``(sqrt3/pi)^(1/4) exp(-sqrt3 (r - r0)^2 / 2)``."""
    if g < HARMONIC_WARN_BELOW:
        warnings.warn(f"harmonic approximation is poor at g={g}", RuntimeWarning, stacklevel=2)
    r0 = equilibrium_separation(g)
    r = np.asarray(r, dtype=float)
    out = _NORM * np.exp(-0.5 * SQRT3 * (r - r0) ** 2)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HarmonicRadial:
    """Relative state in the harmonic approximation; energy ``V(r0) + sqrt3``."""

    g: float
    converged: bool = True

    def __post_init__(self) -> None:
        _check_g(self.g)

    @property
    def r0(self) -> float:
        return equilibrium_separation(self.g)

    @property
    def energy(self) -> float:
        r0 = self.r0
        return r0 * r0 + self.g / r0 + SQRT3

    def u(self, r):
        r0 = self.r0
        return _NORM * np.exp(-0.5 * SQRT3 * (np.asarray(r, dtype=float) - r0) ** 2)

    def phi(self, r):
        r = np.asarray(r, dtype=float)
        # u(0) is exponentially small here; the floor only keeps r = 0 finite.
        return self.u(r) / np.sqrt(np.maximum(r, 1e-300))


def wigner_grid(g: float, n_points: int = 64, half_width: float = 8.0) -> RadialGrid:
    """Radial window ``[r_cl - h, r_cl + h]`` (clipped at 0) around the classical radius."""
    rc = classical_radius(g)
    return build_radial_grid(n_points, rc + half_width, max(0.0, rc - half_width))


def mean_cosine(
    w: SpatialWavefunction, grid: RadialGrid, angular: AngularGrid, pairs: PairQuadrature
) -> float:
    """``<cos theta>`` of the relative angle under ``|psi|^2``."""
    r2 = pairs.r2.ravel()
    r1 = np.broadcast_to(pairs.r1[:, None], pairs.r2.shape).ravel()
    theta, weight, rel_sq = angular.pair_rule(r1, r2)
    cm4_sq = 2.0 * (r1 * r1 + r2 * r2)[:, None] - rel_sq
    dens = w.from_squares(rel_sq, cm4_sq) ** 2 * weight * (r1 * r2)[:, None]
    pw = pairs.weights.ravel()
    total = float(dens.sum(axis=1) @ pw)
    return float((dens * np.cos(theta)).sum(axis=1) @ pw) / total


@dataclass(frozen=True)
class WignerPoint:
    g: float
    classical_radius: float
    omega: tuple[float, ...]
    lambda_ratios: tuple[float, ...]
    parity_overlaps: tuple[float, ...]
    circular_variance: float
    grid_points: int
    angular_points: int


@dataclass(frozen=True)
class WignerAsymptotics:
    g_list: tuple[float, ...]
    omega_inf: float
    lambda_ratios: tuple[float, ...]
    classical_radius: tuple[float, ...]
    points: tuple[WignerPoint, ...]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "g_list": list(self.g_list),
            "omega_inf": self.omega_inf,
            "lambda_ratios": list(self.lambda_ratios),
            "classical_radius": list(self.classical_radius),
            "points": [
                {
                    "g": p.g,
                    "classical_radius": p.classical_radius,
                    "omega": list(p.omega),
                    "lambda_ratios": list(p.lambda_ratios),
                    "parity_overlaps": list(p.parity_overlaps),
                    "circular_variance": p.circular_variance,
                    "grid_points": p.grid_points,
                    "angular_points": p.angular_points,
                }
                for p in self.points
            ],
            "diagnostics": self.diagnostics,
        }


def wigner_point(g: float, grid_points: int = 64, angular_points: int | None = None, l_max: int = 3) -> WignerPoint:
    """Channel spectra of the harmonic-approximation state at one coupling."""
    w = SpatialWavefunction(HarmonicRadial(g))
    grid = wigner_grid(g, grid_points)
    angular = build_angular_grid(angular_points or default_angular_points(g, l_max))
    pairs = build_pair_quadrature(grid)
    kernels = compute_kernels(w, grid, angular, l_max, pairs)
    spectra = [schmidt_decompose(k) for k in kernels]
    lam = spectra[0].lambdas
    if lam.size <= N_RATIOS:
        raise ExtrapolationError("too few retained occupancies for the ratios", g=g, rank=int(lam.size))
    overlaps = tuple(kernel_parity_overlap(kernels[l], kernels[l + 1]) for l in range(l_max))
    return WignerPoint(
        g=float(g),
        classical_radius=classical_radius(g),
        omega=tuple(channel_participation(s) for s in spectra),
        lambda_ratios=tuple(float(lam[0] / lam[s]) for s in range(1, N_RATIOS + 1)),
        parity_overlaps=overlaps,
        circular_variance=1.0 - abs(mean_cosine(w, grid, angular, pairs)),
        grid_points=grid.size,
        angular_points=angular.m_points,
    )


def extrapolate(g_values, values) -> tuple[float, float, np.ndarray]:
    """Least-squares fit ``a + b g^(-1/3)``; returns ``(a, b, residuals)``."""
    x = np.asarray(g_values, dtype=float) ** (-1.0 / 3.0)
    y = np.asarray(values, dtype=float)
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(coef[0]), float(coef[1]), y - design @ coef


def _check_sequence(name: str, g_values, values) -> dict[str, Any]:
    # Only the fitted window has to approach the limit monotonically.
    y = np.asarray(values, dtype=float)[-3:]
    g_values = list(g_values)[-3:]
    steps = np.diff(y)
    if steps.size and not (np.all(steps > 0) or np.all(steps < 0)):
        raise ExtrapolationError(
            "non-monotone approach to the limit", quantity=name, values=y.tolist()
        )
    a, b, res = extrapolate(g_values, y)
    spread = float(np.ptp(y))
    rel = float(np.max(np.abs(res)) / spread) if spread > 0 else 0.0
    if rel > FIT_RESIDUAL_TOL:
        raise ExtrapolationError(
            "fit residuals too large", quantity=name, residual_ratio=rel, values=y.tolist()
        )
    return {"limit": a, "slope": b, "residuals": res.tolist(), "residual_ratio": rel}


def asymptotic_spectrum(
    g_list=DEFAULT_G_LIST,
    grid_points: int = 64,
    angular_points: int | None = None,
    jobs: int = 1,
) -> WignerAsymptotics:
    g_values = [float(g) for g in g_list]
    if len(g_values) < 3:
        raise InvalidInputError("need at least three couplings", g_list=g_values)
    if any(b <= a for a, b in zip(g_values, g_values[1:])):
        raise InvalidInputError("couplings must be strictly increasing", g_list=g_values)
    if g_values[0] < 100:
        raise InvalidInputError("smallest coupling must be at least 100", g_list=g_values)

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(
                pool.map(wigner_point, g_values, [grid_points] * len(g_values), [angular_points] * len(g_values))
            )
    else:
        points = [wigner_point(g, grid_points, angular_points) for g in g_values]

    fits = {"omega_0": _check_sequence("omega_0", g_values, [p.omega[0] for p in points])}
    for s in range(N_RATIOS):
        key = f"ratio_{s + 1}"
        fits[key] = _check_sequence(key, g_values, [p.lambda_ratios[s] for p in points])
    ratios = tuple(fits[f"ratio_{s + 1}"]["limit"] for s in range(N_RATIOS))
    omega_inf = fits["omega_0"]["limit"]

    last = points[-1]
    spread = [max(abs(o - p.omega[0]) for o in p.omega[1:3]) for p in points]
    if max(abs(o - last.omega[0]) for o in last.omega[1:3]) >= CHANNEL_EQUALITY_TOL:
        raise ExtrapolationError(
            "channel purities do not coincide at the largest coupling", omega=list(last.omega)
        )
    if not 0.0 < omega_inf < 1.0:
        raise ExtrapolationError("extrapolated purity outside (0, 1)", omega_inf=omega_inf)
    if any(b <= a for a, b in zip(ratios, ratios[1:])):
        raise ExtrapolationError("occupancy ratios not increasing", ratios=list(ratios))

    diagnostics = {
        "fits": fits,
        "channel_spread": spread,
        "circular_variance": [p.circular_variance for p in points],
    }
    return WignerAsymptotics(
        g_list=tuple(g_values),
        omega_inf=omega_inf,
        lambda_ratios=ratios,
        classical_radius=tuple(p.classical_radius for p in points),
        points=tuple(points),
        diagnostics=diagnostics,
    )
