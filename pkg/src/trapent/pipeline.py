"""Single-coupling analysis: radial solve, channel kernels, spectra, measures."""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError
from .measures import (
    EntanglementReport,
    effective_slater_rank,
    linear_entropy,
    partial_wave_count,
    participation_ratio,
    spatial_purity,
)
from .numerics import AngularGrid, RadialGrid, build_angular_grid, build_radial_grid
from .partial_waves import (
    L_MAX_CAP,
    OCCUPANCY_TAIL,
    PartialWaveKernel,
    build_pair_quadrature,
    channel_occupancies,
    compute_kernels,
    default_angular_points,
    select_l_max,
)
from .radial_solver import (
    DEFAULT_BASIS_SCALE,
    DEFAULT_BASIS_SIZE,
    default_r_max,
    solve_ground_radial,
)
from .schmidt import (
    RANK_THRESHOLD,
    ChannelSpectrum,
    channel_participation,
    channel_purity,
    schmidt_decompose,
)
from .wavefunction import SpatialWavefunction

DEFAULT_GRID_POINTS = 64
# Channels whose share 2 eta_l / eta_0 stays below this count as negligible.
NEGLIGIBLE_SHARE = 1e-3


class TailWarning(UserWarning):
    """The channel cap was reached before the occupancy tail became negligible."""


@dataclass(frozen=True)
class AnalysisConfig:
    """Numerical settings; ``None`` selects the documented automatic rule."""

    basis_size: int = DEFAULT_BASIS_SIZE
    basis_scale: float = DEFAULT_BASIS_SCALE
    grid_points: int = DEFAULT_GRID_POINTS
    r_max: float | None = None
    l_max: int | None = None
    angular_points: int | None = None
    occupancy_tail: float = OCCUPANCY_TAIL
    l_max_cap: int = L_MAX_CAP
    rank_threshold: float = RANK_THRESHOLD

    def __post_init__(self) -> None:
        if self.l_max is not None and self.l_max < 0:
            raise ConfigurationError("l_max must be non-negative", l_max=self.l_max)
        if self.angular_points is not None and self.angular_points < 8:
            raise ConfigurationError("angular_points too small", angular_points=self.angular_points)
        if self.r_max is not None and not self.r_max > 0:
            raise ConfigurationError("r_max must be positive", r_max=self.r_max)


@dataclass(frozen=True, eq=False)
class Analysis:
    report: EntanglementReport
    kernels: list[PartialWaveKernel]
    spectra: list[ChannelSpectrum]
    wavefunction: SpatialWavefunction
    grid: RadialGrid
    angular: AngularGrid


def resolve_channels(
    w: SpatialWavefunction, grid: RadialGrid, config: AnalysisConfig, pairs=None
) -> tuple[int, int, bool]:
    """Pick ``(l_max, angular_points, saturated)`` from the configuration.

    With an automatic ``l_max`` the occupancies are probed on successively
    finer angular grids until ``2 eta_L`` drops below the tail threshold or
    the cap is reached.
    """
    g = w.g
    if config.l_max is not None:
        m = config.angular_points or default_angular_points(g, config.l_max)
        return config.l_max, m, False
    cap = config.l_max_cap
    probe = config.angular_points or default_angular_points(g, 15)
    while True:
        angular = build_angular_grid(probe)
        top = min(angular.l_capacity, cap)
        etas = channel_occupancies(w, grid, angular, top, pairs)
        l_max, saturated = select_l_max(etas, config.occupancy_tail, top)
        if not saturated or top >= cap or config.angular_points is not None:
            break
        probe = default_angular_points(g, min(2 * (top + 1) - 1, cap))
    if saturated and top >= cap:
        warnings.warn(f"channel cap {cap} reached at g={g}", TailWarning, stacklevel=2)
    m = config.angular_points or default_angular_points(g, l_max)
    return l_max, m, saturated


def analyze(g: float, config: AnalysisConfig | None = None) -> Analysis:
    config = config or AnalysisConfig()
    r_max = config.r_max if config.r_max is not None else default_r_max(g)
    grid = build_radial_grid(config.grid_points, r_max)
    radial = solve_ground_radial(g, config.basis_size, config.basis_scale, grid)
    return analyze_wavefunction(SpatialWavefunction(radial), grid, config)


def analyze_wavefunction(
    w: SpatialWavefunction, grid: RadialGrid, config: AnalysisConfig
) -> Analysis:
    pairs = build_pair_quadrature(grid)
    l_max, m_points, saturated = resolve_channels(w, grid, config, pairs)
    angular = build_angular_grid(m_points)
    kernels = compute_kernels(w, grid, angular, l_max, pairs)
    spectra = [schmidt_decompose(k, config.rank_threshold) for k in kernels]
    purities = np.array([channel_purity(s) for s in spectra])
    eta = np.array([k.eta for k in kernels])
    omega = []
    for s in spectra:
        omega.append(channel_participation(s) if s.eta is not None and s.eta > 1e-14 else float("nan"))
    R = participation_ratio(purities)
    n_partial, n_saturated = partial_wave_count(purities, R, with_flag=True)
    tail_eta = eta[-1]
    shares = 2.0 * eta[2:] / eta[0] if eta.size > 2 else np.zeros(0)
    metadata = {
        "r_max": grid.r_max,
        "grid_points": grid.size,
        "angular_points": angular.m_points,
        "angular_cusp_points": angular.m_cusp,
        "l_max": l_max,
        "l_max_saturated": saturated,
        "basis_size": getattr(w.radial, "basis_size", None),
        "basis_scale": getattr(w.radial, "basis_scale", None),
        "occupancy_tail": config.occupancy_tail,
        "truncation_bias_R": float(2.0 * R**2 * tail_eta**2),
        "n_partial_saturated": n_saturated,
        "negligible_share_threshold": NEGLIGIBLE_SHARE,
        "max_share_l_gt_1": float(shares.max()) if shares.size else 0.0,
        "ranks": [s.rank for s in spectra],
        "operator_trace_deficit": [float(k.eta - k.operator_norm_sq) for k in kernels],
    }
    report = EntanglementReport(
        g=w.g,
        energy=float(w.radial.energy),
        eta=tuple(float(x) for x in eta),
        omega=tuple(float(x) for x in omega),
        channel_purities=tuple(float(x) for x in purities),
        purity_spatial=spatial_purity(purities),
        participation=R,
        slater_rank=effective_slater_rank(R),
        linear_entropy=linear_entropy(R),
        n_partial=n_partial,
        slater_estimate=2 * n_partial - 1,
        l_max_used=l_max,
        metadata=metadata,
    )
    return Analysis(report, kernels, spectra, w, grid, angular)


def config_echo(config: AnalysisConfig, report: EntanglementReport) -> dict:
    """Configuration with every automatic value replaced by its resolved value."""
    echo = asdict(config)
    echo.update(
        r_max=report.metadata["r_max"],
        l_max=report.metadata["l_max"],
        angular_points=report.metadata["angular_points"],
    )
    return echo
