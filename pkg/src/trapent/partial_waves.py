"""Partial-wave radial kernels and collective occupancies.

For channel ``l`` the kernel is

    A_l(r1, r2) = sqrt(r1 r2) * int_0^{2 pi} psi(r1, r2, theta) cos(l theta) dtheta,

so that ``psi = sum_l (2 - delta_l0) A_l cos(l theta) / (2 pi sqrt(r1 r2))``.

``A_l`` is not smooth across the diagonal ``r1 = r2``: the cusp of ``psi``
at particle coalescence leaves a ``(r1 - r2)^2 log|r1 - r2|`` term. Sampling
the kernel on a Gauss grid (plain Nystrom) therefore converges only
algebraically. Two quantities are computed here from a pair quadrature built
for that singularity:

* ``eta_l = int int A_l^2`` (the collective occupancy), on the triangle
  ``r1 < r2`` with ``r2 - r1 = (r_max - r1) u^3``, which turns the diagonal
  term into a smooth endpoint factor;
* the Galerkin matrix of the integral operator in the trial space spanned by
  ``sqrt(r) * l_j(r)`` (cardinal polynomials of the radial grid), whose
  eigenvalues are the Schmidt coefficients.

Point samples ``A_l(r_i, r_j)`` are kept as well; they are what overlap and
oracle comparisons use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AliasingError, InvalidInputError
from .numerics import AngularGrid, RadialGrid, gauss_legendre
from .wavefunction import SpatialWavefunction

OCCUPANCY_TAIL = 1e-8
L_MAX_CAP = 64
PAIR_DENSITY_OUTER = 6.0
PAIR_DENSITY_INNER = 8.0
_CHUNK_ELEMENTS = 1_500_000


def default_angular_points(g: float, l_max: int) -> int:
    return int(max(64, 4 * (l_max + 1), np.ceil(16.0 * (max(g, 0.0) / 2.0) ** (1.0 / 3.0))))


def select_l_max(etas, threshold: float = OCCUPANCY_TAIL, cap: int = L_MAX_CAP):
    """Smallest ``L`` with ``2 eta_L < threshold``.

    Returns ``(L, saturated)``; ``saturated`` is true when no channel up to
    ``min(cap, len(etas) - 1)`` satisfies the criterion.
    """
    etas = np.asarray(etas, dtype=float)
    top = min(cap, etas.size - 1)
    for l in range(1, top + 1):
        if 2.0 * etas[l] < threshold:
            return l, False
    return top, True


@dataclass(frozen=True, eq=False)
class PairQuadrature:
    """Diagonal-adapted rule on ``r_min <= r1 <= r2 <= r_max``."""

    grid: RadialGrid
    r1: np.ndarray  # (n1,)
    r2: np.ndarray  # (n1, n2)
    weights: np.ndarray  # (n1, n2)

    @cached_property
    def left(self) -> np.ndarray:
        """Trial functions at the outer nodes, shape ``(n1, n)``."""
        return _trial(self.grid, self.r1)

    @cached_property
    def right(self) -> np.ndarray:
        """Trial functions at the inner nodes, shape ``(n1, n2, n)``."""
        n1, n2 = self.r2.shape
        return _trial(self.grid, self.r2.ravel()).reshape(n1, n2, self.grid.size)


def _trial(grid: RadialGrid, r: np.ndarray) -> np.ndarray:
    # c_j(r) = sqrt(r / r_j) l_j(r); Gram matrix diag(w) by exactness of the rule.
    return grid.cardinal(r) * np.sqrt(r[:, None] / grid.nodes[None, :])


def build_pair_quadrature(grid: RadialGrid, outer: int | None = None, inner: int | None = None):
    n = grid.size
    # Enough nodes for the trial functions and for the ring of width ~1 that
    # the state forms at strong coupling.
    span = grid.r_max - grid.r_min
    outer = outer or max(int(np.ceil(1.5 * n)) + 16, int(np.ceil(PAIR_DENSITY_OUTER * span)))
    inner = inner or max(int(np.ceil(1.5 * n)) + 16, int(np.ceil(PAIR_DENSITY_INNER * span)))
    x1, w1 = gauss_legendre(outer, grid.r_min, grid.r_max)
    u, wu = gauss_legendre(inner, 0.0, 1.0)
    span = (grid.r_max - x1)[:, None]
    r2 = x1[:, None] + span * u[None, :] ** 3
    weights = w1[:, None] * wu[None, :] * span * 3.0 * u[None, :] ** 2
    return PairQuadrature(grid, x1, r2, weights)


def channel_moments(w: SpatialWavefunction, r1, r2, angular: AngularGrid, l_max: int) -> np.ndarray:
    """``A_l(r1[p], r2[p])`` for ``l = 0..l_max``; shape ``(l_max + 1, P)``."""
    r1 = np.asarray(r1, dtype=float).ravel()
    r2 = np.asarray(r2, dtype=float).ravel()
    theta, weight, rel_sq = angular.pair_rule(r1, r2)
    cm4_sq = 2.0 * (r1 * r1 + r2 * r2)[:, None] - rel_sq
    f = w.from_squares(rel_sq, cm4_sq) * weight
    c = np.cos(theta)
    out = np.empty((l_max + 1, r1.size))
    prev, cur = np.ones_like(c), c
    out[0] = f.sum(axis=1)
    for l in range(1, l_max + 1):
        out[l] = np.einsum("pm,pm->p", f, cur)
        prev, cur = cur, 2.0 * c * cur - prev
    return out * np.sqrt(r1 * r2)[None, :]


def _validate(angular: AngularGrid, l_max: int) -> None:
    if l_max < 0:
        raise InvalidInputError("channel index must be non-negative", l=l_max)
    if 2 * l_max >= angular.m_points:
        raise AliasingError(
            "channel aliases on the angular grid", l=l_max, m_points=angular.m_points
        )
    if angular.m_points < 4 * (l_max + 1):
        raise InvalidInputError(
            "angular grid too coarse: need m_points >= 4 (l + 1)",
            l=l_max,
            m_points=angular.m_points,
        )


def _row_chunks(rows: int, per_row: int):
    step = max(1, _CHUNK_ELEMENTS // max(per_row, 1))
    for start in range(0, rows, step):
        yield slice(start, min(rows, start + step))


@dataclass(frozen=True, eq=False)
class PartialWaveKernel:
    """Radial kernel of one angular channel.

    ``values`` are point samples ``A_l(r_i, r_j)``; ``operator`` is the
    symmetric matrix of the integral operator in the orthonormal trial basis
    ``sqrt(r / (r_j w_j)) l_j(r)``; ``eta`` is the collective occupancy from
    the diagonal-adapted pair quadrature.
    """

    l: int
    grid: RadialGrid
    values: np.ndarray
    g: float
    operator: np.ndarray
    eta: float
    angular: AngularGrid

    @property
    def sampled_norm_sq(self) -> float:
        """Plain Nystrom estimate ``sum w_i w_j A_ij^2`` of the occupancy."""
        w = self.grid.weights
        return float(w @ (self.values**2) @ w)

    @property
    def operator_norm_sq(self) -> float:
        return float(np.sum(self.operator**2))


def channel_occupancies(
    w: SpatialWavefunction,
    grid: RadialGrid,
    angular: AngularGrid,
    l_max: int,
    pairs: PairQuadrature | None = None,
) -> np.ndarray:
    """Collective occupancies ``eta_0..eta_{l_max}`` without building operators."""
    _validate(angular, l_max)
    pairs = pairs or build_pair_quadrature(grid)
    n1, n2 = pairs.r2.shape
    eta = np.zeros(l_max + 1)
    for sl in _row_chunks(n1, n2 * angular.points_per_pair):
        r2 = pairs.r2[sl]
        r1 = np.broadcast_to(pairs.r1[sl, None], r2.shape)
        a = channel_moments(w, r1, r2, angular, l_max)
        eta += 2.0 * (a**2) @ pairs.weights[sl].ravel()
    return eta


def compute_kernels(
    w: SpatialWavefunction,
    grid: RadialGrid,
    angular: AngularGrid,
    l_max: int,
    pairs: PairQuadrature | None = None,
) -> list[PartialWaveKernel]:
    """Kernels for channels ``0..l_max`` sharing one set of wavefunction samples."""
    _validate(angular, l_max)
    pairs = pairs or build_pair_quadrature(grid)
    n = grid.size
    n1, n2 = pairs.r2.shape
    nl = l_max + 1
    eta = np.zeros(nl)
    half = np.zeros((nl, n, n))
    left, right = pairs.left, pairs.right
    for sl in _row_chunks(n1, n2 * angular.points_per_pair):
        r2 = pairs.r2[sl]
        rows = r2.shape[0]
        r1 = np.broadcast_to(pairs.r1[sl, None], r2.shape)
        a = channel_moments(w, r1, r2, angular, l_max).reshape(nl, rows, n2)
        wa = a * pairs.weights[sl][None]
        eta += 2.0 * np.einsum("lab,lab->l", wa, a)
        y = np.einsum("lab,abj->laj", wa, right[sl])
        half += np.einsum("ai,laj->lij", left[sl], y)
    full = half + half.transpose(0, 2, 1)
    scale = 1.0 / np.sqrt(grid.weights)
    ops = full * scale[None, :, None] * scale[None, None, :]

    iu, ju = np.triu_indices(n)
    samples = np.empty((nl, iu.size))
    per = angular.points_per_pair
    step = max(1, _CHUNK_ELEMENTS // per)
    for start in range(0, iu.size, step):
        idx = slice(start, start + step)
        samples[:, idx] = channel_moments(
            w, grid.nodes[iu[idx]], grid.nodes[ju[idx]], angular, l_max
        )
    values = np.empty((nl, n, n))
    values[:, iu, ju] = samples
    values[:, ju, iu] = samples
    return [
        PartialWaveKernel(
            l=l,
            grid=grid,
            values=values[l],
            g=w.g,
            operator=0.5 * (ops[l] + ops[l].T),
            eta=float(eta[l]),
            angular=angular,
        )
        for l in range(nl)
    ]


def compute_kernel(
    w: SpatialWavefunction, grid: RadialGrid, l: int, angular: AngularGrid
) -> PartialWaveKernel:
    """Kernel of a single channel ``l``."""
    if l < 0:
        raise InvalidInputError("channel index must be non-negative", l=l)
    return compute_kernels(w, grid, angular, l)[l]


def collective_occupancy(k: PartialWaveKernel) -> float:
    """``eta_l = ||A_l||^2``, the trace of the channel density matrix."""
    return k.eta


def kernel_parity_overlap(a: PartialWaveKernel, b: PartialWaveKernel) -> float:
    """Normalized weighted Frobenius inner product of two kernels."""
    if a.grid is not b.grid and not (
        a.grid.size == b.grid.size
        and np.array_equal(a.grid.nodes, b.grid.nodes)
        and np.array_equal(a.grid.weights, b.grid.weights)
    ):
        raise InvalidInputError("kernels live on different grids")
    if a.g != b.g:
        raise InvalidInputError("kernels belong to different couplings", ga=a.g, gb=b.g)
    wv = a.grid.weights
    inner = float(wv @ (a.values * b.values) @ wv)
    norm = np.sqrt(a.sampled_norm_sq * b.sampled_norm_sq)
    if norm == 0:
        raise InvalidInputError("overlap of a vanishing kernel is undefined")
    return float(np.clip(inner / norm, -1.0, 1.0))
