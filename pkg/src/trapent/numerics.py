"""Quadrature grids, Lagrange interpolation on Gauss nodes and the
symmetric eigensolver used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import scipy.linalg
from numpy.polynomial.legendre import leggauss

from .errors import ConfigurationError, InvalidInputError

MIN_RADIAL_POINTS = 16
MIN_ANGULAR_POINTS = 8
# Pairs closer than this (in units of 2*sqrt(r1*r2)) skip the coalescence map.
_COALESCENCE_FLOOR = 1e-10


@lru_cache(maxsize=64)
def _reference_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on ``[a, b]`` (ascending nodes)."""
    x, w = _reference_rule(int(n))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Gauss-Legendre rule on ``[r_min, r_max]`` (``r_min`` is 0 by default).

    Besides integrating, the grid doubles as the node set of the radial
    trial space ``sqrt(r) * P_{n-1}(r)``: :meth:`cardinal` evaluates the
    Lagrange cardinal polynomials of the nodes anywhere in the interval.
    """

    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    r_min: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise InvalidInputError("nodes and weights must be matching 1-D arrays")
        if np.any(np.diff(self.nodes) <= 0):
            raise InvalidInputError("radial nodes must be strictly increasing")
        if self.nodes[0] <= self.r_min or self.nodes[-1] >= self.r_max:
            raise InvalidInputError("radial nodes must lie strictly inside the interval")
        if np.any(self.weights <= 0):
            raise InvalidInputError("radial weights must be positive")

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    @cached_property
    def _barycentric(self) -> np.ndarray:
        # Closed form for Gauss-Legendre points; the overall scale cancels.
        x = 2.0 * (self.nodes - self.r_min) / (self.r_max - self.r_min) - 1.0
        w = 2.0 * self.weights / (self.r_max - self.r_min)
        sign = np.where(np.arange(self.size) % 2 == 0, 1.0, -1.0)
        return sign * np.sqrt((1.0 - x * x) * w)

    def cardinal(self, points: np.ndarray) -> np.ndarray:
        """Matrix ``L[p, j] = ell_j(points[p])`` of Lagrange cardinal polynomials."""
        pts = np.asarray(points, dtype=float).ravel()
        diff = pts[:, None] - self.nodes[None, :]
        hit = diff == 0.0
        diff[hit] = 1.0
        terms = self._barycentric[None, :] / diff
        out = terms / terms.sum(axis=1, keepdims=True)
        rows = hit.any(axis=1)
        if rows.any():
            out[rows] = hit[rows].astype(float)
        return out

    def interpolate(self, values: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Polynomial interpolant of nodal ``values`` evaluated at ``points``."""
        pts = np.asarray(points, dtype=float)
        return (self.cardinal(pts) @ np.asarray(values, dtype=float)).reshape(pts.shape)


def build_radial_grid(n_points: int, r_max: float, r_min: float = 0.0) -> RadialGrid:
    """Affine Gauss-Legendre grid with ``n_points`` nodes on ``[r_min, r_max]``."""
    if int(n_points) != n_points or n_points < MIN_RADIAL_POINTS:
        raise ConfigurationError(
            f"radial grid needs at least {MIN_RADIAL_POINTS} points", n_points=n_points
        )
    if not np.isfinite(r_max) or r_max <= 0:
        raise ConfigurationError("r_max must be positive", r_max=r_max)
    if not 0.0 <= r_min < r_max:
        raise ConfigurationError("need 0 <= r_min < r_max", r_min=r_min, r_max=r_max)
    x, w = gauss_legendre(int(n_points), float(r_min), float(r_max))
    return RadialGrid(x, w, float(r_max), float(r_min))


@dataclass(frozen=True)
class AngularGrid:
    """Rule for the relative-angle integral over ``[0, 2*pi)``.

    ``kind="uniform"`` is the plain trapezoid rule with ``m_points`` nodes.
    ``kind="coalescence"`` (default for kernels) exploits the evenness of the
    integrand: it places ``m_points`` Gauss nodes on ``[theta_split, pi]`` and
    ``m_cusp`` nodes on ``[0, theta_split]`` through the substitution
    ``sin(theta/2) = d/(2 sqrt(r1 r2)) * sinh(tau)``, under which the
    inter-particle distance becomes ``|r1 - r2| cosh(tau)``. That removes the
    electron-electron cusp from the integrand, so the rule converges
    spectrally even when ``r1`` is close to ``r2``.
    """

    m_points: int
    kind: str = "coalescence"
    m_cusp: int | None = None

    def __post_init__(self) -> None:
        if int(self.m_points) != self.m_points or self.m_points < MIN_ANGULAR_POINTS:
            raise ConfigurationError(
                f"angular grid needs at least {MIN_ANGULAR_POINTS} points",
                m_points=self.m_points,
            )
        if self.kind not in ("uniform", "coalescence"):
            raise ConfigurationError("unknown angular rule", kind=self.kind)
        if self.m_cusp is None:
            object.__setattr__(self, "m_cusp", max(32, self.m_points // 2))

    @property
    def l_capacity(self) -> int:
        """Largest channel allowed by the ``M >= 4(l+1)`` resolution rule."""
        return self.m_points // 4 - 1

    @property
    def theta_split(self) -> float:
        return min(np.pi / 4.0, np.pi / (self.l_capacity + 1))

    @property
    def nodes(self) -> np.ndarray:
        """Uniform nodes ``2 pi k / M`` (the reference trapezoid rule)."""
        return 2.0 * np.pi * np.arange(self.m_points) / self.m_points

    @property
    def weight(self) -> float:
        return 2.0 * np.pi / self.m_points

    @property
    def points_per_pair(self) -> int:
        return self.m_points if self.kind == "uniform" else self.m_points + self.m_cusp

    def pair_rule(self, r1: np.ndarray, r2: np.ndarray):
        """Per-pair nodes for the angle integral.

        Returns ``(theta, weight, rel_sq)`` of shape ``(P, m)``: angles, weights
        (summing to ``2 pi``) and the squared relative distance computed without
        cancellation.
        """
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        p = r1 * r2
        d = r2 - r1
        if self.kind == "uniform":
            th = np.broadcast_to(self.nodes, (r1.size, self.m_points))
            wt = np.full_like(th, self.weight)
            rel_sq = d[:, None] ** 2 + 4.0 * p[:, None] * np.sin(th / 2.0) ** 2
            return th, wt, rel_sq

        split = self.theta_split
        xs, ws = gauss_legendre(self.m_points, split, np.pi)
        far_th = np.broadcast_to(xs, (r1.size, self.m_points))
        far_w = np.broadcast_to(ws, (r1.size, self.m_points))
        far_rel = d[:, None] ** 2 + 4.0 * p[:, None] * np.sin(far_th / 2.0) ** 2

        # Near part: sinh substitution where the cusp is sharp, plain Gauss otherwise.
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.abs(d) / (2.0 * np.sqrt(p))
        ratio = np.where(np.isfinite(ratio), ratio, np.inf)
        sharp = ratio > _COALESCENCE_FLOOR
        s_split = np.sin(split / 2.0)
        xt, wt = gauss_legendre(self.m_cusp, 0.0, 1.0)
        safe = np.where(sharp, ratio, 1.0)
        tmax = np.arcsinh(s_split / safe)
        tau = xt[None, :] * tmax[:, None]
        sh = safe[:, None] * np.sinh(tau)
        near_th = 2.0 * np.arcsin(np.minimum(sh, 1.0))
        near_w = wt[None, :] * tmax[:, None] * 2.0 * safe[:, None] * np.cosh(tau)
        near_w = near_w / np.sqrt(1.0 - sh * sh)
        near_rel = (d[:, None] * np.cosh(tau)) ** 2
        if not sharp.all():
            xg, wg = gauss_legendre(self.m_cusp, 0.0, split)
            flat = ~sharp
            near_th[flat] = xg
            near_w[flat] = wg
            near_rel[flat] = d[flat, None] ** 2 + 4.0 * p[flat, None] * np.sin(xg / 2.0) ** 2
        th = np.concatenate([near_th, far_th], axis=1)
        w = 2.0 * np.concatenate([near_w, far_w], axis=1)
        rel = np.concatenate([near_rel, far_rel], axis=1)
        return th, w, rel


def build_angular_grid(m_points: int, kind: str = "coalescence") -> AngularGrid:
    return AngularGrid(int(m_points), kind)


def symmetric_eigendecompose(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a real symmetric matrix ordered by decreasing ``|lambda|``.

    The input is symmetrized first; eigenvectors are the orthonormal columns
    of the returned matrix.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError("matrix must be square", shape=a.shape)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    scale = np.abs(a).max() if a.size else 0.0
    if scale > 0 and np.abs(a - a.T).max() > 1e-6 * scale:
        raise InvalidInputError("matrix is not symmetric")
    vals, vecs = scipy.linalg.eigh(0.5 * (a + a.T))
    order = np.argsort(-np.abs(vals), kind="stable")
    return vals[order], vecs[:, order]
