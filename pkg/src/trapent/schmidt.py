"""Schmidt decomposition of each partial-wave channel.

The eigenproblem ``int A_l(r1, r2) chi(r2) dr2 = kappa chi(r1)`` is solved in
the orthonormal trial basis of the radial grid, so an eigenvector ``v`` maps
to nodal orbital values ``chi(r_i) = v_i / sqrt(w_i)``, as in a symmetrized
Nystrom scheme. Between nodes the orbitals are interpolated as
``sqrt(r) * polynomial``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, InvalidInputError, NumericalError, UndefinedChannelError
from .numerics import RadialGrid, symmetric_eigendecompose
from .partial_waves import PartialWaveKernel

RANK_THRESHOLD = 1e-10
# Coefficients below this are round-off (lambda < 1e-26) whatever the channel.
KAPPA_FLOOR = 1e-13
PURITY_CROSS_CHECK = 1e-10


class TruncationWarning(UserWarning):
    """Reconstruction used fewer channels or ranks than requested."""


@dataclass(frozen=True, eq=False)
class ChannelSpectrum:
    l: int
    kappas: np.ndarray
    chis: np.ndarray  # (S, n) nodal values
    grid: RadialGrid
    eta: float | None = None
    operator: np.ndarray | None = None

    @property
    def lambdas(self) -> np.ndarray:
        return self.kappas**2

    @property
    def rank(self) -> int:
        return self.kappas.size

    def orbital(self, s: int, r) -> np.ndarray:
        """``chi_s`` at arbitrary radii inside the grid interval."""
        r = np.asarray(r, dtype=float)
        nodes = self.grid.nodes
        xi = self.chis[s] / np.sqrt(nodes)
        return np.sqrt(r) * self.grid.interpolate(xi, r)


def _fix_sign(chi: np.ndarray) -> np.ndarray:
    mag = np.abs(chi)
    first = int(np.argmax(mag > 0.5 * mag.max()))
    return -chi if chi[first] < 0 else chi


def schmidt_decompose(k: PartialWaveKernel, threshold: float = RANK_THRESHOLD) -> ChannelSpectrum:
    """Schmidt coefficients and radial orbitals of one channel."""
    try:
        kappa, vecs = symmetric_eigendecompose(k.operator)
    except (InvalidInputError, np.linalg.LinAlgError) as exc:
        raise NumericalError(
            "channel eigendecomposition failed", l=k.l, g=k.g, reason=str(exc)
        ) from exc
    lead = abs(kappa[0]) if kappa.size else 0.0
    keep = np.abs(kappa) > max(threshold * lead, KAPPA_FLOOR)
    sw = np.sqrt(k.grid.weights)
    chis = np.array([_fix_sign(vecs[:, s] / sw) for s in np.flatnonzero(keep)])
    if chis.size == 0:
        chis = np.zeros((0, k.grid.size))
    return ChannelSpectrum(
        l=k.l,
        kappas=kappa[keep],
        chis=chis,
        grid=k.grid,
        eta=k.eta,
        operator=k.operator,
    )


def channel_purity(spec: ChannelSpectrum, cross_check: bool = True) -> float:
    """``tr rho_l^2 = sum_s lambda_s^2``.

    With ``cross_check`` the value is compared against the squared Frobenius
    norm of ``rho_l = B @ B`` formed from the operator matrix.
    """
    value = float(np.sum(spec.lambdas**2))
    if cross_check and spec.operator is not None:
        direct = channel_purity_matrix(spec)
        # Discarded ranks contribute below threshold^4 relative; anything
        # larger points at a broken decomposition.
        if abs(direct - value) > PURITY_CROSS_CHECK * max(direct, value) + 1e-40:
            raise ConsistencyError(
                "channel purity paths disagree", l=spec.l, spectral=value, matrix=direct
            )
    return value


def channel_purity_matrix(spec: ChannelSpectrum) -> float:
    """Second path: ``||B B||_F^2`` straight from the operator matrix."""
    if spec.operator is None:
        raise InvalidInputError("spectrum carries no operator matrix")
    rho = spec.operator @ spec.operator
    return float(np.sum(rho * rho))


def channel_participation(spec: ChannelSpectrum) -> float:
    """``Omega_l = tr rho_l^2 / eta_l^2``, the purity of the normalized channel.

    ``eta_l`` is the collective occupancy carried by the spectrum when
    available (it includes the weight of unresolved small eigenvalues) and
    the eigenvalue sum otherwise.
    """
    eta = spec.eta if spec.eta is not None else float(np.sum(spec.lambdas))
    if not eta > 1e-14:
        raise UndefinedChannelError("channel occupancy vanishes", l=spec.l, eta=eta)
    return float(np.sum(spec.lambdas**2) / eta**2)


@dataclass(frozen=True, eq=False)
class SchmidtMode:
    """Single-particle orbital ``chi(r)/sqrt(r) * Y(phi)`` of one channel."""

    s: int
    l: int
    kappa: float
    radial: np.ndarray
    angular_kind: str
    grid: RadialGrid

    def angular(self, phi) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        if self.angular_kind == "isotropic":
            return np.full_like(phi, 1.0 / np.sqrt(2.0 * np.pi))
        trig = np.cos if self.angular_kind == "cosine" else np.sin
        return trig(self.l * phi) / np.sqrt(np.pi)

    def radial_at_nodes(self) -> np.ndarray:
        """``chi(r_i) / sqrt(r_i)``: the mode's radial factor at the grid nodes."""
        return self.radial / np.sqrt(self.grid.nodes)


def real_modes(spec: ChannelSpectrum) -> list[SchmidtMode]:
    """Real single-particle modes; cosine and sine partners share ``chi`` and ``kappa``."""
    kinds = ("isotropic",) if spec.l == 0 else ("cosine", "sine")
    return [
        SchmidtMode(s, spec.l, float(spec.kappas[s]), spec.chis[s], kind, spec.grid)
        for s in range(spec.rank)
        for kind in kinds
    ]


@dataclass(frozen=True)
class Reconstruction:
    values: np.ndarray
    l_max: int
    ranks: int
    truncated: bool


def reconstruct_psi(spectra, ranks: int, r1, r2, theta, phi1: float = 0.0) -> Reconstruction:
    """Sum the real-mode Schmidt series at ``(r1, phi1)`` and ``(r2, phi1 + theta)``."""
    spectra = sorted(spectra, key=lambda s: s.l)
    ls = [s.l for s in spectra]
    if not ls:
        raise InvalidInputError("no spectra supplied")
    truncated = ls != list(range(len(ls)))
    if truncated:
        warnings.warn(
            "channel list does not start at l = 0 or has gaps", TruncationWarning, stacklevel=2
        )
    r1, r2, th = np.broadcast_arrays(
        np.asarray(r1, dtype=float), np.asarray(r2, dtype=float), np.asarray(theta, dtype=float)
    )
    phi2 = phi1 + th
    total = np.zeros(r1.shape)
    for spec in spectra:
        for s in range(min(ranks, spec.rank)):
            x1 = spec.orbital(s, r1) / np.sqrt(r1)
            x2 = spec.orbital(s, r2) / np.sqrt(r2)
            if spec.l == 0:
                ang = np.full(r1.shape, 1.0 / (2.0 * np.pi))
            else:
                ang = (
                    np.cos(spec.l * phi1) * np.cos(spec.l * phi2)
                    + np.sin(spec.l * phi1) * np.sin(spec.l * phi2)
                ) / np.pi
            total += spec.kappas[s] * x1 * x2 * ang
    return Reconstruction(total, max(ls), ranks, truncated)
