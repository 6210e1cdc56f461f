"""Spatial singlet wavefunction in single-particle polar coordinates.

With the centre of mass in its ground state the wavefunction reads

    psi = (2/sqrt(pi)) exp(-2 R^2) * (1/sqrt(2 pi)) * phi(r),

where ``phi = u/sqrt(r)`` is the relative radial amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, StateError
from .radial_solver import RelativeRadial

PSI_PREFACTOR = float(np.sqrt(2.0) / np.pi)
_CLAMP = 1e-14


def _check_radii(r1, r2) -> tuple[np.ndarray, np.ndarray]:
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    if np.any(r1 < 0) or np.any(r2 < 0):
        raise InvalidInputError("radii must be non-negative")
    return r1, r2


def separation_squares(r1, r2, theta) -> tuple[np.ndarray, np.ndarray]:
    """``(r^2, 4 R^2)`` in a cancellation-free form based on ``sin^2(theta/2)``."""
    s2 = np.sin(0.5 * np.asarray(theta, dtype=float)) ** 2
    cross = 4.0 * r1 * r2 * s2
    return (r1 - r2) ** 2 + cross, (r1 + r2) ** 2 - cross


def rel_cm_coords(r1, r2, theta) -> tuple[np.ndarray, np.ndarray]:
    """Relative distance ``r`` and centre-of-mass radius ``R``."""
    r1, r2 = _check_radii(r1, r2)
    rel_sq, cm4_sq = separation_squares(r1, r2, theta)
    for q in (rel_sq, cm4_sq):
        if np.any(q < -_CLAMP * (1.0 + (r1 + r2) ** 2)):
            raise InvalidInputError("negative radicand beyond rounding")
    r = np.sqrt(np.maximum(rel_sq, 0.0))
    big_r = 0.5 * np.sqrt(np.maximum(cm4_sq, 0.0))
    if r.ndim == 0:
        return float(r), float(big_r)
    return r, big_r


@dataclass(frozen=True)
class SpatialWavefunction:
    radial: RelativeRadial

    @property
    def g(self) -> float:
        return float(self.radial.g)

    def from_squares(self, rel_sq: np.ndarray, cm4_sq: np.ndarray) -> np.ndarray:
        """Evaluate from ``r^2`` and ``4 R^2`` directly (hot path of the kernels)."""
        rel = np.sqrt(np.maximum(rel_sq, 0.0))
        flat = self.radial.phi(rel.ravel()).reshape(rel.shape)
        return PSI_PREFACTOR * np.exp(-0.5 * cm4_sq) * flat

    def __call__(self, r1, r2, theta) -> np.ndarray:
        return eval_psi(self, r1, r2, theta)


def eval_psi(w: SpatialWavefunction, r1, r2, theta):
    """Wavefunction value at radii ``r1, r2`` and relative angle ``theta``."""
    if not getattr(w.radial, "converged", True):
        raise StateError("radial solution is not converged")
    r1, r2 = _check_radii(r1, r2)
    r1, r2, th = np.broadcast_arrays(r1, r2, np.asarray(theta, dtype=float))
    out = w.from_squares(*separation_squares(r1, r2, th))
    return float(out) if out.ndim == 0 else out
