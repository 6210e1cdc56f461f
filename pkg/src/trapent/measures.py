"""Entanglement measures built from the channel purities ``p_l = tr rho_l^2``.

The spatial reduced density matrix splits into channels, channels with
``l >= 1`` appearing twice (``+l`` and ``-l``); the singlet spin factor
contributes an extra 1/2 to the full purity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConsistencyError, InvalidInputError

INTEGER_SLACK = 1e-9
R_FLOOR_SLACK = 1e-9


def spatial_purity(channel_purities) -> float:
    """``tr rho^2 = p_0 + 2 sum_{l>=1} p_l``."""
    p = np.asarray(channel_purities, dtype=float)
    if p.size == 0:
        raise InvalidInputError("no channel purities")
    return float(p[0] + 2.0 * p[1:].sum())


def participation_ratio(channel_purities, l_max: int | None = None) -> float:
    """``R = [p_0/2 + sum_{l=1}^{l_max} p_l]^{-1}``."""
    p = np.asarray(channel_purities, dtype=float)
    if p.size == 0:
        raise InvalidInputError("no channel purities")
    if l_max is not None:
        p = p[: l_max + 1]
    denom = 0.5 * p[0] + p[1:].sum()
    if not denom > 0:
        raise InvalidInputError("channel purities sum to zero")
    return float(1.0 / denom)


def effective_slater_rank(R: float) -> float:
    if R < 2.0 - R_FLOOR_SLACK:
        raise ConsistencyError("participation ratio below the singlet floor of 2", R=R)
    return R / 2.0


def linear_entropy(R: float) -> float:
    if not R > 0:
        raise InvalidInputError("participation ratio must be positive", R=R)
    return 1.0 - 1.0 / R


def _integer_part(x: float) -> int:
    return math.floor(x + INTEGER_SLACK)


def partial_wave_count(channel_purities, exact_R: float, with_flag: bool = False):
    """Fewest channels ``N`` whose truncated ratio has the integer part of ``exact_R``.

    ``R_approx(N)`` uses channels ``l = 0..N-1``. If no prefix matches, the
    channel count is returned and, with ``with_flag``, a saturation flag.
    """
    p = np.asarray(channel_purities, dtype=float)
    if p.size == 0:
        raise InvalidInputError("no channel purities")
    if not (math.isfinite(exact_R) and exact_R > 0):
        raise InvalidInputError("exact participation ratio must be finite and positive", R=exact_R)
    target = _integer_part(exact_R)
    acc = 0.5 * p[0]
    for n in range(1, p.size + 1):
        if n > 1:
            acc += p[n - 1]
        if acc > 0 and 1.0 / acc < math.inf and _integer_part(1.0 / acc) == target:
            return (n, False) if with_flag else n
    return (p.size, True) if with_flag else p.size


@dataclass(frozen=True)
class EntanglementReport:
    g: float
    energy: float
    eta: tuple[float, ...]
    omega: tuple[float, ...]
    channel_purities: tuple[float, ...]
    purity_spatial: float
    participation: float
    slater_rank: float
    linear_entropy: float
    n_partial: int
    slater_estimate: int
    l_max_used: int
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def normalization(self) -> float:
        eta = np.asarray(self.eta)
        return float(eta[0] + 2.0 * eta[1:].sum())

    def eta_tail(self, first: int = 6) -> float:
        return float(np.sum(self.eta[first:]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "energy": self.energy,
            "eta": list(self.eta),
            "omega": list(self.omega),
            "channel_purities": list(self.channel_purities),
            "purity_spatial": self.purity_spatial,
            "participation": self.participation,
            "slater_rank": self.slater_rank,
            "linear_entropy": self.linear_entropy,
            "n_partial": self.n_partial,
            "slater_estimate": self.slater_estimate,
            "l_max_used": self.l_max_used,
            "normalization": self.normalization,
            "metadata": self.metadata,
        }
