import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trapent.errors import ConsistencyError, InvalidInputError
from trapent.measures import (
    effective_slater_rank,
    linear_entropy,
    partial_wave_count,
    participation_ratio,
    spatial_purity,
)


def test_free_values():
    R = participation_ratio([1.0, 0.0])
    assert R == 2.0 and effective_slater_rank(R) == 1.0 and linear_entropy(R) == 0.5


def test_arithmetic_contract():
    R = participation_ratio([0.25, 0.25])
    assert abs(R - 8 / 3) < 1e-15
    assert abs(effective_slater_rank(R) - 4 / 3) < 1e-15


def test_l_max_truncates():
    assert participation_ratio([0.5, 0.1, 0.3], l_max=1) == 1 / (0.25 + 0.1)


def test_linear_entropy_values():
    assert linear_entropy(2.0) == 0.5 and linear_entropy(4.0) == 0.75
    assert abs(linear_entropy(1e12) - 1.0) < 1e-11
    with pytest.raises(InvalidInputError):
        linear_entropy(0.0)


def test_errors():
    with pytest.raises(InvalidInputError):
        participation_ratio([])
    with pytest.raises(ConsistencyError):
        effective_slater_rank(1.9)
    assert effective_slater_rank(2.0 - 1e-10) > 0.99


def test_partial_wave_count_free():
    assert partial_wave_count([1.0, 0.0], 2.0) == 1


def test_partial_wave_count_synthetic():
    p = [0.2, 0.05, 0.02, 1 / 5.7 - 0.17]
    exact = participation_ratio(p)
    assert abs(exact - 5.7) < 1e-12
    assert partial_wave_count(p, exact) == 3


def test_partial_wave_count_saturates():
    assert partial_wave_count([0.2, 0.05], 3.5, with_flag=True) == (2, True)


def test_floor_slack():
    # 1/0.25 evaluates to exactly 4; a value a hair below must still count as 4.
    assert partial_wave_count([0.5 + 2e-11, 0.0], 4.0) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.one_of(st.just(0.0), st.floats(1e-12, 1.0)), min_size=1, max_size=12))
def test_measure_relations(p):
    p = np.asarray(p)
    if 0.5 * p[0] + p[1:].sum() <= 0:
        return
    R = participation_ratio(p)
    assert abs(linear_entropy(R) - (1 - 1 / R)) < 1e-15
    assert abs(spatial_purity(p) - (2.0 / R)) <= 1e-12 * spatial_purity(p)
    n = partial_wave_count(p, R)
    assert 1 <= n <= p.size


def test_report_invariants(taut, mid, strong):
    for a in (taut, mid, strong):
        rep = a.report
        assert rep.participation >= 2 and rep.slater_rank >= 1
        assert rep.linear_entropy == 1 - 1 / rep.participation
        lam_sq = sum((1 if s.l == 0 else 2) * np.sum(s.lambdas**2) for s in a.spectra)
        assert abs(rep.purity_spatial - lam_sq) < 1e-10
        assert rep.slater_estimate == 2 * rep.n_partial - 1


def test_weak_coupling_limit():
    from conftest import cached_analysis

    reps = [cached_analysis(g).report for g in (1e-3, 1e-2, 3e-2, 0.1)]
    R = [r.participation for r in reps]
    assert abs(R[0] - 2.0) < 1e-4
    assert all(b > a for a, b in zip(R, R[1:]))
    assert all(b > a for a, b in zip([r.linear_entropy for r in reps], [r.linear_entropy for r in reps][1:]))
