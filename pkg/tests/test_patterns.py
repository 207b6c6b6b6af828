import itertools

import numpy as np
import pytest

from boxramsey import BudgetExhausted, InvalidInput, NumericArray
from boxramsey.acceptance import M_2_2, M_2_2_WITNESS
from boxramsey.oracle import (NumberQuery, compute_number, decide_M_instance, naive_monotone_scan)
from boxramsey.patterns import search_monotone_free

import oracles


def free(d, side, n, **kw):
    w, _ = search_monotone_free(d, side, n, **kw)
    if w is not None:
        assert w.dims == (side,) * d
        assert decide_M_instance(w, n) is None and naive_monotone_scan(w, n) is None
    return w is not None


@pytest.mark.parametrize("side", range(1, 7))
@pytest.mark.parametrize("n", [2, 3])
def test_one_dimension_matches_erdos_szekeres(side, n):
    assert free(1, side, n) == (side <= (n - 1) ** 2)


@pytest.mark.parametrize("d,side,n", [(1, 4, 3), (1, 5, 3), (2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 3, 3)])
def test_symmetry_breaking_loses_nothing(d, side, n):
    a, _ = search_monotone_free(d, side, n, break_symmetry=True)
    b, _ = search_monotone_free(d, side, n, break_symmetry=False)
    assert (a is None) == (b is None)


def test_patterns_agree_with_order_types():
    for d, n, cap in [(1, 2, 4), (1, 3, 6), (2, 2, 2)]:
        a = compute_number(NumberQuery("M", d, n, side_cap=cap, method="order_types"))
        b = compute_number(NumberQuery("M", d, n, side_cap=cap, method="patterns"))
        assert (a.status, a.value, a.lower_bound) == (b.status, b.value, b.lower_bound)


def test_2x2_brute_force():
    free_count = sum(not oracles.has_monotone(NumericArray(np.array(p).reshape(2, 2)), 2)
                     for p in itertools.permutations(range(1, 5)))
    assert free_count > 0 and free(2, 2, 2)


def test_m22_regression():
    w, _ = search_monotone_free(2, 4, 2)
    assert w is None
    assert free(2, 3, 2)
    fixture = NumericArray(M_2_2_WITNESS)
    assert M_2_2 == 4 and decide_M_instance(fixture, 2) is None
    assert not oracles.has_monotone(fixture, 2)


def test_trivial_and_bad_arguments():
    assert free(2, 2, 3)  # n > side: nothing of that size fits
    assert not free(2, 3, 1)
    with pytest.raises(InvalidInput):
        search_monotone_free(0, 2, 2)
    with pytest.raises(BudgetExhausted):
        search_monotone_free(2, 4, 2, budget=100)
