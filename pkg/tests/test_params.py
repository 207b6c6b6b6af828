from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from boxramsey import ArrayPlan, InvalidInput, RamseyPlan, f_consistency, g_array, g_colouring
from boxramsey.params import (array_master_exponent, capped_pow, consistent_box_threshold,
                              ramsey_master_exponent, tower_le)


def test_f():
    assert [f_consistency(d) for d in (1, 2, 3, 4)] == [1, 4, 24, 192]


def test_g():
    assert g_array(1) == 2 and g_array(2) == 30 and g_array(3) == 450
    assert g_colouring(1, 2) == 1 and g_colouring(2, 2) == 16 and g_colouring(2, 3) == 18
    assert g_colouring(3, 2) == 256


def test_master_exponents_by_hand():
    # 3*2*g(1) + f(2) + 1 = 6 + 4 + 1
    assert ramsey_master_exponent(2, 2) == 11
    # 3*3*g(2) + f(3) + 1 = 9*16 + 24 + 1 at r = 2
    assert ramsey_master_exponent(3, 2) == 169
    # 4*2*g(1) + f(2) = 16 + 4 ; 4*3*30 + 24
    assert array_master_exponent(2) == 20
    assert array_master_exponent(3) == 384
    with pytest.raises(InvalidInput):
        ramsey_master_exponent(1, 2)


def test_plans():
    p = RamseyPlan(2, 2, 2)
    assert p.t_exponent == 3 * 1 * 2 * 4
    assert p.u_exponent == 4
    assert p.t(10**9) == 2 ** 24 and p.u(100) == 16 and p.u(5) == 5
    assert RamseyPlan.eps_hat(2, 2, 16) == Fraction(1, 2 * 16 ** 2)
    assert not p.guaranteed(10**100)
    a = ArrayPlan(2, 3)
    assert a.t_exponent == 3 * 2 * 3
    assert a.u(100) == 9
    assert ArrayPlan.eps_hat(3, 9) == Fraction(1, 2 * comb(9, 3))


@given(st.integers(0, 12), st.integers(0, 300), st.integers(1, 10**30))
def test_capped_pow(base, exp, cap):
    assert capped_pow(base, exp, cap) == min(base ** exp, cap)


@given(st.integers(1, 4), st.integers(0, 3), st.integers(1, 10**12))
def test_tower_le(base, exp, n):
    assert tower_le(base, exp, n) == (base ** (base ** exp) <= n)


def test_huge_exponents_stay_cheap():
    assert capped_pow(2, 10**18, 1000) == 1000
    assert consistent_box_threshold(3, 3, 5, 64) == 64
    assert not tower_le(2, 10**9, 10**50)
