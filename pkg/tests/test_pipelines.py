import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxramsey import (InvalidInput, NumericArray, PipelineParams, find_lex_monotone, find_mono_box,
                       find_mono_box_2d, find_monotone_subarray, gen_constant_colouring,
                       gen_direction_colouring, gen_lex_array, gen_random_array, gen_random_colouring,
                       verify_lex_monotone, verify_mono_box, verify_monotone)
from boxramsey.model import full_box
from boxramsey.oracle import decide_M_instance, decide_R_instance
from boxramsey.pipelines import lex_orders
from boxramsey.report import SearchLog

import oracles
from strategies import arrays, colourings


def test_n1_is_trivial():
    col = gen_random_colouring(3, 3, 3, 5)
    for f in (find_mono_box,):
        cert = f(col, 1)
        assert cert is not None and verify_mono_box(col, cert)
    assert find_mono_box_2d(gen_random_colouring(2, 3, 2, 1), 1) is not None
    assert find_monotone_subarray(gen_random_array([3, 3], 1), 1) is not None


def test_direction_colourings():
    cert = find_mono_box(gen_direction_colouring(2, 6, 2), 2)
    assert cert.direction_colours == (0, 1)
    cert = find_mono_box_2d(gen_direction_colouring(2, 5, 2), 2)
    assert cert.direction_colours == (0, 1)
    col = gen_direction_colouring(3, 4, 3)
    cert = find_mono_box(col, 3)
    assert cert.direction_colours == (0, 1, 2) and verify_mono_box(col, cert)


def test_single_colour_2d():
    cert = find_mono_box_2d(gen_constant_colouring(2, 4, 1), 2)
    assert cert is not None and cert.direction_colours == (0, 0)


def test_row_major_increasing():
    for d, n in [(1, 4), (2, 3), (3, 2)]:
        arr = gen_lex_array((n,) * d)
        cert = find_monotone_subarray(arr, n)
        assert cert.subbox == full_box(arr.dims) and cert.signs == (1,) * d


def test_erdos_szekeres_sequences():
    for p in itertools.permutations(range(1, 6)):
        cert = find_monotone_subarray(NumericArray(list(p)), 3)
        assert cert is not None and verify_monotone(NumericArray(list(p)), cert)


def test_all_order_types_of_2x2():
    for p in itertools.permutations(range(1, 5)):
        arr = NumericArray(np.array(p).reshape(2, 2))
        cert = find_monotone_subarray(arr, 2)
        if cert is not None:
            assert verify_monotone(arr, cert)
            assert decide_M_instance(arr, 2) is not None
        assert (decide_M_instance(arr, 2) is not None) == oracles.has_monotone(arr, 2)


def test_2d_only():
    with pytest.raises(InvalidInput):
        find_mono_box_2d(gen_random_colouring(3, 3, 2, 0), 2)
    with pytest.raises(InvalidInput):
        find_mono_box(gen_random_colouring(2, 3, 2, 0), 0)


def test_size_failure_is_tagged():
    log = SearchLog()
    assert find_mono_box(gen_random_colouring(2, 3, 2, 0), 4, log=log) is None
    assert log.failure.stage == "size"


def test_guarantee_void_is_flagged():
    log = SearchLog()
    find_mono_box(gen_random_colouring(2, 6, 2, 0), 2, log=log)
    assert log.guarantee_void


@given(colourings(d=st.integers(1, 3), side=st.integers(2, 5), colours=st.integers(1, 3)),
       st.integers(2, 3), st.integers(0, 1000))
def test_general_pipeline_soundness(col, n, seed):
    cert = find_mono_box(col, n, PipelineParams(seed=seed))
    if cert is not None:
        assert verify_mono_box(col, cert)
        assert all(len(c) == n for c in cert.subbox)
        assert decide_R_instance(col, n) is not None


@given(colourings(d=st.just(2), side=st.integers(2, 6), colours=st.integers(1, 3)), st.integers(2, 3))
def test_2d_pipeline_soundness(col, n):
    cert = find_mono_box_2d(col, n)
    if cert is not None:
        assert verify_mono_box(col, cert) and all(len(c) == n for c in cert.subbox)
        assert decide_R_instance(col, n) is not None


def test_differential_on_6x6():
    for seed in range(60):
        col = gen_random_colouring(2, 6, 2, seed)
        exists = decide_R_instance(col, 2) is not None
        for f in (find_mono_box, find_mono_box_2d):
            cert = f(col, 2, PipelineParams(seed=seed))
            if cert is not None:
                assert verify_mono_box(col, cert) and exists


@given(arrays(d=st.integers(1, 3), side=st.integers(2, 4)), st.integers(2, 3), st.integers(0, 1000))
def test_monotone_pipeline_subsumed_by_oracle(arr, n, seed):
    cert = find_monotone_subarray(arr, n, PipelineParams(seed=seed))
    if cert is not None:
        assert verify_monotone(arr, cert)
        assert decide_M_instance(arr, n) is not None


def test_pipeline_is_deterministic():
    col = gen_random_colouring(2, 6, 3, 8)
    a, b = SearchLog(), SearchLog()
    assert find_mono_box(col, 2, PipelineParams(seed=4), a) == find_mono_box(col, 2, PipelineParams(seed=4), b)
    assert a.to_dict() == b.to_dict()


# ----------------------------------------------------------- lex-monotone

def test_lex_order_count():
    for d in range(1, 5):
        orders = lex_orders(d)
        assert len(orders) == len(set(orders)) == [1, 2, 6, 24][d - 1] * 2 ** d


def test_lex_examples():
    cert = find_lex_monotone(NumericArray([1, 2, 3]), 2)
    assert cert.perm == (0,) and cert.signs == (1,)
    N = 4
    arr = NumericArray([[x + N * y for y in range(N)] for x in range(N)])
    cert = find_lex_monotone(arr, 2)
    assert verify_lex_monotone(arr, cert)
    assert cert.perm == (1, 0) and cert.signs == (1, 1)


def test_lex_against_brute_force_on_3x3():
    for seed in range(40):
        arr = gen_random_array([3, 3], seed)
        cert = find_lex_monotone(arr, 2)
        assert (cert is not None) == oracles.has_lex(arr, 2)
        if cert is not None:
            assert verify_lex_monotone(arr, cert)


@settings(max_examples=30)
@given(arrays(d=st.integers(1, 3), side=st.integers(2, 3)), st.integers(1, 3))
def test_lex_property(arr, n):
    cert = find_lex_monotone(arr, n)
    if n > min(arr.dims):
        assert cert is None
        return
    assert (cert is not None) == oracles.has_lex(arr, n)
    if cert is not None:
        assert verify_lex_monotone(arr, cert)
