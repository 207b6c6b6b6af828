from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boxramsey import (DirectionColourCertificate, InvalidInput, SizeError, gen_direction_colouring,
                       gen_random_array, gen_random_colouring, is_consistent, perturb_to_injective,
                       verify_mono_box)
from boxramsey.generators import raw_words
from boxramsey.io import dumps, instance_to_dict, read_instance
from boxramsey.model import full_box
from boxramsey.oracle import decide_M_instance, decide_R_instance, naive_mono_box_scan

DATA = Path(__file__).parent / "data"


def test_single_edge_single_colour():
    col = gen_random_colouring(1, 2, 1, seed=99)
    assert col.flat().tolist() == [0]


@given(st.integers(1, 3), st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**64 - 1))
def test_random_colouring_is_deterministic(d, side, r, seed):
    a = gen_random_colouring(d, side, r, seed)
    b = gen_random_colouring(d, side, r, seed)
    assert dumps(instance_to_dict(a)) == dumps(instance_to_dict(b))
    assert a.flat().min(initial=0) >= 0 and a.flat().max(initial=0) < r


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 2**64 - 1))
def test_random_array_is_a_permutation(dims, seed):
    arr = gen_random_array(dims, seed)
    assert arr.dims == tuple(dims)
    assert sorted(arr.values.reshape(-1).tolist()) == list(range(1, int(np.prod(dims)) + 1))
    assert arr == gen_random_array(dims, seed)


def test_seeds_differ():
    assert gen_random_colouring(2, 4, 2, 1) != gen_random_colouring(2, 4, 2, 2)
    assert gen_random_array([3, 3], 1) != gen_random_array([3, 3], 2)


@given(st.integers(0, 2**32), st.integers(0, 40), st.integers(1, 20))
def test_stream_is_counter_based(seed, start, count):
    whole = raw_words(seed, start + count, 0)
    assert np.array_equal(raw_words(seed, count, 0, start=start), whole[start:])


def test_seed_range_is_checked():
    with pytest.raises(InvalidInput):
        gen_random_colouring(2, 3, 2, -1)
    with pytest.raises(InvalidInput):
        gen_random_colouring(2, 3, 2, 2**64)


def test_size_limit():
    with pytest.raises(SizeError):
        gen_random_colouring(4, 60, 2, 0)
    with pytest.raises(SizeError):
        gen_random_array([5000, 5000], 0)


def test_box_free_colourings_exist_at_side_6():
    # Uniform random colourings of the 6x6 grid essentially never avoid every
    # 2x2 box (each of the 225 boxes is bad with probability 1/4), so the
    # existence of box-free ones is shown with a frozen side-8 colouring and
    # its side-6 restrictions instead of a seed sweep.
    col, _ = read_instance(DATA / "box_free_side8.json")
    assert decide_R_instance(col, 2) is None
    for rows in [(0, 1, 2, 3, 4, 5), (2, 3, 4, 5, 6, 7), (0, 2, 3, 5, 6, 7)]:
        for cols in [(0, 1, 2, 3, 4, 5), (1, 2, 4, 5, 6, 7)]:
            assert decide_R_instance(col.restrict((rows, cols)), 2) is None
    six = col.restrict(((0, 1, 2, 3, 4, 5), (0, 1, 2, 3, 4, 5)))
    assert decide_R_instance(six, 2) is None and naive_mono_box_scan(six, 2) is None


def test_random_side_6_colourings_contain_a_box():
    for seed in range(300):
        assert decide_R_instance(gen_random_colouring(2, 6, 2, seed), 2) is not None


@pytest.mark.parametrize("d,side,r", [(2, 3, 2), (1, 4, 3), (3, 2, 2), (3, 3, 3), (2, 5, 1)])
def test_direction_colouring(d, side, r):
    col = gen_direction_colouring(d, side, r)
    colours = tuple(i % r for i in range(d))
    assert verify_mono_box(col, DirectionColourCertificate(full_box(col.dims), colours))
    assert is_consistent(col)


def test_direction_colouring_d1_is_constant():
    assert set(gen_direction_colouring(1, 4, 3).flat().tolist()) == {0}


def test_single_cell_array():
    assert gen_random_array([1], 5).values.tolist() == [1]


def test_five_cells_always_have_a_run_of_three():
    for seed in range(50):
        assert decide_M_instance(gen_random_array([5], seed), 3) is not None


def test_perturb_examples():
    a = perturb_to_injective([[3.0, 1.0], [2.0, 9.0]])
    assert a.values.tolist() == [[3, 1], [2, 4]]
    assert perturb_to_injective([[5, 5], [5, 5]]).values.tolist() == [[1, 2], [3, 4]]
    assert perturb_to_injective([[1, 1], [2, 2]]).values.tolist() == [[1, 2], [3, 4]]


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=12))
def test_perturb_extends_strict_order(vals):
    out = perturb_to_injective(vals).values.tolist()
    assert sorted(out) == list(range(1, len(vals) + 1))
    for i in range(len(vals)):
        for j in range(len(vals)):
            if vals[i] < vals[j]:
                assert out[i] < out[j]
            if vals[i] == vals[j] and i < j:
                assert out[i] < out[j]
