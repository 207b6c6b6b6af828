import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from boxramsey import (BoxColouring, DirectionColourCertificate, InvalidInput, LexMonotoneCertificate,
                       MonotoneCertificate, NumericArray, canonical_pattern, gen_direction_colouring,
                       gen_lex_array, verify_lex_monotone, verify_mono_box, verify_monotone)
from boxramsey.model import edge_count, full_box, pair_index

import oracles
from strategies import arrays, colourings, sub_boxes


def test_pair_index_is_lexicographic():
    for side in range(1, 7):
        prs = list(itertools.combinations(range(side), 2))
        assert [pair_index(x, y, side) for x, y in prs] == list(range(len(prs)))
        assert all(pair_index(y, x, side) == pair_index(x, y, side) for x, y in prs)


def test_edge_count_matches_enumeration():
    for d in range(1, 4):
        for side in range(1, 5):
            box = full_box((side,) * d)
            assert edge_count(d, side) == sum(len(list(oracles.box_edges(box, i))) for i in range(d))


@given(colourings())
def test_dense_view_matches_payload(col):
    box = full_box(col.dims)
    for i in range(col.d):
        for v, y in oracles.box_edges(box, i):
            c = oracles.edge_colour(col, i, v, y)
            assert col.colour(i, v, y) == c
            w = list(v)
            w[i] = y
            assert col.colour(i, tuple(w), v[i]) == c


def test_colouring_rejects_bad_payloads():
    with pytest.raises(InvalidInput):
        BoxColouring.from_flat(2, 2, 2, [0, 1, 2, 0])
    with pytest.raises(InvalidInput):
        BoxColouring.from_flat(2, 2, 2, [0, 1, 0])
    with pytest.raises(InvalidInput):
        BoxColouring(2, 2, 2, [[0, 1]])
    with pytest.raises(InvalidInput):
        BoxColouring(0, 2, 2, [])


def test_array_rejects_ties_and_non_numbers():
    with pytest.raises(InvalidInput):
        NumericArray([[1, 1], [2, 3]])
    with pytest.raises(InvalidInput):
        NumericArray([["a", "b"]])
    with pytest.raises(InvalidInput):
        NumericArray([1.0, float("nan")])
    with pytest.raises(InvalidInput):
        NumericArray(5)


def test_subbox_bounds_are_checked():
    col = gen_direction_colouring(2, 3, 2)
    for bad in [((0, 3), (0, 1)), ((1, 0), (0, 1)), ((), (0,)), ((0, 1),)]:
        with pytest.raises(InvalidInput):
            verify_mono_box(col, DirectionColourCertificate(bad, (0, 1)))


@given(colourings(), st.data())
def test_verify_mono_box_matches_direct_loop(col, data):
    box = data.draw(sub_boxes(col.dims))
    expect = oracles.mono_colours(col, box)
    if expect is None:
        # no colour choice can make it pass; try the colours of some edges anyway
        for cs in itertools.product(range(col.colours), repeat=col.d):
            assert not verify_mono_box(col, DirectionColourCertificate(box, cs))
    else:
        cs = [0 if c is None else c for c in expect]
        assert verify_mono_box(col, DirectionColourCertificate(box, cs))


@given(arrays(), st.data())
def test_verify_monotone_matches_direct_loop(arr, data):
    box = data.draw(sub_boxes(arr.dims))
    expect = oracles.fibre_signs(arr, box)
    for signs in itertools.product((1, -1), repeat=arr.d):
        got = verify_monotone(arr, MonotoneCertificate(box, signs))
        want = expect is not None and all(
            s == e or len(box[i]) < 2 for i, (s, e) in enumerate(zip(signs, expect)))
        assert got == want


@given(arrays(d=st.integers(1, 3), side=st.integers(1, 3)), st.data())
def test_verify_lex_matches_sorting(arr, data):
    box = data.draw(sub_boxes(arr.dims))
    for perm in itertools.permutations(range(arr.d)):
        for signs in itertools.product((1, -1), repeat=arr.d):
            assert verify_lex_monotone(arr, LexMonotoneCertificate(box, perm, signs)) == \
                oracles.lex_ok(arr, box, perm, signs)


@given(colourings(side=st.integers(2, 4)), st.data())
def test_mono_box_is_hereditary(col, data):
    box = data.draw(sub_boxes(col.dims))
    cs = oracles.mono_colours(col, box)
    if cs is None:
        return
    inner = tuple(tuple(sorted(data.draw(st.lists(st.sampled_from(c), min_size=1, unique=True))))
                  for c in box)
    assert verify_mono_box(col, DirectionColourCertificate(inner, [0 if c is None else c for c in cs]))


@given(arrays(side=st.integers(2, 4)), st.data())
def test_monotone_is_hereditary(arr, data):
    box = data.draw(sub_boxes(arr.dims))
    signs = oracles.fibre_signs(arr, box)
    if signs is None:
        return
    inner = tuple(tuple(sorted(data.draw(st.lists(st.sampled_from(c), min_size=1, unique=True))))
                  for c in box)
    assert verify_monotone(arr, MonotoneCertificate(inner, signs))


def test_direction_colouring_boxes():
    col = gen_direction_colouring(2, 3, 2)
    for box in oracles.all_boxes(col.dims, 2):
        assert verify_mono_box(col, DirectionColourCertificate(box, (0, 1)))
        assert not verify_mono_box(col, DirectionColourCertificate(box, (1, 0)))


def test_canonical_pattern_examples():
    col = gen_direction_colouring(2, 3, 2)
    p = canonical_pattern(col, ((0, 1), (1, 2)))
    assert p == canonical_pattern(col, ((0, 2), (0, 1)))
    assert p.startswith("C2x2|")
    arr = NumericArray([[1, 2], [4, 3]])
    assert canonical_pattern(arr, full_box(arr.dims)) == "A2x2|0,1,3,2"
    assert canonical_pattern(NumericArray([[10, 20], [40, 30]]), ((0, 1), (0, 1))) == "A2x2|0,1,3,2"
    assert canonical_pattern(arr, ((0,), (0, 1))) != canonical_pattern(arr, ((1,), (0, 1)))


@given(colourings(side=st.integers(2, 4)), st.data())
def test_canonical_pattern_equal_iff_restrictions_equal(col, data):
    a = data.draw(sub_boxes(col.dims))
    shape = [len(c) for c in a]
    b = tuple(tuple(sorted(data.draw(st.lists(st.integers(0, col.side - 1), min_size=k, max_size=k,
                                              unique=True)))) for k in shape)
    same = all(
        oracles.edge_colour(col, i, tuple(a[j][p[j]] for j in range(col.d)), a[i][y]) ==
        oracles.edge_colour(col, i, tuple(b[j][p[j]] for j in range(col.d)), b[i][y])
        for i in range(col.d)
        for p in itertools.product(*[range(k) for k in shape])
        for y in range(shape[i]) if y > p[i])
    assert (canonical_pattern(col, a) == canonical_pattern(col, b)) == same


@given(arrays(), st.data())
def test_canonical_pattern_tracks_order_type(arr, data):
    box = data.draw(sub_boxes(arr.dims))
    shifted = NumericArray(arr.values * 3.5 - 7)
    assert canonical_pattern(arr, box) == canonical_pattern(shifted, box)


@given(colourings(side=st.integers(2, 4)), st.data())
def test_restrict_agrees_with_pattern(col, data):
    k = data.draw(st.integers(1, col.side))
    box = tuple(tuple(sorted(data.draw(st.lists(st.integers(0, col.side - 1), min_size=k, max_size=k,
                                                unique=True)))) for _ in range(col.d))
    sub = col.restrict(box)
    assert canonical_pattern(sub, full_box(sub.dims)) == canonical_pattern(col, box)
    if k < col.side and col.d > 1:
        uneven = box[:-1] + (tuple(range(k + 1)),)
        with pytest.raises(InvalidInput):
            col.restrict(uneven)


def test_ranks_are_order_type():
    arr = NumericArray([[0.5, -1.0], [7.0, 2.0]])
    assert arr.ranks().tolist() == [[2, 1], [4, 3]]
    assert verify_lex_monotone(gen_lex_array((3, 2)), LexMonotoneCertificate(full_box((3, 2)), (0, 1), (1, 1)))
    assert np.array_equal(gen_lex_array((2, 2)).values, [[1, 2], [3, 4]])


@given(colourings(), st.data())
def test_fibre_rows_match_fibre_matrix(col, data):
    i = data.draw(st.integers(0, col.d - 1))
    v = tuple(data.draw(st.integers(0, col.side - 1)) for _ in range(col.d))
    idx = sorted(data.draw(st.lists(st.integers(0, col.side - 1), min_size=1, unique=True)))
    assert col.fibre_rows(i, v, idx) == col.fibre_matrix(i, v, idx).tolist()
