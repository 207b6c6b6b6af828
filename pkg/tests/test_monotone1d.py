import itertools
import pytest
from hypothesis import given, strategies as st

from boxramsey import InvalidInput, longest_monotone, monotone_of_length
from boxramsey.monotone1d import RunCertificate, least_monotone_of_length, monotone_runs, verify_run

import oracles


def lengths(seq):
    inc, dec = longest_monotone(seq)
    return len(inc), len(dec)


def test_examples():
    assert lengths([1, 2, 3]) == (3, 1)
    assert lengths([3, 2, 1]) == (1, 3)
    assert lengths([3, 1, 4, 2, 5]) == (3, 2)
    assert monotone_of_length([2, 1, 4, 3], 3) is None
    assert monotone_of_length([1], 1).indices == (0,)


def test_every_permutation_of_seven():
    for p in itertools.permutations(range(7)):
        inc, dec = longest_monotone(p)
        assert (len(inc), len(dec)) == oracles.longest_runs(p)
        assert verify_run(p, inc) and verify_run(p, dec)


def test_erdos_szekeres_at_five():
    for p in itertools.permutations(range(5)):
        assert max(lengths(p)) >= 3
        assert monotone_of_length(p, 3) is not None


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40, unique=True))
def test_bound_and_certificates(seq):
    inc, dec = longest_monotone(seq)
    assert verify_run(seq, inc) and inc.sign == 1
    assert verify_run(seq, dec) and dec.sign == -1
    n = len(seq)
    assert max(len(inc), len(dec)) ** 2 >= n  # i.e. at least ceil(sqrt(n))


@given(st.permutations(range(9)), st.integers(1, 9))
def test_fixed_length_run(p, n):
    inc, dec = oracles.longest_runs(p)
    got = monotone_of_length(p, n)
    if max(inc, dec) >= n:
        assert got is not None and len(got) == n and verify_run(p, got)
    else:
        assert got is None
    if len(p) >= (n - 1) ** 2 + 1:
        assert got is not None


def test_lexicographically_least_longest_run():
    # several longest increasing runs of length 2; the least index set is (0, 2)
    inc, _ = longest_monotone([2, 1, 3])
    assert inc.indices == (0, 2)
    inc, _ = longest_monotone([1, 3, 2, 4])
    assert inc.indices == (0, 1, 3)


def test_rejects_ties():
    with pytest.raises(InvalidInput):
        longest_monotone([1, 2, 1])
    with pytest.raises(InvalidInput):
        verify_run([1, 2], RunCertificate((1, 0), 1))


@given(st.permutations(range(8)), st.integers(1, 8))
def test_least_run_is_lexicographically_first(p, n):
    want = None
    for S in itertools.combinations(range(len(p)), n):
        vals = [p[i] for i in S]
        if vals == sorted(vals):
            want = (S, 1)
            break
        if vals == sorted(vals, reverse=True):
            want = (S, -1)
            break
    got = least_monotone_of_length(p, n)
    assert (None if got is None else (got.indices, got.sign)) == want


@given(st.permutations(range(8)), st.integers(2, 5), st.integers(1, 60))
def test_monotone_runs_enumerates_everything(p, n, limit):
    want = []
    for i in range(len(p)):
        for sign in (1, -1):
            for S in itertools.combinations(range(i + 1, len(p)), n - 1):
                vals = [p[i]] + [p[j] for j in S]
                if all(sign * (b - a) > 0 for a, b in zip(vals, vals[1:])):
                    want.append(((i,) + S, sign))
    got = [(r.indices, r.sign) for r in monotone_runs(p, n, limit)]
    assert got == want[:limit]
