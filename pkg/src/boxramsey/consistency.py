"""Consistent boxes of colourings and arrays.

A box is consistent when every slice along the last axis carries the same
pattern and, recursively, the slice itself is consistent; at dimension one a
colouring must be monochromatic and an array monotone.  Unrolled, for a
colouring: direction-0 edges all share one colour and the colour of a
direction-i edge never depends on coordinates after i.  For an array: for
every m < d, the order pattern of an m-dimensional leading slice does not
depend on the trailing coordinates, and the 1-dimensional order is monotone.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import BudgetExhausted, InvalidInput
from .model import (BoxColouring, ConsistencyWitness, NumericArray, SubBox, canonical_pattern,
                    check_subbox, full_box)
from .monotone1d import least_monotone_of_length
from .params import f_consistency
from .ramsey1d import least_mono_clique
from .report import SearchLog

CROSS_CHECK = __debug__


# ------------------------------------------------------------------ checking

def _singles(z):
    return tuple((c,) for c in z)


def _colouring_unrolled(col: BoxColouring, box: SubBox) -> bool:
    d = col.d
    for i in range(d):
        s = len(box[i])
        if s < 2:
            continue
        t = col.dense[i][np.ix_(*box, box[i])]
        # axes: leading (<i), fibre pair, trailing (>i)
        t = np.moveaxis(t, d, i + 1)
        lead = prod(len(c) for c in box[:i])
        trail = prod(len(c) for c in box[i + 1:])
        t = t.reshape(lead, s * s, trail)
        if not np.array_equal(t, np.broadcast_to(t[:, :, :1], t.shape)):
            return False
        if i == 0:
            block = t[0, :, 0].reshape(s, s)
            if np.unique(block[~np.eye(s, dtype=bool)]).size > 1:
                return False
    return True


def _rank_columns(a: np.ndarray) -> np.ndarray:
    return np.argsort(np.argsort(a, axis=0, kind="stable"), axis=0, kind="stable")


def _array_unrolled(arr: NumericArray, box: SubBox) -> bool:
    sub = arr.values[np.ix_(*box)]
    d = sub.ndim
    for m in range(1, max(d, 2)):
        lead = prod(sub.shape[:m])
        ranks = _rank_columns(sub.reshape(lead, -1))
        if not np.array_equal(ranks, np.broadcast_to(ranks[:, :1], ranks.shape)):
            return False
        if m == 1:
            col = ranks[:, 0]
            if not (np.array_equal(col, np.arange(lead)) or np.array_equal(col, np.arange(lead)[::-1])):
                return False
    return True


def _base_ok(obj, box: SubBox) -> bool:
    if isinstance(obj, BoxColouring):
        s = len(box[0])
        if s < 2:
            return True
        vals = {obj.colour(0, (a,) + tuple(c[0] for c in box[1:]), b)
                for i, a in enumerate(box[0]) for b in box[0][i + 1:]}
        return len(vals) == 1
    seq = obj.values[np.ix_(*box)].reshape(-1)
    step = np.diff(seq)
    return bool(np.all(step > 0) or np.all(step < 0))


def _recursive(obj, box: SubBox, m: int) -> bool:
    # box has singleton axes from m onwards
    if m == 1:
        return _base_ok(obj, box)
    slices = [box[:m - 1] + ((a,),) + box[m:] for a in box[m - 1]]
    first = canonical_pattern(obj, slices[0])
    if any(canonical_pattern(obj, s) != first for s in slices[1:]):
        return False
    return _recursive(obj, slices[0], m - 1)


def is_consistent_recursive(obj, subbox: SubBox | None = None) -> bool:
    box = full_box(obj.dims) if subbox is None else check_subbox(subbox, obj.dims)
    return _recursive(obj, box, len(box))


def is_consistent_unrolled(obj, subbox: SubBox | None = None) -> bool:
    box = full_box(obj.dims) if subbox is None else check_subbox(subbox, obj.dims)
    if isinstance(obj, BoxColouring):
        return _colouring_unrolled(obj, box)
    if isinstance(obj, NumericArray):
        return _array_unrolled(obj, box)
    raise InvalidInput(f"cannot check {type(obj).__name__}")


def is_consistent(obj, subbox: SubBox | None = None) -> bool:
    """Whether the restriction of a colouring or array to ``subbox`` is consistent."""
    result = is_consistent_unrolled(obj, subbox)
    if CROSS_CHECK:
        assert result == is_consistent_recursive(obj, subbox), "consistency checkers disagree"
    return result


# ------------------------------------------------------------------- search

@dataclass(frozen=True)
class ConsistencyParams:
    """``slice_side`` caps the side M of the leading axes searched in each slice;
    ``budget`` caps the number of recursion nodes."""
    slice_side: int | None = None
    budget: int = 1_000_000

    @staticmethod
    def f_of_d(d: int) -> int:
        return f_consistency(d)

    def slice_limit(self, side: int, k: int) -> int:
        m = side if self.slice_side is None else min(side, self.slice_side)
        return max(m, k)


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExhausted(f"node budget {self.limit} exhausted", self.used)


def _base_colouring(col: BoxColouring, cands, z, k):
    side = col.side
    if col._lut is None:
        col.colour(0, (0,) * col.d, 0)
    table = col._lut[0]
    base = 0
    for c in z:
        base = base * side + c
    step = side ** col.d  # lookup stride of coordinate 0
    m = [[table[a * step + base * side + b] for b in cands] for a in cands]
    hit = least_mono_clique(m, k, col.colours)  # least, like the array base
    if hit is None:
        return None
    return (tuple(cands[i] for i in hit.vertices),)


def _base_array(arr: NumericArray, cands, z, k):
    # the least run, so that slices with equal patterns pick equal index sets
    seq = arr.values[(np.asarray(cands),) + tuple(z)].tolist()
    run = least_monotone_of_length(seq, k)
    if run is None:
        return None
    return (tuple(cands[i] for i in run.indices),)


def _search(obj, base, m, axes, z, k, limit, budget, seen):
    budget.tick()
    if m == 1:
        return base(obj, axes[0], z, k)
    sub_axes = [ax[:limit] for ax in axes[:m - 1]]
    buckets: dict = {}
    for a in axes[m - 1]:
        found = _search(obj, base, m - 1, sub_axes, (a,) + z, k, limit, budget, seen)
        if found is None:
            continue
        pattern = canonical_pattern(obj, found + ((a,),) + _singles(z))
        seen.setdefault(m, set()).add(pattern)
        members = buckets.setdefault((found, pattern), [])
        members.append(a)
        if len(members) == k:
            return found + (tuple(members),)
    return None


def _find(obj, base, k, params, log, stage):
    params = params or ConsistencyParams()
    if k < 1:
        raise InvalidInput("k must be positive")
    d = obj.d
    if k > min(obj.dims):
        if log is not None:
            log.note(stage, False, reason="k exceeds side", k=k)
        return None
    axes = [tuple(range(n)) for n in obj.dims]
    if k == 1:
        box = tuple((0,) for _ in range(d))
        return ConsistencyWitness(box, canonical_pattern(obj, box))
    limit = params.slice_limit(min(obj.dims), k)
    budget = _Budget(params.budget)
    seen: dict = {}
    found = _search(obj, base, d, axes, (), k, limit, budget, seen)
    counts = {str(m): len(p) for m, p in sorted(seen.items())}
    if found is None:
        if log is not None:
            log.note(stage, False, reason="no slice bucket reached k", k=k, slice_side=limit,
                     nodes=budget.used, patterns_seen=counts)
        return None
    if log is not None:
        log.note(stage, True, k=k, slice_side=limit, nodes=budget.used, patterns_seen=counts)
    return ConsistencyWitness(found, canonical_pattern(obj, found))


def find_consistent_box(col: BoxColouring, k: int, params: ConsistencyParams | None = None,
                        log: SearchLog | None = None) -> ConsistencyWitness | None:
    """Consistent sub-box of side k, built slice by slice along the last axis:
    each slice contributes a recursively found consistent box of one dimension
    less, slices are bucketed by (vertex sets, colour pattern), and the first
    bucket to collect k slices wins.

    None means "not found" (the search is only complete at astronomically
    large sides); budget exhaustion raises.
    """
    if not isinstance(col, BoxColouring):
        raise InvalidInput("expected a BoxColouring")
    return _find(col, _base_colouring, k, params, log, "consistency")


def find_consistent_array(arr: NumericArray, k: int, params: ConsistencyParams | None = None,
                          log: SearchLog | None = None) -> ConsistencyWitness | None:
    """Array analogue of :func:`find_consistent_box`, bucketing on order patterns."""
    if not isinstance(arr, NumericArray):
        raise InvalidInput("expected a NumericArray")
    return _find(arr, _base_array, k, params, log, "consistency")


def verify_consistency_witness(obj, witness: ConsistencyWitness) -> bool:
    box = check_subbox(witness.subbox, obj.dims)
    return canonical_pattern(obj, box) == witness.pattern and is_consistent(obj, box)
