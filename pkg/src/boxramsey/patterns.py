"""Exact search over comparison patterns of [N]^d arrays.

Whether an array has a monotone [n]^d subarray depends only on which of any
two cells in a common fibre is larger.  So instead of the (N^d)! order types
we may enumerate the patterns themselves: one linear order per fibre, subject
to the union of all fibre orders being acyclic (exactly the patterns some
injective array realises).

Fibres are assigned one at a time.  A branch is cut as soon as its orders
create a directed cycle, or a side-n box all of whose lines are already
ordered turns out monotone.  A complete, acyclic assignment that survives is
realised by a topological sort and returned as a witness array.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import BudgetExhausted, InvalidInput
from .model import NumericArray


@lru_cache(maxsize=16)
def _layout(d: int, side: int, n: int):
    strides = [side ** (d - 1 - a) for a in range(d)]
    fibres = []
    for i in range(d):
        for off in itertools.product(range(side), repeat=d - 1):
            cells = []
            for x in range(side):
                v = off[:i] + (x,) + off[i:]
                cells.append(sum(c * s for c, s in zip(v, strides)))
            fibres.append((max(off, default=0), off, i, tuple(cells)))
    fibres.sort()
    fid = {(f[2], f[1]): t for t, f in enumerate(fibres)}
    subsets = list(itertools.combinations(range(side), n))
    sub_id = {s: k for k, s in enumerate(subsets)}

    # every side-n box, as per direction the (fibre, subset) pairs of its lines,
    # filed under the position of the last fibre it needs
    boxes: list[list] = [[] for _ in fibres]
    for box in itertools.product(subsets, repeat=d):
        lines = []
        last = 0
        for i in range(d):
            group = []
            for off in itertools.product(*[box[a] for a in range(d) if a != i]):
                t = fid[(i, off)]
                last = max(last, t)
                group.append((t, sub_id[box[i]]))
            lines.append(tuple(group))
        boxes[last].append(tuple(lines))

    orders = list(itertools.permutations(range(side)))  # cell positions, smallest value first
    codes = []
    for seq in orders:
        rank = [0] * side
        for r, p in enumerate(seq):
            rank[p] = r
        row = []
        for s in subsets:
            vals = [rank[p] for p in s]
            if all(a < b for a, b in zip(vals, vals[1:])):
                row.append(1)
            elif all(a > b for a, b in zip(vals, vals[1:])):
                row.append(-1)
            else:
                row.append(0)
        codes.append(tuple(row))
    return [f[3] for f in fibres], boxes, orders, codes


def _has_mono(lines, assign, codes) -> bool:
    for group in lines:
        want = None
        for t, s in group:
            c = codes[assign[t]][s]
            if c == 0 or (want is not None and c != want):
                return False
            want = c
    return True


def _allowed(t: int, seq: tuple, d: int, n: int) -> bool:
    # Symmetry breaking on the d fibres through the origin (assigned first).
    # Reversing all values keeps monotone boxes monotone, so the first fibre
    # may start with an ascent.  For n = 2 far more is true: a box has one
    # index pair per axis, so ANY relabelling of an axis maps monotone boxes
    # to monotone boxes (a swapped pair flips every line in that direction at
    # once).  Relabelling axis 0 makes the first fibre increasing; relabelling
    # axis i >= 1 while fixing index 0 (which leaves earlier origin fibres in
    # place) makes fibre i increasing away from the origin.
    if n == 2:
        if t == 0:
            return seq == tuple(range(len(seq)))
        if t < d:
            rest = [p for p in seq if p != 0]
            return rest == sorted(rest)
        return True
    return t != 0 or seq.index(0) < seq.index(1)


def search_monotone_free(d: int, side: int, n: int, budget: int | None = None,
                         break_symmetry: bool = True):
    """An [side]^d array with no monotone [n]^d subarray, or None if there is none.

    Returns ``(array or None, nodes)``.  ``break_symmetry`` restricts the
    fibres through the origin to one representative per symmetry class
    (see ``_allowed``); no answer is lost.
    Raises BudgetExhausted past ``budget`` nodes.
    """
    if d < 1 or side < 1 or n < 1:
        raise InvalidInput("d, side and n must be positive")
    if n > side:
        return NumericArray(np.arange(1, side ** d + 1).reshape((side,) * d)), 0
    if n == 1:
        return None, 0
    fibres, boxes, orders, codes = _layout(d, side, n)
    C = side ** d
    reach = [0] * C
    assign = [0] * len(fibres)
    nodes = 0

    def add_chain(cells, seq):
        for a, b in zip(seq, seq[1:]):
            u, v = cells[a], cells[b]
            if reach[v] >> u & 1:
                return False
            if reach[u] >> v & 1:
                continue
            gain = reach[v] | (1 << v)
            for x in range(C):
                if x == u or reach[x] >> u & 1:
                    reach[x] |= gain
        return True

    def rec(t):
        nonlocal nodes
        if t == len(fibres):
            return True
        cells = fibres[t]
        for k, seq in enumerate(orders):
            if t < d and break_symmetry and not _allowed(t, seq, d, n):
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExhausted(f"pattern search budget {budget} exhausted", nodes)
            saved = reach[:]
            assign[t] = k
            if add_chain(cells, seq) and not any(_has_mono(b, assign, codes) for b in boxes[t]):
                if rec(t + 1):
                    return True
            reach[:] = saved
        return False

    if not rec(0):
        return None, nodes
    # a topological order of the final digraph gives the values
    below = [bin(reach[c]).count("1") for c in range(C)]
    order = sorted(range(C), key=lambda c: -below[c])
    values = np.empty(C, dtype=np.int64)
    values[order] = np.arange(1, C + 1)
    return NumericArray(values.reshape((side,) * d)), nodes
