"""Exact ground truth at tiny sizes.

``decide_*`` answer "does this instance contain the target?" by complete
backtracking, returning a certificate exactly when one exists.
``compute_number`` finds R_r(d, n), M_d(n) or L_d(n) by enumerating every
instance of side N = n, n+1, ... up to symmetry.

The naive scanners at the bottom try every sub-box with no pruning at all and
share no code with the backtracking searches; tests pit the two against each
other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .consistency import _Budget
from .errors import BudgetExhausted, InvalidInput
from .model import (BoxColouring, DirectionColourCertificate, LexMonotoneCertificate,
                    MonotoneCertificate, NumericArray, pair_index, verify_lex_monotone)
from .patterns import search_monotone_free
from .pipelines import find_lex_monotone, lex_orders
from .ramsey1d import ramsey_extension_search, triangle_to_matrix

DEFAULT_INSTANCE_LIMIT = 1_000_000


def _strides(dims):
    out = [1] * len(dims)
    for a in range(len(dims) - 2, -1, -1):
        out[a] = out[a + 1] * dims[a + 1]
    return out


def _level_choices(box, dims, n, j):
    ranges = [range(box[a][-1] + 1 if j else 0, dims[a] - (n - j) + 1) for a in range(len(dims))]
    return itertools.product(*ranges)


# ------------------------------------------------------------- colourings

def decide_R_instance(col: BoxColouring, n: int, budget: int | None = None
                      ) -> DirectionColourCertificate | None:
    """Side-n box monochromatic in every direction, if one exists.

    Level j of the backtracking fixes the j-th index on every axis at once.
    Only the edges new at that level are checked, each against its
    direction's colour (fixed by the first edge seen in that direction).
    Raises BudgetExhausted past ``budget`` nodes.
    """
    if not isinstance(col, BoxColouring):
        raise InvalidInput("expected a BoxColouring")
    if n < 1:
        raise InvalidInput("n must be positive")
    d, side = col.d, col.side
    if n > side:
        return None
    if n == 1:
        return DirectionColourCertificate(((0,),) * d, (0,) * d)
    col.colour(0, (0,) * d, 0)  # build the lookup table
    lut = col._lut
    strides = _strides((side,) * d)
    tick = _Budget(budget).tick if budget is not None else None
    box = [[] for _ in range(d)]
    colours = [None] * d

    def add_level():
        # check the edges introduced by the last index on every axis
        set_here = []
        for i in range(d):
            others = [a for a in range(d) if a != i]
            new_i = box[i][-1]
            old_i = box[i][:-1]
            table = lut[i]
            want = colours[i]
            for off in itertools.product(*[range(len(box[a])) for a in others]):
                fresh = any(off[t] == len(box[a]) - 1 for t, a in enumerate(others))
                base = sum(box[a][off[t]] * strides[a] for t, a in enumerate(others))
                if fresh:
                    idx = box[i]
                    edges = [(x, y) for p, x in enumerate(idx) for y in idx[p + 1:]]
                else:
                    edges = [(x, new_i) for x in old_i]
                for x, y in edges:
                    c = table[(base + x * strides[i]) * side + y]
                    if want is None:
                        want = colours[i] = c
                        set_here.append(i)
                    elif c != want:
                        for a in set_here:
                            colours[a] = None
                        return False
        return True

    def rec(j):
        if j == n:
            return True
        for choice in _level_choices(box, (side,) * d, n, j):
            if tick is not None:
                tick()
            for a in range(d):
                box[a].append(choice[a])
            before = list(colours)
            if add_level() and rec(j + 1):
                return True
            colours[:] = before
            for a in range(d):
                box[a].pop()
        return False

    if not rec(0):
        return None
    return DirectionColourCertificate(box, tuple(0 if c is None else c for c in colours))


# ----------------------------------------------------------------- arrays

def decide_M_instance(arr: NumericArray, n: int, budget: int | None = None
                      ) -> MonotoneCertificate | None:
    """Monotone [n]^d subarray, if one exists, by the same joint level
    backtracking with one sign per direction fixed by its first comparison."""
    if not isinstance(arr, NumericArray):
        raise InvalidInput("expected a NumericArray")
    if n < 1:
        raise InvalidInput("n must be positive")
    d, dims = arr.d, arr.dims
    if n > min(dims):
        return None
    if n == 1:
        return MonotoneCertificate(((0,),) * d, (1,) * d)
    flat = arr.values.reshape(-1).tolist()
    strides = _strides(dims)
    tick = _Budget(budget).tick if budget is not None else None
    box = [[] for _ in range(d)]
    signs = [None] * d

    def add_level():
        set_here = []
        for i in range(d):
            others = [a for a in range(d) if a != i]
            idx = box[i]
            want = signs[i]
            for off in itertools.product(*[range(len(box[a])) for a in others]):
                fresh = any(off[t] == len(box[a]) - 1 for t, a in enumerate(others))
                base = sum(box[a][off[t]] * strides[a] for t, a in enumerate(others))
                steps = range(len(idx) - 1) if fresh else [len(idx) - 2]
                for p in steps:
                    s = 1 if flat[base + idx[p + 1] * strides[i]] > flat[base + idx[p] * strides[i]] else -1
                    if want is None:
                        want = signs[i] = s
                        set_here.append(i)
                    elif s != want:
                        for a in set_here:
                            signs[a] = None
                        return False
        return True

    def rec(j):
        if j == n:
            return True
        for choice in _level_choices(box, dims, n, j):
            if tick is not None:
                tick()
            for a in range(d):
                box[a].append(choice[a])
            before = list(signs)
            if (j == 0 or add_level()) and rec(j + 1):
                return True
            signs[:] = before
            for a in range(d):
                box[a].pop()
        return False

    if not rec(0):
        return None
    return MonotoneCertificate(box, tuple(1 if s is None else s for s in signs))


def decide_L_instance(arr: NumericArray, n: int, budget: int | None = None
                      ) -> LexMonotoneCertificate | None:
    """Lex-monotone [n]^d subarray, if one exists (complete over all (perm, signs))."""
    if not isinstance(arr, NumericArray):
        raise InvalidInput("expected a NumericArray")
    if n > min(arr.dims):
        return None
    return find_lex_monotone(arr, n, None if budget is None else _Budget(budget))


# -------------------------------------------------------------- symmetries
#
# Each map below is a bijection on instances that carries target structures to
# target structures, so it cannot change the answer of a decide_* call.

def _edge_positions(d, side):
    # (direction, vertex tuple, y) for every flat payload position, in payload order
    out = []
    for i in range(d):
        for off in itertools.product(range(side), repeat=d - 1):
            for x, y in itertools.combinations(range(side), 2):
                v = off[:i] + (x,) + off[i:]
                out.append((i, v, y))
    return out


def _edge_position(d, side, i, v, y):
    off = v[:i] + v[i + 1:]
    row = 0
    for c in off:
        row = row * side + c
    per = side ** (d - 1) * comb(side, 2)
    return i * per + row * comb(side, 2) + pair_index(v[i], y, side)


@lru_cache(maxsize=256)
def colouring_edge_map(d: int, side: int, axes: tuple, flips: tuple) -> np.ndarray:
    """Payload position perm P of the vertex map v -> w with w[axes[a]] = v[a]
    (after reversing the axes flagged in ``flips``): image[P[e]] = source[e]."""
    out = []
    for i, v, y in _edge_positions(d, side):
        fv = tuple(side - 1 - c if flips[a] else c for a, c in enumerate(v))
        fy = side - 1 - y if flips[i] else y
        w = [0] * d
        for a in range(d):
            w[axes[a]] = fv[a]
        out.append(_edge_position(d, side, axes[i], tuple(w), fy))
    return np.array(out, dtype=np.intp)


def map_colouring(col: BoxColouring, axes=None, flips=None, colour_perm=None) -> BoxColouring:
    """Permute axes, reverse some axes and relabel colours."""
    d = col.d
    axes = tuple(range(d)) if axes is None else tuple(axes)
    flips = (False,) * d if flips is None else tuple(bool(f) for f in flips)
    if sorted(axes) != list(range(d)) or len(flips) != d:
        raise InvalidInput("bad axis permutation or flip mask")
    src = col.flat()
    if colour_perm is not None:
        if sorted(colour_perm) != list(range(col.colours)):
            raise InvalidInput("bad colour permutation")
        src = np.asarray(colour_perm, dtype=np.int32)[src]
    img = np.empty_like(src)
    img[colouring_edge_map(d, col.side, axes, flips)] = src
    return BoxColouring.from_flat(d, col.side, col.colours, img)


@lru_cache(maxsize=256)
def array_cell_map(dims: tuple, axes: tuple, flips: tuple) -> np.ndarray:
    """Row-major cell perm Q with image[Q[c]] = source[c] for the given axis map."""
    d = len(dims)
    new_dims = [0] * d
    for a in range(d):
        new_dims[axes[a]] = dims[a]
    strides = _strides(new_dims)
    out = []
    for v in itertools.product(*[range(s) for s in dims]):
        pos = 0
        for a, c in enumerate(v):
            pos += (dims[a] - 1 - c if flips[a] else c) * strides[axes[a]]
        out.append(pos)
    return np.array(out, dtype=np.intp)


def map_array(arr: NumericArray, axes=None, flips=None, reverse_values=False) -> NumericArray:
    """Permute axes, reverse some axes and optionally reverse the value order."""
    d, dims = arr.d, arr.dims
    axes = tuple(range(d)) if axes is None else tuple(axes)
    flips = (False,) * d if flips is None else tuple(bool(f) for f in flips)
    if sorted(axes) != list(range(d)) or len(flips) != d:
        raise InvalidInput("bad axis permutation or flip mask")
    src = arr.values.reshape(-1)
    if reverse_values:
        src = -src
    img = np.empty_like(src)
    img[array_cell_map(tuple(dims), axes, flips)] = src
    new_dims = [0] * d
    for a in range(d):
        new_dims[axes[a]] = dims[a]
    return NumericArray(img.reshape(new_dims))


def colouring_symmetries(d: int, side: int, r: int):
    """Every (payload perm, colour perm) of the group used to prune enumerations."""
    out = []
    for axes in itertools.permutations(range(d)):
        for flips in itertools.product((False, True), repeat=d):
            P = colouring_edge_map(d, side, axes, flips)
            for pi in itertools.permutations(range(r)):
                out.append((P, np.array(pi, dtype=np.int64)))
    return out


def array_symmetries(d: int, side: int):
    out = []
    for axes in itertools.permutations(range(d)):
        for flips in itertools.product((False, True), repeat=d):
            Q = array_cell_map((side,) * d, axes, flips)
            for rev in (False, True):
                out.append((Q, rev))
    return out


# ------------------------------------------------------------ enumeration

@dataclass(frozen=True)
class NumberQuery:
    """``family`` is "R", "M" or "L"; ``r`` is used by R only.  ``node_budget``
    caps the number of decide_* calls (or pattern-search nodes);
    ``instance_limit`` caps the raw instance count per side that is
    considered enumerable.

    ``method`` picks the enumeration for family M: "order_types", "patterns"
    (fibre comparison patterns, see :mod:`boxramsey.patterns`), or "auto",
    which switches to patterns once order types exceed ``instance_limit``.
    """
    family: str
    d: int
    n: int
    r: int = 2
    side_cap: int = 8
    node_budget: int = 10_000_000
    instance_limit: int = DEFAULT_INSTANCE_LIMIT
    method: str = "auto"

    def __post_init__(self):
        if self.family not in ("R", "M", "L"):
            raise InvalidInput("family must be R, M or L")
        if self.method not in ("auto", "order_types", "patterns"):
            raise InvalidInput("method must be auto, order_types or patterns")
        if self.method == "patterns" and self.family != "M":
            raise InvalidInput("pattern enumeration only decides family M")
        if min(self.d, self.n, self.r, self.side_cap, self.node_budget, self.instance_limit) < 1:
            raise InvalidInput("all query parameters must be positive")
        if self.side_cap < self.n:
            raise InvalidInput("side_cap is below n; every smaller side trivially lacks the target")


@dataclass
class NumberResult:
    """``status`` is "value" (exact), "lower_bound" (every side up to the cap
    has a verified witness, so the number exceeds ``lower_bound - 1``) or
    "indeterminate" (enumeration infeasible or budget spent; ``lower_bound``
    still reflects only fully verified witnesses)."""
    status: str
    value: int | None = None
    lower_bound: int | None = None
    witness: object = None
    witness_side: int | None = None
    counts: dict = field(default_factory=dict)
    reason: str = ""


def instance_count(family: str, d: int, side: int, r: int = 2) -> int:
    """Raw number of instances at this side before symmetry pruning."""
    if family == "R":
        return r ** (d * side ** (d - 1) * comb(side, 2))
    return factorial(side ** d)


CHUNK = 1 << 15


def _canonical_mask(digits: np.ndarray, weights: np.ndarray, group, value_map) -> np.ndarray:
    # digits: (rows, E); True where the row is the least encoding in its orbit
    code = digits @ weights
    keep = np.ones(len(digits), dtype=bool)
    for P, extra in group:
        img = np.empty_like(digits)
        img[:, P] = value_map(digits, extra)
        keep &= code <= img @ weights
    return keep


def _colouring_chunks(d, side, r):
    E = d * side ** (d - 1) * comb(side, 2)
    weights = np.array([r ** (E - 1 - e) for e in range(E)], dtype=np.int64)
    group = colouring_symmetries(d, side, r)
    total = r ** E
    powers = r ** np.arange(E - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, CHUNK):
        codes = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % r
        mask = _canonical_mask(digits, weights, group, lambda D, pi: pi[D])
        yield digits[mask]


def _array_chunks(d, side):
    C = side ** d
    if C ** C >= 1 << 62:
        raise InvalidInput(f"order types of {C} cells cannot be encoded")
    weights = np.array([C ** (C - 1 - c) for c in range(C)], dtype=np.int64)
    group = array_symmetries(d, side)
    perms = itertools.permutations(range(1, C + 1))
    while True:
        block = list(itertools.islice(perms, CHUNK))
        if not block:
            return
        digits = np.array(block, dtype=np.int64) - 1
        mask = _canonical_mask(digits, weights, group,
                               lambda D, rev: (C - 1 - D) if rev else D)
        yield digits[mask] + 1


def compute_number(q: NumberQuery) -> NumberResult:
    """Least side N such that every instance contains the target, by exhaustive
    enumeration of N = n, n+1, ..., side_cap up to symmetry.

    Instances are visited in increasing encoding order and only the least
    encoding of each orbit is decided, so the first instance lacking the target
    is the least such encoding overall and becomes the lower-bound witness.
    """
    counts: dict = {}
    if q.family == "R" and q.d == 1:
        return _classical(q)
    decide = {"R": decide_R_instance, "M": decide_M_instance, "L": decide_L_instance}[q.family]
    calls = 0
    best = None  # (side, witness)
    for side in range(q.n, q.side_cap + 1):
        raw = instance_count(q.family, q.d, side, q.r)
        counts[side] = {"instances": raw}
        if q.family == "M" and (q.method == "patterns" or (q.method == "auto" and raw > q.instance_limit)):
            try:
                witness, nodes = search_monotone_free(q.d, side, q.n, budget=q.node_budget - calls)
            except BudgetExhausted as exc:
                counts[side]["pattern_nodes"] = exc.used
                return _stop(best, counts, f"budget of {q.node_budget} spent at side {side}")
            calls += nodes
            counts[side]["pattern_nodes"] = nodes
            if witness is None:
                return _value(side, best, counts)
            assert decide_M_instance(witness, q.n) is None, "pattern witness contains the target"
            best = (side, witness)
            continue
        if raw > q.instance_limit:
            return _stop(best, counts, f"side {side}: {raw} instances exceed the limit {q.instance_limit}")
        if q.family == "R":
            chunks = _colouring_chunks(q.d, side, q.r)
            build = lambda row, s=side: BoxColouring.from_flat(q.d, s, q.r, row)
        else:
            chunks = _array_chunks(q.d, side)
            build = lambda row, s=side: NumericArray(row.reshape((s,) * q.d))
        witness = None
        decided = 0
        for rows in chunks:
            for row in rows:
                calls += 1
                if calls > q.node_budget:
                    counts[side]["decided"] = decided
                    return _stop(best, counts, f"budget of {q.node_budget} decisions spent at side {side}")
                decided += 1
                inst = build(row)
                if decide(inst, q.n) is None:
                    witness = inst
                    break
            if witness is not None:
                break
        counts[side]["decided"] = decided
        if witness is None:
            return _value(side, best, counts)
        best = (side, witness)
    return NumberResult("lower_bound", lower_bound=best[0] + 1, witness=best[1], witness_side=best[0],
                        counts=counts, reason=f"every side up to {q.side_cap} has a witness")


def _value(side, best, counts):
    return NumberResult("value", value=side, lower_bound=side, counts=counts,
                        witness=None if best is None else best[1],
                        witness_side=None if best is None else best[0])


def _stop(best, counts, reason):
    if best is None:
        return NumberResult("indeterminate", counts=counts, reason=reason)
    return NumberResult("indeterminate", lower_bound=best[0] + 1, witness=best[1],
                        witness_side=best[0], counts=counts, reason=reason)


def _classical(q: NumberQuery) -> NumberResult:
    try:
        value, (m, upper), checked = ramsey_extension_search(q.r, q.n, q.side_cap, q.node_budget)
    except BudgetExhausted as exc:
        return NumberResult("indeterminate", counts={"checked": exc.used}, reason=str(exc))
    witness = None
    if m >= 1:
        witness = BoxColouring(1, m, q.r, [np.asarray(upper, dtype=np.int32)])
    if value is None:
        return NumberResult("lower_bound", lower_bound=m + 1, witness=witness, witness_side=m,
                            counts={"checked": checked}, reason=f"free colourings exist up to {q.side_cap}")
    return NumberResult("value", value=value, lower_bound=value, witness=witness,
                        witness_side=m if m >= 1 else None, counts={"checked": checked})


def decide(family: str, instance, n: int, budget: int | None = None):
    return {"R": decide_R_instance, "M": decide_M_instance, "L": decide_L_instance}[family](instance, n, budget)


# ---------------------------------------------------------- naive scanners

@lru_cache(maxsize=64)
def _box_edge_table(d, side, n):
    # for every side-n sub-box: per direction, the payload positions of its edges
    per = side ** (d - 1) * comb(side, 2)
    npairs = comb(side, 2)
    table = []
    choices = list(itertools.combinations(range(side), n))
    for box in itertools.product(choices, repeat=d):
        dirs = []
        for i in range(d):
            pos = []
            for off in itertools.product(*[box[a] for a in range(d) if a != i]):
                row = 0
                for c in off:
                    row = row * side + c
                for x, y in itertools.combinations(box[i], 2):
                    pos.append(i * per + row * npairs + x * side - x * (x + 1) // 2 + (y - x - 1))
            dirs.append(pos)
        table.append((box, dirs))
    return table


def naive_mono_box_scan(col: BoxColouring, n: int):
    """Every side-n sub-box, read straight from the payload."""
    if n > col.side:
        return None
    flat = col.flat().tolist()
    for box, dirs in _box_edge_table(col.d, col.side, n):
        colours = []
        for pos in dirs:
            seen = {flat[p] for p in pos}
            if len(seen) > 1:
                break
            colours.append(seen.pop() if seen else 0)
        else:
            return DirectionColourCertificate(box, colours)
    return None


def _sub_boxes(dims, n):
    return itertools.product(*[itertools.combinations(range(s), n) for s in dims])


def naive_monotone_scan(arr: NumericArray, n: int):
    if n > min(arr.dims):
        return None
    for box in _sub_boxes(arr.dims, n):
        sub = arr.values[np.ix_(*box)]
        signs = []
        for i in range(arr.d):
            if n < 2:
                signs.append(1)
                continue
            step = np.diff(sub, axis=i)
            if np.all(step > 0):
                signs.append(1)
            elif np.all(step < 0):
                signs.append(-1)
            else:
                break
        else:
            return MonotoneCertificate(box, signs)
    return None


def naive_lex_scan(arr: NumericArray, n: int):
    """All sub-boxes times all (perm, signs), each checked by the verifier."""
    if n > min(arr.dims):
        return None
    for perm, signs in lex_orders(arr.d):
        for box in _sub_boxes(arr.dims, n):
            cert = LexMonotoneCertificate(box, perm, signs)
            if verify_lex_monotone(arr, cert):
                return cert
    return None


def naive_clique_free(upper: tuple, side: int, k: int) -> bool:
    """No k-set of K_side is monochromatic under the upper-triangle colouring."""
    m = triangle_to_matrix(upper, side)
    for S in itertools.combinations(range(side), k):
        if len({int(m[a, b]) for a, b in itertools.combinations(S, 2)}) <= 1:
            return False
    return True

