"""Colourings of products of complete graphs, numeric arrays, sub-boxes,
certificates, and the verifiers that define ground truth for everything else.

Conventions: vertices, axes ("directions") and colours are all 0-based.
A vertex of the d-fold product of K_N is a d-tuple over range(N); an edge in
direction i joins two vertices that differ exactly in coordinate i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidInput

SubBox = tuple[tuple[int, ...], ...]


def pair_index(x: int, y: int, side: int) -> int:
    """Position of the pair {x, y} in the lexicographic list of pairs x < y."""
    if x > y:
        x, y = y, x
    return x * side - x * (x + 1) // 2 + (y - x - 1)


def pairs(side: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(side), 2))


def edge_count(d: int, side: int) -> int:
    """Number of edges of the d-fold product of K_side."""
    return d * side ** (d - 1) * comb(side, 2)


@lru_cache(maxsize=64)
def _dense_index(d: int, side: int):
    # For each direction i: (off-coordinate row index, pair index, diagonal mask),
    # each of shape (side,)*d + (side,), addressed as [x_0..x_{d-1}, y].
    grid = np.indices((side,) * d + (side,)).reshape(d + 1, -1)
    y = grid[d]
    maps = []
    for i in range(d):
        others = [grid[j] for j in range(d) if j != i]
        if others:
            off = np.ravel_multi_index(others, (side,) * (d - 1))
        else:
            off = np.zeros_like(y)
        xi = grid[i]
        lo = np.minimum(xi, y)
        hi = np.maximum(xi, y)
        diag = xi == y
        pid = np.where(diag, 0, lo * side - lo * (lo + 1) // 2 + (hi - lo - 1))
        maps.append((off, pid, diag))
    return maps


class BoxColouring:
    """An r-edge-colouring of the d-fold Cartesian product of K_N.

    ``payload[i]`` has shape ``(N**(d-1), C(N, 2))``: rows are the fixed
    off-coordinates (the other d-1 coordinates, row-major), columns the pairs
    x < y in lexicographic order.  ``dense[i]`` is the same data addressed as
    ``dense[i][v_0, ..., v_{d-1}, y]`` = colour of the direction-i edge from
    ``v`` to ``v`` with coordinate i replaced by ``y`` (-1 when ``y == v_i``).
    """

    __slots__ = ("d", "side", "colours", "payload", "dense", "_lut")

    def __init__(self, d: int, side: int, colours: int, payload: Sequence):
        if d < 1 or side < 1 or colours < 1:
            raise InvalidInput("d, side and colours must be positive")
        if len(payload) != d:
            raise InvalidInput(f"expected {d} direction tensors, got {len(payload)}")
        shape = (side ** (d - 1), comb(side, 2))
        tensors = []
        for i, block in enumerate(payload):
            arr = np.array(block, dtype=np.int32).reshape(-1)
            if arr.size != shape[0] * shape[1]:
                raise InvalidInput(f"direction {i}: expected {shape[0] * shape[1]} colours, got {arr.size}")
            if arr.size and (arr.min() < 0 or arr.max() >= colours):
                raise InvalidInput(f"direction {i}: colour out of range [0, {colours})")
            arr = arr.reshape(shape)
            arr.flags.writeable = False
            tensors.append(arr)
        self.d = d
        self.side = side
        self.colours = colours
        self.payload = tuple(tensors)
        dense = []
        for block, (off, pid, diag) in zip(self.payload, _dense_index(d, side)):
            if block.size:
                full = np.where(diag, -1, block[off, pid])
            else:
                full = np.full(diag.shape, -1, dtype=np.int32)
            full = full.reshape((side,) * (d + 1))
            full.flags.writeable = False
            dense.append(full)
        self.dense = tuple(dense)
        self._lut = None

    @classmethod
    def from_flat(cls, d: int, side: int, colours: int, flat: Sequence[int]) -> "BoxColouring":
        """Build from all edge colours concatenated direction by direction."""
        flat = np.asarray(flat, dtype=np.int32).reshape(-1)
        per = side ** (d - 1) * comb(side, 2)
        if flat.size != d * per:
            raise InvalidInput(f"expected {d * per} colours, got {flat.size}")
        return cls(d, side, colours, [flat[i * per:(i + 1) * per] for i in range(d)])

    @classmethod
    def from_function(cls, d: int, side: int, colours: int,
                      colour_of: Callable[[int, tuple, int, int], int]) -> "BoxColouring":
        """Build from ``colour_of(direction, off_coords, x, y)`` with x < y."""
        payload = []
        prs = pairs(side)
        for i in range(d):
            rows = [[colour_of(i, off, x, y) for x, y in prs]
                    for off in itertools.product(range(side), repeat=d - 1)]
            payload.append(np.array(rows, dtype=np.int32).reshape(side ** (d - 1), len(prs)))
        return cls(d, side, colours, payload)

    @property
    def dims(self) -> tuple[int, ...]:
        return (self.side,) * self.d

    def flat(self) -> np.ndarray:
        return np.concatenate([p.reshape(-1) for p in self.payload])

    def colour(self, direction: int, vertex: Sequence[int], y: int) -> int:
        """Colour of the direction-``direction`` edge from ``vertex`` to coordinate ``y``."""
        if self._lut is None:
            self._lut = [t.reshape(-1).tolist() for t in self.dense]
        v = 0
        for c in vertex:
            v = v * self.side + c
        return self._lut[direction][v * self.side + y]

    def fibre_matrix(self, direction: int, vertex: Sequence[int], index: Sequence[int]) -> np.ndarray:
        """Colour matrix of the K_|index| on the direction-``direction`` fibre through
        ``vertex``, restricted to coordinates ``index`` (diagonal is -1)."""
        index = np.asarray(index, dtype=np.intp)
        at = tuple(index if j == direction else int(vertex[j]) for j in range(self.d))
        return self.dense[direction][at][:, index]

    def fibre_rows(self, direction: int, vertex: Sequence[int], index: Sequence[int]) -> list[list[int]]:
        """:meth:`fibre_matrix` as nested lists, read from the flat table (hot loops)."""
        if self._lut is None:
            self._lut = [t.reshape(-1).tolist() for t in self.dense]
        table, side = self._lut[direction], self.side
        base = 0
        for j, c in enumerate(vertex):
            base = base * side + (0 if j == direction else c)
        stride = side ** (self.d - 1 - direction)
        return [[table[(base + x * stride) * side + y] for y in index] for x in index]

    def restrict(self, subbox: SubBox) -> "BoxColouring":
        """The colouring induced on an equal-sided sub-box, relabelled to 0..k-1."""
        box = check_subbox(subbox, self.dims)
        k = len(box[0])
        if any(len(c) != k for c in box):
            raise InvalidInput("restriction of a colouring needs equal sides")
        flat = _restricted_payload(self, box)
        return BoxColouring(self.d, k, self.colours, flat)

    def __eq__(self, other):
        return (isinstance(other, BoxColouring) and self.d == other.d and self.side == other.side
                and self.colours == other.colours
                and all(np.array_equal(a, b) for a, b in zip(self.payload, other.payload)))

    def __hash__(self):
        return hash((self.d, self.side, self.colours, self.flat().tobytes()))

    def __repr__(self):
        return f"BoxColouring(d={self.d}, side={self.side}, colours={self.colours})"


def _restricted_payload(col: BoxColouring, box: SubBox) -> list[np.ndarray]:
    # Per direction: restricted edge colours in (off-coords row-major, pair) order.
    out = []
    for i in range(col.d):
        t = col.dense[i][np.ix_(*box, box[i])]
        t = np.moveaxis(t, i, -2)
        s = len(box[i])
        iu = np.triu_indices(s, 1)
        out.append(t[..., iu[0], iu[1]].reshape(prod(t.shape[:-2]), len(iu[0])))
    return out


def _colour_blocks(col: BoxColouring, box: SubBox) -> list[str]:
    # same order as the payload: off-coordinates row-major, then pairs x < y
    if col._lut is None:
        col._lut = [t.reshape(-1).tolist() for t in col.dense]
    side, d = col.side, col.d
    strides = [side ** (d - a) for a in range(d)]  # vertex strides, times side for y
    out = []
    for i in range(d):
        idx = box[i]
        if len(idx) < 2:
            continue
        table = col._lut[i]
        prs = [(x * strides[i], y) for p, x in enumerate(idx) for y in idx[p + 1:]]
        others = [a for a in range(d) if a != i]
        vals = []
        for off in itertools.product(*[box[a] for a in others]):
            base = sum(c * strides[a] for c, a in zip(off, others))
            vals.extend(table[base + x + y] for x, y in prs)
        out.append(f"{i}:" + ",".join(map(str, vals)))
    return out


class NumericArray:
    """An injective real-valued array on a box of positive side lengths."""

    __slots__ = ("values",)

    def __init__(self, values):
        a = np.array(values)
        if a.ndim == 0 or a.size == 0:
            raise InvalidInput("array must have at least one dimension and one cell")
        if not np.issubdtype(a.dtype, np.number) or np.issubdtype(a.dtype, np.complexfloating):
            raise InvalidInput("array values must be real numbers")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("array values must be finite")
        if np.unique(a).size != a.size:
            raise InvalidInput("array values must be pairwise distinct")
        a.flags.writeable = False
        self.values = a

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def d(self) -> int:
        return self.values.ndim

    def restrict(self, subbox: SubBox) -> "NumericArray":
        box = check_subbox(subbox, self.dims)
        return NumericArray(self.values[np.ix_(*box)])

    def ranks(self) -> np.ndarray:
        """Order type: ranks 1..#cells in the same shape."""
        flat = self.values.reshape(-1)
        r = np.empty(flat.size, dtype=np.int64)
        r[np.argsort(flat, kind="stable")] = np.arange(1, flat.size + 1)
        return r.reshape(self.dims)

    def __eq__(self, other):
        return (isinstance(other, NumericArray) and self.dims == other.dims
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.dims, self.values.tobytes()))

    def __repr__(self):
        return f"NumericArray(dims={self.dims})"


def check_subbox(coords: Iterable[Iterable[int]], dims: Sequence[int]) -> SubBox:
    """Normalise ``coords`` to a SubBox and check it against host ``dims``."""
    box = tuple(tuple(int(x) for x in c) for c in coords)
    if len(box) != len(dims):
        raise InvalidInput(f"sub-box has {len(box)} axes, host has {len(dims)}")
    for i, (c, n) in enumerate(zip(box, dims)):
        if not c:
            raise InvalidInput(f"axis {i}: empty index list")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise InvalidInput(f"axis {i}: indices must be strictly increasing")
        if c[0] < 0 or c[-1] >= n:
            raise InvalidInput(f"axis {i}: index out of range [0, {n})")
    return box


def full_box(dims: Sequence[int]) -> SubBox:
    return tuple(tuple(range(n)) for n in dims)


def box_vertices(box: SubBox) -> Iterable[tuple[int, ...]]:
    return itertools.product(*box)


@dataclass(frozen=True)
class DirectionColourCertificate:
    subbox: SubBox
    direction_colours: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "subbox", tuple(tuple(int(x) for x in c) for c in self.subbox))
        object.__setattr__(self, "direction_colours", tuple(int(c) for c in self.direction_colours))


@dataclass(frozen=True)
class MonotoneCertificate:
    subbox: SubBox
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "subbox", tuple(tuple(int(x) for x in c) for c in self.subbox))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))


@dataclass(frozen=True)
class LexMonotoneCertificate:
    subbox: SubBox
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "subbox", tuple(tuple(int(x) for x in c) for c in self.subbox))
        object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))


@dataclass(frozen=True)
class ConsistencyWitness:
    subbox: SubBox
    pattern: str

    def __post_init__(self):
        object.__setattr__(self, "subbox", tuple(tuple(int(x) for x in c) for c in self.subbox))


def _check_signs(signs, d):
    if len(signs) != d or any(s not in (1, -1) for s in signs):
        raise InvalidInput(f"signs must be {d} values in {{+1, -1}}")


def verify_mono_box(col: BoxColouring, cert: DirectionColourCertificate) -> bool:
    """True iff every direction-i edge of the sub-box has colour ``direction_colours[i]``."""
    box = check_subbox(cert.subbox, col.dims)
    if len(cert.direction_colours) != col.d:
        raise InvalidInput(f"expected {col.d} direction colours")
    for i in range(col.d):
        s = len(box[i])
        if s < 2:
            continue
        t = np.moveaxis(col.dense[i][np.ix_(*box, box[i])], i, -2)
        off_diag = ~np.eye(s, dtype=bool)
        if not np.all(t[..., off_diag] == cert.direction_colours[i]):
            return False
    return True


def verify_monotone(arr: NumericArray, cert: MonotoneCertificate) -> bool:
    """True iff every fibre in direction i is increasing (sign +1) or decreasing (-1)."""
    box = check_subbox(cert.subbox, arr.dims)
    _check_signs(cert.signs, arr.d)
    sub = arr.values[np.ix_(*box)]
    for i, s in enumerate(cert.signs):
        if sub.shape[i] < 2:
            continue
        step = np.diff(sub, axis=i)
        if not (np.all(step > 0) if s == 1 else np.all(step < 0)):
            return False
    return True


def lex_keys(shape: Sequence[int], perm: Sequence[int], signs: Sequence[int]) -> np.ndarray:
    """Index of every cell (row-major) in the lex order given by ``perm`` and ``signs``."""
    grid = np.indices(shape).reshape(len(shape), -1)
    # np.lexsort sorts by the last key first, so feed the keys least-significant first
    keys = [signs[a] * grid[a] for a in reversed(perm)]
    return np.lexsort(keys)


def verify_lex_monotone(arr: NumericArray, cert: LexMonotoneCertificate) -> bool:
    """True iff value order on the sub-box equals the lexicographic order of the
    sign-flipped coordinates read in the order ``perm`` (0-based axes)."""
    box = check_subbox(cert.subbox, arr.dims)
    d = arr.d
    if sorted(cert.perm) != list(range(d)):
        raise InvalidInput(f"perm must be a permutation of range({d})")
    _check_signs(cert.signs, d)
    sub = arr.values[np.ix_(*box)]
    by_value = np.argsort(sub.reshape(-1), kind="stable")
    return bool(np.array_equal(by_value, lex_keys(sub.shape, cert.perm, cert.signs)))


def canonical_pattern(obj, subbox: SubBox) -> str:
    """Encoding of the restriction of a colouring (colour pattern) or array
    (order pattern) to ``subbox``, in sub-box-relative positions.

    Two restrictions of the same kind get the same string iff their patterns
    are identical.
    """
    box = check_subbox(subbox, obj.dims)
    shape = "x".join(str(len(c)) for c in box)
    if isinstance(obj, BoxColouring):
        return f"C{shape}|" + "|".join(_colour_blocks(obj, box))
    if isinstance(obj, NumericArray):
        sub = obj.values[np.ix_(*box)].reshape(-1)
        r = np.empty(sub.size, dtype=np.int64)
        r[np.argsort(sub, kind="stable")] = np.arange(sub.size)
        return f"A{shape}|" + ",".join(map(str, r.tolist()))
    raise InvalidInput(f"cannot encode {type(obj).__name__}")


def cell_count(dims: Sequence[int]) -> int:
    return prod(dims)
