"""Seeded instance generators.

All randomness comes from a Philox stream keyed by the seed: the k-th raw
64-bit word depends only on (seed, path, k), so an instance can be filled in
any order or in parallel chunks and still come out bit-identical.
"""

from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np

from .errors import InvalidInput, SizeError
from .model import BoxColouring, NumericArray, edge_count

MAX_EDGES = 10_000_000
MAX_CELLS = 10_000_000


def stream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for ``seed`` and a sub-stream ``path``."""
    if not 0 <= seed < 2**64:
        raise InvalidInput("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(path))))


def raw_words(seed: int, count: int, *path: int, start: int = 0) -> np.ndarray:
    """Words ``start .. start+count-1`` of the stream, as uint64."""
    bg = stream(seed, *path).bit_generator
    if start:
        # Philox emits 4 words per counter step
        q, rem = divmod(start, 4)
        bg.advance(q)
        return bg.random_raw(count + rem)[rem:]
    return bg.random_raw(count)


def gen_random_colouring(d: int, side: int, colours: int, seed: int) -> BoxColouring:
    if d < 1 or side < 1 or colours < 1:
        raise InvalidInput("d, side and colours must be positive")
    count = edge_count(d, side)
    if count > MAX_EDGES:
        raise SizeError(f"{count} edges exceeds the limit of {MAX_EDGES}")
    words = raw_words(seed, count, 0)
    flat = (words % np.uint64(colours)).astype(np.int32)
    return BoxColouring.from_flat(d, side, colours, flat)


def gen_direction_colouring(d: int, side: int, colours: int) -> BoxColouring:
    """Every direction-i edge gets colour ``i mod colours``."""
    if d < 1 or side < 1 or colours < 1:
        raise InvalidInput("d, side and colours must be positive")
    per = edge_count(d, side) // d
    flat = np.repeat(np.arange(d) % colours, per)
    return BoxColouring.from_flat(d, side, colours, flat)


def gen_constant_colouring(d: int, side: int, colours: int, colour: int = 0) -> BoxColouring:
    return BoxColouring.from_flat(d, side, colours, np.full(edge_count(d, side), colour))


def gen_random_array(dims: Sequence[int], seed: int) -> NumericArray:
    """Uniform random order type: a permutation of 1..prod(dims), row-major."""
    dims = tuple(int(n) for n in dims)
    if not dims or any(n < 1 for n in dims):
        raise InvalidInput("dims must be a non-empty list of positive sides")
    cells = prod(dims)
    if cells > MAX_CELLS:
        raise SizeError(f"{cells} cells exceeds the limit of {MAX_CELLS}")
    words = raw_words(seed, cells, 1)
    ranks = np.empty(cells, dtype=np.int64)
    ranks[np.argsort(words, kind="stable")] = np.arange(1, cells + 1)
    return NumericArray(ranks.reshape(dims))


def gen_lex_array(dims: Sequence[int], perm: Sequence[int] | None = None,
                  signs: Sequence[int] | None = None) -> NumericArray:
    """Array whose value order is the lex order of ``(signs[a] * x[a] for a in perm)``.

    With the defaults this is the row-major increasing array.
    """
    dims = tuple(int(n) for n in dims)
    d = len(dims)
    perm = tuple(range(d)) if perm is None else tuple(perm)
    signs = (1,) * d if signs is None else tuple(signs)
    grid = np.indices(dims).reshape(d, -1)
    keys = [signs[a] * grid[a] for a in reversed(perm)]
    ranks = np.empty(grid.shape[1], dtype=np.int64)
    ranks[np.lexsort(keys)] = np.arange(1, grid.shape[1] + 1)
    return NumericArray(ranks.reshape(dims))


def perturb_to_injective(values) -> NumericArray:
    """Rank-normalise to 1..#cells, breaking ties by row-major cell order."""
    a = np.asarray(values, dtype=float)
    if a.ndim == 0 or a.size == 0:
        raise InvalidInput("need a non-empty array")
    flat = a.reshape(-1)
    ranks = np.empty(flat.size, dtype=np.int64)
    ranks[np.argsort(flat, kind="stable")] = np.arange(1, flat.size + 1)
    return NumericArray(ranks.reshape(a.shape))
