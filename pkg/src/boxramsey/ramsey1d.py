"""Monochromatic cliques in edge-coloured complete graphs, and tiny classical
Ramsey numbers by exhaustive extension.

A colouring of K_N is an N x N symmetric matrix of colour ids; the diagonal
is ignored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExhausted, InvalidInput


@dataclass(frozen=True)
class CliqueCertificate:
    vertices: tuple[int, ...]
    colour: int


def _as_matrix(colouring, colours=None) -> list[list[int]]:
    m = np.asarray(colouring)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput("colouring of K_N must be a square matrix")
    n = m.shape[0]
    if not np.issubdtype(m.dtype, np.integer):
        raise InvalidInput("colours must be integers")
    off = ~np.eye(n, dtype=bool)
    if n > 1:
        if not np.array_equal(m[off], m.T[off]):
            raise InvalidInput("colouring must be symmetric")
        if m[off].min() < 0 or (colours is not None and m[off].max() >= colours):
            raise InvalidInput("colour out of range")
    return m.tolist()


def verify_clique(colouring, cert: CliqueCertificate) -> bool:
    m = np.asarray(colouring)
    vs = cert.vertices
    if any(b <= a for a, b in zip(vs, vs[1:])) or (vs and (vs[0] < 0 or vs[-1] >= m.shape[0])):
        raise InvalidInput("clique vertices must be sorted, distinct and in range")
    return all(m[a, b] == cert.colour for a, b in itertools.combinations(vs, 2))


def _degeneracy_order(adj: list[int], n: int) -> list[int]:
    left = (1 << n) - 1
    order = []
    while left:
        best, best_deg = -1, n + 1
        rest = left
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            deg = bin(adj[v] & left).count("1")
            if deg < best_deg:
                best, best_deg = v, deg
        order.append(best)
        left ^= 1 << best
    return order


def _extend(adj: list[int], cand: int, need: int) -> list[int] | None:
    if need == 0:
        return []
    while cand:
        if bin(cand).count("1") < need:
            return None
        low = cand & -cand
        u = low.bit_length() - 1
        cand ^= low
        rest = _extend(adj, cand & adj[u], need - 1)
        if rest is not None:
            return [u] + rest
    return None


def clique_in_graph(adj: list[int], n: int, k: int) -> list[int] | None:
    """A k-clique of the graph with bitset adjacency ``adj``, searched along a
    degeneracy ordering, or None."""
    if k > n:
        return None
    if k == 1:
        return [0]
    order = _degeneracy_order(adj, n)
    later = (1 << n) - 1
    for v in order:
        later &= ~(1 << v)
        cand = adj[v] & later
        if bin(cand).count("1") < k - 1:
            continue
        rest = _extend(adj, cand, k - 1)
        if rest is not None:
            return sorted([v] + rest)
    return None


def _colour_adjacency(m: list[list[int]], n: int, c: int) -> list[int]:
    adj = []
    for a in range(n):
        row = m[a]
        bits = 0
        for b in range(n):
            if b != a and row[b] == c:
                bits |= 1 << b
        adj.append(bits)
    return adj


def _exact(m: list[list[int]], n: int, k: int, colour_ids) -> CliqueCertificate | None:
    if k > n:
        return None
    if k == 1:
        return CliqueCertificate((0,), min(colour_ids) if colour_ids else 0)
    if k == 2:
        # any edge will do: least pair of the first colour present
        for c in colour_ids:
            for a in range(n - 1):
                row = m[a]
                for b in range(a + 1, n):
                    if row[b] == c:
                        return CliqueCertificate((a, b), c)
        return None
    for c in colour_ids:
        found = clique_in_graph(_colour_adjacency(m, n, c), n, k)
        if found is not None:
            return CliqueCertificate(tuple(found), c)
    return None


def _greedy(m: list[list[int]], n: int, k: int, colours: int) -> CliqueCertificate | None:
    # Stepping-down proof of Ramsey's theorem: pivot on the lowest remaining vertex,
    # keep its majority-colour neighbourhood.  Pivots sharing a step colour form a
    # clique of that colour; the last pivot joins any class.
    if k > n:
        return None
    if k == 1:
        return CliqueCertificate((0,), 0)
    cand = list(range(n))
    steps = []
    while cand:
        p = cand[0]
        rest = cand[1:]
        if not rest:
            steps.append((p, None))
            break
        classes = [[] for _ in range(colours)]
        for v in rest:
            classes[m[p][v]].append(v)
        c = max(range(colours), key=lambda j: (len(classes[j]), -j))
        steps.append((p, c))
        cand = classes[c]
    last = steps[-1][0] if steps[-1][1] is None else None
    for c in range(colours):
        group = [p for p, pc in steps if pc == c]
        if last is not None:
            group.append(last)
        if len(group) >= k:
            return CliqueCertificate(tuple(sorted(group[:k])), c)
    return None


def find_mono_clique(colouring, k: int, strategy: str = "exact",
                     colours: int | None = None) -> CliqueCertificate | None:
    """Find k vertices spanning a monochromatic clique.

    ``exact`` backtracks over colour classes in id order and finds a clique
    iff one exists.  ``greedy`` runs the pivot argument and is guaranteed to
    succeed once N >= colours**(colours*k).
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    if strategy not in ("exact", "greedy"):
        raise InvalidInput(f"unknown strategy {strategy!r}")
    m = _as_matrix(colouring, colours)
    n = len(m)
    if k > n:
        return None
    present = sorted({m[a][b] for a in range(n) for b in range(n) if a != b})
    if colours is None:
        colours = (present[-1] + 1) if present else 1
    if strategy == "exact":
        return _exact(m, n, k, list(range(colours)))
    return _greedy(m, n, k, colours)


def mono_clique_fast(m: list[list[int]], k: int, colours: int) -> CliqueCertificate | None:
    """Unvalidated exact search for hot loops; ``m`` is a nested list."""
    return _exact(m, len(m), k, range(colours))


def least_mono_clique(m: list[list[int]], k: int, colours: int) -> CliqueCertificate | None:
    """Monochromatic k-clique with the lexicographically least vertex list,
    over all colours.  Unvalidated, like :func:`mono_clique_fast`."""
    n = len(m)
    if k > n:
        return None
    if k == 1:
        return CliqueCertificate((0,), 0)
    nbr = [_colour_adjacency(m, n, c) for c in range(colours)]
    chosen: list[int] = []

    def rec(cand: int, need: int, c: int) -> bool:
        if not need:
            return True
        while cand and bin(cand).count("1") >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            chosen.append(v)
            if rec(cand & nbr[c][v], need - 1, c):
                return True
            chosen.pop()
        return False

    for a in range(n - k + 1):
        above = ~((1 << (a + 1)) - 1)
        for b in range(a + 1, n - k + 2):
            c = m[a][b]
            chosen[:] = [a, b]
            rest = nbr[c][a] & nbr[c][b] & above & ~((1 << (b + 1)) - 1)
            if rec(rest, k - 2, c):
                return CliqueCertificate(tuple(chosen), c)
    return None


def mono_cliques(m: list[list[int]], k: int, colours: int, limit: int):
    """Up to ``limit`` monochromatic k-cliques as (vertices, colour), in
    lexicographic order of the vertex lists (k >= 2)."""
    n = len(m)
    nbr = [_colour_adjacency(m, n, c) for c in range(colours)]
    out: list = []
    chosen: list[int] = []

    def rec(cand: int, need: int, c: int) -> bool:
        if not need:
            out.append((tuple(chosen), c))
            return len(out) >= limit
        while cand and bin(cand).count("1") >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            chosen.append(v)
            if rec(cand & nbr[c][v], need - 1, c):
                return True
            chosen.pop()
        return False

    for a in range(n - k + 1):
        for b in range(a + 1, n - k + 2):
            c = m[a][b]
            chosen[:] = [a, b]
            rest = nbr[c][a] & nbr[c][b] & ~((1 << (b + 1)) - 1)
            if rec(rest, k - 2, c):
                return out
    return out


# ---------------------------------------------------------------- exact R_r(k)

@lru_cache(maxsize=16)
def _pair_perms(n: int):
    prs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(prs)}
    out = []
    for pi in itertools.permutations(range(n)):
        # image[j] = old colour at the pair mapped onto pair j
        inv = [0] * n
        for a, b in enumerate(pi):
            inv[b] = a
        out.append(tuple(index[tuple(sorted((inv[x], inv[y])))] for x, y in prs))
    return out


CANONICAL_MAX_N = 7


def _canonical(colours_tuple: tuple, n: int, r: int) -> tuple:
    if n > CANONICAL_MAX_N:
        return colours_tuple
    best = colours_tuple
    for sigma in itertools.permutations(range(r)):
        for pp in _pair_perms(n):
            img = tuple(sigma[colours_tuple[j]] for j in pp)
            if img < best:
                best = img
    return best


def _has_clique_through_new(prev: tuple, n: int, new: tuple, k: int) -> bool:
    # Does vertex n (joined to 0..n-1 by colours ``new``) lie on a mono K_k?
    if k == 1:
        return True
    prs = list(itertools.combinations(range(n), 2))
    for c in set(new):
        nbrs = [v for v in range(n) if new[v] == c]
        if len(nbrs) < k - 1:
            continue
        pos = {v: i for i, v in enumerate(nbrs)}
        adj = [0] * len(nbrs)
        for (a, b), col in zip(prs, prev):
            if col == c and a in pos and b in pos:
                adj[pos[a]] |= 1 << pos[b]
                adj[pos[b]] |= 1 << pos[a]
        if clique_in_graph(adj, len(nbrs), k - 1) is not None:
            return True
    return False


def _append_vertex(prev: tuple, n: int, new: tuple) -> tuple:
    # Upper-triangle tuple of K_{n+1} from K_n's plus the edges (v, n).
    out = []
    it = iter(prev)
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            out.append(new[a] if b == n else next(it))
    return tuple(out)


def ramsey_extension_search(r: int, k: int, n_cap: int, budget: int | None = None):
    """Grow all mono-K_k-free r-colourings of K_N one vertex at a time, up to
    vertex and colour relabelling.

    Returns ``(value, (m, witness), checked)``: ``value`` is the least N <= n_cap
    for which no free colouring exists (else None); ``witness`` is a free
    colouring of K_m as an upper-triangle tuple, m being the largest side with
    one; ``checked`` counts the extensions examined.
    """
    if r < 1 or k < 1:
        raise InvalidInput("r and k must be positive")
    level = {()}  # free colourings of K_0
    witness_n, witness = 0, ()
    checked = 0
    for n in range(1, n_cap + 1):
        nxt = set()
        for prev in sorted(level):
            for new in itertools.product(range(r), repeat=n - 1):
                checked += 1
                if budget is not None and checked > budget:
                    raise BudgetExhausted(f"extension budget {budget} exhausted at N={n}", checked)
                if k == 1 or (n - 1 >= k - 1 and _has_clique_through_new(prev, n - 1, new, k)):
                    continue
                nxt.add(_canonical(_append_vertex(prev, n - 1, new), n, r))
        if not nxt:
            return n, (witness_n, witness), checked
        level = nxt
        witness_n, witness = n, min(nxt)
    return None, (witness_n, witness), checked


def classical_ramsey_exact(r: int, k: int, n_cap: int, budget: int | None = None) -> int | None:
    """Least N <= n_cap with every r-colouring of K_N containing a mono K_k, or
    None when the threshold exceeds n_cap.  Raises BudgetExhausted otherwise."""
    value, _, _ = ramsey_extension_search(r, k, n_cap, budget)
    return value


def triangle_to_matrix(upper: tuple, n: int) -> np.ndarray:
    m = np.full((n, n), -1, dtype=np.int64)
    for (a, b), c in zip(itertools.combinations(range(n), 2), upper):
        m[a, b] = m[b, a] = c
    return m
