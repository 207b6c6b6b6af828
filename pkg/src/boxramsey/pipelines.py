"""End-to-end extraction pipelines.

``find_mono_box`` and ``find_monotone_subarray`` follow the general-d route:
consistent box of side t, last axis cut to u values, a k-clique / monotone run
in every last-axis fibre, pigeonhole on (fibre vertex set, colour or
direction), then dense extraction on the leading axes.  ``find_mono_box_2d``
is the separate two-round pigeonhole argument for d = 2 and exists mainly for
differential testing.  ``find_lex_monotone`` is an exact backtracking search.

Every side in these arguments is doubly exponential, so each stage runs with
its parameter capped at the instance side and records a guarantee-void flag
when the cap bites.  Results are always verified before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .consistency import ConsistencyParams, find_consistent_array, find_consistent_box
from .errors import InvalidInput
from .extraction import ExtractionParams, extract_on_axes
from .model import (BoxColouring, DirectionColourCertificate, LexMonotoneCertificate,
                    MonotoneCertificate, NumericArray, verify_lex_monotone, verify_mono_box,
                    verify_monotone)
from .monotone1d import monotone_of_length
from .params import (ArrayPlan, RamseyPlan, capped_pow, consistent_array_threshold,
                     consistent_box_threshold, dense_array_threshold, dense_colouring_threshold)
from .ramsey1d import mono_clique_fast
from .report import SearchLog

EPS_CEILING = Fraction(1, 3)


@dataclass(frozen=True)
class PipelineParams:
    """Knobs for the pipelines.

    ``t_cap``/``u_cap`` bound the consistent-box side and the last-axis cut on
    top of the instance side.  With ``adaptive`` the consistent-box stage
    steps down from the largest admissible side to n until a full run
    succeeds; without it only the largest side is tried.
    """
    seed: int = 0
    t_cap: int | None = None
    u_cap: int | None = None
    adaptive: bool = True
    retries: int = 16
    consistency: ConsistencyParams = field(default_factory=ConsistencyParams)

    @staticmethod
    def ramsey_plan(d: int, r: int, n: int) -> RamseyPlan:
        return RamseyPlan(d, r, n)

    @staticmethod
    def array_plan(d: int, n: int) -> ArrayPlan:
        return ArrayPlan(d, n)


def _sides(top: int, n: int, adaptive: bool):
    return range(top, n - 1, -1) if adaptive else [top]


def _cap(value: int, *caps) -> int:
    for c in caps:
        if c is not None:
            value = min(value, c)
    return value


# ------------------------------------------------------------- colourings

def find_mono_box(col: BoxColouring, n: int, params: PipelineParams | None = None,
                  log: SearchLog | None = None) -> DirectionColourCertificate | None:
    """Side-n box of ``col`` that is monochromatic in every direction, or None."""
    params = params or PipelineParams()
    log = log if log is not None else SearchLog()
    if not isinstance(col, BoxColouring):
        raise InvalidInput("expected a BoxColouring")
    if n < 1:
        raise InvalidInput("n must be positive")
    d, side, r = col.d, col.side, col.colours
    if n > side:
        log.note("size", False, reason="n exceeds side")
        return None
    if n == 1:
        log.note("trivial", True)
        return DirectionColourCertificate(((0,),) * d, (0,) * d)
    if d == 1:
        hit = mono_clique_fast(col.dense[0].tolist(), n, r)
        log.note("ramsey", hit is not None)
        return None if hit is None else DirectionColourCertificate((hit.vertices,), (hit.colour,))

    plan = RamseyPlan(d, r, n)
    # with one colour every formula size collapses to 1; never go below n
    top = max(n, _cap(plan.t(side + 1), side, params.t_cap))
    for k in _sides(top, n, params.adaptive):
        w = find_consistent_box(col, k, params.consistency, log)
        log.records[-1].guarantee_void = consistent_box_threshold(d, r, k, side + 1) > side
        if w is None:
            continue
        cert = _finish_colouring(col, w.subbox, n, plan, params, log)
        if cert is not None:
            log.note("done", True, guarantee_void=not plan.guaranteed(side))
            return cert
    log.note("pipeline", False, guarantee_void=not plan.guaranteed(side),
             reason="no consistent box led to an extraction")
    return None


def _finish_colouring(col, box, n, plan, params, log):
    d, r = col.d, col.colours
    k = len(box[0])
    u_full = plan.u(k + 1)
    u = max(n, _cap(u_full, k, params.u_cap))
    last = box[d - 1][:u]
    lead = box[:d - 1]
    log.note("restrict", True, guarantee_void=u < u_full, side=k, u=u)

    buckets: dict = {}
    for v in itertools.product(*lead):
        m = col.fibre_rows(d - 1, v + (last[0],), last)
        hit = mono_clique_fast(m, n, r)
        if hit is not None:
            key = (tuple(last[i] for i in hit.vertices), hit.colour)
            buckets.setdefault(key, []).append(v)
    total = k ** (d - 1)
    if not buckets:
        log.note("fibres", False, reason="no last-axis fibre holds a mono K_n", fibres=total)
        return None
    eps_hat = RamseyPlan.eps_hat(r, n, u)
    eps = min(eps_hat, EPS_CEILING)
    ext = ExtractionParams(epsilon=eps, retries=params.retries, seed=params.seed)
    void = dense_colouring_threshold(d - 1, r, n, eps, k + 1) > k
    first_failure = None
    for key in sorted(buckets, key=lambda b: (-len(buckets[b]), b)):
        C, colour = key
        S = buckets[key]
        res, trace = extract_on_axes(col, lead, (C[0],), S, n, ext)
        if res is None:
            first_failure = first_failure or trace.failure()
            continue
        cert = DirectionColourCertificate(res[0] + (C,), res[1] + (colour,))
        assert verify_mono_box(col, cert), "pipeline produced an invalid box"
        log.note("extraction", True, guarantee_void=void or len(S) < eps_hat * total,
                 density=f"{len(S)}/{total}", trace=trace.to_dict())
        return cert
    log.note("extraction", False, guarantee_void=void, buckets=len(buckets), reason=first_failure)
    return None


def find_mono_box_2d(col: BoxColouring, n: int, params: PipelineParams | None = None,
                     log: SearchLog | None = None) -> DirectionColourCertificate | None:
    """Two-round pigeonhole for d = 2: a mono clique A1 per row inside a fixed
    column set, rows bucketed by (A1, colour); then a mono K_n per column of A1
    inside the bucket's rows, columns bucketed again."""
    params = params or PipelineParams()
    log = log if log is not None else SearchLog()
    if not isinstance(col, BoxColouring) or col.d != 2:
        raise InvalidInput("find_mono_box_2d needs a 2-dimensional colouring")
    if n < 1:
        raise InvalidInput("n must be positive")
    side, r = col.side, col.colours
    if n > side:
        log.note("size", False, reason="n exceeds side")
        return None
    if n == 1:
        log.note("trivial", True)
        return DirectionColourCertificate(((0,), (0,)), (0, 0))

    # column set of size r**(r**(3 r n**2 + 1)), row cliques of size r**(3 r n**2)
    s_exp = capped_pow(r, 3 * r * n * n + 1, side.bit_length() + 1)
    cols = tuple(range(max(n, _cap(capped_pow(r, s_exp, side + 1), side))))
    top = max(n, _cap(capped_pow(r, 3 * r * n * n, side + 1), len(cols), params.t_cap))
    log.note("columns", True, guarantee_void=capped_pow(r, s_exp, side + 1) > side, size=len(cols))
    for k1 in _sides(top, n, params.adaptive):
        rows: dict = {}
        for i in range(side):
            m = col.fibre_rows(0, (cols[0], i), cols)
            hit = mono_clique_fast(m, k1, r)
            if hit is not None:
                rows.setdefault((tuple(cols[j] for j in hit.vertices), hit.colour), []).append(i)
        for key in sorted(rows, key=lambda b: (-len(rows[b]), b)):
            A1, c1 = key
            A2 = tuple(rows[key])
            if len(A2) < n:
                break
            columns: dict = {}
            for b in A1:
                m = col.fibre_rows(1, (b, A2[0]), A2)
                hit = mono_clique_fast(m, n, r)
                if hit is not None:
                    columns.setdefault((tuple(A2[j] for j in hit.vertices), hit.colour), []).append(b)
            for key2 in sorted(columns, key=lambda b: (-len(columns[b]), b)):
                A2n, c2 = key2
                A1n = columns[key2]
                if len(A1n) < n:
                    break
                cert = DirectionColourCertificate((tuple(A1n[:n]), A2n), (c1, c2))
                assert verify_mono_box(col, cert), "2-d pipeline produced an invalid box"
                log.note("done", True, guarantee_void=k1 < capped_pow(r, 3 * r * n * n, side + 1),
                         row_clique=k1, rows=len(A2), columns=len(A1n))
                return cert
    log.note("pipeline", False, guarantee_void=True, reason="no second-round bucket reached n")
    return None


# ----------------------------------------------------------------- arrays

def find_monotone_subarray(arr: NumericArray, n: int, params: PipelineParams | None = None,
                           log: SearchLog | None = None) -> MonotoneCertificate | None:
    """Monotone [n]^d subarray of ``arr``, or None."""
    params = params or PipelineParams()
    log = log if log is not None else SearchLog()
    if not isinstance(arr, NumericArray):
        raise InvalidInput("expected a NumericArray")
    if n < 1:
        raise InvalidInput("n must be positive")
    d = arr.d
    side = min(arr.dims)
    if n > side:
        log.note("size", False, reason="n exceeds side")
        return None
    if n == 1:
        log.note("trivial", True)
        return MonotoneCertificate(((0,),) * d, (1,) * d)
    if d == 1:
        run = monotone_of_length(arr.values.tolist(), n)
        log.note("monotone", run is not None)
        return None if run is None else MonotoneCertificate((run.indices,), (run.sign,))

    plan = ArrayPlan(d, n)
    top = max(n, _cap(plan.t(side + 1), side, params.t_cap))
    for k in _sides(top, n, params.adaptive):
        w = find_consistent_array(arr, k, params.consistency, log)
        log.records[-1].guarantee_void = consistent_array_threshold(d, k, side + 1) > side
        if w is None:
            continue
        cert = _finish_array(arr, w.subbox, n, plan, params, log)
        if cert is not None:
            log.note("done", True, guarantee_void=not plan.guaranteed(side))
            return cert
    log.note("pipeline", False, guarantee_void=not plan.guaranteed(side),
             reason="no consistent subarray led to an extraction")
    return None


def _finish_array(arr, box, n, plan, params, log):
    d = arr.d
    k = len(box[0])
    u_full = plan.u(k + 1)
    u = max(n, _cap(u_full, k, params.u_cap))
    last = box[d - 1][:u]
    lead = box[:d - 1]
    log.note("restrict", True, guarantee_void=u < u_full, side=k, u=u)

    buckets: dict = {}
    for v in itertools.product(*lead):
        run = monotone_of_length(arr.values[v + (list(last),)].tolist(), n)
        if run is not None:
            buckets.setdefault((tuple(last[i] for i in run.indices), run.sign), []).append(v)
    total = k ** (d - 1)
    if not buckets:
        log.note("fibres", False, reason="no last-axis fibre holds a monotone run", fibres=total)
        return None
    eps_hat = ArrayPlan.eps_hat(n, u)
    eps = min(eps_hat, EPS_CEILING)
    ext = ExtractionParams(epsilon=eps, retries=params.retries, seed=params.seed)
    void = dense_array_threshold(d - 1, n, eps, k + 1) > k
    first_failure = None
    for key in sorted(buckets, key=lambda b: (-len(buckets[b]), b)):
        C, sign = key
        S = buckets[key]
        res, trace = extract_on_axes(arr, lead, (C[0],), S, n, ext)
        if res is None:
            first_failure = first_failure or trace.failure()
            continue
        cert = MonotoneCertificate(res[0] + (C,), res[1] + (sign,))
        assert verify_monotone(arr, cert), "pipeline produced an invalid subarray"
        log.note("extraction", True, guarantee_void=void or len(S) < eps_hat * total,
                 density=f"{len(S)}/{total}", trace=trace.to_dict())
        return cert
    log.note("extraction", False, guarantee_void=void, buckets=len(buckets), reason=first_failure)
    return None


# ------------------------------------------------------------ lex-monotone

def lex_orders(d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (axis order, sign vector) pairs in search order; there are d! 2**d."""
    return [(perm, signs) for perm in itertools.permutations(range(d))
            for signs in itertools.product((1, -1), repeat=d)]


def _lex_key_order(j: int, d: int, perm, signs):
    cells = list(itertools.product(range(j), repeat=d))
    cells.sort(key=lambda p: tuple(signs[a] * p[a] for a in perm))
    return cells


def lex_search(arr: NumericArray, n: int, perm, signs, budget=None):
    """Side-n sub-box realising the lex order (perm, signs), by joint
    backtracking: level j fixes the j-th index on every axis at once, and
    the level-j prefix box must already be lex-monotone."""
    d = arr.d
    dims = arr.dims
    flat = arr.values.reshape(-1).tolist()
    strides = [1] * d
    for a in range(d - 2, -1, -1):
        strides[a] = strides[a + 1] * dims[a + 1]
    orders = [None] + [_lex_key_order(j, d, perm, signs) for j in range(1, n + 1)]
    box = [[] for _ in range(d)]

    def ok(j):
        prev = None
        for p in orders[j]:
            v = flat[sum(box[a][p[a]] * strides[a] for a in range(d))]
            if prev is not None and v <= prev:
                return False
            prev = v
        return True

    def rec(j):
        if j == n:
            return True
        ranges = [range(box[a][-1] + 1 if j else 0, dims[a] - (n - j) + 1) for a in range(d)]
        for choice in itertools.product(*ranges):
            if budget is not None:
                budget.tick()
            for a in range(d):
                box[a].append(choice[a])
            if ok(j + 1) and rec(j + 1):
                return True
            for a in range(d):
                box[a].pop()
        return False

    if n > min(dims):
        return None
    return tuple(tuple(c) for c in box) if rec(0) else None


def find_lex_monotone(arr: NumericArray, n: int, budget=None) -> LexMonotoneCertificate | None:
    """First (perm, signs) in :func:`lex_orders` order admitting a lex-monotone
    side-n sub-box."""
    if not isinstance(arr, NumericArray):
        raise InvalidInput("expected a NumericArray")
    if n < 1:
        raise InvalidInput("n must be positive")
    for perm, signs in lex_orders(arr.d):
        box = lex_search(arr, n, perm, signs, budget)
        if box is not None:
            cert = LexMonotoneCertificate(box, perm, signs)
            assert verify_lex_monotone(arr, cert), "lex search produced an invalid box"
            return cert
    return None
