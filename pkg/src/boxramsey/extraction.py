"""Extraction of a monochromatic-in-every-direction box (colourings) or a
monotone subarray (arrays) with all vertices inside a dense vertex set S of
a consistent host box.

One level of the recursion, on the last of m axes:

1. T: leading (m-1)-tuples v whose fibre v x axis meets S in >= eps*N/2 places.
2. A: a random subset of the last axis, redrawn until at least 2/3 of T keeps
   enough hits inside v x A (the set T').
3. For every v in T', the k-element monochromatic cliques / monotone runs
   B_v inside (v x A) & S (all of them, up to a cap).
4. Fibres are bucketed by (B_v, colour or direction); each bucket U, largest
   first, is handed to the (m-1)-dimensional recursion with S := U and
   eps := (eps/3) eps**(9k) c, with c = r**(-r k**2 - 1) or k**(-2k).

The answer is P x B.  Every formula threshold is evaluated exactly and capped
at the actual side; the trace records which caps were hit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2
from typing import Any, Iterable

import numpy as np

from .consistency import is_consistent
from .errors import InvalidInput, PreconditionError
from .generators import stream
from .model import (BoxColouring, DirectionColourCertificate, MonotoneCertificate, NumericArray,
                    SubBox, check_subbox, verify_mono_box, verify_monotone)
from .monotone1d import monotone_of_length, monotone_runs
from .params import capped_pow, g_array, g_colouring
from .ramsey1d import mono_clique_fast, mono_cliques


@dataclass(frozen=True)
class ExtractionParams:
    epsilon: Fraction = Fraction(1, 4)
    retries: int = 16
    seed: int = 0

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        if not 0 < eps < Fraction(1, 2):
            raise InvalidInput("epsilon must lie in (0, 1/2)")
        if self.retries < 1:
            raise InvalidInput("retries must be positive")
        object.__setattr__(self, "epsilon", eps)

    @staticmethod
    def g_of_d(d: int, r: int | None = None) -> int:
        """(12+2r)**(d-1) for colourings (r given), 2*15**(d-1) for arrays."""
        return g_array(d) if r is None else g_colouring(d, r)


@dataclass
class ExtractionTrace:
    level: int
    epsilon_log2: float
    T: list = field(default_factory=list)
    A: list = field(default_factory=list)
    T_prime: list = field(default_factory=list)
    B: list = field(default_factory=list)
    U: list = field(default_factory=list)
    label: int | None = None
    sample_size: int = 0
    hit_threshold: int = 0
    sampling_attempts: int = 0
    capped: dict[str, bool] = field(default_factory=dict)
    buckets_tried: int = 0
    failed_stage: str | None = None
    child: "ExtractionTrace | None" = None

    def to_dict(self) -> dict[str, Any]:
        out = {k: v for k, v in self.__dict__.items() if k != "child"}
        for key in ("T", "T_prime", "U"):
            out[key] = [list(v) for v in out[key]]
        out["A"] = list(self.A)
        out["B"] = list(self.B)
        out["child"] = None if self.child is None else self.child.to_dict()
        return out

    def failure(self) -> str | None:
        """Deepest failing stage, tagged with its level."""
        if self.failed_stage == "recursion" and self.child is not None:
            return self.child.failure() or f"level {self.level}: recursion"
        if self.failed_stage:
            return f"level {self.level}: {self.failed_stage}"
        return None


class _ColouringRules:
    def __init__(self, col: BoxColouring):
        self.obj = col
        self.r = col.colours

    def hits_needed(self, k):
        return capped_pow(self.r, self.r * k, 1 << 62)

    def next_eps(self, eps, k):
        return (eps / 3) * eps ** (9 * k) / Fraction(self.r) ** (self.r * k * k + 1)

    def fibre_run(self, hits, v, z, k, axis):
        vertex = tuple(v) + (hits[0],) + tuple(z)
        m = self.obj.fibre_rows(axis, vertex, hits)
        found = mono_clique_fast(m, k, self.r)
        if found is None:
            return None
        return tuple(hits[i] for i in found.vertices), found.colour

    def fibre_runs(self, hits, v, z, k, axis):
        if k == 1:
            return [((h,), 0) for h in hits[:RUNS_PER_FIBRE]]
        vertex = tuple(v) + (hits[0],) + tuple(z)
        m = self.obj.fibre_rows(axis, vertex, hits)
        return [(tuple(hits[i] for i in vs), c) for vs, c in mono_cliques(m, k, self.r, RUNS_PER_FIBRE)]


class _ArrayRules:
    def __init__(self, arr: NumericArray):
        self.obj = arr

    def hits_needed(self, k):
        return k * k

    def next_eps(self, eps, k):
        return (eps / 3) * eps ** (9 * k) / Fraction(k) ** (2 * k)

    def fibre_run(self, hits, v, z, k, axis):
        seq = self.obj.values[tuple(v) + (np.asarray(hits),) + tuple(z)].tolist()
        run = monotone_of_length(seq, k)
        if run is None:
            return None
        return tuple(hits[i] for i in run.indices), run.sign

    def fibre_runs(self, hits, v, z, k, axis):
        if k == 1:
            return [((h,), 1) for h in hits[:RUNS_PER_FIBRE]]
        seq = self.obj.values[tuple(v) + (np.asarray(hits),) + tuple(z)].tolist()
        return [(tuple(hits[i] for i in r.indices), r.sign) for r in monotone_runs(seq, k, RUNS_PER_FIBRE)]


# cap on the cliques / runs taken from one fibre
RUNS_PER_FIBRE = 256

# Below this density every threshold a desk-scale side can express has long
# saturated; clamping keeps the exact rationals from growing without bound.
EPS_FLOOR = Fraction(1, 2 ** 4096)


def _extract(rules, m, axes, z, S, k, eps, params, depth):
    trace = ExtractionTrace(level=m, epsilon_log2=log2(eps.numerator) - log2(eps.denominator))
    if len(S) < k ** m:
        trace.failed_stage = "size"
        return None, trace
    if m == 1:
        hits = sorted(v[0] for v in S)
        trace.T = [()]
        trace.T_prime = [()]
        found = rules.fibre_run(hits, (), z, k, 0)
        if found is None:
            trace.failed_stage = "ramsey"
            return None, trace
        trace.B, trace.label = list(found[0]), found[1]
        return ((found[0],), (found[1],)), trace

    last = axes[m - 1]
    side = len(last)
    fibres: dict = {}
    for v in S:
        fibres.setdefault(v[:-1], []).append(v[-1])
    T = [v for v in sorted(fibres) if 2 * len(fibres[v]) >= eps * side]
    trace.T = T
    if not T:
        trace.failed_stage = "fibres"
        return None, trace

    full_hits = rules.hits_needed(k)
    full_size = ceil(Fraction(10) / eps * full_hits)
    size = min(full_size, side)
    hit_threshold = max(k, min(full_hits, ceil(eps * size / 10)))
    trace.sample_size = size
    trace.hit_threshold = hit_threshold
    trace.capped = {"sample_size": full_size > side, "hit_threshold": hit_threshold != full_hits}

    T_prime = None
    for attempt in range(params.retries):
        trace.sampling_attempts = attempt + 1
        if size >= side:
            A = list(last)
        else:
            rng = stream(params.seed, 2, depth, attempt)
            A = sorted(int(a) for a in rng.choice(np.asarray(last), size=size, replace=False))
        in_A = set(A)
        cand = [v for v in T if sum(1 for a in fibres[v] if a in in_A) >= hit_threshold]
        if 3 * len(cand) >= 2 * len(T):
            T_prime = cand
            break
        if size >= side:
            break
    trace.A = A
    if T_prime is None:
        trace.failed_stage = "sampling"
        return None, trace
    trace.T_prime = T_prime

    # every k-clique / k-run of a fibre files it under its own bucket, so a
    # fibre is never lost to an unlucky choice of B_v
    buckets: dict = {}
    for v in T_prime:
        hits = sorted(a for a in fibres[v] if a in in_A)
        if len(hits) < k:
            continue
        for found in rules.fibre_runs(hits, v, z, k, m - 1):
            buckets.setdefault(found, []).append(v)
    if not buckets:
        trace.failed_stage = "ramsey"
        return None, trace

    eps_next = rules.next_eps(eps, k)
    if eps_next < EPS_FLOOR:
        eps_next = EPS_FLOOR
        trace.capped["epsilon"] = True
    first_child = None
    for key in sorted(buckets, key=lambda b: (-len(buckets[b]), b)):
        B, label = key
        U = buckets[key]
        trace.buckets_tried += 1
        res, child = _extract(rules, m - 1, axes[:m - 1], (B[0],) + tuple(z), set(U), k,
                              eps_next, params, depth + 1)
        if first_child is None:
            first_child = (B, label, U, child)
        if res is not None:
            trace.B, trace.label, trace.U, trace.child = list(B), label, U, child
            P, labels = res
            return (P + (B,), labels + (label,)), trace
    B, label, U, child = first_child
    trace.B, trace.label, trace.U, trace.child = list(B), label, U, child
    trace.failed_stage = "recursion"
    return None, trace


def extract_on_axes(obj, axes, z, S, k: int, params: ExtractionParams):
    """Run the recursion on the leading ``len(axes)`` axes of ``obj`` with the
    remaining coordinates fixed to ``z``.  ``S`` holds ``len(axes)``-tuples.

    Returns ``((coords, labels) | None, trace)``.  No consistency check is made
    here; callers own that precondition.
    """
    rules = _ColouringRules(obj) if isinstance(obj, BoxColouring) else _ArrayRules(obj)
    axes = [tuple(a) for a in axes]
    return _extract(rules, len(axes), axes, tuple(z), set(S), k, params.epsilon, params, 0)


def _prepare(obj, host, S, k):
    box = check_subbox(host, obj.dims)
    if k < 1:
        raise InvalidInput("k must be positive")
    if not is_consistent(obj, box):
        raise PreconditionError("host box is not consistent")
    members = [set(c) for c in box]
    S = {tuple(int(x) for x in v) for v in S}
    for v in S:
        if len(v) != obj.d or any(x not in mem for x, mem in zip(v, members)):
            raise InvalidInput(f"vertex {v} is not in the host box")
    return box, S


def extract_in_dense(col: BoxColouring, host: SubBox, S: Iterable, k: int,
                     params: ExtractionParams | None = None):
    """Side-k box inside ``S`` that is monochromatic in every direction.

    ``host`` must be a consistent sub-box of ``col`` containing ``S``.
    Returns ``(certificate or None, trace)``; on failure ``trace.failure()``
    names the stage.
    """
    params = params or ExtractionParams()
    box, S = _prepare(col, host, S, k)
    res, trace = extract_on_axes(col, box, (), S, k, params)
    if res is None:
        return None, trace
    cert = DirectionColourCertificate(res[0], res[1])
    assert verify_mono_box(col, cert), "extraction produced an invalid box"
    return cert, trace


def extract_monotone_in_dense(arr: NumericArray, host: SubBox, S: Iterable, k: int,
                              params: ExtractionParams | None = None):
    """Monotone side-k subarray inside ``S`` of a consistent host box."""
    params = params or ExtractionParams()
    box, S = _prepare(arr, host, S, k)
    res, trace = extract_on_axes(arr, box, (), S, k, params)
    if res is None:
        return None, trace
    cert = MonotoneCertificate(res[0], res[1])
    assert verify_monotone(arr, cert), "extraction produced an invalid subarray"
    return cert, trace
