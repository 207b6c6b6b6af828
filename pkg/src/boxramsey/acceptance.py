"""The desk-scale acceptance suite, shared by ``boxramsey selftest`` and the
test suite.  Each check returns a :class:`Outcome`; a check passes only when
its condition holds AND it finished inside its time limit.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .consistency import (ConsistencyParams, find_consistent_array, find_consistent_box,
                          is_consistent_recursive, is_consistent_unrolled,
                          verify_consistency_witness)
from .errors import BudgetExhausted
from .extraction import ExtractionParams, extract_in_dense, extract_monotone_in_dense
from .generators import gen_random_array, gen_random_colouring
from .model import (BoxColouring, NumericArray, box_vertices, verify_lex_monotone,
                    verify_mono_box, verify_monotone)
from .monotone1d import longest_monotone, monotone_of_length, verify_run
from .oracle import (NumberQuery, compute_number, decide_L_instance, decide_M_instance,
                     decide_R_instance, naive_clique_free, naive_lex_scan, naive_monotone_scan,
                     naive_mono_box_scan)
from .params import f_consistency, g_array, g_colouring
from .pipelines import (PipelineParams, find_lex_monotone, find_mono_box, find_mono_box_2d,
                        find_monotone_subarray, lex_orders)
from .ramsey1d import find_mono_clique, verify_clique

# Established by exhaustive runs of compute_number and frozen here.
M_2_2 = 4
M_2_2_WITNESS = ((1, 2, 5), (8, 7, 6), (9, 3, 4))


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float
    limit: float | None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        limit = "" if self.limit is None else f" (limit {self.limit:g}s)"
        return f"[{status}] criterion {self.number}: {self.title} | {self.detail} | {self.seconds:.2f}s{limit}"


def _timed(number: int, title: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> Outcome:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        ok = False
        detail += f"; over time limit"
    return Outcome(number, title, ok, detail, elapsed, limit)


def _all_colourings_2x3():
    # every 2-colouring of the square of K_3: 18 edges, code bit e = colour of edge e
    powers = 1 << np.arange(17, -1, -1)
    for start in range(0, 1 << 18, 1 << 14):
        codes = np.arange(start, start + (1 << 14))
        for row in ((codes[:, None] & powers) > 0).astype(np.int32):
            yield BoxColouring.from_flat(2, 3, 2, row)


# ------------------------------------------------------------------ checks

def erdos_szekeres() -> Outcome:
    def body():
        bad = 0
        for perm in itertools.permutations(range(1, 6)):
            run = monotone_of_length(perm, 3)
            if run is None or not verify_run(perm, run) or decide_M_instance(NumericArray(perm), 3) is None:
                bad += 1
        seq = [2, 1, 4, 3]
        free = monotone_of_length(seq, 3) is None and decide_M_instance(NumericArray(seq), 3) is None
        inc, dec = longest_monotone(seq)
        free = free and len(inc) == 2 and len(dec) == 2
        return bad == 0 and free, f"{120 - bad}/120 length-5 permutations hold a run of 3; [2,1,4,3] free: {free}"
    return _timed(1, "length-5 permutations contain a monotone run of 3", 1.0, body)


def classical_ramsey() -> Outcome:
    def body():
        res = compute_number(NumberQuery("R", 1, 3, r=2, side_cap=8))
        w = res.witness
        ok_w = (w is not None and w.side == 5 and find_mono_clique(w.dense[0], 3) is None
                and naive_clique_free(tuple(w.payload[0].reshape(-1).tolist()), 5, 3))
        return res.value == 6 and ok_w, f"value {res.value}, witness side {res.witness_side}, witness verified {ok_w}"
    return _timed(2, "R_2(1,3) = 6 with a K_5 witness", 30.0, body)


def m22_exact() -> Outcome:
    def body():
        res = compute_number(NumberQuery("M", 2, 2, side_cap=6))
        w = res.witness
        ok_w = (w is not None and w.dims == (res.value - 1,) * 2 if res.value else False)
        ok_w = ok_w and decide_M_instance(w, 2) is None and naive_monotone_scan(w, 2) is None
        frozen = res.value == M_2_2
        fixture = NumericArray(M_2_2_WITNESS)
        ok_f = decide_M_instance(fixture, 2) is None and naive_monotone_scan(fixture, 2) is None
        return (res.status == "value" and frozen and ok_w and ok_f,
                f"status {res.status}, value {res.value} (frozen {M_2_2}), witness at {res.witness_side} "
                f"verified {ok_w}, fixture verified {ok_f}")
    return _timed(3, "M_2(2) exact", 300.0, body)


def consistency_equivalence() -> Outcome:
    def body():
        bad_c = 0
        count_c = 0
        consistent = 0
        for col in _all_colourings_2x3():
            a = is_consistent_recursive(col)
            if a != is_consistent_unrolled(col):
                bad_c += 1
            consistent += a
            count_c += 1
        bad_a = 0
        count_a = 0
        for perm in itertools.permutations(range(1, 9)):
            arr = NumericArray(np.array(perm).reshape(2, 2, 2))
            if is_consistent_recursive(arr) != is_consistent_unrolled(arr):
                bad_a += 1
            count_a += 1
        return (bad_c == 0 and bad_a == 0 and count_c == 1 << 18 and count_a >= 10 ** 4,
                f"{bad_c} disagreements on {count_c} colourings ({consistent} consistent), "
                f"{bad_a} on {count_a} order types of [2]^3")
    return _timed(4, "recursive and unrolled consistency agree", 300.0, body)


def _fuzz_colouring(rnd: random.Random, seed: int, counts: dict, bad: list):
    d = rnd.randint(1, 3)
    side = rnd.randint(1, 6 if d < 3 else 5)
    r = rnd.randint(1, 3)
    n = rnd.randint(1, 3)
    col = gen_random_colouring(d, side, r, seed)

    def check(name, cert, ok):
        counts[name] = counts.get(name, 0) + 1
        if cert is not None and not ok(cert):
            bad.append((name, seed))

    params = PipelineParams(seed=seed, consistency=ConsistencyParams(budget=20_000))
    try:
        check("find_mono_box", find_mono_box(col, n, params), lambda c: verify_mono_box(col, c))
    except BudgetExhausted:
        counts["budget"] = counts.get("budget", 0) + 1
    if d == 2:
        check("find_mono_box_2d", find_mono_box_2d(col, n, params), lambda c: verify_mono_box(col, c))
    if d == 1:
        exact = find_mono_clique(col.dense[0], n, "exact", colours=r)
        greedy = find_mono_clique(col.dense[0], n, "greedy", colours=r)
        for name, cert in (("find_mono_clique", exact), ("find_mono_clique_greedy", greedy)):
            check(name, cert, lambda c: verify_clique(col.dense[0], c))
        if exact is not None and greedy is None:
            # largest N at which greedy missed an existing clique, per (r, n)
            gaps = counts.setdefault("greedy_gap", {})
            gaps[(r, n)] = max(gaps.get((r, n), 0), side)
    try:
        w = find_consistent_box(col, min(n, side), ConsistencyParams(budget=20_000))
        check("find_consistent_box", w, lambda c: verify_consistency_witness(col, c))
        if w is not None:
            S = list(box_vertices(w.subbox))
            k = rnd.randint(1, len(w.subbox[0]))
            cert, _ = extract_in_dense(col, w.subbox, S, k, ExtractionParams(seed=seed))
            check("extract_in_dense", cert, lambda c: verify_mono_box(col, c))
    except BudgetExhausted:
        counts["budget"] = counts.get("budget", 0) + 1
    try:
        check("decide_R_instance", decide_R_instance(col, n, budget=20_000), lambda c: verify_mono_box(col, c))
    except BudgetExhausted:
        counts["budget"] = counts.get("budget", 0) + 1


def _fuzz_array(rnd: random.Random, seed: int, counts: dict, bad: list):
    d = rnd.randint(1, 3)
    dims = [rnd.randint(1, 6 if d < 3 else 4) for _ in range(d)]
    if rnd.random() < 0.5:
        dims = [dims[0]] * d
    n = rnd.randint(1, 3)
    arr = gen_random_array(dims, seed)

    def check(name, cert, ok):
        counts[name] = counts.get(name, 0) + 1
        if cert is not None and not ok(cert):
            bad.append((name, seed))

    params = PipelineParams(seed=seed, consistency=ConsistencyParams(budget=20_000))
    try:
        check("find_monotone_subarray", find_monotone_subarray(arr, n, params), lambda c: verify_monotone(arr, c))
    except BudgetExhausted:
        counts["budget"] = counts.get("budget", 0) + 1
    if d == 1:
        seq = arr.values.tolist()
        for run in longest_monotone(seq):
            check("longest_monotone", run, lambda c: verify_run(seq, c))
    try:
        w = find_consistent_array(arr, min([n] + dims), ConsistencyParams(budget=20_000))
        check("find_consistent_array", w, lambda c: verify_consistency_witness(arr, c))
        if w is not None:
            S = list(box_vertices(w.subbox))
            k = rnd.randint(1, min(len(c) for c in w.subbox))
            cert, _ = extract_monotone_in_dense(arr, w.subbox, S, k, ExtractionParams(seed=seed))
            check("extract_monotone_in_dense", cert, lambda c: verify_monotone(arr, c))
    except BudgetExhausted:
        counts["budget"] = counts.get("budget", 0) + 1
    for name, fn, ok in (("decide_M_instance", decide_M_instance, verify_monotone),
                         ("decide_L_instance", decide_L_instance, verify_lex_monotone)):
        try:
            check(name, fn(arr, n, 20_000), lambda c: ok(arr, c))
        except BudgetExhausted:
            counts["budget"] = counts.get("budget", 0) + 1


def soundness_fuzz(instances: int = 10_000) -> Outcome:
    def body():
        counts: dict = {}
        bad: list = []
        for seed in range(instances):
            rnd = random.Random(seed)
            if seed % 2 == 0:
                _fuzz_colouring(rnd, seed, counts, bad)
            else:
                _fuzz_array(rnd, seed, counts, bad)
        gaps = counts.pop("greedy_gap", {})
        calls = sum(v for k, v in counts.items() if k != "budget")
        gap_text = ", ".join(f"r={r} n={n}: N={N}" for (r, n), N in sorted(gaps.items())) or "none"
        return (not bad and instances >= 10_000,
                f"{instances} instances, {calls} search calls, {len(bad)} violations"
                f"{' ' + str(bad[:3]) if bad else ''}, {counts.get('budget', 0)} budget stops; "
                f"largest N where greedy missed a clique: {gap_text}")
    return _timed(5, "every returned certificate verifies", None, body)


def micro_completeness() -> Outcome:
    def body():
        mismatch = 0
        unsound = 0
        found = 0
        pipe = {"find_mono_box": 0, "find_mono_box_2d": 0}
        total = 0
        for col in _all_colourings_2x3():
            total += 1
            cert = decide_R_instance(col, 2)
            naive = naive_mono_box_scan(col, 2)
            if (cert is None) != (naive is None) or (cert is not None and not verify_mono_box(col, cert)):
                mismatch += 1
            found += cert is not None
            for name, fn in (("find_mono_box", find_mono_box), ("find_mono_box_2d", find_mono_box_2d)):
                p = fn(col, 2)
                if p is not None:
                    pipe[name] += 1
                    if cert is None:
                        unsound += 1
        return (mismatch == 0 and unsound == 0 and total == 1 << 18,
                f"{total} colourings, oracle/naive mismatches {mismatch}, contain a box {found}, "
                f"pipeline successes {pipe}, outside oracle {unsound}")
    return _timed(6, "exact decision equals naive scan on all of square K_3", 300.0, body)


def pipeline_differential(instances: int = 1000) -> Outcome:
    def body():
        bad = 0
        unconfirmed = 0
        wins = {"find_mono_box": 0, "find_mono_box_2d": 0}
        for seed in range(instances):
            col = gen_random_colouring(2, 6, 2, seed)
            for n in (2, 3):
                oracle = None
                for name, fn in (("find_mono_box", find_mono_box), ("find_mono_box_2d", find_mono_box_2d)):
                    cert = fn(col, n, PipelineParams(seed=seed))
                    if cert is None:
                        continue
                    wins[name] += 1
                    if not verify_mono_box(col, cert):
                        bad += 1
                    if oracle is None:
                        oracle = decide_R_instance(col, n)
                    if oracle is None:
                        unconfirmed += 1
        return (bad == 0 and unconfirmed == 0,
                f"{instances} colourings x n in (2,3): successes {wins}, invalid {bad}, unconfirmed {unconfirmed}")
    return _timed(7, "pipelines agree with the oracle on square K_6", None, body)


def parameter_table() -> Outcome:
    def body():
        checks = {
            "f(1)=1": f_consistency(1) == 1, "f(2)=4": f_consistency(2) == 4, "f(3)=24": f_consistency(3) == 24,
            "array g(1)=2": g_array(1) == 2, "array g(2)=30": g_array(2) == 30,
            "colouring g(2) at r=2 = 16": g_colouring(2, 2) == 16,
            "colouring g(1) = 1": g_colouring(1, 2) == 1,
        }
        failed = [k for k, v in checks.items() if not v]
        return not failed, "all exact" if not failed else f"wrong: {failed}"
    return _timed(8, "threshold formulas", None, body)


def lex_monotone() -> Outcome:
    def body():
        pairs = len(lex_orders(2))
        disagree = 0
        exist = 0
        for perm in itertools.permutations(range(1, 5)):
            arr = NumericArray(np.array(perm).reshape(2, 2))
            fast = find_lex_monotone(arr, 2)
            slow = naive_lex_scan(arr, 2)
            if (fast is None) != (slow is None) or (fast is not None and not verify_lex_monotone(arr, fast)):
                disagree += 1
            exist += fast is not None
        return (pairs == 8 and disagree == 0,
                f"{pairs} (perm, signs) pairs, {disagree} disagreements on 24 order types, {exist} lex-monotone")
    return _timed(9, "lex-monotone search equals brute force on [2]^2", None, body)


CRITERIA: dict[int, Callable[[], Outcome]] = {
    1: erdos_szekeres, 2: classical_ramsey, 3: m22_exact, 4: consistency_equivalence,
    5: soundness_fuzz, 6: micro_completeness, 7: pipeline_differential, 8: parameter_table,
    9: lex_monotone,
}


def run(only=None, echo=print) -> list[Outcome]:
    out = []
    for k in sorted(CRITERIA if only is None else only):
        res = CRITERIA[k]()
        echo(res.line())
        out.append(res)
    return out
