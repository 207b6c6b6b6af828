"""Longest monotone subsequences (patience sorting) and fixed-length runs."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInput


@dataclass(frozen=True)
class RunCertificate:
    indices: tuple[int, ...]
    sign: int

    def __len__(self):
        return len(self.indices)


def verify_run(seq: Sequence[float], cert: RunCertificate) -> bool:
    idx = cert.indices
    if any(b <= a for a, b in zip(idx, idx[1:])) or (idx and (idx[0] < 0 or idx[-1] >= len(seq))):
        raise InvalidInput("run indices must be strictly increasing and in range")
    vals = [seq[i] for i in idx]
    if cert.sign == 1:
        return all(a < b for a, b in zip(vals, vals[1:]))
    if cert.sign == -1:
        return all(a > b for a, b in zip(vals, vals[1:]))
    raise InvalidInput("sign must be +1 or -1")


def _check(seq) -> list:
    vals = list(seq)
    if len(set(vals)) != len(vals):
        raise InvalidInput("sequence must be injective")
    return vals


def _ahead(vals: list) -> list[int]:
    # Patience piles swept from the right: ahead[i] is the length of the
    # longest increasing run starting at i.
    tails: list = []
    ahead = [0] * len(vals)
    for i in range(len(vals) - 1, -1, -1):
        key = -vals[i]
        pos = bisect_left(tails, key)
        if pos == len(tails):
            tails.append(key)
        else:
            tails[pos] = key
        ahead[i] = pos + 1
    return ahead


def _least_run(vals: list, ahead: list[int], need: int) -> tuple[int, ...]:
    # left-to-right greedy: the lexicographically least increasing run of
    # length ``need`` (empty if there is none)
    out = []
    prev = None
    for i, v in enumerate(vals):
        if need and ahead[i] >= need and (prev is None or v > prev):
            out.append(i)
            prev = v
            need -= 1
    return tuple(out) if not need else ()


def _longest_increasing(vals: list) -> tuple[int, ...]:
    """Lexicographically least index set among the longest increasing runs."""
    ahead = _ahead(vals)
    return _least_run(vals, ahead, max(ahead, default=0))


def longest_monotone(seq: Sequence[float]) -> tuple[RunCertificate, RunCertificate]:
    """Longest increasing and longest decreasing runs of an injective sequence."""
    vals = _check(seq)
    if not vals:
        raise InvalidInput("sequence must be non-empty")
    inc = _longest_increasing(vals)
    dec = _longest_increasing([-v for v in vals])
    return RunCertificate(inc, 1), RunCertificate(dec, -1)


def monotone_of_length(seq: Sequence[float], n: int) -> RunCertificate | None:
    """A monotone run of exactly ``n`` positions, preferring increasing; guaranteed
    to exist once ``len(seq) >= (n-1)**2 + 1``."""
    if n < 1:
        raise InvalidInput("n must be positive")
    vals = _check(seq)
    if len(vals) < n:
        return None
    inc = _longest_increasing(vals)
    if len(inc) >= n:
        return RunCertificate(inc[:n], 1)
    dec = _longest_increasing([-v for v in vals])
    if len(dec) >= n:
        return RunCertificate(dec[:n], -1)
    return None


def least_monotone_of_length(seq: Sequence[float], n: int) -> RunCertificate | None:
    """The monotone run of exactly ``n`` positions with the lexicographically
    least index set, increasing on ties (only possible when n == 1)."""
    if n < 1:
        raise InvalidInput("n must be positive")
    vals = _check(seq)
    if len(vals) < n:
        return None
    neg = [-v for v in vals]
    inc = _least_run(vals, _ahead(vals), n)
    dec = _least_run(neg, _ahead(neg), n)
    if inc and (not dec or inc <= dec):
        return RunCertificate(inc, 1)
    if dec:
        return RunCertificate(dec, -1)
    return None


def monotone_runs(seq: Sequence[float], n: int, limit: int) -> list[RunCertificate]:
    """Up to ``limit`` monotone runs of exactly ``n`` >= 2 positions, ordered
    by first index, then increasing before decreasing, then lexicographically.
    Unvalidated."""
    vals = list(seq)
    neg = [-v for v in vals]
    aheads = (_ahead(vals), _ahead(neg))
    out: list[RunCertificate] = []
    chosen: list[int] = []

    def rec(start: int, need: int, sign: int) -> bool:
        if not need:
            out.append(RunCertificate(tuple(chosen), sign))
            return len(out) >= limit
        src = vals if sign == 1 else neg
        ahead = aheads[0 if sign == 1 else 1]
        last = src[chosen[-1]]
        for j in range(start, len(vals) - need + 1):
            if src[j] > last and ahead[j] >= need:
                chosen.append(j)
                if rec(j + 1, need - 1, sign):
                    return True
                chosen.pop()
        return False

    for i in range(len(vals) - n + 1):
        for sign in (1, -1):
            if aheads[0 if sign == 1 else 1][i] >= n:
                chosen[:] = [i]
                if rec(i + 1, n - 1, sign):
                    return out
    return out
