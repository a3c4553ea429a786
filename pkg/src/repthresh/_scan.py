"""Vectorized repetition scans over long words (numpy backend).

The pure-Python scans in `freeness` are the reference; everything here must
agree with them exactly (integer cross-multiplication only, no floats) and is
property-tested against them.
"""

from __future__ import annotations

import numpy as np

_HASH_MULT = np.uint64(0x9E3779B97F4A7C15)


def as_array(w: str) -> np.ndarray:
    return np.frombuffer(w.encode("ascii"), dtype=np.uint8)


def max_run_at_period(s: np.ndarray, p: int, rneed: int) -> int | None:
    """Start index (into the shifted overlap) of a match-run of length >= rneed
    at shift p, or None.   'Match' means s[j] == s[j+p]."""
    eq = s[p:] == s[:-p]
    if len(eq) < rneed:
        return None
    pos = eq.view(np.uint8).tobytes().find(b"\x01" * rneed)
    return pos if pos >= 0 else None


def _full_run_bounds(s: np.ndarray, p: int, j: int) -> tuple[int, int]:
    """Maximal run of s[x] == s[x+p] containing overlap index j: [lo, hi)."""
    n = len(s) - p
    lo = j
    while lo > 0 and s[lo - 1] == s[lo - 1 + p]:
        lo -= 1
    hi = j
    while hi < n and s[hi] == s[hi + p]:
        hi += 1
    return lo, hi


def _rolling_hashes(s: np.ndarray, block: int) -> np.ndarray:
    n = len(s)
    with np.errstate(over="ignore"):
        h = np.zeros(n - block + 1, dtype=np.uint64)
        mult = np.uint64(1)
        for i in range(block - 1, -1, -1):
            h += s[i : n - block + 1 + i].astype(np.uint64) * mult
            mult = mult * _HASH_MULT
    return h


def candidate_periods(s: np.ndarray, block: int, p_lo: int, p_hi: int) -> list[int]:
    """Periods p in (p_lo, p_hi] at which some `block`-gram of s repeats.

    Sound filter: any match-run of length >= 2*block - 1 at shift p contains a
    block-aligned gram whose copy sits at distance exactly p.  Hash collisions
    only add candidates; the caller re-checks every candidate exactly.
    """
    n = len(s)
    if n - block + 1 <= 0 or p_hi <= p_lo:
        return []
    h = _rolling_hashes(s, block)
    order = np.argsort(h, kind="stable").astype(np.int64)
    hs = h[order]
    anchors = np.arange(0, n - block + 1, block)
    lo = np.searchsorted(hs, h[anchors], side="left")
    hi = np.searchsorted(hs, h[anchors], side="right")
    parts = [order[lo[i] : hi[i]] - anchors[i] for i in range(len(anchors))]
    dists = np.concatenate(parts) if parts else np.array([], dtype=np.int64)
    dists = dists[(dists > p_lo) & (dists <= p_hi)]
    return [int(d) for d in np.unique(dists)]


def find_violation_array(
    s: np.ndarray, num: int, den: int, strict: bool, min_period: int
) -> tuple[int, int, int] | None:
    """First (period, start, length) repetition with period >= min_period whose
    exponent violates num/den (strictly greater when strict, >= otherwise).

    Periods are tried in increasing order; within a period the leftmost
    sufficient run wins, matching the pure-Python reference scan.
    """
    n = len(s)
    if n == 0:
        return None
    # smallest run r that makes (p + r)/p violate the threshold
    if strict:
        rneed = lambda p: ((num - den) * p) // den + 1
    else:
        rneed = lambda p: -(-(num - den) * p // den)  # ceil
    pmax = n * den // num if strict else (n * den + num - 1) // num
    pmax = min(pmax, n - 1)
    if pmax < min_period:
        return None

    block = 23
    # anchored filtering is only complete once the needed run covers an
    # aligned block: rneed(p) >= 2*block - 1
    p_direct_hi = min_period
    while p_direct_hi <= pmax and rneed(max(p_direct_hi, 1)) < 2 * block - 1:
        p_direct_hi += 1
    p_direct_hi = min(p_direct_hi, pmax)

    def check(p: int) -> tuple[int, int, int] | None:
        need = max(rneed(p), 1)
        j = max_run_at_period(s, p, need)
        if j is None:
            return None
        lo, hi = _full_run_bounds(s, p, j)
        return (p, lo, hi - lo + p)

    for p in range(min_period, p_direct_hi + 1):
        hit = check(p)
        if hit:
            return hit
    if p_direct_hi >= pmax:
        return None
    for p in candidate_periods(s, block, p_direct_hi, pmax):
        hit = check(p)
        if hit:
            return hit
    return None
