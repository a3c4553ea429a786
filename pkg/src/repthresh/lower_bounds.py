"""Exhaustive searches behind the two lower bounds, plus the arithmetic lift.

Both searches are plain depth-first backtracking over ternary words with an
incremental constraint detector; exhaustion of the tree (survivor count
hitting zero at some length) is the verification artifact.  A capped run is
reported as NOT exhausted, never as a proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .words import format_rational, is_primitive, min_rotation, primitive_root

TERNARY = "012"
DEPTH_CAP = 10000


@dataclass
class BacktrackReport:
    constraint: str
    counts: list[int]
    max_length: int
    exhausted: bool
    node_count: int
    strategy: str = "dfs"
    threshold: str | None = None

    def to_dict(self) -> dict:
        d = {
            "constraint": self.constraint,
            "counts": self.counts,
            "max_length": self.max_length,
            "exhausted": self.exhausted,
            "node_count": self.node_count,
            "strategy": self.strategy,
        }
        if self.threshold is not None:
            d["threshold"] = self.threshold
        return d


# ---------------------------------------------------------------------------
# odd lower bound: square-free words avoiding two factor pairs per assignment


def forbidden_pattern_pairs() -> list[tuple[str, str]]:
    """The (u, v) pairs forbidden together, for every choice of distinct a,b,c.

    Containing both abcab and cabc, or both abcbabc and babcb, lets powers of
    a 3- or 4-letter root be assembled into odd products of exponent 3j + 5/3.
    """
    pairs = []
    for a, b, c in permutations(TERNARY):
        table = str.maketrans("abc", a + b + c)
        pairs.append(("abcab".translate(table), "cabc".translate(table)))
        pairs.append(("abcbabc".translate(table), "babcb".translate(table)))
    return pairs


def _square_suffix_free(w: list[str]) -> bool:
    n = len(w)
    for p in range(1, n // 2 + 1):
        if w[-p:] == w[-2 * p : -p]:
            return False
    return True


def word_respects_pairs(w: str, pairs: list[tuple[str, str]] | None = None) -> bool:
    """Naive full-rescan form of the pair constraint (the oracle)."""
    for u, v in pairs or forbidden_pattern_pairs():
        if u in w and v in w:
            return False
    return True


def verify_lower_odd(max_depth: int = DEPTH_CAP, strategy: str = "dfs") -> BacktrackReport:
    """Exhaust the tree of ternary square-free words satisfying the pair
    constraint.  Exhaustion shows every infinite ternary square-free word
    contains one of the forbidden pairs, completing the odd lower bound."""
    pairs = forbidden_pattern_pairs()
    patterns = sorted({p for pair in pairs for p in pair})
    pat_idx = {p: i for i, p in enumerate(patterns)}
    pair_idx = [(pat_idx[u], pat_idx[v]) for u, v in pairs]
    pat_lists = [list(p) for p in patterns]
    constraint = "ternary square-free, never containing both members of a forbidden pair"

    if strategy == "bfs":
        return _bfs_level_counts(
            constraint,
            max_depth,
            lambda w: _square_free_full(w) and word_respects_pairs(w, pairs),
        )

    counts = [1]
    node_count = 0
    flags = [False] * len(patterns)
    w: list[str] = []

    def dfs():
        nonlocal node_count
        node_count += 1
        n = len(w)
        if n >= max_depth:
            return
        for a in TERNARY:
            w.append(a)
            if _square_suffix_free(w):
                newly = []
                for i, pat in enumerate(pat_lists):
                    if not flags[i] and len(w) >= len(pat) and w[-len(pat) :] == pat:
                        flags[i] = True
                        newly.append(i)
                dead = any(flags[ui] and flags[vi] for ui, vi in pair_idx)
                if not dead:
                    if len(counts) <= n + 1:
                        counts.append(0)
                    counts[n + 1] += 1
                    dfs()
                for i in newly:
                    flags[i] = False
            w.pop()

    dfs()
    exhausted = len(counts) <= max_depth
    max_length = len(counts) - 1
    if exhausted:
        counts.append(0)
    return BacktrackReport(constraint, counts, max_length, exhausted, node_count)


def _square_free_full(w: str) -> bool:
    n = len(w)
    for p in range(1, n // 2 + 1):
        for i in range(n - 2 * p + 1):
            if w[i : i + p] == w[i + p : i + 2 * p]:
                return False
    return True


def _bfs_level_counts(constraint: str, max_depth: int, keep) -> BacktrackReport:
    """Level-by-level oracle enumeration with full rescans (no incremental state)."""
    counts = [1]
    level = [""]
    nodes = 1
    while level and len(counts) <= max_depth:
        nxt = []
        for w in level:
            for a in TERNARY:
                nw = w + a
                nodes += 1
                if keep(nw):
                    nxt.append(nw)
        counts.append(len(nxt))
        if not nxt:
            break
        level = nxt
    exhausted = counts[-1] == 0
    max_length = len(counts) - 2 if exhausted else len(counts) - 1
    return BacktrackReport(constraint, counts, max_length, exhausted, nodes, strategy="bfs")


# ---------------------------------------------------------------------------
# even lower bound: no two factors whose product is a repetition >= threshold


class _PairProductDetector:
    """Branch-local detector for 2-piece products of exponent >= threshold.

    Tracks, per realized conjugacy class t, the longest factor of t^omega
    present in the current word at each phase.  Tables only grow along a DFS
    branch; an undo log restores them on backtrack.  For thresholds above 3 a
    violating product forces one piece past (3/2)|t|, so only classes realized
    by an exponent-3/2 repetition are tracked; at threshold in [2, 3] every
    primitive factor class is tracked instead.
    """

    def __init__(self, threshold: Fraction):
        if threshold < 2:
            raise ValueError("pair-product detector needs threshold >= 2")
        self.num = threshold.numerator
        self.den = threshold.denominator
        self.sharp = threshold > 3  # run-realized candidate filter is complete
        self.w: list[str] = []
        self.tables: dict[str, list[int]] = {}
        self.undo: list[list] = []

    def _realize(self, cls: str, log: list):
        if cls not in self.tables:
            self.tables[cls] = [0] * len(cls)
            log.append(("new", cls))

    def push(self, letter: str) -> bool:
        """Append a letter; returns False when a violating product now exists
        (the letter stays pushed either way; callers pop on rejection)."""
        w = self.w
        w.append(letter)
        n = len(w)
        log: list = []
        self.undo.append(log)

        # new candidate classes from repetitions ending at the new letter
        if self.sharp:
            for p in range(1, n):
                j = n - 1 - p
                if w[j] != letter:
                    continue
                r = 1
                j -= 1
                while j >= 0 and w[j] == w[j + p]:
                    r += 1
                    j -= 1
                if 2 * r > p:
                    root = "".join(w[n - r - p : n - r])
                    if is_primitive(root):
                        self._realize(min_rotation(root), log)
        else:
            for p in range(1, n + 1):
                root = "".join(w[n - p :])
                self._realize(min_rotation(primitive_root(root)), log)

        # grow the per-phase match tables against the new factor set
        text = "".join(w)
        violated = False
        for cls, table in self.tables.items():
            p = len(cls)
            tt = cls * ((2 * n) // p + 2)
            for q in range(p):
                cur = table[q]
                grown = cur
                while grown < n and tt[q : q + grown + 1] in text:
                    grown += 1
                if grown != cur:
                    log.append(("grow", cls, q, cur))
                    table[q] = grown
            if not violated:
                num, den = self.num, self.den
                for q in range(p):
                    cover = table[q] + table[(q + table[q]) % p]
                    if cover * den >= num * p:
                        violated = True
                        break
        return not violated

    def pop(self):
        self.w.pop()
        for entry in reversed(self.undo.pop()):
            if entry[0] == "new":
                del self.tables[entry[1]]
            else:
                _, cls, q, old = entry
                if cls in self.tables:
                    self.tables[cls][q] = old


def brute_pair_violation(w: str, threshold: Fraction) -> tuple[str, str] | None:
    """Oracle: scan all ordered pairs of factors (u, v), empty allowed, for a
    whole-word period of uv reaching the threshold."""
    n = len(w)
    factors = {w[i:j] for i in range(n) for j in range(i + 1, n + 1)}
    factors.add("")
    num, den = threshold.numerator, threshold.denominator
    for u in factors:
        for v in factors:
            z = u + v
            m = len(z)
            if m == 0:
                continue
            for p in range(1, m + 1):
                if m * den >= num * p and all(z[x] == z[x + p] for x in range(m - p)):
                    return (u, v)
    return None


def pair_free_prefix(w: str, threshold: Fraction) -> bool:
    """Full-rescan acceptance used by the BFS oracle."""
    det = _PairProductDetector(threshold)
    ok = True
    for ch in w:
        if not det.push(ch):
            ok = False
            break
    return ok


def verify_lower_even(
    threshold: Fraction, max_depth: int = DEPTH_CAP, strategy: str = "dfs"
) -> BacktrackReport:
    """Exhaust the tree of ternary words with no 2-piece product of exponent
    >= threshold.  Exhaustion at 13/4 reproduces the base of the even bound."""
    constraint = (
        f"ternary, no two factors u,v with uv a repetition of exponent >= "
        f"{format_rational(threshold)}"
    )
    if strategy == "bfs":
        rep = _bfs_level_counts(constraint, max_depth, lambda w: pair_free_prefix(w, threshold))
        rep.threshold = format_rational(threshold)
        return rep

    det = _PairProductDetector(threshold)
    counts = [1]
    node_count = 0

    def dfs():
        nonlocal node_count
        node_count += 1
        n = len(det.w)
        if n >= max_depth:
            return
        for a in TERNARY:
            if det.push(a):
                if len(counts) <= n + 1:
                    counts.append(0)
                counts[n + 1] += 1
                dfs()
            det.pop()

    dfs()
    exhausted = len(counts) <= max_depth
    max_length = len(counts) - 1
    if exhausted:
        counts.append(0)
    return BacktrackReport(
        constraint,
        counts,
        max_length,
        exhausted,
        node_count,
        threshold=format_rational(threshold),
    )


# ---------------------------------------------------------------------------
# arithmetic lift of the base bounds


def lift_lower_bound(base: Fraction, i: int, profile: str) -> Fraction:
    """Raise a 2-piece (even) or 3-piece (odd) base bound to i pieces.

    even: a product uv = t^e with e >= base extends by cube prefixes t^3 to
    the i-piece product (t^3)^(i/2-1) uv of exponent 3(i/2 - 1) + base.
    odd: factors u = t^e (e >= 5/3) and v with uv = t^3 give (uv)^j u of
    exponent 3(i-1)/2 + base for odd i = 2j+1.
    """
    if profile == "even":
        if i < 2 or i % 2:
            raise ValueError(f"even profile needs even i >= 2, got {i}")
        return 3 * Fraction(i - 2, 2) + base
    if profile == "odd":
        if i < 3 or i % 2 == 0:
            raise ValueError(f"odd profile needs odd i >= 3, got {i}")
        return 3 * Fraction(i - 1, 2) + base
    raise ValueError(f"profile must be even or odd, got {profile!r}")


EVEN_BASE = Fraction(13, 4)
ODD_BASE = Fraction(5, 3)


def theorem_value(i: int) -> Fraction:
    """The repetition threshold for products of i factors over three letters:
    3i/2 + 1/4 for i = 1 or even i, 3i/2 + 1/6 for odd i >= 3."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if i == 1:
        return Fraction(7, 4)  # classical ternary threshold, not derived here
    if i % 2 == 0:
        return lift_lower_bound(EVEN_BASE, i, "even")
    return lift_lower_bound(ODD_BASE, i, "odd")
