"""Freeness predicates and backtracking enumeration of power-free words.

A `FreenessSpec` captures alpha-free, alpha+-free and (beta+, n)-free in one
record: it forbids repetitions with period >= `min_period` whose exponent
exceeds `threshold` (strictly when `strict`, else non-strictly).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import _scan
from .words import ALPHABET, Repetition, WordError, check_word, format_rational

# words at least this long are scanned with the vectorized backend
_NUMPY_CUTOFF = 1024

_SPEC_RE = re.compile(r"^(\d+)(?:/(\d+))?(\+)?(?:@(\d+))?$")


@dataclass(frozen=True)
class FreenessSpec:
    """Forbids repetitions with period >= min_period violating the threshold.

    strict=True means "+-free": exponents strictly greater than the threshold
    are forbidden; strict=False forbids exponents >= threshold.
    """

    threshold: Fraction
    strict: bool = True
    min_period: int = 1

    def __post_init__(self):
        if self.threshold <= 1:
            raise ValueError("freeness threshold must exceed 1")
        if self.min_period < 1:
            raise ValueError("min_period must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "FreenessSpec":
        """Parse "7/4+", "2", "202/135+@36" (threshold, +=strict, @n=min period)."""
        m = _SPEC_RE.match(text.strip())
        if not m:
            raise ValueError(f"malformed freeness spec {text!r}")
        num, den, plus, at = m.groups()
        threshold = Fraction(int(num), int(den) if den else 1)
        return cls(threshold=threshold, strict=plus is not None, min_period=int(at) if at else 1)

    def __str__(self) -> str:
        s = format_rational(self.threshold)
        if self.strict:
            s += "+"
        if self.min_period > 1:
            s += f"@{self.min_period}"
        return s

    def violated_by(self, length: int, period: int) -> bool:
        """Exact test: does a repetition of this length/period violate the spec?"""
        if period < self.min_period:
            return False
        lhs = length * self.threshold.denominator
        rhs = self.threshold.numerator * period
        return lhs > rhs if self.strict else lhs >= rhs

    def to_dict(self) -> dict:
        return {
            "threshold": format_rational(self.threshold),
            "strict": self.strict,
            "min_period": self.min_period,
        }


SQUARE_FREE = FreenessSpec(Fraction(2), strict=False)


def _find_violation_py(w: str, spec: FreenessSpec) -> Repetition | None:
    """Reference scan: periods ascending, leftmost maximal run per period."""
    n = len(w)
    num, den = spec.threshold.numerator, spec.threshold.denominator
    for p in range(spec.min_period, n):
        if spec.strict:
            if n * den <= num * p:
                break  # even the whole word cannot violate at this period
        else:
            if n * den < num * p:
                break
        run = 0
        start = None
        for j in range(n - p):
            if w[j] == w[j + p]:
                run += 1
                if spec.violated_by(run + p, p):
                    start = j - run + 1
                    break
            else:
                run = 0
        if start is not None:
            hi = start + run
            while hi < n - p and w[hi] == w[hi + p]:
                hi += 1
            return Repetition(start=start, period=p, length=hi - start + p)
    return None


def find_violation(w: str, spec: FreenessSpec) -> Repetition | None:
    """First repetition of w violating the spec, or None if w satisfies it."""
    if len(w) >= _NUMPY_CUTOFF:
        hit = _scan.find_violation_array(
            _scan.as_array(w),
            spec.threshold.numerator,
            spec.threshold.denominator,
            spec.strict,
            spec.min_period,
        )
        if hit is None:
            return None
        p, start, length = hit
        return Repetition(start=start, period=p, length=length)
    return _find_violation_py(w, spec)


def is_free(w: str, spec: FreenessSpec) -> bool:
    return find_violation(w, spec) is None


def extend_is_free(w: str, letter: str, spec: FreenessSpec) -> bool:
    """Does w·letter still satisfy the spec, assuming w already does?

    Only repetitions ending at the appended letter are examined: any other
    violating occurrence would lie inside w and contradict the precondition.
    Periods beyond len(w·letter)·den/num cannot violate and are skipped.
    """
    n = len(w) + 1
    num, den = spec.threshold.numerator, spec.threshold.denominator
    last = letter
    for p in range(spec.min_period, n):
        if spec.strict:
            if n * den <= num * p:
                break
        else:
            if n * den < num * p:
                break
        # count matches walking back from the new letter at index n-1
        j = n - 1 - p
        if j < 0:
            break
        if (w[j] if j < n - 1 else last) != last:
            continue
        run = 1
        j -= 1
        while j >= 0 and w[j] == w[j + p]:
            run += 1
            j -= 1
        if spec.violated_by(run + p, p):
            return False
    return True


@dataclass
class EnumerationReport:
    """Per-length survivor counts for a power-free enumeration."""

    alphabet_size: int
    spec: FreenessSpec
    max_len: int
    mode: str
    strategy: str
    counts: list[int] | None = None
    exhausted: bool = False
    max_length_reached: int = 0
    words: list[str] | None = None
    first: str | None = None
    node_count: int = 0

    def to_dict(self) -> dict:
        d = {
            "alphabet_size": self.alphabet_size,
            "spec": str(self.spec),
            "max_len": self.max_len,
            "mode": self.mode,
            "strategy": self.strategy,
            "exhausted": self.exhausted,
            "max_length_reached": self.max_length_reached,
            "node_count": self.node_count,
        }
        if self.counts is not None:
            d["counts"] = self.counts
        if self.words is not None:
            d["words"] = self.words
        if self.first is not None:
            d["first"] = self.first
        return d


def _enumerate_dfs(letters: str, spec: FreenessSpec, max_len: int, collect: int | None):
    """DFS over the tree of spec-free words; yields nothing past dead branches.

    Returns (counts, words, nodes); `words` collects survivors of length
    `collect` when requested.
    """
    counts = [0] * (max_len + 1)
    counts[0] = 1
    words: list[str] = []
    stack = [""]
    nodes = 0
    # explicit stack keeps deep ternary enumerations clear of recursion limits
    while stack:
        w = stack.pop()
        nodes += 1
        if len(w) == max_len:
            continue
        for a in reversed(letters):
            if extend_is_free(w, a, spec):
                nw = w + a
                counts[len(nw)] += 1
                if collect is not None and len(nw) == collect:
                    words.append(nw)
                stack.append(nw)
    return counts, words, nodes


def _enumerate_bfs(letters: str, spec: FreenessSpec, max_len: int, collect: int | None):
    """Level-by-level oracle enumeration using full-word rescans only."""
    counts = [0] * (max_len + 1)
    counts[0] = 1
    level = [""]
    words: list[str] = []
    nodes = 1
    for depth in range(1, max_len + 1):
        nxt = []
        for w in level:
            for a in letters:
                nw = w + a
                if is_free(nw, spec):
                    nxt.append(nw)
                    nodes += 1
        counts[depth] = len(nxt)
        if collect is not None and depth == collect:
            words.extend(nxt)
        if not nxt:
            break
        level = nxt
    return counts, words, nodes


def enumerate_free(
    alphabet_size: int,
    spec: FreenessSpec,
    max_len: int,
    mode: str = "count",
    strategy: str = "dfs",
) -> EnumerationReport:
    """Enumerate all spec-free words over the alphabet up to max_len.

    mode "count" reports per-length survivor counts, "list" additionally
    collects the words of length max_len (sorted), "first" returns only the
    lexicographically least survivor of length max_len (cheap aliveness probe).
    """
    if mode not in ("count", "list", "first"):
        raise ValueError(f"unknown mode {mode!r}")
    if strategy not in ("dfs", "bfs"):
        raise ValueError(f"unknown strategy {strategy!r}")
    letters = ALPHABET[:alphabet_size]
    check_word(letters, alphabet_size)
    report = EnumerationReport(alphabet_size, spec, max_len, mode, strategy)

    if mode == "first":
        # lexicographic DFS, returning at the first word of full length
        stack = [""]
        nodes = 0
        deepest = 0
        found = None
        while stack:
            w = stack.pop()
            nodes += 1
            deepest = max(deepest, len(w))
            if len(w) == max_len:
                found = w
                break
            for a in reversed(letters):
                if extend_is_free(w, a, spec):
                    stack.append(w + a)
        report.node_count = nodes
        report.first = found
        report.exhausted = found is None
        report.max_length_reached = max_len if found else deepest
        return report

    collect = max_len if mode == "list" else None
    run = _enumerate_dfs if strategy == "dfs" else _enumerate_bfs
    counts, words, nodes = run(letters, spec, max_len, collect)
    report.counts = counts
    report.node_count = nodes
    report.exhausted = any(c == 0 for c in counts)
    report.max_length_reached = max(i for i, c in enumerate(counts) if c > 0)
    if mode == "list":
        report.words = sorted(words)
    return report


def free_words_of_length(alphabet_size: int, spec: FreenessSpec, length: int) -> list[str]:
    """All spec-free words of exactly the given length, sorted."""
    rep = enumerate_free(alphabet_size, spec, length, mode="list")
    return rep.words or []


def maximal_free_words(alphabet_size: int, spec: FreenessSpec, length: int) -> list[str]:
    """Free words of the given length plus shorter dead ends, sorted.

    Every spec-free word over the alphabet is a prefix of some word in the
    returned set, which is what image-freeness verification consumes.
    """
    letters = ALPHABET[:alphabet_size]
    out: list[str] = []
    stack = [""]
    while stack:
        w = stack.pop()
        if len(w) == length:
            out.append(w)
            continue
        ext = [a for a in letters if extend_is_free(w, a, spec)]
        if not ext:
            if w:
                out.append(w)
            continue
        for a in reversed(ext):
            stack.append(w + a)
    return sorted(out)
