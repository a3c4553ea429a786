"""Words over small alphabets, exact exponents, and conjugacy classes.

Words are plain Python strings over the digit letters ``"0".."3"``.  All
exponents and thresholds are exact `fractions.Fraction` values; no operation
ever compares exponents through floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ALPHABET = "0123"
MAX_ALPHABET = 4


class WordError(ValueError):
    """Malformed word or letter outside the ambient alphabet."""


class PeriodRangeError(ValueError):
    """Requested period is outside 1..|w|."""


class NotAPeriodError(ValueError):
    """Requested period is in range but does not divide the word's structure."""


def check_word(w: str, alphabet_size: int) -> str:
    """Validate that every letter of `w` is a digit below `alphabet_size`."""
    if not 2 <= alphabet_size <= MAX_ALPHABET:
        raise WordError(f"alphabet size must be in 2..{MAX_ALPHABET}, got {alphabet_size}")
    allowed = ALPHABET[:alphabet_size]
    for ch in w:
        if ch not in allowed:
            raise WordError(f"letter {ch!r} not in alphabet of size {alphabet_size}")
    return w


def parse_rational(text: str) -> Fraction:
    """Parse "num/den" or a bare integer into an exact Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "num/den" ("num" when the denominator is 1)."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Repetition:
    """An occurrence w[start : start+length] with the given period.

    The factor satisfies w[i] == w[i+period] for every i where both sides
    fall inside the occurrence; its exponent is exactly length/period.
    """

    start: int
    period: int
    length: int

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.length, self.period)

    def factor(self, w: str) -> str:
        return w[self.start : self.start + self.length]

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "period": self.period,
            "length": self.length,
            "exponent": format_rational(self.exponent),
        }


def is_period(w: str, p: int) -> bool:
    """True iff w[i] == w[i+p] wherever both indices are valid."""
    return all(w[i] == w[i + p] for i in range(len(w) - p))


def border_table(w: str) -> list[int]:
    """KMP failure function: border[i] = longest proper border of w[:i+1]."""
    n = len(w)
    table = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and w[k] != w[i]:
            k = table[k - 1]
        if w[k] == w[i]:
            k += 1
        table[i] = k
    return table


def periods_of(w: str) -> list[int]:
    """All periods of w in increasing order (|w| itself is always one)."""
    if not w:
        raise WordError("empty word has no periods")
    n = len(w)
    table = border_table(w)
    out = []
    b = table[n - 1]
    while b > 0:
        out.append(n - b)
        b = table[b - 1]
    out.append(n)
    return out


def exponent_of(w: str, p: int) -> Fraction:
    """Exact exponent |w|/p of w viewed as a repetition with period p.

    Raises PeriodRangeError when p is outside 1..|w| and NotAPeriodError
    when p is in range but not a period of w.
    """
    if not w:
        raise WordError("empty word rejected")
    if not 1 <= p <= len(w):
        raise PeriodRangeError(f"period {p} out of range 1..{len(w)}")
    if not is_period(w, p):
        raise NotAPeriodError(f"{p} is not a period of {w!r}")
    return Fraction(len(w), p)


def critical_exponent(w: str) -> tuple[Fraction, Repetition]:
    """Largest exponent over all (factor, period) pairs of w, with a witness.

    Ties are broken toward the smallest period, then the earliest start, so
    the witness is deterministic.  Runs in O(|w|^2) via one border table per
    suffix, which is plenty for the bounded inputs the pipelines produce.
    """
    if not w:
        raise WordError("empty word rejected")
    n = len(w)
    best_len, best_per, best_start = 1, 1, 0
    for start in range(n):
        # failure function of w[start:], computed inline to avoid slicing
        table = [0] * (n - start)
        k = 0
        for i in range(1, n - start):
            ci = w[start + i]
            while k > 0 and w[start + k] != ci:
                k = table[k - 1]
            if w[start + k] == ci:
                k += 1
            table[i] = k
            length = i + 1
            per = length - k
            # compare length/per vs best_len/best_per exactly
            lhs = length * best_per
            rhs = best_len * per
            if lhs > rhs or (lhs == rhs and (per < best_per or (per == best_per and start < best_start))):
                best_len, best_per, best_start = length, per, start
    rep = Repetition(start=best_start, period=best_per, length=best_len)
    return rep.exponent, rep


def _max_window_exponent(ff: str, cap: int, best_num: int, best_den: int) -> tuple[int, int]:
    """Max exponent of any factor of `ff` of length <= cap, as (num, den).

    Scans match-runs per period; a run of r matches at shift q yields
    repetition windows of length up to min(q + r, cap).
    """
    m = len(ff)
    for q in range(1, cap + 1):
        # longest run of ff[j] == ff[j+q], capped: window length min(q+run, cap)
        if cap * best_den <= best_num * q:
            break  # even a full window cannot beat the current best
        run = 0
        best_run = 0
        for j in range(m - q):
            if ff[j] == ff[j + q]:
                run += 1
                if run > best_run:
                    best_run = run
            else:
                run = 0
        length = min(q + best_run, cap)
        if length * best_den > best_num * q:
            best_num, best_den = length, q
    return best_num, best_den


def circular_exponent(w: str) -> Fraction:
    """Largest exponent over repetitions in conjugates of factors of w.

    For a factor f, the admissible words are exactly the factors of f*f of
    length at most |f| (suffix-of-f followed by prefix-of-f, both parts from
    the same factor).  The maximum is taken over every distinct factor.
    """
    if not w:
        raise WordError("empty word rejected")
    n = len(w)
    best_num, best_den = 1, 1
    seen = set()
    # longer factors first so the pruning in _max_window_exponent bites early
    for length in range(n, 0, -1):
        for start in range(n - length + 1):
            f = w[start : start + length]
            if f in seen:
                continue
            seen.add(f)
            best_num, best_den = _max_window_exponent(f + f, length, best_num, best_den)
    return Fraction(best_num, best_den)


def is_primitive(w: str) -> bool:
    """True iff w is not a proper integer power of a shorter word."""
    if not w:
        raise WordError("empty word rejected")
    n = len(w)
    table = border_table(w)
    p = n - table[n - 1]
    return not (p < n and n % p == 0)


def primitive_root(w: str) -> str:
    """Shortest word t with w = t^k."""
    n = len(w)
    table = border_table(w)
    p = n - table[n - 1]
    if p < n and n % p == 0:
        return w[:p]
    return w


def min_rotation(w: str) -> str:
    """Lexicographically least rotation of w (Booth's algorithm)."""
    ww = w + w
    n = len(w)
    i, j = 0, 1
    k = 0
    while i < n and j < n and k < n:
        a, b = ww[i + k], ww[j + k]
        if a == b:
            k += 1
            continue
        if a > b:
            i = max(i + k + 1, j)
        else:
            j = max(j + k + 1, i)
        if i == j:
            j += 1
        k = 0
    return ww[min(i, j) : min(i, j) + n]


@dataclass(frozen=True)
class ConjClass:
    """A conjugacy class of primitive words, named by its least rotation."""

    representative: str

    def __post_init__(self):
        if not self.representative:
            raise WordError("empty class representative")
        if not is_primitive(self.representative):
            raise WordError(f"{self.representative!r} is not primitive; reduce to its root first")
        if self.representative != min_rotation(self.representative):
            raise WordError(f"{self.representative!r} is not the least rotation of its class")

    @property
    def length(self) -> int:
        return len(self.representative)

    def rotations(self) -> list[str]:
        r = self.representative
        return [r[i:] + r[:i] for i in range(len(r))]


def conjugacy_classes(n: int, alphabet_size: int) -> list[ConjClass]:
    """One least-rotation representative per primitive class of length n.

    Duval's algorithm generates exactly the Lyndon words of length n, which
    are the least rotations of primitive necklaces, in lexicographic order.
    """
    if n < 1:
        raise ValueError("class length must be >= 1")
    if not 2 <= alphabet_size <= MAX_ALPHABET:
        raise ValueError(f"alphabet size must be in 2..{MAX_ALPHABET}")
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == n:
            out.append(ConjClass("".join(ALPHABET[c] for c in w)))
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return out
