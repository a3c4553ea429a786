"""Queryable finite approximation of the factor language of morphic images.

The index is complete up to a stated length L: it contains every factor of
length <= L of the image of every infinite source-legal word.  Completeness
comes from the build rule: a factor of length <= L of an image spans at most
ceil(L/k)+1 source letters, and every such source window is itself a
source-legal word of that length, all of which are enumerated.

Queries that touch the completeness boundary fail loudly instead of silently
under-reporting (IndexCapError), which callers handle by rebuilding with a
doubled L.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _scan
from .freeness import FreenessSpec, free_words_of_length
from .morphisms import UniformMorphism
from .words import is_primitive, min_rotation


class IndexCapError(RuntimeError):
    """A matched factor reached the index completeness cap."""


class SuffixAutomaton:
    """Generalized suffix automaton over a set of strings (int32 arrays)."""

    def __init__(self, alphabet_size: int):
        self.alphabet_size = alphabet_size
        cap = 1024
        self._trans = np.full((cap, alphabet_size), -1, dtype=np.int32)
        self._link = np.full(cap, -1, dtype=np.int32)
        self._len = np.zeros(cap, dtype=np.int32)
        self.n_states = 1  # state 0 is the root

    def _new_state(self, length: int, link: int, trans_row=None) -> int:
        if self.n_states == len(self._len):
            grow = len(self._len) * 2
            self._trans = np.vstack([self._trans, np.full((grow - len(self._len), self.alphabet_size), -1, dtype=np.int32)])
            self._link = np.concatenate([self._link, np.full(grow - len(self._link), -1, dtype=np.int32)])
            self._len = np.concatenate([self._len, np.zeros(grow - len(self._len), dtype=np.int32)])
        s = self.n_states
        self.n_states += 1
        self._len[s] = length
        self._link[s] = link
        if trans_row is not None:
            self._trans[s] = trans_row
        return s

    def add_string(self, s: str) -> None:
        trans, link, lens = self._trans, self._link, self._len
        last = 0
        for ch in s:
            c = ord(ch) - 48
            t = int(trans[last, c])
            if t != -1:
                if int(lens[t]) == int(lens[last]) + 1:
                    last = t
                    continue
                # split: clone t at length len(last)+1
                clone = self._new_state(int(lens[last]) + 1, int(link[t]), self._trans[t])
                trans, link, lens = self._trans, self._link, self._len
                link[t] = clone
                p = last
                while p != -1 and int(trans[p, c]) == t:
                    trans[p, c] = clone
                    p = int(link[p])
                last = clone
                continue
            cur = self._new_state(int(lens[last]) + 1, -1)
            trans, link, lens = self._trans, self._link, self._len
            p = last
            while p != -1 and int(trans[p, c]) == -1:
                trans[p, c] = cur
                p = int(link[p])
            if p == -1:
                link[cur] = 0
            else:
                q = int(trans[p, c])
                if int(lens[q]) == int(lens[p]) + 1:
                    link[cur] = q
                else:
                    clone = self._new_state(int(lens[p]) + 1, int(link[q]), self._trans[q])
                    trans, link, lens = self._trans, self._link, self._len
                    link[q] = clone
                    link[cur] = clone
                    while p != -1 and int(trans[p, c]) == q:
                        trans[p, c] = clone
                        p = int(link[p])
            last = cur

    def accepts_factor(self, w: str) -> bool:
        state = 0
        trans = self._trans
        for ch in w:
            state = int(trans[state, ord(ch) - 48])
            if state == -1:
                return False
        return True

    def walk_periodic(self, root: str, phase: int, cap: int) -> int:
        """Longest prefix of root^omega starting at `phase` that is a factor,
        up to `cap` letters."""
        state = 0
        trans = self._trans
        p = len(root)
        codes = [ord(ch) - 48 for ch in root]
        i = phase
        matched = 0
        while matched < cap:
            state = int(trans[state, codes[i]])
            if state == -1:
                return matched
            matched += 1
            i += 1
            if i == p:
                i = 0
        return matched

    def factor_counts(self, max_len: int) -> list[int]:
        """Number of distinct factors per length 1..max_len."""
        lens = self._len[: self.n_states]
        links = self._link[: self.n_states]
        lo = lens[links[1:]] + 1  # minimal length represented by each state
        hi = lens[1:]
        diff = np.zeros(max_len + 2, dtype=np.int64)
        lo_c = np.minimum(lo, max_len + 1)
        hi_c = np.minimum(hi, max_len)
        valid = lo_c <= hi_c
        np.add.at(diff, lo_c[valid], 1)
        np.add.at(diff, hi_c[valid] + 1, -1)
        return list(np.cumsum(diff)[1 : max_len + 1])


@dataclass
class FactorIndex:
    """Factor-language membership and longest-match queries, complete to L."""

    automaton: SuffixAutomaton
    complete_len: int
    cap_is_error: bool
    alphabet_size: int
    member_words: list[str]
    description: str
    _match_cache: dict = field(default_factory=dict, repr=False)

    def contains(self, w: str) -> bool:
        if len(w) > self.complete_len:
            raise IndexCapError(
                f"membership query of length {len(w)} exceeds index completeness {self.complete_len}"
            )
        return self.automaton.accepts_factor(w)

    def longest_match(self, root: str, phase: int) -> int:
        """Longest factor of root^omega starting at the given phase that occurs
        in the indexed language.  Raises IndexCapError when the match reaches
        the completeness cap on an approximating index."""
        key = (root, phase)
        hit = self._match_cache.get(key)
        if hit is None:
            hit = self.automaton.walk_periodic(root, phase, self.complete_len)
            self._match_cache[key] = hit
        if hit >= self.complete_len and self.cap_is_error:
            raise IndexCapError(
                f"match for {root!r} phase {phase} reached the index cap {self.complete_len}"
            )
        return hit

    def factor_counts(self, max_len: int | None = None) -> list[int]:
        return self.automaton.factor_counts(min(max_len or self.complete_len, self.complete_len))

    def realized_classes(self, p_lo: int, p_hi: int) -> list[str]:
        """Conjugacy classes (least-rotation representatives of primitive roots)
        realized by a repetition of exponent > 3/2 with period in [p_lo, p_hi]
        somewhere in the indexed language.

        Any class outside this list admits no factor of t^omega longer than
        (3/2)|t| in the language, which bounds every i-term product of its
        powers by (3i/2)|t| outright.
        """
        found: set[str] = set()
        for w in self.member_words:
            s = _scan.as_array(w)
            n = len(s)
            for p in range(p_lo, min(p_hi, n - 1) + 1):
                eq = s[p:] == s[:-p]
                rneed = p // 2 + 1  # run r makes length p+r, exponent > 3/2 iff 2r > p
                if len(eq) < rneed:
                    continue
                idx = np.flatnonzero(np.diff(np.concatenate(([False], eq, [False])).astype(np.int8)))
                for a, b in zip(idx[::2], idx[1::2]):
                    if b - a >= rneed:
                        root = w[a : a + p]
                        if is_primitive(root):
                            found.add(min_rotation(root))
        return sorted(found, key=lambda t: (len(t), t))

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "complete_len": self.complete_len,
            "member_words": len(self.member_words),
            "total_letters": sum(len(w) for w in self.member_words),
        }


def window_length(L: int, k: int) -> int:
    """Source letters per window: a factor of length <= L spans at most
    ceil(L/k)+1 image blocks."""
    return -(-L // k) + 1


def build_factor_index(
    m: UniformMorphism, src_spec: FreenessSpec, L: int, src_alphabet_size: int | None = None
) -> FactorIndex:
    """Index of all factors of length <= L of images of source-legal words."""
    if L < 1:
        raise ValueError("index completeness length must be >= 1")
    arity = src_alphabet_size or m.arity
    window = window_length(L, m.k)
    sources = free_words_of_length(arity, src_spec, window)
    sam = SuffixAutomaton(m.target_alphabet_size)
    images = [m.apply(w) for w in sources]
    for img in images:
        sam.add_string(img)
    return FactorIndex(
        automaton=sam,
        complete_len=L,
        cap_is_error=True,
        alphabet_size=m.target_alphabet_size,
        member_words=images,
        description=f"factors(len<={L}) of {m.k}-uniform images of {src_spec}-free words "
        f"(window {window}, {len(sources)} sources)",
    )


def direct_factor_index(w: str, alphabet_size: int = 3) -> FactorIndex:
    """Index of the factors of one finite word (complete at every length)."""
    sam = SuffixAutomaton(alphabet_size)
    sam.add_string(w)
    return FactorIndex(
        automaton=sam,
        complete_len=len(w),
        cap_is_error=False,
        alphabet_size=alphabet_size,
        member_words=[w],
        description=f"factors of a fixed word of length {len(w)}",
    )


@dataclass
class TruncatedIndex:
    """View of an index restricted to factors of length <= limit (test aid)."""

    base: FactorIndex
    limit: int

    @property
    def complete_len(self) -> int:
        return self.limit

    @property
    def cap_is_error(self) -> bool:
        return False

    def contains(self, w: str) -> bool:
        return len(w) <= self.limit and self.base.contains(w)

    def longest_match(self, root: str, phase: int) -> int:
        return min(self.base.longest_match(root, phase), self.limit)
