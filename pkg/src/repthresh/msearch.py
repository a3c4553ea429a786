"""Backtracking discovery of uniform morphisms.

A k-uniform candidate is a ternary word of length 4k read as the four images
m(0)..m(3).  The search walks that word letter by letter with three prunes:

* incremental freeness of the growing word under the configured specs;
* the symmetry-breaking order m(0) > m(1) > m(2) > m(3) (lexicographic);
* early tests at block boundaries: once m(0)m(1) is fixed the concatenation
  m(1)m(0) is tested too, and once m(0)m(1)m(2) is fixed every m(a)m(b)m(c)m(a)
  over the distinct first three letters is tested.

Only complete candidates reach the expensive final check; anything returned
has passed it in full.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path
from typing import Callable

from .freeness import SQUARE_FREE, FreenessSpec, extend_is_free, is_free
from .morphisms import UniformMorphism

log = logging.getLogger("repthresh.msearch")

TARGET = "012"


@dataclass
class SearchConfig:
    k_range: list[int]
    profile: str = "even"
    arity: int = 4
    lex_force: bool = True
    early_tests: bool = True
    prefix_specs: list[FreenessSpec] | None = None
    boundary_check: Callable[[str], bool] | None = None
    final_check: Callable[[UniformMorphism], bool] | None = None
    collect_all: bool = False
    checkpoint_path: str | None = None
    checkpoint_every: int = 100000
    log_every: int = 500000

    def resolved_prefix_specs(self) -> list[FreenessSpec]:
        if self.prefix_specs is not None:
            return self.prefix_specs
        from .products import PROFILES

        return [SQUARE_FREE, PROFILES[self.profile]["dst_spec"]]

    def resolved_boundary_check(self) -> Callable[[str], bool]:
        if self.boundary_check is not None:
            return self.boundary_check
        specs = self.resolved_prefix_specs()
        return lambda w: all(is_free(w, spec) for spec in specs)

    def resolved_final_check(self) -> Callable[[UniformMorphism], bool]:
        if self.final_check is not None:
            return self.final_check
        from .products import verify_upper

        profile = self.profile
        return lambda m: verify_upper(m, profile).passed


def _read_checkpoint(path: str | None):
    if not path or not Path(path).exists():
        return None
    return json.loads(Path(path).read_text())


class _Searcher:
    def __init__(self, cfg: SearchConfig, k: int):
        self.cfg = cfg
        self.k = k
        self.n_total = cfg.arity * k
        self.specs = cfg.resolved_prefix_specs()
        self.boundary = cfg.resolved_boundary_check()
        self.final = cfg.resolved_final_check()
        self.word: list[str] = []
        # True while the block under construction still equals its predecessor
        self.eq_state = [True] * (cfg.arity + 1)
        self.nodes = 0
        self.found: list[UniformMorphism] = []

    def blocks(self, count: int) -> list[str]:
        text = "".join(self.word)
        return [text[b * self.k : (b + 1) * self.k] for b in range(count)]

    def _early_tests_ok(self) -> bool:
        done = len(self.word) // self.k
        if done == 2:
            b = self.blocks(2)
            return self.boundary(b[1] + b[0])
        if done == 3:
            b = self.blocks(3)
            return all(
                self.boundary(b[x] + b[y] + b[z] + b[x]) for x, y, z in permutations(range(3))
            )
        return True

    def _try_letter(self, a: str, depth: int) -> bool:
        """Append `a`; True when every incremental constraint accepts it.
        The letter stays appended either way (caller pops)."""
        cfg, k, word = self.cfg, self.k, self.word
        block, off = divmod(depth, k)
        prefix = "".join(word)
        word.append(a)
        if cfg.lex_force and block > 0 and self.eq_state[block]:
            prev_letter = word[(block - 1) * k + off]
            if a > prev_letter:
                return False
            if a == prev_letter:
                if off == k - 1:
                    return False  # fully equal block breaks m(b-1) > m(b)
            else:
                self.eq_state[block] = False
        for spec in self.specs:
            if not extend_is_free(prefix, a, spec):
                return False
        if (depth + 1) % k == 0 and cfg.early_tests and not self._early_tests_ok():
            return False
        return True

    def run(self, resume_path: str | None = None) -> UniformMorphism | None:
        return self._descend(0, resume_path or "")

    def _descend(self, depth: int, on_path: str) -> UniformMorphism | None:
        cfg = self.cfg
        self.nodes += 1
        if cfg.log_every and self.nodes % cfg.log_every == 0:
            log.info("depth=%d, prefix=%s, nodes=%d", depth, "".join(self.word[:32]), self.nodes)
        if cfg.checkpoint_path and cfg.checkpoint_every and self.nodes % cfg.checkpoint_every == 0:
            Path(cfg.checkpoint_path).write_text(
                json.dumps({"k": self.k, "path": "".join(self.word), "nodes": self.nodes})
            )
        if depth == self.n_total:
            m = UniformMorphism(tuple(self.blocks(cfg.arity)))
            if self.final(m):
                self.found.append(m)
                return m
            return None
        block = depth // self.k
        for a in TARGET:
            # lexicographic resume: skip branches before the checkpointed path
            if depth < len(on_path) and a < on_path[depth]:
                continue
            child_path = on_path if depth < len(on_path) and a == on_path[depth] else ""
            prev_eq = self.eq_state[block]
            ok = self._try_letter(a, depth)
            if ok:
                hit = self._descend(depth + 1, child_path)
                if hit is not None and not cfg.collect_all:
                    return hit
            self.word.pop()
            self.eq_state[block] = prev_eq
        return None


def search_uniform_morphism(cfg: SearchConfig):
    """First morphism (or all of them, with collect_all) passing every stage,
    else None.  k values are tried in the order given; within one k the scan
    is depth-first in lexicographic candidate order."""
    resume = _read_checkpoint(cfg.checkpoint_path)
    all_found: list[UniformMorphism] = []
    for k in cfg.k_range:
        searcher = _Searcher(cfg, k)
        resume_path = resume["path"] if resume and resume.get("k") == k else None
        hit = searcher.run(resume_path)
        log.info("k=%d exhausted, nodes=%d, found=%d", k, searcher.nodes, len(searcher.found))
        if cfg.collect_all:
            all_found.extend(searcher.found)
        elif hit is not None:
            return hit
    return all_found if cfg.collect_all else None
