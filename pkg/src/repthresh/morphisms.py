"""Uniform morphisms: parsing, application, and image-freeness verification.

The image-freeness check realizes the bounded exhaustive verification that a
(beta+, n)-freeness transfer demands: if every image of a source-free word
shorter than 2*beta/(beta - alpha) satisfies the target spec, so does the
image of every source-free word.  The remaining hypotheses of that transfer
lemma are the literature's burden, not re-proved here; this module performs
exactly the bounded check.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .freeness import FreenessSpec, find_violation, maximal_free_words
from .words import Repetition, WordError, check_word, format_rational


@dataclass(frozen=True)
class UniformMorphism:
    """A letter-to-word map with images of one common length, applied
    homomorphically."""

    images: tuple[str, ...]
    target_alphabet_size: int = 3

    def __post_init__(self):
        if not self.images:
            raise WordError("morphism needs at least one image")
        k = len(self.images[0])
        if k == 0:
            raise WordError("empty images not allowed")
        for img in self.images:
            if len(img) != k:
                raise WordError("images must all have the same length")
            check_word(img, self.target_alphabet_size)

    @property
    def arity(self) -> int:
        return len(self.images)

    @property
    def k(self) -> int:
        """Common image length."""
        return len(self.images[0])

    def apply(self, w: str) -> str:
        """Concatenated images; |result| = k * |w|."""
        images = self.images
        arity = self.arity
        out = []
        for ch in w:
            i = ord(ch) - 48
            if not 0 <= i < arity:
                raise WordError(f"letter {ch!r} outside morphism arity {arity}")
            out.append(images[i])
        return "".join(out)

    def to_text(self) -> str:
        return "\n".join(f"{i} -> {img}" for i, img in enumerate(self.images)) + "\n"


def apply(m: UniformMorphism, w: str) -> str:
    return m.apply(w)


def parse_morphism(text: str) -> UniformMorphism:
    """Parse the morphism file format.

    One `digit -> image` line per source letter; `#` starts a comment;
    whitespace inside images is ignored; a trailing backslash continues the
    image on the next line.
    """
    logical: list[str] = []
    pending = ""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.endswith("\\"):
            pending += line[:-1]
            continue
        logical.append(pending + line)
        pending = ""
    if pending.strip():
        logical.append(pending)
    images: dict[int, str] = {}
    for entry in logical:
        if "->" not in entry:
            raise WordError(f"malformed morphism line {entry!r}")
        left, right = entry.split("->", 1)
        letter = left.strip()
        if not (letter.isdigit() and len(letter) == 1):
            raise WordError(f"source letter must be a single digit, got {left.strip()!r}")
        img = "".join(right.split())
        if int(letter) in images:
            raise WordError(f"duplicate image for source letter {letter}")
        images[int(letter)] = img
    if sorted(images) != list(range(len(images))):
        raise WordError(f"source letters must be 0..{len(images) - 1}")
    return UniformMorphism(tuple(images[i] for i in range(len(images))))


def load_morphism(path: str | Path) -> UniformMorphism:
    return parse_morphism(Path(path).read_text())


def fixture_path(name: str) -> Path:
    """Path of a bundled morphism fixture ("g45" or "g514")."""
    res = importlib.resources.files("repthresh") / "fixtures" / f"{name}.morphism"
    return Path(str(res))


def load_fixture(name: str) -> UniformMorphism:
    return load_morphism(fixture_path(name))


def image_check_length_bound(beta: Fraction, alpha_src: Fraction) -> Fraction:
    """The exact source-length bound 2*beta/(beta - alpha_src).

    Images of source-free words of every length strictly below this value
    must be checked; beyond that the freeness transfers.
    """
    if beta <= alpha_src:
        raise ValueError(
            f"target threshold {format_rational(beta)} must exceed source "
            f"threshold {format_rational(alpha_src)}"
        )
    return 2 * beta / (beta - alpha_src)


def max_source_length(beta: Fraction, alpha_src: Fraction) -> int:
    """Largest integer strictly below the length bound."""
    bound = image_check_length_bound(beta, alpha_src)
    if bound.denominator == 1:
        return bound.numerator - 1
    return bound.numerator // bound.denominator


@dataclass
class ImageFreenessResult:
    passed: bool
    src_spec: FreenessSpec
    dst_spec: FreenessSpec
    source_length_max: int
    sources_checked: int
    failing_source: str | None = None
    witness: Repetition | None = None

    def to_dict(self) -> dict:
        d = {
            "passed": self.passed,
            "src_spec": str(self.src_spec),
            "dst_spec": str(self.dst_spec),
            "source_length_max": self.source_length_max,
            "sources_checked": self.sources_checked,
        }
        if not self.passed:
            d["failing_source"] = self.failing_source
            d["witness"] = self.witness.to_dict() if self.witness else None
        return d


def verify_images_free(
    m: UniformMorphism,
    src_spec: FreenessSpec,
    dst_spec: FreenessSpec,
    src_alphabet_size: int | None = None,
    threads: int = 1,
) -> ImageFreenessResult:
    """Check the target spec on every image of every short source-free word.

    Source words up to max_source_length(dst.threshold, src.threshold) are
    covered by checking the maximal ones only: the image of a free word is a
    prefix of the image of any free extension, and the target spec is closed
    under factors.
    """
    bound = max_source_length(dst_spec.threshold, src_spec.threshold)
    arity = src_alphabet_size or m.arity
    sources = maximal_free_words(arity, src_spec, bound)
    checked = 0
    hits: list[tuple[str, Repetition]] = []

    def check_one(w: str):
        violation = find_violation(m.apply(w), dst_spec)
        if violation is not None:
            return (w, violation)
        return None

    if threads > 1:
        from ._parallel import parallel_map

        for res in parallel_map(_image_check_worker, [(m, dst_spec, w) for w in sources], threads):
            checked += 1
            if res is not None:
                hits.append(res)
    else:
        for w in sources:
            checked += 1
            res = check_one(w)
            if res is not None:
                hits.append(res)

    if hits:
        hits.sort()  # deterministic first failure by source word
        src, witness = hits[0]
        return ImageFreenessResult(
            False, src_spec, dst_spec, bound, checked, failing_source=src, witness=witness
        )
    return ImageFreenessResult(True, src_spec, dst_spec, bound, checked)


def _image_check_worker(args):
    m, dst_spec, w = args
    violation = find_violation(m.apply(w), dst_spec)
    if violation is not None:
        return (w, violation)
    return None
