"""Writing-script classification of codepoints and whole texts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .unicode_tables import (
    BRAHMIC_RANGES,
    LATIN_RANGES,
    NEUTRAL_OVERRIDES,
    NEUTRAL_RANGES,
    UNICODE_VERSION,
)

__all__ = [
    "ScriptTag",
    "ScriptHistogram",
    "Dominance",
    "BRAHMIC_TAGS",
    "UNICODE_VERSION",
    "classify_codepoint",
    "script_histogram",
    "dominance",
    "dominant_script",
]


class ScriptTag(str, enum.Enum):
    # Declaration order is the tie-break order for dominance.
    DEVANAGARI = "Devanagari"
    BENGALI_ASSAMESE = "BengaliAssamese"
    ORIYA = "Oriya"
    GUJARATI = "Gujarati"
    GURMUKHI = "Gurmukhi"
    SINHALA = "Sinhala"
    LATIN = "Latin"
    OTHER = "Other"
    NEUTRAL = "Neutral"

    def __str__(self):
        return self.value

    @property
    def is_brahmic(self) -> bool:
        return self in BRAHMIC_TAGS


BRAHMIC_TAGS = frozenset(
    {
        ScriptTag.DEVANAGARI,
        ScriptTag.BENGALI_ASSAMESE,
        ScriptTag.ORIYA,
        ScriptTag.GUJARATI,
        ScriptTag.GURMUKHI,
        ScriptTag.SINHALA,
    }
)

_TAGS = tuple(ScriptTag)
_TAG_INDEX = {t: i for i, t in enumerate(_TAGS)}
_OTHER = _TAG_INDEX[ScriptTag.OTHER]
_NEUTRAL = _TAG_INDEX[ScriptTag.NEUTRAL]


def _build_tables():
    ranges = sorted(
        (lo, hi, _TAG_INDEX[ScriptTag(tag)])
        for lo, hi, tag in BRAHMIC_RANGES + LATIN_RANGES + NEUTRAL_RANGES
    )
    for (_, hi_a, _), (lo_b, _, _) in zip(ranges, ranges[1:]):
        if lo_b <= hi_a:
            raise AssertionError("overlapping script ranges")
    size = max(hi for _, hi, _ in ranges) + 1
    lut = np.full(size, _OTHER, dtype=np.int8)
    for lo, hi, idx in ranges:
        lut[lo : hi + 1] = idx
    for cp in NEUTRAL_OVERRIDES:
        lut[cp] = _NEUTRAL
    return lut


_LUT = _build_tables()


def classify_codepoint(cp: int | str) -> ScriptTag:
    """Script tag of a single codepoint (an int or a one-character string)."""
    if isinstance(cp, str):
        cp = ord(cp)
    if 0 <= cp < _LUT.shape[0]:
        return _TAGS[_LUT[cp]]
    # The table ends at the last classified range.
    return ScriptTag.OTHER


def codepoint_tags(text: str) -> np.ndarray:
    """Per-codepoint tag indices (into ``tuple(ScriptTag)``) as int8."""
    cps = np.frombuffer(text.encode("utf-32-le", "surrogatepass"), dtype="<u4")
    out = np.full(cps.shape, _OTHER, dtype=np.int8)
    inside = cps < _LUT.shape[0]
    out[inside] = _LUT[cps[inside]]
    return out


@dataclass
class ScriptHistogram:
    counts: dict = field(default_factory=lambda: {t: 0 for t in ScriptTag})

    @property
    def total_scriptful(self) -> int:
        return sum(c for t, c in self.counts.items() if t is not ScriptTag.NEUTRAL)

    def __getitem__(self, tag):
        return self.counts[ScriptTag(tag)]

    def nonzero(self) -> dict:
        return {t: c for t, c in self.counts.items() if c}

    def brahmic_tags(self) -> set:
        return {t for t, c in self.counts.items() if c and t.is_brahmic}

    def to_dict(self) -> dict:
        return {t.value: c for t, c in self.counts.items() if c}


def script_histogram(text: str) -> ScriptHistogram:
    binned = np.bincount(codepoint_tags(text), minlength=len(_TAGS))
    return ScriptHistogram({t: int(binned[i]) for i, t in enumerate(_TAGS)})


@dataclass(frozen=True)
class Dominance:
    tag: ScriptTag | None
    tie: bool
    histogram: ScriptHistogram

    def to_dict(self) -> dict:
        return {
            "histogram": self.histogram.to_dict(),
            "total_scriptful": self.histogram.total_scriptful,
            "dominant": self.tag.value if self.tag is not None else None,
            "tie": self.tie,
        }


def dominance(text: str) -> Dominance:
    """Plurality script over non-Neutral codepoints, with a tie flag.

    Ties go to the tag declared first in :class:`ScriptTag`.
    """
    hist = script_histogram(text)
    best, best_count, tie = None, 0, False
    for tag in _TAGS:
        if tag is ScriptTag.NEUTRAL:
            continue
        c = hist.counts[tag]
        if c > best_count:
            best, best_count, tie = tag, c, False
        elif c == best_count and c > 0:
            tie = True
    return Dominance(best, tie, hist)


def dominant_script(text: str) -> ScriptTag | None:
    return dominance(text).tag
