"""Rule-based Brahmic to ISO 15919 transliteration."""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field

from .schemes import (
    SCHEMES,
    SCRIPT_CODES,
    TransliterationScheme,
    UnsupportedScriptError,
    load_scheme,
)
from .script_detect import ScriptTag, classify_codepoint

__all__ = [
    "TransliterationReport",
    "TransliterationScheme",
    "UnsupportedScriptError",
    "SCRIPT_CODES",
    "load_scheme",
    "transliterate",
    "transliterate_auto",
]

ZWNJ = 0x200C
ZWJ = 0x200D
DANDA = 0x0964
DOUBLE_DANDA = 0x0965
DANDA_MAP = {DANDA: ".", DOUBLE_DANDA: ".."}
INHERENT_VOWEL = "a"
# Separators keeping the romanisation reversible: a:i is not ai (ऐ), and
# k_h is not kh (ख).
VOWEL_SEPARATOR = ":"
ASPIRATE_SEPARATOR = "_"
_SPLIT_VOWELS = frozenset({"i", "u"})
_ASPIRABLE = frozenset({"k", "g", "c", "j", "ṭ", "ḍ", "t", "d", "p", "b"})


@dataclass
class TransliterationReport:
    chars_in: int = 0
    chars_out: int = 0
    unmapped_counts: Counter = field(default_factory=Counter)

    @property
    def unmapped(self) -> list:
        return sorted(self.unmapped_counts.items())

    def merge(self, other: TransliterationReport) -> TransliterationReport:
        self.chars_in += other.chars_in
        self.chars_out += other.chars_out
        self.unmapped_counts.update(other.unmapped_counts)
        return self

    def to_dict(self) -> dict:
        return {
            "chars_in": self.chars_in,
            "chars_out": self.chars_out,
            "unmapped": [
                {"codepoint": f"U+{cp:04X}", "char": chr(cp), "count": n}
                for cp, n in self.unmapped
            ],
        }


def _geminate(roman: str) -> str:
    # ਪੱਕਾ -> pakkā, ਅੱਖ -> akkh: double the unaspirated part.
    if len(roman) > 1 and roman.endswith("h"):
        roman = roman[:-1].rstrip("͟")
    return roman


def _run(cps, scheme, out, report, keep_danda):
    """Transliterate codepoints ``cps`` (already NFC) with ``scheme``."""
    vowels = scheme.independent_vowels
    consonants = scheme.consonants
    signs = scheme.vowel_signs
    modifiers = scheme.modifiers
    digits = scheme.digits
    others = scheme.signs
    nukta_pairs = scheme.nukta_consonants
    virama = scheme.virama
    nukta = scheme.nukta
    gem = scheme.gemination_mark
    n = len(cps)
    i = 0
    # last syllable ended in a bare "a" / last consonant took a virama
    open_a = False
    dead = None
    while i < n:
        cp = cps[i]
        if cp in consonants:
            base = consonants[cp]
            i += 1
            if nukta is not None and i < n and cps[i] == nukta:
                if cp in nukta_pairs:
                    base = nukta_pairs[cp]
                else:
                    report.unmapped_counts[nukta] += 1
                i += 1
            if base == "h" and dead in _ASPIRABLE:
                out.append(ASPIRATE_SEPARATOR)
            out.append(base)
            open_a = False
            dead = None
            if i < n and cps[i] in signs:
                out.append(signs[cps[i]])
                i += 1
            elif i < n and cps[i] == virama:
                dead = base
                i += 1
            else:
                out.append(INHERENT_VOWEL)
                open_a = True
            continue
        was_open = open_a
        open_a = False
        dead = None
        if cp in vowels:
            roman = vowels[cp]
            if was_open and roman in _SPLIT_VOWELS:
                out.append(VOWEL_SEPARATOR)
            out.append(roman)
            open_a = roman == INHERENT_VOWEL
        elif cp in signs:
            # orphaned vowel sign, e.g. after an unmapped bearer
            out.append(signs[cp])
        elif cp in modifiers:
            roman = modifiers[cp]
            out.append(roman)
            # Bengali khanda ta is a dead t
            if roman in _ASPIRABLE:
                dead = roman
        elif cp in digits:
            out.append(digits[cp])
        elif cp == virama:
            pass
        elif cp == gem:
            if i + 1 < n and cps[i + 1] in consonants:
                nxt = cps[i + 1]
                roman = consonants[nxt]
                if i + 2 < n and cps[i + 2] == nukta and nxt in nukta_pairs:
                    roman = nukta_pairs[nxt]
                out.append(_geminate(roman))
        elif cp in others:
            out.append(others[cp])
        elif cp in DANDA_MAP:
            out.append(chr(cp) if keep_danda else DANDA_MAP[cp])
        elif cp == ZWJ or cp == ZWNJ:
            pass
        elif scheme.in_block(cp):
            # Own-script codepoint without a mapping: dropped so output stays
            # Latin, and reported.
            report.unmapped_counts[cp] += 1
        else:
            tag = classify_codepoint(cp)
            if tag is not ScriptTag.LATIN and tag is not ScriptTag.NEUTRAL:
                report.unmapped_counts[cp] += 1
            out.append(chr(cp))
        i += 1


def transliterate(
    text: str, scheme: TransliterationScheme, *, keep_danda: bool = False
) -> tuple[str, TransliterationReport]:
    """Romanise ``text`` written in the scheme's script.

    Codepoints of other scripts pass through and, unless Latin or
    script-neutral, are tallied in the report.
    """
    report = TransliterationReport(chars_in=len(text))
    cps = [ord(c) for c in unicodedata.normalize("NFC", text)]
    out = []
    _run(cps, scheme, out, report, keep_danda)
    result = unicodedata.normalize("NFC", "".join(out))
    report.chars_out = len(result)
    return result, report


def _segments(cps):
    """Split into ``[tag or None, codepoints]`` runs of a single Brahmic script.

    Neutral codepoints join the current run; leading ones join the first run.
    """
    runs = []
    pending = []
    for cp in cps:
        tag = classify_codepoint(cp)
        if tag is ScriptTag.NEUTRAL:
            (runs[-1][1] if runs else pending).append(cp)
            continue
        key = tag if tag.is_brahmic else None
        if runs and runs[-1][0] == key:
            runs[-1][1].append(cp)
        else:
            runs.append([key, pending + [cp]])
            pending = []
    if pending:
        runs.append([None, pending])
    return runs


def transliterate_auto(
    text: str, *, keep_danda: bool = False
) -> tuple[str, TransliterationReport]:
    """Romanise every Brahmic run of mixed-script ``text`` with its own scheme."""
    report = TransliterationReport(chars_in=len(text))
    cps = [ord(c) for c in unicodedata.normalize("NFC", text)]
    out = []
    for tag, run in _segments(cps):
        if tag is None:
            for cp in run:
                t = classify_codepoint(cp)
                if t is ScriptTag.OTHER:
                    report.unmapped_counts[cp] += 1
                out.append(chr(cp))
        else:
            _run(run, SCHEMES[tag], out, report, keep_danda)
    result = unicodedata.normalize("NFC", "".join(out))
    report.chars_out = len(result)
    return result, report
