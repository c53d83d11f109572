"""Built-in ISO 15919 tables for the six supported Brahmic scripts.

Devanagari, Bengali, Gurmukhi, Gujarati and Oriya share the ISCII-derived
block layout, so their tables are written once as offsets from the block
start and specialised per script. Sinhala has its own layout.

Values are stored NFC-normalised. Combining marks used below:
U+0325 ring below (vocalic r/l), U+0304 macron, U+0310 candrabindu,
U+035F double macron below, U+0306 breve (Sinhala prenasalised stops).
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from types import MappingProxyType

from .script_detect import BRAHMIC_TAGS, ScriptTag
from .unicode_tables import UNASSIGNED_RANGES

_UNASSIGNED = frozenset(cp for lo, hi in UNASSIGNED_RANGES for cp in range(lo, hi + 1))

R = "r̥"
RR = "r̥̄"
L = "l̥"
LL = "l̥̄"
CANDRABINDU = "m̐"

# ---------------------------------------------------------------------------
# Shared ISCII-layout offsets
# ---------------------------------------------------------------------------

_VOWELS = {
    0x05: "a",
    0x06: "ā",
    0x07: "i",
    0x08: "ī",
    0x09: "u",
    0x0A: "ū",
    0x0B: R,
    0x0C: L,
    0x0D: "æ",
    0x0E: "e",
    0x0F: "ē",
    0x10: "ai",
    0x11: "ô",
    0x12: "o",
    0x13: "ō",
    0x14: "au",
    0x60: RR,
    0x61: LL,
}

_CONSONANTS = {
    0x15: "k",
    0x16: "kh",
    0x17: "g",
    0x18: "gh",
    0x19: "ṅ",
    0x1A: "c",
    0x1B: "ch",
    0x1C: "j",
    0x1D: "jh",
    0x1E: "ñ",
    0x1F: "ṭ",
    0x20: "ṭh",
    0x21: "ḍ",
    0x22: "ḍh",
    0x23: "ṇ",
    0x24: "t",
    0x25: "th",
    0x26: "d",
    0x27: "dh",
    0x28: "n",
    0x29: "ṉ",
    0x2A: "p",
    0x2B: "ph",
    0x2C: "b",
    0x2D: "bh",
    0x2E: "m",
    0x2F: "y",
    0x30: "r",
    0x31: "ṟ",
    0x32: "l",
    0x33: "ḷ",
    0x34: "ḻ",
    0x35: "v",
    0x36: "ś",
    0x37: "ṣ",
    0x38: "s",
    0x39: "h",
    # Precomposed nukta letters. Most are NFC composition exclusions and
    # arrive decomposed; they are listed so un-normalised input still maps.
    0x58: "q",
    0x59: "k͟h",
    0x5A: "ġ",
    0x5B: "z",
    0x5C: "ṛ",
    0x5D: "ṛh",
    0x5E: "f",
    0x5F: "ẏ",
}

# consonant offset + nukta -> value
_NUKTA = {
    0x15: "q",
    0x16: "k͟h",
    0x17: "ġ",
    0x1C: "z",
    0x21: "ṛ",
    0x22: "ṛh",
    0x2B: "f",
    0x2F: "ẏ",
    0x28: "ṉ",
    0x30: "ṟ",
    0x33: "ḻ",
}

_SIGNS = {
    0x3E: "ā",
    0x3F: "i",
    0x40: "ī",
    0x41: "u",
    0x42: "ū",
    0x43: R,
    0x44: RR,
    0x45: "æ",
    0x46: "e",
    0x47: "ē",
    0x48: "ai",
    0x49: "ô",
    0x4A: "o",
    0x4B: "ō",
    0x4C: "au",
    0x62: L,
    0x63: LL,
}

_MODIFIERS = {
    0x01: CANDRABINDU,
    0x02: "ṁ",
    0x03: "ḥ",
}

_DIGITS = {0x66 + i: str(i) for i in range(10)}

_VIRAMA = 0x4D
_NUKTA_SIGN = 0x3C
_AVAGRAHA = 0x3D
_OM = 0x50


@dataclass(frozen=True)
class TransliterationScheme:
    script: ScriptTag
    block: tuple
    independent_vowels: MappingProxyType
    consonants: MappingProxyType
    vowel_signs: MappingProxyType
    virama: int
    modifiers: MappingProxyType
    digits: MappingProxyType
    nukta: int | None = None
    nukta_consonants: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    # avagraha and similar signs whose output is punctuation, not letters
    signs: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    # doubles the following consonant (Gurmukhi addak)
    gemination_mark: int | None = None
    known_unmapped: frozenset = frozenset()
    passthrough: str = "passthrough"

    def in_block(self, cp: int) -> bool:
        return any(lo <= cp <= hi for lo, hi in self.block)

    def mapped_codepoints(self) -> set:
        cps = set(self.independent_vowels) | set(self.consonants)
        cps |= set(self.vowel_signs) | set(self.modifiers) | set(self.digits)
        cps |= set(self.signs)
        cps.add(self.virama)
        if self.nukta is not None:
            cps.add(self.nukta)
        if self.gemination_mark is not None:
            cps.add(self.gemination_mark)
        return cps


def _freeze(d):
    return MappingProxyType({k: unicodedata.normalize("NFC", v) for k, v in d.items()})


def _iscii_scheme(
    script,
    base,
    *,
    blocks=None,
    extra_vowels=None,
    extra_consonants=None,
    extra_signs=None,
    extra_modifiers=None,
    extra_nukta=None,
    gemination=None,
    avagraha=True,
    om=False,
    unmapped=(),
):
    def shift(table):
        return {base + off: v for off, v in table.items() if base + off not in _UNASSIGNED}

    vowels = shift(_VOWELS)
    if om:
        vowels[base + _OM] = "ōṁ"
    vowels.update(extra_vowels or {})
    consonants = shift(_CONSONANTS)
    consonants.update(extra_consonants or {})
    signs = shift(_SIGNS)
    signs.update(extra_signs or {})
    modifiers = shift(_MODIFIERS)
    modifiers.update(extra_modifiers or {})
    nukta = {base + off: v for off, v in _NUKTA.items() if base + off in consonants}
    nukta.update(extra_nukta or {})
    return TransliterationScheme(
        script=script,
        block=blocks or ((base, base + 0x7F),),
        independent_vowels=_freeze(vowels),
        consonants=_freeze(consonants),
        vowel_signs=_freeze(signs),
        virama=base + _VIRAMA,
        modifiers=_freeze(modifiers),
        digits=_freeze(shift(_DIGITS)),
        nukta=base + _NUKTA_SIGN,
        nukta_consonants=_freeze(nukta),
        signs=_freeze(shift({_AVAGRAHA: "’"}) if avagraha else {}),
        gemination_mark=gemination,
        known_unmapped=frozenset(unmapped),
    )


def _range(lo, hi):
    return range(lo, hi + 1)


DEVANAGARI = _iscii_scheme(
    ScriptTag.DEVANAGARI,
    0x0900,
    blocks=((0x0900, 0x097F), (0xA8E0, 0xA8FF)),
    extra_vowels={0x0972: "æ"},  # candra a
    om=True,
    unmapped=[
        0x0900,  # inverted candrabindu
        0x0904,  # short a
        0x093A,
        0x093B,
        0x094E,
        0x094F,
        *_range(0x0951, 0x0957),  # stress signs, Kashmiri vowel signs
        0x0970,  # abbreviation sign
        0x0971,  # high spacing dot
        *_range(0x0973, 0x097F),  # Kashmiri/Sindhi letters
        *_range(0xA8E0, 0xA8FF),  # Devanagari Extended
    ],
)

BENGALI = _iscii_scheme(
    ScriptTag.BENGALI_ASSAMESE,
    0x0980,
    extra_consonants={0x09F0: "r", 0x09F1: "v"},  # Assamese ra, wa
    extra_modifiers={0x09CE: "t"},  # khanda ta carries no inherent vowel
    unmapped=[
        0x0980,  # anji
        0x09D7,  # au length mark (only orphaned after NFC)
        *_range(0x09F2, 0x09FE),  # currency, fractions, isshar, vedic signs
    ],
)

GURMUKHI = _iscii_scheme(
    ScriptTag.GURMUKHI,
    0x0A00,
    avagraha=False,
    extra_modifiers={0x0A70: "ṁ"},  # tippi
    extra_nukta={0x0A32: "ḷ", 0x0A38: "ś"},  # ਲ਼, ਸ਼
    gemination=0x0A71,  # addak
    unmapped=[
        0x0A51,  # udaat
        0x0A72,  # iri (vowel bearer)
        0x0A73,  # ura (vowel bearer)
        0x0A74,  # ek onkar
        0x0A75,  # yakash
        0x0A76,  # abbreviation sign
    ],
)

GUJARATI = _iscii_scheme(
    ScriptTag.GUJARATI,
    0x0A80,
    om=True,
    unmapped=[
        0x0AF0,  # abbreviation sign
        0x0AF1,  # rupee sign
        *_range(0x0AF9, 0x0AFF),
    ],
)

ORIYA = _iscii_scheme(
    ScriptTag.ORIYA,
    0x0B00,
    extra_consonants={0x0B71: "v"},
    unmapped=[
        0x0B55,  # overline
        0x0B56,  # ai length mark (only orphaned after NFC)
        0x0B57,  # au length mark (only orphaned after NFC)
        0x0B70,  # isshar
        *_range(0x0B72, 0x0B77),  # fractions
    ],
)

SINHALA = TransliterationScheme(
    script=ScriptTag.SINHALA,
    block=((0x0D80, 0x0DFF), (0x111E0, 0x111FF)),
    independent_vowels=_freeze(
        {
            0x0D85: "a",
            0x0D86: "ā",
            0x0D87: "æ",
            0x0D88: "ǣ",
            0x0D89: "i",
            0x0D8A: "ī",
            0x0D8B: "u",
            0x0D8C: "ū",
            0x0D8D: R,
            0x0D8E: RR,
            0x0D8F: L,
            0x0D90: LL,
            0x0D91: "e",
            0x0D92: "ē",
            0x0D93: "ai",
            0x0D94: "o",
            0x0D95: "ō",
            0x0D96: "au",
        }
    ),
    consonants=_freeze(
        {
            0x0D9A: "k",
            0x0D9B: "kh",
            0x0D9C: "g",
            0x0D9D: "gh",
            0x0D9E: "ṅ",
            0x0D9F: "n̆g",
            0x0DA0: "c",
            0x0DA1: "ch",
            0x0DA2: "j",
            0x0DA3: "jh",
            0x0DA4: "ñ",
            0x0DA5: "jñ",
            0x0DA6: "n̆j",
            0x0DA7: "ṭ",
            0x0DA8: "ṭh",
            0x0DA9: "ḍ",
            0x0DAA: "ḍh",
            0x0DAB: "ṇ",
            0x0DAC: "n̆ḍ",
            0x0DAD: "t",
            0x0DAE: "th",
            0x0DAF: "d",
            0x0DB0: "dh",
            0x0DB1: "n",
            0x0DB3: "n̆d",
            0x0DB4: "p",
            0x0DB5: "ph",
            0x0DB6: "b",
            0x0DB7: "bh",
            0x0DB8: "m",
            0x0DB9: "m̆b",
            0x0DBA: "y",
            0x0DBB: "r",
            0x0DBD: "l",
            0x0DC0: "v",
            0x0DC1: "ś",
            0x0DC2: "ṣ",
            0x0DC3: "s",
            0x0DC4: "h",
            0x0DC5: "ḷ",
            0x0DC6: "f",
        }
    ),
    vowel_signs=_freeze(
        {
            0x0DCF: "ā",
            0x0DD0: "æ",
            0x0DD1: "ǣ",
            0x0DD2: "i",
            0x0DD3: "ī",
            0x0DD4: "u",
            0x0DD6: "ū",
            0x0DD8: R,
            0x0DD9: "e",
            0x0DDA: "ē",
            0x0DDB: "ai",
            0x0DDC: "o",
            0x0DDD: "ō",
            0x0DDE: "au",
            0x0DF2: RR,
        }
    ),
    virama=0x0DCA,
    modifiers=_freeze({0x0D81: CANDRABINDU, 0x0D82: "ṁ", 0x0D83: "ḥ"}),
    digits=_freeze({0x0DE6 + i: str(i) for i in range(10)}),
    known_unmapped=frozenset(
        [
            0x0DDF,  # gayanukitta; romanisation contested
            0x0DF3,  # diga gayanukitta; romanisation contested
            0x0DF4,  # kunddaliya
            *_range(0x111E1, 0x111F4),  # archaic numbers
        ]
    ),
)

SCHEMES = MappingProxyType(
    {
        ScriptTag.DEVANAGARI: DEVANAGARI,
        ScriptTag.BENGALI_ASSAMESE: BENGALI,
        ScriptTag.ORIYA: ORIYA,
        ScriptTag.GUJARATI: GUJARATI,
        ScriptTag.GURMUKHI: GURMUKHI,
        ScriptTag.SINHALA: SINHALA,
    }
)

SCRIPT_CODES = MappingProxyType(
    {
        "deva": ScriptTag.DEVANAGARI,
        "beng": ScriptTag.BENGALI_ASSAMESE,
        "orya": ScriptTag.ORIYA,
        "gujr": ScriptTag.GUJARATI,
        "guru": ScriptTag.GURMUKHI,
        "sinh": ScriptTag.SINHALA,
    }
)


class UnsupportedScriptError(ValueError):
    pass


def load_scheme(script) -> TransliterationScheme:
    """Built-in scheme for a Brahmic script tag, tag name, or ISO 15924 code."""
    if isinstance(script, str) and script.lower() in SCRIPT_CODES:
        script = SCRIPT_CODES[script.lower()]
    try:
        tag = ScriptTag(script)
    except ValueError:
        raise UnsupportedScriptError(f"unknown script {script!r}") from None
    if tag not in BRAHMIC_TAGS:
        raise UnsupportedScriptError(f"no transliteration scheme for {tag.value}")
    return SCHEMES[tag]
