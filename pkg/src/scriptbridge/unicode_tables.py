"""Codepoint range tables used by script classification.

Block boundaries are taken from Blocks.txt of the Unicode Character Database
and frozen here so classification does not depend on the interpreter's
``unicodedata`` version. Bump ``UNICODE_VERSION`` when editing.
"""

UNICODE_VERSION = "13.0.0"

# (first, last, tag) inclusive. Ranges must not overlap; order is irrelevant.
BRAHMIC_RANGES = (
    (0x0900, 0x097F, "Devanagari"),
    (0xA8E0, 0xA8FF, "Devanagari"),  # Devanagari Extended
    (0x0980, 0x09FF, "BengaliAssamese"),
    (0x0A00, 0x0A7F, "Gurmukhi"),
    (0x0A80, 0x0AFF, "Gujarati"),
    (0x0B00, 0x0B7F, "Oriya"),
    (0x0D80, 0x0DFF, "Sinhala"),
    (0x111E0, 0x111FF, "Sinhala"),  # Sinhala Archaic Numbers
)

LATIN_RANGES = (
    (0x0041, 0x005A, "Latin"),
    (0x0061, 0x007A, "Latin"),
    (0x00AA, 0x00AA, "Latin"),
    (0x00BA, 0x00BA, "Latin"),
    (0x00C0, 0x00D6, "Latin"),
    (0x00D8, 0x00F6, "Latin"),
    (0x00F8, 0x024F, "Latin"),  # Latin-1 letters, Extended-A, Extended-B
    (0x1E00, 0x1EFF, "Latin"),  # Latin Extended Additional
    (0x2C60, 0x2C7F, "Latin"),  # Latin Extended-C
    (0xA720, 0xA7FF, "Latin"),  # Latin Extended-D
    (0xFF21, 0xFF3A, "Latin"),
    (0xFF41, 0xFF5A, "Latin"),
)

NEUTRAL_RANGES = (
    (0x0000, 0x0040, "Neutral"),  # controls, space, ASCII digits, punctuation
    (0x005B, 0x0060, "Neutral"),
    (0x007B, 0x00A9, "Neutral"),
    (0x00AB, 0x00B9, "Neutral"),
    (0x00BB, 0x00BF, "Neutral"),
    (0x00D7, 0x00D7, "Neutral"),
    (0x00F7, 0x00F7, "Neutral"),
    (0x0300, 0x036F, "Neutral"),  # Combining Diacritical Marks
    (0x1AB0, 0x1AFF, "Neutral"),  # Combining Diacritical Marks Extended
    (0x1DC0, 0x1DFF, "Neutral"),  # Combining Diacritical Marks Supplement
    (0x2000, 0x206F, "Neutral"),  # General Punctuation, incl. ZWNJ/ZWJ
    (0x2E00, 0x2E7F, "Neutral"),  # Supplemental Punctuation
    (0x3000, 0x3000, "Neutral"),  # ideographic space
    (0xFEFF, 0xFEFF, "Neutral"),  # BOM / ZWNBSP
)

# Dandas sit in the Devanagari block but are shared by every north Indic
# script; classifying them as Devanagari would skew dominance of, say,
# Bengali text that uses them as sentence stops.
NEUTRAL_OVERRIDES = (0x0964, 0x0965)

# Unassigned codepoints (Unicode 13.0) inside the Brahmic blocks. The blocks
# share one ISCII-derived layout, but each script leaves different slots
# empty; schemes must not map those.
UNASSIGNED_RANGES = (
    (0x0984, 0x0984), (0x098D, 0x098E), (0x0991, 0x0992), (0x09A9, 0x09A9),
    (0x09B1, 0x09B1), (0x09B3, 0x09B5), (0x09BA, 0x09BB), (0x09C5, 0x09C6),
    (0x09C9, 0x09CA), (0x09CF, 0x09D6), (0x09D8, 0x09DB), (0x09DE, 0x09DE),
    (0x09E4, 0x09E5), (0x09FF, 0x09FF),
    (0x0A00, 0x0A00), (0x0A04, 0x0A04), (0x0A0B, 0x0A0E), (0x0A11, 0x0A12),
    (0x0A29, 0x0A29), (0x0A31, 0x0A31), (0x0A34, 0x0A34), (0x0A37, 0x0A37),
    (0x0A3A, 0x0A3B), (0x0A3D, 0x0A3D), (0x0A43, 0x0A46), (0x0A49, 0x0A4A),
    (0x0A4E, 0x0A50), (0x0A52, 0x0A58), (0x0A5D, 0x0A5D), (0x0A5F, 0x0A65),
    (0x0A77, 0x0A7F),
    (0x0A80, 0x0A80), (0x0A84, 0x0A84), (0x0A8E, 0x0A8E), (0x0A92, 0x0A92),
    (0x0AA9, 0x0AA9), (0x0AB1, 0x0AB1), (0x0AB4, 0x0AB4), (0x0ABA, 0x0ABB),
    (0x0AC6, 0x0AC6), (0x0ACA, 0x0ACA), (0x0ACE, 0x0ACF), (0x0AD1, 0x0ADF),
    (0x0AE4, 0x0AE5), (0x0AF2, 0x0AF8),
    (0x0B00, 0x0B00), (0x0B04, 0x0B04), (0x0B0D, 0x0B0E), (0x0B11, 0x0B12),
    (0x0B29, 0x0B29), (0x0B31, 0x0B31), (0x0B34, 0x0B34), (0x0B3A, 0x0B3B),
    (0x0B45, 0x0B46), (0x0B49, 0x0B4A), (0x0B4E, 0x0B54), (0x0B58, 0x0B5B),
    (0x0B5E, 0x0B5E), (0x0B64, 0x0B65), (0x0B78, 0x0B7F),
    (0x0D80, 0x0D80), (0x0D84, 0x0D84), (0x0D97, 0x0D99), (0x0DB2, 0x0DB2),
    (0x0DBC, 0x0DBC), (0x0DBE, 0x0DBF), (0x0DC7, 0x0DC9), (0x0DCB, 0x0DCE),
    (0x0DD5, 0x0DD5), (0x0DD7, 0x0DD7), (0x0DE0, 0x0DE5), (0x0DF0, 0x0DF1),
    (0x0DF5, 0x0DFF),
    (0x111E0, 0x111E0), (0x111F5, 0x111FF),
)
