"""Brahmic-script text tooling: script detection, ISO 15919 transliteration,
corpus filtering, subword tokenizer metrics, Mann-Whitney U statistics and
linear CKA."""

__version__ = "0.1.0"

from .cka import ActivationMatrix, CkaTable, linear_cka, pairwise_layer_cka  # noqa: E402
from .corpus import FilterConfig, normalize, process_corpus  # noqa: E402
from .script_detect import ScriptTag, classify_codepoint, dominant_script  # noqa: E402
from .stats import MwuConfig, SampleGroup, compare  # noqa: E402
from .tokenizer import SubwordVocab, fertility, tokenize_word, train_bpe, unbroken_ratio  # noqa: E402
from .transliterate import load_scheme, transliterate, transliterate_auto  # noqa: E402

__all__ = [
    "ActivationMatrix",
    "CkaTable",
    "FilterConfig",
    "MwuConfig",
    "SampleGroup",
    "ScriptTag",
    "SubwordVocab",
    "classify_codepoint",
    "compare",
    "dominant_script",
    "fertility",
    "linear_cka",
    "load_scheme",
    "normalize",
    "pairwise_layer_cka",
    "process_corpus",
    "tokenize_word",
    "train_bpe",
    "transliterate",
    "transliterate_auto",
    "unbroken_ratio",
]
