"""Streaming corpus preparation: script filter, normalisation, transliteration.

Records are JSON Lines objects ``{"id": ..., "lang": ..., "text": ...}``.
"""

from __future__ import annotations

import enum
import json
import re
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Iterator

from .script_detect import ScriptTag, dominant_script
from .transliterate import TransliterationReport, transliterate_auto

__all__ = [
    "CorpusDocument",
    "DropReason",
    "FilterConfig",
    "MalformedRecordError",
    "NormalizeOptions",
    "PipelineReport",
    "UnknownLanguageError",
    "CorpusPipeline",
    "DEFAULT_SCRIPTS_BY_LANG",
    "filter_document",
    "normalize",
    "process_corpus",
]

# Language -> script, as used for the 14 pretraining languages.
DEFAULT_SCRIPTS_BY_LANG = MappingProxyType(
    {
        "hi": ScriptTag.DEVANAGARI,
        "bn": ScriptTag.BENGALI_ASSAMESE,
        "mr": ScriptTag.DEVANAGARI,
        "ne": ScriptTag.DEVANAGARI,
        "si": ScriptTag.SINHALA,
        "gu": ScriptTag.GUJARATI,
        "pa": ScriptTag.GURMUKHI,
        "or": ScriptTag.ORIYA,
        "as": ScriptTag.BENGALI_ASSAMESE,
        "sa": ScriptTag.DEVANAGARI,
        "bpy": ScriptTag.BENGALI_ASSAMESE,
        "gom": ScriptTag.DEVANAGARI,
        "bh": ScriptTag.DEVANAGARI,
        "mai": ScriptTag.DEVANAGARI,
    }
)

NORMALIZER_NOTE = (
    "approximate normalizer: NFC, control-character removal, whitespace "
    "collapse, optional nukta decomposition; not codepoint-identical to IndicNLP"
)


class UnknownLanguageError(KeyError):
    pass


class MalformedRecordError(ValueError):
    def __init__(self, index, message):
        super().__init__(f"record {index}: {message}")
        self.index = index


class DropReason(str, enum.Enum):
    SCRIPT_MISMATCH = "script_mismatch"
    NO_SCRIPTFUL_TEXT = "no_scriptful_text"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CorpusDocument:
    id: str
    lang: str
    text: str

    def to_json(self) -> str:
        return json.dumps(
            {"id": self.id, "lang": self.lang, "text": self.text}, ensure_ascii=False
        )


@dataclass(frozen=True)
class NormalizeOptions:
    decompose_nukta: bool = False


@dataclass
class FilterConfig:
    allowed_scripts_by_lang: dict = field(
        default_factory=lambda: {k: {v} for k, v in DEFAULT_SCRIPTS_BY_LANG.items()}
    )
    transliterate: bool = False
    normalization: NormalizeOptions = NormalizeOptions()
    keep_danda: bool = False

    def __post_init__(self):
        self.allowed_scripts_by_lang = {
            lang: {ScriptTag(s) for s in scripts}
            for lang, scripts in self.allowed_scripts_by_lang.items()
        }
        for lang, scripts in self.allowed_scripts_by_lang.items():
            if not scripts:
                raise ValueError(f"language {lang!r} has an empty script set")

    @classmethod
    def from_dict(cls, data: dict) -> FilterConfig:
        """Build from the ``filter --config`` JSON layout.

        ``{"languages": {"hi": ["Devanagari"], ...}, "transliterate": true,
        "normalization": {"decompose_nukta": false}, "keep_danda": false}``.
        Omitted ``languages`` fall back to the 14-language default table.
        """
        kwargs = {}
        if "languages" in data:
            langs = {}
            for lang, scripts in data["languages"].items():
                if isinstance(scripts, str):
                    scripts = [scripts]
                langs[lang] = set(scripts)
            kwargs["allowed_scripts_by_lang"] = langs
        if "transliterate" in data:
            kwargs["transliterate"] = bool(data["transliterate"])
        if "normalization" in data:
            kwargs["normalization"] = NormalizeOptions(**data["normalization"])
        if "keep_danda" in data:
            kwargs["keep_danda"] = bool(data["keep_danda"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "languages": {
                lang: sorted(s.value for s in scripts)
                for lang, scripts in sorted(self.allowed_scripts_by_lang.items())
            },
            "transliterate": self.transliterate,
            "normalization": {"decompose_nukta": self.normalization.decompose_nukta},
            "keep_danda": self.keep_danda,
        }


# ---------------------------------------------------------------------------
# normalisation
# ---------------------------------------------------------------------------

_HSPACE = re.compile(r"[^\S\n]+")
_SPACE_AROUND_NL = re.compile(r" ?\n ?")

# Nukta letters that NFC keeps precomposed.
_NUKTA_DECOMPOSE = {
    "\u0929": "\u0928\u093c",
    "\u0931": "\u0930\u093c",
    "\u0934": "\u0933\u093c",
}
_NUKTA_TABLE = str.maketrans(_NUKTA_DECOMPOSE)


def _strip_controls(text):
    return "".join(
        c for c in text if c in "\n\t" or unicodedata.category(c) != "Cc"
    )


def normalize(text: str, options: NormalizeOptions = NormalizeOptions()) -> str:
    # controls go first so their removal cannot expose a composable pair
    text = _strip_controls(text)
    text = unicodedata.normalize("NFC", text)
    text = _HSPACE.sub(" ", text)
    text = _SPACE_AROUND_NL.sub("\n", text).strip(" ")
    if options.decompose_nukta:
        text = text.translate(_NUKTA_TABLE)
    return text


# ---------------------------------------------------------------------------
# filtering
# ---------------------------------------------------------------------------


def filter_document(doc: CorpusDocument, cfg: FilterConfig) -> DropReason | None:
    """``None`` to keep the document, otherwise why it is dropped."""
    try:
        allowed = cfg.allowed_scripts_by_lang[doc.lang]
    except KeyError:
        raise UnknownLanguageError(doc.lang) from None
    tag = dominant_script(doc.text)
    if tag is None:
        return DropReason.NO_SCRIPTFUL_TEXT
    if tag not in allowed:
        return DropReason.SCRIPT_MISMATCH
    return None


@dataclass
class LanguageCounts:
    ingested: int = 0
    dropped_script_mismatch: int = 0
    dropped_empty: int = 0
    emitted: int = 0

    def reconciles(self) -> bool:
        return self.ingested == (
            self.dropped_script_mismatch + self.dropped_empty + self.emitted
        )


@dataclass
class PipelineReport:
    per_language: dict = field(default_factory=lambda: defaultdict(LanguageCounts))
    records_read: int = 0
    malformed: int = 0
    errors: list = field(default_factory=list)
    bytes_in: int = 0
    bytes_out: int = 0
    transliteration: TransliterationReport = field(
        default_factory=TransliterationReport
    )
    config: dict = field(default_factory=dict)

    # only the first few error messages are kept verbatim
    max_errors: int = 100

    def record_error(self, err: MalformedRecordError):
        self.malformed += 1
        if len(self.errors) < self.max_errors:
            self.errors.append(str(err))

    @property
    def malformed_fraction(self) -> float:
        return self.malformed / self.records_read if self.records_read else 0.0

    def reconciles(self) -> bool:
        return all(c.reconciles() for c in self.per_language.values())

    def merge(self, other: PipelineReport) -> PipelineReport:
        for lang, c in other.per_language.items():
            mine = self.per_language[lang]
            mine.ingested += c.ingested
            mine.dropped_script_mismatch += c.dropped_script_mismatch
            mine.dropped_empty += c.dropped_empty
            mine.emitted += c.emitted
        self.records_read += other.records_read
        self.malformed += other.malformed
        self.errors.extend(other.errors[: max(0, self.max_errors - len(self.errors))])
        self.bytes_in += other.bytes_in
        self.bytes_out += other.bytes_out
        self.transliteration.merge(other.transliteration)
        return self

    def to_dict(self) -> dict:
        return {
            "normalizer": NORMALIZER_NOTE,
            "config": self.config,
            "records_read": self.records_read,
            "malformed": self.malformed,
            "errors": self.errors,
            "per_language": {
                lang: {
                    "ingested": c.ingested,
                    "dropped_script_mismatch": c.dropped_script_mismatch,
                    "dropped_empty": c.dropped_empty,
                    "emitted": c.emitted,
                }
                for lang, c in sorted(self.per_language.items())
            },
            "bytes_in": self.bytes_in,
            "bytes_out": self.bytes_out,
            "transliteration": self.transliteration.to_dict(),
        }


def _parse_record(raw, index) -> CorpusDocument:
    if isinstance(raw, CorpusDocument):
        return raw
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except ValueError as e:
            raise MalformedRecordError(index, f"invalid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise MalformedRecordError(index, "record is not a JSON object")
    for key in ("id", "lang", "text"):
        if not isinstance(raw.get(key), str):
            raise MalformedRecordError(index, f"missing or non-string field {key!r}")
    if not raw["id"]:
        raise MalformedRecordError(index, "empty id")
    return CorpusDocument(raw["id"], raw["lang"], raw["text"])


class CorpusPipeline:
    """Filter, normalise and optionally transliterate a document stream.

    Iterate :meth:`process` to pull emitted documents; counts accumulate in
    :attr:`report` as the stream is consumed. Output order follows input
    order. ``on_drop(index, doc, reason)`` is called for every dropped
    document.
    """

    def __init__(
        self,
        cfg: FilterConfig,
        on_drop: Callable | None = None,
    ):
        self.cfg = cfg
        self.on_drop = on_drop
        self.report = PipelineReport(config=cfg.to_dict())
        self._seen_ids = set()

    def _handle(self, index, raw):
        report = self.report
        report.records_read += 1
        try:
            doc = _parse_record(raw, index)
            if doc.lang not in self.cfg.allowed_scripts_by_lang:
                raise MalformedRecordError(index, f"unknown language {doc.lang!r}")
            if doc.id in self._seen_ids:
                raise MalformedRecordError(index, f"duplicate id {doc.id!r}")
        except MalformedRecordError as err:
            report.record_error(err)
            return None
        self._seen_ids.add(doc.id)
        counts = report.per_language[doc.lang]
        counts.ingested += 1
        report.bytes_in += len(doc.text.encode("utf-8"))

        reason = filter_document(doc, self.cfg)
        if reason is None:
            text = normalize(doc.text, self.cfg.normalization)
            if self.cfg.transliterate:
                text, trep = transliterate_auto(text, keep_danda=self.cfg.keep_danda)
                report.transliteration.merge(trep)
            if not text:
                reason = DropReason.NO_SCRIPTFUL_TEXT
        if reason is not None:
            if reason is DropReason.SCRIPT_MISMATCH:
                counts.dropped_script_mismatch += 1
            else:
                counts.dropped_empty += 1
            if self.on_drop is not None:
                self.on_drop(index, doc, reason)
            return None
        counts.emitted += 1
        report.bytes_out += len(text.encode("utf-8"))
        return CorpusDocument(doc.id, doc.lang, text)

    def process(self, records: Iterable) -> Iterator[CorpusDocument]:
        for index, raw in enumerate(records):
            out = self._handle(index, raw)
            if out is not None:
                yield out


def process_corpus(
    records: Iterable, cfg: FilterConfig, on_drop: Callable | None = None
) -> tuple[list, PipelineReport]:
    """Run the whole stream eagerly; returns ``(emitted_docs, report)``."""
    pipeline = CorpusPipeline(cfg, on_drop=on_drop)
    docs = list(pipeline.process(records))
    return docs, pipeline.report


def transliterated_config(cfg: FilterConfig) -> FilterConfig:
    """Config accepting this pipeline's own transliterated output.

    Each language additionally allows Latin, so re-running the pipeline on
    romanised text is a no-op.
    """
    return FilterConfig(
        allowed_scripts_by_lang={
            lang: set(s) | {ScriptTag.LATIN}
            for lang, s in cfg.allowed_scripts_by_lang.items()
        },
        transliterate=cfg.transliterate,
        normalization=cfg.normalization,
        keep_danda=cfg.keep_danda,
    )

