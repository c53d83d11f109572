"""Linear centered kernel alignment between per-layer sentence representations."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "CkaError",
    "ActivationMatrix",
    "CkaTable",
    "POOLINGS",
    "center_columns",
    "linear_cka",
    "pairwise_layer_cka",
    "average_per_language",
    "pool_tokens",
    "load_manifest",
]

POOLINGS = ("mean", "first-token")


class CkaError(ValueError):
    pass


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.float64)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise CkaError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class ActivationMatrix:
    language: str
    layer: int
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = _as_matrix(self.data)
        if not np.isfinite(data).all():
            raise CkaError(f"{self.language} layer {self.layer}: non-finite entries")
        if self.layer < 0:
            raise CkaError("layer index must be non-negative")
        object.__setattr__(self, "data", data)

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]


def center_columns(m) -> np.ndarray:
    """Subtract each column's mean."""
    a = _as_matrix(m)
    if a.shape[0] < 2:
        raise CkaError("centering needs at least two rows")
    return a - a.mean(axis=0, keepdims=True)


def _fro_sq(a: np.ndarray) -> float:
    return math.fsum((a * a).ravel().tolist())


def linear_cka(x, y) -> float:
    """``||Y^T X||_F^2 / (||X^T X||_F ||Y^T Y||_F)`` on column-centered inputs."""
    x, y = _as_matrix(x), _as_matrix(y)
    if x.shape[0] != y.shape[0]:
        raise CkaError(f"row counts differ: {x.shape[0]} vs {y.shape[0]}")
    xc, yc = center_columns(x), center_columns(y)
    if not xc.any() or not yc.any():
        raise CkaError("degenerate input: a matrix is constant after centering")
    num = _fro_sq(yc.T @ xc)
    den = math.sqrt(_fro_sq(xc.T @ xc)) * math.sqrt(_fro_sq(yc.T @ yc))
    if den == 0.0:
        raise CkaError("degenerate input: zero normalizer")
    return num / den


@dataclass
class CkaTable:
    """Scores keyed by ``(language_a, language_b, layer)`` with ``a < b``."""

    scores: dict = field(default_factory=dict)
    gaps: list = field(default_factory=list)

    @staticmethod
    def _key(a, b, layer):
        return (a, b, layer) if a <= b else (b, a, layer)

    def get(self, a: str, b: str, layer: int) -> float:
        if a == b:
            return 1.0
        return self.scores[self._key(a, b, layer)]

    def __len__(self):
        return len(self.scores)

    @property
    def languages(self) -> list:
        return sorted({lang for a, b, _ in self.scores for lang in (a, b)})

    @property
    def layers(self) -> list:
        return sorted({layer for *_, layer in self.scores})

    def to_dict(self) -> dict:
        averages = average_per_language(self) if self.scores else {}
        return {
            "scores": [
                {"language_a": a, "language_b": b, "layer": k, "cka": v}
                for (a, b, k), v in sorted(self.scores.items())
            ],
            "gaps": [
                {"language_a": a, "language_b": b, "layer": k} for a, b, k in self.gaps
            ],
            "per_language_average": [
                {"language": lang, "layer": k, "mean": m, "partners": n}
                for (lang, k), (m, n) in sorted(averages.items())
            ],
        }


def pairwise_layer_cka(activations: Iterable[ActivationMatrix]) -> CkaTable:
    """CKA for every unordered language pair at every layer both provide.

    A layer present for only one language of a pair is listed in ``gaps``.
    """
    by_lang = defaultdict(dict)
    n_rows = None
    for act in activations:
        if act.layer in by_lang[act.language]:
            raise CkaError(f"duplicate matrix for {act.language} layer {act.layer}")
        if n_rows is None:
            n_rows = act.n_rows
        elif act.n_rows != n_rows:
            raise CkaError(
                f"{act.language} layer {act.layer} has {act.n_rows} rows, expected {n_rows}"
            )
        by_lang[act.language][act.layer] = act.data
    table = CkaTable()
    for a, b in itertools.combinations(sorted(by_lang), 2):
        la, lb = by_lang[a], by_lang[b]
        for layer in sorted(set(la) | set(lb)):
            if layer in la and layer in lb:
                table.scores[(a, b, layer)] = linear_cka(la[layer], lb[layer])
            else:
                table.gaps.append((a, b, layer))
    return table


def average_per_language(table: CkaTable) -> dict:
    """``{(language, layer): (mean over partners, partner count)}``."""
    if not table.scores:
        raise CkaError("empty CKA table")
    acc = defaultdict(list)
    for (a, b, layer), v in table.scores.items():
        acc[(a, layer)].append(v)
        acc[(b, layer)].append(v)
    return {k: (math.fsum(v) / len(v), len(v)) for k, v in sorted(acc.items())}


def averages_to_tsv(averages: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(("language", "layer", "mean_cka", "partners"))
    for (lang, layer), (mean, n) in sorted(averages.items()):
        w.writerow((lang, layer, repr(mean), n))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# activation files
# ---------------------------------------------------------------------------


def pool_tokens(sentence_index: np.ndarray, states: np.ndarray, n_sentences: int, pooling: str = "mean") -> np.ndarray:
    """Collapse token rows to one row per sentence.

    ``sentence_index[i]`` names the sentence that token row ``i`` belongs to.
    Padding rows are simply absent from the file. Token rows of a sentence
    are taken in file order, so ``first-token`` picks the first listed row.
    """
    if pooling not in POOLINGS:
        raise ValueError(f"unknown pooling {pooling!r}; choose from {', '.join(POOLINGS)}")
    idx = np.asarray(sentence_index, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n_sentences):
        raise CkaError("sentence index out of range")
    counts = np.bincount(idx, minlength=n_sentences)
    if (counts == 0).any():
        missing = np.flatnonzero(counts == 0)[:5].tolist()
        raise CkaError(f"sentences without token rows: {missing}")
    if pooling == "first-token":
        _, first = np.unique(idx, return_index=True)
        return states[first]
    sums = np.zeros((n_sentences, states.shape[1]))
    np.add.at(sums, idx, states)
    return sums / counts[:, None]


def _read_csv_matrix(path: Path) -> np.ndarray:
    a = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return a


@dataclass
class Manifest:
    languages: list
    layers: list
    n_sentences: int
    sentence_ids: list
    pooled: bool = True
    files: dict = field(default_factory=dict)
    root: Path = Path(".")

    def path_for(self, language: str, layer: int) -> Path:
        name = self.files.get(language, {}).get(str(layer), f"{language}_layer{layer}.csv")
        return self.root / name

    def to_dict(self) -> dict:
        return {
            "languages": self.languages,
            "layers": self.layers,
            "n_sentences": self.n_sentences,
            "pooled": self.pooled,
        }


def read_manifest(path) -> Manifest:
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    try:
        m = Manifest(
            languages=list(data["languages"]),
            layers=[int(k) for k in data["layers"]],
            n_sentences=int(data["n_sentences"]),
            sentence_ids=list(data["sentence_ids"]),
            pooled=bool(data.get("pooled", True)),
            files=data.get("files", {}),
            root=path.parent,
        )
    except KeyError as exc:
        raise CkaError(f"manifest lacks field {exc.args[0]!r}") from None
    if len(m.sentence_ids) != m.n_sentences:
        raise CkaError("sentence_ids length differs from n_sentences")
    if len(set(m.sentence_ids)) != m.n_sentences:
        raise CkaError("sentence_ids are not unique")
    return m


def load_manifest(path, pooling: str = "mean") -> tuple:
    """Load every available activation file named by a manifest.

    Returns ``(matrices, manifest)``. Pooled files hold one CSV row per
    sentence in manifest order. Unpooled files hold token rows whose first
    column is the sentence's position in the manifest. Missing files are
    skipped and later show up as table gaps.
    """
    m = read_manifest(path)
    mats = []
    for lang in m.languages:
        for layer in m.layers:
            p = m.path_for(lang, layer)
            if not p.exists():
                continue
            raw = _read_csv_matrix(p)
            if m.pooled:
                data = raw
            else:
                data = pool_tokens(raw[:, 0], raw[:, 1:], m.n_sentences, pooling)
            if data.shape[0] != m.n_sentences:
                raise CkaError(f"{p}: {data.shape[0]} rows, manifest says {m.n_sentences}")
            mats.append(ActivationMatrix(lang, layer, data))
    return mats, m
