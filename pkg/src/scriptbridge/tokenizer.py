"""Word-piece BPE trainer, greedy tokenizer and tokenizer-quality metrics."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import normalize
from .kernels import apply_merge, pair_counts

__all__ = [
    "CONTINUATION_MARKER",
    "UNK_PIECE",
    "EmptyCorpusError",
    "VocabTooSmallError",
    "SubwordVocab",
    "TokenizedWord",
    "TokenizerStats",
    "iter_words",
    "train_bpe",
    "tokenize_word",
    "detokenize",
    "tokenizer_stats",
    "fertility",
    "unbroken_ratio",
    "cloze_word_score",
    "required_mask_count",
]

CONTINUATION_MARKER = "##"
UNK_PIECE = "[UNK]"


class EmptyCorpusError(ValueError):
    pass


class VocabTooSmallError(ValueError):
    def __init__(self, vocab_size: int, codepoints: int):
        super().__init__(
            f"vocab_size {vocab_size} is smaller than the {codepoints} "
            f"distinct codepoints in the corpus"
        )
        self.vocab_size = vocab_size
        self.codepoints = codepoints


class SubwordVocab:
    """Pieces with dense integer ids.

    Word-initial pieces are bare strings; word-internal pieces carry the
    continuation marker as a prefix.
    """

    def __init__(self, pieces: Sequence[str], continuation_marker: str = CONTINUATION_MARKER):
        if not continuation_marker:
            raise ValueError("continuation marker must be non-empty")
        self.continuation_marker = continuation_marker
        self._pieces = list(pieces)
        self.piece_ids = {p: i for i, p in enumerate(self._pieces)}
        if len(self.piece_ids) != len(self._pieces):
            raise ValueError("duplicate pieces in vocabulary")
        if UNK_PIECE in self.piece_ids:
            raise ValueError(f"{UNK_PIECE} is reserved")
        # an upper bound on the unmarked length of any piece
        self._max_len = max(map(len, self._pieces), default=0)

    @property
    def pieces(self) -> list:
        return list(self._pieces)

    @property
    def max_piece_len(self) -> int:
        return self._max_len

    def __len__(self):
        return len(self._pieces)

    def __contains__(self, piece):
        return piece in self.piece_ids

    def piece(self, idx: int) -> str:
        return self._pieces[idx]

    def with_pieces(self, extra: Iterable[str]) -> SubwordVocab:
        new = [p for p in extra if p not in self.piece_ids]
        return SubwordVocab(self._pieces + list(dict.fromkeys(new)), self.continuation_marker)

    def to_dict(self) -> dict:
        return {"continuation_marker": self.continuation_marker, "pieces": self.pieces}

    @classmethod
    def from_dict(cls, data: dict) -> SubwordVocab:
        return cls(data["pieces"], data.get("continuation_marker", CONTINUATION_MARKER))

    def save(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), ensure_ascii=False, indent=1) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path) -> SubwordVocab:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def __eq__(self, other):
        if not isinstance(other, SubwordVocab):
            return NotImplemented
        return (self._pieces, self.continuation_marker) == (
            other._pieces,
            other.continuation_marker,
        )

    def __repr__(self):
        return f"SubwordVocab({len(self)} pieces, marker={self.continuation_marker!r})"


def iter_words(lines: Iterable[str]):
    """Whitespace-delimited words of each normalized line."""
    for line in lines:
        yield from normalize(line).split()


def _count_words(corpus) -> Counter:
    if isinstance(corpus, str):
        corpus = corpus.splitlines()
    return Counter(iter_words(corpus))


def train_bpe(corpus, vocab_size: int, continuation_marker: str = CONTINUATION_MARKER) -> SubwordVocab:
    """Train a word-piece BPE vocabulary.

    ``corpus`` is a string or an iterable of lines. The starting alphabet is
    every codepoint in both its word-initial and marked form. Merges repeat
    on the most frequent adjacent pair until the vocabulary holds
    ``vocab_size`` pieces or no pair occurs twice. Count ties go to the
    lexicographically smallest ``(left, right)`` pair of piece strings.
    """
    if vocab_size < 1:
        raise ValueError("vocab_size must be positive")
    marker = continuation_marker
    words = _count_words(corpus)
    alphabet = sorted({c for w in words for c in w})
    if vocab_size < len(alphabet):
        raise VocabTooSmallError(vocab_size, len(alphabet))

    pieces = sorted({c for c in alphabet} | {marker + c for c in alphabet})
    ids = {p: i for i, p in enumerate(pieces)}
    if not words:
        return SubwordVocab(pieces, marker)

    word_list = sorted(words)
    freqs = np.array([words[w] for w in word_list], dtype=np.int64)
    syms = np.fromiter(
        (ids[c if k == 0 else marker + c] for w in word_list for k, c in enumerate(w)),
        dtype=np.int64,
    )
    word_of = np.repeat(
        np.arange(len(word_list), dtype=np.int64), [len(w) for w in word_list]
    )

    # Alphabet pieces never seen in marked / unmarked position still count
    # towards the size; stop as soon as the target is reached.
    while len(pieces) < vocab_size:
        base = max(len(pieces), 1)
        keys, counts = pair_counts(syms, word_of, freqs, base)
        if counts.shape[0] == 0:
            break
        best = counts.max()
        if best < 2:
            break
        tied = keys[counts == best]
        left, right = min(
            (divmod(int(k), base) for k in tied),
            key=lambda lr: (pieces[lr[0]], pieces[lr[1]]),
        )
        merged = pieces[left] + pieces[right][len(marker):]
        new_id = ids.get(merged)
        if new_id is None:
            new_id = len(pieces)
            pieces.append(merged)
            ids[merged] = new_id
        syms, word_of = apply_merge(syms, word_of, left, right, new_id)

    return SubwordVocab(pieces, marker)


@dataclass(frozen=True)
class TokenizedWord:
    word: str
    pieces: tuple
    unk_count: int = 0

    @property
    def has_unk(self) -> bool:
        return self.unk_count > 0

    @property
    def unbroken(self) -> bool:
        return len(self.pieces) == 1 and not self.unk_count

    def __len__(self):
        return len(self.pieces)


def tokenize_word(word: str, vocab: SubwordVocab) -> TokenizedWord:
    """Greedy longest-match split of one word.

    A codepoint with no matching piece becomes :data:`UNK_PIECE`.
    """
    marker = vocab.continuation_marker
    known = vocab.piece_ids
    out = []
    unk = 0
    pos, n = 0, len(word)
    while pos < n:
        prefix = "" if pos == 0 else marker
        for length in range(min(vocab.max_piece_len, n - pos), 0, -1):
            cand = prefix + word[pos : pos + length]
            if cand in known:
                out.append(cand)
                pos += length
                break
        else:
            out.append(UNK_PIECE)
            unk += 1
            pos += 1
    return TokenizedWord(word, tuple(out), unk)


def detokenize(pieces: Sequence[str], continuation_marker: str = CONTINUATION_MARKER) -> str:
    """Inverse of :func:`tokenize_word` for UNK-free piece lists."""
    cut = len(continuation_marker)
    return "".join(p if i == 0 else p[cut:] for i, p in enumerate(pieces))


@dataclass(frozen=True)
class TokenizerStats:
    words: int
    pieces: int
    unbroken_words: int
    unk_words: int

    @property
    def fertility(self) -> float:
        return self.pieces / self.words

    @property
    def unbroken_ratio(self) -> float:
        return self.unbroken_words / self.words

    def to_dict(self) -> dict:
        return {
            "fertility": self.fertility,
            "unbroken_ratio": self.unbroken_ratio,
            "words": self.words,
            "pieces": self.pieces,
            "unk_words": self.unk_words,
        }


def tokenizer_stats(corpus, vocab: SubwordVocab) -> TokenizerStats:
    """Piece and word counts over a corpus (a string or iterable of lines)."""
    words = _count_words(corpus)
    if not words:
        raise EmptyCorpusError("corpus contains no words")
    n_words = n_pieces = n_unbroken = n_unk = 0
    for word, freq in words.items():
        tw = tokenize_word(word, vocab)
        n_words += freq
        n_pieces += freq * len(tw.pieces)
        n_unbroken += freq * tw.unbroken
        n_unk += freq * tw.has_unk
    return TokenizerStats(n_words, n_pieces, n_unbroken, n_unk)


def fertility(corpus, vocab: SubwordVocab) -> float:
    """Mean number of pieces per word."""
    return tokenizer_stats(corpus, vocab).fertility


def unbroken_ratio(corpus, vocab: SubwordVocab) -> float:
    """Share of words kept as one known piece."""
    return tokenizer_stats(corpus, vocab).unbroken_ratio


def cloze_word_score(piece_probabilities: Sequence[float]) -> float:
    """Probability of a multi-piece candidate word: the product over pieces.

    The product is formed exactly, so the result does not depend on order.
    """
    probs = list(piece_probabilities)
    if not probs:
        raise ValueError("need at least one piece probability")
    prod = Fraction(1)
    for p in probs:
        p = float(p)
        if not (math.isfinite(p) and 0.0 < p <= 1.0):
            raise ValueError(f"probability {p!r} outside (0, 1]")
        prod *= Fraction(p)
    return float(prod)


def required_mask_count(word: str, vocab: SubwordVocab) -> int:
    """Number of mask tokens a cloze candidate needs: one per piece.

    The word is normalized first, as in :func:`tokenizer_stats`.
    """
    return sum(len(tokenize_word(w, vocab).pieces) for w in iter_words([word]))
