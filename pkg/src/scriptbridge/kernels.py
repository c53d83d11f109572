"""Hot inner loops, each with a numba kernel and a pure-numpy twin.

The public functions dispatch on :data:`scriptbridge._accel.HAVE_NUMBA`.
Both variants are importable so tests and ``benchmarks/`` can compare them.
"""

from math import comb

import numpy as np

from ._accel import HAVE_NUMBA, njit

# Largest C(n1+n2, n1) for which int64 accumulation cannot overflow.
_INT64_SAFE_TOTAL = 2**62
# Below this many (n1 * n2) cells numpy finishes faster than a JIT compile.
_NUMBA_MIN_CELLS = 400


# ---------------------------------------------------------------------------
# Mann-Whitney U null distribution
# ---------------------------------------------------------------------------


@njit
def _u_counts_nb(n1, n2):
    umax = n1 * n2
    prev = np.zeros((n2 + 1, umax + 1), dtype=np.int64)
    for j in range(n2 + 1):
        prev[j, 0] = 1
    for i in range(1, n1 + 1):
        cur = np.zeros((n2 + 1, umax + 1), dtype=np.int64)
        cur[0, 0] = 1
        for j in range(1, n2 + 1):
            for u in range(i * j + 1):
                c = cur[j - 1, u]
                if u >= j:
                    c += prev[j, u - j]
                cur[j, u] = c
        prev = cur
    return prev[n2].copy()


def _u_counts_np(n1, n2, dtype=np.int64):
    umax = n1 * n2
    prev = np.zeros((n2 + 1, umax + 1), dtype=dtype)
    prev[:, 0] = 1
    for i in range(1, n1 + 1):
        cur = np.zeros((n2 + 1, umax + 1), dtype=dtype)
        cur[0, 0] = 1
        for j in range(1, n2 + 1):
            cur[j] = cur[j - 1]
            cur[j, j:] += prev[j, : umax + 1 - j]
        prev = cur
    return prev[n2].copy()


def u_null_counts(n1, n2):
    """Number of group arrangements giving each value of U1.

    Entry ``u`` counts the ways of choosing which ``n1`` of ``n1 + n2``
    distinct pooled ranks belong to group 1 such that exactly ``u``
    (group-1, group-2) pairs have the group-1 value larger. The entries sum
    to ``C(n1 + n2, n1)``. Returns a list of Python ints so callers can do
    exact rational arithmetic with it.
    """
    if n1 < 0 or n2 < 0:
        raise ValueError("group sizes must be non-negative")
    if comb(n1 + n2, n1) >= _INT64_SAFE_TOTAL:
        return [int(c) for c in _u_counts_np(n1, n2, dtype=object)]
    if HAVE_NUMBA and n1 * n2 >= _NUMBA_MIN_CELLS:
        counts = _u_counts_nb(n1, n2)
    else:
        counts = _u_counts_np(n1, n2)
    return [int(c) for c in counts]


# ---------------------------------------------------------------------------
# BPE merge loop
#
# A corpus of unique words is stored flat: ``syms[k]`` is the piece id at
# position k and ``word_of[k]`` the word it belongs to. ``freqs[w]`` is the
# corpus frequency of word w. Pairs are keyed as ``left * base + right``.
# ---------------------------------------------------------------------------


@njit
def _pair_counts_nb(syms, word_of, freqs, base):
    counts = dict()
    counts[np.int64(-1)] = np.int64(0)
    for k in range(syms.shape[0] - 1):
        if word_of[k] != word_of[k + 1]:
            continue
        key = np.int64(syms[k]) * base + syms[k + 1]
        w = np.int64(freqs[word_of[k]])
        if key in counts:
            counts[key] += w
        else:
            counts[key] = w
    n = len(counts) - 1
    keys = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.int64)
    m = 0
    for key, c in counts.items():
        if key >= 0:
            keys[m] = key
            vals[m] = c
            m += 1
    order = np.argsort(keys)
    return keys[order], vals[order]


def _pair_counts_np(syms, word_of, freqs, base):
    empty = np.empty(0, dtype=np.int64)
    if syms.shape[0] < 2:
        return empty, empty
    same = word_of[:-1] == word_of[1:]
    keys = (syms[:-1].astype(np.int64) * base + syms[1:])[same]
    if keys.shape[0] == 0:
        return empty, empty
    weights = freqs[word_of[:-1][same]].astype(np.int64)
    uniq, inv = np.unique(keys, return_inverse=True)
    counts = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(counts, inv, weights)
    return uniq, counts


def pair_counts(syms, word_of, freqs, base):
    """Frequency-weighted counts of adjacent in-word piece pairs.

    Returns ``(keys, counts)`` sorted by key, where a key encodes the pair
    ``(left, right)`` as ``left * base + right``.
    """
    if HAVE_NUMBA:
        return _pair_counts_nb(syms, word_of, freqs, np.int64(base))
    return _pair_counts_np(syms, word_of, freqs, base)


@njit
def _apply_merge_nb(syms, word_of, left, right, new_id):
    n = syms.shape[0]
    out_syms = np.empty(n, dtype=syms.dtype)
    out_word = np.empty(n, dtype=word_of.dtype)
    k = 0
    m = 0
    while k < n:
        if (
            k + 1 < n
            and syms[k] == left
            and syms[k + 1] == right
            and word_of[k] == word_of[k + 1]
        ):
            out_syms[m] = new_id
            out_word[m] = word_of[k]
            k += 2
        else:
            out_syms[m] = syms[k]
            out_word[m] = word_of[k]
            k += 1
        m += 1
    return out_syms[:m].copy(), out_word[:m].copy()


def _apply_merge_np(syms, word_of, left, right, new_id):
    n = syms.shape[0]
    if n < 2:
        return syms.copy(), word_of.copy()
    match = (syms[:-1] == left) & (syms[1:] == right) & (word_of[:-1] == word_of[1:])
    if left == right:
        # Runs like "a a a" match at consecutive positions; greedy
        # left-to-right keeps every other one, counted from the run start.
        idx = np.arange(n - 1)
        prev = np.concatenate(([False], match[:-1]))
        starts = np.where(match & ~prev, idx, 0)
        run_start = np.maximum.accumulate(starts)
        match &= (idx - run_start) % 2 == 0
    pos = np.flatnonzero(match)
    out_syms = syms.copy()
    out_syms[pos] = new_id
    keep = np.ones(n, dtype=bool)
    keep[pos + 1] = False
    return out_syms[keep], word_of[keep]


def apply_merge(syms, word_of, left, right, new_id):
    """Replace each non-overlapping in-word ``(left, right)`` with ``new_id``.

    Scans left to right, so ``a a a`` merged on ``(a, a)`` becomes ``aa a``.
    """
    if HAVE_NUMBA:
        return _apply_merge_nb(syms, word_of, left, right, new_id)
    return _apply_merge_np(syms, word_of, left, right, new_id)
