"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba variants are compiled once before timing. Without numba
installed (or with SCRIPTBRIDGE_DISABLE_NUMBA=1) only the numpy column
is filled.
"""

import argparse
import timeit

import numpy as np

from scriptbridge import kernels
from scriptbridge._accel import HAVE_NUMBA


def _bpe_data(n_words=20_000, alphabet=40, max_len=12, seed=0):
    rng = np.random.default_rng(seed)
    lengths = rng.integers(2, max_len, size=n_words)
    syms = rng.integers(0, alphabet, size=int(lengths.sum())).astype(np.int64)
    word_of = np.repeat(np.arange(n_words, dtype=np.int64), lengths)
    freqs = rng.integers(1, 50, size=n_words).astype(np.int64)
    return syms, word_of, freqs, alphabet


def cases():
    syms, word_of, freqs, base = _bpe_data()
    yield (
        "u_null_counts(20, 20)",
        lambda: kernels._u_counts_nb(20, 20),
        lambda: kernels._u_counts_np(20, 20),
    )
    yield (
        "pair_counts 20k words",
        lambda: kernels._pair_counts_nb(syms, word_of, freqs, np.int64(base + 1)),
        lambda: kernels._pair_counts_np(syms, word_of, freqs, base + 1),
    )
    yield (
        "apply_merge 20k words",
        lambda: kernels._apply_merge_nb(syms, word_of, 3, 7, base),
        lambda: kernels._apply_merge_np(syms, word_of, 3, 7, base),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba enabled: {HAVE_NUMBA}")
    print(f"{'kernel':<26}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, nb, np_ in cases():
        t_np = min(timeit.repeat(np_, number=1, repeat=args.repeat)) * 1e3
        if HAVE_NUMBA:
            nb()  # compile
            t_nb = min(timeit.repeat(nb, number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<26}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<26}{'-':>12}{t_np:>12.3f}{'-':>10}")


if __name__ == "__main__":
    main()
