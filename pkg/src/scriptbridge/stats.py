"""Mann-Whitney U test with exact and normal-approximation p-values.

Effect sizes follow the usual reporting for seed-level model comparisons:
the mean difference, the common-language effect size ``U1 / (n1 n2)`` and
the standardized ``r = |z| / sqrt(N)``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .kernels import u_null_counts

__all__ = [
    "Alternative",
    "PMethod",
    "TiesError",
    "DegenerateDataError",
    "SampleGroup",
    "MwuConfig",
    "MwuResult",
    "EXACT_MAX_N",
    "rank_with_ties",
    "mwu_u",
    "p_exact",
    "p_exact_fraction",
    "p_normal",
    "effect_sizes",
    "r_class",
    "compare",
    "BatchRow",
    "read_batch_tsv",
    "compare_batch",
    "batch_to_tsv",
]

# auto picks the exact method up to this many pooled observations
EXACT_MAX_N = 40
SMALL_R = 0.3
MEDIUM_R = 0.5


class Alternative(str, enum.Enum):
    TWO_SIDED = "two-sided"
    GREATER = "greater"
    LESS = "less"


class PMethod(str, enum.Enum):
    EXACT = "exact"
    NORMAL = "normal"
    AUTO = "auto"

    @classmethod
    def parse(cls, value) -> PMethod:
        if value == "normal_approx":
            return cls.NORMAL
        return cls(value)


class TiesError(ValueError):
    """Exact p requested for data with tied values."""


class DegenerateDataError(ValueError):
    """Every pooled value is identical, so the null variance is zero."""


@dataclass(frozen=True)
class SampleGroup:
    label: str
    values: tuple

    def __init__(self, label: str, values: Iterable[float]):
        vals = tuple(float(v) for v in values)
        if not vals:
            raise ValueError(f"group {label!r} is empty")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"group {label!r} has non-finite values")
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)


@dataclass(frozen=True)
class MwuConfig:
    alpha: float = 0.05
    alternative: Alternative = Alternative.TWO_SIDED
    p_method: PMethod = PMethod.AUTO

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        object.__setattr__(self, "alternative", Alternative(self.alternative))
        object.__setattr__(self, "p_method", PMethod.parse(self.p_method))


def _as_group(g, label) -> SampleGroup:
    return g if isinstance(g, SampleGroup) else SampleGroup(label, g)


def rank_with_ties(values: Sequence[float]) -> list:
    """Ascending ranks from 1, tied values sharing their mean rank."""
    if not len(values):
        raise ValueError("need at least one value")
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j hold ranks i+1..j+1
        mid = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _tie_sizes(pooled) -> list:
    return [t for t in Counter(pooled).values() if t > 1]


def mwu_u(g1, g2) -> tuple:
    """``(U1, U2)``; U1 counts group-1 wins over group-2, ties as halves."""
    g1, g2 = _as_group(g1, "group1"), _as_group(g2, "group2")
    ranks = rank_with_ties(g1.values + g2.values)
    r1 = math.fsum(ranks[: g1.n])
    u1 = r1 - g1.n * (g1.n + 1) / 2
    return u1, g1.n * g2.n - u1


def p_exact_fraction(g1, g2, alternative=Alternative.TWO_SIDED) -> Fraction:
    """Exact p-value as a rational number. Refuses tied data."""
    g1, g2 = _as_group(g1, "group1"), _as_group(g2, "group2")
    alternative = Alternative(alternative)
    if _tie_sizes(g1.values + g2.values):
        raise TiesError("exact p-value is undefined with tied values; use the normal method")
    u1 = int(round(mwu_u(g1, g2)[0]))
    counts = u_null_counts(g1.n, g2.n)
    total = sum(counts)
    lower = Fraction(sum(counts[: u1 + 1]), total)
    upper = Fraction(sum(counts[u1:]), total)
    if alternative is Alternative.GREATER:
        return upper
    if alternative is Alternative.LESS:
        return lower
    return min(Fraction(1), 2 * min(lower, upper))


def p_exact(g1, g2, alternative=Alternative.TWO_SIDED) -> float:
    return float(p_exact_fraction(g1, g2, alternative))


def _sigma(n1, n2, pooled) -> float:
    n = n1 + n2
    ties = sum(t**3 - t for t in _tie_sizes(pooled))
    var = n1 * n2 / 12 * ((n + 1) - ties / (n * (n - 1)))
    return math.sqrt(var) if var > 0 else 0.0


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2))


def p_normal(g1, g2, alternative=Alternative.TWO_SIDED) -> tuple:
    """``(z, p)`` from the normal approximation.

    Uses the tie-corrected null variance and a 0.5 continuity correction
    towards the null mean. z carries the sign of ``U1 - n1 n2 / 2``.
    """
    g1, g2 = _as_group(g1, "group1"), _as_group(g2, "group2")
    alternative = Alternative(alternative)
    pooled = g1.values + g2.values
    sigma = _sigma(g1.n, g2.n, pooled)
    if sigma == 0.0:
        raise DegenerateDataError("all pooled values are identical")
    u1, _ = mwu_u(g1, g2)
    d = u1 - g1.n * g2.n / 2
    if alternative is Alternative.TWO_SIDED:
        z = math.copysign(max(abs(d) - 0.5, 0.0), d) / sigma
        return z, min(1.0, math.erfc(abs(z) / math.sqrt(2)))
    if alternative is Alternative.GREATER:
        z = (d - 0.5) / sigma
        return z, _norm_sf(z)
    z = (d + 0.5) / sigma
    return z, _norm_sf(-z)


def r_class(r: float) -> str:
    """small for r <= 0.3, medium for r <= 0.5, large above."""
    if r <= SMALL_R:
        return "small"
    if r <= MEDIUM_R:
        return "medium"
    return "large"


def effect_sizes(g1, g2, z: float, n_total: int | None = None) -> tuple:
    """``(delta, rho, r, r_class)`` for the two groups and a z statistic."""
    g1, g2 = _as_group(g1, "group1"), _as_group(g2, "group2")
    n_total = g1.n + g2.n if n_total is None else n_total
    delta = g1.mean - g2.mean
    rho = mwu_u(g1, g2)[0] / (g1.n * g2.n)
    r = abs(z) / math.sqrt(n_total)
    return delta, rho, r, r_class(r)


@dataclass(frozen=True)
class MwuResult:
    label1: str
    label2: str
    n1: int
    n2: int
    mean1: float
    mean2: float
    u1: float
    u2: float
    z: float
    p_value: float
    p_method: str
    alternative: str
    alpha: float
    reject_h0: bool
    delta: float
    rho: float
    r: float
    r_class: str
    p_exact: float | None = None
    p_normal: float | None = None

    @property
    def n_total(self) -> int:
        return self.n1 + self.n2

    def to_dict(self) -> dict:
        return {
            "group1": {"label": self.label1, "n": self.n1, "mean": self.mean1},
            "group2": {"label": self.label2, "n": self.n2, "mean": self.mean2},
            "N": self.n_total,
            "U1": self.u1,
            "U2": self.u2,
            "z": self.z,
            "p_value": self.p_value,
            "p_method": self.p_method,
            "p_exact": self.p_exact,
            "p_normal": self.p_normal,
            "alternative": self.alternative,
            "alpha": self.alpha,
            "reject_h0": self.reject_h0,
            "delta": self.delta,
            "rho": self.rho,
            "r": self.r,
            "r_class": self.r_class,
        }


def compare(g1, g2, cfg: MwuConfig = MwuConfig()) -> MwuResult:
    """Full two-group comparison.

    ``auto`` uses the exact p-value for tie-free data with at most
    :data:`EXACT_MAX_N` pooled values and the normal approximation
    otherwise. ``r`` always comes from the normal-approximation z.
    """
    g1, g2 = _as_group(g1, "group1"), _as_group(g2, "group2")
    pooled = g1.values + g2.values
    tie_free = not _tie_sizes(pooled)
    method = cfg.p_method
    if method is PMethod.AUTO:
        method = PMethod.EXACT if tie_free and len(pooled) <= EXACT_MAX_N else PMethod.NORMAL

    pe = p_exact(g1, g2, cfg.alternative) if tie_free else None
    if method is PMethod.EXACT and pe is None:
        raise TiesError("exact p-value is undefined with tied values; use the normal method")
    # tie-free data always has a positive null variance, so this only
    # raises for all-identical data, where exact was refused above
    z, pn = p_normal(g1, g2, cfg.alternative)
    u1, u2 = mwu_u(g1, g2)
    p = pe if method is PMethod.EXACT else pn
    delta, rho, r, cls = effect_sizes(g1, g2, z)
    return MwuResult(
        label1=g1.label,
        label2=g2.label,
        n1=g1.n,
        n2=g2.n,
        mean1=g1.mean,
        mean2=g2.mean,
        u1=u1,
        u2=u2,
        z=z,
        p_value=p,
        p_method=method.value,
        alternative=cfg.alternative.value,
        alpha=cfg.alpha,
        reject_h0=p < cfg.alpha,
        delta=delta,
        rho=rho,
        r=r,
        r_class=cls,
        p_exact=pe,
        p_normal=pn,
    )


# ---------------------------------------------------------------------------
# batch mode: one row per (task, language, seed, model)
# ---------------------------------------------------------------------------

BATCH_COLUMNS = ("task", "language", "seed", "model", "metric")


@dataclass(frozen=True)
class BatchRow:
    task: str
    language: str
    seed: str
    model: str
    metric: float


def read_batch_tsv(stream) -> list:
    """Parse a tab-separated table with the columns of :data:`BATCH_COLUMNS`."""
    reader = csv.DictReader(stream, delimiter="\t")
    missing = set(BATCH_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"batch table lacks columns: {', '.join(sorted(missing))}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        try:
            metric = float(rec["metric"])
        except (TypeError, ValueError):
            raise ValueError(f"line {lineno}: metric {rec['metric']!r} is not a number") from None
        rows.append(BatchRow(rec["task"], rec["language"], rec["seed"], rec["model"], metric))
    return rows


@dataclass
class BatchOutcome:
    task: str
    language: str
    result: MwuResult | None = None
    error: str | None = None
    extra: dict = field(default_factory=dict)


def compare_batch(
    rows: Iterable[BatchRow],
    cfg: MwuConfig = MwuConfig(),
    group1: str = "uni-script",
    group2: str = "multi-script",
) -> list:
    """Run :func:`compare` per (task, language), in first-seen order."""
    cells = defaultdict(lambda: {group1: [], group2: []})
    for row in rows:
        cell = cells[(row.task, row.language)]
        if row.model in cell:
            cell[row.model].append(row.metric)
    out = []
    for (task, lang), groups in cells.items():
        o = BatchOutcome(task, lang)
        try:
            o.result = compare(
                SampleGroup(group1, groups[group1]), SampleGroup(group2, groups[group2]), cfg
            )
        except ValueError as exc:
            o.error = str(exc)
        out.append(o)
    return out


_TSV_FIELDS = (
    "task", "language", "n1", "n2", "mean1", "mean2", "delta", "U1", "z",
    "p_value", "p_method", "reject_h0", "rho", "r", "r_class", "error",
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def batch_to_tsv(outcomes: Sequence[BatchOutcome]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(_TSV_FIELDS)
    for o in outcomes:
        res = o.result
        if res is None:
            w.writerow([o.task, o.language] + [""] * (len(_TSV_FIELDS) - 3) + [o.error])
            continue
        w.writerow(
            _fmt(v)
            for v in (
                o.task, o.language, res.n1, res.n2, res.mean1, res.mean2, res.delta,
                res.u1, res.z, res.p_value, res.p_method, res.reject_h0, res.rho,
                res.r, res.r_class, None,
            )
        )
    return buf.getvalue()
