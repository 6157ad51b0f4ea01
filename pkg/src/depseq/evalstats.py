"""Attachment scores, label coverage, paired t-tests and result tables."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .deptree import DepTree, is_projective

PUNCT_DEPREL = "punct"


@dataclass(frozen=True)
class Metrics:
    uas: float
    las: float
    token_count: int
    tag_accuracy: Optional[float] = None

    def as_dict(self) -> dict:
        out = {"uas": self.uas, "las": self.las, "token_count": self.token_count}
        if self.tag_accuracy is not None:
            out["tag_accuracy"] = self.tag_accuracy
        return out


def attachment_counts(gold: DepTree, pred: DepTree, exclude_punct: bool = False) -> tuple[int, int, int]:
    """(tokens, correct heads, correct heads and deprels) for one sentence."""
    if gold.n != pred.n:
        raise ValueError(f"sentence length mismatch: {gold.n} vs {pred.n}")
    total = uas = las = 0
    for gh, gr, ph, pr in zip(gold.heads, gold.deprels, pred.heads, pred.deprels):
        if exclude_punct and gr == PUNCT_DEPREL:
            continue
        total += 1
        if gh == ph:
            uas += 1
            las += gr == pr
    return total, uas, las


def uas_las(gold: Sequence[DepTree], pred: Sequence[DepTree], exclude_punct: bool = False) -> Metrics:
    """UAS and LAS (percentages) over aligned corpora.

    All tokens count by default; ``exclude_punct`` skips tokens whose gold
    deprel is ``punct``.
    """
    if len(gold) != len(pred):
        raise ValueError(f"corpus length mismatch: {len(gold)} vs {len(pred)} sentences")
    total = uas = las = 0
    for g, p in zip(gold, pred):
        t, u, l = attachment_counts(g, p, exclude_punct)
        total += t
        uas += u
        las += l
    if total == 0:
        return Metrics(0.0, 0.0, 0)
    return Metrics(100.0 * uas / total, 100.0 * las / total, total)


def sentence_uas(gold: Sequence[DepTree], pred: Sequence[DepTree]) -> list[float]:
    scores = []
    for g, p in zip(gold, pred):
        t, u, _ = attachment_counts(g, p)
        scores.append(100.0 * u / t if t else 0.0)
    return scores


def label_coverage(train_labels: Iterable[Hashable], test_labels: Iterable[Hashable]) -> float:
    """Percentage of test label tokens that occur in the training inventory."""
    inventory = set(train_labels)
    test = list(test_labels)
    if not test:
        raise ValueError("empty test label set")
    return 100.0 * sum(lab in inventory for lab in test) / len(test)


def coverage_by_component(
    train_rows: Sequence[Sequence[str]],
    test_rows: Sequence[Sequence[str]],
    components: Sequence[str],
) -> dict[str, float]:
    """Coverage per component plus ``joint`` over whole label tuples."""
    out = {}
    for k, name in enumerate(components):
        out[name] = label_coverage((r[k] for r in train_rows), (r[k] for r in test_rows))
    out["joint"] = label_coverage(map(tuple, train_rows), map(tuple, test_rows))
    return out


# -- Student t distribution ------------------------------------------------


def _betacf(a: float, b: float, x: float, eps: float = 1e-15, max_iter: int = 500) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x in (0.0, 1.0):
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    if math.isinf(t):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + t * t))


@dataclass(frozen=True)
class TTest:
    t: float
    p: float
    df: int
    degenerate: bool = False

    @property
    def significant(self) -> bool:
        return not self.degenerate and self.p < 0.05


def paired_ttest(a: Sequence[float], b: Sequence[float]) -> TTest:
    """Two-sided paired t-test of ``a`` against ``b``.

    When all differences are equal the variance is zero and the statistic is
    undefined: the result has ``degenerate=True`` and NaN ``t`` and ``p``.
    """
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    k = len(a)
    if k < 2:
        raise ValueError("need at least two pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = math.fsum(diffs) / k
    var = math.fsum((d - mean) ** 2 for d in diffs) / (k - 1)
    if var == 0.0:
        return TTest(math.nan, math.nan, k - 1, degenerate=True)
    t = mean / math.sqrt(var / k)
    return TTest(t, t_two_sided_p(t, k - 1), k - 1)


def nonprojective_rate(treebank: Sequence[DepTree]) -> float:
    """Percentage of trees with at least one pair of crossing arcs."""
    if not treebank:
        raise ValueError("empty treebank")
    return 100.0 * sum(not is_projective(t) for t in treebank) / len(treebank)


# -- tables -----------------------------------------------------------------


def fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.2f}"


@dataclass
class DiffTable:
    """Mean UAS of the reference encoding per row, differences elsewhere."""

    rows: list
    columns: list[str]
    reference: str
    cells: dict  # (row, column) -> reference mean or difference

    def difference(self, row, column) -> Optional[float]:
        """Difference to the reference; zero for the reference itself."""
        if (row, column) not in self.cells:
            return None
        return 0.0 if column == self.reference else self.cells[(row, column)]

    def grid(self) -> list[list[str]]:
        out = []
        for r in self.rows:
            out.append([str(r)] + [fmt(self.cells.get((r, c))) for c in self.columns])
        return out

    def to_tsv(self, corner: str = "size") -> str:
        lines = ["\t".join([corner, *self.columns])]
        lines += ["\t".join(row) for row in self.grid()]
        return "\n".join(lines) + "\n"

    def to_markdown(self, corner: str = "size") -> str:
        return markdown_table([corner, *self.columns], self.grid())


def markdown_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def diff_table(results: Mapping[tuple, float], reference: str, encodings: Optional[Sequence[str]] = None) -> DiffTable:
    """Build a difference table from ``{(size, encoding): mean UAS}``.

    The reference column holds its own means; every other cell is
    ``mean(encoding) - mean(reference)`` and stays blank when missing.
    """
    sizes = []
    for size, _ in results:
        if size not in sizes:
            sizes.append(size)
    if encodings is None:
        encodings = []
        for _, enc in results:
            if enc not in encodings:
                encodings.append(enc)
    columns = [reference] + [e for e in encodings if e != reference]
    cells = {}
    for size in sizes:
        if (size, reference) not in results:
            raise ValueError(f"reference {reference!r} missing for size {size}")
        ref = results[(size, reference)]
        cells[(size, reference)] = ref
        for enc in columns[1:]:
            if (size, enc) in results:
                cells[(size, enc)] = round(results[(size, enc)] - ref, 10)
    return DiffTable(sizes, columns, reference, cells)
