"""Balanced link-prediction evaluation: test sets, holdout scoring, ROC and PR.

A test set holds ``d`` existing links and ``d`` absent links, all of whose
endpoints share at least one neighbour.  Positives are removed from the
graph before scoring (``holdout=True``) so a pair cannot vouch for itself
through its own degree or strength.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .graph import CoauthorGraph, chunk_bounds, edge_common_counts
from .similarity import ScoreKind, parse_kinds, score_arrays

__all__ = [
    "EvaluationSet",
    "InsufficientPairsError",
    "LabeledScores",
    "ConfusionMatrix",
    "CurveResult",
    "SeedResult",
    "SummaryRow",
    "EvaluationReport",
    "qualifying_edges",
    "sample_two_hop_pairs",
    "build_balanced_set",
    "default_d",
    "holdout_scores",
    "confusion_at_threshold",
    "roc_auc",
    "pr_auc",
    "evaluate_all",
]


class InsufficientPairsError(ValueError):
    def __init__(self, d: int, positives: int, negatives: int):
        super().__init__(
            f"need {d} qualifying pairs per class; available: {positives} edges, {negatives} non-edges")
        self.available = (positives, negatives)


@dataclass(frozen=True)
class EvaluationSet:
    positives: np.ndarray
    negatives: np.ndarray
    d: int
    seed: int | None

    def pairs(self) -> np.ndarray:
        return np.concatenate((self.positives, self.negatives)).reshape(-1, 2)

    def labels(self) -> np.ndarray:
        return np.concatenate((np.ones(len(self.positives), bool), np.zeros(len(self.negatives), bool)))


def qualifying_edges(g: CoauthorGraph) -> np.ndarray:
    """Edge ids whose endpoints have a common neighbour."""
    return np.flatnonzero(edge_common_counts(g) > 0)


def sample_two_hop_pairs(g: CoauthorGraph, d: int, rng: np.random.Generator,
                         budget: int = 4_000_000) -> tuple[np.ndarray, int]:
    """Uniform sample of ``d`` non-adjacent pairs at distance two.

    Streams candidate pairs (i < j) block by block over source nodes, dedups
    within each block (a pair is only ever generated from its smaller end),
    and keeps the ``d`` smallest uniform random keys seen so far.

    Returns the sampled (d', 2) pairs, d' = min(d, total), and the total
    number of qualifying pairs.
    """
    n = g.node_count
    deg = g.degrees
    cost = np.bincount(g.rows, weights=deg[g.indices], minlength=n) if len(g.keys) else np.zeros(n)
    res_pairs = np.zeros(0, dtype=np.int64)
    res_keys = np.zeros(0)
    total = 0
    for s, e in chunk_bounds(cost, budget):
        lo, hi = g.indptr[s], g.indptr[e]
        if lo == hi:
            continue
        src = g.rows[lo:hi]
        z = g.indices[lo:hi]
        counts = deg[z]
        m = int(counts.sum())
        first = np.cumsum(counts) - counts
        pos = np.arange(m, dtype=np.int64) - np.repeat(first - g.indptr[z], counts)
        i = np.repeat(src, counts)
        j = g.indices[pos]
        keep = j > i
        cand = np.unique(i[keep] * n + j[keep])
        p = np.minimum(np.searchsorted(g.keys, cand), len(g.keys) - 1)
        cand = cand[g.keys[p] != cand]
        total += len(cand)
        if d <= 0 or not len(cand):
            continue
        keys = rng.random(len(cand))
        res_pairs = np.concatenate((res_pairs, cand))
        res_keys = np.concatenate((res_keys, keys))
        if len(res_keys) > d:
            top = np.argpartition(res_keys, d - 1)[:d]
            res_pairs, res_keys = res_pairs[top], res_keys[top]
    order = np.argsort(res_keys, kind="stable")
    picked = res_pairs[order]
    return np.stack((picked // max(n, 1), picked % max(n, 1)), axis=1), total


def default_d(g: CoauthorGraph) -> int:
    return int(min(10_000, len(qualifying_edges(g)) // 2))


def build_balanced_set(g: CoauthorGraph, d: int, seed: int | None = None) -> EvaluationSet:
    """Draw ``d`` qualifying edges and ``d`` qualifying non-edges uniformly."""
    if d < 0:
        raise ValueError("d must be non-negative")
    rng = np.random.default_rng(seed)
    if d == 0:
        empty = np.zeros((0, 2), dtype=np.int64)
        return EvaluationSet(empty, empty, 0, seed)
    edges = qualifying_edges(g)
    negatives, n_neg = sample_two_hop_pairs(g, d, rng)
    if len(edges) < d or n_neg < d:
        raise InsufficientPairsError(d, len(edges), n_neg)
    chosen = rng.choice(edges, size=d, replace=False)
    positives = g.edges[chosen]
    return EvaluationSet(positives, negatives, d, seed)


@dataclass
class LabeledScores:
    pairs: np.ndarray
    labels: np.ndarray
    values: dict[ScoreKind, np.ndarray]

    def __len__(self):
        return len(self.labels)


def holdout_scores(g: CoauthorGraph, evalset: EvaluationSet, kinds: Iterable[ScoreKind | str],
                   holdout: bool = True, workers: int | None = None) -> LabeledScores:
    """Score every member of ``evalset`` on the training graph."""
    kinds = parse_kinds(list(kinds))
    train = g.without_edges(evalset.positives) if holdout else g
    pairs = evalset.pairs()
    values = score_arrays(train, pairs, kinds, workers=workers)
    return LabeledScores(pairs, evalset.labels(), values)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def tpr(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def tnr(self) -> float:
        return self.tn / (self.tn + self.fp) if self.tn + self.fp else 0.0

    @property
    def precision(self) -> float:
        # no predicted links: precision is taken as 1
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0


def confusion_at_threshold(labels, values, threshold: float) -> ConfusionMatrix:
    """Links are predicted where ``value > threshold``."""
    labels = np.asarray(labels, dtype=bool)
    pred = np.asarray(values, dtype=float) > threshold
    tp = int(np.sum(pred & labels))
    fp = int(np.sum(pred & ~labels))
    return ConfusionMatrix(tp=tp, fp=fp, tn=int(np.sum(~labels)) - fp, fn=int(np.sum(labels)) - tp)


@dataclass(frozen=True)
class CurveResult:
    points: np.ndarray
    area: float


def _tie_groups(labels: np.ndarray, values: np.ndarray):
    """Cumulative (tp, fp) after each group of equal scores, best score first."""
    order = np.argsort(-values, kind="stable")
    v, lab = values[order], labels[order]
    ends = np.flatnonzero(np.r_[v[1:] != v[:-1], True])
    tp = np.cumsum(lab)[ends]
    fp = (ends + 1) - tp
    return tp, fp


def _check_labels(labels, values):
    labels = np.asarray(labels, dtype=bool)
    values = np.asarray(values, dtype=float)
    if labels.shape != values.shape:
        raise ValueError("labels and values differ in length")
    return labels, values


def roc_auc(labels, values) -> CurveResult:
    """ROC curve over all distinct thresholds; area by the rank statistic (ties count 1/2)."""
    labels, values = _check_labels(labels, values)
    n_pos, n_neg = int(labels.sum()), int((~labels).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative")
    ranks = rankdata(values)
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    tp, fp = _tie_groups(labels, values)
    points = np.column_stack((np.r_[0.0, fp / n_neg], np.r_[0.0, tp / n_pos]))
    return CurveResult(points, float(u / (n_pos * n_neg)))


def pr_auc(labels, values) -> CurveResult:
    """Average precision; every positive in a tie group gets the group's precision."""
    labels, values = _check_labels(labels, values)
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise ValueError("PRAUC needs at least one positive")
    tp, fp = _tie_groups(labels, values)
    precision = tp / (tp + fp)
    gained = np.diff(np.r_[0, tp])
    ap = float(np.sum(gained * precision) / n_pos)
    points = np.column_stack((tp / n_pos, precision))
    return CurveResult(points, ap)


def trapezoid_area(points: np.ndarray) -> float:
    return float(np.trapezoid(points[:, 1], points[:, 0]))


def interpolate_curve(points: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Piecewise-linear curve value on ``grid``; vertical jumps take the upper end."""
    x, y = points[:, 0], points[:, 1]
    ux, first = np.unique(x, return_index=True)
    last = np.r_[first[1:], len(x)] - 1
    a = np.clip(np.searchsorted(ux, grid, side="right") - 1, 0, len(ux) - 1)
    b = np.minimum(a + 1, len(ux) - 1)
    y_a, y_b = y[last[a]], y[first[b]]
    span = ux[b] - ux[a]
    t = np.divide(grid - ux[a], span, out=np.zeros_like(grid, dtype=float), where=span > 0)
    return np.where(grid <= ux[0], y[last[0]] if grid.size else 0, y_a + t * (y_b - y_a))


@dataclass
class SeedResult:
    seed: int
    kind: ScoreKind
    auc: float
    prauc: float
    roc: np.ndarray
    pr: np.ndarray


@dataclass(frozen=True)
class SummaryRow:
    kind: ScoreKind
    auc: float
    prauc: float
    stderr_auc: float
    stderr_prauc: float
    d: int
    seed_count: int


@dataclass
class EvaluationReport:
    rows: list[SummaryRow]
    per_seed: list[SeedResult] = field(default_factory=list)
    sets: list[EvaluationSet] = field(default_factory=list)

    def row(self, kind: ScoreKind | str) -> SummaryRow:
        (kind,) = parse_kinds([kind])
        return next(r for r in self.rows if r.kind is kind)

    def write(self, out: str | Path, grid_points: int = 101) -> None:
        """Write ``summary.csv``, ``roc.csv`` and ``pr.csv`` into ``out``."""
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "summary.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kind", "auc", "prauc", "stderr_auc", "stderr_prauc", "d", "seed_count"])
            for r in self.rows:
                w.writerow([r.kind.token, repr(r.auc), repr(r.prauc), repr(r.stderr_auc),
                            repr(r.stderr_prauc), r.d, r.seed_count])
        grid = np.linspace(0.0, 1.0, grid_points)
        for name, attr, cols in (("roc.csv", "roc", ("fpr", "tpr")), ("pr.csv", "pr", ("recall", "precision"))):
            with open(out / name, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["kind", "seed", *cols])
                for r in self.rows:
                    curves = [getattr(s, attr) for s in self.per_seed if s.kind is r.kind]
                    for s in self.per_seed:
                        if s.kind is r.kind:
                            for x, y in getattr(s, attr):
                                w.writerow([r.kind.token, s.seed, repr(float(x)), repr(float(y))])
                    if curves:
                        mean = np.mean([interpolate_curve(c, grid) for c in curves], axis=0)
                        for x, y in zip(grid, mean):
                            w.writerow([r.kind.token, "mean", repr(float(x)), repr(float(y))])


def _stderr(xs: Sequence[float]) -> float:
    return float(np.std(xs, ddof=1) / np.sqrt(len(xs))) if len(xs) > 1 else 0.0


def evaluate_all(g: CoauthorGraph, d: int | None, kinds: Iterable[ScoreKind | str],
                 seeds: Iterable[int], holdout: bool = True,
                 workers: int | None = None) -> EvaluationReport:
    """Build a balanced set per seed, score it, and average AUC/PRAUC per kind."""
    kinds = parse_kinds(list(kinds))
    seeds = list(seeds)
    if d is None:
        d = default_d(g)
    if d <= 0:
        raise ValueError("d must be positive")
    per_seed: list[SeedResult] = []
    sets = []
    if kinds:
        for seed in seeds:
            evalset = build_balanced_set(g, d, seed)
            sets.append(evalset)
            scored = holdout_scores(g, evalset, kinds, holdout=holdout, workers=workers)
            for kind in kinds:
                roc = roc_auc(scored.labels, scored.values[kind])
                pr = pr_auc(scored.labels, scored.values[kind])
                per_seed.append(SeedResult(seed, kind, roc.area, pr.area, roc.points, pr.points))
    rows = []
    for kind in kinds:
        aucs = [s.auc for s in per_seed if s.kind is kind]
        aps = [s.prauc for s in per_seed if s.kind is kind]
        rows.append(SummaryRow(kind, float(np.mean(aucs)), float(np.mean(aps)),
                               _stderr(aucs), _stderr(aps), d, len(seeds)))
    return EvaluationReport(rows, per_seed, sets)
