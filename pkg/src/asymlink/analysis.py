"""Log-binned distributions, weight-overlap relations and power-law fits."""
from __future__ import annotations

import csv
import enum
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import CoauthorGraph
from .metrics import edge_observations

__all__ = [
    "BinnedSeries",
    "PowerLawFit",
    "StrengthKind",
    "OverlapKind",
    "log_bins",
    "log_binned_distribution",
    "log_binned_mean",
    "weight_overlap_relation",
    "fit_power_law_exponent",
    "structural_distributions",
]

_EPS = 1e-9


@dataclass(frozen=True)
class BinnedSeries:
    lo: np.ndarray
    hi: np.ndarray
    y_mean: np.ndarray
    count: np.ndarray

    @property
    def x_rep(self) -> np.ndarray:
        return np.sqrt(self.lo * self.hi)

    @property
    def occupied(self) -> np.ndarray:
        return self.count > 0

    def __len__(self):
        return len(self.lo)

    def write_csv(self, path: str | Path, y_name: str = "y_mean") -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", y_name, "count"])
            for x, y, c in zip(self.x_rep, self.y_mean, self.count):
                w.writerow([repr(float(x)), repr(float(y)), int(c)])


@dataclass(frozen=True)
class PowerLawFit:
    beta: float
    intercept: float
    r2: float
    n_points: int

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["beta", "intercept", "r2", "n_points"])
            w.writerow([repr(self.beta), repr(self.intercept), repr(self.r2), self.n_points])


def _bin_index(values: np.ndarray, bins_per_decade: int) -> np.ndarray:
    # the epsilon keeps exact powers of ten on their own bin edge
    return np.floor(np.log10(values) * bins_per_decade + _EPS).astype(np.int64)


def log_bins(values, bins_per_decade: int = 10):
    """Bin index per value and the (lo, hi) edges of the contiguous bin range."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("no values to bin")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise ValueError("log binning needs finite positive values")
    if bins_per_decade < 1:
        raise ValueError("bins_per_decade must be >= 1")
    idx = _bin_index(values, bins_per_decade)
    first, last = idx.min(), idx.max()
    k = np.arange(first, last + 2)
    edges = 10.0 ** (k / bins_per_decade)
    return idx - first, edges[:-1], edges[1:]


def log_binned_distribution(values, bins_per_decade: int = 10) -> BinnedSeries:
    """Density estimate on logarithmic bins (count / (width * total))."""
    idx, lo, hi = log_bins(values, bins_per_decade)
    count = np.bincount(idx, minlength=len(lo))
    density = count / ((hi - lo) * idx.size)
    return BinnedSeries(lo, hi, density, count)


def log_binned_mean(x, y, bins_per_decade: int = 10) -> BinnedSeries:
    """Mean of ``y`` within logarithmic bins of ``x`` (NaN for empty bins)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    idx, lo, hi = log_bins(x, bins_per_decade)
    count = np.bincount(idx, minlength=len(lo))
    sums = np.bincount(idx, weights=y, minlength=len(lo))
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(count > 0, sums / np.maximum(count, 1), np.nan)
    return BinnedSeries(lo, hi, mean, count)


class StrengthKind(enum.Enum):
    W = "w"
    WSTAR = "wstar"
    V = "v"


class OverlapKind(enum.Enum):
    O = "o"
    Q = "q"


def weight_overlap_relation(g: CoauthorGraph, x_kind: StrengthKind | str = StrengthKind.V,
                            y_kind: OverlapKind | str = OverlapKind.Q,
                            bins_per_decade: int = 10) -> BinnedSeries:
    """Binned ⟨overlap⟩ as a function of tie strength.

    Symmetric combinations (w or w* against O) use one observation per
    undirected edge; as soon as either side is asymmetric each edge is seen
    from both ends.
    """
    x_kind, y_kind = StrengthKind(x_kind), OverlapKind(y_kind)
    if g.edge_count == 0:
        raise ValueError("graph has no edges")
    asymmetric = (x_kind is StrengthKind.V, y_kind is OverlapKind.Q)
    if asymmetric[0] != asymmetric[1]:
        warnings.warn(f"{x_kind.value} against {y_kind.value} mixes symmetric and asymmetric measures",
                      stacklevel=2)
    obs = edge_observations(g)
    if not any(asymmetric):
        obs = obs.undirected()
    x = {StrengthKind.W: obs.w, StrengthKind.WSTAR: obs.w_star, StrengthKind.V: obs.v}[x_kind]
    y = {OverlapKind.O: obs.O, OverlapKind.Q: obs.Q}[y_kind]
    return log_binned_mean(x, y, bins_per_decade)


def fit_power_law_exponent(series: BinnedSeries, min_count: int = 10,
                           x_min: float | None = None, x_max: float | None = None) -> PowerLawFit:
    """Least-squares slope of log ⟨y⟩ against log x over well-populated bins."""
    x, y = series.x_rep, series.y_mean
    use = (series.count >= min_count) & np.isfinite(y) & (y > 0)
    if x_min is not None:
        use &= x >= x_min
    if x_max is not None:
        use &= x <= x_max
    if use.sum() < 3:
        raise ValueError(f"need at least 3 usable bins, have {int(use.sum())}")
    lx, ly = np.log10(x[use]), np.log10(y[use])
    beta, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (beta * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    if math.isclose(beta, 0.0, abs_tol=1e-12):
        beta = 0.0
    return PowerLawFit(float(beta), float(intercept), r2, int(use.sum()))


def structural_distributions(g: CoauthorGraph, bins_per_decade: int = 10,
                             paper_sizes=None) -> dict[str, BinnedSeries]:
    """Distributions of p, k, s, w and v (plus l when paper sizes are given)."""
    obs = edge_observations(g)
    out = {}
    if paper_sizes is not None and len(paper_sizes):
        out["l"] = log_binned_distribution(paper_sizes, bins_per_decade)
    pubs = g.publications[g.publications > 0]
    active = g.degrees > 0
    for name, vals in (("p", pubs), ("k", g.degrees[active]), ("s", g.strengths[active]),
                       ("w", g.edge_weights), ("v", obs.v)):
        if len(vals):
            out[name] = log_binned_distribution(vals, bins_per_decade)
    return out
