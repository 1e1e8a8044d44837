"""Per-edge local metrics: overlaps, tie strengths, edge clustering.

All functions are defined on existing edges only.  Degenerate denominators
(which only arise when the common-neighbour count is zero) yield 0.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import CoauthorGraph, common_neighbors, edge_common_counts

__all__ = [
    "EdgeObservations",
    "symmetric_overlap",
    "asymmetric_overlap",
    "newman_tie_strength",
    "asymmetric_tie_strength",
    "edge_clustering",
    "edge_observations",
    "write_edge_metrics",
]


def _require_edge(g: CoauthorGraph, i: int, j: int) -> None:
    if i == j or not g.has_edge(i, j):
        raise KeyError(f"({i}, {j}) is not an edge")


def _ratio(num, den):
    return num / den if den > 0 else 0.0


def symmetric_overlap(g: CoauthorGraph, i: int, j: int) -> float:
    """O_ij = n / ((k_i - 1) + (k_j - 1) - n)."""
    _require_edge(g, i, j)
    n = common_neighbors(g, i, j)
    return _ratio(n, g.degree(i) + g.degree(j) - 2 - n)


def asymmetric_overlap(g: CoauthorGraph, i: int, j: int) -> float:
    """Q_ij = n / (k_i - 1), the overlap seen from ``i``."""
    _require_edge(g, i, j)
    return _ratio(common_neighbors(g, i, j), g.degree(i) - 1)


def newman_tie_strength(g: CoauthorGraph, i: int, j: int) -> float:
    _require_edge(g, i, j)
    return g.edge(i, j).w_star


def asymmetric_tie_strength(g: CoauthorGraph, i: int, j: int) -> float:
    """v_ij = w_ij / p_i."""
    _require_edge(g, i, j)
    p = int(g.publications[i])
    if p <= 0:
        raise ValueError(f"node {i} has an edge but no publications")
    return g.edge(i, j).w / p


def edge_clustering(g: CoauthorGraph, i: int, j: int) -> float:
    _require_edge(g, i, j)
    return _ratio(common_neighbors(g, i, j), min(g.degree(i), g.degree(j)) - 1)


@dataclass(frozen=True)
class EdgeObservations:
    """Columnar metrics for every directed edge (both orientations of each tie)."""

    i: np.ndarray
    j: np.ndarray
    k_i: np.ndarray
    k_j: np.ndarray
    n: np.ndarray
    O: np.ndarray
    Q: np.ndarray
    C: np.ndarray
    w: np.ndarray
    w_star: np.ndarray
    v: np.ndarray
    edge: np.ndarray

    def __len__(self):
        return len(self.i)

    def undirected(self) -> "EdgeObservations":
        """One row per undirected edge (the i < j orientation)."""
        keep = self.i < self.j
        return EdgeObservations(**{k: getattr(self, k)[keep] for k in self.__dataclass_fields__})


def edge_observations(g: CoauthorGraph) -> EdgeObservations:
    """Vectorised metrics for all directed edges, in CSR order."""
    if np.any(g.publications[g.degrees > 0] <= 0):
        raise ValueError("node with an edge but no publications")
    i, j = g.rows, g.indices
    eid = g.edge_id
    n = edge_common_counts(g)[eid]
    ki, kj = g.degrees[i], g.degrees[j]
    with np.errstate(divide="ignore", invalid="ignore"):
        den_o = ki + kj - 2 - n
        O = np.where(den_o > 0, n / np.maximum(den_o, 1), 0.0)
        Q = np.where(ki > 1, n / np.maximum(ki - 1, 1), 0.0)
        cmin = np.minimum(ki, kj) - 1
        C = np.where(cmin > 0, n / np.maximum(cmin, 1), 0.0)
        v = g.weights / g.publications[i]
    return EdgeObservations(i=i, j=j, k_i=ki, k_j=kj, n=n, O=O, Q=Q, C=C, w=g.weights,
                            w_star=g.newman_weights[eid], v=v, edge=eid)


def write_edge_metrics(g: CoauthorGraph, path: str | Path) -> None:
    """``i,j,k_i,k_j,n,O,Q,w,w_star,v`` for every directed edge."""
    obs = edge_observations(g)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["i", "j", "k_i", "k_j", "n", "O", "Q", "w", "w_star", "v"])
        for row in zip(obs.i, obs.j, obs.k_i, obs.k_j, obs.n, obs.O, obs.Q, obs.w, obs.w_star, obs.v):
            out.writerow([int(row[0]), int(row[1]), int(row[2]), int(row[3]), int(row[4]),
                          repr(float(row[5])), repr(float(row[6])), int(row[7]),
                          repr(float(row[8])), repr(float(row[9]))])
