"""Local similarity scores for candidate links.

Sixteen scores are supported, all built from sums over the common
neighbourhood Γ(i) ∩ Γ(j).  They are evaluated in bulk: common neighbours of
every requested pair are enumerated at once on the CSR arrays, and each
score is a weighted ``bincount`` over the matches.

Node-level quantities (degree, strength, publications) are read from the
graph passed in; removing held-out edges is the caller's business.
"""
from __future__ import annotations

import enum
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import CoauthorGraph, chunk_bounds, common_neighbor_matches, edge_common_counts

__all__ = [
    "ScoreKind",
    "ScoredPair",
    "parse_kinds",
    "score",
    "score_batch",
    "score_arrays",
    "default_workers",
]


class ScoreKind(enum.Enum):
    CN = "cn"
    WCN = "wcn"
    JC = "jc"
    QQ = "qq"
    QA = "qa"
    RA = "ra"
    AA = "aa"
    WRA = "wra"
    AT1 = "at1"
    AT2 = "at2"
    AT3 = "at3"
    WAT1 = "wat1"
    WAT2 = "wat2"
    WAT3 = "wat3"
    MIX1 = "mix1"
    MIX2 = "mix2"

    @property
    def token(self) -> str:
        return self.value


# kinds whose formula reads common-neighbour counts of edges incident to the pair
_NEEDS_EDGE_N = {ScoreKind.AT1, ScoreKind.AT2, ScoreKind.AT3}


def parse_kinds(tokens: str | Iterable[str | ScoreKind]) -> list[ScoreKind]:
    """Turn ``"jc,aa"`` or an iterable of tokens into ScoreKinds, keeping order."""
    if isinstance(tokens, str):
        tokens = [t for t in tokens.split(",") if t.strip()]
    out = []
    for t in tokens:
        if isinstance(t, ScoreKind):
            out.append(t)
            continue
        try:
            out.append(ScoreKind(t.strip().lower()))
        except ValueError:
            valid = ", ".join(k.value for k in ScoreKind)
            raise ValueError(f"unknown score {t!r}; valid scores: {valid}") from None
    return out


@dataclass(frozen=True)
class ScoredPair:
    i: int
    j: int
    kind: ScoreKind
    value: float


def default_workers() -> int:
    env = os.environ.get("ASYMLINK_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


class _EdgeCommonCache:
    """Lazily computed n_uv per undirected edge of one graph."""

    def __init__(self, g: CoauthorGraph):
        self.g = g
        self.values = np.full(g.edge_count, -1, dtype=np.int64)

    def __call__(self, eids: np.ndarray) -> np.ndarray:
        missing = np.unique(eids[self.values[eids] < 0])
        if len(missing):
            self.values[missing] = edge_common_counts(self.g, missing)
        return self.values[eids]


def _edge_cache(g: CoauthorGraph) -> _EdgeCommonCache:
    cache = g.__dict__.get("_edge_common_cache")
    if cache is None:
        cache = _EdgeCommonCache(g)
        g.__dict__["_edge_common_cache"] = cache
    return cache


def _safe_div(num, den):
    den = np.asarray(den, dtype=float)
    return np.divide(num, den, out=np.zeros(np.broadcast(num, den).shape), where=den > 0)


def _score_chunk(g: CoauthorGraph, i: np.ndarray, j: np.ndarray,
                 kinds: Sequence[ScoreKind], mix_coef: tuple[float, float]) -> dict:
    m = len(i)
    pair, piz, pjz = common_neighbor_matches(g, i, j)
    z = g.indices[piz]

    def total(vals):
        return np.bincount(pair, weights=vals, minlength=m)

    deg = g.degrees
    n = np.bincount(pair, minlength=m).astype(float)
    ki, kj, kz = deg[i].astype(float), deg[j].astype(float), deg[z].astype(float)
    w_iz, w_jz = g.weights[piz].astype(float), g.weights[pjz].astype(float)
    pubs = g.publications.astype(float)

    if _NEEDS_EDGE_N.intersection(kinds):
        cache = _edge_cache(g)
        n_iz = cache(g.edge_id[piz]).astype(float)
        n_jz = cache(g.edge_id[pjz]).astype(float)

    memo: dict[ScoreKind, np.ndarray] = {}

    def get(kind: ScoreKind) -> np.ndarray:
        if kind in memo:
            return memo[kind]
        K = ScoreKind
        if kind is K.CN:
            r = n.copy()
        elif kind is K.WCN:
            r = total(w_iz + w_jz)
        elif kind is K.JC:
            r = _safe_div(n, ki + kj - n)
        elif kind is K.QQ:
            r = _safe_div(n, ki) + _safe_div(n, kj)
        elif kind is K.QA:
            # pendant nodes use log 2 in place of log 1
            r = n / np.log(np.maximum(ki, 2)) + n / np.log(np.maximum(kj, 2))
        elif kind is K.RA:
            r = total(1.0 / kz)
        elif kind is K.AA:
            r = total(1.0 / np.log(kz))
        elif kind is K.WRA:
            r = total((w_iz + w_jz) / g.strengths[z])
        elif kind is K.AT1:
            r = total((n_iz + n_jz) / (kz - 1))
        elif kind is K.AT2:
            r = total(_safe_div(n_iz, deg[i[pair]] - 1) + _safe_div(n_jz, deg[j[pair]] - 1))
        elif kind is K.AT3:
            r = total(_safe_div(n_iz, deg[i[pair]] - 1) + n_jz / (kz - 1))
        elif kind is K.WAT1:
            r = total((w_iz + w_jz) / pubs[z])
        elif kind is K.WAT2:
            r = total(w_iz / pubs[i[pair]] + w_jz / pubs[j[pair]])
        elif kind is K.WAT3:
            r = total(w_iz / pubs[i[pair]] + w_jz / pubs[z])
        elif kind is K.MIX1:
            r = mix_coef[0] * get(K.WAT1) + mix_coef[1] * get(K.QQ)
        elif kind is K.MIX2:
            r = mix_coef[0] * get(K.WAT1) + mix_coef[1] * get(K.QA)
        else:  # pragma: no cover
            raise ValueError(kind)
        memo[kind] = r
        return r

    return {k: get(k) for k in kinds}


def _validate_pairs(g: CoauthorGraph, i: np.ndarray, j: np.ndarray) -> None:
    n = g.node_count
    if len(i) and (min(i.min(), j.min()) < 0 or max(i.max(), j.max()) >= n):
        raise IndexError(f"node id out of range [0, {n})")
    if np.any(i == j):
        raise ValueError("a pair must consist of two distinct nodes")


def score_arrays(g: CoauthorGraph, pairs, kinds: Iterable[ScoreKind | str],
                 workers: int | None = None, budget: int = 1_000_000,
                 mix_coef: tuple[float, float] = (1.0, 1.0)) -> dict[ScoreKind, np.ndarray]:
    """Score every pair for every kind.

    Args:
        pairs: (m, 2) integer array of ordered node pairs (i, j).
        kinds: scores to compute.
        workers: thread count for chunked evaluation; output order never
            depends on it.
        budget: approximate neighbour-list entries expanded per chunk.
        mix_coef: coefficients (a, b) of ``a * WAT1 + b * QQ/QA`` for MIX1/MIX2.

    Returns:
        mapping kind -> float array of length m.
    """
    kinds = parse_kinds(list(kinds))
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    i, j = pairs[:, 0], pairs[:, 1]
    _validate_pairs(g, i, j)
    if not len(pairs):
        return {k: np.zeros(0) for k in kinds}
    workers = workers or default_workers()
    cost = np.minimum(g.degrees[i], g.degrees[j]) + 1
    bounds = list(chunk_bounds(cost, budget))
    if _NEEDS_EDGE_N.intersection(kinds):
        _edge_cache(g)  # create before threads race to attach it

    def run(b):
        s, e = b
        return _score_chunk(g, i[s:e], j[s:e], kinds, mix_coef)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    return {k: np.concatenate([p[k] for p in parts]) for k in kinds}


def score(g: CoauthorGraph, i: int, j: int, kind: ScoreKind | str,
          mix_coef: tuple[float, float] = (1.0, 1.0)) -> float:
    """Similarity of the ordered pair (i, j)."""
    (kind,) = parse_kinds([kind])
    return float(score_arrays(g, [[i, j]], [kind], workers=1, mix_coef=mix_coef)[kind][0])


def score_batch(g: CoauthorGraph, pairs, kind: ScoreKind | str,
                workers: int | None = None) -> list[ScoredPair]:
    (kind,) = parse_kinds([kind])
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    values = score_arrays(g, pairs, [kind], workers=workers)[kind]
    return [ScoredPair(int(a), int(b), kind, float(v)) for (a, b), v in zip(pairs, values)]
