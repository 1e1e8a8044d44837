"""Immutable weighted coauthorship graph backed by CSR arrays.

Every undirected edge carries its joint-paper count ``w`` and the sorted
multiset of author counts of those joint papers, so that the Newman weight
can be recomputed exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "PaperRecord",
    "EdgeData",
    "CoauthorGraph",
    "build_from_papers",
    "from_author_lists",
    "common_neighbors",
    "common_neighbor_matches",
    "edge_common_counts",
    "largest_component",
]


@dataclass(frozen=True)
class PaperRecord:
    """One publication. Duplicate author names are dropped, first occurrence wins."""

    paper_id: str
    authors: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "authors", tuple(dict.fromkeys(self.authors)))


@dataclass(frozen=True)
class EdgeData:
    w: int
    paper_sizes: tuple[int, ...]

    @property
    def w_star(self) -> float:
        return sum(1.0 / (l - 1) for l in self.paper_sizes)


@dataclass(frozen=True, eq=False)
class CoauthorGraph:
    """Weighted undirected graph in CSR layout.

    ``indices[indptr[i]:indptr[i+1]]`` are the neighbours of ``i`` in ascending
    order; ``weights`` and ``edge_id`` are aligned with ``indices``.  Per-edge
    paper sizes live in a ragged array addressed by undirected edge id.
    """

    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    edge_id: np.ndarray
    size_ptr: np.ndarray
    sizes: np.ndarray
    publications: np.ndarray
    names: tuple[str, ...] | None = field(default=None)

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.size_ptr) - 1

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def strengths(self) -> np.ndarray:
        return np.bincount(self.rows, weights=self.weights, minlength=self.node_count).astype(np.int64)

    @cached_property
    def rows(self) -> np.ndarray:
        return np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)

    @cached_property
    def keys(self) -> np.ndarray:
        """Globally sorted ``row * N + col`` for every CSR entry."""
        return self.rows * self.node_count + self.indices

    @cached_property
    def reverse(self) -> np.ndarray:
        """Position of the (j, i) entry for every (i, j) entry."""
        return np.searchsorted(self.keys, self.indices * self.node_count + self.rows)

    @cached_property
    def edges(self) -> np.ndarray:
        """(E, 2) array of undirected edges with u < v, indexed by edge id."""
        out = np.empty((self.edge_count, 2), dtype=np.int64)
        upper = self.rows < self.indices
        out[self.edge_id[upper], 0] = self.rows[upper]
        out[self.edge_id[upper], 1] = self.indices[upper]
        return out

    @cached_property
    def edge_weights(self) -> np.ndarray:
        out = np.empty(self.edge_count, dtype=np.int64)
        out[self.edge_id] = self.weights
        return out

    @cached_property
    def newman_weights(self) -> np.ndarray:
        """w* per undirected edge."""
        if self.edge_count == 0:
            return np.zeros(0)
        inv = 1.0 / (self.sizes - 1)
        return np.add.reduceat(inv, self.size_ptr[:-1])

    def _check(self, i: int) -> None:
        if not 0 <= i < self.node_count:
            raise IndexError(f"node id {i} out of range [0, {self.node_count})")

    def neighbors(self, i: int) -> np.ndarray:
        self._check(i)
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degree(self, i: int) -> int:
        self._check(i)
        return int(self.degrees[i])

    def strength(self, i: int) -> int:
        self._check(i)
        return int(self.strengths[i])

    def position(self, i: int, j: int) -> int:
        """CSR position of entry (i, j), or -1 when i and j are not adjacent."""
        self._check(i)
        self._check(j)
        lo, hi = self.indptr[i], self.indptr[i + 1]
        p = lo + int(np.searchsorted(self.indices[lo:hi], j))
        return p if p < hi and self.indices[p] == j else -1

    def has_edge(self, i: int, j: int) -> bool:
        return self.position(i, j) >= 0

    def edge(self, i: int, j: int) -> EdgeData:
        p = self.position(i, j)
        if p < 0:
            raise KeyError(f"({i}, {j}) is not an edge")
        e = self.edge_id[p]
        sizes = self.sizes[self.size_ptr[e]:self.size_ptr[e + 1]]
        return EdgeData(int(self.weights[p]), tuple(int(s) for s in sizes))

    def node_id(self, name: str) -> int:
        if self.names is None:
            raise KeyError("graph has no name table")
        try:
            return self._name_index[name]
        except KeyError:
            raise KeyError(f"unknown author {name!r}") from None

    @cached_property
    def _name_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def subgraph(self, nodes: np.ndarray) -> "CoauthorGraph":
        """Induced subgraph on ``nodes``, re-indexed in ascending original order."""
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        u, v = self.edges[:, 0], self.edges[:, 1]
        keep = (remap[u] >= 0) & (remap[v] >= 0)
        names = None if self.names is None else tuple(self.names[i] for i in nodes)
        return _assemble(len(nodes), remap[u[keep]], remap[v[keep]],
                         *_select_sizes(self, np.flatnonzero(keep)),
                         self.publications[nodes], names)

    def without_edges(self, pairs: np.ndarray) -> "CoauthorGraph":
        """Copy with the given node pairs' edges deleted; publication counts unchanged."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        drop = np.zeros(self.edge_count, dtype=bool)
        if len(pairs):
            keys = pairs[:, 0] * self.node_count + pairs[:, 1]
            p = np.searchsorted(self.keys, keys)
            p = np.minimum(p, len(self.keys) - 1)
            if not np.all(self.keys[p] == keys):
                raise KeyError("some pairs to remove are not edges")
            drop[self.edge_id[p]] = True
        keep = np.flatnonzero(~drop)
        return _assemble(self.node_count, self.edges[keep, 0], self.edges[keep, 1],
                         *_select_sizes(self, keep), self.publications, self.names)

    def to_csr(self) -> csr_matrix:
        n = self.node_count
        return csr_matrix((self.weights, self.indices, self.indptr), shape=(n, n))

    def check_invariants(self) -> None:
        """Raise AssertionError on any broken structural invariant."""
        n = self.node_count
        assert self.indptr[0] == 0 and np.all(np.diff(self.indptr) >= 0)
        assert np.all(self.indices != self.rows), "self-loop"
        assert np.all(np.diff(self.keys) > 0), "rows not sorted / duplicate"
        assert np.array_equal(self.reverse[self.reverse], np.arange(len(self.keys)))
        assert np.array_equal(self.weights, self.weights[self.reverse])
        assert np.array_equal(self.edge_id, self.edge_id[self.reverse])
        counts = np.diff(self.size_ptr)
        assert np.array_equal(counts, self.edge_weights)
        assert np.all(self.sizes >= 2)
        assert np.all(self.publications[self.degrees > 0] >= 1)
        assert len(self.publications) == n


def _select_sizes(g: CoauthorGraph, keep: np.ndarray):
    counts = np.diff(g.size_ptr)[keep]
    starts = g.size_ptr[:-1][keep]
    idx = np.repeat(starts - np.concatenate(([0], np.cumsum(counts)[:-1])), counts) + np.arange(counts.sum())
    return g.edge_weights[keep], counts, g.sizes[idx]


def _assemble(n, u, v, w, size_counts, sizes, publications, names) -> CoauthorGraph:
    """Build the CSR from unique undirected edges (u < v) sorted by (u, v)."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    m = len(u)
    rows = np.concatenate((u, v))
    cols = np.concatenate((v, u))
    eid = np.concatenate((np.arange(m), np.arange(m)))
    order = np.argsort(rows * max(n, 1) + cols, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    size_ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(size_counts, out=size_ptr[1:])
    return CoauthorGraph(
        indptr=indptr,
        indices=cols[order],
        weights=np.concatenate((w, w)).astype(np.int64)[order],
        edge_id=eid[order],
        size_ptr=size_ptr,
        sizes=np.asarray(sizes, dtype=np.int64),
        publications=np.asarray(publications, dtype=np.int64),
        names=names,
    )


def from_author_lists(author_lists: Iterable[Sequence[int]], node_count: int,
                      names: tuple[str, ...] | None = None) -> CoauthorGraph:
    """Build a graph from papers given as lists of distinct integer node ids.

    Each paper with ``l`` authors adds one joint paper of size ``l`` to every
    unordered author pair and one publication to every author.
    """
    by_size: dict[int, list[Sequence[int]]] = {}
    for authors in author_lists:
        by_size.setdefault(len(authors), []).append(authors)
    pubs = np.zeros(node_count, dtype=np.int64)
    us, vs, ls = [], [], []
    for l, group in by_size.items():
        if l == 0:
            continue
        block = np.asarray(group, dtype=np.int64).reshape(-1, l)
        np.add.at(pubs, block.ravel(), 1)
        if l < 2:
            continue
        a, b = np.triu_indices(l, k=1)
        x, y = block[:, a].ravel(), block[:, b].ravel()
        us.append(np.minimum(x, y))
        vs.append(np.maximum(x, y))
        ls.append(np.full(len(x), l, dtype=np.int64))
    if not us:
        return _assemble(node_count, [], [], np.zeros(0, np.int64), np.zeros(0, np.int64),
                         np.zeros(0, np.int64), pubs, names)
    u, v, l = np.concatenate(us), np.concatenate(vs), np.concatenate(ls)
    if np.any(u == v):
        raise ValueError("author list contains a duplicate node id")
    key = u * node_count + v
    order = np.lexsort((l, key))
    key, l = key[order], l[order]
    uniq, start, counts = np.unique(key, return_index=True, return_counts=True)
    return _assemble(node_count, uniq // node_count, uniq % node_count, counts, counts, l, pubs, names)


def build_from_papers(papers: Iterable[PaperRecord]) -> CoauthorGraph:
    """Coauthorship graph of ``papers``; node ids follow first appearance of each name."""
    index: dict[str, int] = {}
    lists = []
    for paper in papers:
        ids = []
        for name in dict.fromkeys(paper.authors):
            ids.append(index.setdefault(name, len(index)))
        lists.append(ids)
    return from_author_lists(lists, len(index), tuple(index))


def common_neighbors(g: CoauthorGraph, i: int, j: int) -> int:
    """n_ij, the number of shared neighbours of two distinct nodes."""
    if i == j:
        raise ValueError("common_neighbors needs two distinct nodes")
    return len(np.intersect1d(g.neighbors(i), g.neighbors(j), assume_unique=True))


def common_neighbor_matches(g: CoauthorGraph, i: np.ndarray, j: np.ndarray):
    """Vectorised enumeration of z in Γ(i) ∩ Γ(j) for many pairs at once.

    Returns ``(pair, pos_iz, pos_jz)`` where ``pair`` indexes into the inputs and
    the positions are CSR entries (i, z) and (j, z).  Matches are grouped by pair
    in ascending order.
    """
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    deg = g.degrees
    swap = deg[i] > deg[j]
    a = np.where(swap, j, i)
    b = np.where(swap, i, j)
    counts = deg[a]
    total = int(counts.sum())
    if total == 0 or len(g.keys) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    pair = np.repeat(np.arange(len(a), dtype=np.int64), counts)
    first = np.cumsum(counts) - counts
    pos_a = np.arange(total, dtype=np.int64) - np.repeat(first - g.indptr[a], counts)
    z = g.indices[pos_a]
    want = b[pair] * g.node_count + z
    pos_b = np.searchsorted(g.keys, want)
    np.minimum(pos_b, len(g.keys) - 1, out=pos_b)
    hit = g.keys[pos_b] == want
    pair, pos_a, pos_b = pair[hit], pos_a[hit], pos_b[hit]
    sw = swap[pair]
    return pair, np.where(sw, pos_b, pos_a), np.where(sw, pos_a, pos_b)


def edge_common_counts(g: CoauthorGraph, edge_ids: np.ndarray | None = None,
                       chunk: int = 2_000_000) -> np.ndarray:
    """n_uv for the requested undirected edges (all edges when ``edge_ids`` is None)."""
    if edge_ids is None:
        edge_ids = np.arange(g.edge_count)
    edge_ids = np.asarray(edge_ids, dtype=np.int64)
    out = np.zeros(len(edge_ids), dtype=np.int64)
    if len(edge_ids) == 0:
        return out
    u, v = g.edges[edge_ids, 0], g.edges[edge_ids, 1]
    cost = np.minimum(g.degrees[u], g.degrees[v])
    for start, stop in chunk_bounds(cost, chunk):
        pair, _, _ = common_neighbor_matches(g, u[start:stop], v[start:stop])
        out[start:stop] = np.bincount(pair, minlength=stop - start)
    return out


def chunk_bounds(cost: np.ndarray, budget: int):
    """Yield (start, stop) slices whose summed ``cost`` stays near ``budget``."""
    csum = np.cumsum(cost)
    start = 0
    while start < len(cost):
        base = csum[start - 1] if start else 0
        stop = max(int(np.searchsorted(csum, base + budget, side="right")), start + 1)
        yield start, stop
        start = stop


def largest_component(g: CoauthorGraph) -> CoauthorGraph:
    """Induced subgraph on the largest connected component.

    Ties go to the component holding the smallest original node id.
    """
    if g.node_count == 0:
        return g
    ncomp, labels = connected_components(g.to_csr(), directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    first_node = np.full(ncomp, g.node_count, dtype=np.int64)
    np.minimum.at(first_node, labels, np.arange(g.node_count))
    best = np.lexsort((first_node, -sizes))[0]
    return g.subgraph(np.flatnonzero(labels == best))
