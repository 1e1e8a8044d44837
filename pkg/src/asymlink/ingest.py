"""Reading paper records, coauthor-count distributions and graph files.

Formats (UTF-8, ``\\n`` line endings, tab separated):

* papers, TSV:        ``paper_id<TAB>name1;name2;...``
* papers, BIPARTITE:  ``paper_id<TAB>name`` (one author per line)
* PMF:                ``l<TAB>probability``
* graph nodes:        ``i<TAB>name<TAB>p_i``   (``nodes.tsv``)
* graph edges:        ``i<TAB>j<TAB>w<TAB>l1,l2,...``   (``edges.tsv``)
"""
from __future__ import annotations

import enum
from collections import Counter
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .graph import CoauthorGraph, PaperRecord, _assemble

__all__ = [
    "PaperFormat",
    "ParseError",
    "parse_papers",
    "read_papers",
    "write_papers",
    "coauthor_size_distribution",
    "read_pmf",
    "write_pmf",
    "save_graph",
    "load_graph",
    "NODES_FILE",
    "EDGES_FILE",
]

NODES_FILE = "nodes.tsv"
EDGES_FILE = "edges.tsv"


class PaperFormat(enum.Enum):
    TSV = "tsv"
    BIPARTITE = "bipartite"


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _lines(stream: TextIO | Iterable[str]):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if line.strip():
            yield lineno, line


def parse_papers(stream: TextIO | Iterable[str], fmt: PaperFormat | str = PaperFormat.TSV,
                 max_authors: int | None = None) -> list[PaperRecord]:
    """Parse paper records from a line-oriented stream.

    ``max_authors`` drops papers whose deduplicated author list is longer.
    """
    fmt = PaperFormat(fmt)
    if fmt is PaperFormat.TSV:
        records = _parse_tsv(stream)
    else:
        records = _parse_bipartite(stream)
    if max_authors is not None:
        records = [r for r in records if len(r.authors) <= max_authors]
    return records


def _split(lineno: int, line: str) -> tuple[str, str]:
    if "\t" not in line:
        raise ParseError(lineno, "missing tab separator")
    pid, rest = line.split("\t", 1)
    if not pid:
        raise ParseError(lineno, "empty paper id")
    return pid, rest


def _parse_tsv(stream) -> list[PaperRecord]:
    seen = set()
    out = []
    for lineno, line in _lines(stream):
        pid, rest = _split(lineno, line)
        names = rest.split(";")
        if any(not n for n in names):
            raise ParseError(lineno, "empty author name")
        if pid in seen:
            raise ParseError(lineno, f"duplicate paper id {pid!r}")
        seen.add(pid)
        out.append(PaperRecord(pid, tuple(names)))
    return out


def _parse_bipartite(stream) -> list[PaperRecord]:
    groups: dict[str, list[str]] = {}
    for lineno, line in _lines(stream):
        pid, name = _split(lineno, line)
        if not name or "\t" in name:
            raise ParseError(lineno, "empty or malformed author name")
        groups.setdefault(pid, []).append(name)
    return [PaperRecord(pid, tuple(names)) for pid, names in groups.items()]


def read_papers(path: str | Path, fmt: PaperFormat | str = PaperFormat.TSV,
                max_authors: int | None = None) -> list[PaperRecord]:
    with open(path, encoding="utf-8", newline="\n") as fh:
        return parse_papers(fh, fmt, max_authors)


def write_papers(papers: Iterable[PaperRecord], fh: TextIO) -> None:
    """Serialise in TSV format."""
    for p in papers:
        fh.write(f"{p.paper_id}\t{';'.join(p.authors)}\n")


def coauthor_size_distribution(papers: Iterable[PaperRecord]) -> dict[int, float]:
    """Exact P(l) over the number of authors per paper."""
    counts = Counter(len(p.authors) for p in papers)
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no papers")
    return {l: counts[l] / total for l in sorted(counts)}


def write_pmf(pmf: dict[int, float], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for l in sorted(pmf):
            fh.write(f"{l}\t{pmf[l]!r}\n")


def read_pmf(source: str | Path | TextIO) -> dict[int, float]:
    """Load a PMF file, renormalising the probabilities."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_pmf(fh)
    raw: dict[int, float] = {}
    for lineno, line in _lines(source):
        if line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(lineno, "expected l<TAB>probability")
        try:
            l, p = int(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(lineno, "non-numeric field") from None
        if l < 1 or p < 0:
            raise ParseError(lineno, "size must be >= 1 and probability >= 0")
        raw[l] = raw.get(l, 0.0) + p
    total = sum(raw.values())
    if total <= 0:
        raise ValueError("PMF is empty")
    return {l: raw[l] / total for l in sorted(raw)}


def save_graph(g: CoauthorGraph, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / NODES_FILE, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(g.node_count):
            name = g.names[i] if g.names is not None else ""
            fh.write(f"{i}\t{name}\t{int(g.publications[i])}\n")
    with open(directory / EDGES_FILE, "w", encoding="utf-8", newline="\n") as fh:
        sp, sizes = g.size_ptr, g.sizes
        for e, (u, v) in enumerate(g.edges.tolist()):
            ls = ",".join(map(str, sizes[sp[e]:sp[e + 1]].tolist()))
            fh.write(f"{u}\t{v}\t{int(sp[e + 1] - sp[e])}\t{ls}\n")


def load_graph(directory: str | Path) -> CoauthorGraph:
    """Inverse of :func:`save_graph`."""
    directory = Path(directory)
    names, pubs = [], []
    with open(directory / NODES_FILE, encoding="utf-8", newline="\n") as fh:
        for lineno, line in _lines(fh):
            parts = line.split("\t")
            if len(parts) != 3 or int(parts[0]) != len(pubs):
                raise ParseError(lineno, "bad node row (expected dense i<TAB>name<TAB>p_i)")
            names.append(parts[1])
            pubs.append(int(parts[2]))
    n = len(pubs)
    us, vs, ws, sizes = [], [], [], []
    with open(directory / EDGES_FILE, encoding="utf-8", newline="\n") as fh:
        for lineno, line in _lines(fh):
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(lineno, "bad edge row")
            u, v, w = int(parts[0]), int(parts[1]), int(parts[2])
            ls = [int(x) for x in parts[3].split(",")]
            if not (0 <= u < v < n) or len(ls) != w or min(ls) < 2:
                raise ParseError(lineno, "inconsistent edge row")
            us.append(u)
            vs.append(v)
            ws.append(w)
            sizes.extend(sorted(ls))
    u, v = np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)
    w = np.asarray(ws, dtype=np.int64)
    order = np.argsort(u * max(n, 1) + v, kind="stable")
    if len(order) and not np.array_equal(order, np.arange(len(order))):
        ptr = np.concatenate(([0], np.cumsum(w)))
        sizes = np.concatenate([sizes[ptr[e]:ptr[e + 1]] for e in order])
        u, v, w = u[order], v[order], w[order]
    keys = u * max(n, 1) + v
    if np.any(np.diff(keys) == 0):
        raise ValueError("duplicate edge in edge file")
    named = None if all(not s for s in names) else tuple(names)
    return _assemble(n, u, v, w, w, np.asarray(sizes, dtype=np.int64), np.asarray(pubs, dtype=np.int64), named)
