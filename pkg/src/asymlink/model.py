"""Group/leader/student growth model of scientific collaboration.

The network starts with one group (a leader and one student).  Each step:

1. every group publishes an intra-group paper with probability ``c``
   (leader plus ``l - 1`` of its active students);
2. every partnered pair of groups makes ``alpha`` attempts, each succeeding
   with probability ``c``, at an inter-group paper (both leaders plus
   ``l - 2`` students drawn from both groups);
3. students whose activity period reached ``G`` leave: with probability
   ``f`` they found a new group (whose partner is drawn uniformly among the
   existing groups), otherwise they go inactive.  Every group then recruits
   one new student.

Students are picked for papers without replacement with probability
proportional to ``age + 1``.  The random stream is numpy's PCG64 seeded
through ``SeedSequence``, so a (config, seed) pair reproduces a run on any
platform.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .graph import CoauthorGraph, from_author_lists
from .ingest import read_pmf

__all__ = [
    "ModelConfig",
    "ModelOutput",
    "Group",
    "PaperMode",
    "SizeSampler",
    "default_size_pmf",
    "draw_coauthor_count",
    "select_students",
    "simulate",
    "load_config",
]


def default_size_pmf() -> dict[int, float]:
    """The bundled DBLP-shaped authors-per-paper distribution."""
    with resources.files("asymlink.data").joinpath("dblp_like_pmf.tsv").open(encoding="utf-8") as fh:
        return read_pmf(fh)


class PaperMode(enum.Enum):
    INTRA = "intra"
    INTER = "inter"


@dataclass
class ModelConfig:
    c: float = 0.4
    alpha: int = 3
    f: float = 0.2
    G: int = 7
    size_pmf: dict[int, float] = field(default_factory=default_size_pmf)
    stop_nodes: int | None = 10_000
    stop_steps: int | None = None
    seed: int = 0
    intergroup_per_group: bool = False

    def validate(self) -> None:
        if not 0 <= self.c <= 1 or not 0 <= self.f <= 1:
            raise ValueError("c and f must lie in [0, 1]")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.G < 1:
            raise ValueError("G must be >= 1")
        if not self.size_pmf:
            raise ValueError("size_pmf is empty")
        if any(l < 1 or p < 0 for l, p in self.size_pmf.items()) or sum(self.size_pmf.values()) <= 0:
            raise ValueError("size_pmf must hold non-negative mass on sizes >= 1")
        if self.stop_nodes is None and self.stop_steps is None:
            raise ValueError("need a stop condition (stop_nodes or stop_steps)")

    def to_dict(self) -> dict[str, Any]:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["size_pmf"] = {str(k): v for k, v in sorted(self.size_pmf.items())}
        return d


def load_config(path: str | Path, **overrides) -> ModelConfig:
    """Read a JSON or ``key = value`` config file.

    ``size_pmf`` may be an inline mapping (JSON) or a path to a PMF file.
    Keyword overrides that are not None win over file values.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raw = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(raw, base=path.parent)


def config_from_mapping(raw: dict[str, Any], base: Path | None = None) -> ModelConfig:
    known = {f.name: f for f in fields(ModelConfig)}
    kwargs: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        if key == "size_pmf":
            if isinstance(value, dict):
                total = sum(float(v) for v in value.values())
                value = {int(k): float(v) / total for k, v in value.items()}
            else:
                p = Path(value)
                if base is not None and not p.is_absolute() and not p.exists():
                    p = base / p
                value = read_pmf(p)
        elif key in ("c", "f"):
            value = float(value)
        elif key in ("alpha", "G", "seed"):
            value = int(value)
        elif key in ("stop_nodes", "stop_steps"):
            value = None if value in (None, "", "none", "None") else int(value)
        elif key == "intergroup_per_group":
            value = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
        kwargs[key] = value
    cfg = ModelConfig(**kwargs)
    cfg.validate()
    return cfg


class SizeSampler:
    """Draws paper sizes from a PMF restricted to a mode's admissible range."""

    def __init__(self, size_pmf: dict[int, float], G: int):
        self.tables = {}
        for mode, lo, hi in ((PaperMode.INTRA, 1, G + 1), (PaperMode.INTER, 2, 2 * (G + 1))):
            ls = np.array([l for l in sorted(size_pmf) if lo <= l <= hi and size_pmf[l] > 0], dtype=np.int64)
            if not len(ls):
                self.tables[mode] = None
                continue
            cdf = np.cumsum([size_pmf[l] for l in ls])
            self.tables[mode] = (ls, cdf / cdf[-1])

    def draw(self, mode: PaperMode, rng: np.random.Generator) -> int:
        table = self.tables[mode]
        if table is None:
            raise ValueError(f"no admissible paper size for {mode.value}-group papers")
        ls, cdf = table
        return int(ls[min(int(np.searchsorted(cdf, rng.random(), side="right")), len(ls) - 1)])


def draw_coauthor_count(size_pmf: dict[int, float], mode: PaperMode | str, G: int,
                        rng: np.random.Generator) -> int:
    """One paper size from ``size_pmf`` renormalised over the mode's range.

    INTRA papers have 1..G+1 authors, INTER papers 2..2(G+1).
    """
    return SizeSampler(size_pmf, G).draw(PaperMode(mode), rng)


def _pick(ages: Sequence[int], count: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of ``count`` items drawn without replacement, weight age + 1.

    Uses exponential keys (Efraimidis-Spirakis), which gives the same law as
    successive weighted draws.
    """
    n = len(ages)
    if count <= 0 or n == 0:
        return np.zeros(0, dtype=np.int64)
    keys = rng.exponential(size=n) / (np.asarray(ages, dtype=float) + 1.0)
    if count >= n:
        return np.argsort(keys, kind="stable")
    return np.argsort(keys, kind="stable")[:count]


def select_students(pool: Sequence[tuple[int, int]], count: int, rng: np.random.Generator) -> list[int]:
    """Pick ``min(count, len(pool))`` distinct students from ``(node, age)`` pairs."""
    idx = _pick([age for _, age in pool], count, rng)
    return [pool[k][0] for k in idx]


@dataclass
class Group:
    leader: int
    students: list[int] = field(default_factory=list)
    ages: list[int] = field(default_factory=list)
    partner: int | None = None


@dataclass
class ModelOutput:
    graph: CoauthorGraph
    papers: list[list[int]]
    steps: int
    log: list[dict[str, int]]
    config: ModelConfig
    leaders: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    # per paper: step it was written in and the group(s) that wrote it
    paper_steps: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    paper_groups: list[tuple[int, ...]] = field(default_factory=list)
    # per node: step at whose end it joined (0 for the founding pair)
    join_step: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def publications(self) -> np.ndarray:
        return self.graph.publications


def simulate(config: ModelConfig) -> ModelOutput:
    """Grow one realisation until the stop condition holds after step (3)."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    sampler = SizeSampler(config.size_pmf, config.G)
    if sampler.tables[PaperMode.INTRA] is None:
        raise ValueError("size_pmf has no mass on intra-group sizes 1..G+1")
    c, alpha, f, G = config.c, config.alpha, config.f, config.G

    groups = [Group(leader=0, students=[1], ages=[0])]
    node_count = 2
    papers: list[list[int]] = []
    pairs: list[tuple[int, int]] = []
    seen_pairs: set[tuple[int, int]] = set()
    log = []
    paper_steps: list[int] = []
    paper_groups: list[tuple[int, ...]] = []
    join_step = [0, 0]

    def add_pair(a: int, b: int) -> None:
        key = (min(a, b), max(a, b))
        if config.intergroup_per_group:
            pairs.append((a, b))
        elif key not in seen_pairs:
            seen_pairs.add(key)
            pairs.append(key)

    step = 0
    while True:
        step += 1
        n_papers = len(papers)
        # (1) intra-group papers
        for gi, g in enumerate(groups):
            if rng.random() < c:
                l = sampler.draw(PaperMode.INTRA, rng)
                chosen = _pick(g.ages, l - 1, rng)
                papers.append([g.leader] + [g.students[k] for k in chosen])
                paper_steps.append(step)
                paper_groups.append((gi,))
        # (2) inter-group papers
        if alpha > 0 and pairs:
            for a, b in sorted(pairs):
                ga, gb = groups[a], groups[b]
                for _ in range(alpha):
                    if rng.random() < c:
                        l = sampler.draw(PaperMode.INTER, rng)
                        chosen = _pick(ga.ages + gb.ages, l - 2, rng)
                        pool = ga.students + gb.students
                        papers.append([ga.leader, gb.leader] + [pool[k] for k in chosen])
                        paper_steps.append(step)
                        paper_groups.append((a, b))
        # (3) resource update
        existing = len(groups)
        for gi in range(existing):
            g = groups[gi]
            g.ages = [a + 1 for a in g.ages]
            if not g.ages or max(g.ages) < G:
                continue
            stay = [k for k, a in enumerate(g.ages) if a < G]
            leaving = [g.students[k] for k, a in enumerate(g.ages) if a >= G]
            g.students = [g.students[k] for k in stay]
            g.ages = [g.ages[k] for k in stay]
            for node in leaving:
                if rng.random() < f:
                    new_id = len(groups)
                    partner = int(rng.integers(new_id))
                    groups.append(Group(leader=node, partner=partner))
                    if groups[partner].partner is None:
                        groups[partner].partner = new_id
                        add_pair(partner, new_id)
                    add_pair(new_id, partner)
        for g in groups:
            g.students.append(node_count)
            g.ages.append(0)
            join_step.append(step)
            node_count += 1
        log.append({"step": step, "nodes": node_count, "groups": len(groups),
                    "papers": len(papers) - n_papers,
                    "max_students": max(len(g.students) for g in groups)})
        if config.stop_nodes is not None and node_count >= config.stop_nodes:
            break
        if config.stop_steps is not None and step >= config.stop_steps:
            break

    graph = from_author_lists(papers, node_count)
    leaders = np.array([g.leader for g in groups], dtype=np.int64)
    return ModelOutput(graph=graph, papers=papers, steps=step, log=log, config=config, leaders=leaders,
                       paper_steps=np.asarray(paper_steps, dtype=np.int64), paper_groups=paper_groups,
                       join_step=np.asarray(join_step, dtype=np.int64))
