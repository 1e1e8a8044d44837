import numpy as np
import pytest

from asymlink.graph import PaperRecord, build_from_papers, from_author_lists
from asymlink.model import ModelConfig, simulate

T1_PAPERS = [
    PaperRecord("P1", ("a", "b", "z")),
    PaperRecord("P2", ("b", "c")),
    PaperRecord("P3", ("z", "c")),
    PaperRecord("P4", ("a", "z")),
]


@pytest.fixture
def t1():
    g = build_from_papers(T1_PAPERS)
    ids = {name: g.node_id(name) for name in "abzc"}
    return g, ids


def random_papers(rng: np.random.Generator, nodes: int, papers: int, max_size: int = 5):
    out = []
    for _ in range(papers):
        l = int(rng.integers(1, max_size + 1))
        out.append([int(x) for x in rng.choice(nodes, size=min(l, nodes), replace=False)])
    return out


def random_graph(seed: int, nodes: int = 30, papers: int = 40, max_size: int = 5):
    rng = np.random.default_rng(seed)
    papers_ = random_papers(rng, nodes, papers, max_size)
    return from_author_lists(papers_, nodes), papers_


@pytest.fixture(scope="session")
def model_output():
    return simulate(ModelConfig(seed=11, stop_nodes=4000))


_lines = []


@pytest.fixture(scope="session")
def acceptance_report():
    return _lines


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in _lines:
            terminalreporter.write_line(line)
