import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymlink.graph import PaperRecord, build_from_papers
from asymlink.ingest import (ParseError, coauthor_size_distribution, load_graph, parse_papers, read_pmf,
                             save_graph, write_papers, write_pmf)

from conftest import T1_PAPERS, random_graph


def test_parse_tsv():
    recs = parse_papers(io.StringIO("P1\ta;b;z\nP2\tb;c\n"))
    assert recs == [PaperRecord("P1", ("a", "b", "z")), PaperRecord("P2", ("b", "c"))]


def test_parse_empty():
    assert parse_papers(io.StringIO("")) == []
    assert parse_papers(io.StringIO(""), "bipartite") == []


def test_parse_bipartite():
    recs = parse_papers(io.StringIO("P1\ta\nP1\tb\nP2\tc\n"), "bipartite")
    assert recs == [PaperRecord("P1", ("a", "b")), PaperRecord("P2", ("c",))]


@pytest.mark.parametrize("text,fmt,line", [
    ("P1\ta;b\nP2 b;c\n", "tsv", 2),
    ("P1\ta;;b\n", "tsv", 1),
    ("P1\ta\nP2\tb\nP1\tc\n", "tsv", 3),
    ("P1\ta\n\nP2\n", "bipartite", 3),
    ("P1\t\n", "bipartite", 1),
])
def test_parse_errors_carry_line_numbers(text, fmt, line):
    with pytest.raises(ParseError) as exc:
        parse_papers(io.StringIO(text), fmt)
    assert exc.value.lineno == line
    assert f"line {line}" in str(exc.value)


def test_max_authors_filter():
    recs = parse_papers(io.StringIO("P1\ta;b;c\nP2\ta;b\n"), max_authors=2)
    assert [r.paper_id for r in recs] == ["P2"]


names = st.text(alphabet=st.characters(blacklist_characters="\t\n\r;", blacklist_categories=("Cs",)),
                min_size=1, max_size=6).filter(lambda s: s.strip() == s and s)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(names, min_size=1, max_size=5), max_size=8))
def test_round_trip(author_lists):
    recs = [PaperRecord(f"P{k}", tuple(a)) for k, a in enumerate(author_lists)]
    buf = io.StringIO()
    write_papers(recs, buf)
    assert parse_papers(io.StringIO(buf.getvalue())) == recs


def test_size_distribution():
    papers = [PaperRecord(str(k), tuple("abc"[:l])) for k, l in enumerate([3, 2, 2, 2])]
    assert coauthor_size_distribution(papers) == {2: 0.75, 3: 0.25}
    assert coauthor_size_distribution([PaperRecord("x", tuple("abcde"))]) == {5: 1.0}
    with pytest.raises(ValueError):
        coauthor_size_distribution([])


def test_pmf_file_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    sizes = rng.integers(1, 40, size=777)
    pmf = coauthor_size_distribution([PaperRecord(str(k), tuple(map(str, range(l))))
                                      for k, l in enumerate(sizes)])
    assert abs(sum(pmf.values()) - 1) < 1e-12
    write_pmf(pmf, tmp_path / "p.tsv")
    back = read_pmf(tmp_path / "p.tsv")
    assert back.keys() == pmf.keys()
    assert abs(sum(back.values()) - 1) < 1e-12
    assert all(abs(back[l] - pmf[l]) < 1e-15 for l in pmf)


def test_read_pmf_renormalises_and_validates():
    assert read_pmf(io.StringIO("# sizes\n1\t2\n2\t6\n")) == {1: 0.25, 2: 0.75}
    with pytest.raises(ParseError):
        read_pmf(io.StringIO("1\tx\n"))
    with pytest.raises(ParseError):
        read_pmf(io.StringIO("0\t1\n"))


def test_save_load_t1(tmp_path):
    g = build_from_papers(T1_PAPERS)
    save_graph(g, tmp_path)
    edges = (tmp_path / "edges.tsv").read_text()
    a, z = g.node_id("a"), g.node_id("z")
    assert f"{min(a, z)}\t{max(a, z)}\t2\t2,3\n" in edges
    h = load_graph(tmp_path)
    assert h.names == g.names
    for name in ("indptr", "indices", "weights", "size_ptr", "sizes", "publications"):
        assert np.array_equal(getattr(h, name), getattr(g, name))


@pytest.mark.parametrize("seed", range(3))
def test_save_load_random_unnamed(tmp_path, seed):
    g, _ = random_graph(seed, nodes=50, papers=80, max_size=7)
    save_graph(g, tmp_path)
    h = load_graph(tmp_path)
    assert h.names is None
    h.check_invariants()
    for name in ("indptr", "indices", "weights", "sizes", "publications"):
        assert np.array_equal(getattr(h, name), getattr(g, name))


def test_load_rejects_bad_edges(tmp_path):
    (tmp_path / "nodes.tsv").write_text("0\ta\t1\n1\tb\t1\n")
    (tmp_path / "edges.tsv").write_text("0\t1\t2\t2\n")
    with pytest.raises(ParseError):
        load_graph(tmp_path)
