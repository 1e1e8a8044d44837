import json

import numpy as np
import pytest

from asymlink.model import (ModelConfig, PaperMode, SizeSampler, default_size_pmf, draw_coauthor_count,
                            load_config, select_students, simulate)


def small(**kw):
    kw.setdefault("stop_nodes", 1500)
    return ModelConfig(**kw)


def test_default_pmf_is_normalised_and_heavy_tailed():
    pmf = default_size_pmf()
    assert abs(sum(pmf.values()) - 1) < 1e-12
    assert max(pmf) >= 50 and pmf[max(pmf)] > 0
    assert max(pmf, key=pmf.get) in (2, 3)


def test_c_zero_gives_no_papers():
    out = simulate(small(c=0.0, stop_steps=30, stop_nodes=None))
    assert out.papers == [] and out.graph.edge_count == 0
    assert out.graph.node_count > 2


@pytest.mark.parametrize("t", [1, 5, 40])
def test_f_zero_keeps_one_group(t):
    out = simulate(small(f=0.0, stop_steps=t, stop_nodes=None))
    assert out.graph.node_count == 2 + t
    assert len(out.leaders) == 1
    assert all(groups == (0,) for groups in out.paper_groups)


def test_intra_size_is_capped():
    rng = np.random.default_rng(0)
    pmf = {30: 0.7, 3: 0.2, 8: 0.1}
    draws = {draw_coauthor_count(pmf, "intra", 7, rng) for _ in range(500)}
    assert draws <= set(range(1, 9)) and 30 not in draws


def test_point_mass_inside_range():
    rng = np.random.default_rng(1)
    assert {draw_coauthor_count({2: 1.0}, PaperMode.INTRA, 7, rng) for _ in range(50)} == {2}


def test_inter_range():
    rng = np.random.default_rng(2)
    sampler = SizeSampler(default_size_pmf(), 7)
    draws = [sampler.draw(PaperMode.INTER, rng) for _ in range(20000)]
    assert min(draws) >= 2 and max(draws) <= 16


def test_empty_admissible_range_is_an_error():
    with pytest.raises(ValueError):
        draw_coauthor_count({50: 1.0}, "intra", 7, np.random.default_rng(0))
    with pytest.raises(ValueError):
        simulate(small(size_pmf={50: 1.0}))


def test_empty_pmf_is_a_config_error():
    with pytest.raises(ValueError):
        simulate(small(size_pmf={}))


def test_select_students_examples():
    rng = np.random.default_rng(3)
    assert sorted(select_students([(5, 0), (6, 0)], 2, rng)) == [5, 6]
    assert select_students([(5, 0), (6, 0)], 0, rng) == []
    assert sorted(select_students([(5, 0), (6, 3)], 9, rng)) == [5, 6]


def test_select_students_age_weighting():
    rng = np.random.default_rng(4)
    trials = 100_000
    hits = sum(select_students([(0, 9), (1, 0)], 1, rng)[0] == 0 for _ in range(trials))
    assert abs(hits / trials - 10 / 11) < 0.01


def test_select_students_distinct():
    rng = np.random.default_rng(5)
    pool = [(k, k % 4) for k in range(10)]
    for count in range(11):
        chosen = select_students(pool, count, rng)
        assert len(chosen) == len(set(chosen)) == count


@pytest.fixture(scope="module")
def run():
    return simulate(ModelConfig(seed=3, stop_nodes=3000))


def test_group_size_never_exceeds_G(run):
    assert max(entry["max_students"] for entry in run.log) <= run.config.G


def test_papers_contain_their_leaders(run):
    leaders = run.leaders
    for authors, groups in zip(run.papers, run.paper_groups):
        assert len(authors) == len(set(authors))
        assert authors[0] == leaders[groups[0]]
        if len(groups) == 2:
            assert authors[1] == leaders[groups[1]]
            assert 2 <= len(authors) <= 2 * (run.config.G + 1)
        else:
            assert 1 <= len(authors) <= run.config.G + 1


def test_inactive_nodes_do_not_publish(run):
    G = run.config.G
    is_leader = np.zeros(run.graph.node_count, bool)
    is_leader[run.leaders] = True
    last = np.full(run.graph.node_count, -1)
    first = np.full(run.graph.node_count, 10**9)
    for authors, step in zip(run.papers, run.paper_steps):
        for a in authors:
            last[a] = max(last[a], step)
            first[a] = min(first[a], step)
    students = ~is_leader & (last >= 0)
    assert np.all(first[students] >= run.join_step[students] + 1)
    assert np.all(last[students] <= run.join_step[students] + G)
    published = last >= 0
    assert np.all(first[published & is_leader][1:] >= 1)


def test_step_log_is_consistent(run):
    assert run.log[-1]["nodes"] == run.graph.node_count >= 3000
    assert sum(e["papers"] for e in run.log) == len(run.papers)
    assert np.array_equal(np.bincount(run.paper_steps, minlength=run.steps + 1)[1:],
                          [e["papers"] for e in run.log])


def test_same_seed_is_bit_identical():
    a = simulate(small(seed=9))
    b = simulate(small(seed=9))
    assert a.papers == b.papers
    for name in ("indptr", "indices", "weights", "sizes", "publications"):
        assert np.array_equal(getattr(a.graph, name), getattr(b.graph, name))
    assert simulate(small(seed=10)).papers != a.papers


@pytest.mark.parametrize("per_group", [False, True])
def test_inter_attempts_per_step(per_group):
    # with c=1 every attempt succeeds: a partnered pair gets alpha papers per
    # step, or alpha per partnering group with the per-group reading
    out = simulate(small(c=1.0, f=0.5, alpha=2, G=3, stop_nodes=None, stop_steps=15,
                         intergroup_per_group=per_group))
    groups_before = [1] + [e["groups"] for e in out.log[:-1]]
    inter = np.bincount(out.paper_steps[[len(g) == 2 for g in out.paper_groups]], minlength=out.steps + 1)[1:]
    links = np.array(groups_before) if per_group else np.array(groups_before) - 1
    links[np.array(groups_before) == 1] = 0
    assert np.array_equal(inter, 2 * links)
    assert max(groups_before) > 3


@pytest.mark.parametrize("seed", range(5))
def test_heavy_tail_smoke(seed):
    g = simulate(ModelConfig(seed=100 + seed)).graph
    assert g.node_count >= 10_000
    assert g.degrees.max() >= 50
    assert g.edge_weights.max() >= 20


def test_load_config_json_and_keyvalue(tmp_path):
    pmf = tmp_path / "pmf.tsv"
    pmf.write_text("2\t3\n3\t1\n")
    (tmp_path / "a.json").write_text(json.dumps({"c": 0.3, "G": 5, "size_pmf": "pmf.tsv"}))
    cfg = load_config(tmp_path / "a.json", seed=4)
    assert (cfg.c, cfg.G, cfg.seed) == (0.3, 5, 4)
    assert cfg.size_pmf == {2: 0.75, 3: 0.25}
    (tmp_path / "b.cfg").write_text("# comment\nalpha = 2\nstop_nodes = none\nstop_steps = 9\n")
    cfg = load_config(tmp_path / "b.cfg")
    assert (cfg.alpha, cfg.stop_nodes, cfg.stop_steps) == (2, None, 9)
    (tmp_path / "c.cfg").write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        load_config(tmp_path / "c.cfg")
