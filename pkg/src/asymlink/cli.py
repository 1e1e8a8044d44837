"""Command-line entry point: ``asymlink {ingest,simulate,predict,analyze,metrics}``.

Exit codes: 0 success, 2 usage or configuration error, 1 runtime error.
Every command writes ``run.json`` with its resolved parameters into ``--out``.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import fit_power_law_exponent, structural_distributions, weight_overlap_relation
from .evaluation import InsufficientPairsError, evaluate_all
from .graph import CoauthorGraph, build_from_papers, largest_component
from .ingest import (EDGES_FILE, NODES_FILE, PaperFormat, ParseError, coauthor_size_distribution,
                     load_graph, read_papers, save_graph, write_papers, write_pmf)
from .metrics import write_edge_metrics
from .model import ModelConfig, config_from_mapping, load_config, simulate
from .similarity import parse_kinds

log = logging.getLogger("asymlink")

PAPERS_FILE = "papers.tsv"


class UsageError(Exception):
    """Bad flags, inputs or configuration (exit code 2)."""


def _parse_seeds(text: str) -> list[int]:
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise UsageError("no seeds given")
    return seeds


def _write_run(out: Path, command: str, params: dict, argv: list[str]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    record = {"command": command, "version": __version__, "argv": argv, "params": params}
    (out / "run.json").write_text(json.dumps(record, indent=2, sort_keys=True, default=str) + "\n",
                                  encoding="utf-8")


def _load_graph_dir(path: str) -> CoauthorGraph:
    d = Path(path)
    if not (d / NODES_FILE).is_file() or not (d / EDGES_FILE).is_file():
        raise UsageError(f"{d} does not hold {NODES_FILE} and {EDGES_FILE}")
    return load_graph(d)


def cmd_ingest(args, argv) -> int:
    src = Path(args.input)
    if not src.is_file():
        raise UsageError(f"cannot read {src}")
    papers = read_papers(src, args.format, args.max_authors)
    full = build_from_papers(papers)
    g = largest_component(full) if args.lcc else full
    out = Path(args.out)
    save_graph(g, out)
    with open(out / PAPERS_FILE, "w", encoding="utf-8", newline="\n") as fh:
        write_papers(papers, fh)
    if papers:
        write_pmf(coauthor_size_distribution(papers), out / "pmf.tsv")
    lcc_nodes = largest_component(full).node_count
    frac = lcc_nodes / full.node_count if full.node_count else 0.0
    print(f"{g.node_count} nodes, {g.edge_count} edges, lcc fraction {frac:.4f}")
    _write_run(out, "ingest", {"input": str(src), "format": args.format, "lcc": args.lcc,
                               "max_authors": args.max_authors, "nodes": g.node_count,
                               "edges": g.edge_count, "lcc_fraction": frac}, argv)
    return 0


def _model_config(args) -> ModelConfig:
    overrides = {"c": args.c, "alpha": args.alpha, "f": args.f, "G": args.G, "size_pmf": args.size_pmf,
                 "stop_nodes": args.stop_nodes, "stop_steps": args.stop_steps, "seed": args.seed,
                 "intergroup_per_group": True if args.intergroup_per_group else None}
    if args.config:
        if not Path(args.config).is_file():
            raise UsageError(f"cannot read config {args.config}")
        return load_config(args.config, **overrides)
    return config_from_mapping({k: v for k, v in overrides.items() if v is not None})


def cmd_simulate(args, argv) -> int:
    try:
        base = _model_config(args)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out)
    runs = []
    for r in range(args.realizations):
        cfg = ModelConfig(**{**base.__dict__, "seed": base.seed + r})
        result = simulate(cfg)
        target = out if args.realizations == 1 else out / f"realization_{cfg.seed}"
        save_graph(result.graph, target)
        with open(target / PAPERS_FILE, "w", encoding="utf-8", newline="\n") as fh:
            for k, authors in enumerate(result.papers):
                fh.write(f"p{k}\t{';'.join(map(str, authors))}\n")
        meta = {"seed": cfg.seed, "steps": result.steps, "nodes": result.graph.node_count,
                "edges": result.graph.edge_count, "papers": len(result.papers)}
        (target / "model.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        runs.append(meta)
        print(f"seed {cfg.seed}: {meta['nodes']} nodes, {meta['edges']} edges, {meta['steps']} steps")
    _write_run(out, "simulate", {"config": base.to_dict(), "realizations": args.realizations,
                                 "runs": runs}, argv)
    return 0


def cmd_predict(args, argv) -> int:
    try:
        kinds = parse_kinds(args.scores)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not kinds:
        raise UsageError("no scores requested")
    if args.d is not None and args.d <= 0:
        raise UsageError("--d must be positive")
    seeds = _parse_seeds(args.seeds)
    g = _load_graph_dir(args.graph)
    if args.lcc:
        g = largest_component(g)
    try:
        report = evaluate_all(g, args.d, kinds, seeds, holdout=not args.no_holdout, workers=args.threads)
    except InsufficientPairsError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out)
    report.write(out)
    for row in report.rows:
        print(f"{row.kind.token:5s} AUC {row.auc:.4f} ± {row.stderr_auc:.4f}  "
              f"PRAUC {row.prauc:.4f} ± {row.stderr_prauc:.4f}")
    _write_run(out, "predict", {"graph": args.graph, "scores": [k.token for k in kinds],
                                "d": report.rows[0].d, "seeds": seeds, "holdout": not args.no_holdout,
                                "lcc": args.lcc, "threads": args.threads}, argv)
    return 0


def _paper_sizes(graph_dir: Path):
    path = graph_dir / PAPERS_FILE
    if not path.is_file():
        return None
    return np.array([len(p.authors) for p in read_papers(path)], dtype=np.int64)


def cmd_analyze(args, argv) -> int:
    g = _load_graph_dir(args.graph)
    if args.lcc:
        g = largest_component(g)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    bpd = args.bins_per_decade
    written = []
    if args.which in ("distributions", "all"):
        sizes = _paper_sizes(Path(args.graph))
        for name, series in structural_distributions(g, bpd, sizes).items():
            series.write_csv(out / f"dist_{name}.csv", "density")
            written.append(f"dist_{name}.csv")
    if args.which in ("qv-relation", "relations", "all"):
        series = weight_overlap_relation(g, "v", "q", bpd)
        series.write_csv(out / "relation_v_q.csv")
        written.append("relation_v_q.csv")
        try:
            fit = fit_power_law_exponent(series, args.min_count, args.v_min, args.v_max)
        except ValueError as exc:
            raise UsageError(f"cannot fit exponent: {exc}") from exc
        fit.write_csv(out / "fit.csv")
        written.append("fit.csv")
        print(f"beta {fit.beta:.4f} (r2 {fit.r2:.4f}, {fit.n_points} bins)")
    if args.which in ("relations", "all"):
        for x, y in (("w", "o"), ("wstar", "o")):
            weight_overlap_relation(g, x, y, bpd).write_csv(out / f"relation_{x}_{y}.csv")
            written.append(f"relation_{x}_{y}.csv")
    _write_run(out, "analyze", {"graph": args.graph, "which": args.which, "bins_per_decade": bpd,
                                "min_count": args.min_count, "v_min": args.v_min, "v_max": args.v_max,
                                "lcc": args.lcc, "files": written}, argv)
    return 0


def cmd_metrics(args, argv) -> int:
    g = _load_graph_dir(args.graph)
    if args.lcc:
        g = largest_component(g)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_edge_metrics(g, out / "edges-metrics.csv")
    _write_run(out, "metrics", {"graph": args.graph, "lcc": args.lcc}, argv)
    return 0


def cmd_replay(args, argv) -> int:
    record = json.loads(Path(args.run).read_text(encoding="utf-8"))
    return main(record["argv"])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asymlink", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $ASYMLINK_THREADS or CPU count)")
        if graph:
            sp.add_argument("--graph", required=True, help="directory with nodes.tsv and edges.tsv")
            sp.add_argument("--lcc", action="store_true", help="restrict to the largest component")

    sp = sub.add_parser("ingest", help="parse paper records into a graph")
    sp.add_argument("input")
    sp.add_argument("--format", choices=[f.value for f in PaperFormat], default="tsv")
    sp.add_argument("--lcc", action="store_true")
    sp.add_argument("--max-authors", type=int, default=None)
    common(sp, graph=False)
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("simulate", help="grow synthetic collaboration networks")
    sp.add_argument("--config", default=None, help="JSON or key = value file")
    sp.add_argument("--c", type=float, default=None)
    sp.add_argument("--alpha", type=int, default=None)
    sp.add_argument("--f", type=float, default=None)
    sp.add_argument("--G", type=int, default=None)
    sp.add_argument("--size-pmf", default=None, help="PMF file (l<TAB>probability)")
    sp.add_argument("--stop-nodes", type=int, default=None)
    sp.add_argument("--stop-steps", type=int, default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--realizations", type=int, default=1)
    sp.add_argument("--intergroup-per-group", action="store_true")
    common(sp, graph=False)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("predict", help="balanced link-prediction evaluation")
    sp.add_argument("--scores", required=True, help="comma-separated score tokens")
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--seeds", default="0", help="e.g. 1..5 or 1,2,3")
    sp.add_argument("--no-holdout", action="store_true", help="score positives without removing them")
    common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("analyze", help="distributions, weight-overlap relations, exponent fit")
    sp.add_argument("--which", choices=["distributions", "qv-relation", "relations", "all"],
                    default="all")
    sp.add_argument("--bins-per-decade", type=int, default=10)
    sp.add_argument("--min-count", type=int, default=10)
    sp.add_argument("--v-min", type=float, default=None)
    sp.add_argument("--v-max", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("metrics", help="per-edge metrics CSV")
    common(sp)
    sp.set_defaults(func=cmd_metrics)

    sp = sub.add_parser("replay", help="re-run the command recorded in a run.json")
    sp.add_argument("run")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", None) is None and os.environ.get("ASYMLINK_THREADS"):
        args.threads = int(os.environ["ASYMLINK_THREADS"])
    try:
        return args.func(args, argv)
    except (UsageError, ParseError, FileNotFoundError) as exc:
        print(f"asymlink: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"asymlink: runtime error: {exc}", file=sys.stderr)
        return 1
