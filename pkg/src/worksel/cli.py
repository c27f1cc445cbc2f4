"""Command-line front end.

Exit codes: 0 on success, 2 for configuration errors (bad parameters or
config files), 3 for input-format errors (unparseable rosters, ledgers, or
graphs).
"""

import argparse
import json
import os
import sys
import warnings

from . import __version__
from .analysis import (
    collusion_confidence_curve,
    distance_k_clique,
    hypergeom,
    t_max,
    worker_distance_stats,
)
from .community import Partition, community_graph, detect_communities, modularity
from .errors import ConfigError, InvalidInputError, ParseError
from .experiment import (
    ExperimentConfig,
    RunManifest,
    emit_report,
    logspace_points,
    read_results_csv,
    run_experiment,
    write_plot_csv,
    write_results_csv,
)
from .graph import graph_stats, load_edge_list
from .graph_select import select_workers_graph_aware
from .ledger import Ledger, ledger_from_sequence, simulate_commit_round
from .seed import Seed, derive_seed, load_roster, sample_workers, seed_report


def _emit(data, out=None):
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def cmd_seed(args):
    roster = load_roster(args.roster)
    ledger = Ledger.load(args.ledger, participants=roster)
    commits = ledger.effective_commit_sequence()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        seed = derive_seed(commits, roster)
    for w in caught:
        print("warning: %s" % w.message, file=sys.stderr)
    workers = sample_workers(roster, args.n, seed) if args.n is not None else None
    _emit(seed_report(seed, workers), args.out)


def cmd_sample(args):
    roster = load_roster(args.roster)
    space = int(args.space) if args.space else None
    if space is None:
        from .combinatorics import arrangement_space
        space = arrangement_space(len(roster))
    seed = Seed(value=int(args.seed_value), space=space)
    workers = sample_workers(roster, args.n, seed)
    _emit(seed_report(seed, workers), args.out)


def cmd_commit_sim(args):
    roster = load_roster(args.roster)
    sequence = simulate_commit_round(roster, args.probability, args.run_seed)
    if args.out:
        ledger_from_sequence(roster, sequence).save(args.out)
    _emit({"commits": sequence, "n_commits": len(sequence)})


def cmd_communities(args):
    g = load_edge_list(args.graph)
    partition = detect_communities(g)
    if args.out:
        partition.save(args.out)
    groups = partition.communities()
    _emit({
        "n_communities": partition.n_c,
        "modularity": modularity(g, partition) if g.n_edges else None,
        "sizes": {c: len(vs) for c, vs in groups.items()},
    })


def cmd_graph_select(args):
    g = load_edge_list(args.graph)
    ws = select_workers_graph_aware(
        g, args.n, avoid_adjacent_workers=args.avoid_adjacent)
    _emit({
        "method": "graph-aware",
        "quotas": ws.provenance["quotas"],
        "workers": ws.sorted_workers(),
        "parameters": {"n_workers": args.n,
                       "avoid_adjacent_workers": args.avoid_adjacent},
    }, args.out)


def _load_workers(path):
    workers = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                workers.append(int(line))
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
    return workers


def cmd_metrics(args):
    g = load_edge_list(args.graph)
    workers = _load_workers(args.workers)
    report = distance_k_clique(g, workers, args.k,
                               allow_expensive_k=args.allow_expensive_k)
    bounds = t_max(len(workers)) if workers else None
    payload = {
        "k": report.k,
        "clique_size": report.size,
        "witness": list(report.witness),
        "n_workers": len(workers),
    }
    if bounds:
        payload["t_max_strict"] = bounds.t_max_strict
        payload["t_max_relaxed"] = bounds.t_max_relaxed
        payload["collusion_possible"] = report.size >= bounds.t_max_strict
    if args.partition:
        partition = Partition.load(args.partition)
        payload["distance_stats"] = worker_distance_stats(g, workers, partition)
    else:
        payload["distance_stats"] = worker_distance_stats(g, workers)
    _emit(payload, args.out)


def cmd_tmax(args):
    bounds = t_max(args.n)
    _emit({"n": bounds.n, "t_max_strict": bounds.t_max_strict,
           "t_max_relaxed": bounds.t_max_relaxed})


def cmd_hypergeom(args):
    if args.curve:
        curve = collusion_confidence_curve(args.population, args.malicious,
                                           args.confidence)
        _emit({"confidence": args.confidence,
               "curve": [{"n": n, "m_bound": b} for n, b in curve]}, args.out)
        return
    if args.m is not None:
        value = hypergeom(args.population, args.malicious, args.sample, args.m)
        _emit({"pmf": float(value), "pmf_exact": "%d/%d"
               % (value.numerator, value.denominator)}, args.out)
        return
    table = hypergeom(args.population, args.malicious, args.sample)
    _emit({"table": [{"m": m, "pmf": float(p), "cdf": float(c)}
                     for m, p, c in table]}, args.out)


def cmd_experiment(args):
    if args.manifest_in:
        manifest = RunManifest.load(args.manifest_in)
        config = ExperimentConfig.from_dict(manifest.config)
    elif args.config:
        config = ExperimentConfig.from_file(args.config)
    else:
        if not args.graph or not args.method:
            raise ConfigError("need --graph and --method (or --config)")
        n_list = [int(x) for x in args.n_list.split(",")] if args.n_list else None
        kwargs = {
            "graph_path": args.graph,
            "method": args.method,
            "k_list": [int(x) for x in args.k_list.split(",")],
            "confidence": args.confidence,
            "base_run_seed": args.base_seed,
        }
        if args.executions is not None:
            kwargs["executions_per_point"] = args.executions
        if args.logspace:
            g = load_edge_list(args.graph)
            kwargs["n_workers_list"] = logspace_points(g.n_vertices)
        elif n_list:
            kwargs["n_workers_list"] = n_list
        config = ExperimentConfig(**kwargs)
    os.makedirs(args.out, exist_ok=True)
    total = sum(config.executions(n) for n in config.n_workers_list)
    done = [0]

    def progress(run_id):
        done[0] += 1
        if args.verbose:
            print("[%d/%d] %s" % (done[0], total, run_id), file=sys.stderr)

    rows, manifest = run_experiment(config, progress=progress)
    results_path = os.path.join(args.out, "results.csv")
    write_results_csv(rows, results_path)
    manifest.save(os.path.join(args.out, "manifest.json"))
    print("wrote %s (%d rows)" % (results_path, len(rows)), file=sys.stderr)


def cmd_report(args):
    rows = read_results_csv(args.results)
    report, plot_rows = emit_report(rows, confidence=args.confidence)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "summary.json"), "w",
              encoding="utf-8") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    write_plot_csv(plot_rows, os.path.join(args.out, "plot_data.csv"))
    print("wrote summary.json and plot_data.csv to %s" % args.out,
          file=sys.stderr)


def cmd_graph_stats(args):
    g = load_edge_list(args.graph)
    stats = graph_stats(g)
    _emit({
        "n_vertices": g.n_vertices,
        "n_edges": g.n_edges,
        "connected": stats.connected,
        "diameter": stats.diameter if stats.connected else "inf",
        "radius": stats.radius if stats.connected else "inf",
        "components": [{"size": c.size, "diameter": c.diameter,
                        "radius": c.radius} for c in stats.components],
    }, args.out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="worksel",
        description="Collusion-resistant worker set selection toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seed", help="derive the seed from a ledger and roster")
    p.add_argument("--ledger", required=True)
    p.add_argument("--roster", required=True)
    p.add_argument("--n", type=int, help="also sample this many workers")
    p.add_argument("--out")
    p.set_defaults(func=cmd_seed)

    p = sub.add_parser("sample", help="sample workers from a roster and seed")
    p.add_argument("--roster", required=True)
    p.add_argument("--seed-value", required=True,
                   help="seed as a decimal integer")
    p.add_argument("--space", help="seed space size (default: roster's "
                                   "arrangement space)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("commit-sim", help="simulate a commit round")
    p.add_argument("--roster", required=True)
    p.add_argument("--probability", type=float, required=True)
    p.add_argument("--run-seed", type=int, required=True)
    p.add_argument("--out", help="write the simulated ledger (JSON Lines)")
    p.set_defaults(func=cmd_commit_sim)

    p = sub.add_parser("communities", help="detect communities in a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", help="write partition CSV")
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("graph-select", help="graph-aware worker selection")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--avoid-adjacent", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph_select)

    p = sub.add_parser("metrics", help="distance-k clique metrics for workers")
    p.add_argument("--graph", required=True)
    p.add_argument("--workers", required=True,
                   help="file with one vertex ID per line")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--partition", help="partition CSV for intra/inter stats")
    p.add_argument("--allow-expensive-k", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("tmax", help="threshold bounds for n workers")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_tmax)

    p = sub.add_parser("hypergeom", help="exact hypergeometric law")
    p.add_argument("--population", type=int, required=True)
    p.add_argument("--malicious", type=int, required=True)
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--m", type=int)
    p.add_argument("--curve", action="store_true",
                   help="emit the confidence curve over all sample sizes")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hypergeom)

    p = sub.add_parser("experiment", help="run a full experiment")
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--manifest-in", help="replay a previous run's manifest")
    p.add_argument("--graph")
    p.add_argument("--method")
    p.add_argument("--n-list", help="comma-separated worker counts")
    p.add_argument("--executions", type=int)
    p.add_argument("--k-list", default="1,2,3")
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--logspace", action="store_true",
                   help="10 log-spaced points up to a fifth of the graph")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", help="summarize an experiment's results CSV")
    p.add_argument("--results", required=True)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("graph-stats", help="diameter, radius, components")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph_stats)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return 3
    except (ConfigError, InvalidInputError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
