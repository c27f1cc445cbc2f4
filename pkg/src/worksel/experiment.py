"""Experiment workflow: solution runs, metrics, and cross-run reports.

Two pipelines share one metrics stage.  The random pipeline samples
workers uniformly with a per-run seed derived by hashing
``run:<base>:<n>:<e>``, so any run can be replayed bit-exactly from the
manifest alone; the graph-aware pipeline is deterministic outright and
needs a single execution per point.  Reports aggregate clique sizes per
(method, k, n) with order-statistic confidence bounds and compare them
against the threshold curves.
"""

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field, asdict

try:
    import tomllib
except ImportError:                     # Python 3.10
    import tomli as tomllib

from . import __version__
from .analysis import t_max, upper_confidence_bound, worker_power_masks
from .clique import max_clique
from .community import detect_communities
from .errors import ConfigError
from .graph import load_edge_list
from .graph_select import select_workers_graph_aware
from .sampling import ChaChaStream, int_to_key, sample_without_replacement

METHOD_RANDOM = "arrangement-random"
METHOD_GRAPH_AWARE = "size-pro-rata-ml"

# printed experiment inputs: nine low points, then 1000..3000 by 200
DEFAULT_N_WORKERS = [10, 16, 43, 70, 114, 186, 304, 495, 807] + \
    [1000 + 200 * k for k in range(11)]

LOW_N_CUTOFF = 807

RESULT_FIELDS = ["run_id", "method", "n_workers", "k", "clique_size",
                 "t_max_strict", "t_max_relaxed", "collusion_flag",
                 "provenance"]


def default_executions(n):
    """100 executions for affordable points, 5 where clique search is costly."""
    return 100 if n <= LOW_N_CUTOFF else 5


def logspace_points(vertex_count, points=10, start=10):
    """Exponential sweep from ``start`` to a fifth of the graph."""
    import numpy as np

    top = max(start, vertex_count // 5)
    values = np.logspace(np.log10(start), np.log10(top), points)
    return sorted({int(round(v)) for v in values})


@dataclass
class ExperimentConfig:
    graph_path: str
    method: str
    n_workers_list: list = field(default_factory=lambda: list(DEFAULT_N_WORKERS))
    executions_per_point: int = None    # None -> default_executions rule
    k_list: list = field(default_factory=lambda: [1, 2, 3])
    confidence: float = 0.95
    base_run_seed: int = 0

    def __post_init__(self):
        if self.method not in (METHOD_RANDOM, METHOD_GRAPH_AWARE):
            raise ConfigError("unknown method %r" % (self.method,))
        if not self.n_workers_list:
            raise ConfigError("n_workers_list is empty")
        if any(n < 1 for n in self.n_workers_list):
            raise ConfigError("worker counts must be >= 1")
        if self.executions_per_point is not None \
                and self.executions_per_point < 1:
            raise ConfigError("executions_per_point must be >= 1")
        if not set(self.k_list) <= {1, 2, 3}:
            raise ConfigError("k values must be within {1, 2, 3}")
        if not 0 < self.confidence < 1:
            raise ConfigError("confidence must be in (0, 1)")

    def executions(self, n):
        if self.executions_per_point is not None:
            return self.executions_per_point
        return default_executions(n)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f: data[f] for f in cls.__dataclass_fields__ if f in data}
        extra = set(data) - set(known)
        if extra:
            raise ConfigError("unknown config keys: %s" % sorted(extra))
        try:
            return cls(**known)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path):
        with open(path, "rb") as f:
            try:
                raw = tomllib.load(f)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError("bad config file: %s" % exc) from exc
        aliases = {"graph": "graph_path", "n_workers": "n_workers_list",
                   "executions": "executions_per_point", "k": "k_list",
                   "base_seed": "base_run_seed"}
        data = {aliases.get(k, k): v for k, v in raw.items()}
        return cls.from_dict(data)


def run_seed_value(base, n, execution):
    """Portable per-run seed: first 8 bytes of SHA-256 over the run label."""
    label = "run:%d:%d:%d" % (base, n, execution)
    return int.from_bytes(
        hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")


@dataclass
class RunManifest:
    config: dict
    graph_sha256: str
    version: str
    per_run_seeds: dict
    created: str

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True)
            f.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return cls(**{k: data[k] for k in cls.__dataclass_fields__})


def _sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _metric_rows(g, workers, k_list, run_id, method, n, provenance):
    rows = []
    bounds = t_max(n)
    for k in sorted(k_list):
        ids, masks = worker_power_masks(g, workers, k)
        size, _ = max_clique(masks, witness=False) if ids else (0, ())
        rows.append({
            "run_id": run_id,
            "method": method,
            "n_workers": n,
            "k": k,
            "clique_size": size,
            "t_max_strict": bounds.t_max_strict,
            "t_max_relaxed": bounds.t_max_relaxed,
            "collusion_flag": int(size >= bounds.t_max_strict),
            "provenance": provenance,
        })
    return rows


def run_experiment(config, graph=None, progress=None):
    """Execute the configured pipeline; returns (rows, manifest)."""
    if graph is None:
        graph = load_edge_list(config.graph_path)
    bad = [n for n in config.n_workers_list if n > graph.n_vertices]
    if bad:
        raise ConfigError(
            "worker counts beyond graph size %d: %r" % (graph.n_vertices, bad))
    rows = []
    seeds = {}
    if config.method == METHOD_RANDOM:
        vertices = list(graph.ids)
        for n in sorted(config.n_workers_list):
            for e in range(config.executions(n)):
                seed_value = run_seed_value(config.base_run_seed, n, e)
                run_id = "n%d-e%d" % (n, e)
                seeds[run_id] = str(seed_value)
                stream = ChaChaStream(int_to_key(seed_value))
                workers = sample_without_replacement(vertices, n, stream)
                rows.extend(_metric_rows(graph, workers, config.k_list,
                                         run_id, config.method, n,
                                         str(seed_value)))
                if progress:
                    progress(run_id)
    else:
        partition = detect_communities(graph)
        for n in sorted(config.n_workers_list):
            run_id = "n%d-e0" % n
            seeds[run_id] = "deterministic"
            ws = select_workers_graph_aware(graph, n, partition=partition)
            rows.extend(_metric_rows(graph, ws.sorted_workers(),
                                     config.k_list, run_id, config.method, n,
                                     "deterministic"))
            if progress:
                progress(run_id)
    manifest = RunManifest(
        config=config.to_dict(),
        graph_sha256=_sha256_file(config.graph_path),
        version=__version__,
        per_run_seeds=seeds,
        created=time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
    )
    return rows, manifest


def write_results_csv(rows, path_or_file):
    """Rows sorted by (method, n, k, run) for reproducible bytes."""
    def _write(f):
        writer = csv.DictWriter(f, fieldnames=RESULT_FIELDS)
        writer.writeheader()
        for row in sorted(rows, key=lambda r: (r["method"], r["n_workers"],
                                               r["k"], r["run_id"])):
            writer.writerow(row)

    if isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__"):
        with open(path_or_file, "w", encoding="utf-8", newline="") as f:
            _write(f)
    else:
        _write(path_or_file)


def results_csv_bytes(rows):
    buf = io.StringIO()
    write_results_csv(rows, buf)
    return buf.getvalue().encode("utf-8")


def read_results_csv(path):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            for field_name in ("n_workers", "k", "clique_size",
                               "t_max_strict", "t_max_relaxed",
                               "collusion_flag"):
                row[field_name] = int(row[field_name])
            rows.append(row)
    return rows


def _linear_fit_slope(points):
    """Least-squares slope of clique size against worker count."""
    if len(points) < 2:
        return None
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    n = len(points)
    mx = sum(xs) / n
    my = sum(ys) / n
    denom = sum((x - mx) ** 2 for x in xs)
    if denom == 0:
        return None
    return sum((x - mx) * (y - my) for x, y in points) / denom


def emit_report(rows, confidence=0.95):
    """Cross-execution summary per (method, k).

    Points carry the mean clique size, the one-sided upper bound at
    (1 + confidence) / 2, a two-sided interval, the threshold overlays,
    and the collusion verdict (upper bound reaching the strict t_max).
    The slope is fit over the low-n regime only.
    """
    if not rows:
        raise ConfigError("no result rows to report on")
    upper_level = (1 + confidence) / 2
    lower_level = (1 - confidence) / 2
    series = {}
    for row in rows:
        series.setdefault((row["method"], row["k"]), {}) \
            .setdefault(row["n_workers"], []).append(row["clique_size"])
    report = {"confidence": confidence, "series": {}}
    plot_rows = []
    for (method, k) in sorted(series):
        points = []
        for n in sorted(series[(method, k)]):
            sizes = sorted(series[(method, k)][n])
            bounds = t_max(n)
            mean = sum(sizes) / len(sizes)
            m_max = upper_confidence_bound(sizes, upper_level)
            ci_lower = upper_confidence_bound(sizes, lower_level)
            point = {
                "n_workers": n,
                "executions": len(sizes),
                "mean_clique": mean,
                "ci_lower": ci_lower,
                "ci_upper": m_max,
                "m_max": m_max,
                "t_max_strict": bounds.t_max_strict,
                "t_max_relaxed": bounds.t_max_relaxed,
                "collusion_possible": bool(m_max >= bounds.t_max_strict),
            }
            points.append(point)
            plot_rows.append({"method": method, "k": k, **point})
        slope = _linear_fit_slope(
            [(p["n_workers"], p["mean_clique"]) for p in points
             if p["n_workers"] <= LOW_N_CUTOFF])
        report["series"]["%s/k%d" % (method, k)] = {
            "method": method,
            "k": k,
            "points": points,
            "slope_low_n": slope,
        }
    return report, plot_rows


PLOT_FIELDS = ["method", "k", "n_workers", "executions", "mean_clique",
               "ci_lower", "ci_upper", "m_max", "t_max_strict",
               "t_max_relaxed", "collusion_possible"]


def write_plot_csv(plot_rows, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=PLOT_FIELDS)
        writer.writeheader()
        for row in plot_rows:
            writer.writerow(row)
