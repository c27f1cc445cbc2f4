"""Collusion-resistant worker set selection toolkit.

Two selection methods over a participant population: verifiable random
selection seeded by the ordering of commits on an append-only ledger, and
social-graph-aware selection that spreads workers across and within
detected communities.  Risk is quantified by threshold-scheme bounds, the
exact hypergeometric law, and the largest clique of workers within graph
distance k.
"""

__version__ = "0.1.0"

from .analysis import (
    CliqueReport,
    ThresholdBounds,
    collusion_confidence_curve,
    collusion_possible,
    constraints_ok,
    distance_k_clique,
    hypergeom,
    hypergeom_pmf,
    t_max,
    upper_confidence_bound,
    worker_distance_stats,
)
from .combinatorics import (
    arrangement_number,
    arrangement_space,
    combination_number,
    combination_space,
    output_space_size,
    permutation_number,
    permutation_space,
)
from .community import Partition, community_graph, detect_communities, modularity
from .errors import (
    ConfigError,
    InvalidInputError,
    ParseError,
    RejectedCommitError,
    UndefinedModularityError,
    WorkselError,
)
from .experiment import (
    DEFAULT_N_WORKERS,
    ExperimentConfig,
    RunManifest,
    emit_report,
    run_experiment,
)
from .graph import SocialGraph, bfs_distances, graph_stats, load_edge_list
from .graph_select import (
    WorkerQuota,
    msr_reward,
    quantify_workers_per_community,
    select_workers_graph_aware,
    size_pro_rata,
    spread_vertices,
)
from .ledger import Ledger, LedgerRecord, ledger_from_sequence, simulate_commit_round
from .seed import (
    LowEntropyWarning,
    Seed,
    WorkerSet,
    derive_seed,
    expand_multi_commit,
    load_roster,
    sample_workers,
    seed_report,
)
