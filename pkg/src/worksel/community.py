"""Deterministic multilevel modularity community detection.

Classic two-phase multilevel scheme: repeated single-vertex moves that
strictly improve modularity, then aggregation of communities into
super-vertices, until a whole level makes no move.  Every arithmetic
comparison is on exact integers (modularity scaled by 4m^2), and every
scan order and tie-break is fixed, so repeated runs return bit-identical
partitions:

* vertices are scanned in ascending original-ID order (super-vertices by
  the lowest original ID they contain);
* a vertex moves only for a strictly positive gain; among equal best
  gains the lowest community ID wins;
* aggregated communities are relabeled by the lowest original ID inside.

The community count is parameter-free; it depends only on the graph.
"""

import csv
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError, UndefinedModularityError
from .graph import SocialGraph


@dataclass(frozen=True)
class Partition:
    """Vertex-to-community assignment with dense community IDs 1..n_c."""

    assignment: dict
    n_c: int

    def communities(self):
        """Community ID -> sorted list of member vertex IDs."""
        groups = {}
        for v, c in self.assignment.items():
            groups.setdefault(c, []).append(v)
        return {c: sorted(vs) for c, vs in sorted(groups.items())}

    def save(self, path):
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["vertex_id", "community_id"])
            for v in sorted(self.assignment):
                writer.writerow([v, self.assignment[v]])

    @classmethod
    def load(cls, path):
        assignment = {}
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            for row in reader:
                if not row:
                    continue
                assignment[int(row[0])] = int(row[1])
        return cls(assignment=assignment, n_c=len(set(assignment.values())))


def _normalize_partition(g, partition):
    assignment = partition.assignment if isinstance(partition, Partition) \
        else dict(partition)
    missing = set(g.ids) - set(assignment)
    if missing or set(assignment) - set(g.ids):
        raise InvalidInputError("partition does not cover the vertex set")
    return assignment


def modularity(g, partition):
    """Newman-Girvan modularity of a partition, computed exactly."""
    m = g.n_edges
    if m == 0:
        raise UndefinedModularityError("modularity undefined without edges")
    assignment = _normalize_partition(g, partition)
    internal = {}
    degree_sum = {}
    for v in g.ids:
        degree_sum[assignment[v]] = degree_sum.get(assignment[v], 0) + g.degree(v)
    for u, v in g.edges():
        if assignment[u] == assignment[v]:
            internal[assignment[u]] = internal.get(assignment[u], 0) + 1
    q = Fraction(0)
    for c, d in degree_sum.items():
        q += Fraction(internal.get(c, 0), m) - Fraction(d, 2 * m) ** 2
    return float(q)


class _Level:
    """One aggregation level: weighted graph over super-vertices.

    ``labels[i]`` is the lowest original vertex ID merged into
    super-vertex i; the vertex order is ascending by label.
    """

    def __init__(self, labels, weights, loops):
        self.labels = labels
        self.weights = weights          # list of dicts: neighbor -> weight
        self.loops = loops              # self-loop weight per vertex
        self.strength = [
            sum(w.values()) + 2 * loops[i] for i, w in enumerate(weights)
        ]
        self.two_m = sum(self.strength)

    N_SCAN_RULES = 8

    def scan_order(self, rule):
        """Deterministic vertex scan sequence for the local-move phase.

        Rule 0 is the canonical ascending-label order; the others are
        fixed alternatives (descending label, strength/label sorts, BFS
        frontier orders) that explore different move sequences without
        introducing randomness.
        """
        n = len(self.labels)
        if rule == 0:
            return range(n)             # labels ascend with the index
        if rule == 1:
            return range(n - 1, -1, -1)
        if rule == 2:
            return sorted(range(n), key=lambda v: (self.strength[v], v))
        if rule == 3:
            return sorted(range(n), key=lambda v: (-self.strength[v], v))
        if rule == 4:
            return sorted(range(n), key=lambda v: (self.strength[v], -v))
        if rule == 5:
            return sorted(range(n), key=lambda v: (-self.strength[v], -v))
        bfs = self._bfs_order()
        if rule == 6:
            return bfs
        return bfs[::-1]

    def _bfs_order(self):
        """Breadth-first order from the strongest vertex of each component."""
        n = len(self.labels)
        seen = [False] * n
        order = []
        starts = sorted(range(n), key=lambda v: (-self.strength[v], v))
        for start in starts:
            if seen[start]:
                continue
            seen[start] = True
            queue = [start]
            while queue:
                v = queue.pop(0)
                order.append(v)
                for u in sorted(self.weights[v]):
                    if not seen[u]:
                        seen[u] = True
                        queue.append(u)
        return order

    def local_moves(self, initial=None, rule=0):
        """Modularity-ascending single-vertex moves until a full quiet sweep.

        Starts from singletons, or from ``initial`` (community index per
        vertex, indices below the vertex count).  Returns the community
        index per vertex and whether anything moved.  Gains are compared
        as integers scaled by 4m^2.
        """
        n = len(self.labels)
        if initial is None:
            comm = list(range(n))
            comm_strength = list(self.strength)
        else:
            comm = list(initial)
            comm_strength = [0] * n
            for v, c in enumerate(comm):
                comm_strength[c] += self.strength[v]
        two_m = self.two_m
        order = list(self.scan_order(rule))
        moved_any = False
        while True:
            moves = 0
            for v in order:
                wv = self.weights[v]
                if not wv:
                    continue
                a = comm[v]
                k_v = self.strength[v]
                to_comm = {}
                for u, w in wv.items():
                    c = comm[u]
                    to_comm[c] = to_comm.get(c, 0) + w
                w_va = to_comm.get(a, 0)
                d_a = comm_strength[a]
                best_gain = 0
                best_comm = a
                for c in sorted(to_comm):
                    if c == a:
                        continue
                    w_vc = to_comm[c]
                    d_c = comm_strength[c]
                    # gain scaled by 4m^2 (note 4m == 2 * two_m)
                    gain = (2 * two_m * (w_vc - w_va)
                            - 2 * k_v * (d_c - d_a) - 2 * k_v * k_v)
                    if gain > best_gain:
                        best_gain = gain
                        best_comm = c
                if best_comm != a:
                    comm[v] = best_comm
                    comm_strength[a] -= k_v
                    comm_strength[best_comm] += k_v
                    moves += 1
            if moves == 0:
                break
            moved_any = True
        return comm, moved_any

    def aggregate(self, comm):
        """Merge communities into super-vertices, relabeled and re-sorted
        by the lowest original ID each contains."""
        members = {}
        for v, c in enumerate(comm):
            members.setdefault(c, []).append(v)
        new_labels = sorted(min(self.labels[v] for v in vs)
                            for vs in members.values())
        label_to_new = {lab: i for i, lab in enumerate(new_labels)}
        old_to_new = {}
        for c, vs in members.items():
            old_to_new[c] = label_to_new[min(self.labels[v] for v in vs)]
        new_n = len(new_labels)
        weights = [{} for _ in range(new_n)]
        loops = [0] * new_n
        for v in range(len(self.labels)):
            nv = old_to_new[comm[v]]
            loops[nv] += self.loops[v]
            for u, w in self.weights[v].items():
                if u < v:
                    continue
                nu = old_to_new[comm[u]]
                if nu == nv:
                    loops[nv] += w
                else:
                    weights[nv][nu] = weights[nv].get(nu, 0) + w
                    weights[nu][nv] = weights[nu].get(nv, 0) + w
        vertex_map = [old_to_new[c] for c in comm]
        return _Level(new_labels, weights, loops), vertex_map


def _multilevel(base, n_vertices, rule):
    """One full multilevel ascent under a fixed scan-order rule.

    After the usual descent (local moves, aggregate, repeat until a level
    is quiet) the local-move phase runs once more on the original graph
    seeded with the result; if any single vertex still improves the
    partition, the whole descent restarts from the refined assignment.
    Modularity strictly increases each round, so this terminates, and it
    routinely escapes the coarse local optima aggregation locks in.
    """
    membership = list(range(n_vertices))
    first_round = True
    while True:
        comm, moved = base.local_moves(
            initial=None if first_round else membership, rule=rule)
        if not moved and not first_round:
            break
        first_round = False
        level, vertex_map = base.aggregate(comm)
        membership = list(vertex_map)
        while True:
            comm_up, moved_up = level.local_moves(rule=rule)
            if not moved_up:
                break
            level, vertex_map = level.aggregate(comm_up)
            membership = [vertex_map[x] for x in membership]
        if not moved:
            break
    return membership


def _partition_score(base, membership):
    """Exact integer modularity score (Q scaled by 4m^2) of a membership."""
    internal = {}
    degree = {}
    for v, c in enumerate(membership):
        degree[c] = degree.get(c, 0) + base.strength[v]
        internal[c] = internal.get(c, 0) + base.loops[v]
    for v, w in enumerate(base.weights):
        cv = membership[v]
        for u, weight in w.items():
            if u > v and membership[u] == cv:
                internal[cv] += weight
    two_m = base.two_m
    return sum(2 * two_m * internal[c] - degree[c] ** 2 for c in degree)


def detect_communities(g):
    """Partition a graph by deterministic multilevel modularity ascent.

    The multilevel pipeline runs once per fixed scan-order rule, and the
    partition with the highest exact modularity score wins (ties keep the
    canonical ascending-ID order's result).  Everything is deterministic
    and parameter-free: no randomness, no tunable community count, and
    repeated runs return bit-identical assignments.
    """
    if g.n_vertices == 0:
        raise InvalidInputError("cannot partition an empty graph")
    labels = list(g.ids)
    weights = [dict.fromkeys(nbrs, 1) for nbrs in g.adj]
    base = _Level(labels, weights, [0] * g.n_vertices)
    best_membership = None
    best_score = None
    for rule in range(_Level.N_SCAN_RULES):
        membership = _multilevel(base, g.n_vertices, rule)
        score = _partition_score(base, membership)
        if best_score is None or score > best_score:
            best_score = score
            best_membership = membership
    community_ids = sorted(set(best_membership))
    dense = {c: i + 1 for i, c in enumerate(community_ids)}
    assignment = {g.ids[v]: dense[best_membership[v]]
                  for v in range(g.n_vertices)}
    return Partition(assignment=assignment, n_c=len(community_ids))


def community_graph(g, partition):
    """Graph of communities; an edge joins two communities whenever any of
    their members are adjacent in the base graph."""
    assignment = _normalize_partition(g, partition)
    comm_ids = set(assignment.values())
    edges = set()
    for u, v in g.edges():
        cu, cv = assignment[u], assignment[v]
        if cu != cv:
            edges.add((min(cu, cv), max(cu, cv)))
    return SocialGraph.from_edges(edges, vertices=comm_ids)
