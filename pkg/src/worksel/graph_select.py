"""Social-graph-aware worker selection.

Workers are apportioned across detected communities, then spread out
inside each community by a greedy max-min-distance rule.  Everything is
deterministic: identical inputs always yield the identical worker set,
which is what makes the selection verifiable by any participant.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .community import community_graph, detect_communities
from .errors import InvalidInputError
from .graph import eccentricities
from .seed import WorkerSet


@dataclass(frozen=True)
class WorkerQuota:
    per_community: dict

    @property
    def total(self):
        return sum(self.per_community.values())


def msr_reward(d):
    """Reward for a worker at hop distance d: 0 (adjacent or same), 1 (two
    hops), 2 (three or more, including unreachable)."""
    if d is None or d != d or d < 0:
        raise InvalidInputError("distance must be >= 0 or inf")
    if d <= 1:
        return 0
    if d == 2:
        return 1
    return 2


def _initial_vertex(g):
    """Most peripheral start: maximum eccentricity, ties to the lowest ID.

    In a disconnected graph every vertex sees an unreachable one, so all
    eccentricities are infinite and the lowest ID wins outright.
    """
    if len(g.components()) > 1:
        return g.ids[0]
    ecc = eccentricities(g)
    best = g.ids[0]
    for v in g.ids:                     # ids ascending, so first max wins
        if ecc[v] > ecc[best]:
            best = v
    return best


def spread_vertices(g, n, avoid=()):
    """Greedy dispersion: repeatedly pick the vertex farthest from all
    chosen so far.

    Ties on the max-min distance fall to the largest summed reward over
    distances to chosen vertices, then to the lowest vertex ID.  When an
    avoid set is given it seeds the chosen set (so new picks keep their
    distance from it) and is removed from the result.
    """
    avoid = sorted(set(avoid))
    unknown = set(avoid) - set(g.ids)
    if unknown:
        raise InvalidInputError("avoid vertices not in graph: %r"
                                % sorted(unknown)[:5])
    if n < 0 or n + len(avoid) > g.n_vertices:
        raise InvalidInputError(
            "cannot spread %d vertices (plus %d avoided) in a graph of %d"
            % (n, len(avoid), g.n_vertices))
    if n == 0:
        return []
    if avoid:
        selected = list(avoid)
        picks_left = n
    else:
        selected = [_initial_vertex(g)]
        picks_left = n - 1
    chosen_set = set(selected)
    min_dist = {}
    reward_sum = {}
    for v in g.ids:
        min_dist[v] = math.inf
        reward_sum[v] = 0
    for s in selected:
        row = g.distances([s]).matrix[0]
        for i, v in enumerate(g.ids):
            d = row[i]
            if d < min_dist[v]:
                min_dist[v] = d
            reward_sum[v] += msr_reward(d)
    for _ in range(picks_left):
        best = None
        for v in g.ids:
            if v in chosen_set:
                continue
            key = (min_dist[v], reward_sum[v])
            if best is None or key > best_key:
                best, best_key = v, key
        selected.append(best)
        chosen_set.add(best)
        row = g.distances([best]).matrix[0]
        for i, v in enumerate(g.ids):
            d = row[i]
            if d < min_dist[v]:
                min_dist[v] = d
            reward_sum[v] += msr_reward(d)
    return sorted(v for v in selected if v not in avoid)


def size_pro_rata(community_sizes, n_workers):
    """Largest-remainder apportionment of workers by community size, with
    every community guaranteed at least one worker.

    A community holding 10% of the vertices receives 10% of the workers,
    up to rounding.  Bonus seats for fractional remainders go to the
    largest remainder first, ties to the larger community, then the lower
    community ID.  Quotas never exceed community size; overflow moves to
    the next community in the same order.
    """
    sizes = dict(community_sizes) if isinstance(community_sizes, dict) else \
        {i + 1: s for i, s in enumerate(community_sizes)}
    n_c = len(sizes)
    total = sum(sizes.values())
    if n_workers < n_c:
        raise InvalidInputError("need at least one worker per community")
    if n_workers > total:
        raise InvalidInputError("more workers than vertices")
    quota = {c: Fraction(n_workers * sizes[c], total) for c in sizes}
    alloc = {c: int(quota[c]) for c in sizes}
    bonus_order = sorted(
        sizes, key=lambda c: (-(quota[c] - alloc[c]), -sizes[c], c))
    for c in bonus_order[: n_workers - sum(alloc.values())]:
        alloc[c] += 1
    # every community gets one before any community gets several
    deficit = 0
    for c in sizes:
        if alloc[c] == 0:
            alloc[c] = 1
            deficit += 1
    while deficit > 0:
        donor = max((c for c in sizes if alloc[c] >= 2),
                    key=lambda c: (alloc[c] - quota[c], -sizes[c], -c))
        alloc[donor] -= 1
        deficit -= 1
    # cap at community size, pushing overflow down the bonus order
    while True:
        over = [c for c in sizes if alloc[c] > sizes[c]]
        if not over:
            break
        spill = 0
        for c in over:
            spill += alloc[c] - sizes[c]
            alloc[c] = sizes[c]
        for c in bonus_order:
            if spill == 0:
                break
            room = sizes[c] - alloc[c]
            if room > 0:
                grant = min(room, spill)
                alloc[c] += grant
                spill -= grant
    return WorkerQuota(per_community=alloc)


def quantify_workers_per_community(g, partition, cgraph, n_workers):
    """How many workers each community receives.

    One per community when counts match; for fewer workers than
    communities, the workers go to communities spread out on the community
    graph; otherwise sizes decide pro rata with a floor of one each.
    """
    if n_workers < 1:
        raise InvalidInputError("n_workers must be >= 1")
    groups = partition.communities()
    n_c = len(groups)
    if n_c == n_workers:
        return WorkerQuota(per_community={c: 1 for c in groups})
    if n_c > n_workers:
        chosen = set(spread_vertices(cgraph, n_workers))
        return WorkerQuota(
            per_community={c: (1 if c in chosen else 0) for c in groups})
    sizes = {c: len(vs) for c, vs in groups.items()}
    return size_pro_rata(sizes, n_workers)


def select_workers_graph_aware(g, n_workers, partition=None,
                               avoid_adjacent_workers=False):
    """Pick ``n_workers`` spread across and within communities.

    With ``avoid_adjacent_workers`` the workers already placed in earlier
    (adjacent) communities join the spread as an avoid set, so picks near
    a community border also keep their distance from neighbors' workers;
    distances are then taken on the subgraph induced by the community plus
    those workers.  Default off: each community is treated independently.
    """
    if not 1 <= n_workers <= g.n_vertices:
        raise InvalidInputError(
            "n_workers must be in [1, %d]" % g.n_vertices)
    if partition is None:
        partition = detect_communities(g)
    cgraph = community_graph(g, partition)
    quotas = quantify_workers_per_community(g, partition, cgraph, n_workers)
    groups = partition.communities()
    workers = []
    adjacency = {c: set(cgraph.neighbors(c)) for c in cgraph.ids}
    placed = {}
    for c in sorted(groups):
        quota = quotas.per_community.get(c, 0)
        if quota == 0:
            continue
        members = groups[c]
        if avoid_adjacent_workers:
            avoid = sorted(
                w for nb in adjacency.get(c, ())
                for w in placed.get(nb, ()) )
            sub = g.induced_subgraph(set(members) | set(avoid))
            chosen = spread_vertices(sub, quota, avoid=avoid)
        else:
            sub = g.induced_subgraph(members)
            chosen = spread_vertices(sub, quota)
        placed[c] = chosen
        workers.extend(chosen)
    return WorkerSet(
        workers=frozenset(workers),
        method="graph-aware",
        provenance={"quotas": dict(sorted(quotas.per_community.items())),
                    "n": n_workers},
    )
