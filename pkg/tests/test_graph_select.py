import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from worksel.community import community_graph, detect_communities
from worksel.errors import InvalidInputError
from worksel.graph import SocialGraph
from worksel.graph_select import (
    msr_reward,
    quantify_workers_per_community,
    select_workers_graph_aware,
    size_pro_rata,
    spread_vertices,
)

from .oracles import best_dispersion_oracle


class TestReward:
    @pytest.mark.parametrize("d,expected", [
        (0, 0), (1, 0), (2, 1), (3, 2), (7, 2), (math.inf, 2),
    ])
    def test_values(self, d, expected):
        assert msr_reward(d) == expected

    def test_negative_rejected(self):
        with pytest.raises(InvalidInputError):
            msr_reward(-1)


class TestSpread:
    def test_path_endpoints(self, path5):
        assert spread_vertices(path5, 2) == [0, 4]

    def test_all_vertices(self, path5):
        assert spread_vertices(path5, 5) == [0, 1, 2, 3, 4]

    def test_cycle_six_greedy(self):
        # greedy picks 0 (lowest ID at max ecc), then 3 (distance 3), then
        # 1 by ID among the all-tied remainder; min pairwise distance 1,
        # half of the exhaustive optimum {0, 2, 4} at distance 2
        g = SocialGraph.from_edges(
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
        picked = spread_vertices(g, 3)
        assert picked == [0, 1, 3]
        dm = g.distances(g.ids)
        greedy_min = min(dm.get(u, v)
                         for u, v in itertools.combinations(picked, 2))
        best_min, best_set = best_dispersion_oracle(
            g.ids, dm.get, 3)
        assert best_set == (0, 2, 4)
        assert greedy_min >= best_min / 2

    def test_avoid_seeds_distance_but_is_removed(self, path5):
        picked = spread_vertices(path5, 2, avoid=[0])
        assert 0 not in picked
        assert len(picked) == 2
        # farthest-first from the avoided end: 4 first, then the tie on
        # min-distance 2 between {1, 2} falls to 2 on the reward sum
        assert picked == [2, 4]

    def test_avoid_bound_enforced(self, path5):
        with pytest.raises(InvalidInputError):
            spread_vertices(path5, 5, avoid=[0])

    def test_zero_picks(self, path5):
        assert spread_vertices(path5, 0) == []

    def test_deterministic(self, two_cliques_bridge):
        a = spread_vertices(two_cliques_bridge, 4)
        b = spread_vertices(two_cliques_bridge, 4)
        assert a == b

    def test_disconnected_prefers_other_component(self):
        g = SocialGraph.from_edges([(0, 1), (2, 3)])
        picked = spread_vertices(g, 2)
        # initial pick is lowest ID (all eccentricities infinite), the
        # second must come from the unreachable component
        assert picked[0] == 0
        assert picked[1] in (2, 3)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 12).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                    .map(lambda e: (min(e), max(e)))
                    .filter(lambda e: e[0] != e[1]),
                    max_size=n * (n - 1) // 2),
            st.integers(2, 4))))
    def test_greedy_within_half_of_optimum_when_connected(self, case):
        n, edges, k = case
        g = SocialGraph.from_edges(edges, vertices=range(n))
        if len(g.components()) != 1 or k > n:
            return
        picked = spread_vertices(g, k)
        dm = g.distances(g.ids)
        greedy_min = min(dm.get(u, v)
                         for u, v in itertools.combinations(picked, 2))
        best_min, _ = best_dispersion_oracle(g.ids, dm.get, k)
        assert greedy_min * 2 >= best_min


class TestSizeProRata:
    def test_example_sixty_thirty_ten(self):
        quota = size_pro_rata([60, 30, 10], 10)
        assert quota.per_community == {1: 6, 2: 3, 3: 1}

    def test_symmetric(self):
        assert size_pro_rata([10, 10], 4).per_community == {1: 2, 2: 2}

    def test_single_community(self):
        assert size_pro_rata([100], 7).per_community == {1: 7}

    def test_floor_of_one_survives_rounding(self):
        quota = size_pro_rata([97, 1, 1, 1], 4).per_community
        assert quota == {1: 1, 2: 1, 3: 1, 4: 1}

    def test_capped_at_community_size(self):
        quota = size_pro_rata([1, 1, 100], 12).per_community
        assert quota == {1: 1, 2: 1, 3: 10}

    def test_conservation_property(self):
        import random

        rng = random.Random(7)
        for _ in range(200):
            n_c = rng.randint(1, 8)
            sizes = [rng.randint(1, 50) for _ in range(n_c)]
            total = sum(sizes)
            n = rng.randint(n_c, total)
            quota = size_pro_rata(sizes, n).per_community
            assert sum(quota.values()) == n
            assert all(quota[c] >= 1 for c in quota)
            assert all(quota[i + 1] <= sizes[i] for i in range(n_c))

    def test_fewer_workers_than_communities_rejected(self):
        with pytest.raises(InvalidInputError):
            size_pro_rata([5, 5, 5], 2)

    def test_more_workers_than_vertices_rejected(self):
        with pytest.raises(InvalidInputError):
            size_pro_rata([2, 2], 5)


class TestQuantify:
    def test_equal_counts_one_each(self, three_triangles):
        part = detect_communities(three_triangles)
        cg = community_graph(three_triangles, part)
        quota = quantify_workers_per_community(three_triangles, part, cg, 3)
        assert quota.per_community == {1: 1, 2: 1, 3: 1}

    def test_path_shaped_community_graph_prefers_ends(self):
        # five communities in a path; 2 workers land in the end communities
        blocks = [list(range(5 * i, 5 * i + 5)) for i in range(5)]
        edges = []
        for block in blocks:
            edges.extend((u, v) for u in block for v in block if u < v)
        for a, b in zip(blocks, blocks[1:]):
            edges.append((a[-1], b[0]))
        g = SocialGraph.from_edges(edges)
        part = {v: i + 1 for i, block in enumerate(blocks) for v in block}
        from worksel.community import Partition

        partition = Partition(assignment=part, n_c=5)
        cg = community_graph(g, partition)
        quota = quantify_workers_per_community(g, partition, cg, 2)
        assert quota.per_community == {1: 1, 2: 0, 3: 0, 4: 0, 5: 1}

    def test_pro_rata_branch(self, two_cliques_bridge):
        part = detect_communities(two_cliques_bridge)
        cg = community_graph(two_cliques_bridge, part)
        quota = quantify_workers_per_community(two_cliques_bridge, part, cg, 6)
        assert sum(quota.per_community.values()) == 6
        assert quota.per_community == {1: 3, 2: 3}

    def test_quota_conservation_all_branches(self, two_cliques_bridge):
        part = detect_communities(two_cliques_bridge)
        cg = community_graph(two_cliques_bridge, part)
        for n in range(1, 11):
            quota = quantify_workers_per_community(
                two_cliques_bridge, part, cg, n)
            assert sum(quota.per_community.values()) == n


class TestSelect:
    def test_all_vertices(self, two_cliques_bridge):
        ws = select_workers_graph_aware(two_cliques_bridge, 10)
        assert ws.workers == frozenset(two_cliques_bridge.ids)

    def test_two_cliques_one_each(self, two_cliques_bridge):
        ws = select_workers_graph_aware(two_cliques_bridge, 2)
        workers = ws.sorted_workers()
        assert len(workers) == 2
        assert sum(1 for w in workers if w < 5) == 1
        assert sum(1 for w in workers if w >= 5) == 1

    def test_single_worker(self, two_cliques_bridge):
        ws = select_workers_graph_aware(two_cliques_bridge, 1)
        assert len(ws.workers) == 1

    def test_too_many_rejected(self, path5):
        with pytest.raises(InvalidInputError):
            select_workers_graph_aware(path5, 6)

    def test_deterministic(self, two_cliques_bridge):
        a = select_workers_graph_aware(two_cliques_bridge, 4)
        b = select_workers_graph_aware(two_cliques_bridge, 4)
        assert a.workers == b.workers

    def test_respects_quotas(self, three_triangles):
        ws = select_workers_graph_aware(three_triangles, 5)
        quotas = ws.provenance["quotas"]
        part = detect_communities(three_triangles)
        per_comm = {}
        for w in ws.workers:
            c = part.assignment[w]
            per_comm[c] = per_comm.get(c, 0) + 1
        assert per_comm == {c: q for c, q in quotas.items() if q}

    def test_avoid_adjacent_flag_changes_nothing_small(self, three_triangles):
        # disconnected communities: no adjacent workers to avoid
        a = select_workers_graph_aware(three_triangles, 3)
        b = select_workers_graph_aware(three_triangles, 3,
                                       avoid_adjacent_workers=True)
        assert a.workers == b.workers

    def test_method_tag(self, path5):
        ws = select_workers_graph_aware(path5, 2)
        assert ws.method == "graph-aware"
