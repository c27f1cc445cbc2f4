import os

import pytest

from worksel.graph import SocialGraph, load_edge_list

FACEBOOK_PATH = os.environ.get(
    "WORKSEL_FACEBOOK_PATH",
    os.path.join(os.path.dirname(__file__), "..", "data",
                 "facebook_combined.txt.gz"),
)


def facebook_available():
    return os.path.exists(FACEBOOK_PATH)


@pytest.fixture(scope="session")
def facebook():
    if not facebook_available():
        pytest.fail(
            "facebook_combined dataset missing at %s (set "
            "WORKSEL_FACEBOOK_PATH or run scripts/fetch_facebook_combined.py)"
            % FACEBOOK_PATH)
    return load_edge_list(FACEBOOK_PATH)


@pytest.fixture(scope="session")
def facebook_partition(facebook):
    from worksel.community import detect_communities

    return detect_communities(facebook)


@pytest.fixture
def path5():
    return SocialGraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def two_cliques_bridge():
    """Two 5-cliques joined by a single bridge edge between 0 and 5."""
    edges = []
    for base in (0, 5):
        vs = range(base, base + 5)
        edges.extend((u, v) for u in vs for v in vs if u < v)
    edges.append((0, 5))
    return SocialGraph.from_edges(edges)


@pytest.fixture
def three_triangles():
    return SocialGraph.from_edges(
        [(0, 1), (1, 2), (0, 2),
         (3, 4), (4, 5), (3, 5),
         (6, 7), (7, 8), (6, 8)])
