"""Undirected unweighted social graph: loading, BFS distances, statistics.

Vertices carry their original file IDs; internally they are dense 0-based
indices.  Graphs are immutable after construction, so concurrent read-only
queries are safe.  Bulk BFS runs through scipy's C-level csgraph routines;
distances are exact hop counts with ``inf`` marking unreachable pairs.
"""

import gzip
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import InvalidInputError, ParseError

UNREACHABLE = math.inf


class SocialGraph:
    def __init__(self, ids, adj):
        self.ids = tuple(ids)
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.adj = [tuple(sorted(nbrs)) for nbrs in adj]
        self._csr = None

    @classmethod
    def from_edges(cls, edges, vertices=None):
        """Build a simple undirected graph; self-loops and duplicates dropped.

        ``vertices`` adds isolated vertices not mentioned by any edge.
        """
        vs = set(vertices or ())
        clean = set()
        for u, v in edges:
            vs.add(u)
            vs.add(v)
            if u == v:
                continue
            clean.add((u, v) if u < v else (v, u))
        ids = sorted(vs)
        index = {v: i for i, v in enumerate(ids)}
        adj = [[] for _ in ids]
        for u, v in clean:
            adj[index[u]].append(index[v])
            adj[index[v]].append(index[u])
        return cls(ids, adj)

    @property
    def n_vertices(self):
        return len(self.ids)

    @property
    def n_edges(self):
        return sum(len(a) for a in self.adj) // 2

    def degree(self, vertex_id):
        return len(self.adj[self.index[vertex_id]])

    def neighbors(self, vertex_id):
        """Neighbor IDs of a vertex, ascending."""
        return tuple(self.ids[i] for i in self.adj[self.index[vertex_id]])

    def has_edge(self, u, v):
        iu = self.index[u]
        iv = self.index[v]
        return iv in self.adj[iu] if len(self.adj[iu]) <= len(self.adj[iv]) \
            else iu in self.adj[iv]

    def edges(self):
        """Canonical edge list as (u, v) ID pairs with u < v."""
        out = []
        for i, nbrs in enumerate(self.adj):
            for j in nbrs:
                if i < j:
                    out.append((self.ids[i], self.ids[j]))
        out.sort()
        return out

    def csr(self):
        if self._csr is None:
            indptr = [0]
            indices = []
            for nbrs in self.adj:
                indices.extend(nbrs)
                indptr.append(len(indices))
            self._csr = csr_matrix(
                (np.ones(len(indices), dtype=np.int8),
                 np.array(indices, dtype=np.int32),
                 np.array(indptr, dtype=np.int64)),
                shape=(self.n_vertices, self.n_vertices),
            )
        return self._csr

    def adjacency_bitsets(self):
        """Per-vertex neighbor sets as integer bitmasks over dense indices."""
        masks = []
        for nbrs in self.adj:
            m = 0
            for j in nbrs:
                m |= 1 << j
            masks.append(m)
        return masks

    def induced_subgraph(self, vertex_ids):
        """Subgraph on the given IDs; kept vertices retain their IDs."""
        keep = set(vertex_ids)
        unknown = keep - set(self.ids)
        if unknown:
            raise InvalidInputError("unknown vertices: %r" % sorted(unknown)[:5])
        edges = [(u, v) for u, v in self.edges() if u in keep and v in keep]
        return SocialGraph.from_edges(edges, vertices=keep)

    def distances(self, sources, limit=None):
        """Hop distances from each source (rows in ascending source order)."""
        srcs = sorted(set(sources))
        try:
            idx = [self.index[s] for s in srcs]
        except KeyError as exc:
            raise InvalidInputError("unknown source vertex %r" % (exc.args[0],))
        if not idx:
            return DistanceMatrix(sources=(), matrix=np.zeros((0, self.n_vertices)),
                                  graph=self)
        if self.n_vertices == 0:
            raise InvalidInputError("empty graph has no distances")
        mat = dijkstra(self.csr(), unweighted=True, indices=idx,
                       limit=np.inf if limit is None else limit)
        mat = np.atleast_2d(mat)
        return DistanceMatrix(sources=tuple(srcs), matrix=mat, graph=self)

    def components(self):
        """List of vertex-ID lists, one per connected component."""
        if self.n_vertices == 0:
            return []
        n, labels = connected_components(self.csr(), directed=False)
        comps = [[] for _ in range(n)]
        for i, lab in enumerate(labels):
            comps[lab].append(self.ids[i])
        comps.sort(key=lambda c: c[0])
        return comps

    def save_edge_list(self, path):
        with open(path, "w", encoding="utf-8") as f:
            for u, v in self.edges():
                f.write("%s %s\n" % (u, v))


@dataclass(frozen=True)
class DistanceMatrix:
    sources: tuple
    matrix: np.ndarray
    graph: SocialGraph

    def get(self, source_id, target_id):
        row = self.sources.index(source_id)
        return self.matrix[row][self.graph.index[target_id]]

    def row(self, source_id):
        return self.matrix[self.sources.index(source_id)]


@dataclass(frozen=True)
class ComponentStats:
    size: int
    diameter: int
    radius: int


@dataclass(frozen=True)
class GraphStats:
    connected: bool
    diameter: float
    radius: float
    eccentricities: dict
    components: tuple


def load_edge_list(path):
    """Read a whitespace-separated integer edge list (optionally gzipped)."""
    opener = gzip.open if str(path).endswith(".gz") else open
    edges = []
    vertices = set()
    with opener(path, "rt", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("expected two fields, got %d" % len(parts),
                                 line=lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
            vertices.add(u)
            vertices.add(v)
            edges.append((u, v))
    return SocialGraph.from_edges(edges, vertices=vertices)


def bfs_distances(g, sources):
    """Exact BFS hop distances from each source; inf marks unreachable."""
    return g.distances(sources)


def eccentricities(g, chunk=512):
    """Within-component eccentricity of every vertex."""
    ecc = {}
    n = g.n_vertices
    for start in range(0, n, chunk):
        idx = list(range(start, min(start + chunk, n)))
        mat = np.atleast_2d(dijkstra(g.csr(), unweighted=True, indices=idx))
        for row, i in zip(mat, idx):
            finite = row[np.isfinite(row)]
            ecc[g.ids[i]] = int(finite.max()) if finite.size else 0
    return ecc


def graph_stats(g):
    """Diameter, radius, and eccentricities; per component if disconnected."""
    if g.n_vertices == 0:
        raise InvalidInputError("empty graph has no stats")
    ecc = eccentricities(g)
    comps = g.components()
    comp_stats = []
    for comp in comps:
        ce = [ecc[v] for v in comp]
        comp_stats.append(ComponentStats(size=len(comp),
                                         diameter=max(ce), radius=min(ce)))
    connected = len(comps) <= 1
    if connected:
        diameter = float(comp_stats[0].diameter) if comp_stats else 0.0
        radius = float(comp_stats[0].radius) if comp_stats else 0.0
    else:
        diameter = UNREACHABLE
        radius = UNREACHABLE
    return GraphStats(connected=connected, diameter=diameter, radius=radius,
                      eccentricities=ecc, components=tuple(comp_stats))
