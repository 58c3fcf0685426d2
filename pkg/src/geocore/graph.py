"""Graph storage, SNAP edge-list I/O and breadth-first search."""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np
from scipy.sparse import coo_array
from scipy.sparse.csgraph import connected_components

from geocore._backend import INF, kernels


class ParseError(ValueError):
    """Raised for malformed edge-list lines; carries the 1-based line number."""

    def __init__(self, message: str, line: int, source: str | None = None):
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source = source


class Graph:
    """Immutable undirected simple graph in compressed sparse row form.

    Neighbor lists are sorted. ``labels[v]`` is the original label of the
    dense vertex ``v``.
    """

    __slots__ = ("indptr", "indices", "labels", "_label_index")

    def __init__(self, indptr, indices, labels=None):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        n = len(self.indptr) - 1
        if labels is None:
            labels = np.arange(n, dtype=np.int64)
        self.labels = np.ascontiguousarray(labels, dtype=np.int64)
        for arr in (self.indptr, self.indices, self.labels):
            arr.flags.writeable = False
        self._label_index = None

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        """Build from an iterable or (k, 2) array of dense vertex pairs.

        Self-loops are dropped and parallel or reversed duplicates merged.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        both = np.concatenate([e, e[:, ::-1]])
        keys = np.unique(both[:, 0] * n + both[:, 1])
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(keys // n, minlength=n), out=indptr[1:])
        return cls(indptr, keys % n, labels)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with ``u < v``, sorted lexicographically."""
        rows = np.repeat(np.arange(self.n, dtype=np.int32), self.degrees())
        keep = rows < self.indices
        return np.stack([rows[keep], self.indices[keep]], axis=1)

    def index_of(self, label: int) -> int:
        if self._label_index is None:
            self._label_index = {int(l): i for i, l in enumerate(self.labels)}
        try:
            return self._label_index[int(label)]
        except KeyError:
            raise KeyError(f"unknown vertex label {label}") from None

    def subgraph(self, vertices) -> "Graph":
        """Induced subgraph on ``vertices`` with ids re-densified in order."""
        keep = np.zeros(self.n, dtype=bool)
        keep[np.asarray(vertices, dtype=np.int64)] = True
        new_id = np.cumsum(keep) - 1
        e = self.edges()
        e = e[keep[e[:, 0]] & keep[e[:, 1]]]
        return Graph.from_edges(int(keep.sum()), new_id[e], self.labels[keep])

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges().tolist())
        return g

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.labels, other.labels)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class VertexSet:
    """Membership bitmap over ``0..n-1`` with cached cardinality."""

    __slots__ = ("mask", "_count")

    def __init__(self, mask):
        mask = np.array(mask, dtype=bool, copy=True)
        mask.flags.writeable = False
        self.mask = mask
        self._count = int(np.count_nonzero(mask))

    @classmethod
    def of(cls, n: int, members: Iterable[int] = ()) -> "VertexSet":
        mask = np.zeros(n, dtype=bool)
        idx = np.fromiter(members, dtype=np.int64)
        if len(idx) and (idx.min() < 0 or idx.max() >= n):
            raise ValueError("vertex out of range")
        mask[idx] = True
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(np.ones(n, dtype=bool))

    @property
    def n(self) -> int:
        return len(self.mask)

    def to_array(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self):
        return self._count

    def __iter__(self):
        return iter(self.to_array().tolist())

    def __contains__(self, v):
        return 0 <= v < len(self.mask) and bool(self.mask[v])

    def __eq__(self, other):
        if not isinstance(other, VertexSet):
            return NotImplemented
        return np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.mask.tobytes())

    def __or__(self, other):
        return VertexSet(self.mask | other.mask)

    def __and__(self, other):
        return VertexSet(self.mask & other.mask)

    def __sub__(self, other):
        return VertexSet(self.mask & ~other.mask)

    def __le__(self, other):
        return not np.any(self.mask & ~other.mask)

    def issubset(self, other) -> bool:
        return self <= other

    def complement(self) -> "VertexSet":
        return VertexSet(~self.mask)

    def __repr__(self):
        items = self.to_array()
        shown = ", ".join(map(str, items[:8]))
        more = ", ..." if len(items) > 8 else ""
        return f"VertexSet({{{shown}{more}}}, n={self.n})"


@dataclass(frozen=True)
class DistanceField:
    """Hop distances from ``source``; unreachable vertices hold ``INF``."""

    source: int
    dist: np.ndarray

    INF = INF

    def __getitem__(self, v):
        return self.dist[v]

    def reachable(self) -> np.ndarray:
        return self.dist != INF


def parse_edge_list(stream: TextIO | str, source: str | None = None) -> Graph:
    """Read a SNAP-style edge list.

    ``#`` starts a comment line; every other non-blank line holds two integer
    labels separated by whitespace (extra columns are ignored). Edges are
    symmetrized and deduplicated, self-loops dropped, labels mapped to dense
    ids in ascending label order.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    us: list[int] = []
    vs: list[int] = []
    singles: list[int] = []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s[0] == "#" or s[0] == "%":
            continue
        parts = s.split()
        try:
            if len(parts) == 1:
                # isolated vertex, as written for single-vertex graphs
                singles.append(int(parts[0]))
                continue
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"expected two integer labels, got {s!r}", lineno, source) from None
        us.append(u)
        vs.append(v)
    raw = np.array([us, vs], dtype=np.int64).T.reshape(-1, 2)
    labels = np.unique(np.concatenate([raw.ravel(), np.array(singles, dtype=np.int64)]))
    dense = np.searchsorted(labels, raw)
    return Graph.from_edges(len(labels), dense, labels)


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, source=str(path))


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write ``graph`` as a SNAP edge list using original labels."""
    stream.write(f"# Nodes: {graph.n} Edges: {graph.m}\n")
    lab = graph.labels
    stream.writelines(f"{lab[u]}\t{lab[v]}\n" for u, v in graph.edges().tolist())
    # isolated vertices as single-label lines, which the parser accepts
    stream.writelines(f"{lab[v]}\n" for v in np.flatnonzero(graph.degrees() == 0).tolist())


def components(graph: Graph) -> np.ndarray:
    """Component label per vertex."""
    adj = coo_array(
        (np.ones(len(graph.indices), dtype=np.int8),
         (np.repeat(np.arange(graph.n), graph.degrees()), graph.indices)),
        shape=(graph.n, graph.n),
    )
    return connected_components(adj, directed=False)[1]


def is_connected(graph: Graph) -> bool:
    return graph.n <= 1 or int(components(graph).max()) == 0


def largest_component(graph: Graph) -> Graph:
    """Induced subgraph on the largest connected component.

    Ties go to the component containing the smallest dense id.
    """
    if graph.n == 0:
        return graph
    comp = components(graph)
    sizes = np.bincount(comp)
    first = np.full(len(sizes), graph.n)
    np.minimum.at(first, comp, np.arange(graph.n))
    tied = np.flatnonzero(sizes == sizes.max())
    best = int(tied[np.argmin(first[tied])])
    if sizes[best] == graph.n:
        return graph
    return graph.subgraph(np.flatnonzero(comp == best))


def bfs_distances(graph: Graph, source: int) -> DistanceField:
    if not 0 <= source < graph.n:
        raise IndexError(f"source {source} out of range for n={graph.n}")
    return DistanceField(source, kernels.bfs(graph.indptr, graph.indices, int(source)))


def degree_distribution(graph: Graph, vertices: VertexSet) -> dict[int, int]:
    """Histogram degree -> count over ``vertices``, degrees taken in ``graph``."""
    degs = graph.degrees()[vertices.mask]
    return dict(sorted(Counter(degs.tolist()).items()))


def write_histogram(hist: dict[int, int], stream: TextIO) -> None:
    stream.write("degree,count\n")
    for d, c in sorted(hist.items()):
        stream.write(f"{d},{c}\n")


def write_vertex_set(graph: Graph, vertices: VertexSet, stream: TextIO) -> None:
    """One original label per line, ascending."""
    labs = np.sort(graph.labels[vertices.mask])
    stream.writelines(f"{l}\n" for l in labs.tolist())


def read_vertex_labels(stream: TextIO, source: str | None = None) -> list[int]:
    out = []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s[0] == "#":
            continue
        try:
            out.append(int(s.split()[0]))
        except ValueError:
            raise ParseError(f"expected an integer label, got {s!r}", lineno, source) from None
    return out


def vertex_set_from_labels(graph: Graph, labels: Iterable[int]) -> VertexSet:
    return VertexSet.of(graph.n, (graph.index_of(l) for l in labels))
