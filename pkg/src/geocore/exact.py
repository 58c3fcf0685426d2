"""Exact geodesic intervals and closures on arbitrary graphs."""

from __future__ import annotations

import numpy as np

from geocore._backend import INF, kernels
from geocore.graph import Graph, VertexSet


def _check_vertex(graph: Graph, v: int, name: str) -> None:
    if not 0 <= v < graph.n:
        raise IndexError(f"{name}={v} out of range for n={graph.n}")


def geodesic_interval(graph: Graph, u: int, v: int) -> VertexSet:
    """All vertices on some shortest u-v path.

    Uses two BFS sweeps: x is in the interval iff d(u, x) + d(x, v) = d(u, v).
    """
    _check_vertex(graph, u, "u")
    _check_vertex(graph, v, "v")
    du = kernels.bfs(graph.indptr, graph.indices, int(u)).astype(np.int64)
    dv = kernels.bfs(graph.indptr, graph.indices, int(v)).astype(np.int64)
    if du[v] == INF:
        raise ValueError(f"vertices {u} and {v} are not connected")
    return VertexSet((du != INF) & (dv != INF) & (du + dv == du[v]))


def interval_union(graph: Graph, sources, targets: VertexSet) -> VertexSet:
    """Union of I(s, t) over ``s`` in ``sources`` and ``t`` in ``targets``."""
    src = np.asarray(list(sources), dtype=np.int32)
    mask = targets.mask.astype(np.uint8)
    return VertexSet(kernels.interval_union(graph.indptr, graph.indices, src, mask).view(bool))


def closure_exact(graph: Graph, x: VertexSet) -> VertexSet:
    """Smallest geodesically closed superset of ``x``.

    Each vertex of the growing set is processed once: one BFS from it marks
    every vertex on a shortest path to any member found so far, and newly
    marked vertices join the queue. O(nm) overall.
    """
    if x.n != graph.n:
        raise ValueError("vertex set and graph disagree on n")
    if len(x) <= 1:
        return x
    out = kernels.closure_exact(graph.indptr, graph.indices, x.mask.astype(np.uint8))
    return VertexSet(out.view(bool))

