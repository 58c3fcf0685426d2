"""Random spanning outerplanar subgraphs in linear time.

A seeded DFS tree is extended greedily: walking the DFS paths in order, each
vertex takes all of its admissible back edges either on the left or on the
right of the current root path, whichever side admits more. Per-vertex
bookkeeping (``reach``, ``blocked``, ``up``) makes each admissibility test
constant time, and a global stack of ancestors that are still reachable from
both sides keeps the total update cost linear in m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from geocore import _fallback
from geocore._backend import LEFT, RIGHT, kernels
from geocore.graph import Graph

TREE = 0
SIDE_TAGS = {TREE: "T", LEFT: "L", RIGHT: "R"}


class DisconnectedGraphError(ValueError):
    pass


@dataclass
class DfsState:
    """Rooted ordered DFS tree plus the per-vertex sampling bookkeeping.

    ``tin``/``tout`` are pre-order entry rank and the largest rank inside the
    subtree, so ``x`` is an ancestor-or-self of ``y`` iff
    ``tin[x] <= tin[y] <= tout[x]``. ``first_child[v]`` is set when v extends
    the DFS path of its parent; any other child starts a new path there.
    """

    root: int
    parent: np.ndarray
    depth: np.ndarray
    order: np.ndarray
    tin: np.ndarray
    tout: np.ndarray
    first_child: np.ndarray
    indptr: np.ndarray
    adjacency: np.ndarray
    reach: np.ndarray = None
    blocked_left: np.ndarray = None
    blocked_right: np.ndarray = None
    up_left: np.ndarray = None
    up_right: np.ndarray = None
    stack: list = field(default_factory=list)
    stack_ops: int = 0

    def __post_init__(self):
        n = len(self.parent)
        if self.reach is None:
            self.reach = np.zeros(n, dtype=np.uint8)
            self.blocked_left = np.zeros(n, dtype=np.uint8)
            self.blocked_right = np.zeros(n, dtype=np.uint8)
            self.up_left = np.zeros(n, dtype=np.int32)
            self.up_right = np.zeros(n, dtype=np.int32)

    @property
    def n(self) -> int:
        return len(self.parent)

    def precedes(self, x: int, y: int) -> bool:
        """``x`` lies on the tree path from the root to ``y`` (x may equal y)."""
        return bool(self.tin[x] <= self.tin[y] <= self.tout[x])

    def strictly_precedes(self, x: int, y: int) -> bool:
        return x != y and self.precedes(x, y)

    @property
    def paths(self) -> list[tuple[int, int, list[int]]]:
        """DFS paths as ``(start, leaf, vertices)`` in traversal order."""
        out = []
        cur = [self.root]
        for v in self.order[1:].tolist():
            if self.first_child[v]:
                cur.append(v)
            else:
                out.append(cur)
                cur = [int(self.parent[v]), v]
        out.append(cur)
        return [(p[0], p[-1], p) for p in out]

    def back_edge_candidates(self, v: int) -> list[int]:
        """Ancestors w of v, other than its parent, adjacent to v."""
        p = self.parent[v]
        nb = self.adjacency[self.indptr[v] : self.indptr[v + 1]]
        return [int(w) for w in nb if w != p and self.tin[w] < self.tin[v]]


def dfs_decompose(graph: Graph, seed, root: int | None = None) -> DfsState:
    """Seeded DFS with a random root and seed-shuffled neighbor order."""
    if graph.n == 0:
        raise ValueError("empty graph")
    rng = np.random.default_rng(seed)
    drawn_root = int(rng.integers(graph.n))
    shuffle_seed = int(rng.integers(0, 2**63))
    if root is None:
        root = drawn_root
    adjacency = kernels.shuffle_neighbors(graph.indptr, graph.indices, shuffle_seed)
    parent, depth, order, tin, tout, first = kernels.dfs_tree(graph.indptr, adjacency, int(root))
    if len(order) != graph.n:
        raise DisconnectedGraphError(
            f"graph is disconnected ({len(order)} of {graph.n} vertices reachable); "
            "take the largest component first"
        )
    return DfsState(int(root), parent, depth, order, tin, tout, first, graph.indptr, adjacency)


def add_edges(v: int, candidates, state: DfsState, naive: bool = False):
    """Decide the side for the candidate back edges ``(v, w)`` of ``v``.

    Every ``w`` in ``candidates`` must be a proper ancestor of ``v`` other than
    its parent. Returns ``(left, right)`` lists of accepted edges, at most one
    of them non-empty, and updates ``state`` in place.
    """
    ws = [int(w) for w in candidates]
    if not ws:
        return [], []
    accepted, side, ops = _fallback.add_edges_arrays(
        int(v),
        ws,
        state.reach,
        (state.blocked_left, state.blocked_right),
        (state.up_left, state.up_right),
        state.depth,
        state.parent,
        state.stack,
        naive=naive,
    )
    state.stack_ops += ops
    edges = [(int(v), w) for w in accepted]
    return (edges, []) if side == LEFT else ([], edges)


@dataclass
class OuterplanarGraph:
    """Spanning subgraph made of DFS tree edges plus left and right back edges.

    Back edges are stored oriented as ``(v, w)`` with ``w`` a proper ancestor
    of ``v``. ``graph`` is the subgraph itself, sharing labels with the input.
    """

    graph: Graph
    root: int
    parent: np.ndarray
    left: np.ndarray
    right: np.ndarray
    state: DfsState | None = None
    stack_ops: int = 0

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    def tree_edges(self) -> np.ndarray:
        child = np.flatnonzero(self.parent >= 0).astype(np.int32)
        return np.stack([child, self.parent[child]], axis=1)

    def tagged_edges(self):
        """Yield ``(v, w, tag)`` with tag in ``T``, ``L``, ``R``."""
        for tag, arr in ((TREE, self.tree_edges()), (LEFT, self.left), (RIGHT, self.right)):
            for v, w in arr.tolist():
                yield v, w, SIDE_TAGS[tag]


def sample_outerplanar(graph: Graph, seed, root: int | None = None, naive: bool = False) -> OuterplanarGraph:
    """One random spanning outerplanar subgraph of a connected graph.

    Deterministic given ``seed``. ``naive=True`` walks every spanned tree path
    instead of using the reachability stack (quadratic; for cross-checking).
    """
    state = dfs_decompose(graph, seed, root)
    (bv, bw, side, reach, sl, sr, ul, ur, ops) = kernels.outerplanar_pass(
        graph.indptr, state.adjacency, state.parent, state.depth, state.order,
        state.tin, state.first_child, naive,
    )
    state.reach, state.blocked_left, state.blocked_right = reach, sl, sr
    state.up_left, state.up_right = ul, ur
    state.stack_ops = int(ops)
    back = np.stack([bv, bw], axis=1).astype(np.int32)
    left = back[side == LEFT]
    right = back[side == RIGHT]
    tree = np.stack([np.flatnonzero(state.parent >= 0), state.parent[state.parent >= 0]], axis=1)
    h = Graph.from_edges(graph.n, np.concatenate([tree, back]), graph.labels)
    return OuterplanarGraph(h, state.root, state.parent, left, right, state, int(ops))


def write_outerplanar(op: OuterplanarGraph, stream: TextIO) -> None:
    """Tagged edge list: ``v w tag`` in original labels, tree edges first."""
    lab = op.graph.labels
    stream.write(f"# outerplanar n={op.n} m={op.m} root={lab[op.root]}\n")
    for v, w, tag in op.tagged_edges():
        stream.write(f"{lab[v]}\t{lab[w]}\t{tag}\n")


def read_outerplanar(stream: TextIO, source: str | None = None) -> OuterplanarGraph:
    """Inverse of :func:`write_outerplanar`."""
    from geocore.graph import ParseError

    root_label = None
    rows = []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s:
            continue
        if s[0] == "#":
            for tok in s[1:].split():
                if tok.startswith("root="):
                    root_label = int(tok[5:])
            continue
        parts = s.split()
        if len(parts) != 3 or parts[2] not in ("T", "L", "R"):
            raise ParseError(f"expected 'v w T|L|R', got {s!r}", lineno, source)
        try:
            rows.append((int(parts[0]), int(parts[1]), parts[2]))
        except ValueError:
            raise ParseError(f"expected integer labels, got {s!r}", lineno, source) from None
    if root_label is None:
        raise ParseError("missing '# outerplanar ... root=' header", 1, source)
    ends = [r[0] for r in rows] + [r[1] for r in rows] + [root_label]
    labels = np.unique(np.array(ends, dtype=np.int64))
    idx = {int(l): i for i, l in enumerate(labels)}
    n = len(labels)
    parent = np.full(n, -1, dtype=np.int32)
    left, right = [], []
    for v, w, tag in rows:
        a, b = idx[v], idx[w]
        if tag == "T":
            parent[a] = b
        elif tag == "L":
            left.append((a, b))
        else:
            right.append((a, b))
    tree = [(v, int(parent[v])) for v in range(n) if parent[v] >= 0]
    h = Graph.from_edges(n, tree + left + right, labels)
    as_arr = lambda e: np.array(e, dtype=np.int32).reshape(-1, 2)
    return OuterplanarGraph(h, idx[root_label], parent, as_arr(left), as_arr(right))
