"""Independent checks used by tests and evaluation.

The outerplanarity oracle does not share code with the recognizer in
``opclosure``: a graph is outerplanar iff adding one vertex joined to every
vertex keeps it planar, and planarity is delegated to networkx.
"""

from __future__ import annotations

import networkx as nx
import numpy as np

from geocore.graph import Graph
from geocore.opclosure import BBTree, NotOuterplanarError, build_bb_tree
from geocore.sampler import OuterplanarGraph

ORACLE_MAX_N = 40


def _apex_planar(n: int, edges) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(n + 1))
    g.add_edges_from(edges)
    g.add_edges_from((v, n) for v in range(n))
    return nx.check_planarity(g)[0]


def is_outerplanar_oracle(graph, max_n: int = ORACLE_MAX_N) -> bool:
    """Outerplanarity via apex planarity (no K4 and no K2,3 minor)."""
    g = graph.graph if isinstance(graph, OuterplanarGraph) else graph
    if g.n > max_n:
        raise ValueError(f"oracle limited to n <= {max_n}, got n={g.n}")
    return _apex_planar(g.n, g.edges().tolist())


def _lca(parent, depth, a, b):
    while depth[a] > depth[b]:
        a = parent[a]
    while depth[b] > depth[a]:
        b = parent[b]
    while a != b:
        a, b = parent[a], parent[b]
    return a


def side_structure_violations(op: OuterplanarGraph) -> list[str]:
    """Check the nesting rules that keep left and right back edges drawable.

    Same side: for edges (v1, w1), (v2, w2) whose lower ends branch strictly
    below w2, w1 above w2 forces v2 to be an ancestor-or-self of v1, and a
    shared upper end forces v1, v2 to be comparable. Opposite sides: no edge
    may span another from the other side (va above-or-at vb, wb above-or-at
    wa). Quadratic; meant for small samples. Returns readable violations.
    """
    st = op.state
    if st is None:
        raise ValueError("sample carries no DFS state")
    parent, depth, tin, tout = st.parent, st.depth, st.tin, st.tout

    def anc(x, y):
        return tin[x] <= tin[y] <= tout[x]

    def sanc(x, y):
        return x != y and anc(x, y)

    out = []
    sides = {"L": op.left.tolist(), "R": op.right.tolist()}
    for name, edges in sides.items():
        for v, w in edges:
            if not sanc(w, v) or parent[v] == w:
                out.append(f"{name} edge ({v},{w}) is not a back edge")
        for i, (v1, w1) in enumerate(edges):
            for j, (v2, w2) in enumerate(edges):
                if i == j:
                    continue
                c = _lca(parent, depth, v1, v2)
                if depth[c] <= depth[w2]:
                    continue
                if sanc(w1, w2) and not anc(v2, v1):
                    out.append(f"{name} edges ({v1},{w1}) ({v2},{w2}) interleave")
                if w1 == w2 and not (sanc(v1, v2) or sanc(v2, v1)):
                    out.append(f"{name} edges ({v1},{w1}) ({v2},{w2}) share a top but fan out")
    for a_name, b_name in (("L", "R"), ("R", "L")):
        for va, wa in sides[a_name]:
            if depth[va] - depth[wa] < 2:
                continue
            for vb, wb in sides[b_name]:
                if anc(va, vb) and anc(wb, wa):
                    out.append(f"{a_name} edge ({va},{wa}) nested in {b_name} edge ({vb},{wb})")
    return out


class _Addability:
    """Constant-ish time test whether one edge keeps an outerplanar graph outerplanar.

    Inside a block the endpoints must share an interior face. Across blocks
    the new edge merges every block on the BB-tree path into one cycle, which
    works iff each such block is entered and left through two vertices that
    are neighbors on its Hamiltonian cycle.
    """

    def __init__(self, bb: BBTree):
        self.bb = bb
        n = bb.n
        self.blocks_of = [[] for _ in range(n)]
        for v, b in zip(bb.inc_vertex.tolist(), bb.inc_block.tolist()):
            self.blocks_of[v].append(b)
        self.faces_of = [
            {v: {f for f, _ in inc} for v, inc in blk.incidence.items()} for blk in bb.blocks
        ]
        # root every tree component for path queries
        size = len(bb.present)
        self.parent = [-1] * size
        self.depth = [0] * size
        seen = [False] * size
        ptr, nbr = bb.indptr.tolist(), bb.indices.tolist()
        for r in np.flatnonzero(bb.present).tolist():
            if seen[r]:
                continue
            seen[r] = True
            stack = [r]
            while stack:
                u = stack.pop()
                for i in range(ptr[u], ptr[u + 1]):
                    w = nbr[i]
                    if not seen[w]:
                        seen[w] = True
                        self.parent[w] = u
                        self.depth[w] = self.depth[u] + 1
                        stack.append(w)

    def _node(self, v):
        return v if self.bb.present[v] else self.bb.n + self.blocks_of[v][0]

    def _path(self, a, b):
        left, right = [], []
        while self.depth[a] > self.depth[b]:
            left.append(a)
            a = self.parent[a]
        while self.depth[b] > self.depth[a]:
            right.append(b)
            b = self.parent[b]
        while a != b:
            left.append(a)
            right.append(b)
            a, b = self.parent[a], self.parent[b]
            if a == -1 or b == -1:
                return None
        return left + [a] + right[::-1]

    def addable(self, a: int, b: int) -> bool:
        common = set(self.blocks_of[a]) & set(self.blocks_of[b])
        for blk in common:
            faces = self.faces_of[blk]
            return bool(faces[a] & faces[b])
        path = self._path(self._node(a), self._node(b))
        if path is None:
            return True
        n = self.bb.n
        for i, node in enumerate(path):
            if node < n:
                continue
            entry = path[i - 1] if i > 0 else a
            leave = path[i + 1] if i + 1 < len(path) else b
            if not self.bb.blocks[node - n].cycle_adjacent(entry, leave):
                return False
        return True


def maximality_deficit(graph: Graph, h) -> tuple[int, float]:
    """Edges of ``graph`` greedily addable to ``h`` while staying outerplanar.

    Candidates are tried in sorted order. Each is screened with the fast
    block/face test; every accepted edge is confirmed by a full planarity
    check before the decomposition is rebuilt. Returns ``(missing,
    relative maximality in percent)``.
    """
    hg = h.graph if isinstance(h, OuterplanarGraph) else h
    if hg.n != graph.n:
        raise ValueError("subgraph must span the same vertex set")
    he = hg.edges()
    if len(he) and not all(graph.has_edge(u, v) for u, v in he.tolist()):
        raise ValueError("H is not a subgraph of G")
    bb = build_bb_tree(hg)
    test = _Addability(bb)
    cur = set(map(tuple, he.tolist()))
    missing = 0
    for a, b in graph.edges().tolist():
        if (a, b) in cur or not test.addable(a, b):
            continue
        trial = sorted(cur | {(a, b)})
        if not _apex_planar(graph.n, trial):
            raise AssertionError(f"fast test accepted ({a},{b}) but the result is not outerplanar")
        cur.add((a, b))
        missing += 1
        try:
            bb = build_bb_tree(Graph.from_edges(graph.n, trial))
        except NotOuterplanarError as exc:
            raise AssertionError("recognizer rejected a planarity-confirmed graph") from exc
        test = _Addability(bb)
    total = hg.m + missing
    rel = 100.0 if total == 0 else 100.0 * hg.m / total
    return missing, rel
