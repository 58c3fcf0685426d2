"""Geodesic closure in outerplanar graphs in O(n * f) time.

The graph is decomposed into its block-and-bridge tree. A closure is found by
pruning that tree to the subtree spanned by the input, then closing each
touched block from a small generator set: per interior face at most three
input vertices suffice, so each block costs O(|V(B)| * faces(B)).

Every block of an outerplanar graph is a Hamiltonian cycle plus non-crossing
chords. Cycles are recovered by peeling degree-2 vertices, which doubles as
the outerplanarity check for loaded inputs.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from geocore._backend import kernels
from geocore.graph import Graph, VertexSet
from geocore.sampler import OuterplanarGraph


class NotOuterplanarError(ValueError):
    pass


def _as_graph(g) -> Graph:
    return g.graph if isinstance(g, OuterplanarGraph) else g


@dataclass
class Face:
    """Interior face given by its boundary cycle (global vertex ids)."""

    vertices: np.ndarray

    @property
    def length(self) -> int:
        return len(self.vertices)

    def position(self, v: int) -> int:
        hits = np.flatnonzero(self.vertices == v)
        if not len(hits):
            raise ValueError(f"vertex {v} is not on this face")
        return int(hits[0])

    def distance(self, a: int, b: int) -> int:
        """Distance along the boundary cycle between positions ``a`` and ``b``."""
        d = abs(a - b)
        return min(d, self.length - d)


@dataclass
class Block:
    """Biconnected outerplanar block.

    ``vertices`` lists the block in Hamiltonian-cycle order; local id of a
    vertex is its cycle position. ``chords`` holds position pairs ``(i, j)``
    with ``i < j``.
    """

    vertices: np.ndarray
    chords: list[tuple[int, int]]
    faces: list[Face] = field(default_factory=list)
    indptr: np.ndarray = None
    indices: np.ndarray = None
    _pos: dict = None
    _incidence: dict = None

    @property
    def face_number(self) -> int:
        return len(self.chords) + 1

    @property
    def pos(self) -> dict[int, int]:
        if self._pos is None:
            self._pos = {int(v): i for i, v in enumerate(self.vertices)}
        return self._pos

    @property
    def incidence(self) -> dict[int, list[tuple[int, int]]]:
        """Vertex -> list of (face index, position on that face)."""
        if self._incidence is None:
            inc = defaultdict(list)
            for fi, face in enumerate(self.faces):
                for p, v in enumerate(face.vertices.tolist()):
                    inc[v].append((fi, p))
            self._incidence = dict(inc)
        return self._incidence

    def cycle_adjacent(self, a: int, b: int) -> bool:
        pa, pb = self.pos[a], self.pos[b]
        d = abs(pa - pb)
        return d == 1 or d == len(self.vertices) - 1

    def global_edges(self) -> list[tuple[int, int]]:
        vs = self.vertices.tolist()
        k = len(vs)
        out = [(vs[i], vs[(i + 1) % k]) for i in range(k)]
        out += [(vs[i], vs[j]) for i, j in self.chords]
        return out


def hamiltonian_cycle(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[int]:
    """Hamiltonian cycle of a biconnected outerplanar graph.

    Peels degree-2 vertices, replacing each by an edge between its two
    neighbors, down to a triangle, then reinserts them. Raises
    :class:`NotOuterplanarError` when the peeling or reinsertion gets stuck or
    the cycle uses a non-edge.
    """
    vs = list(vertices)
    edges = list(edges)
    if len(vs) < 3:
        raise NotOuterplanarError("a block needs at least three vertices")
    if len(edges) > 2 * len(vs) - 3:
        raise NotOuterplanarError("too many edges for an outerplanar block")
    adj = {v: set() for v in vs}
    real = set()
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
        real.add((a, b))
        real.add((b, a))
    pending = [v for v in vs if len(adj[v]) == 2]
    alive = len(vs)
    removed = []
    gone = set()
    while alive > 3:
        v = None
        while pending:
            c = pending.pop()
            if c not in gone and len(adj[c]) == 2:
                v = c
                break
        if v is None:
            raise NotOuterplanarError("no degree-2 vertex left to peel")
        a, b = adj[v]
        adj[a].discard(v)
        adj[b].discard(v)
        del adj[v]
        gone.add(v)
        adj[a].add(b)
        adj[b].add(a)
        removed.append((v, a, b))
        alive -= 1
        for x in (a, b):
            if len(adj[x]) == 2:
                pending.append(x)
            elif len(adj[x]) < 2:
                raise NotOuterplanarError("block is not biconnected")
    tri = list(adj)
    if any(len(adj[x]) != 2 for x in tri):
        raise NotOuterplanarError("peeling did not end in a triangle")
    nxt = {tri[0]: tri[1], tri[1]: tri[2], tri[2]: tri[0]}
    prv = {tri[1]: tri[0], tri[2]: tri[1], tri[0]: tri[2]}
    for v, a, b in reversed(removed):
        if nxt[a] == b:
            pass
        elif nxt[b] == a:
            a, b = b, a
        else:
            raise NotOuterplanarError("peeled vertex cannot be reinserted")
        nxt[a], prv[v], nxt[v], prv[b] = v, a, b, v
    cycle = [vs[0]]
    while len(cycle) < len(vs):
        cycle.append(nxt[cycle[-1]])
    k = len(cycle)
    for i in range(k):
        if (cycle[i], cycle[(i + 1) % k]) not in real:
            raise NotOuterplanarError("recovered cycle uses a non-edge")
    return cycle


def _sweep_faces(length: int, chords: list[tuple[int, int]]) -> list[list[int]]:
    """Interior faces of a polygon with chords, as lists of positions."""
    ending = defaultdict(list)
    for i, j in chords:
        ending[j].append(i)
    stack: list[int] = []
    in_stack = [False] * length
    faces = []
    for p in range(length):
        for q in sorted(ending.get(p, ()), reverse=True):
            if not in_stack[q]:
                raise NotOuterplanarError("crossing chords")
            inner = []
            while stack[-1] != q:
                x = stack.pop()
                in_stack[x] = False
                inner.append(x)
            faces.append([q] + inner[::-1] + [p])
        stack.append(p)
        in_stack[p] = True
    faces.append(stack)
    return faces


def make_block(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> Block:
    """Build a :class:`Block` (cycle order, chords, faces, local CSR)."""
    edges = [(int(a), int(b)) for a, b in edges]
    cycle = hamiltonian_cycle([int(v) for v in vertices], edges)
    pos = {v: i for i, v in enumerate(cycle)}
    k = len(cycle)
    chords = []
    for a, b in edges:
        i, j = sorted((pos[a], pos[b]))
        if j - i != 1 and not (i == 0 and j == k - 1):
            chords.append((i, j))
    chords.sort()
    order = np.array(cycle, dtype=np.int32)
    faces = [Face(order[f]) for f in _sweep_faces(k, chords)]
    local = [(i, (i + 1) % k) for i in range(k)] + chords
    lg = Graph.from_edges(k, local)
    blk = Block(order, chords, faces, lg.indptr, lg.indices)
    blk._pos = pos
    return blk


def enumerate_faces(block: Block) -> list[Face]:
    return block.faces


@dataclass
class BBTree:
    """Block-and-bridge tree of an outerplanar graph.

    Nodes ``0..n-1`` stand for original vertices (only those flagged in
    ``present``), node ``n + b`` for block ``b``.
    """

    n: int
    blocks: list[Block]
    bridges: np.ndarray
    present: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    inc_vertex: np.ndarray
    inc_block: np.ndarray

    @property
    def num_nodes(self) -> int:
        return int(self.present.sum())

    def nodes(self) -> np.ndarray:
        return np.flatnonzero(self.present)

    def edges(self) -> np.ndarray:
        rows = np.repeat(np.arange(len(self.indptr) - 1), np.diff(self.indptr))
        keep = rows < self.indices
        return np.stack([rows[keep], self.indices[keep]], axis=1)

    def is_block_node(self, node: int) -> bool:
        return node >= self.n

    def members(self, node: int) -> set[int]:
        if node < self.n:
            return {int(node)}
        return set(self.blocks[node - self.n].vertices.tolist())

    def blocks_of(self, v: int) -> list[int]:
        return self.inc_block[self.inc_vertex == v].tolist()

    @property
    def face_number(self) -> int:
        return max((b.face_number for b in self.blocks), default=0)


def build_bb_tree(g) -> BBTree:
    """Block-and-bridge tree with cycle order and faces for every block."""
    graph = _as_graph(g)
    n = graph.n
    if n > 1 and graph.m > 2 * n - 3:
        raise NotOuterplanarError("too many edges for an outerplanar graph")
    eu, ev, comp = kernels.biconnected_components(graph.indptr, graph.indices)
    ncomp = int(comp.max()) + 1 if len(comp) else 0
    sizes = np.bincount(comp, minlength=ncomp)
    is_bridge = sizes[comp] == 1
    bridges = np.stack([eu[is_bridge], ev[is_bridge]], axis=1)

    blocks: list[Block] = []
    inc_v, inc_b = [], []
    block_ids = np.flatnonzero(sizes > 1)
    if len(block_ids):
        sel = ~is_bridge
        bu, bv, bc = eu[sel], ev[sel], comp[sel]
        order = np.argsort(bc, kind="stable")
        bu, bv, bc = bu[order], bv[order], bc[order]
        cuts = np.flatnonzero(np.diff(bc)) + 1
        for idx, (us, vs) in enumerate(zip(np.split(bu, cuts), np.split(bv, cuts))):
            verts = np.unique(np.concatenate([us, vs]))
            blk = make_block(verts.tolist(), zip(us.tolist(), vs.tolist()))
            blocks.append(blk)
            inc_v.append(verts)
            inc_b.append(np.full(len(verts), idx, dtype=np.int32))
    inc_vertex = np.concatenate(inc_v) if inc_v else np.zeros(0, dtype=np.int32)
    inc_block = np.concatenate(inc_b) if inc_b else np.zeros(0, dtype=np.int32)

    nblocks = len(blocks)
    per_vertex = np.bincount(inc_vertex, minlength=n)
    on_bridge = np.zeros(n, dtype=bool)
    on_bridge[bridges.ravel()] = True
    present = np.zeros(n + nblocks, dtype=bool)
    present[:n] = (per_vertex == 0) | (per_vertex >= 2) | on_bridge
    present[n:] = True
    attach = present[inc_vertex]
    tree_edges = np.concatenate(
        [bridges.astype(np.int64), np.stack([inc_vertex[attach], n + inc_block[attach]], axis=1)]
    )
    tg = Graph.from_edges(n + nblocks, tree_edges)
    return BBTree(n, blocks, bridges, present, tg.indptr, tg.indices, inc_vertex, inc_block)


def face_number(g) -> int:
    """Largest number of interior faces over the blocks (0 for forests)."""
    bb = g if isinstance(g, BBTree) else build_bb_tree(g)
    return bb.face_number


def tree_closure(tree: Graph, x: VertexSet) -> VertexSet:
    """Minimal subtree spanning ``x``: prune leaves outside ``x`` until none remain."""
    if tree.m != tree.n - 1 and tree.n > 0:
        raise ValueError("input is not a tree")
    if len(x) == 0:
        return x
    present = np.ones(tree.n, dtype=np.uint8)
    out = kernels.tree_prune(tree.indptr, tree.indices, present, x.mask.astype(np.uint8))
    return VertexSet(out.view(bool))


def face_closure(face: Face, u: int, w: int) -> set[int]:
    """Closure of ``{u, w}`` within a face cycle.

    The whole face when the two are antipodal, otherwise the shorter arc.
    """
    pu, pw = face.position(u), face.position(w)
    d = face.distance(pu, pw)
    return {
        int(v)
        for p, v in enumerate(face.vertices.tolist())
        if face.distance(pu, p) + face.distance(p, pw) == d
    }


def generator_set(block: Block, x: Iterable[int]) -> set[int]:
    """Subset of ``x`` with the same closure in ``block``, at most 3 per face.

    Per face: ``w`` is the smallest member, ``u`` the member farthest from
    ``w``, ``v`` the farthest member outside the ``u``-``w`` arc (or ``w``), and
    ``w`` is kept only if it is off the ``u``-``v`` arc. Ties go to the smaller
    id.
    """
    inc = block.incidence
    per_face = defaultdict(list)
    for v in x:
        for fi, p in inc.get(int(v), ()):
            per_face[fi].append((int(v), p))
    out: set[int] = set()
    for fi in sorted(per_face):
        members = per_face[fi]
        length = block.faces[fi].length

        def dist(a, b):
            d = abs(a - b)
            return min(d, length - d)

        w, pw = min(members)
        u, pu = max(members, key=lambda t: (dist(t[1], pw), -t[0]))
        duw = dist(pu, pw)
        rest = [t for t in members if dist(pu, t[1]) + dist(t[1], pw) != duw]
        rest.append((w, pw))
        v, pv = max(rest, key=lambda t: (dist(t[1], pw), -t[0]))
        out.add(u)
        out.add(v)
        if dist(pu, pw) + dist(pw, pv) != dist(pu, pv):
            out.add(w)
    return out


def block_closure(block: Block, x: Iterable[int]) -> set[int]:
    """Geodesic closure of ``x`` inside ``block``.

    BFS from each generator only; pairwise intervals are already closed in
    outerplanar graphs.
    """
    xs = {int(v) for v in x}
    if len(xs) <= 1:
        return xs
    gens = generator_set(block, xs)
    pos = block.pos
    local = np.array(sorted(pos[v] for v in gens), dtype=np.int32)
    mask = np.zeros(len(block.vertices), dtype=np.uint8)
    mask[local] = 1
    hit = kernels.interval_union(block.indptr, block.indices, local, mask)
    return xs | set(block.vertices[hit.view(bool)].tolist())


def outerplanar_closure(g, x: VertexSet, bb: BBTree | None = None) -> VertexSet:
    """Closure of ``x`` in a connected outerplanar graph.

    ``g`` may be a :class:`Graph`, an :class:`OuterplanarGraph` or a prebuilt
    :class:`BBTree`; pass ``bb`` to reuse the decomposition across calls.
    """
    if isinstance(g, BBTree):
        bb = g
    elif bb is None:
        bb = build_bb_tree(g)
    n = bb.n
    if x.n != n:
        raise ValueError("vertex set and graph disagree on n")
    if len(x) <= 1:
        return x
    keep = np.zeros(len(bb.present), dtype=np.uint8)
    keep[:n] = x.mask & bb.present[:n]
    keep[n + bb.inc_block[x.mask[bb.inc_vertex]]] = 1
    spanned = kernels.tree_prune(bb.indptr, bb.indices, bb.present.view(np.uint8), keep)
    mask = x.mask | spanned[:n].view(bool)
    for b in np.flatnonzero(spanned[n:]).tolist():
        blk = bb.blocks[b]
        inside = blk.vertices[mask[blk.vertices]]
        if len(inside) > 1:
            mask[np.fromiter(block_closure(blk, inside.tolist()), dtype=np.int64)] = True
    return VertexSet(mask)


def closure_naive_outerplanar(g, x: VertexSet) -> VertexSet:
    """Union of pairwise intervals, one BFS per member of ``x``."""
    graph = _as_graph(g)
    if len(x) <= 1:
        return x
    src = x.to_array().astype(np.int32)
    out = kernels.interval_union(graph.indptr, graph.indices, src, x.mask.astype(np.uint8))
    return VertexSet(out.view(bool))


def check_outerplanar(g) -> BBTree:
    """Build the BB-tree, raising :class:`NotOuterplanarError` if impossible."""
    return build_bb_tree(g)


def is_outerplanar(g) -> bool:
    try:
        build_bb_tree(g)
    except NotOuterplanarError:
        return False
    return True


def dump_bb_tree(bb: BBTree, labels, stream: TextIO) -> None:
    """Diagnostic text dump: one block per line, then the bridges."""
    lab = np.asarray(labels)
    for i, blk in enumerate(bb.blocks):
        cyc = " ".join(str(lab[v]) for v in blk.vertices.tolist())
        chords = " ".join(f"{lab[blk.vertices[a]]}-{lab[blk.vertices[b]]}" for a, b in blk.chords)
        stream.write(f"block {i}: cycle {cyc}; chords {chords}\n")
    for u, v in bb.bridges.tolist():
        stream.write(f"bridge {lab[u]}-{lab[v]}\n")
