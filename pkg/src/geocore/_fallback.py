"""Pure-Python implementations of the hot kernels.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and bit-identical output. Arrays come in as numpy arrays (CSR ``indptr`` is
int64, ``indices`` int32) and results go out as numpy arrays.
"""

from collections import deque

import numpy as np

INF = np.iinfo(np.int32).max

LEFT = 1
RIGHT = 2
BOTH = LEFT | RIGHT

_MASK64 = (1 << 64) - 1


def _splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def bfs(indptr, indices, source):
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    dist = [INF] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for i in range(ptr[u], ptr[u + 1]):
            w = nbr[i]
            if dist[w] == INF:
                dist[w] = du
                queue.append(w)
    return np.array(dist, dtype=np.int32)


def _bfs_order(ptr, nbr, n, source, dist):
    order = [source]
    dist[source] = 0
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        du = dist[u] + 1
        for i in range(ptr[u], ptr[u + 1]):
            w = nbr[i]
            if dist[w] == INF:
                dist[w] = du
                order.append(w)
    return order


def _mark_geodesics(ptr, nbr, order, dist, targets, out):
    """Mark every vertex on a shortest path from the BFS source to a target.

    Sweeps the BFS order backwards: a vertex is on such a path iff it is a
    target or one of its successors in the shortest-path DAG is marked.
    Returns the number of vertices newly set in ``out``.
    """
    on_path = {}
    added = 0
    for u in reversed(order):
        hit = targets[u]
        if not hit:
            du = dist[u] + 1
            for i in range(ptr[u], ptr[u + 1]):
                w = nbr[i]
                if dist[w] == du and on_path.get(w, False):
                    hit = True
                    break
        if hit:
            on_path[u] = True
            if not out[u]:
                out[u] = 1
                added += 1
    return added


def interval_union(indptr, indices, sources, target_mask):
    """Union of I(s, t) over s in ``sources`` and t with ``target_mask[t]``."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    targets = target_mask.astype(bool).tolist()
    out = [0] * n
    for s in sources.tolist():
        dist = [INF] * n
        order = _bfs_order(ptr, nbr, n, s, dist)
        _mark_geodesics(ptr, nbr, order, dist, targets, out)
    return np.array(out, dtype=np.uint8)


def closure_exact(indptr, indices, seed_mask):
    """Geodesic closure by the worklist of single-source sweeps."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    member = [bool(x) for x in seed_mask.tolist()]
    queue = [v for v in range(n) if member[v]]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        dist = [INF] * n
        order = _bfs_order(ptr, nbr, n, u, dist)
        fresh = [0] * n
        _mark_geodesics(ptr, nbr, order, dist, member, fresh)
        for v in order:
            if fresh[v] and not member[v]:
                member[v] = True
                queue.append(v)
    return np.array(member, dtype=np.uint8)


def shuffle_neighbors(indptr, indices, seed):
    """Per-row Fisher-Yates shuffle of the adjacency driven by splitmix64."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    state = int(seed) & _MASK64
    for v in range(n):
        lo = ptr[v]
        for i in range(ptr[v + 1] - lo - 1, 0, -1):
            state, z = _splitmix64(state)
            j = z % (i + 1)
            nbr[lo + i], nbr[lo + j] = nbr[lo + j], nbr[lo + i]
    return np.array(nbr, dtype=np.int32)


def dfs_tree(indptr, indices, root):
    """Iterative DFS visiting neighbors in adjacency order.

    Returns ``(parent, depth, order, tin, tout, first_child)`` where ``tin`` is
    the pre-order rank, ``tout`` the largest pre-order rank in the subtree and
    ``first_child[v]`` flags that v continues the DFS path of its parent.
    ``order`` has fewer than n entries when the graph is disconnected.
    """
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    parent = [-1] * n
    depth = [0] * n
    tin = [-1] * n
    tout = [-1] * n
    first = [0] * n
    has_child = [False] * n
    nxt = ptr[:-1]
    order = [root]
    tin[root] = 0
    stack = [root]
    while stack:
        u = stack[-1]
        if nxt[u] < ptr[u + 1]:
            w = nbr[nxt[u]]
            nxt[u] += 1
            if tin[w] < 0:
                parent[w] = u
                depth[w] = depth[u] + 1
                tin[w] = len(order)
                order.append(w)
                if not has_child[u]:
                    first[w] = 1
                    has_child[u] = True
                stack.append(w)
        else:
            tout[u] = len(order) - 1
            stack.pop()
    return (
        np.array(parent, dtype=np.int32),
        np.array(depth, dtype=np.int32),
        np.array(order, dtype=np.int32),
        np.array(tin, dtype=np.int32),
        np.array(tout, dtype=np.int32),
        np.array(first, dtype=np.uint8),
    )


def add_edges_arrays(v, candidates, reach, blocked, up, depth, parent, stack, naive=False):
    """Choose one side for the candidate back edges of ``v`` and update state.

    ``reach`` holds side bitmasks, ``blocked`` and ``up`` are pairs of per-side
    lists indexed LEFT-1 / RIGHT-1. ``stack`` holds the ancestors of v that are
    still reachable from both sides. Returns ``(accepted, side, stack_ops)``.
    """
    dv_left = up[0][v]
    dv_right = up[1][v]
    e_left = [w for w in candidates if reach[w] & LEFT and dv_left <= depth[w]]
    e_right = [w for w in candidates if reach[w] & RIGHT and dv_right <= depth[w]]
    side, accepted = LEFT, e_left
    if len(e_right) > len(e_left):
        side, accepted = RIGHT, e_right
    if not accepted:
        return accepted, side, 0
    s = side - 1
    o = 1 - s
    up[o][v] = depth[parent[v]]
    ops = 0
    if naive:
        for w in accepted:
            x = parent[v]
            while x != w:
                reach[x] &= BOTH ^ side
                up[o][x] = depth[x]
                blocked[s][x] = 1
                x = parent[x]
    else:
        floor = min(depth[w] for w in accepted)
        while stack and depth[stack[-1]] > floor:
            x = stack.pop()
            ops += 1
            reach[x] &= BOTH ^ side
            up[o][x] = depth[x]
            blocked[s][x] = 1
    return accepted, side, ops


def outerplanar_pass(indptr, indices, parent, depth, order, tin, first_child, naive=False):
    """Greedy left/right back-edge insertion along the DFS paths.

    Returns ``(back_v, back_w, side, reach, blocked_left, blocked_right, up_left,
    up_right, stack_ops)``.
    """
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    par = parent.tolist()
    dep = depth.tolist()
    pre = tin.tolist()
    first = first_child.tolist()
    seq = order.tolist()
    reach = [0] * n
    blocked = ([0] * n, [0] * n)
    up = ([0] * n, [0] * n)
    out_v, out_w, out_side = [], [], []
    root = seq[0]
    reach[root] = LEFT | RIGHT
    stack = [root]
    ops = 1
    for v in seq[1:]:
        p = par[v]
        if not first[v]:
            # a new DFS path starts at p
            while stack and dep[stack[-1]] > dep[p]:
                stack.pop()
                ops += 1
            reach[p] = LEFT | RIGHT
            for s in (1, 0):
                if blocked[s][p] or p == root:
                    up[s][p] = dep[p]
                else:
                    up[s][p] = up[s][par[p]]
            if not stack or stack[-1] != p:
                stack.append(p)
                ops += 1
        reach[v] = LEFT | RIGHT
        up[0][v] = up[0][p]
        up[1][v] = up[1][p]
        pv = pre[v]
        cand = [w for w in nbr[ptr[v]:ptr[v + 1]] if w != p and pre[w] < pv]
        if cand:
            accepted, side, k = add_edges_arrays(v, cand, reach, blocked, up, dep, par, stack, naive)
            ops += k
            for w in accepted:
                out_v.append(v)
                out_w.append(w)
                out_side.append(side)
        stack.append(v)
        ops += 1
    return (
        np.array(out_v, dtype=np.int32),
        np.array(out_w, dtype=np.int32),
        np.array(out_side, dtype=np.uint8),
        np.array(reach, dtype=np.uint8),
        np.array(blocked[0], dtype=np.uint8),
        np.array(blocked[1], dtype=np.uint8),
        np.array(up[0], dtype=np.int32),
        np.array(up[1], dtype=np.int32),
        ops,
    )


def biconnected_components(indptr, indices):
    """Edge-labelled biconnected components (Hopcroft-Tarjan, iterative).

    Returns ``(edge_u, edge_v, comp)`` with every undirected edge listed once.
    """
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    nxt = ptr[:-1]
    eu, ev, comp = [], [], []
    edge_stack = []
    t = 0
    label = 0
    for s in range(n):
        if disc[s] >= 0:
            continue
        disc[s] = low[s] = t
        t += 1
        stack = [s]
        while stack:
            u = stack[-1]
            if nxt[u] < ptr[u + 1]:
                w = nbr[nxt[u]]
                nxt[u] += 1
                if disc[w] < 0:
                    parent[w] = u
                    disc[w] = low[w] = t
                    t += 1
                    edge_stack.append((u, w))
                    stack.append(w)
                elif w != parent[u] and disc[w] < disc[u]:
                    edge_stack.append((u, w))
                    if disc[w] < low[u]:
                        low[u] = disc[w]
            else:
                stack.pop()
                p = parent[u]
                if p >= 0:
                    if low[u] < low[p]:
                        low[p] = low[u]
                    if low[u] >= disc[p]:
                        while True:
                            a, b = edge_stack.pop()
                            eu.append(a)
                            ev.append(b)
                            comp.append(label)
                            if a == p and b == u:
                                break
                        label += 1
    return (
        np.array(eu, dtype=np.int32),
        np.array(ev, dtype=np.int32),
        np.array(comp, dtype=np.int32),
    )


def tree_prune(indptr, indices, present, keep):
    """Repeatedly delete leaves (degree <= 1) that are not in ``keep``."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    alive = [bool(x) for x in present.tolist()]
    keep_ = keep.tolist()
    deg = [0] * n
    queue = []
    for v in range(n):
        if alive[v]:
            deg[v] = sum(1 for i in range(ptr[v], ptr[v + 1]) if alive[nbr[i]])
            if deg[v] <= 1 and not keep_[v]:
                queue.append(v)
    while queue:
        v = queue.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for i in range(ptr[v], ptr[v + 1]):
            w = nbr[i]
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1 and not keep_[w]:
                    queue.append(w)
    return np.array(alive, dtype=np.uint8)
