# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Semantics mirror ``geocore._fallback`` exactly."""

import numpy as np
cimport numpy as cnp
from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cnp.import_array()

cdef int32_t INF = 2147483647
cdef uint8_t LEFT = 1
cdef uint8_t RIGHT = 2


cdef struct _Vert:
    int32_t depth
    int32_t up_l
    int32_t up_r
    uint8_t reach
    uint8_t first


cdef inline uint64_t _splitmix64(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef Py_ssize_t _bfs_order(const int64_t[::1] ptr, const int32_t[::1] nbr,
                           int32_t source, int32_t[::1] dist,
                           int32_t[::1] order) noexcept nogil:
    cdef Py_ssize_t head = 0, tail = 1, i
    cdef int32_t u, w, du
    dist[source] = 0
    order[0] = source
    while head < tail:
        u = order[head]
        head += 1
        du = dist[u] + 1
        for i in range(ptr[u], ptr[u + 1]):
            w = nbr[i]
            if dist[w] == INF:
                dist[w] = du
                order[tail] = w
                tail += 1
    return tail


cdef Py_ssize_t _mark_geodesics(const int64_t[::1] ptr, const int32_t[::1] nbr,
                                int32_t[::1] order, Py_ssize_t count,
                                int32_t[::1] dist, const uint8_t[::1] targets,
                                uint8_t[::1] on_path, uint8_t[::1] out) noexcept nogil:
    cdef Py_ssize_t k, i, added = 0
    cdef int32_t u, w, du
    cdef bint hit
    for k in range(count - 1, -1, -1):
        u = order[k]
        hit = targets[u] != 0
        if not hit:
            du = dist[u] + 1
            for i in range(ptr[u], ptr[u + 1]):
                w = nbr[i]
                if dist[w] == du and on_path[w]:
                    hit = True
                    break
        if hit:
            on_path[u] = 1
            if not out[u]:
                out[u] = 1
                added += 1
    return added


cdef void _reset(int32_t[::1] order, Py_ssize_t count, int32_t[::1] dist,
                 uint8_t[::1] on_path) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(count):
        dist[order[k]] = INF
        on_path[order[k]] = 0


def bfs(const int64_t[::1] indptr, const int32_t[::1] indices, int32_t source):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.full(n, INF, dtype=np.int32)
    order_arr = np.empty(max(n, 1), dtype=np.int32)
    cdef int32_t[::1] dist = dist_arr
    cdef int32_t[::1] order = order_arr
    with nogil:
        _bfs_order(indptr, indices, source, dist, order)
    return dist_arr


def interval_union(const int64_t[::1] indptr, const int32_t[::1] indices,
                   const int32_t[::1] sources, const uint8_t[::1] target_mask):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t k, count
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] out = out_arr
    cdef int32_t[::1] dist = np.full(n, INF, dtype=np.int32)
    cdef int32_t[::1] order = np.empty(max(n, 1), dtype=np.int32)
    cdef uint8_t[::1] on_path = np.zeros(n, dtype=np.uint8)
    with nogil:
        for k in range(sources.shape[0]):
            count = _bfs_order(indptr, indices, sources[k], dist, order)
            _mark_geodesics(indptr, indices, order, count, dist, target_mask, on_path, out)
            _reset(order, count, dist, on_path)
    return out_arr


def closure_exact(const int64_t[::1] indptr, const int32_t[::1] indices,
                  const uint8_t[::1] seed_mask):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t head = 0, tail = 0, k, count
    cdef int32_t u, v
    member_arr = np.array(seed_mask, dtype=np.uint8, copy=True)
    cdef uint8_t[::1] member = member_arr
    cdef int32_t[::1] queue = np.empty(max(n, 1), dtype=np.int32)
    cdef int32_t[::1] dist = np.full(n, INF, dtype=np.int32)
    cdef int32_t[::1] order = np.empty(max(n, 1), dtype=np.int32)
    cdef uint8_t[::1] on_path = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] fresh = np.zeros(n, dtype=np.uint8)
    with nogil:
        for k in range(n):
            if member[k]:
                queue[tail] = <int32_t>k
                tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            count = _bfs_order(indptr, indices, u, dist, order)
            _mark_geodesics(indptr, indices, order, count, dist, member, on_path, fresh)
            for k in range(count):
                v = order[k]
                if fresh[v]:
                    fresh[v] = 0
                    if not member[v]:
                        member[v] = 1
                        queue[tail] = v
                        tail += 1
            _reset(order, count, dist, on_path)
    return member_arr


def shuffle_neighbors(const int64_t[::1] indptr, const int32_t[::1] indices, uint64_t seed):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, i, j
    cdef int64_t lo
    cdef int32_t tmp
    cdef uint64_t state = seed
    out_arr = np.array(indices, dtype=np.int32, copy=True)
    cdef int32_t[::1] nbr = out_arr
    with nogil:
        for v in range(n):
            lo = indptr[v]
            i = indptr[v + 1] - lo - 1
            while i > 0:
                j = <Py_ssize_t>(_splitmix64(&state) % <uint64_t>(i + 1))
                tmp = nbr[lo + i]
                nbr[lo + i] = nbr[lo + j]
                nbr[lo + j] = tmp
                i -= 1
    return out_arr


def dfs_tree(const int64_t[::1] indptr, const int32_t[::1] indices, int32_t root):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    # the walk records everything by discovery time; vertex-indexed arrays
    # are filled afterwards by independent scatters
    order_arr = np.empty(n, dtype=np.int32)
    par_t_arr = np.full(n, -1, dtype=np.int32)
    dep_t_arr = np.zeros(n, dtype=np.int32)
    out_t_arr = np.zeros(n, dtype=np.int32)
    first_t_arr = np.zeros(n, dtype=np.uint8)
    cdef int32_t[::1] order = order_arr
    cdef int32_t[::1] par_t = par_t_arr
    cdef int32_t[::1] dep_t = dep_t_arr
    cdef int32_t[::1] out_t = out_t_arr
    cdef uint8_t[::1] first_t = first_t_arr
    cdef uint8_t[::1] seen = np.zeros(n, dtype=np.uint8)
    cdef int32_t[::1] s_vert = np.empty(max(n, 1), dtype=np.int32)
    cdef int32_t[::1] s_time = np.empty(max(n, 1), dtype=np.int32)
    cdef int64_t[::1] s_next = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t[::1] s_end = np.empty(max(n, 1), dtype=np.int64)
    cdef uint8_t[::1] s_kids = np.zeros(max(n, 1), dtype=np.uint8)
    cdef Py_ssize_t top = 0, t = 1
    cdef int32_t w
    with nogil:
        order[0] = root
        seen[root] = 1
        s_vert[0] = root
        s_time[0] = 0
        s_next[0] = indptr[root]
        s_end[0] = indptr[root + 1]
        s_kids[0] = 0
        while top >= 0:
            if s_next[top] < s_end[top]:
                w = indices[s_next[top]]
                s_next[top] += 1
                if not seen[w]:
                    seen[w] = 1
                    order[t] = w
                    par_t[t] = s_vert[top]
                    dep_t[t] = <int32_t>(top + 1)
                    first_t[t] = not s_kids[top]
                    s_kids[top] = 1
                    top += 1
                    s_vert[top] = w
                    s_time[top] = <int32_t>t
                    s_next[top] = indptr[w]
                    s_end[top] = indptr[w + 1]
                    s_kids[top] = 0
                    t += 1
            else:
                out_t[s_time[top]] = <int32_t>(t - 1)
                top -= 1
    order_arr = order_arr[:t]
    parent_arr = np.full(n, -1, dtype=np.int32)
    depth_arr = np.zeros(n, dtype=np.int32)
    tin_arr = np.full(n, -1, dtype=np.int32)
    tout_arr = np.full(n, -1, dtype=np.int32)
    first_arr = np.zeros(n, dtype=np.uint8)
    parent_arr[order_arr] = par_t_arr[:t]
    depth_arr[order_arr] = dep_t_arr[:t]
    tin_arr[order_arr] = np.arange(t, dtype=np.int32)
    tout_arr[order_arr] = out_t_arr[:t]
    first_arr[order_arr] = first_t_arr[:t]
    return parent_arr, depth_arr, order_arr, tin_arr, tout_arr, first_arr


def outerplanar_pass(const int64_t[::1] indptr, const int32_t[::1] indices,
                     const int32_t[::1] parent, const int32_t[::1] depth,
                     const int32_t[::1] order, const int32_t[::1] tin,
                     const uint8_t[::1] first_child, bint naive=False):
    if naive:
        from geocore import _fallback
        return _fallback.outerplanar_pass(
            np.asarray(indptr), np.asarray(indices), np.asarray(parent),
            np.asarray(depth), np.asarray(order), np.asarray(tin),
            np.asarray(first_child), naive=True)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m2 = indices.shape[0]
    cdef Py_ssize_t cap = max(m2 // 2 - n + 1, 1)
    cdef Py_ssize_t count = order.shape[0]
    reach_arr = np.zeros(n, dtype=np.uint8)
    sl_arr = np.zeros(n, dtype=np.uint8)
    sr_arr = np.zeros(n, dtype=np.uint8)
    ul_arr = np.zeros(n, dtype=np.int32)
    ur_arr = np.zeros(n, dtype=np.int32)
    bv_arr = np.empty(cap, dtype=np.int32)
    bw_arr = np.empty(cap, dtype=np.int32)
    bs_arr = np.empty(cap, dtype=np.uint8)
    cdef uint8_t[::1] reach = reach_arr
    cdef uint8_t[::1] blocked_l = sl_arr
    cdef uint8_t[::1] blocked_r = sr_arr
    cdef int32_t[::1] up_l = ul_arr
    cdef int32_t[::1] up_r = ur_arr
    cdef int32_t[::1] back_v = bv_arr
    cdef int32_t[::1] back_w = bw_arr
    cdef uint8_t[::1] back_side = bs_arr
    # everything below runs on discovery times instead of vertex ids, so the
    # sweep reads memory front to back and "w is an ancestor" is "w < v"
    cdef int64_t[::1] ptr = np.zeros(count + 1, dtype=np.int64)
    cdef int32_t[::1] nbr = np.empty(m2, dtype=np.int32)
    cdef int32_t[::1] par = np.empty(max(count, 1), dtype=np.int32)
    cdef uint8_t[::1] bl = np.zeros(max(count, 1), dtype=np.uint8)
    cdef uint8_t[::1] br = np.zeros(max(count, 1), dtype=np.uint8)
    cdef int32_t[::1] stack = np.empty(2 * n + 1, dtype=np.int32)
    cdef int32_t[::1] buf_l = np.empty(max(n, 1), dtype=np.int32)
    cdef int32_t[::1] buf_r = np.empty(max(n, 1), dtype=np.int32)
    cdef Py_ssize_t top = -1, nb = 0, i, j, cl, cr, cnt
    cdef int64_t ops = 0
    cdef int32_t v, p, w, x, floor, dw, u
    cdef uint8_t side
    cdef int32_t[::1] buf
    cdef _Vert* vx = <_Vert*>PyMem_Malloc(max(count, 1) * sizeof(_Vert))
    if vx == NULL:
        raise MemoryError()
    try:
        with nogil:
            for v in range(count):
                u = order[v]
                ptr[v + 1] = ptr[v] + indptr[u + 1] - indptr[u]
                j = ptr[v]
                for i in range(indptr[u], indptr[u + 1]):
                    nbr[j] = tin[indices[i]]
                    j += 1
                par[v] = tin[parent[u]] if v > 0 else -1
                vx[v].depth = depth[u]
                vx[v].first = first_child[u]
                vx[v].up_l = 0
                vx[v].up_r = 0
                vx[v].reach = 0
            if count > 0:
                vx[0].reach = LEFT | RIGHT
                top += 1
                stack[top] = 0
                ops += 1
            for v in range(1, count):
                p = par[v]
                if not vx[v].first:
                    while top >= 0 and vx[stack[top]].depth > vx[p].depth:
                        top -= 1
                        ops += 1
                    vx[p].reach = LEFT | RIGHT
                    if br[p] or p == 0:
                        vx[p].up_r = vx[p].depth
                    else:
                        vx[p].up_r = vx[par[p]].up_r
                    if bl[p] or p == 0:
                        vx[p].up_l = vx[p].depth
                    else:
                        vx[p].up_l = vx[par[p]].up_l
                    if top < 0 or stack[top] != p:
                        top += 1
                        stack[top] = p
                        ops += 1
                vx[v].reach = LEFT | RIGHT
                vx[v].up_l = vx[p].up_l
                vx[v].up_r = vx[p].up_r
                cl = 0
                cr = 0
                for i in range(ptr[v], ptr[v + 1]):
                    w = nbr[i]
                    if w == p or w >= v:
                        continue
                    dw = vx[w].depth
                    if (vx[w].reach & LEFT) and vx[v].up_l <= dw:
                        buf_l[cl] = w
                        cl += 1
                    if (vx[w].reach & RIGHT) and vx[v].up_r <= dw:
                        buf_r[cr] = w
                        cr += 1
                if cl > 0 or cr > 0:
                    if cr > cl:
                        side = RIGHT
                        buf = buf_r
                        cnt = cr
                        vx[v].up_l = vx[p].depth
                    else:
                        side = LEFT
                        buf = buf_l
                        cnt = cl
                        vx[v].up_r = vx[p].depth
                    floor = vx[buf[0]].depth
                    for i in range(cnt):
                        w = buf[i]
                        back_v[nb] = order[v]
                        back_w[nb] = order[w]
                        back_side[nb] = side
                        nb += 1
                        if vx[w].depth < floor:
                            floor = vx[w].depth
                    while top >= 0 and vx[stack[top]].depth > floor:
                        x = stack[top]
                        top -= 1
                        ops += 1
                        vx[x].reach &= ~side
                        if side == LEFT:
                            vx[x].up_r = vx[x].depth
                            bl[x] = 1
                        else:
                            vx[x].up_l = vx[x].depth
                            br[x] = 1
                top += 1
                stack[top] = v
                ops += 1
            for v in range(count):
                u = order[v]
                reach[u] = vx[v].reach
                up_l[u] = vx[v].up_l
                up_r[u] = vx[v].up_r
                blocked_l[u] = bl[v]
                blocked_r[u] = br[v]
    finally:
        PyMem_Free(vx)
    return (bv_arr[:nb].copy(), bw_arr[:nb].copy(), bs_arr[:nb].copy(),
            reach_arr, sl_arr, sr_arr, ul_arr, ur_arr, int(ops))


def biconnected_components(const int64_t[::1] indptr, const int32_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m = indices.shape[0] // 2
    eu_arr = np.empty(m, dtype=np.int32)
    ev_arr = np.empty(m, dtype=np.int32)
    comp_arr = np.empty(m, dtype=np.int32)
    cdef int32_t[::1] eu = eu_arr
    cdef int32_t[::1] ev = ev_arr
    cdef int32_t[::1] comp = comp_arr
    cdef int32_t[::1] disc = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] low = np.zeros(n, dtype=np.int32)
    cdef int32_t[::1] parent = np.full(n, -1, dtype=np.int32)
    cdef int64_t[::1] nxt = np.array(indptr[:n], dtype=np.int64)
    cdef int32_t[::1] stack = np.empty(max(n, 1), dtype=np.int32)
    cdef int32_t[::1] es_a = np.empty(max(m, 1), dtype=np.int32)
    cdef int32_t[::1] es_b = np.empty(max(m, 1), dtype=np.int32)
    cdef Py_ssize_t top, etop = -1, out = 0
    cdef int32_t t = 0, label = 0, s, u, w, p, a, b
    with nogil:
        for s in range(<int32_t>n):
            if disc[s] >= 0:
                continue
            disc[s] = t
            low[s] = t
            t += 1
            top = 0
            stack[0] = s
            while top >= 0:
                u = stack[top]
                if nxt[u] < indptr[u + 1]:
                    w = indices[nxt[u]]
                    nxt[u] += 1
                    if disc[w] < 0:
                        parent[w] = u
                        disc[w] = t
                        low[w] = t
                        t += 1
                        etop += 1
                        es_a[etop] = u
                        es_b[etop] = w
                        top += 1
                        stack[top] = w
                    elif w != parent[u] and disc[w] < disc[u]:
                        etop += 1
                        es_a[etop] = u
                        es_b[etop] = w
                        if disc[w] < low[u]:
                            low[u] = disc[w]
                else:
                    top -= 1
                    p = parent[u]
                    if p >= 0:
                        if low[u] < low[p]:
                            low[p] = low[u]
                        if low[u] >= disc[p]:
                            while True:
                                a = es_a[etop]
                                b = es_b[etop]
                                etop -= 1
                                eu[out] = a
                                ev[out] = b
                                comp[out] = label
                                out += 1
                                if a == p and b == u:
                                    break
                            label += 1
    return eu_arr[:out], ev_arr[:out], comp_arr[:out]


def tree_prune(const int64_t[::1] indptr, const int32_t[::1] indices,
               const uint8_t[::1] present, const uint8_t[::1] keep):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    alive_arr = np.array(present, dtype=np.uint8, copy=True)
    cdef uint8_t[::1] alive = alive_arr
    cdef int32_t[::1] deg = np.zeros(n, dtype=np.int32)
    cdef int32_t[::1] queue = np.empty(2 * n + 1, dtype=np.int32)
    cdef Py_ssize_t qtop = 0, i, v
    cdef int32_t w, x
    with nogil:
        for v in range(n):
            if alive[v]:
                for i in range(indptr[v], indptr[v + 1]):
                    if alive[indices[i]]:
                        deg[v] += 1
                if deg[v] <= 1 and not keep[v]:
                    queue[qtop] = <int32_t>v
                    qtop += 1
        while qtop > 0:
            qtop -= 1
            x = queue[qtop]
            if not alive[x]:
                continue
            alive[x] = 0
            for i in range(indptr[x], indptr[x + 1]):
                w = indices[i]
                if alive[w]:
                    deg[w] -= 1
                    if deg[w] <= 1 and not keep[w]:
                        queue[qtop] = w
                        qtop += 1
    return alive_arr
