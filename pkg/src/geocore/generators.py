"""Seeded random graph families for experiments and tests."""

from __future__ import annotations

import numpy as np

from geocore.graph import Graph, is_connected, largest_component


def _pair_from_index(k: np.ndarray) -> np.ndarray:
    """Map ``k`` in ``[0, n(n-1)/2)`` to pairs ``(i, j)``, ``i < j``, column-major."""
    j = np.floor((1 + np.sqrt(1 + 8 * k.astype(np.float64))) / 2).astype(np.int64)
    # repair float rounding at triangular boundaries
    j -= (j * (j - 1) // 2) > k
    j += ((j + 1) * j // 2) <= k
    i = k - j * (j - 1) // 2
    return np.stack([i, j], axis=1)


def gnp(n: int, p: float, seed) -> Graph:
    """Erdos-Renyi G(n, p): a binomial edge count, then distinct uniform pairs."""
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    rng = np.random.default_rng(seed)
    total = n * (n - 1) // 2
    m = int(rng.binomial(total, p)) if total else 0
    keys = rng.choice(total, size=m, replace=False) if m else np.zeros(0, dtype=np.int64)
    return Graph.from_edges(n, _pair_from_index(np.asarray(keys, dtype=np.int64)))


def gnm(n: int, m: int, seed) -> Graph:
    """Uniform graph with exactly ``m`` edges."""
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError("too many edges")
    rng = np.random.default_rng(seed)
    keys = rng.choice(total, size=m, replace=False)
    return Graph.from_edges(n, _pair_from_index(np.asarray(keys, dtype=np.int64)))


def connected_gnp(n: int, p: float, seed, attempts: int = 100) -> Graph:
    """G(n, p) conditioned on connectivity by rejection; falls back to the largest component."""
    ss = np.random.SeedSequence(seed)
    g = None
    for child in ss.spawn(attempts):
        g = gnp(n, p, child)
        if is_connected(g):
            return g
    return largest_component(g)


def random_tree(n: int, seed) -> Graph:
    rng = np.random.default_rng(seed)
    if n <= 1:
        return Graph.from_edges(max(n, 0), [])
    parent = [int(rng.integers(v)) for v in range(1, n)]
    return Graph.from_edges(n, list(zip(range(1, n), parent)))


def random_outerplanar_block(size: int, chords: int, seed) -> Graph:
    """Cycle on ``size`` vertices plus up to ``chords`` random non-crossing chords.

    Vertex labels are shuffled so the cycle order is not 0..size-1.
    """
    if size < 3:
        raise ValueError("a block needs at least three vertices")
    rng = np.random.default_rng(seed)
    faces = [list(range(size))]
    edges = [(i, (i + 1) % size) for i in range(size)]
    for _ in range(chords):
        big = [f for f in faces if len(f) >= 4]
        if not big:
            break
        face = big[int(rng.integers(len(big)))]
        faces.remove(face)
        k = len(face)
        a = int(rng.integers(k))
        b = (a + int(rng.integers(2, k - 1))) % k
        a, b = min(a, b), max(a, b)
        faces.append(face[a : b + 1])
        faces.append(face[b:] + face[: a + 1])
        edges.append((face[a], face[b]))
    perm = rng.permutation(size)
    return Graph.from_edges(size, perm[np.array(edges)])


def random_outerplanar(n: int, seed, max_block: int = 12, chord_rate: float = 0.5) -> Graph:
    """Connected outerplanar graph: random blocks and bridges glued at cut vertices."""
    rng = np.random.default_rng(seed)
    edges = []
    count = 1
    while count < n:
        anchor = int(rng.integers(count))
        size = int(rng.integers(2, max_block + 1))
        size = min(size, n - count + 1)
        if size == 2:
            edges.append((anchor, count))
            count += 1
            continue
        blk = random_outerplanar_block(size, int(rng.binomial(size - 3, chord_rate)), rng)
        ids = np.array([anchor] + list(range(count, count + size - 1)))
        edges.extend(ids[blk.edges()].tolist())
        count += size - 1
    return Graph.from_edges(n, edges)
