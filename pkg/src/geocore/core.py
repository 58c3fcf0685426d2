"""Convexity-based core-periphery decomposition.

The core is the running intersection of closures of random seed sets, stopped
at the first draw that leaves it unchanged.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from geocore.exact import closure_exact
from geocore.graph import Graph, VertexSet
from geocore.hull import Ensemble, EnsembleConfig


@dataclass(frozen=True)
class CoreConfig:
    seed_set_size: int = 10
    approx_set_size: int = 5
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    max_iterations: int = 50
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.seed_set_size < 1 or self.approx_set_size < 1:
            raise ValueError("set sizes must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class CoreResult:
    """``iterations`` is the smallest i whose running intersection survives draw i+1."""

    core: VertexSet
    iterations: int
    closure_sizes: list[int]
    intersection_sizes: list[int]
    seconds: float
    mode: str = "exact"

    def periphery(self) -> VertexSet:
        return self.core.complement()

    def summary(self) -> dict[str, object]:
        return {
            "mode": self.mode,
            "n": self.core.n,
            "core_size": len(self.core),
            "periphery_size": self.core.n - len(self.core),
            "iterations": self.iterations,
            "closure_sizes": ",".join(map(str, self.closure_sizes)),
            "intersection_sizes": ",".join(map(str, self.intersection_sizes)),
        }


class CoreNotConvergedError(RuntimeError):
    def __init__(self, partial: CoreResult):
        super().__init__(
            f"core did not reach a fixed point within {partial.iterations} iterations"
        )
        self.partial = partial


def _fixpoint(
    graph: Graph,
    size: int,
    closure: Callable[[VertexSet], VertexSet],
    cfg: CoreConfig,
    mode: str,
) -> CoreResult:
    start = time.perf_counter()
    n = graph.n
    rng = np.random.default_rng(cfg.seed)
    size = min(size, n)

    def draw():
        return VertexSet.of(n, rng.choice(n, size=size, replace=False))

    pool = ThreadPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    pending: list[VertexSet] = []
    running = None
    closure_sizes: list[int] = []
    inter_sizes: list[int] = []
    try:
        for j in range(1, cfg.max_iterations + 2):
            if not pending:
                # same draw order for any job count; surplus closures are discarded
                batch = [draw() for _ in range(cfg.jobs)]
                pending = list(pool.map(closure, batch)) if pool else [closure(batch[0])]
            c = pending.pop(0)
            closure_sizes.append(len(c))
            if running is None:
                running = c
                inter_sizes.append(len(running))
                continue
            nxt = running & c
            if nxt == running:
                return CoreResult(running, j - 1, closure_sizes, inter_sizes,
                                  time.perf_counter() - start, mode)
            running = nxt
            inter_sizes.append(len(running))
    finally:
        if pool:
            pool.shutdown()
    partial = CoreResult(running, cfg.max_iterations, closure_sizes, inter_sizes,
                         time.perf_counter() - start, mode)
    raise CoreNotConvergedError(partial)


def exact_core(graph: Graph, config: CoreConfig = CoreConfig()) -> CoreResult:
    return _fixpoint(graph, config.seed_set_size, lambda x: closure_exact(graph, x), config, "exact")


def approximate_core(graph: Graph, config: CoreConfig = CoreConfig(), ensemble: Ensemble | None = None) -> CoreResult:
    """Same fixed-point loop over approximate closures of random sets of approx_set_size vertices.

    One ensemble is sampled up front and shared by every draw.
    """
    if ensemble is None:
        ensemble = Ensemble(graph, config.ensemble)
    return _fixpoint(graph, config.approx_set_size, ensemble.closure, config, "approx")


def jaccard(a: VertexSet, b: VertexSet) -> float:
    if a.n != b.n:
        raise ValueError("sets over different universes")
    union = np.count_nonzero(a.mask | b.mask)
    if union == 0:
        return 1.0
    return float(np.count_nonzero(a.mask & b.mask) / union)
