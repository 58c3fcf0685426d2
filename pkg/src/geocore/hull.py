"""Approximate closures by voting over sampled outerplanar subgraphs."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np

from geocore.graph import Graph, VertexSet
from geocore.opclosure import BBTree, NotOuterplanarError, build_bb_tree, outerplanar_closure
from geocore.sampler import sample_outerplanar


@dataclass(frozen=True)
class EnsembleConfig:
    """``threshold`` is a percentage of ``num_subgraphs``.

    ``spanning_trees`` keeps only the DFS tree of every sample; it exists as
    a comparison baseline and is not the supported mode.
    """

    num_subgraphs: int = 100
    threshold: float = 1.0
    seed: int = 0
    jobs: int = 1
    spanning_trees: bool = False

    def __post_init__(self):
        if self.num_subgraphs < 1:
            raise ValueError("num_subgraphs must be >= 1")
        if not 0 < self.threshold <= 100:
            raise ValueError("threshold must be in (0, 100]")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    @property
    def min_votes(self) -> int:
        """Smallest vote count that is at least ``threshold`` percent, rounded up."""
        need = Fraction(str(self.threshold)) * self.num_subgraphs / 100
        return max(1, math.ceil(need))


def _outerplanar_or_none(graph: Graph) -> BBTree | None:
    try:
        return build_bb_tree(graph)
    except NotOuterplanarError:
        return None


def sample_seed(master: int, i: int) -> int:
    """Seed of the ``i``-th sample; depends only on ``(master, i)``."""
    return int(np.random.SeedSequence([int(master), int(i)]).generate_state(1, np.uint64)[0])


class Ensemble:
    """A fixed set of sampled subgraphs with their decompositions.

    Built once and reused for any number of closure queries. An input that is
    already outerplanar is its own best sample, so it is used as every
    sample and the ensemble then reproduces exact closures.
    """

    def __init__(self, graph: Graph, config: EnsembleConfig):
        self.graph = graph
        self.config = config
        self.seeds = [sample_seed(config.seed, i) for i in range(config.num_subgraphs)]
        whole = None if config.spanning_trees else _outerplanar_or_none(graph)
        self.input_is_outerplanar = whole is not None
        if whole is not None:
            built = [(graph, whole)] * config.num_subgraphs
        elif config.jobs > 1:
            with ThreadPoolExecutor(config.jobs) as pool:
                built = list(pool.map(self._build, self.seeds))
        else:
            built = [self._build(s) for s in self.seeds]
        self.samples: list[Graph] = [b[0] for b in built]
        self.trees: list[BBTree] = [b[1] for b in built]

    def _build(self, seed: int):
        op = sample_outerplanar(self.graph, seed)
        h = op.graph
        if self.config.spanning_trees:
            h = Graph.from_edges(op.n, op.tree_edges(), op.graph.labels)
        return h, build_bb_tree(h)

    def __len__(self):
        return len(self.samples)

    def with_config(self, config: EnsembleConfig) -> "Ensemble":
        """Same samples under another threshold or job count."""
        if (config.num_subgraphs, config.seed, config.spanning_trees) != (
            self.config.num_subgraphs, self.config.seed, self.config.spanning_trees
        ):
            raise ValueError("config would need different samples")
        view = object.__new__(Ensemble)
        view.__dict__.update(self.__dict__)
        view.config = config
        return view

    def face_numbers(self) -> list[int]:
        return [t.face_number for t in self.trees]

    def closures(self, x: VertexSet) -> list[VertexSet]:
        if self.input_is_outerplanar:
            return [outerplanar_closure(self.trees[0], x)] * len(self.trees)
        if self.config.jobs > 1:
            with ThreadPoolExecutor(self.config.jobs) as pool:
                return list(pool.map(lambda t: outerplanar_closure(t, x), self.trees))
        return [outerplanar_closure(t, x) for t in self.trees]

    def votes(self, x: VertexSet) -> np.ndarray:
        """Per vertex, the number of samples whose closure of ``x`` contains it."""
        out = np.zeros(self.graph.n, dtype=np.int32)
        for c in self.closures(x):
            out += c.mask
        return out

    def closure(self, x: VertexSet, threshold: float | None = None) -> VertexSet:
        cfg = self.config
        need = cfg.min_votes if threshold is None else EnsembleConfig(cfg.num_subgraphs, threshold).min_votes
        return VertexSet(self.votes(x) >= need)


def approximate_closure(graph: Graph, x: VertexSet, config: EnsembleConfig) -> VertexSet:
    """Vertices lying in the closure of ``x`` in at least ``threshold`` percent of the samples."""
    return Ensemble(graph, config).closure(x)


def write_votes(graph: Graph, votes: np.ndarray, stream: TextIO) -> None:
    """CSV ``vertex,votes`` in ascending label order."""
    stream.write("vertex,votes\n")
    order = np.argsort(graph.labels, kind="stable")
    for v in order.tolist():
        stream.write(f"{graph.labels[v]},{votes[v]}\n")
