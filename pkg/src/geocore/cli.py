"""Command-line front end.

Every subcommand writes its primary output files plus a ``<out>.stats``
sidecar of ``key=value`` lines holding the configuration, sizes and phase
timings in milliseconds. Primary outputs depend only on inputs, flags and
seed.
"""

from __future__ import annotations

import argparse
import sys
import time
from contextlib import contextmanager
from dataclasses import replace
from pathlib import Path

import numpy as np

from geocore import __version__
from geocore._backend import COMPILED
from geocore.core import CoreConfig, approximate_core, exact_core, jaccard
from geocore.exact import closure_exact
from geocore.graph import (
    Graph,
    VertexSet,
    degree_distribution,
    largest_component,
    parse_edge_list,
    read_vertex_labels,
    write_histogram,
    write_vertex_set,
)
from geocore.hull import Ensemble, EnsembleConfig, write_votes
from geocore.opclosure import build_bb_tree, closure_naive_outerplanar, dump_bb_tree, outerplanar_closure
from geocore.sampler import read_outerplanar, sample_outerplanar, write_outerplanar


class CliError(Exception):
    pass


class Timer:
    def __init__(self):
        self.phases: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = (time.perf_counter() - t0) * 1000.0


def _write_stats(path: Path, args: argparse.Namespace, values: dict, timer: Timer) -> None:
    lines = [
        f"subcommand={args.command}",
        f"version={__version__}",
        f"backend={'cython' if COMPILED else 'python'}",
    ]
    for key in sorted(vars(args)):
        if key in ("command", "func"):
            continue
        lines.append(f"arg_{key}={getattr(args, key)}")
    lines += [f"{k}={v}" for k, v in values.items()]
    lines += [f"time_{k}_ms={v:.3f}" for k, v in timer.phases.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _stats_path(out: Path) -> Path:
    return out.with_name(out.name + ".stats")


def _load_graph(path: str) -> tuple[Graph, object]:
    """Read an edge list or a tagged outerplanar sample; keep the largest component."""
    p = Path(path)
    try:
        with p.open(encoding="utf-8") as fh:
            head = fh.readline()
            fh.seek(0)
            if head.startswith("# outerplanar"):
                op = read_outerplanar(fh, source=str(p))
                return op.graph, op
            g = parse_edge_list(fh, source=str(p))
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    if g.n == 0:
        raise CliError(f"{path}: graph has no vertices")
    return largest_component(g), None


def _read_labels(path: str) -> list[int]:
    try:
        with open(path, encoding="utf-8") as fh:
            return read_vertex_labels(fh, source=path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _vertex_set(graph: Graph, labels: list[int]) -> VertexSet:
    ids = []
    for lab in labels:
        try:
            ids.append(graph.index_of(lab))
        except KeyError:
            raise CliError(f"unknown vertex label {lab} (not in the largest component)") from None
    return VertexSet.of(graph.n, ids)


def _ensemble_config(args) -> EnsembleConfig:
    return EnsembleConfig(
        num_subgraphs=args.subgraphs,
        threshold=args.threshold,
        seed=args.seed,
        jobs=args.jobs,
        spanning_trees=getattr(args, "tree_baseline", False),
    )


def cmd_sample(args) -> None:
    timer = Timer()
    out = Path(args.out)
    with timer.phase("read"):
        graph, _ = _load_graph(args.input)
    with timer.phase("sample"):
        op = sample_outerplanar(graph, args.seed)
    with timer.phase("bbtree"):
        bb = build_bb_tree(op)
    with out.open("w", encoding="utf-8") as fh:
        write_outerplanar(op, fh)
    if args.dump_blocks:
        with open(args.dump_blocks, "w", encoding="utf-8") as fh:
            dump_bb_tree(bb, op.graph.labels, fh)
    _write_stats(_stats_path(out), args, {
        "n": graph.n,
        "m": graph.m,
        "out_edges": op.m,
        "left_edges": len(op.left),
        "right_edges": len(op.right),
        "face_number": bb.face_number,
        "blocks": len(bb.blocks),
        "bridges": len(bb.bridges),
        "stack_ops": op.stack_ops,
    }, timer)


def cmd_closure(args) -> None:
    timer = Timer()
    out = Path(args.out)
    with timer.phase("read"):
        graph, op = _load_graph(args.input)
        x = _vertex_set(graph, _read_labels(args.vertices))
    extra = {}
    with timer.phase("closure"):
        if args.mode == "exact":
            result = closure_exact(graph, x)
        elif args.mode in ("naive-op", "fast-op"):
            bb = build_bb_tree(graph)
            if args.mode == "naive-op":
                result = closure_naive_outerplanar(graph, x)
            else:
                result = outerplanar_closure(bb, x)
            extra["face_number"] = bb.face_number
        else:
            ens = Ensemble(graph, _ensemble_config(args))
            votes = ens.votes(x)
            result = VertexSet(votes >= ens.config.min_votes)
            extra["min_votes"] = ens.config.min_votes
            if args.votes:
                with open(args.votes, "w", encoding="utf-8") as fh:
                    write_votes(graph, votes, fh)
    with out.open("w", encoding="utf-8") as fh:
        write_vertex_set(graph, result, fh)
    _write_stats(_stats_path(out), args, {
        "n": graph.n, "m": graph.m, "input_size": len(x), "closure_size": len(result), **extra,
    }, timer)


def _parse_list(text: str, cast):
    try:
        return [cast(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise CliError(f"bad list value {text!r}") from None


def cmd_core(args) -> None:
    timer = Timer()
    prefix = Path(args.out)
    with timer.phase("read"):
        graph, _ = _load_graph(args.input)
    cfg = CoreConfig(
        seed_set_size=args.k,
        approx_set_size=args.l,
        ensemble=_ensemble_config(args),
        max_iterations=args.max_iterations,
        seed=args.seed,
        jobs=args.jobs,
    )
    extra = {}
    if args.grid:
        if not args.reference:
            raise CliError("--grid needs --reference (an exact core file)")
        ref = _vertex_set(graph, _read_labels(args.reference))
        with timer.phase("sample"):
            ens = Ensemble(graph, cfg.ensemble)
        rows = []
        with timer.phase("grid"):
            for lv in _parse_list(args.l_values, int):
                for tv in _parse_list(args.t_values, float):
                    sub = replace(cfg, approx_set_size=lv, ensemble=replace(cfg.ensemble, threshold=tv))
                    res = approximate_core(graph, sub, ens.with_config(sub.ensemble))
                    rows.append((lv, tv, jaccard(res.core, ref)))
        grid_path = prefix.with_name(prefix.name + ".grid.csv")
        with grid_path.open("w", encoding="utf-8") as fh:
            fh.write("l,t,jaccard\n")
            fh.writelines(f"{lv},{tv:g},{jv:.6f}\n" for lv, tv, jv in rows)
        best = max(rows, key=lambda r: (r[2], -r[0], -r[1]))
        extra.update(best_l=best[0], best_t=f"{best[1]:g}", best_jaccard=f"{best[2]:.6f}")
        _write_stats(_stats_path(grid_path), args, extra, timer)
        return
    with timer.phase("core"):
        result = exact_core(graph, cfg) if args.mode == "exact" else approximate_core(graph, cfg)
    periphery = result.periphery()
    outputs = {
        ".core": lambda fh: write_vertex_set(graph, result.core, fh),
        ".periphery": lambda fh: write_vertex_set(graph, periphery, fh),
        ".core_degrees.csv": lambda fh: write_histogram(degree_distribution(graph, result.core), fh),
        ".periphery_degrees.csv": lambda fh: write_histogram(degree_distribution(graph, periphery), fh),
    }
    for suffix, writer in outputs.items():
        with prefix.with_name(prefix.name + suffix).open("w", encoding="utf-8") as fh:
            writer(fh)
    if args.reference:
        ref = _vertex_set(graph, _read_labels(args.reference))
        extra["jaccard_vs_reference"] = f"{jaccard(result.core, ref):.6f}"
    _write_stats(_stats_path(prefix), args, {"m": graph.m, **result.summary(), **extra}, timer)


def cmd_eval(args) -> None:
    a = _read_labels(args.core_a)
    b = _read_labels(args.core_b)
    universe = np.unique(np.array(a + b, dtype=np.int64))
    pos = {int(v): i for i, v in enumerate(universe)}
    sa = VertexSet.of(len(universe), (pos[v] for v in a))
    sb = VertexSet.of(len(universe), (pos[v] for v in b))
    text = (
        f"size_a={len(sa)}\nsize_b={len(sb)}\n"
        f"intersection={len(sa & sb)}\nunion={len(sa | sb)}\n"
        f"jaccard={jaccard(sa, sb):.6f}\n"
    )
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geocore", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def ensemble_flags(sp):
        sp.add_argument("--subgraphs", type=int, default=100, help="number of sampled subgraphs")
        sp.add_argument("--threshold", type=float, default=1.0, help="vote threshold in percent")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--tree-baseline", action="store_true",
                        help="vote over spanning trees instead (comparison only)")

    s = sub.add_parser("sample", help="sample one outerplanar spanning subgraph")
    s.add_argument("--input", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--dump-blocks", help="write a block/bridge dump here")
    s.set_defaults(func=cmd_sample)

    c = sub.add_parser("closure", help="geodesic closure of a vertex set")
    c.add_argument("--input", required=True)
    c.add_argument("--vertices", required=True, help="file with one label per line")
    c.add_argument("--mode", choices=["exact", "naive-op", "fast-op", "approx"], default="exact")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.add_argument("--votes", help="approx mode: write per-vertex vote counts as CSV")
    ensemble_flags(c)
    c.set_defaults(func=cmd_closure)

    k = sub.add_parser("core", help="core-periphery decomposition")
    k.add_argument("--input", required=True)
    k.add_argument("--mode", choices=["exact", "approx"], default="exact")
    k.add_argument("--k", type=int, default=10, help="seed set size")
    k.add_argument("--l", type=int, default=5, help="set size for approximate closures")
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--max-iterations", type=int, default=50)
    k.add_argument("--out", required=True, help="output prefix")
    k.add_argument("--reference", help="exact core file to compare against")
    k.add_argument("--grid", action="store_true", help="sweep --l-values x --t-values")
    k.add_argument("--l-values", default="5,10,20,50,100")
    k.add_argument("--t-values", default="1,2,5,10")
    ensemble_flags(k)
    k.set_defaults(func=cmd_core)

    e = sub.add_parser("eval", help="Jaccard similarity of two vertex files")
    e.add_argument("core_a")
    e.add_argument("core_b")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, ValueError, KeyError, RuntimeError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        msg = str(msg).replace("\n", " ")
        sys.stderr.write(f"error={type(exc).__name__} message={msg}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
