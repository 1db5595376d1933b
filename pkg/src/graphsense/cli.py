"""Command-line surface: construct measurement matrices, verify them,
recover signals, run experiments, and generate graphs.

Exit codes: 0 success, 1 verification failure, 2 usage or input errors.
All randomness flows from --seed (falling back to $GRAPHSENSE_SEED, then 0),
so equal seeds and flags give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import constructors as cons
from . import experiments as exps
from . import formats
from . import randgraphs as rg
from .general import algorithm1, algorithm1_with_agents
from .graphs import Graph
from .kernels import (BERNOULLI_HALF, BERNOULLI_ONES_ROW, BINARY_EXPANSION,
                      CompleteKernelSpec)
from .matrices import MeasurementMatrix, check_feasibility
from .recovery import (augmented_l1_recover, l0_oracle, l1_minimize,
                       sequential_decode)
from .verify import columns_2k_independent, exhaustive_identifiability, nsp_verify

_TOPOLOGIES = ("line", "ring", "g4", "g4h", "ring-network", "grid", "tree",
               "short-bk", "short-dk", "g4-bounded", "markov", "general")


def _default_seed() -> int:
    env = os.environ.get("GRAPHSENSE_SEED")
    return int(env) if env else 0


def _write_out(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise formats.ParseError(0, f"cannot read {path}: {exc}") from None


def _kernel_spec(args) -> CompleteKernelSpec:
    kind = args.kernel
    if kind is None:
        kind = BINARY_EXPANSION if args.k == 1 else BERNOULLI_HALF
    return CompleteKernelSpec(kind=kind, row_count_override=args.kernel_rows,
                              rng_seed=args.seed, c=args.kernel_c)


def _parse_int_list(text: str) -> list[int]:
    return [int(p) for p in text.replace(",", " ").split()]


def _cmd_construct(args) -> int:
    spec = _kernel_spec(args)
    graph = None
    topo = args.topology
    if topo in ("line", "ring"):
        matrix = cons.line_matrix(args.n, args.k)
        graph = cons.path_graph(args.n) if topo == "line" else cons.ring_graph(args.n)
    elif topo == "g4":
        matrix = cons.g4_matrix(args.n, args.k, spec)
        graph = cons.g4_graph(args.n)
    elif topo == "g4h":
        if not args.midpoints:
            raise formats.ParseError(0, "g4h needs --midpoints")
        mids = _parse_int_list(args.midpoints)
        chords = [((i - 1) % args.n, (i + 1) % args.n) for i in mids]
        matrix = cons.g4h_matrix(args.n, args.k, chords, spec)
        graph = cons.g4h_graph(args.n, chords)
    elif topo == "ring-network":
        matrix = cons.ring_network_line_graph_matrix(args.n, args.k, spec)
        graph = cons.ring_network_line_graph(args.n)
    elif topo == "grid":
        if not args.side:
            raise formats.ParseError(0, "grid needs --side")
        matrix = cons.grid_matrix(args.side, args.k, spec)
        graph = cons.grid_graph(args.side)
    elif topo == "tree":
        if not args.graph:
            raise formats.ParseError(0, "tree needs --graph")
        graph = formats.read_graph(_read_file(args.graph))
        matrix = cons.tree_matrix(graph, args.root, args.k, spec)
    elif topo == "short-bk":
        matrix = cons.short_matrix(cons.ShortSpec(args.n, args.k, cons.BK))
        graph = cons.path_graph(args.n)
    elif topo == "short-dk":
        matrix = cons.short_matrix(cons.ShortSpec(args.n, args.k, cons.DK))
        graph = cons.path_graph(args.n)
    elif topo == "g4-bounded":
        if not args.d:
            raise formats.ParseError(0, "g4-bounded needs --d")
        matrix = cons.g4_bounded_length_matrix(args.n, args.k, args.d, spec)
        graph = cons.g4_graph(args.n)
    elif topo == "markov":
        matrix = cons.markov_rows(args.n, args.k, args.rows, args.seed)
        graph = cons.g4_graph(args.n)
    elif topo == "general":
        if not args.graph:
            raise formats.ParseError(0, "general needs --graph")
        graph = formats.read_graph(_read_file(args.graph))
        if args.agents:
            y = [int(v) for v in _read_file(args.agents).split()]
            matrix = algorithm1_with_agents(graph, args.k, y, spec)
        else:
            matrix = algorithm1(graph, args.k, spec)
    else:  # pragma: no cover - argparse restricts choices
        raise formats.ParseError(0, f"unknown topology {topo}")

    _write_out(args.out, formats.write_matrix(matrix))
    if args.out != "-" and matrix.decode_plan is not None:
        Path(args.out + ".plan.json").write_text(
            json.dumps(formats.plan_to_dict(matrix.decode_plan), sort_keys=True) + "\n")
    if args.graph_out and graph is not None:
        _write_out(args.graph_out, formats.write_graph(graph))
    return 0


def _cmd_verify(args) -> int:
    matrix = formats.read_matrix(_read_file(args.matrix))
    verdict: dict = {"check": args.check, "k": args.k, "version": __version__,
                     "formatVersion": formats.FORMAT_VERSION}
    if args.check == "feasibility":
        if not args.graph:
            raise formats.ParseError(0, "feasibility check needs --graph")
        g = formats.read_graph(_read_file(args.graph))
        ok, bad = check_feasibility(g, matrix)
        verdict.update(ok=ok, offendingRow=bad)
    elif args.check == "rank":
        ok, bad = columns_2k_independent(matrix.to_dense(), args.k)
        verdict.update(ok=ok, dependentColumns=list(bad) if bad else None)
    elif args.check == "nsp":
        ok, worst = nsp_verify(matrix.to_dense(), args.k)
        verdict.update(ok=ok, worstRatio=worst)
    else:  # identifiability
        ok = exhaustive_identifiability(matrix.to_dense(), args.k)
        verdict.update(ok=ok)
    _write_out(args.out, json.dumps(verdict, sort_keys=True) + "\n")
    return 0 if verdict["ok"] else 1


def _cmd_recover(args) -> int:
    matrix = formats.read_matrix(_read_file(args.matrix))
    plan_path = Path(args.matrix + ".plan.json")
    if args.method in ("sequential", "hub-robust"):
        if not plan_path.exists():
            raise formats.ParseError(0, f"{args.method} needs {plan_path}")
        plan = formats.plan_from_dict(json.loads(plan_path.read_text()))
        matrix = MeasurementMatrix(matrix.n, matrix.rows, plan)
    y = formats.read_vector(_read_file(args.measurements))

    if args.method == "l1":
        res = l1_minimize(matrix.to_dense().astype(float), y)
    elif args.method == "sequential":
        res = sequential_decode(matrix, y)
    elif args.method == "hub-robust":
        if args.hub_rows:
            hub_rows = _parse_int_list(args.hub_rows)
        else:
            hub_rows = [g.hub_row for g in matrix.decode_plan.groups
                        if g.hub_row is not None]
        res = augmented_l1_recover(matrix, y, hub_rows)
    else:  # l0
        oracle = l0_oracle(matrix.to_dense().astype(float), y, args.k_max)
        out = {
            "method": "l0", "version": __version__,
            "formatVersion": formats.FORMAT_VERSION,
            "supportSize": oracle.support_size, "unique": oracle.unique,
            "solutions": [[float(v) for v in x] for x in oracle.solutions],
        }
        _write_out(args.out, json.dumps(out, sort_keys=True) + "\n")
        return 0

    out = {
        "method": args.method, "version": __version__,
        "formatVersion": formats.FORMAT_VERSION,
        "status": res.status, "residual": res.residual,
        "l1Value": res.l1_value,
        "xHat": [float(v) for v in res.x_hat],
    }
    _write_out(args.out, json.dumps(out, sort_keys=True) + "\n")
    return 0


def _cmd_experiment(args) -> int:
    if args.name == "exp1":
        records = exps.experiment1(n=args.n, steps=args.steps,
                                   edges_per_step=args.edges_per_step,
                                   trials=args.trials, seed=args.seed)
    elif args.name == "exp2":
        k_sweep = _parse_int_list(args.k_sweep)
        records = exps.experiment2(n=args.n, k_sweep=k_sweep,
                                   trials=args.trials,
                                   noise_sigma=args.noise_sigma,
                                   seed=args.seed, ba_m=args.ba_m)
    elif args.name == "er-partition":
        records = exps.er_partition_experiment(
            n=args.n, beta=args.beta, trials=args.trials, seed=args.seed)
    else:  # er-pipeline
        records = []
        for trial in range(args.trials):
            tseed = (args.seed ^ trial) & ((1 << 64) - 1)
            spec = rg.ErdosRenyiSpec(n=args.n, p=args.p, beta=args.beta,
                                     seed=tseed)
            g = rg.gen_er(spec)
            kspec = CompleteKernelSpec(
                kind=BINARY_EXPANSION if args.k == 1 else BERNOULLI_HALF,
                rng_seed=tseed)
            result = rg.er_pipeline(g, args.k, kspec)
            records.append(exps.ExperimentRecord(
                experiment="er-pipeline", trial=trial, seed=tseed,
                params={"n": args.n, "p": spec.edge_probability(), "k": args.k},
                metrics={"regime": result.regime, "rows": result.row_count,
                         "partition_r": result.partition_r}))
    _write_out(args.out, formats.write_jsonl(records))
    return 0


def _cmd_graph_gen(args) -> int:
    model = args.model
    if model == "er":
        g = rg.gen_er(rg.ErdosRenyiSpec(n=args.n, p=args.p, beta=args.beta,
                                        seed=args.seed))
    elif model == "ba":
        g = rg.gen_ba(rg.BarabasiAlbertSpec(n=args.n, m=args.ba_m, m0=args.m0,
                                            seed=args.seed))
    elif model == "tree":
        rng = np.random.default_rng(args.seed & ((1 << 64) - 1))
        g = Graph.from_edges(args.n, rg.random_attachment_tree(args.n, rng))
    elif model == "line":
        g = cons.path_graph(args.n)
    elif model == "ring":
        g = cons.ring_graph(args.n)
    elif model == "g4":
        g = cons.g4_graph(args.n)
    elif model == "grid":
        g = cons.grid_graph(args.side)
    else:  # ring-network
        g = cons.ring_network_line_graph(args.n)
    _write_out(args.out, formats.write_graph(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsense",
        description="Graph-constrained sparse-recovery measurement design")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("construct", help="build a measurement matrix")
    p.add_argument("--topology", required=True, choices=_TOPOLOGIES)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--side", type=int, default=None)
    p.add_argument("--graph", default=None)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--midpoints", default=None,
                   help="comma-separated chord midpoints (g4h)")
    p.add_argument("--agents", default=None,
                   help="file of node ids every measurement must contain")
    p.add_argument("--kernel", choices=(BINARY_EXPANSION, BERNOULLI_HALF,
                                        BERNOULLI_ONES_ROW), default=None)
    p.add_argument("--kernel-rows", type=int, default=None)
    p.add_argument("--kernel-c", type=float, default=4.0)
    p.add_argument("--rows", type=int, default=None,
                   help="row count override (markov)")
    add_seed(p)
    p.add_argument("--out", required=True)
    p.add_argument("--graph-out", default=None)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="check a matrix against an oracle")
    p.add_argument("--matrix", required=True)
    p.add_argument("--graph", default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--check", required=True,
                   choices=("feasibility", "rank", "nsp", "identifiability"))
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("recover", help="recover a signal from measurements")
    p.add_argument("--matrix", required=True)
    p.add_argument("--measurements", required=True)
    p.add_argument("--method", required=True,
                   choices=("l1", "l0", "sequential", "hub-robust"))
    p.add_argument("--hub-rows", default=None)
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("experiment", help="run a seeded experiment")
    p.add_argument("--name", required=True,
                   choices=("exp1", "exp2", "er-partition", "er-pipeline"))
    add_seed(p)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--edges-per-step", type=int, default=25)
    p.add_argument("--k-sweep", default="2,5")
    p.add_argument("--noise-sigma", type=float, default=None)
    p.add_argument("--ba-m", type=int, default=2)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("graph-gen", help="generate a constraint graph")
    p.add_argument("--model", required=True,
                   choices=("er", "ba", "tree", "line", "ring", "g4", "grid",
                            "ring-network"))
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--ba-m", type=int, default=2)
    p.add_argument("--m0", type=int, default=10)
    p.add_argument("--side", type=int, default=None)
    add_seed(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_graph_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except formats.ParseError as exc:
        print(f"graphsense: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"graphsense: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
