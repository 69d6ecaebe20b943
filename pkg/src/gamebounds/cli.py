"""Command-line front end: analyze games, verify and lift certificates.

Exit codes: 0 success, 1 usage/format errors, 2 solver non-convergence,
3 invalid quantum independent set.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import gameio
from .games import (Game, GameFormatError, SizeCapError, chsh,
                    independent_set_game, magic_square, parallel_repetition)
from .gamegraph import (build_game_graph, build_weighted_game_graph,
                        cycle_graph, dimacs_sidecar, to_dimacs, to_plain_graph)
from .independence import classical_value
from .quantum import (lift_qis_to_strategy, qis_from_dict, strategy_to_dict,
                      verify_quantum_independent_set, winning_probability)
from .sdp import NotXorGame, quantum_upper_bound, xor_tsirelson_value

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_INVALID_QIS = 3

CATALOG = {
    "chsh": chsh,
    "magic-square": magic_square,
    "isg-c5-t2": lambda: independent_set_game(cycle_graph(5), 2, name="isg-c5-t2"),
    "isg-c5-t3": lambda: independent_set_game(cycle_graph(5), 3, name="isg-c5-t3"),
}


def _format_float(v: float) -> str:
    return format(float(v), ".17g")


def _to_json(value, indent: int = 0) -> str:
    """JSON text with floats rendered at 17 significant digits and keys in
    insertion order, so identical reports serialize to identical bytes."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [f"{inner}{json.dumps(str(k))}: {_to_json(v, indent + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{inner}{_to_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return _format_float(value)
    return json.dumps(value)


def _load_game(source: str) -> Game:
    if source in CATALOG:
        return CATALOG[source]()
    return gameio.load_game(source)


def build_report(g: Game, tol: float, force_weighted: bool,
                 vertex_cap: int, with_timings: bool,
                 max_iterations: int = 200_000) -> dict:
    """Run the full pipeline game -> graph -> alpha -> theta."""
    timings: dict[str, float] = {}
    weighted = force_weighted or not (g.is_boolean() and g.is_uniform())

    t0 = time.perf_counter()
    gg = build_weighted_game_graph(g) if weighted else build_game_graph(g)
    graph = to_plain_graph(gg)
    timings["build_graph"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if weighted:
        from .independence import weighted_independence
        alpha = weighted_independence(graph, gg.weight_array(), vertex_cap)
        omega = alpha.value
        omega_exact = None
    else:
        from .independence import independence_number
        alpha = independence_number(graph, vertex_cap)
        from fractions import Fraction
        frac = Fraction(len(alpha.witness), g.k)
        omega = float(frac)
        omega_exact = f"{frac.numerator}/{frac.denominator}"
    timings["alpha"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if gg.n == 0:
        from .sdp import ThetaResult
        import numpy as np
        theta = ThetaResult(0.0, 0.0, 0.0, 0, True, np.zeros((0, 0)))
        theta_over_k = 0.0
    elif weighted:
        from .sdp import weighted_theta
        theta = weighted_theta(graph, gg.weight_array(), tol, max_iterations)
        theta_over_k = theta.value
    else:
        from .sdp import lovasz_theta
        theta = lovasz_theta(graph, tol, max_iterations)
        theta_over_k = theta.value / g.k
    timings["theta"] = time.perf_counter() - t0

    xor_value = None
    try:
        t0 = time.perf_counter()
        xor_value = xor_tsirelson_value(g)
        timings["xor_value"] = time.perf_counter() - t0
    except NotXorGame:
        pass

    report = {
        "name": g.name,
        "sizes": {"nx": g.nx, "ny": g.ny, "na": g.na, "nb": g.nb},
        "k": g.k,
        "weighted_pipeline": weighted,
        "graph": {"num_vertices": gg.n, "num_edges": gg.num_edges},
        "alpha": {
            "value": float(alpha.value),
            "witness": [{"index": v, "quadruple": list(gg.vertices[v])}
                        for v in sorted(alpha.witness)],
            "nodes_explored": alpha.nodes_explored,
        },
        "omega_classical": float(omega),
        "omega_exact": omega_exact,
        "theta": {
            "value": theta.value,
            "dual_bound": theta.dual_bound,
            "gap": theta.gap,
            "iterations": theta.iterations,
            "converged": theta.converged,
        },
        "theta_over_k": float(theta_over_k),
        "xor_value": xor_value,
        "bell_gap_certificate": bool(theta_over_k > omega + 10.0 * tol),
        "solver_failure": bool(omega > theta_over_k + 10.0 * tol),
        "tolerance": tol,
    }
    if with_timings:
        report["timings"] = timings
    report["_game_graph"] = gg  # internal, stripped before emission
    return report


def _render_text(report: dict) -> str:
    lines = []
    sizes = report["sizes"]
    lines.append(f"game: {report['name']}")
    lines.append(f"sizes: |X|={sizes['nx']} |Y|={sizes['ny']} "
                 f"|A|={sizes['na']} |B|={sizes['nb']}  k={report['k']}")
    lines.append("pipeline: " + ("weighted" if report["weighted_pipeline"]
                                 else "uniform 0/1"))
    graph = report["graph"]
    lines.append(f"game graph: {graph['num_vertices']} vertices, "
                 f"{graph['num_edges']} edges")
    alpha = report["alpha"]
    lines.append(f"alpha: {_format_float(alpha['value'])} "
                 f"(nodes explored: {alpha['nodes_explored']})")
    witness = " ".join("({},{},{},{})".format(*w["quadruple"])
                       for w in alpha["witness"])
    lines.append(f"alpha witness: {witness}")
    omega_exact = f" (= {report['omega_exact']})" if report["omega_exact"] else ""
    lines.append(f"omega_classical: {_format_float(report['omega_classical'])}"
                 + omega_exact)
    theta = report["theta"]
    lines.append(f"theta: {_format_float(theta['value'])}")
    lines.append(f"theta dual bound: {_format_float(theta['dual_bound'])} "
                 f"(gap {_format_float(theta['gap'])})")
    lines.append(f"theta iterations: {theta['iterations']} "
                 f"converged: {str(theta['converged']).lower()}")
    lines.append(f"entangled value upper bound (theta/k): "
                 f"{_format_float(report['theta_over_k'])}")
    if report["xor_value"] is not None:
        lines.append(f"xor entangled value: {_format_float(report['xor_value'])}")
    lines.append("bell gap certified (theta/k > omega): "
                 + str(report["bell_gap_certificate"]).lower())
    if report["solver_failure"]:
        lines.append("WARNING: solver failure: omega exceeds theta/k")
    if "timings" in report:
        for stage, seconds in report["timings"].items():
            lines.append(f"time {stage}: {seconds:.3f}s")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    try:
        g = _load_game(args.game)
        if args.rep > 1:
            g = parallel_repetition(g, args.rep)
        report = build_report(g, args.tol, args.weighted, args.max_verts,
                              args.timings, args.max_iter)
    except (GameFormatError, SizeCapError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    gg = report.pop("_game_graph")
    if args.export_graph:
        with open(args.export_graph, "w", encoding="utf-8") as fh:
            fh.write(to_dimacs(gg))
        with open(args.export_graph + ".json", "w", encoding="utf-8") as fh:
            fh.write(_to_json(dimacs_sidecar(gg)) + "\n")
    if args.json:
        print(_to_json(report))
    else:
        print(_render_text(report), end="")
    if not report["theta"]["converged"]:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_verify_qis(args) -> int:
    try:
        g = _load_game(args.game)
        if args.rep > 1:
            g = parallel_repetition(g, args.rep)
        if args.graph:
            from .gamegraph import parse_dimacs
            with open(args.graph, "r", encoding="utf-8") as fh:
                target = parse_dimacs(fh.read())
        else:
            target = build_game_graph(g)
        with open(args.qis, "r", encoding="utf-8") as fh:
            qis = qis_from_dict(json.load(fh))
        report = verify_quantum_independent_set(target, qis, args.tol)
    except (GameFormatError, OSError, ValueError, json.JSONDecodeError,
            KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report.valid:
        print(f"valid quantum independent set: t={qis.t} d={qis.d}")
        return EXIT_OK
    print(f"invalid quantum independent set: {len(report.violations)} violation(s)")
    for violation in report.violations:
        print("  " + violation.describe())
    return EXIT_INVALID_QIS


def cmd_lift(args) -> int:
    from .quantum import InvalidQuantumIndependentSet
    try:
        g = _load_game(args.game)
        if args.rep > 1:
            g = parallel_repetition(g, args.rep)
        gg = build_game_graph(g)
        with open(args.qis, "r", encoding="utf-8") as fh:
            qis = qis_from_dict(json.load(fh))
    except (GameFormatError, OSError, ValueError, json.JSONDecodeError,
            KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        strategy = lift_qis_to_strategy(g, gg, qis)
    except InvalidQuantumIndependentSet as exc:
        print(f"invalid quantum independent set: {exc}", file=sys.stderr)
        return EXIT_INVALID_QIS
    value = winning_probability(g, strategy)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_to_json(strategy_to_dict(strategy)) + "\n")
    print(f"lifted strategy winning probability: {_format_float(value)}")
    print(f"certified lower bound t/k: {_format_float(qis.t / g.k)}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in sorted(CATALOG):
            print(name)
        return EXIT_OK
    if args.name not in CATALOG:
        print(f"error: unknown catalog game {args.name!r}", file=sys.stderr)
        return EXIT_USAGE
    print(gameio.serialize_game(CATALOG[args.name]()))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gamebounds",
        description="Classical and entangled-value bounds for non-local games "
                    "via their game graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--rep", type=int, default=1, metavar="N",
                       help="analyze the N-fold parallel repetition")
        p.add_argument("--tol", type=float, default=1e-7,
                       help="solver tolerance (default 1e-7)")

    p = sub.add_parser("analyze", help="run the bound pipeline on a game")
    p.add_argument("game", help="catalog name or path to a game JSON file")
    add_common(p)
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--weighted", action="store_true",
                   help="force the weighted pipeline")
    p.add_argument("--max-verts", type=int, default=512,
                   help="vertex cap for the exact solver (default 512)")
    p.add_argument("--seed", type=int, default=0,
                   help="reserved; all current algorithms are deterministic")
    p.add_argument("--max-iter", type=int, default=200_000,
                   help="iteration cap for the semidefinite solver")
    p.add_argument("--export-graph", metavar="PATH",
                   help="write the game graph as DIMACS plus a JSON sidecar")
    p.add_argument("--timings", action="store_true",
                   help="include per-stage timings in the report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-qis",
                       help="verify a quantum independent set file")
    p.add_argument("game", help="catalog name or path to a game JSON file")
    p.add_argument("qis", help="path to a certificate JSON file")
    add_common(p)
    p.add_argument("--graph", metavar="PATH",
                   help="verify against this DIMACS graph instead of "
                        "rebuilding the game graph")
    p.set_defaults(func=cmd_verify_qis, tol=1e-9)

    p = sub.add_parser("lift",
                       help="lift a quantum independent set to a strategy")
    p.add_argument("game", help="catalog name or path to a game JSON file")
    p.add_argument("qis", help="path to a certificate JSON file")
    add_common(p)
    p.add_argument("--out", metavar="PATH",
                   help="write the lifted strategy JSON here")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("catalog", help="list or emit built-in games")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?", help="game name (for emit)")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "catalog" and args.action == "emit" and not args.name:
        print("error: catalog emit requires a game name", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
