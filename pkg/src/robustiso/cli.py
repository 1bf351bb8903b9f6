"""Command-line interface: deterministic, scriptable JSON on stdout.

Exit codes: 0 success (or Isomorphic), 1 Far, 2 usage/input error,
3 work budget or size cap exceeded.  Rationals are emitted as "p/q"
strings.  ROBUSTISO_BUDGET overrides the default WL/weak-VC work budgets.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import approx, generators, setsystems, wl
from .errors import BudgetExceededError, CapExceededError, ParseError
from .graphs import (
    edit_distance_bruteforce,
    parse_graph,
    serialize_graph,
)
from .qap import parse_qap, qap_bruteforce, serialize_qap
from .rationals import format_rational, parse_rational

EXIT_OK = 0
EXIT_FAR = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _budget(default: int) -> int:
    raw = os.environ.get("ROBUSTISO_BUDGET")
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"ROBUSTISO_BUDGET must be an integer, got {raw!r}")


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _load_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _load_qap(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_qap(fh.read())


def _rational(value: str) -> Fraction:
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def cmd_vc(args) -> int:
    out: dict = {}
    if args.graph:
        g = _load_graph(args.graph)
        out["input"] = args.graph
        if args.mixed:
            out["mvc"] = setsystems.vc_dimension_exact(setsystems.mixed_system(g))
        elif args.weighted:
            out["wvc"] = setsystems.weighted_graph_vc(g)
        else:
            out["nvc"] = setsystems.vc_dimension_exact(
                setsystems.neighbourhood_system(g)
            )
    else:
        q = _load_qap(args.qap)
        out["input"] = args.qap
        if args.weak_d is not None:
            out["d"] = args.weak_d
            out["weak_vc_le_d"] = setsystems.weak_vc_test(
                q, args.weak_d, budget=_budget(10_000_000)
            )
        else:
            t = args.threshold if args.threshold is not None else Fraction(0)
            out["threshold"] = format_rational(t)
            out["qap_vc"] = setsystems.vc_dimension_exact(
                setsystems.qap_threshold_system(q, t)
            )
    _emit(out)
    return EXIT_OK


def cmd_ged(args) -> int:
    g = _load_graph(args.g)
    h = _load_graph(args.h)
    start = time.monotonic()
    result = approx.approximate_ged(
        g, h, args.eps, args.m, args.seed, mode=args.mode, lp_method=args.lp,
        alpha_budget=_budget(200_000),
    )
    elapsed = (time.monotonic() - start) * 1000
    out = {
        "approx_cost": format_rational(result.cost),
        "assignment": list(result.assignment.mapping),
        "eps": format_rational(args.eps),
        "m": args.m,
        "mode": args.mode,
        "seed": args.seed,
        "alphas_tried": result.report.alphas_tried,
        "lps_infeasible": result.report.lps_infeasible,
        "timing_ms": round(elapsed, 3),
    }
    if g.n <= args.oracle_cap:
        oracle_cost, _ = edit_distance_bruteforce(g, h, cap=args.oracle_cap)
        out["oracle_cost"] = format_rational(oracle_cost)
        out["gap"] = format_rational(result.cost - oracle_cost)
    _emit(out)
    return EXIT_OK


def cmd_qap(args) -> int:
    q = _load_qap(args.qap)
    start = time.monotonic()
    report = approx.approximate_qap(
        q, args.eps, args.m, args.seed, mode=args.mode, lp_method=args.lp,
        alpha_budget=_budget(200_000),
    )
    elapsed = (time.monotonic() - start) * 1000
    out = {
        "best_cost": format_rational(report.best_cost),
        "assignment": list(report.best_assignment.mapping),
        "eps": format_rational(args.eps),
        "m": args.m,
        "mode": args.mode,
        "seed": args.seed,
        "alphas_tried": report.alphas_tried,
        "lps_infeasible": report.lps_infeasible,
        "timing_ms": round(elapsed, 3),
    }
    if q.n <= args.oracle_cap:
        oracle_cost, _ = qap_bruteforce(q, cap=args.oracle_cap)
        out["oracle_cost"] = format_rational(oracle_cost)
        out["gap"] = format_rational(report.best_cost - oracle_cost)
    _emit(out)
    return EXIT_OK


def cmd_robust_gi(args) -> int:
    g = _load_graph(args.g)
    h = _load_graph(args.h)
    cert = wl.robust_gi(
        g, h, args.eps, strategy=args.strategy,
        budget=_budget(wl.DEFAULT_WL_BUDGET),
    )
    out = {
        "answer": cert.answer,
        "eps": format_rational(cert.eps),
        "strategy": cert.strategy,
        "S": list(cert.s_vertices),
        "k": cert.k,
        "distinguishing_colour": cert.distinguishing_colour,
        "histograms_digest": cert.histograms_digest,
    }
    _emit(out)
    return EXIT_FAR if cert.answer == "far" else EXIT_OK


def cmd_wl(args) -> int:
    g = _load_graph(args.g)
    budget = _budget(wl.DEFAULT_WL_BUDGET)
    if args.h is None:
        colouring = wl.k_wl_stable(g, args.k, budget=budget)
        _emit(
            {
                "input": args.g,
                "k": args.k,
                "num_colours": colouring.num_classes(),
                "rounds": colouring.rounds,
                "histogram": {str(c): v for c, v in sorted(colouring.histogram.items())},
            }
        )
        return EXIT_OK
    h = _load_graph(args.h)
    comparison = wl.wl_compare(g, h, args.k, budget=budget)
    _emit(
        {
            "k": args.k,
            "distinguishes": comparison.distinguishes,
            "distinguishing_colour": comparison.distinguishing_colour,
            "histograms_digest": comparison.digest(),
        }
    )
    return EXIT_OK


def cmd_gen(args) -> int:
    written = []
    if args.family == "vcgap":
        if args.n is None:
            raise ValueError("gen vcgap requires --n")
        instance = generators.gen_vc_gap_qap(args.n)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_qap(instance))
        written.append(args.out)
    elif args.family == "cfi":
        bundle = generators.gen_cfi_pair(args.base)
        written.extend(generators.save_bundle(bundle, args.out))
    elif args.family == "blowup":
        if args.inp is None:
            raise ValueError("gen blowup requires --in BUNDLE_DIR")
        bundle = generators.load_bundle(args.inp)
        written.extend(
            generators.save_bundle(
                generators.gen_blowup_pair(bundle, args.ell), args.out
            )
        )
    elif args.family == "random":
        if args.n is None or args.seed is None:
            raise ValueError("gen random requires --n and --seed")
        g = generators.gen_random_graph(
            args.n,
            edge_prob=float(args.p),
            target_vc=args.target_vc,
            seed=args.seed,
        )
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_graph(g))
        written.append(args.out)
    out = {"family": args.family, "written": written}
    if args.seed is not None:
        out["seed"] = args.seed
    _emit(out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.kind == "ged":
        g = _load_graph(args.a)
        h = _load_graph(args.b)
        cost, assignment = edit_distance_bruteforce(g, h, cap=args.cap)
        _emit(
            {
                "kind": "ged",
                "cost": format_rational(cost),
                "assignment": list(assignment.mapping),
            }
        )
    elif args.kind == "qap":
        q = _load_qap(args.a)
        cost, assignment = qap_bruteforce(q, cap=args.cap)
        _emit(
            {
                "kind": "qap",
                "cost": format_rational(cost),
                "assignment": list(assignment.mapping),
            }
        )
    else:
        from .graphs import is_isomorphic_bruteforce

        g = _load_graph(args.a)
        h = _load_graph(args.b)
        iso = is_isomorphic_bruteforce(g, h)
        _emit(
            {
                "kind": "iso",
                "isomorphic": iso is not None,
                "assignment": None if iso is None else list(iso.mapping),
            }
        )
    return EXIT_OK


def cmd_bench(args) -> int:
    """Small fixed workload with per-step timings (timings are not
    covered by the determinism guarantee)."""
    results = []

    def run(op, fn):
        start = time.monotonic()
        fn()
        results.append({"op": op, "ms": round((time.monotonic() - start) * 1000, 3)})

    g = generators.gen_random_graph(12, edge_prob=0.5, seed=args.seed)
    h = generators.gen_random_graph(12, edge_prob=0.5, seed=args.seed + 1)
    run("neighbourhood_vc_n12", lambda: setsystems.vc_dimension_exact(
        setsystems.neighbourhood_system(g)))
    run("wl2_pair_n12", lambda: wl.wl_distinguishes(g, h, 2))
    g6 = generators.gen_random_graph(6, edge_prob=0.5, seed=args.seed + 2)
    h6 = generators.gen_random_graph(6, edge_prob=0.5, seed=args.seed + 3)
    run("ged_oracle_n6", lambda: edit_distance_bruteforce(g6, h6))
    run("ged_approx_n6_m1", lambda: approx.approximate_ged(
        g6, h6, 1, 1, seed=args.seed, lp_method=args.lp))
    _emit({"bench": results, "seed": args.seed})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustiso",
        description="Edit distance / QAP additive approximation and "
        "WL-based robust isomorphism testing",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="cap on internal parallelism (all paths run "
                        "sequentially; accepted for interface stability)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vc", help="VC dimension of graph/QAP set systems")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--qap")
    p.add_argument("--weighted", action="store_true",
                   help="max VC over all weight thresholds")
    p.add_argument("--mixed", action="store_true",
                   help="VC of the mixed-neighbourhood system")
    p.add_argument("--threshold", type=_rational, default=None,
                   help="threshold for the QAP hypothesis system (default 0)")
    p.add_argument("--weak-d", type=int, default=None,
                   help="test whether the weak VC dimension is at most d")
    p.set_defaults(fn=cmd_vc)

    p = sub.add_parser("ged", help="approximate graph edit distance")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--lp", choices=["exact", "highs"], default="highs")
    p.add_argument("--oracle-cap", type=int, default=8)
    p.set_defaults(fn=cmd_ged)

    p = sub.add_parser("qap", help="approximate a QAP instance")
    p.add_argument("qap")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--lp", choices=["exact", "highs"], default="highs")
    p.add_argument("--oracle-cap", type=int, default=7)
    p.set_defaults(fn=cmd_qap)

    p = sub.add_parser("robust-gi", help="promise isomorphism test")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--strategy", choices=["net", "coloured"], default="net")
    p.set_defaults(fn=cmd_robust_gi)

    p = sub.add_parser("wl", help="k-WL stable colouring / distinguishing")
    p.add_argument("g")
    p.add_argument("h", nargs="?", default=None)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(fn=cmd_wl)

    p = sub.add_parser("gen", help="generate paper-construction instances")
    p.add_argument("family", choices=["cfi", "blowup", "vcgap", "random"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--base", default="k4")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--p", type=_rational, default=Fraction(1, 2))
    p.add_argument("--target-vc", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--in", dest="inp", default=None, help="input bundle directory")
    p.add_argument("--out", required=True, help="output file or directory")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("oracle", help="exact brute-force oracles")
    p.add_argument("kind", choices=["ged", "qap", "iso"])
    p.add_argument("a")
    p.add_argument("b", nargs="?", default=None)
    p.add_argument("--cap", type=int, default=10)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("bench", help="timings of a small fixed workload")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lp", choices=["exact", "highs"], default="highs")
    p.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (BudgetExceededError, CapExceededError) as exc:
        payload = {"error": "budget-exceeded", "detail": str(exc)}
        attempted = getattr(exc, "attempted", None)
        if attempted is not None:
            # for WL-driven commands the attempted quantity is the dimension k
            key = "k" if args.command in ("robust-gi", "wl") else "attempted"
            payload[key] = attempted
        _emit(payload)
        return EXIT_BUDGET
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
