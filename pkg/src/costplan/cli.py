"""Command-line entry point.

Exit codes: 0 success, 1 planner returned uncertified or found no plan
(outputs are still written), 2 usage or parse errors. Set ASEC_LOG to a
logging level name (DEBUG, INFO, ...) to control verbosity.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from .bench import (
    _record,
    gen_gridworld,
    gen_logistics,
    load_suite,
    run_suite,
    synthetic_manifest_for,
)
from .errors import PlanningError
from .estimators import Clock, EstimatorRegistry, SyntheticConfig
from .manifest import load_manifest, manifest_to_json
from .metrics import compare, emit_report
from .pddl import ground, parse_domain, parse_problem, print_domain, print_problem
from .remote import MockEstimatorServer, RemoteEstimatorClient
from .search import SearchConfig, asec, astar_offline, post_search_refine


def _positive_epsilon(text: str) -> float:
    value = float(text)
    if value < 1.0:
        raise argparse.ArgumentTypeError("epsilon must be >= 1")
    return value


def _add_plan_flags(sub):
    sub.add_argument("--domain", required=True)
    sub.add_argument("--problem", required=True)
    sub.add_argument("--manifest", required=True)
    sub.add_argument("--epsilon", type=_positive_epsilon, default=1.0)
    sub.add_argument("--heuristic", choices=["blind", "hmax"], default="hmax")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--refine-budget-ms", type=float, default=None)
    sub.add_argument("--real-latency", action="store_true")
    sub.add_argument("--endpoint", default=None, help="host:port of a remote estimator")
    sub.add_argument("--out", default=None, help="output path prefix for CSV/JSON reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costplan",
        description="Planner with online interval-valued action-cost estimation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    plan = subs.add_parser("plan", help="solve one instance")
    _add_plan_flags(plan)
    plan.add_argument("--mode", choices=["asec", "offline"], default="asec")

    comp = subs.add_parser("compare", help="run both modes and compare accounting")
    _add_plan_flags(comp)

    bench = subs.add_parser("bench", help="run a suite file")
    bench.add_argument("--suite", required=True)
    bench.add_argument("--out", required=True, help="output directory")

    gen_est = subs.add_parser("gen-estimators", help="attach synthetic chains to a task")
    gen_est.add_argument("--domain", required=True)
    gen_est.add_argument("--problem", required=True)
    gen_est.add_argument("--seed", type=int, default=0)
    gen_est.add_argument("--levels", type=int, default=3)
    gen_est.add_argument("--time-scale", type=float, default=2.0)
    gen_est.add_argument("--base-time-ms", type=float, default=25.0)
    gen_est.add_argument("--width", type=float, default=4.0)
    gen_est.add_argument("--decay", type=float, default=0.5)
    gen_est.add_argument("--no-exact-final", action="store_true")
    gen_est.add_argument("--cost-min", type=float, default=1.0)
    gen_est.add_argument("--cost-max", type=float, default=10.0)
    gen_est.add_argument("--out", required=True, help="manifest output path")

    gen_inst = subs.add_parser("gen-instances", help="generate PDDL instances")
    gen_inst.add_argument("--template", choices=["gridworld", "logistics"], required=True)
    gen_inst.add_argument("--rows", type=int, default=3)
    gen_inst.add_argument("--cols", type=int, default=3)
    gen_inst.add_argument("--corner-to-corner", action="store_true")
    gen_inst.add_argument("--trucks", type=int, default=1)
    gen_inst.add_argument("--cities", type=int, default=3)
    gen_inst.add_argument("--packages", type=int, default=1)
    gen_inst.add_argument("--seed", type=int, default=0)
    gen_inst.add_argument("--out", required=True, help="output directory")

    serve = subs.add_parser("serve-estimators", help="serve a manifest over TCP")
    serve.add_argument("--manifest", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=7007)
    return parser


def _load_task(args):
    with open(args.domain, "r", encoding="utf-8") as fh:
        domain = parse_domain(fh.read())
    with open(args.problem, "r", encoding="utf-8") as fh:
        problem = parse_problem(fh.read())
    manifest = load_manifest(args.manifest)
    return ground(domain, problem, manifest)


def _registry(task, args) -> EstimatorRegistry:
    clock = Clock("real" if args.real_latency else "simulated")
    remote = None
    if args.endpoint:
        host, _, port = args.endpoint.rpartition(":")
        remote = RemoteEstimatorClient(
            host or "127.0.0.1", int(port), real_latency=args.real_latency
        )
    return EstimatorRegistry(task, clock=clock, remote=remote)


def _print_certificate(task, cert, report):
    if cert.plan is None:
        print("no plan found")
    else:
        print(f"plan ({len(cert.plan)} steps):")
        for action_id in cert.plan:
            print(f"  {task.actions[action_id].name}")
    upper = "inf" if math.isinf(cert.upper) else f"{cert.upper:.6g}"
    print(f"cost bound: [{cert.lower:.6g}, {upper}]  (epsilon={cert.epsilon:g})")
    print(f"verdict: {cert.verdict}")
    print(
        f"estimator calls: {len(report.calls)} over {len(report.a_actual)}/{report.n} actions, "
        f"{report.t_modeling_ms:.6g} ms modeling, {report.t_planning_ms:.6g} ms planning"
    )


def _cmd_plan(args) -> int:
    task = _load_task(args)
    config = SearchConfig(epsilon=args.epsilon, heuristic=args.heuristic)
    registry = _registry(task, args)
    if args.mode == "asec":
        cert, report = asec(task, config, registry)
    else:
        cert, report = astar_offline(task, config, registry)
    if args.refine_budget_ms is not None and cert.plan is not None:
        cert = post_search_refine(cert, registry, args.refine_budget_ms)
    _print_certificate(task, cert, report)
    if args.out:
        rec = _record(task.name, args.mode, args.epsilon, cert, report, task)
        paths = emit_report([rec], args.out)
        print(f"wrote {paths[0]} and {paths[1]}")
    return 0 if cert.verdict == "certified" else 1


def _cmd_compare(args) -> int:
    task = _load_task(args)
    config = SearchConfig(epsilon=args.epsilon, heuristic=args.heuristic)
    cert_dyn, rep_dyn = asec(task, config, _registry(task, args))
    cert_off, rep_off = astar_offline(task, config, _registry(task, args))
    comparison = compare(rep_dyn, rep_off)
    print(f"dynamic : modeling {rep_dyn.t_modeling_ms:.6g} ms, "
          f"planning {rep_dyn.t_planning_ms:.6g} ms, verdict {cert_dyn.verdict}")
    print(f"offline : modeling {rep_off.t_modeling_ms:.6g} ms, "
          f"planning {rep_off.t_planning_ms:.6g} ms, verdict {cert_off.verdict}")
    print(f"delta_modeling_ms: {comparison.delta_modeling_ms:.6g}")
    print(f"delta_planning_ms: {comparison.delta_planning_ms:.6g}")
    print(f"dynamic preferable: {comparison.dynamic_preferable}")
    if args.out:
        records = [
            _record(task.name, "asec", args.epsilon, cert_dyn, rep_dyn, task),
            _record(task.name, "offline", args.epsilon, cert_off, rep_off, task),
        ]
        emit_report(records, args.out, {"comparison": comparison})
    return 0 if cert_dyn.verdict == "certified" else 1


def _cmd_bench(args) -> int:
    suite = load_suite(args.suite)
    csv_path, json_path = run_suite(suite, args.out)
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _cmd_gen_estimators(args) -> int:
    with open(args.domain, "r", encoding="utf-8") as fh:
        domain = parse_domain(fh.read())
    with open(args.problem, "r", encoding="utf-8") as fh:
        problem = parse_problem(fh.read())
    config = SyntheticConfig(
        levels=args.levels,
        time_scale=args.time_scale,
        base_time_ms=args.base_time_ms,
        width=args.width,
        decay=args.decay,
        exact_final=not args.no_exact_final,
        cost_range=(args.cost_min, args.cost_max),
    )
    manifest = synthetic_manifest_for(domain, problem, args.seed, config)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(manifest_to_json(manifest))
        fh.write("\n")
    print(f"wrote {args.out} ({len(manifest.entries)} chains)")
    return 0


def _cmd_gen_instances(args) -> int:
    if args.template == "gridworld":
        domain, problem = gen_gridworld(
            args.rows, args.cols, args.seed, corner_to_corner=args.corner_to_corner
        )
    else:
        domain, problem = gen_logistics(args.trucks, args.cities, args.packages, args.seed)
    os.makedirs(args.out, exist_ok=True)
    domain_path = os.path.join(args.out, "domain.pddl")
    problem_path = os.path.join(args.out, "problem.pddl")
    with open(domain_path, "w", encoding="utf-8") as fh:
        fh.write(print_domain(domain))
    with open(problem_path, "w", encoding="utf-8") as fh:
        fh.write(print_problem(problem))
    print(f"wrote {domain_path} and {problem_path}")
    return 0


def _cmd_serve(args) -> int:
    manifest = load_manifest(args.manifest)
    server = MockEstimatorServer(manifest, host=args.host, port=args.port)
    print(f"serving {len(manifest.entries)} chains on {args.host}:{server.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


COMMANDS = {
    "plan": _cmd_plan,
    "compare": _cmd_compare,
    "bench": _cmd_bench,
    "gen-estimators": _cmd_gen_estimators,
    "gen-instances": _cmd_gen_instances,
    "serve-estimators": _cmd_serve,
}


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("ASEC_LOG", "WARNING").upper())
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return COMMANDS[args.command](args)
    except (PlanningError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
