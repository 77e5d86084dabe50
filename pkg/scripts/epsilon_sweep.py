#!/usr/bin/env python3
"""Sweep the suboptimality target and report how much modeling it buys.

Runs online-modeling search on a corner-to-corner gridworld at a range of
epsilon values and prints, per seed, the estimated-action count, estimator
call count, and modeling time. Larger epsilon should need fewer and
cheaper estimator calls at the same certified verdict.

Usage: python3 scripts/epsilon_sweep.py [--size 10] [--seeds 3]
           [--epsilons 1.0 1.1 1.2 1.5 2.0]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from costplan.bench import gen_gridworld, synthetic_manifest_for
from costplan.estimators import SyntheticConfig
from costplan.metrics import t_offline_modeling
from costplan.pddl import ground
from costplan.search import SearchConfig, asec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=10)
    parser.add_argument("--seeds", type=int, default=3)
    parser.add_argument(
        "--epsilons", type=float, nargs="+", default=[1.0, 1.1, 1.2, 1.5, 2.0]
    )
    args = parser.parse_args(argv)

    config = SyntheticConfig(cost_range=(5.0, 10.0))
    domain, problem = gen_gridworld(args.size, args.size, corner_to_corner=True)
    print(f"{'seed':>4} {'eps':>5} {'verdict':>11} {'|A_actual|':>10} "
          f"{'calls':>6} {'T_mod_ms':>10} {'T_mod/T_off':>11}")
    for seed in range(args.seeds):
        manifest = synthetic_manifest_for(domain, problem, seed, config)
        task = ground(domain, problem, manifest, name=f"grid{args.size}#s{seed}")
        t_off = t_offline_modeling(manifest)
        for eps in args.epsilons:
            cert, report = asec(task, SearchConfig(epsilon=eps, heuristic="hmax"))
            print(
                f"{seed:>4} {eps:>5.2f} {cert.verdict:>11} "
                f"{len(report.a_actual):>10} {len(report.calls):>6} "
                f"{report.t_modeling_ms:>10.1f} "
                f"{report.t_modeling_ms / t_off:>11.3f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
