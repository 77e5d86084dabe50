"""Shared builders for hand-constructed tasks and randomized suites."""

from costplan.bench import gen_gridworld, gen_logistics, synthetic_manifest_for
from costplan.estimators import SyntheticConfig
from costplan.intervals import INF, CostInterval
from costplan.pddl import ground
from costplan.task import ChainSpec, Fact, GroundAction, PlanningTask


def make_task(actions, goal, init=frozenset({0}), true_costs=None, priors=None, name="hand"):
    """Build a task from (name, pre, add, delete, chain_levels) tuples.

    chain_levels: list of (time_ms, (lb, ub)); facts are bare integers.
    priors: optional {action index: (lb, ub)} overriding the [0, inf) default.
    """
    ground_actions = []
    chains = []
    max_fact = 0
    priors = priors or {}
    for i, (aname, pre, add, delete, levels) in enumerate(actions):
        ground_actions.append(
            GroundAction(
                id=i,
                name=aname,
                pre=frozenset(pre),
                add=frozenset(add),
                delete=frozenset(delete),
            )
        )
        chains.append(
            ChainSpec(
                action_id=i,
                prior=CostInterval(*priors.get(i, (0.0, INF))),
                levels=tuple((t, CostInterval(*iv)) for t, iv in levels),
            )
        )
        max_fact = max([max_fact, *pre, *add, *delete])
    facts = tuple(Fact(i, f"f{i}") for i in range(max_fact + 1))
    return PlanningTask(
        name=name,
        facts=facts,
        init=frozenset(init),
        goal=frozenset(goal),
        actions=tuple(ground_actions),
        chains=tuple(chains),
        true_costs=true_costs,
    )


def suite_instance(index, seed, config=None):
    """Deterministic small instance: alternating gridworlds and logistics."""
    config = config or SyntheticConfig()
    if index % 2 == 0:
        rows = 3 + (index // 2) % 3
        cols = 3 + (index // 3) % 3
        domain, problem = gen_gridworld(rows, cols, seed=seed)
    else:
        domain, problem = gen_logistics(
            trucks=1 + index % 2, cities=2 + index % 2, packages=1 + (index // 5) % 2,
            seed=seed,
        )
    manifest = synthetic_manifest_for(domain, problem, seed, config)
    return ground(domain, problem, manifest, name=f"suite{index}-s{seed}")
