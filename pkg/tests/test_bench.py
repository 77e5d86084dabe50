import csv
import json
import math

import pytest

from costplan.bench import (
    EMPTY_MANIFEST,
    gen_gridworld,
    gen_logistics,
    load_suite,
    run_suite,
    synthetic_manifest_for,
)
from costplan.errors import ConfigError
from costplan.estimators import SyntheticConfig
from costplan.pddl import ground, parse_domain, parse_problem, print_domain, print_problem
from costplan.search import oracle_optimal


def grounded(domain, problem):
    return ground(domain, problem, EMPTY_MANIFEST)


def test_gridworld_3x3_counts():
    domain, problem = gen_gridworld(3, 3, corner_to_corner=True)
    task = grounded(domain, problem)
    assert len(task.facts) == 9
    assert task.n_actions == 24  # 4-connected directed edges


def test_gridworld_1x1_trivial():
    domain, problem = gen_gridworld(1, 1, corner_to_corner=True)
    task = grounded(domain, problem)
    assert task.goal <= task.init
    manifest = synthetic_manifest_for(domain, problem, 0, SyntheticConfig())
    solvable = ground(domain, problem, manifest)
    assert oracle_optimal(solvable) == 0.0


def test_gridworld_roundtrips_through_parser():
    domain, problem = gen_gridworld(2, 3, seed=4)
    assert parse_domain(print_domain(domain)) == domain
    assert parse_problem(print_problem(problem)) == problem


def test_logistics_counts_match_enumeration():
    trucks, cities, packages = 2, 3, 2
    domain, problem = gen_logistics(trucks, cities, packages, seed=0)
    task = grounded(domain, problem)
    drives = trucks * cities * (cities - 1)
    loads = unloads = packages * trucks * cities
    assert task.n_actions == drives + loads + unloads


@pytest.mark.parametrize("seed", range(8))
def test_generated_instances_solvable(seed):
    for maker in (
        lambda: gen_gridworld(3, 4, seed=seed),
        lambda: gen_logistics(1, 3, 1, seed=seed),
    ):
        domain, problem = maker()
        manifest = synthetic_manifest_for(domain, problem, seed, SyntheticConfig())
        task = ground(domain, problem, manifest)
        assert not math.isinf(oracle_optimal(task))


def test_generator_rejects_bad_sizes():
    with pytest.raises(ConfigError):
        gen_gridworld(0, 3)
    with pytest.raises(ConfigError):
        gen_logistics(0, 1, 1)


# ---------------------------------------------------------------------------
# Suite running

def write_suite(tmp_path, entries):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"entries": entries}))
    return path


def write_instance(tmp_path, name="inst"):
    domain, problem = gen_gridworld(3, 3, seed=1, corner_to_corner=True)
    dpath = tmp_path / f"{name}-d.pddl"
    ppath = tmp_path / f"{name}-p.pddl"
    dpath.write_text(print_domain(domain))
    ppath.write_text(print_problem(problem))
    return str(dpath), str(ppath)


def test_suite_runs_both_modes_with_comparison(tmp_path):
    dpath, ppath = write_instance(tmp_path)
    suite = load_suite(write_suite(tmp_path, [{
        "name": "g3", "domain": dpath, "problem": ppath,
        "synthetic": {"levels": 2}, "seeds": [0], "epsilons": [1.5],
        "modes": ["asec", "offline"],
    }]))
    csv_path, json_path = run_suite(suite, tmp_path / "out")
    rows = list(csv.DictReader(open(csv_path)))
    assert len(rows) == 2
    assert {r["mode"] for r in rows} == {"asec", "offline"}
    doc = json.load(open(json_path))
    assert len(doc["comparisons"]) == 1
    (comp,) = doc["comparisons"].values()
    assert "delta_modeling_ms" in comp and "delta_planning_ms" in comp


def test_suite_deterministic(tmp_path):
    dpath, ppath = write_instance(tmp_path)
    suite = load_suite(write_suite(tmp_path, [{
        "name": "g3", "domain": dpath, "problem": ppath,
        "synthetic": {}, "seeds": [0, 1], "epsilons": [1.0, 2.0],
    }]))
    csv1, _ = run_suite(suite, tmp_path / "out1")
    csv2, _ = run_suite(suite, tmp_path / "out2")
    assert open(csv1, "rb").read() == open(csv2, "rb").read()


def test_suite_isolates_parse_errors(tmp_path):
    dpath, ppath = write_instance(tmp_path)
    broken = tmp_path / "broken.pddl"
    broken.write_text("(define (domain oops)")
    suite = load_suite(write_suite(tmp_path, [
        {"name": "bad", "domain": str(broken), "problem": ppath, "synthetic": {}},
        {"name": "good", "domain": dpath, "problem": ppath, "synthetic": {}},
    ]))
    csv_path, _ = run_suite(suite, tmp_path / "out")
    rows = list(csv.DictReader(open(csv_path)))
    by_instance = {r["instance"]: r for r in rows}
    assert by_instance["bad"]["status"].startswith("parse-error")
    good_rows = [r for r in rows if r["instance"].startswith("good")]
    assert good_rows and all(r["status"] == "ok" for r in good_rows)


def test_suite_validation():
    from costplan.bench import _entry_from_json

    with pytest.raises(ConfigError, match="seeds"):
        _entry_from_json(0, {"domain": "d", "problem": "p", "manifest": "m", "seeds": []})
    with pytest.raises(ConfigError, match="epsilon"):
        _entry_from_json(0, {"domain": "d", "problem": "p", "manifest": "m", "epsilons": [0.5]})
    with pytest.raises(ConfigError, match="mode"):
        _entry_from_json(0, {"domain": "d", "problem": "p", "manifest": "m", "modes": ["x"]})
