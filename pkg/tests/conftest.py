import os

import pytest

from costplan.manifest import load_manifest
from costplan.pddl import ground, parse_domain, parse_problem

DATA = os.path.join(os.path.dirname(__file__), "..", "data", "drive")


@pytest.fixture(scope="session")
def drive_paths():
    return {
        "domain": os.path.join(DATA, "domain.pddl"),
        "problem": os.path.join(DATA, "problem.pddl"),
        "manifest": os.path.join(DATA, "manifest.json"),
    }


@pytest.fixture(scope="session")
def drive_task(drive_paths):
    with open(drive_paths["domain"]) as fh:
        domain = parse_domain(fh.read())
    with open(drive_paths["problem"]) as fh:
        problem = parse_problem(fh.read())
    manifest = load_manifest(drive_paths["manifest"])
    return ground(domain, problem, manifest)
