"""Acceptance gate: one pass/fail line per numbered criterion.

Criteria 1 through 11 run their verification suites and must come back
clean; criterion 12 is a Monte Carlo stretch probe and only warns.  Run
with -v to get one result line per criterion from pytest itself; each
test also prints its own summary line to the terminal.
"""

import os
import time
import warnings

import pytest

from locquad.suites import SUITES, run_suite

# insertion order of the registry is the criterion numbering
ORDERED = list(SUITES)
GATING = [(i + 1, name) for i, name in enumerate(ORDERED) if name != "sym3-mc"]

# wall-clock budgets attached to individual criteria
TIME_LIMITS = {"hilbert-oracle": 60.0, "weil-equation": 120.0}


def announce(criterion, name, rep, dt, capsys):
    counts = rep.as_dict()["counts"]
    verdict = "PASS" if rep.ok else "FAIL"
    line = (
        f"criterion {criterion:2d} [{name}]: {verdict} "
        f"({counts['passed']}/{counts['total']} cases, {dt:.1f}s)"
    )
    with capsys.disabled():
        print(line)
    return line


@pytest.mark.parametrize(
    "criterion,name", GATING, ids=[f"{i:02d}-{n}" for i, n in GATING]
)
def test_criterion(criterion, name, capsys):
    t0 = time.perf_counter()
    rep = run_suite(name)
    dt = time.perf_counter() - t0
    assert rep.criterion == criterion
    assert rep.gating
    announce(criterion, name, rep, dt, capsys)
    bad = [c for c in rep.cases if not c.passed]
    assert rep.ok, "; ".join(
        f"{c.name}: expected {c.expected}, got {c.got}" for c in bad[:5]
    )
    limit = TIME_LIMITS.get(name)
    if limit is not None:
        assert dt < limit, f"{name} took {dt:.1f}s, budget {limit:.0f}s"


def test_criterion_12_monte_carlo_probe(capsys):
    # stretch check: report and warn, never fail the gate
    samples = int(os.environ.get("LOCQUAD_MC_SAMPLES", 10**6))
    t0 = time.perf_counter()
    rep = run_suite("sym3-mc", samples=samples)
    dt = time.perf_counter() - t0
    assert rep.criterion == 12
    assert not rep.gating
    announce(12, "sym3-mc", rep, dt, capsys)
    if not rep.ok:
        detail = "; ".join(
            f"{c.name}: {c.got}" for c in rep.cases if not c.passed
        )
        warnings.warn(f"non-gating Monte Carlo probe outside tolerance: {detail}")
