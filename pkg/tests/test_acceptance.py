"""Acceptance criteria A1..A9, each run at its stated parameters.

Every test prints one ``A# PASS|FAIL ...`` line (visible without ``-s``).
"""

from __future__ import annotations

import time

import pytest

from prehom.combinatorics import classify, thin_vectors
from prehom.constructions import decompose_JK
from prehom.verify import SuiteOptions, run_suite

SEED = 7


def _run(key: str, budget_s: float, **kw):
    start = time.perf_counter()
    rep = run_suite(key, SuiteOptions(seed=SEED, **kw))
    return rep, time.perf_counter() - start


def _line(capsys, key: str, ok: bool, rep, elapsed: float, extra: str = "") -> None:
    s = rep.summary()
    msg = (f"{key} {'PASS' if ok else 'FAIL'} {rep.title}: {s['cases']} cases, "
           f"{s['mismatches']} mismatches, {s['anomalies']} flagged anomalies, {elapsed:.1f}s")
    if extra:
        msg += f" ({extra})"
    with capsys.disabled():
        print("\n" + msg)


def _check(capsys, key: str, budget_s: float, min_cases: int = 1, extra: str = "", **kw):
    rep, elapsed = _run(key, budget_s, **kw)
    # an empty report is only acceptable when the caller says the criterion is vacuous
    ok = ((rep.passed or (not rep.records and min_cases == 0)) and not rep.mismatches
          and len(rep.records) >= min_cases and elapsed < budget_s)
    _line(capsys, key, ok, rep, elapsed, extra)
    assert len(rep.records) >= min_cases
    assert not rep.mismatches, rep.to_text()
    assert elapsed < budget_s
    return rep


def test_A1_codimension_sweep(capsys):
    n = len(thin_vectors(t_max=10))
    rep = _check(capsys, "A1", 300, min_cases=n, t_max=10, samples=40)
    assert not rep.anomalies


def test_A2_bridge_identity(capsys):
    _check(capsys, "A2", 120, min_cases=200, t_max=9, samples=200)


def test_A3_hom_formula(capsys):
    _check(capsys, "A3", 120, min_cases=500, t_max=8, samples=500)


def test_A4_dense_construction(capsys):
    n = sum(1 for d in thin_vectors(t_max=12) if classify(d).e == 1)
    _check(capsys, "A4", 180, min_cases=7 * n, t_max=12)


def test_A5_ext_counts(capsys):
    n = sum(1 for d in thin_vectors(t_max=12) if classify(d).e >= 2)
    _check(capsys, "A5", 180, min_cases=4 * n, t_max=12)


def test_A6_finite_classes(capsys):
    rep = _check(capsys, "A6", 600, n_max=5, q_list=(2, 3),
                 extra="K = {} cases reported as anomalies")
    # degenerate cases are flagged, never silently passed, and only those
    flagged = {r.case for r in rep.anomalies}
    assert flagged
    for d in thin_vectors(n_max=5):
        degenerate = not decompose_JK(d).K
        for q in (2, 3):
            case = f"d={d} q={q}"
            rec = next(r for r in rep.records if r.case == case and r.quantity == "max class size")
            if not rec.match:
                assert degenerate and case in flagged


def test_A7_family_distinctness(capsys):
    rep = _check(capsys, "A7", 300, min_cases=4 + 6, q_list=(5,))
    assert sum(1 for r in rep.records if r.quantity == "same B-orbit") == 6


def test_A8_non_density(capsys):
    cases = [d for d in thin_vectors(n_max=5) if classify(d).e >= 2]
    rep = _check(capsys, "A8", 600, min_cases=0, n_max=5, q_list=(2, 3),
                 extra=f"{len(cases)} thin d with e >= 2 and n <= 5; criterion is vacuous")
    assert not cases and not rep.records


@pytest.mark.slow
def test_A8_extended_to_n6(capsys):
    """The first n where e(d) >= 2 occurs; not part of the stated criterion."""
    rep, elapsed = _run("A8", 600, n_max=6, q_list=(2, 3))
    ok = rep.passed and len(rep.records) > 0
    _line(capsys, "A8 (n = 6 extension)", ok, rep, elapsed)
    assert rep.records and not rep.mismatches, rep.to_text()


def test_A9_minimal_uniqueness(capsys):
    _check(capsys, "A9", 300, n_max=4, q_list=(2, 3))
