"""Acceptance gate: thirteen criteria, one PASS/FAIL line each.

Every check is exact.  A criterion passes only when each selected check
passes at every sampled point for every listed N.

    python3 tests/test_acceptance.py      # just the summary lines
"""

from __future__ import annotations

import time

import pytest

from rmatrix.families import FAMILIES
from rmatrix.verify import REGISTRY, SamplePlan, perturb_family, run_suite

SEED = 0

# number, title, [(check ids, N values, trials)]
CRITERIA = [
    (1, "gauge-built R equals the closed form entrywise, N=2..6", [
        (["coincidence.gauge-explicit-generic", "coincidence.gauge-explicit"], range(2, 7), 10),
    ]),
    (2, "quantum Yang-Baxter equation for the closed form, N=2..4", [
        (["qybe.closed-form"], range(2, 5), 20),
    ]),
    (3, "associative Yang-Baxter equation, vertex N=2..4 and semi-dynamical N=2,3", [
        (["aybe.closed-form"], range(2, 5), 20),
        (["aybe.semi-dynamical"], range(2, 4), 20),
    ]),
    (4, "unitarity and skew-symmetry: eleven-vertex, closed form N=2..5, semi-dynamical N=2,3", [
        (["unitarity.eleven-vertex", "unitarity.closed-form"], range(2, 6), 20),
        (["unitarity.semi-dynamical"], range(2, 4), 20),
    ]),
    (5, "residues at z=0 and hbar=0, z2-residue of R_semi, eleven-vertex scaling limit", [
        (["residue.explicit-z", "residue.explicit-hbar"], range(2, 5), 20),
        (["residue.semi-z2"], range(2, 4), 20),
        (["limit.eleven-vertex-scaling"], [2], 20),
    ]),
    (6, "dynamical and semi-dynamical Yang-Baxter equations, N=2,3", [
        (["dynybe.dynamical", "semiybe.semi-dynamical"], range(2, 4), 10),
    ]),
    (7, "twist relation, factorized twist and F F^-1 = 1, N=2..4", [
        (["twist.relation", "twist.factorized", "twist.inverse"], range(2, 5), 20),
    ]),
    (8, "gauge matrix: det, kernel, factorizations, inverse agreement, N=2..5", [
        (["gauge.det", "gauge.kernel", "gauge.factorization-l", "gauge.factorization-cauchy",
          "gauge.inverse-agreement"], range(2, 6), 20),
    ]),
    (9, "q-independence, translation invariance and vanishing brackets, N=2,3", [
        (["props.q-independence", "props.translation", "props.bracket-q", "props.bracket-z"], range(2, 4), 20),
    ]),
    (10, "classical layer: r, CYBE, square identity, m, m(0), r(0), N=2..4", [
        (["classical.r-series", "cybe.classical-explicit", "classical.square", "classical.m",
          "classical.m-zero", "classical.r-zero"], range(2, 5), 20),
    ]),
    (11, "Lax layer: trace formula, residue relation, tr_2(O e^P_2), N=2,3", [
        (["lax.trace", "lax.residue", "lax.trace-o"], range(2, 4), 20),
    ]),
    (12, "symmetry of arguments, closed form and semi-dynamical, N=2..4", [
        (["symmetry.explicit", "symmetry.semi-dynamical"], range(2, 5), 20),
    ]),
]


def run_criterion(blocks):
    reports = []
    for ids, n_values, trials in blocks:
        reports += run_suite(ids, list(n_values), SamplePlan(trials=trials, seed=SEED))
    return reports


def fault_injection():
    """Perturb single entries of every family; some check touching it must fail.

    Returns (number of perturbations, list of perturbations nobody caught).
    """
    plan = SamplePlan(trials=2, seed=SEED)
    tried, missed = 0, []
    for name, desc in FAMILIES.items():
        checks = [e.check_id for e in REGISTRY.values() if name in e.uses]
        for n in (2, 3):
            if not desc.supports(n):
                continue
            dim = n * n
            cells = [(r, c) for r in range(dim) for c in range(dim)] if n == 2 else [
                (0, 0), (1, 3), (dim - 1, 0), (dim // 2, dim // 2), (dim - 1, dim - 1)]
            for row, col in cells:
                fams = {**FAMILIES, name: perturb_family(desc, row, col)}
                tried += 1
                caught = False
                for cid in checks:
                    if not REGISTRY[cid].supports(n):
                        continue
                    if not all(r.passed for r in run_suite(cid, [n], plan, families=fams)):
                        caught = True
                        break
                if not caught:
                    missed.append((name, n, row, col))
    return tried, missed


def _line(number, ok, title, detail):
    return f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"


@pytest.mark.parametrize("number,title,blocks", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, blocks, capsys):
    start = time.perf_counter()
    reports = run_criterion(blocks)
    failed = [r for r in reports if not r.passed]
    detail = f"{len(reports)} reports, {sum(r.trials for r in reports)} trials, {time.perf_counter() - start:.1f}s"
    with capsys.disabled():
        print("\n" + _line(number, not failed and bool(reports), title, detail))
        for r in failed:
            print(f"    {r.check_id} N={r.n}: {r.error or r.counterexample}")
    assert reports
    assert not failed


def test_criterion_13_fault_injection(capsys):
    start = time.perf_counter()
    tried, missed = fault_injection()
    detail = f"{tried} single-entry perturbations, {len(missed)} undetected, {time.perf_counter() - start:.1f}s"
    with capsys.disabled():
        print("\n" + _line(13, not missed, "every single-entry perturbation is caught by some check", detail))
        for m in missed:
            print(f"    undetected: {m}")
    assert not missed


if __name__ == "__main__":
    for number, title, blocks in CRITERIA:
        t0 = time.perf_counter()
        reps = run_criterion(blocks)
        bad = [r for r in reps if not r.passed]
        print(_line(number, not bad, title, f"{len(reps)} reports, {time.perf_counter() - t0:.1f}s"), flush=True)
    t0 = time.perf_counter()
    n_tried, n_missed = fault_injection()
    print(_line(13, not n_missed, "every single-entry perturbation is caught by some check",
                f"{n_tried} perturbations, {time.perf_counter() - t0:.1f}s"))
