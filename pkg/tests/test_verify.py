from dataclasses import replace

import pytest
from gmpy2 import mpq

from rmatrix.algebra import Series, TensorOperator, permutation
from rmatrix.families import FAMILIES
from rmatrix.verify import (
    REGISTRY,
    SamplePlan,
    UnknownCheckError,
    _run,
    check_aybe,
    check_gauge_props,
    check_residues_and_limits,
    check_unitary_skew,
    check_ybe,
    perturb_family,
    run_suite,
    select,
)

PLAN = SamplePlan(trials=5, seed=3)


def _perturbed(name, row=1, col=2):
    return {**FAMILIES, name: perturb_family(FAMILIES[name], row, col)}


def _doubled_p_yang():
    def build(n, hbar, z):
        return FAMILIES["yang"].build(n, hbar, z) + permutation(n) * (1 / z)

    return {**FAMILIES, "yang": replace(FAMILIES["yang"], build=build, vertex=build)}


def test_quantum_ybe_for_yang():
    report = check_ybe("quantum", "yang", 2, PLAN)
    assert report.passed and report.trials == 5


def test_doubled_permutation_term_is_a_rescaled_solution():
    # 1/h + 2P/z is Yang's matrix at z/2, so it still solves the equation
    assert check_ybe("quantum", "yang", 2, PLAN, families=_doubled_p_yang()).passed


def test_quantum_ybe_detects_single_entry_perturbation():
    report = check_ybe("quantum", "yang", 2, PLAN, families=_perturbed("yang"))
    assert not report.passed
    cex = report.counterexample
    assert set(cex["point"]) == {"hbar", "z1", "z2", "z3"}
    assert mpq(cex["max_discrepancy"]) > 0


def test_semi_dynamical_ybe_n3():
    assert check_ybe("semi-dynamical", "semi-dynamical", 3, PLAN).passed


def test_aybe_yang_n3_and_semi_dynamical():
    assert check_aybe("vertex", "yang", 3, PLAN).passed
    assert check_aybe("semi-dynamical", "semi-dynamical", 2, PLAN).passed


def test_unitarity_and_skew_symmetry():
    assert check_unitary_skew("eleven-vertex", 2, PLAN).passed
    assert check_unitary_skew("closed-form", 4, SamplePlan(trials=2)).passed
    assert check_unitary_skew("semi-dynamical", 3, PLAN).passed


def test_dynamical_unitarity_holds_at_fixed_q_only():
    assert check_unitary_skew("dynamical", 3, PLAN).passed
    shifted = run_suite("unitarity.dynamical-shifted", [2], PLAN)
    assert len(shifted) == 1 and not shifted[0].passed


def test_bracket_with_z_generator_fails():
    assert check_gauge_props(2, PLAN, "bracket-q").passed
    wrong = check_gauge_props(2, PLAN, "bracket-q", generator="l")
    assert not wrong.passed


def test_argument_symmetry_for_yang():
    assert check_gauge_props(3, PLAN, "symmetry-vertex", family="yang").passed


def test_residues_and_scaling_limit():
    assert check_residues_and_limits("closed-form", 3, PLAN, "z").passed
    assert check_residues_and_limits("closed-form", 3, PLAN, "hbar").passed
    assert check_residues_and_limits("semi-dynamical", 2, PLAN, "z2").passed
    assert check_residues_and_limits("eleven-vertex", 2, PLAN, "scaling").passed
    broken = check_residues_and_limits("eleven-vertex", 2, PLAN, "scaling", families=_perturbed("yang", 0, 0))
    assert not broken.passed


def test_window_error_is_reported_never_passed():
    def ev(point):
        s = Series([1], 0, 1)
        yield "too deep", TensorOperator(1, 1, [[s.coeff(3)]]), TensorOperator(1, 1, [[mpq(0)]])

    report = _run("window", "", 2, PLAN, ["z"], ev)
    assert not report.passed
    assert report.error.startswith("SeriesWindowError")


def test_resampling_is_bounded():
    def ev(point):
        raise ZeroDivisionError("always singular")
        yield

    report = _run("poles", "", 2, SamplePlan(trials=3, max_resamples=7), ["z"], ev)
    assert not report.passed
    assert report.resamples == 8
    assert "resamples" in report.error


def test_resampled_trials_are_counted():
    def ev(point):
        if point["z"].denominator > 10:
            raise ZeroDivisionError
        yield "trivial", point["z"], point["z"]

    report = _run("resample", "", 2, SamplePlan(trials=10, seed=1), ["z"], ev)
    assert report.passed and report.trials == 10 and report.resamples > 0


def test_suite_is_deterministic():
    first = [r.to_dict() for r in run_suite("qybe", [2], SamplePlan(trials=4, seed=7))]
    second = [r.to_dict() for r in run_suite("qybe", [2], SamplePlan(trials=4, seed=7))]
    assert first == second


def test_parallel_run_matches_serial():
    plan = SamplePlan(trials=3, seed=11)
    serial = [r.to_dict() for r in run_suite(["gauge", "twist"], [2, 3], plan)]
    parallel = [r.to_dict() for r in run_suite(["gauge", "twist"], [2, 3], plan, jobs=2)]
    assert serial == parallel


def test_unknown_check_id():
    with pytest.raises(UnknownCheckError):
        select("no-such-check")
    with pytest.raises(UnknownCheckError):
        run_suite(["qybe", "nope"], [2], PLAN)


def test_selection_by_group_and_id():
    ids = {e.check_id for e in select("aybe")}
    assert "aybe.closed-form" in ids and "aybe.semi-dynamical" in ids
    assert [e.check_id for e in select("lax.trace")] == ["lax.trace"]
    assert len(select("all")) == len(REGISTRY)


def test_unsupported_n_is_skipped():
    reports = run_suite("qybe.eleven-vertex", [2, 3], PLAN)
    assert [r.n for r in reports] == [2]


def test_fault_injection_hits_only_touching_checks():
    plan = SamplePlan(trials=2, seed=5)
    fams = {**FAMILIES, "closed-form": perturb_family(FAMILIES["closed-form"], 1, 0)}
    reports = run_suite("all", [2], plan, families=fams)
    failed = {r.check_id for r in reports if not r.passed}
    assert failed
    touching = {e.check_id for e in REGISTRY.values() if "closed-form" in e.uses}
    assert failed <= touching
    assert "coincidence.gauge-explicit" in failed


def test_colliding_poles_are_resampled_not_failed():
    # seed 3 draws z1 = 0 on the first trial, where the poles at hbar = 0
    # and hbar = -z1 merge
    report = run_suite("residue.semi-hbar", [3], SamplePlan(trials=1, seed=3))[0]
    assert report.passed and report.resamples >= 1
