"""Pointwise verification of R-matrix identities at random rational points.

Every identity here is an equality of rational functions, so exact agreement
at independent random points is a Schwartz-Zippel style certificate.  There
is no tolerance anywhere: a check passes only with zero discrepancy.

Per-trial RNG seeds are derived from ``(seed, check id, N, trial)``, so the
outcome never depends on execution order or on parallel scheduling.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .algebra import (
    Series,
    TensorOperator,
    embed,
    format_rat,
    identity,
    partial_trace,
    permutation,
)
from .families import FAMILIES, RFamilyDescriptor, b_operator, o_operator, twist_factorized
from .gauge import (
    DynParams,
    SingularPointError,
    cal_l_eta,
    cauchy_matrix,
    d_diagonal,
    g_derivative_q,
    g_derivative_z,
    g_inverse,
    g_matrix,
    g_residue,
    l_matrix,
    l_n_matrix,
    lax_build,
    slot_shifted,
    sym_functions,
    xi_inverse_from_points,
    xi_matrix,
)

__all__ = [
    "SamplePlan",
    "CheckReport",
    "SuiteEntry",
    "UnknownCheckError",
    "REGISTRY",
    "check_ybe",
    "check_aybe",
    "check_unitary_skew",
    "check_residues_and_limits",
    "check_equiv",
    "check_gauge_props",
    "check_classical_ids",
    "check_lax",
    "run_suite",
    "select",
    "perturb_family",
]


class UnknownCheckError(KeyError):
    pass


@dataclass(frozen=True)
class SamplePlan:
    """How to sample: ``p/q`` with |p| <= bound and 1 <= q <= bound."""

    trials: int = 20
    seed: int = 0
    bound: int = 20
    max_resamples: int = 100


@dataclass
class CheckReport:
    check_id: str
    anchor: str
    n: int
    passed: bool
    trials: int
    resamples: int
    seed: int
    counterexample: dict | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# sampling engine


class _Point(dict):
    """Sampled variables; vector variables are DynParams or tuples."""

    def serial(self) -> dict:
        out = {}
        for k, v in self.items():
            if isinstance(v, DynParams):
                out[k] = [format_rat(x) for x in v.q]
            elif isinstance(v, tuple):
                out[k] = [format_rat(x) for x in v]
            else:
                out[k] = format_rat(v)
        return out


def _draw(rng: random.Random, bound: int) -> mpq:
    return mpq(rng.randint(-bound, bound), rng.randint(1, bound))


def _sample(rng: random.Random, plan: SamplePlan, n: int, variables: Sequence[str]) -> _Point:
    pt = _Point()
    for name in variables:
        if name in ("q", "u"):
            pt[name] = DynParams([_draw(rng, plan.bound) for _ in range(n)])
        elif name == "lambda":
            w = tuple(_draw(rng, plan.bound) for _ in range(n))
            if any(x == 0 for x in w):
                raise ZeroDivisionError("zero momentum weight")
            pt[name] = w
        else:
            pt[name] = _draw(rng, plan.bound)
    return pt


def _discrepancy(lhs, rhs):
    if isinstance(lhs, TensorOperator):
        return lhs.max_discrepancy(rhs)
    return abs(mpq(lhs - rhs))


def _equal(lhs, rhs) -> bool:
    return lhs == rhs


def _run(
    check_id: str,
    anchor: str,
    n: int,
    plan: SamplePlan,
    variables: Sequence[str],
    evaluate: Callable[[_Point], Iterable[tuple]],
) -> CheckReport:
    """Run ``plan.trials`` exact trials; ``evaluate`` yields (label, lhs, rhs)."""
    report = CheckReport(check_id, anchor, n, True, 0, 0, plan.seed)
    for t in range(plan.trials):
        rng = random.Random(f"{plan.seed}/{check_id}/{n}/{t}")
        tries = 0
        while True:
            try:
                pt = _sample(rng, plan, n, variables)
                pairs = list(evaluate(pt))
                break
            except ZeroDivisionError:
                # pole or degenerate configuration: draw a fresh point
                tries += 1
                report.resamples += 1
                if tries > plan.max_resamples:
                    report.passed = False
                    report.error = f"no regular point found after {plan.max_resamples} resamples"
                    return report
            except Exception as exc:  # noqa: BLE001 - surfaced in the report
                report.passed = False
                report.error = f"{type(exc).__name__}: {exc}"
                return report
        report.trials += 1
        for label, lhs, rhs in pairs:
            if not _equal(lhs, rhs):
                report.passed = False
                report.counterexample = {
                    "trial": t,
                    "relation": label,
                    "point": pt.serial(),
                    "max_discrepancy": format_rat(_discrepancy(lhs, rhs)),
                }
                return report
    return report


# ---------------------------------------------------------------------------
# helpers


def _fam(families, name) -> RFamilyDescriptor:
    families = FAMILIES if families is None else families
    return families[name]


def _vertex(families, name) -> Callable:
    desc = _fam(families, name)
    if desc.vertex is None:
        raise ValueError(f"family {name!r} is not of vertex type")
    return desc.vertex


def _e3(op: TensorOperator, a: int, b: int) -> TensorOperator:
    return embed(op, (a, b), 3)


def _eps(order: int) -> Series:
    return Series([0, 1], 0, order)


def _f(hbar, z):
    return 1 / hbar**2 - 1 / z**2


def _swap21(op: TensorOperator) -> TensorOperator:
    p = permutation(op.n)
    return p @ op @ p


def _comm(a, b):
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# Yang-Baxter equations


def check_ybe(kind: str, family: str, n: int, plan: SamplePlan, families=None) -> CheckReport:
    """Quantum, classical, dynamical or semi-dynamical Yang-Baxter equation."""
    check_id = f"ybe.{kind}.{family}"
    if kind == "quantum":
        rf = _vertex(families, family)

        def ev(p):
            h, z1, z2, z3 = p["hbar"], p["z1"], p["z2"], p["z3"]
            r12 = _e3(rf(n, h, z1 - z2), 1, 2)
            r13 = _e3(rf(n, h, z1 - z3), 1, 3)
            r23 = _e3(rf(n, h, z2 - z3), 2, 3)
            yield "R12 R13 R23 = R23 R13 R12", r12 @ r13 @ r23, r23 @ r13 @ r12

        return _run(check_id, "R12 R13 R23 = R23 R13 R12", n, plan, ["hbar", "z1", "z2", "z3"], ev)

    if kind == "classical":
        rf = _fam(families, family).build

        def ev(p):
            z1, z2, z3 = p["z1"], p["z2"], p["z3"]
            r12 = _e3(rf(n, z1 - z2), 1, 2)
            r13 = _e3(rf(n, z1 - z3), 1, 3)
            r23 = _e3(rf(n, z2 - z3), 2, 3)
            lhs = _comm(r12, r13) + _comm(r12, r23) + _comm(r13, r23)
            yield "[r12,r13] + [r12,r23] + [r13,r23] = 0", lhs, TensorOperator.zeros(n, 3)

        return _run(check_id, "classical Yang-Baxter equation", n, plan, ["z1", "z2", "z3"], ev)

    if kind == "dynamical":
        rf = _fam(families, family).build

        def ev(p):
            h, z1, z2, z3, q = p["hbar"], p["z1"], p["z2"], p["z3"], p["q"]
            step = -n * h

            def r(a, b, z, shift_slot=None):
                build = lambda qq: _e3(rf(n, h, z, qq), a, b)  # noqa: E731
                if shift_slot is None:
                    return build(q)
                return slot_shifted(build, q, shift_slot, step, 3)

            lhs = r(1, 2, z1 - z2, 3) @ r(1, 3, z1 - z3) @ r(2, 3, z2 - z3, 1)
            rhs = r(2, 3, z2 - z3) @ r(1, 3, z1 - z3, 2) @ r(1, 2, z1 - z2)
            yield "R12(q-h(3)) R13(q) R23(q-h(1)) = R23(q) R13(q-h(2)) R12(q)", lhs, rhs

        return _run(check_id, "Gervais-Neveu-Felder equation, q-shift step N*hbar", n, plan,
                    ["hbar", "z1", "z2", "z3", "q"], ev)

    if kind == "semi-dynamical":
        rf = _fam(families, family).build

        def ev(p):
            h, z1, z2, z3, q = p["hbar"], p["z1"], p["z2"], p["z3"], p["q"]

            def r(a, b, za, zb):
                return _e3(rf(n, h, za, zb, q), a, b)

            lhs = r(1, 2, z1, z2) @ r(1, 3, z1 - h, z3 - h) @ r(2, 3, z2, z3)
            rhs = r(2, 3, z2 - h, z3 - h) @ r(1, 3, z1, z3) @ r(1, 2, z1 - h, z2 - h)
            yield "semi-dynamical YBE with spectral shifts by hbar", lhs, rhs

        return _run(check_id, "semi-dynamical Yang-Baxter equation", n, plan,
                    ["hbar", "z1", "z2", "z3", "q"], ev)
    raise ValueError(f"unknown YBE kind {kind!r}")


def check_aybe(kind: str, family: str, n: int, plan: SamplePlan, families=None) -> CheckReport:
    """Associative Yang-Baxter equation (vertex or semi-dynamical form)."""
    check_id = f"aybe.{kind}.{family}"
    anchor = "R^h_12 R^e_23 = R^e_13 R^(h-e)_12 + R^(e-h)_23 R^h_13"
    if kind == "vertex":
        rf = _vertex(families, family)

        def ev(p):
            h, e, z1, z2, z3 = p["hbar"], p["eta"], p["z1"], p["z2"], p["z3"]
            lhs = _e3(rf(n, h, z1 - z2), 1, 2) @ _e3(rf(n, e, z2 - z3), 2, 3)
            rhs = _e3(rf(n, e, z1 - z3), 1, 3) @ _e3(rf(n, h - e, z1 - z2), 1, 2) + _e3(
                rf(n, e - h, z2 - z3), 2, 3
            ) @ _e3(rf(n, h, z1 - z3), 1, 3)
            yield anchor, lhs, rhs

        return _run(check_id, anchor, n, plan, ["hbar", "eta", "z1", "z2", "z3"], ev)
    if kind == "semi-dynamical":
        rf = _fam(families, family).build

        def ev(p):
            h, e, z1, z2, z3, q = p["hbar"], p["eta"], p["z1"], p["z2"], p["z3"], p["q"]

            def r(c, a, b, za, zb):
                return _e3(rf(n, c, za, zb, q), a, b)

            lhs = r(h, 1, 2, z1 + e, z2 + e) @ r(e, 2, 3, z2 + h, z3 + h)
            rhs = r(e, 1, 3, z1 + h, z3 + h) @ r(h - e, 1, 2, z1 + e, z2 + e) + r(
                e - h, 2, 3, z2 + h, z3 + h
            ) @ r(h, 1, 3, z1 + e, z3 + e)
            yield "semi-dynamical AYBE with shifted spectral arguments", lhs, rhs

        return _run(check_id, "semi-dynamical " + anchor, n, plan, ["hbar", "eta", "z1", "z2", "z3", "q"], ev)
    raise ValueError(f"unknown AYBE kind {kind!r}")


# ---------------------------------------------------------------------------
# unitarity and skew-symmetry


def check_unitary_skew(family: str, n: int, plan: SamplePlan, families=None, which: str = "both") -> CheckReport:
    """Unitarity R12(z)R21(-z) = (1/h^2 - 1/z^2) 1 and skew-symmetry
    R^h_12(z) = -R^{-h}_21(-z), with the shifted-argument forms for the
    semi-dynamical family and fixed q for the dynamical one."""
    check_id = f"unitarity-skew.{family}.{which}"
    desc = _fam(families, family)
    one = identity(n, 2)
    want_u = which in ("both", "unitarity")
    want_s = which in ("both", "skew")

    if desc.vertex is not None:
        rf = desc.vertex

        def ev(p):
            h, z = p["hbar"], p["z"]
            r = rf(n, h, z)
            if want_u:
                yield "R12(z) R21(-z) = f(h,z) 1", r @ _swap21(rf(n, h, -z)), one * _f(h, z)
            if want_s:
                yield "R^h_12(z) = -R^-h_21(-z)", r, -_swap21(rf(n, -h, -z))

        return _run(check_id, "unitarity and skew-symmetry", n, plan, ["hbar", "z"], ev)

    if family == "semi-dynamical" or desc.signature == ("hbar", "z1", "z2", "q"):
        rf = desc.build

        def ev(p):
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            r = rf(n, h, z1, z2, q)
            if want_u:
                yield "R12(h,z1,z2) R21(h,z2,z1) = f(h,z1-z2) 1", r @ _swap21(rf(n, h, z2, z1, q)), one * _f(h, z1 - z2)
            if want_s:
                yield "R12(h,z1,z2) = -R21(-h,z2+h,z1+h)", r, -_swap21(rf(n, -h, z2 + h, z1 + h, q))

        return _run(check_id, "shifted-argument unitarity and skew-symmetry", n, plan, ["hbar", "z1", "z2", "q"], ev)

    if desc.signature == ("hbar", "z", "q"):
        rf = desc.build

        def ev(p):
            h, z, q = p["hbar"], p["z"], p["q"]
            r = rf(n, h, z, q)
            if want_u:
                yield "R12(z|q) R21(-z|q) = f(h,z) 1", r @ _swap21(rf(n, h, -z, q)), one * _f(h, z)
            if want_s:
                yield "R^h_12(z|q) = -R^-h_21(-z|q)", r, -_swap21(rf(n, -h, -z, q))

        return _run(check_id, "unitarity and skew-symmetry at fixed q", n, plan, ["hbar", "z", "q"], ev)
    raise ValueError(f"family {family!r} has no unitarity/skew form")


def check_dynamical_shifted_unitarity(n: int, plan: SamplePlan, families=None) -> CheckReport:
    """Unitarity of the dynamical R-matrix with the second factor's q shifted
    by the slot-1 and slot-2 indices (alternative reading; informational)."""
    rf = _fam(families, "dynamical").build
    one = identity(n, 2)

    def ev(p):
        h, z, q = p["hbar"], p["z"], p["q"]
        other = slot_shifted(lambda qq: _swap21(rf(n, h, -z, qq)), q, 1, -n * h, 2)
        yield "R12(z|q) R21(-z|q-h(1)) = f 1", rf(n, h, z, q) @ other, one * _f(h, z)

    return _run("unitarity.dynamical.shifted", "unitarity with shifted q (alternative reading)", n, plan,
                ["hbar", "z", "q"], ev)


# ---------------------------------------------------------------------------
# residues and limits

_SERIES_ORDER = 4


def check_residues_and_limits(family: str, n: int, plan: SamplePlan, which: str, families=None) -> CheckReport:
    """Laurent-coefficient checks.

    ``z``        Res_{z=0} R = P and no double pole
    ``hbar``     Res_{h=0} R = 1 and no double pole
    ``z2``       Res_{z2=0} R_semi = O = sum E_jj ⊗ E_ij
    ``z1=z2``    Res_{z1=z2} R_semi = P
    ``scaling``  eps-> 0 limit of eps R(h eps, z eps) is Yang's R-matrix
    """
    check_id = f"residue.{family}.{which}"
    desc = _fam(families, family)
    p12 = permutation(n)
    one = identity(n, 2)
    zero = TensorOperator.zeros(n, 2)

    if which in ("z", "hbar"):
        rf = _vertex(families, family)

        def ev(p):
            eps = _eps(_SERIES_ORDER)
            if which == "z":
                s = rf(n, p["hbar"], eps)
                yield "Res_{z=0} R = P", s.coeff(-1), p12
            else:
                s = rf(n, eps, p["z"])
                yield "Res_{h=0} R = 1", s.coeff(-1), one
            yield "no higher-order pole", s.coeff(-2), zero

        var = ["hbar"] if which == "z" else ["z"]
        return _run(check_id, f"simple pole in {which}", n, plan, var, ev)

    if which in ("z2", "z1=z2", "semi-hbar"):
        rf = desc.build

        def ev(p):
            eps = _eps(_SERIES_ORDER)
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            if (
                (which == "z2" and z1 == 0)
                or (which == "z1=z2" and z2 + h == 0)
                or (which == "semi-hbar" and z1 == 0)
            ):
                # the two simple poles collide; not a generic point
                raise SingularPointError("colliding poles")
            if which == "z2":
                s = rf(n, h, z1, eps, q)
                yield "Res_{z2=0} R = O", s.coeff(-1), o_operator(n)
            elif which == "z1=z2":
                s = rf(n, h, z2 + eps, z2, q)
                yield "Res_{z1=z2} R = P", s.coeff(-1), p12
            else:
                s = rf(n, eps, z1, z2, q)
                yield "Res_{h=0} R = 1", s.coeff(-1), one
            yield "no higher-order pole", s.coeff(-2), zero

        return _run(check_id, f"semi-dynamical residue {which}", n, plan, ["hbar", "z1", "z2", "q"], ev)

    if which == "scaling":
        rf = _vertex(families, family)
        yang = _vertex(families, "yang")

        def ev(p):
            eps = _eps(_SERIES_ORDER)
            h, z = p["hbar"], p["z"]
            if h == 0 or z == 0:
                raise SingularPointError("scaled argument vanishes identically")
            s = rf(n, h * eps, z * eps) * eps
            yield "lim eps R(h eps, z eps) = R_Yang(h, z)", s.coeff(0), yang(n, h, z)
            yield "no singular part", s.coeff(-1), zero

        return _run(check_id, "scaling limit to Yang's R-matrix", n, plan, ["hbar", "z"], ev)
    raise ValueError(f"unknown residue check {which!r}")


# ---------------------------------------------------------------------------
# generic equivalence


def check_equiv(
    check_id: str,
    build_a: Callable[[int, _Point], object],
    build_b: Callable[[int, _Point], object],
    variables: Sequence[str],
    n: int,
    plan: SamplePlan,
    anchor: str = "",
) -> CheckReport:
    """Exact entrywise equality of two builders over shared variables."""

    def ev(p):
        yield anchor or check_id, build_a(n, p), build_b(n, p)

    return _run(check_id, anchor or check_id, n, plan, variables, ev)


# ---------------------------------------------------------------------------
# gauge-transformation properties


def _semi(families):
    return _fam(families, "semi-dynamical").build


def check_gauge_props(
    n: int,
    plan: SamplePlan,
    which: str,
    families=None,
    generator: str = "l_n",
    family: str = "closed-form",
) -> CheckReport:
    """q-independence, translation invariance, the vanishing brackets behind
    them, and symmetry of arguments.

    ``generator`` selects the matrix used in the q-bracket; ``"l"`` swaps in
    the z-generator and must fail.
    """
    check_id = f"gauge-props.{which}" + ("" if generator == "l_n" else f".{generator}")
    semi = _semi(families)

    if which == "q-independence":
        rf = _fam(families, "vertex-gauge").build

        def ev(p):
            h, z1, z2 = p["hbar"], p["z1"], p["z2"]
            yield "R(q) = R(u)", rf(n, h, z1, z2, p["q"]), rf(n, h, z1, z2, p["u"])

        return _run(check_id, "gauged semi-dynamical R is independent of q", n, plan,
                    ["hbar", "z1", "z2", "q", "u"], ev)

    if which == "translation":
        rf = _fam(families, "vertex-gauge").build

        def ev(p):
            h, z1, z2, c, q = p["hbar"], p["z1"], p["z2"], p["c"], p["q"]
            yield "R(z1,z2) = R(z1+c,z2+c)", rf(n, h, z1, z2, q), rf(n, h, z1 + c, z2 + c, q)

        return _run(check_id, "gauged semi-dynamical R depends on z1 - z2 only", n, plan,
                    ["hbar", "z1", "z2", "c", "q"], ev)

    if which in ("bracket-q", "bracket-z"):
        zero = TensorOperator.zeros(n, 2)

        def gen(index, z, q):
            if which == "bracket-z" or generator == "l":
                return l_matrix(z, q)
            return l_n_matrix(index, z, q)

        def ev(p):
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            r = semi(n, h, z1, z2, q)
            indices = range(1, n + 1) if which == "bracket-q" else [None]
            for k in indices:
                eps = _eps(2)
                if which == "bracket-q":
                    dr = semi(n, h, z1, z2, q.shifted(k, eps)).coeff(1)
                else:
                    dr = semi(n, h, z1 + eps, z2 + eps, q).coeff(1)
                a1 = embed(gen(k, z1 + h, q), (1,), 2)
                a2 = embed(gen(k, z2, q), (2,), 2)
                b2 = embed(gen(k, z2 + h, q), (2,), 2)
                b1 = embed(gen(k, z1, q), (1,), 2)
                bracket = dr + a1 @ r + a2 @ r - r @ b2 - r @ b1
                yield f"bracket vanishes (index {k})", bracket, zero

        return _run(check_id, f"vanishing {which}", n, plan, ["hbar", "z1", "z2", "q"], ev)

    if which == "symmetry-vertex":
        rf = _vertex(families, family)
        p12 = permutation(n)

        def ev(p):
            h, z = p["hbar"], p["z"]
            yield "R^h(z) P = R^z(h)", rf(n, h, z) @ p12, rf(n, z, h)

        return _run(f"{check_id}.{family}", "symmetry of arguments R^h(z) P = R^z(h)", n, plan, ["hbar", "z"], ev)

    if which == "symmetry-semi":
        p12 = permutation(n)

        def ev(p):
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            yield "R(h,z1,z2) = R(z1-z2,h+z2,z2) P", semi(n, h, z1, z2, q), semi(n, z1 - z2, h + z2, z2, q) @ p12

        return _run(check_id, "semi-dynamical symmetry of arguments", n, plan, ["hbar", "z1", "z2", "q"], ev)
    raise ValueError(f"unknown gauge property {which!r}")


# ---------------------------------------------------------------------------
# classical layer


def check_classical_ids(n: int, plan: SamplePlan, which: str, families=None) -> CheckReport:
    """Classical r-matrix and its companions.

    ``r-series``   hbar^0 coefficient of the quantum R equals the closed-form r
    ``r-gauge``    same, with the gauge-built R as the quantum source
    ``square``     (r12 + r23 + r31)^2 is scalar
    ``m``          (r^2 - 1/z^2)/2 = closed-form m = hbar^1 coefficient of R
    ``m-zero``     z^0 coefficient of m(z) equals the closed-form m(0)
    ``r-zero``     r(z) = P/z + r0 + O(z) with the closed-form r0
    """
    check_id = f"classical.{which}"
    r_cl = _fam(families, "classical-explicit").build
    m_cl = _fam(families, "m-explicit").build
    one2 = identity(n, 2)

    if which in ("r-series", "r-gauge", "m"):
        src = _vertex(families, "closed-form" if which != "r-gauge" else "vertex-gauge")

        def ev(p):
            z = p["z"]
            s = src(n, _eps(3), z)
            if which == "m":
                r = r_cl(n, z)
                half = (r @ r - one2 * (1 / z**2)) * mpq(1, 2)
                yield "(r^2 - 1/z^2)/2 = m", half, m_cl(n, z)
                yield "hbar^1 coefficient = m", s.coeff(1), m_cl(n, z)
            else:
                yield "hbar^0 coefficient = r", s.coeff(0), r_cl(n, z)
                yield "hbar^-1 coefficient = 1", s.coeff(-1), one2

        return _run(check_id, "classical expansion R = 1/h + r + h m + O(h^2)", n, plan, ["z"], ev)

    if which == "square":

        def ev(p):
            z1, z2, z3 = p["z1"], p["z2"], p["z3"]
            s = _e3(r_cl(n, z1 - z2), 1, 2) + _e3(r_cl(n, z2 - z3), 2, 3) + _e3(r_cl(n, z3 - z1), 3, 1)
            scal = 1 / (z1 - z2) ** 2 + 1 / (z2 - z3) ** 2 + 1 / (z3 - z1) ** 2
            yield "(r12 + r23 + r31)^2 = scalar", s @ s, identity(n, 3) * scal

        return _run(check_id, "(r12+r23+r31)^2 = sum of 1/z_ab^2", n, plan, ["z1", "z2", "z3"], ev)

    if which in ("m-zero", "r-zero"):
        target = _fam(families, which).build

        def ev(p):
            eps = _eps(3)
            if which == "m-zero":
                s = m_cl(n, eps)
                yield "m(z) regular at 0", s.coeff(-1), TensorOperator.zeros(n, 2)
                yield "m(0)", s.coeff(0), target(n)
            else:
                s = r_cl(n, eps)
                yield "Res_{z=0} r = P", s.coeff(-1), permutation(n)
                yield "r0", s.coeff(0), target(n)

        # deterministic: one trial suffices but the engine still runs the plan
        return _run(check_id, f"z-expansion coefficient {which}", n, replace(plan, trials=1), [], ev)
    raise ValueError(f"unknown classical identity {which!r}")


# ---------------------------------------------------------------------------
# Lax matrices


def check_lax(n: int, plan: SamplePlan, which: str, families=None) -> CheckReport:
    """Relations tying the R-matrix to the Ruijsenaars and top Lax matrices.

    ``trace``     L_top(z) = tr_2(R^eta_12(z) S_2), and Res_{z=0} L_top = S
    ``residue``   g_res_2 R^h_12(z) = g_1(z+h) O g_2^{-1}(h) g_1^{-1}(z)
    ``trace-o``   tr_2(O e^{P_2}) = e^P
    """
    check_id = f"lax.{which}"
    if which == "trace":
        rf = _vertex(families, "vertex-gauge")

        def ev(p):
            eta, z, q, lam = p["eta"], p["z"], p["q"], p["lambda"]
            lax = lax_build(eta, z, q, lam)
            rhs = partial_trace(rf(n, eta, z) @ embed(lax.s, (2,), 2), 2)
            yield "L_top = tr_2(R S_2)", lax.l_top, rhs
            yield "L_top = g L_RS g^-1", lax.l_top, g_matrix(z, q) @ lax.l_rs @ g_inverse(z, q)
            eps = _eps(2)
            series_top = g_matrix(eps + eta, q) @ TensorOperator.diag(list(lam)) @ g_inverse(eps, q)
            yield "Res_{z=0} L_top = S", series_top.coeff(-1), lax.s

        return _run(check_id, "L_top(z) = tr_2(R^eta_12(z) S_2)", n, plan, ["eta", "z", "q", "lambda"], ev)

    if which == "residue":
        rf = _vertex(families, "closed-form")

        def ev(p):
            h, z, q = p["hbar"], p["z"], p["q"]
            lhs = embed(g_residue(q), (2,), 2) @ rf(n, h, z)
            rhs = (
                embed(g_matrix(z + h, q), (1,), 2)
                @ o_operator(n)
                @ embed(g_inverse(h, q), (2,), 2)
                @ embed(g_inverse(z, q), (1,), 2)
            )
            yield "g_res_2 R = g_1 O g_2^-1 g_1^-1", lhs, rhs

        return _run(check_id, "z2-residue of the gauge relation", n, plan, ["hbar", "z", "q"], ev)

    if which == "trace-o":

        def ev(p):
            lam = p["lambda"]
            exp_p = TensorOperator.diag(list(lam))
            yield "tr_2(O e^P_2) = e^P", partial_trace(o_operator(n) @ embed(exp_p, (2,), 2), 2), exp_p

        return _run(check_id, "tr_2(O_12 e^{P_2}) = e^P", n, plan, ["lambda"], ev)
    raise ValueError(f"unknown Lax check {which!r}")


# ---------------------------------------------------------------------------
# gauge-matrix and twist checks (built on check_equiv)


def _gauge_checks(which: str, n: int, plan: SamplePlan, families=None) -> CheckReport:
    cid = f"gauge.{which}"
    if which == "det":

        def ev(p):
            z, q = p["z"], p["q"]
            prod = mpq(1)
            for i in range(n):
                for j in range(i):
                    prod *= q.q[i] - q.q[j]
            yield "det Xi = N z prod_{i>j}(q_i - q_j)", _det(xi_matrix(z, q)), n * z * prod

        return _run(cid, "det Xi(z,q) = N z prod_{i>j}(q_i-q_j)", n, plan, ["z", "q"], ev)
    if which == "kernel":

        def ev(p):
            g0 = g_matrix(mpq(0), p["q"])
            ones = TensorOperator.zeros(n, 1)
            for i in range(n):
                ones.data[i, 0] = 1
            yield "g(0,q) a = 0", g0 @ ones, TensorOperator.zeros(n, 1)
            yield "rank g(0,q) = N-1", g0.rank(), n - 1

        return _run(cid, "g(0,q) has the one-dimensional kernel spanned by (1,...,1)", n, plan, ["q"], ev)
    if which == "inverse-agreement":

        def ev(p):
            z, q = p["z"], p["q"]
            direct = g_inverse(z, q, "direct")
            yield "g g^-1 = 1", g_matrix(z, q) @ direct, identity(n)
            yield "symmetric = direct", g_inverse(z, q, "symmetric"), direct
            yield "z-expansion = direct", g_inverse(z, q, "z-expansion"), direct

        return _run(cid, "three routes to g^{-1} agree", n, plan, ["z", "q"], ev)
    if which == "factorization-l":

        def ev(p):
            eta, z, q = p["eta"], p["z"], p["q"]
            yield "L^eta = g^-1(z) g(z-eta)", cal_l_eta(eta, z, q), g_inverse(z, q) @ g_matrix(z - eta, q)

        return _run(cid, "L^eta(z) = g^{-1}(z,q) g(z-eta,q)", n, plan, ["eta", "z", "q"], ev)
    if which == "factorization-cauchy":

        def ev(p):
            eta, z, q, u = p["eta"], p["z"], p["q"], p["u"]
            rhs = -(xi_matrix(z, q).inverse() @ xi_matrix(z - eta, u))
            yield "C = -Xi^-1(z,q) Xi(z-eta,u)", cauchy_matrix(eta, z, q, u), rhs

        return _run(cid, "C(z) = -Xi^{-1}(z,q) Xi(z-eta,u)", n, plan, ["eta", "z", "q", "u"], ev)
    if which == "xi-inverse-forms":

        def ev(p):
            x = list(p["q"].q)
            if sum(x) == 0:
                raise ZeroDivisionError("sum of points vanishes")
            xi = TensorOperator.from_function(n, lambda i, j: x[j - 1] ** _rho(i, n))
            direct = xi.inverse()
            yield "difference form", xi_inverse_from_points(x, "difference"), direct
            yield "combined form", xi_inverse_from_points(x, "combined"), direct

        return _run(cid, "printed z-free forms of Xi^{-1}(x)", n, plan, ["q"], ev)
    if which == "l-derivatives":

        def ev(p):
            z, q = p["z"], p["q"]
            ginv = g_inverse(z, q)
            yield "l = g^-1 dg/dz", l_matrix(z, q), ginv @ g_derivative_z(z, q)
            for k in range(1, n + 1):
                yield f"l^({k}) = g^-1 dg/dq_{k}", l_n_matrix(k, z, q), ginv @ g_derivative_q(k, z, q)
            total = TensorOperator.zeros(n, 1)
            for k in range(1, n + 1):
                total = total + g_derivative_q(k, z, q)
            yield "sum_n dg/dq_n = 0", total, TensorOperator.zeros(n, 1)
            eps = _eps(2)
            yield "L^eta = 1 - eta l + O(eta^2)", cal_l_eta(eps, z, q).coeff(1), -l_matrix(z, q)

        return _run(cid, "l = g^{-1} dg/dz and l^(n) = g^{-1} dg/dq_n", n, plan, ["z", "q"], ev)
    if which == "sym-functions":

        def ev(p):
            x = list(p["q"].q)
            zeta = p["z"]
            sigma, hats = sym_functions(x)
            prod = mpq(1)
            for v in x:
                prod *= zeta - v
            yield "prod (zeta - x_k)", prod, sum(((-1) ** k * zeta**k * sigma[k] for k in range(n + 1)), mpq(0))
            for k in range(n):
                part = mpq(1)
                for m, v in enumerate(x):
                    if m != k:
                        part *= zeta - v
                gen = sum(((-1) ** s * zeta**s * hats[k][s] for s in range(n)), mpq(0))
                yield f"-prod_(m!={k + 1})", -part, gen

        return _run(cid, "generating identities of the symmetric functions", n, plan, ["z", "q"], ev)
    raise ValueError(f"unknown gauge check {which!r}")


def _rho(i, n):
    return i - 1 if i <= n - 1 else n


def _det(op: TensorOperator):
    m = [list(row) for row in op.data.tolist()]
    size = len(m)
    det = mpq(1)
    for c in range(size):
        piv = next((i for i in range(c, size) if m[i][c] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, size):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def _twist_checks(which: str, n: int, plan: SamplePlan, families=None) -> CheckReport:
    from .families import twist

    cid = f"twist.{which}"
    dyn = _fam(families, "dynamical").build
    semi = _semi(families)
    one = identity(n, 2)

    def g1(z, q):
        return embed(g_matrix(z, q), (1,), 2)

    def g2(z, q):
        return embed(g_matrix(z, q), (2,), 2)

    def g1i(z, q):
        return embed(g_inverse(z, q), (1,), 2)

    def g2i(z, q):
        return embed(g_inverse(z, q), (2,), 2)

    if which == "inverse":

        def ev(p):
            f, finv = twist(n, p["hbar"], p["z1"], p["q"])
            yield "F F^-1 = 1", f @ finv, one
            yield "F^-1 F = 1", finv @ f, one

        return _run(cid, "printed inverse pair of the twist", n, plan, ["hbar", "z1", "q"], ev)
    if which == "relation":

        def ev(p):
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            f, _ = twist(n, h, z1, q)
            _, finv = twist(n, h, z2, q)
            yield "R_semi = F12 R_dyn F21^-1", semi(n, h, z1, z2, q), f @ dyn(n, h, z1 - z2, q) @ _swap21(finv)

        return _run(cid, "semi-dynamical R is a twist of the dynamical R", n, plan, ["hbar", "z1", "z2", "q"], ev)
    if which == "factorized":

        def ev(p):
            h, z1, q = p["hbar"], p["z1"], p["q"]
            f, _ = twist(n, h, z1, q)
            yield "F = g1^-1(z1+h) g1(z1, q-h(2))", f, twist_factorized(n, h, z1, q)

        return _run(cid, "twist as a product of gauge matrices", n, plan, ["hbar", "z1", "q"], ev)
    if which == "semi-from-dynamical":

        def ev(p):
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            left = g1i(z1 + h, q) @ slot_shifted(lambda qq: g1(z1, qq), q, 2, -n * h, 2)
            right = slot_shifted(lambda qq: g2i(z2, qq), q, 1, -n * h, 2) @ g2(z2 + h, q)
            yield "R_semi = g1^-1 g1(q-h(2)) R_dyn g2^-1(q-h(1)) g2", semi(n, h, z1, z2, q), left @ dyn(n, h, z1 - z2, q) @ right

        return _run(cid, "semi-dynamical R from the dynamical one by gauge factors", n, plan,
                    ["hbar", "z1", "z2", "q"], ev)
    if which == "vertex-from-dynamical":
        vertex = _vertex(families, "closed-form")

        def ev(p):
            h, z1, z2, q = p["hbar"], p["z1"], p["z2"], p["q"]
            left = g2(z2, q) @ slot_shifted(lambda qq: g1(z1, qq), q, 2, -n * h, 2)
            right = slot_shifted(lambda qq: g2i(z2, qq), q, 1, -n * h, 2) @ g1i(z1, q)
            yield "IRF-Vertex from the dynamical R", left @ dyn(n, h, z1 - z2, q) @ right, vertex(n, h, z1 - z2)

        return _run(cid, "vertex R from the dynamical R by gauge factors", n, plan, ["hbar", "z1", "z2", "q"], ev)
    raise ValueError(f"unknown twist check {which!r}")


def _coincidence(a: str, b: str):
    def fn(n, plan, families=None):
        fa, fb = _vertex(families, a), _vertex(families, b)
        return check_equiv(
            f"coincidence.{a}.{b}",
            lambda n, p: fa(n, p["hbar"], p["z"]),
            lambda n, p: fb(n, p["hbar"], p["z"]),
            ["hbar", "z"], n, plan, f"{a} = {b}",
        )

    return fn


def _gauge_vs_explicit(n, plan, families=None):
    """Gauge-built R at generic (z1, z2, q) against the closed form at z1 - z2."""
    gauge = _fam(families, "vertex-gauge").build
    explicit = _vertex(families, "closed-form")
    return check_equiv(
        "coincidence.vertex-gauge.closed-form.generic",
        lambda n, p: gauge(n, p["hbar"], p["z1"], p["z2"], p["q"]),
        lambda n, p: explicit(n, p["hbar"], p["z1"] - p["z2"]),
        ["hbar", "z1", "z2", "q"], n, plan, "gauge-built R = closed form at generic z1, z2, q",
    )


def _z2zero_generic(n, plan, families=None):
    z2z = _fam(families, "vertex-z2zero").build
    explicit = _vertex(families, "closed-form")
    return check_equiv(
        "coincidence.vertex-z2zero.generic",
        lambda n, p: z2z(n, p["hbar"], p["z"], p["q"]),
        lambda n, p: explicit(n, p["hbar"], p["z"]),
        ["hbar", "z", "q"], n, plan, "z2 -> 0 representation at generic q = closed form",
    )


def _o_annihilated(n, plan, families=None):
    def ev(p):
        yield "g_2(0) O = 0", embed(g_matrix(mpq(0), p["q"]), (2,), 2) @ o_operator(n), TensorOperator.zeros(n, 2)
        h, z1, q = p["hbar"], p["z1"], p["q"]
        eps = _eps(2)
        s = _semi(families)(n, h, z1, eps, q)
        yield "z2^0 coefficient = B", s.coeff(0), b_operator(n, h, z1, q)

    return _run("gauge.o-annihilated", "g_2(0,q) O_12 = 0 and the regular part B", n, plan, ["hbar", "z1", "q"], ev)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class SuiteEntry:
    check_id: str
    group: str
    anchor: str
    run: Callable
    uses: tuple = ()
    n_values: tuple | None = None  # None: any N >= 2

    def supports(self, n: int) -> bool:
        return n >= 2 and (self.n_values is None or n in self.n_values)


def _entry(check_id, group, anchor, run, uses=(), n_values=None):
    return SuiteEntry(check_id, group, anchor, run, tuple(uses), n_values)


_ANCHORS = {
    "twist.inverse": "F_12 F_12^{-1} = 1 for the printed inverse pair",
    "twist.relation": "R_semi_12(z1,z2) = F_12(z1) R_dyn_12(z1-z2) F_21^{-1}(z2)",
    "twist.factorized": "F_12 = g_1^{-1}(z1+h, q) g_1(z1, q - h^(2))",
    "twist.semi-from-dynamical": "R_semi from R_dyn by the shifted gauge factors g_1, g_2",
    "twist.vertex-from-dynamical": "vertex R from R_dyn by the shifted gauge factors g_1, g_2",
    "gauge.det": "det Xi(z,q) = N z prod_{i>j}(q_i - q_j)",
    "gauge.kernel": "g(0,q) has rank N-1 with kernel spanned by (1,...,1)",
    "gauge.inverse-agreement": "direct, symmetric-function and z-expansion inverses of g agree",
    "gauge.factorization-l": "L^eta(z) = g^{-1}(z,q) g(z-eta,q)",
    "gauge.factorization-cauchy": "Cauchy matrix C(z) = -Xi^{-1}(z,q) Xi(z-eta,u)",
    "gauge.xi-inverse-forms": "both printed z-free forms of Xi^{-1}(x) equal the inverse",
    "gauge.l-derivatives": "l = g^{-1} dg/dz and l^(n) = g^{-1} dg/dq_n",
    "gauge.sym-functions": "generating identities of sigma_k and sigma_hat^k_s",
    "props.q-independence": "gauged R_semi does not depend on q",
    "props.translation": "gauged R_semi depends on z1 - z2 only",
    "props.bracket-q": "dR/dq_n + l^(n)_1 R + l^(n)_2 R - R l^(n)_2 - R l^(n)_1 = 0",
    "props.bracket-z": "(d/dz1 + d/dz2) R + l_1 R + l_2 R - R l_2 - R l_1 = 0",
    "classical.r-series": "hbar^0 coefficient of R equals the closed-form classical r",
    "classical.r-gauge": "hbar^0 coefficient of the gauge-built R equals classical r",
    "classical.square": "(r12 + r23 + r31)^2 = sum 1/z_ab^2 times identity",
    "classical.m": "m = (r^2 - 1/z^2)/2 = hbar^1 coefficient of R = closed form",
    "classical.m-zero": "z^0 coefficient of m(z) equals the closed-form m(0)",
    "classical.r-zero": "r(z) = P/z + r0 + O(z) with the closed-form r0",
    "lax.trace": "L_top(z) = tr_2(R^eta_12(z) S_2)",
    "lax.residue": "g_res_2 R^h_12(z) = g_1(z+h) O_12 g_2^{-1}(h) g_1^{-1}(z)",
    "lax.trace-o": "tr_2(O_12 e^{P_2}) = e^P",
}


def _build_registry() -> dict:
    E = _entry
    entries = [
        # coincidence of constructions
        E("coincidence.gauge-explicit", "coincidence", "gauge-built R = closed form",
          _coincidence("vertex-gauge", "closed-form"), ["vertex-gauge", "closed-form"]),
        E("coincidence.gauge-explicit-generic", "coincidence", "gauge-built R at generic z1, z2, q = closed form",
          _gauge_vs_explicit, ["vertex-gauge", "closed-form"]),
        E("coincidence.components-product", "coincidence", "component formula = matrix product",
          _coincidence("vertex-components", "vertex-gauge"), ["vertex-components", "vertex-gauge"]),
        E("coincidence.tables-closed-form", "coincidence", "q_i = i, z1 = z/2 tables = closed form",
          _coincidence("vertex-tables", "closed-form"), ["vertex-tables", "closed-form"]),
        E("coincidence.z2zero-explicit", "coincidence", "z2 -> 0 representation = closed form",
          _z2zero_generic, ["vertex-z2zero", "closed-form"]),
        E("coincidence.eleven-vertex", "coincidence", "N=2 closed form = eleven-vertex R",
          _coincidence("eleven-vertex", "closed-form"), ["eleven-vertex", "closed-form"], (2,)),
        E("coincidence.six-vertex-yang", "coincidence", "six-vertex = Yang at N=2",
          _coincidence("six-vertex", "yang"), ["six-vertex", "yang"], (2,)),
        # quantum YBE
        *[
            E(f"qybe.{fam}", "qybe", "R12 R13 R23 = R23 R13 R12",
              (lambda fam: lambda n, plan, families=None: check_ybe("quantum", fam, n, plan, families))(fam),
              [fam], nv)
            for fam, nv in [("closed-form", None), ("yang", None), ("eleven-vertex", (2,)), ("vertex-gauge", None)]
        ],
        E("cybe.classical-explicit", "classical", "classical Yang-Baxter equation",
          lambda n, plan, families=None: check_ybe("classical", "classical-explicit", n, plan, families),
          ["classical-explicit"]),
        E("dynybe.dynamical", "dynamical", "Gervais-Neveu-Felder equation",
          lambda n, plan, families=None: check_ybe("dynamical", "dynamical", n, plan, families), ["dynamical"]),
        E("semiybe.semi-dynamical", "dynamical", "semi-dynamical Yang-Baxter equation",
          lambda n, plan, families=None: check_ybe("semi-dynamical", "semi-dynamical", n, plan, families),
          ["semi-dynamical"]),
        # AYBE
        *[
            E(f"aybe.{fam}", "aybe", "associative Yang-Baxter equation",
              (lambda fam: lambda n, plan, families=None: check_aybe("vertex", fam, n, plan, families))(fam),
              [fam], nv)
            for fam, nv in [("closed-form", None), ("yang", None), ("eleven-vertex", (2,))]
        ],
        E("aybe.semi-dynamical", "aybe", "semi-dynamical associative Yang-Baxter equation",
          lambda n, plan, families=None: check_aybe("semi-dynamical", "semi-dynamical", n, plan, families),
          ["semi-dynamical"]),
        # unitarity / skew
        *[
            E(f"unitarity.{fam}", "unitarity", "unitarity and skew-symmetry",
              (lambda fam: lambda n, plan, families=None: check_unitary_skew(fam, n, plan, families))(fam),
              [fam], nv)
            for fam, nv in [
                ("closed-form", None), ("eleven-vertex", (2,)), ("yang", None),
                ("semi-dynamical", None), ("dynamical", None),
            ]
        ],
        # residues and limits
        E("residue.explicit-z", "residues", "Res_{z=0} R = P",
          lambda n, plan, families=None: check_residues_and_limits("closed-form", n, plan, "z", families),
          ["closed-form"]),
        E("residue.explicit-hbar", "residues", "Res_{h=0} R = 1",
          lambda n, plan, families=None: check_residues_and_limits("closed-form", n, plan, "hbar", families),
          ["closed-form"]),
        *[
            E(f"residue.{fam}-{var}", "residues", "Res_{z=0} R = P" if var == "z" else "Res_{h=0} R = 1",
              (lambda fam, var: lambda n, plan, families=None: check_residues_and_limits(fam, n, plan, var, families))(fam, var),
              [fam], nv)
            for fam, nv in [("yang", None), ("eleven-vertex", (2,))]
            for var in ("z", "hbar")
        ],
        E("residue.gauge-hbar", "residues", "Res_{h=0} R = 1 (gauge route)",
          lambda n, plan, families=None: check_residues_and_limits("vertex-gauge", n, plan, "hbar", families),
          ["vertex-gauge"]),
        E("residue.semi-z2", "residues", "Res_{z2=0} R_semi = O",
          lambda n, plan, families=None: check_residues_and_limits("semi-dynamical", n, plan, "z2", families),
          ["semi-dynamical"]),
        E("residue.semi-z1z2", "residues", "Res_{z1=z2} R_semi = P",
          lambda n, plan, families=None: check_residues_and_limits("semi-dynamical", n, plan, "z1=z2", families),
          ["semi-dynamical"]),
        E("residue.semi-hbar", "residues", "Res_{h=0} R_semi = 1",
          lambda n, plan, families=None: check_residues_and_limits("semi-dynamical", n, plan, "semi-hbar", families),
          ["semi-dynamical"]),
        E("limit.eleven-vertex-scaling", "residues", "eps R^11v(h eps, z eps) -> R_Yang",
          lambda n, plan, families=None: check_residues_and_limits("eleven-vertex", n, plan, "scaling", families),
          ["eleven-vertex", "yang"], (2,)),
        E("limit.explicit-scaling", "residues", "eps R(h eps, z eps) -> R_Yang",
          lambda n, plan, families=None: check_residues_and_limits("closed-form", n, plan, "scaling", families),
          ["closed-form", "yang"]),
        # twist / IRF-Vertex
        *[
            E(f"twist.{w}", "twist", _ANCHORS[f"twist.{w}"], (lambda w: lambda n, plan, families=None: _twist_checks(w, n, plan, families))(w), uses)
            for w, uses in [
                ("inverse", []),
                ("relation", ["dynamical", "semi-dynamical"]),
                ("factorized", []),
                ("semi-from-dynamical", ["dynamical", "semi-dynamical"]),
                ("vertex-from-dynamical", ["dynamical", "closed-form"]),
            ]
        ],
        # gauge matrix
        *[
            E(f"gauge.{w}", "gauge", _ANCHORS[f"gauge.{w}"], (lambda w: lambda n, plan, families=None: _gauge_checks(w, n, plan, families))(w))
            for w in [
                "det", "kernel", "inverse-agreement", "factorization-l", "factorization-cauchy",
                "xi-inverse-forms", "l-derivatives", "sym-functions",
            ]
        ],
        E("gauge.o-annihilated", "gauge", "g_2(0) O = 0", _o_annihilated, ["semi-dynamical"]),
        # properties of the gauged R
        *[
            E(f"props.{w}", "props", _ANCHORS[f"props.{w}"],
              (lambda w: lambda n, plan, families=None: check_gauge_props(n, plan, w, families))(w), uses)
            for w, uses in [
                ("q-independence", ["vertex-gauge"]),
                ("translation", ["vertex-gauge"]),
                ("bracket-q", ["semi-dynamical"]),
                ("bracket-z", ["semi-dynamical"]),
            ]
        ],
        E("symmetry.explicit", "symmetry", "R^h(z) P = R^z(h)",
          lambda n, plan, families=None: check_gauge_props(n, plan, "symmetry-vertex", families), ["closed-form"]),
        E("symmetry.yang", "symmetry", "R^h(z) P = R^z(h)",
          lambda n, plan, families=None: check_gauge_props(n, plan, "symmetry-vertex", families, family="yang"), ["yang"]),
        E("symmetry.eleven-vertex", "symmetry", "R^h(z) P = R^z(h)",
          lambda n, plan, families=None: check_gauge_props(n, plan, "symmetry-vertex", families, family="eleven-vertex"),
          ["eleven-vertex"], (2,)),
        E("symmetry.semi-dynamical", "symmetry", "R(h,z1,z2) = R(z1-z2,h+z2,z2) P",
          lambda n, plan, families=None: check_gauge_props(n, plan, "symmetry-semi", families), ["semi-dynamical"]),
        # classical layer
        *[
            E(f"classical.{w}", "classical", _ANCHORS[f"classical.{w}"],
              (lambda w: lambda n, plan, families=None: check_classical_ids(n, plan, w, families))(w), uses)
            for w, uses in [
                ("r-series", ["closed-form", "classical-explicit"]),
                ("r-gauge", ["vertex-gauge", "classical-explicit"]),
                ("square", ["classical-explicit"]),
                ("m", ["closed-form", "classical-explicit", "m-explicit"]),
                ("m-zero", ["m-explicit", "m-zero"]),
                ("r-zero", ["classical-explicit", "r-zero"]),
            ]
        ],
        # Lax layer
        *[
            E(f"lax.{w}", "lax", _ANCHORS[f"lax.{w}"], (lambda w: lambda n, plan, families=None: check_lax(n, plan, w, families))(w), uses)
            for w, uses in [("trace", ["vertex-gauge"]), ("residue", ["closed-form"]), ("trace-o", [])]
        ],
    ]
    return {e.check_id: e for e in entries}


REGISTRY: dict[str, SuiteEntry] = _build_registry()

# informational: the alternative (shifted-q) reading of dynamical unitarity
OPTIONAL: dict[str, SuiteEntry] = {
    "unitarity.dynamical-shifted": _entry(
        "unitarity.dynamical-shifted", "optional", "unitarity with shifted q",
        lambda n, plan, families=None: check_dynamical_shifted_unitarity(n, plan, families), ["dynamical"],
    )
}


def select(selection: str | Sequence[str]) -> list:
    """Resolve check ids, group names or ``all`` into registry entries."""
    names = [selection] if isinstance(selection, str) else list(selection)
    out: list = []
    known = {**REGISTRY, **OPTIONAL}
    for name in names:
        for part in name.split(","):
            part = part.strip()
            if part == "all":
                hits = list(REGISTRY.values())
            elif part in known:
                hits = [known[part]]
            else:
                hits = [e for e in REGISTRY.values() if e.group == part]
            if not hits:
                raise UnknownCheckError(f"unknown check or group {part!r}")
            out.extend(h for h in hits if h not in out)
    return out


def _run_entry(entry: SuiteEntry, n: int, plan: SamplePlan, families=None) -> CheckReport:
    report = entry.run(n, plan, families)
    # the registry id and anchor are the public names of a check
    return replace(report, check_id=entry.check_id, anchor=entry.anchor)


def _run_one(args):
    check_id, n, plan = args
    return _run_entry({**REGISTRY, **OPTIONAL}[check_id], n, plan)


def run_suite(
    selection: str | Sequence[str],
    n_values: Iterable[int],
    plan: SamplePlan = SamplePlan(),
    families: dict | None = None,
    jobs: int = 1,
) -> list:
    """Run the selected checks for every supported N; reports come back in
    registry order regardless of ``jobs``."""
    entries = select(selection)
    tasks = [(e, n) for e in entries for n in n_values if e.supports(n)]
    if jobs > 1 and families is None:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, [(e.check_id, n, plan) for e, n in tasks]))
    if jobs > 1:
        raise ValueError("parallel runs use the built-in families only")
    return [_run_entry(e, n, plan, families) for e, n in tasks]


def perturb_family(desc: RFamilyDescriptor, row: int, col: int, delta=1) -> RFamilyDescriptor:
    """Copy of ``desc`` whose output has ``delta`` added to one entry."""

    def bump(fn):
        if fn is None:
            return None

        def wrapped(*args, **kwargs):
            op = fn(*args, **kwargs)
            data = op.data.copy()
            data[row, col] = data[row, col] + delta
            return TensorOperator(op.n, op.slots, data)

        return wrapped

    return replace(desc, build=bump(desc.build), vertex=bump(desc.vertex))
