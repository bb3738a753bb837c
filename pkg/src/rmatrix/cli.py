"""Command-line front end.

    rmatrix emit   --family F --N n [--hbar --z --z1 --z2 --eta --q --lambda]
    rmatrix check  --suite S --N a..b [--trials --seed --jobs]
    rmatrix expand --family F --N n --var hbar|z|z1|z2|epsilon --order k [...]

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success / all
checks pass, 1 a check failed or the point is singular, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra import Series, SeriesWindowError, TensorOperator, format_rat
from .families import FAMILIES
from .gauge import DynParams, SingularPointError, g_inverse, g_matrix, lax_build
from .verify import SamplePlan, UnknownCheckError, run_suite

__all__ = ["EmitRecord", "main", "build_object", "OBJECTS"]


class UsageError(Exception):
    pass


@dataclass
class EmitRecord:
    family: str
    N: int
    slots: int
    params: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)

    @classmethod
    def from_operator(cls, family: str, n: int, params: dict, op: TensorOperator) -> "EmitRecord":
        entries = [[format_rat(x) for x in row] for row in op.tolist()]
        return cls(family, n, op.slots, _serial_params(params), entries)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "N": self.N,
            "slots": self.slots,
            "params": self.params,
            "entries": self.entries,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "EmitRecord":
        return cls(d["family"], int(d["N"]), int(d["slots"]), dict(d["params"]), [list(r) for r in d["entries"]])

    @classmethod
    def from_json(cls, text: str) -> "EmitRecord":
        return cls.from_dict(json.loads(text))

    def operator(self) -> TensorOperator:
        return TensorOperator(self.N, self.slots, [[mpq(x) for x in row] for row in self.entries])


def _serial_params(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if isinstance(v, DynParams):
            out[k] = [format_rat(x) for x in v.q]
        elif isinstance(v, (tuple, list)):
            out[k] = [format_rat(x) for x in v]
        else:
            out[k] = format_rat(v)
    return out


# ---------------------------------------------------------------------------
# buildable objects: every registered family plus the gauge and Lax matrices

_GAUGE_OBJECTS = {
    "g": (("z", "q"), lambda n, z, q: g_matrix(z, q)),
    "g-inverse": (("z", "q"), lambda n, z, q: g_inverse(z, q)),
    "lax-rs": (("eta", "z", "q", "lambda"), lambda n, eta, z, q, lam: lax_build(eta, z, q, lam).l_rs),
    "lax-top": (("eta", "z", "q", "lambda"), lambda n, eta, z, q, lam: lax_build(eta, z, q, lam).l_top),
}

OBJECTS = {name: (d.signature, d.build, d.supports) for name, d in FAMILIES.items()}
OBJECTS.update({name: (sig, fn, lambda n: n >= 2) for name, (sig, fn) in _GAUGE_OBJECTS.items()})


def build_object(name: str, n: int, params: dict) -> TensorOperator:
    sig, fn, supports = _lookup(name)
    if not supports(n):
        raise UsageError(f"family {name!r} is not defined for N={n}")
    return fn(n, *(params[k] for k in sig))


def _lookup(name):
    if name not in OBJECTS:
        raise UsageError(f"unknown family {name!r}; known: {', '.join(OBJECTS)}")
    return OBJECTS[name]


# ---------------------------------------------------------------------------
# argument parsing


def _rational(text: str) -> mpq:
    try:
        return mpq(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _rational_list(text: str) -> tuple:
    return tuple(_rational(x) for x in text.split(",") if x.strip())


def _n_range(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N: {text!r}") from None
    if lo < 2 or hi < lo:
        raise argparse.ArgumentTypeError(f"N must be a value or range a..b with 2 <= a <= b, got {text!r}")
    return list(range(lo, hi + 1))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rmatrix", description="Exact rational R-matrix toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def point_flags(sp):
        sp.add_argument("--family", required=True)
        sp.add_argument("--N", type=_n_range, required=True)
        for name in ("hbar", "z", "z1", "z2", "eta"):
            sp.add_argument(f"--{name}", type=_rational)
        sp.add_argument("--q", type=_rational_list, help="comma-separated; default q_i = i")
        sp.add_argument("--lambda", dest="lam", type=_rational_list, help="comma-separated exp(p_j)")
        sp.add_argument("--format", choices=["json"], default="json")

    emit = sub.add_parser("emit", help="matrix of a family at a point")
    point_flags(emit)

    check = sub.add_parser("check", help="run identity checks")
    check.add_argument("--suite", default="all", help="check ids or groups, comma-separated")
    check.add_argument("--N", type=_n_range, default=[2, 3])
    check.add_argument("--trials", type=int, default=SamplePlan.trials)
    check.add_argument("--seed", type=int, default=SamplePlan.seed)
    check.add_argument("--jobs", type=int, default=1)
    check.add_argument("--format", choices=["json"], default="json")

    expand = sub.add_parser("expand", help="Laurent coefficients in one variable")
    point_flags(expand)
    expand.add_argument("--var", required=True, choices=["hbar", "z", "z1", "z2", "epsilon"])
    expand.add_argument("--order", type=int, required=True)
    expand.add_argument("--min-degree", type=int, default=-1)
    return p


def _single_n(args) -> int:
    if len(args.N) != 1:
        raise UsageError("this command takes a single N")
    return args.N[0]


def _gather(args, n: int, skip=()) -> dict:
    sig = _lookup(args.family)[0]
    params = {}
    for name in sig:
        if name in skip:
            continue
        if name == "q":
            q = args.q if args.q is not None else tuple(mpq(i) for i in range(1, n + 1))
            if len(q) != n:
                raise UsageError(f"--q needs {n} values")
            params["q"] = DynParams(q)
        elif name == "lambda":
            if args.lam is None or len(args.lam) != n:
                raise UsageError(f"--lambda needs {n} values")
            params["lambda"] = args.lam
        else:
            value = getattr(args, name)
            if value is None:
                raise UsageError(f"family {args.family!r} needs --{name}")
            params[name] = value
    return params


# ---------------------------------------------------------------------------
# commands


def _emit(args, out) -> int:
    n = _single_n(args)
    params = _gather(args, n)
    op = build_object(args.family, n, params)
    out.write(EmitRecord.from_operator(args.family, n, params, op).to_json() + "\n")
    return 0


def _check(args, out) -> int:
    if args.trials < 1 or args.jobs < 1:
        raise UsageError("--trials and --jobs must be positive")
    plan = SamplePlan(trials=args.trials, seed=args.seed)
    try:
        reports = run_suite(args.suite.split(","), args.N, plan, jobs=args.jobs)
    except UnknownCheckError as exc:
        raise UsageError(str(exc.args[0])) from None
    failed = 0
    for r in reports:
        failed += not r.passed
        out.write(json.dumps(r.to_dict()) + "\n")
    summary = {"summary": {"checks": len(reports), "passed": len(reports) - failed, "failed": failed,
                           "N": args.N, "trials": args.trials, "seed": args.seed}}
    out.write(json.dumps(summary) + "\n")
    return 0 if failed == 0 else 1


def _expand(args, out) -> int:
    n = _single_n(args)
    sig = _lookup(args.family)[0]
    var = args.var
    if var == "epsilon":
        if tuple(sig) != ("hbar", "z"):
            raise UsageError("--var epsilon scales (hbar, z) and needs a vertex family")
    elif var not in sig:
        raise UsageError(f"family {args.family!r} has no parameter {var!r}")
    params = _gather(args, n, skip=() if var == "epsilon" else (var,))

    window = args.order - args.min_degree + 4
    for _ in range(4):
        eps = Series([0, 1], 0, window)
        if var == "epsilon":
            p = dict(params, hbar=params["hbar"] * eps, z=params["z"] * eps)
            op = build_object(args.family, n, p) * eps
        else:
            op = build_object(args.family, n, dict(params, **{var: eps}))
        try:
            coeffs = {k: op.coeff(k) for k in range(args.min_degree, args.order + 1)}
            break
        except SeriesWindowError:
            window *= 2
    else:
        raise SeriesWindowError(f"could not reach degree {args.order}")

    # refuse to drop a nonzero part below the requested window
    low = min((_lowest(x) for x in op.data.flat), default=args.min_degree)
    if low < args.min_degree and any(not op.coeff(k).is_zero() for k in range(low, args.min_degree)):
        raise SeriesWindowError(f"nonzero coefficient below degree {args.min_degree}; lower --min-degree")

    shown = {k: v for k, v in params.items()}
    records = []
    for k, c in coeffs.items():
        rec = EmitRecord.from_operator(args.family, n, shown, c).to_dict()
        records.append({"var": var, "degree": k, **rec})
    out.write(json.dumps(records) + "\n")
    return 0


def _lowest(x) -> int:
    if isinstance(x, Series):
        return x.start
    return 0


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = _parser().parse_args(argv)
        handler = {"emit": _emit, "check": _check, "expand": _expand}[args.command]
        return handler(args, out)
    except UsageError as exc:
        print(f"rmatrix: usage error: {exc}", file=sys.stderr)
        return 2
    except SingularPointError as exc:
        print(f"rmatrix: SingularPointError: {exc}", file=sys.stderr)
        return 1
    except ZeroDivisionError as exc:
        print(f"rmatrix: SingularPointError: {exc or 'division by zero'}", file=sys.stderr)
        return 1
    except SeriesWindowError as exc:
        print(f"rmatrix: SeriesWindowError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
