import sympy as sp
from gmpy2 import mpq
from hypothesis import strategies as st

from rmatrix.algebra import TensorOperator


def rationals(bound=12, nonzero=False):
    values = st.builds(lambda p, q: mpq(p, q), st.integers(-bound, bound), st.integers(1, bound))
    if nonzero:
        values = values.filter(lambda x: x != 0)
    return values


def distinct_rationals(n, bound=12):
    return st.lists(rationals(bound), min_size=n, max_size=n, unique=True)


def to_sympy(op: TensorOperator) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(int(x.numerator), int(x.denominator)) for x in row] for row in op.tolist()])


def from_sympy(m: sp.Matrix) -> list:
    return [[mpq(int(sp.fraction(x)[0]), int(sp.fraction(x)[1])) for x in m.row(i)] for i in range(m.rows)]


def as_lists(op: TensorOperator) -> list:
    return [[mpq(x) for x in row] for row in op.tolist()]
