import numpy as np
import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import rationals, to_sympy
from rmatrix.algebra import (
    Series,
    SeriesWindowError,
    TensorOperator,
    basis_matrix,
    embed,
    format_rat,
    identity,
    partial_trace,
    permutation,
    series_coeff,
    series_point,
)

EPS = sp.Symbol("eps")


def _sympy_coeffs(expr, lo, hi):
    ser = sp.series(expr, EPS, 0, hi + 1).removeO()
    return [mpq(str(sp.expand(ser).coeff(EPS, k))) for k in range(lo, hi + 1)]


def series_st(order=4):
    coeffs = st.lists(rationals(9), min_size=1, max_size=4)
    return st.builds(lambda c, s: Series(c, s, order), coeffs, st.integers(-2, 1))


# -- scalars ------------------------------------------------------------------


def test_format_rat_is_reduced_with_positive_denominator():
    assert format_rat(mpq(4, -6)) == "-2/3"
    assert format_rat(mpq(10, 5)) == "2"
    assert format_rat(mpq(0)) == "0"


# -- series -------------------------------------------------------------------


def test_series_inverse_matches_sympy():
    a = mpq(3, 7)
    s = Series([a, 2, -1], 1, 6)  # a eps + 2 eps^2 - eps^3
    inv = 1 / s
    expr = 1 / (sp.Rational(3, 7) * EPS + 2 * EPS**2 - EPS**3)
    assert [inv.coeff(k) for k in range(-1, 4)] == _sympy_coeffs(expr, -1, 3)
    # precision: order - 2 * valuation
    assert inv.order == 6 - 2
    with pytest.raises(SeriesWindowError):
        inv.coeff(5)


def test_series_product_and_power_match_sympy():
    x = series_point(mpq(2, 5), order=5)  # 2/5 + eps
    expr = (sp.Rational(2, 5) + EPS) ** 3 / (EPS * (1 - EPS))
    s = x**3 / (Series([0, 1], 0, 5) * (1 - Series([0, 1], 0, 5)))
    assert [s.coeff(k) for k in range(-1, 3)] == _sympy_coeffs(expr, -1, 2)


def test_coefficients_below_valuation_are_zero_and_above_order_raise():
    s = Series([1, 2], -1, 3)
    assert s.coeff(-5) == 0
    assert s.coeff(2) == 0
    with pytest.raises(SeriesWindowError):
        s.coeff(4)
    assert series_coeff(mpq(5), 0) == 5
    assert series_coeff(mpq(5), 3) == 0


def test_inverting_an_unknown_series_is_a_window_error():
    # all known coefficients vanish: the valuation is not determined
    with pytest.raises(SeriesWindowError):
        Series([], 0, 3).invert()
    with pytest.raises(ZeroDivisionError):
        Series([1], 0, 3) / 0


@given(series_st(), series_st(), series_st())
def test_series_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert (a - a).is_zero()


@given(series_st(order=6))
def test_series_inverse_is_two_sided(a):
    assume(not a.is_zero())
    one = a * a.invert()
    assert one.coeff(0) == 1
    assert all(one.coeff(k) == 0 for k in range(-4, 0))
    assert all(one.coeff(k) == 0 for k in range(1, one.order + 1))


# -- tensor operators ---------------------------------------------------------


def test_basis_order_slot_one_most_significant():
    # E_12 ⊗ 1 on C^2 ⊗ C^2 sends |2,k> to |1,k>: rows 11,12 cols 21,22
    op = basis_matrix(2, 1, 2).tensor(identity(2))
    expected = [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert op.tolist() == expected


def test_permutation_swaps_tensor_factors():
    a = TensorOperator.from_function(3, lambda i, j: mpq(i * 10 + j, j + 1))
    b = TensorOperator.from_function(3, lambda i, j: mpq(i - 2 * j, 3))
    p = permutation(3)
    assert p @ p == identity(3, 2)
    assert p @ a.tensor(b) @ p == b.tensor(a)


def test_embed_matches_kronecker_oracle():
    a = TensorOperator.from_function(2, lambda i, j: mpq(i + 3 * j, 5))
    b = TensorOperator.from_function(2, lambda i, j: mpq(i * j - 2))
    ab = a.tensor(b)
    one = np.eye(2, dtype=int)
    # slots (1, 3) of three: permute the middle slot out with P_23
    p23 = permutation(2, 2, 3, 3)
    oracle = p23 @ TensorOperator(2, 3, np.kron(ab.data, one)) @ p23
    assert embed(ab, (1, 3), 3) == oracle
    # reversed slot order: b acts on slot 1
    assert embed(ab, (2, 1), 2) == b.tensor(a)
    with pytest.raises(ValueError):
        embed(ab, (1, 1), 3)
    with pytest.raises(ValueError):
        embed(ab, (1, 4), 3)


def test_partial_trace_of_product_operator():
    a = TensorOperator.from_function(3, lambda i, j: mpq(i, j))
    b = TensorOperator.from_function(3, lambda i, j: mpq(i + j))
    assert partial_trace(a.tensor(b), 2) == a * b.trace()
    assert partial_trace(a.tensor(b), 1) == b * a.trace()


def test_inverse_and_rank_against_sympy():
    op = TensorOperator.from_function(4, lambda i, j: mpq(1, i + j - 1))  # Hilbert
    inv = op.inverse()
    assert to_sympy(inv) == to_sympy(op).inv()
    assert op @ inv == identity(4)
    singular = TensorOperator.from_function(3, lambda i, j: mpq(i * j))
    assert singular.rank() == 1
    with pytest.raises(ZeroDivisionError):
        singular.inverse()


@settings(max_examples=30)
@given(st.lists(rationals(6), min_size=9, max_size=9))
def test_inverse_property(values):
    op = TensorOperator(3, 1, np.array(values, dtype=object).reshape(3, 3))
    if to_sympy(op).det() == 0:
        with pytest.raises(ZeroDivisionError):
            op.inverse()
        assert op.rank() < 3
    else:
        assert op @ op.inverse() == identity(3)
        assert op.rank() == 3


def test_inverse_over_series_entries():
    eps = Series([0, 1], 0, 4)
    op = TensorOperator(2, 1, [[eps, mpq(1)], [mpq(1), mpq(1)]])
    inv = op.inverse()
    prod = op @ inv
    assert prod.coeff(0) == identity(2)
    assert prod.coeff(1).is_zero()


def test_max_discrepancy_and_scalar_ops():
    a = identity(2, 2) * mpq(1, 3)
    b = identity(2, 2) / 3
    assert a == b
    c = b.map(lambda x: x)
    c.data[0, 3] = mpq(-5, 2)
    assert a.max_discrepancy(c) == mpq(5, 2)
