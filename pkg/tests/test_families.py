import pytest
import sympy as sp
from gmpy2 import mpq

from conftest import as_lists, to_sympy
from rmatrix.algebra import Series, identity, permutation
from rmatrix.families import (
    FAMILIES,
    b_operator,
    constant_vertex,
    expansion_coeffs_explicit,
    get_family,
    o_operator,
    r_dynamical,
    r_explicit,
    r_semidynamical,
    r_vertex,
    r_vertex_tables,
    r_vertex_z2zero,
    twist,
    twist_factorized,
)
from rmatrix.gauge import DynParams, SingularPointError

H, Z = sp.symbols("hbar z")

# the printed GL_2 deformation, typed in independently of the package
ELEVEN_VERTEX = sp.Matrix(
    [
        [1 / H + 1 / Z, 0, 0, 0],
        [-Z - H, 1 / H, 1 / Z, 0],
        [-Z - H, 1 / Z, 1 / H, 0],
        [-(Z**3) - H**3 - 2 * Z**2 * H - 2 * Z * H**2, Z + H, Z + H, 1 / H + 1 / Z],
    ]
)


def _at(expr, **vals):
    return expr.subs({sp.Symbol(k): sp.Rational(v) for k, v in vals.items()})


def test_eleven_vertex_printed_values():
    op = constant_vertex("eleven-vertex", 2, mpq(1), mpq(1))
    assert as_lists(op) == [[2, 0, 0, 0], [-2, 1, 1, 0], [-2, 1, 1, 0], [-6, 2, 2, 2]]


def test_yang_diagonal_entries():
    op = constant_vertex("yang", 3, mpq(1, 2), mpq(1, 3))
    assert op.data[0, 0] == 5
    assert op.data[1, 1] == 2 and op.data[1, 3] == 3


@pytest.mark.parametrize("hbar,z", [("1", "1"), ("-2/3", "5/7"), ("7/4", "-1/9")])
def test_n2_explicit_form_equals_eleven_vertex(hbar, z):
    h, zz = mpq(hbar), mpq(z)
    assert to_sympy(r_explicit(2, h, zz)) == _at(ELEVEN_VERTEX, hbar=hbar, z=z)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gauge_route_equals_explicit_form(n):
    h, z1, z2 = mpq(3, 7), mpq(-1, 2), mpq(5, 3)
    q = DynParams([mpq(k * k, 3) + k for k in range(1, n + 1)])
    explicit = r_explicit(n, h, z1 - z2)
    assert r_vertex(n, h, z1, z2, q) == explicit
    assert r_vertex(n, h, z1, z2, q, route="components") == explicit
    assert r_vertex_tables(n, h, z1 - z2) == explicit
    assert r_vertex_z2zero(n, h, z1 - z2, q) == explicit


def test_explicit_n3_fingerprint():
    # frozen after agreement with the gauge route at z1 = z/2, z2 = -z/2
    op = r_explicit(3, mpq(1, 2), mpq(1, 3))
    assert op.trace() == 27
    col = [op.data[i, 0] for i in range(9)]
    expected = ["5", "1", "11/9", "-1", "5/3", "20/27", "-11/9", "20/27", "215/972"]
    assert col == [mpq(x) for x in expected]


def test_classical_limit_matches_symbolic_expansion():
    zval = sp.Rational(-3, 5)
    ser = sp.Matrix(2 * 2, 2 * 2, lambda i, j: sp.series(ELEVEN_VERTEX[i, j], H, 0, 2).removeO())
    r_sym = ser.applyfunc(lambda e: sp.expand(e).coeff(H, 0)).subs(Z, zval)
    m_sym = ser.applyfunc(lambda e: sp.expand(e).coeff(H, 1)).subs(Z, zval)
    z = mpq(-3, 5)
    assert to_sympy(expansion_coeffs_explicit(2, "classical-r", z)) == r_sym
    assert to_sympy(expansion_coeffs_explicit(2, "m", z)) == m_sym
    eps = Series([0, 1], 0, 3)
    series = r_explicit(2, eps, z)
    assert series.coeff(-1) == identity(2, 2)
    assert to_sympy(series.coeff(0)) == r_sym


def test_zero_coefficients_n2():
    assert expansion_coeffs_explicit(2, "r-zero").is_zero()
    assert as_lists(expansion_coeffs_explicit(2, "m-zero")) == [
        [0, 0, 0, 0],
        [-1, 0, 0, 0],
        [-1, 0, 0, 0],
        [0, 1, 1, 0],
    ]


def test_scaling_limit_of_eleven_vertex_is_yang():
    eps = Series([0, 1], 0, 3)
    h, z = mpq(2, 5), mpq(-7, 3)
    scaled = constant_vertex("eleven-vertex", 2, h * eps, z * eps) * eps
    assert scaled.coeff(0) == constant_vertex("yang", 2, h, z)


def test_semidynamical_residues():
    q = DynParams([mpq(1, 3), mpq(-2), mpq(5)])
    h, z1 = mpq(3, 2), mpq(2, 7)
    eps = Series([0, 1], 0, 3)
    at_z2 = r_semidynamical(3, h, z1, eps, q)
    assert at_z2.coeff(-1) == o_operator(3)
    assert at_z2.coeff(0) == b_operator(3, h, z1, q)
    assert r_semidynamical(3, h, z1 + eps, z1, q).coeff(-1) == permutation(3)


def test_twist_inverse_pair_and_factorized_form():
    q = DynParams([mpq(1, 3), mpq(-2), mpq(5, 4)])
    h, z1 = mpq(2, 9), mpq(-4, 3)
    f, finv = twist(3, h, z1, q)
    assert f @ finv == identity(3, 2)
    assert f == twist_factorized(3, h, z1, q)


def test_dynamical_is_singular_at_poles():
    q = DynParams([mpq(0), mpq(1)])
    with pytest.raises(SingularPointError):
        r_dynamical(2, mpq(1), mpq(0), q)
    with pytest.raises(SingularPointError):
        r_explicit(2, mpq(0), mpq(1))


def test_registry_lookup_and_support():
    assert set(FAMILIES) >= {"yang", "eleven-vertex", "closed-form", "semi-dynamical", "dynamical"}
    assert get_family("eleven-vertex").supports(2)
    assert not get_family("eleven-vertex").supports(3)
    with pytest.raises(KeyError):
        get_family("baxter")
    with pytest.raises(ValueError):
        constant_vertex("eleven-vertex", 3, mpq(1), mpq(1))
