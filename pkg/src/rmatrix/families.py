"""Constructors for the rational GL_N R-matrices and their expansion
coefficients.

Every builder is a pure function of exact parameters (``Rat`` or
``Series``) returning a two-slot :class:`~rmatrix.algebra.TensorOperator`.
Vertex-type families additionally get a uniform ``(n, hbar, z)`` entry in
:data:`FAMILIES`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable

from gmpy2 import mpq

from .algebra import Series, TensorOperator, embed, identity, permutation
from .gauge import (
    DynParams,
    SingularPointError,
    d_diagonal,
    g_derivative_z,
    g_inverse,
    g_matrix,
    rho,
    rho_inv,
    slot_shifted,
    sym_functions,
)

__all__ = [
    "phi",
    "constant_vertex",
    "r_dynamical",
    "r_semidynamical",
    "o_operator",
    "b_operator",
    "twist",
    "twist_factorized",
    "r_vertex",
    "r_vertex_tables",
    "r_vertex_z2zero",
    "r_explicit",
    "explicit_a",
    "explicit_b",
    "expansion_coeffs_explicit",
    "RFamilyDescriptor",
    "FAMILIES",
    "get_family",
]


def _nonzero(*values) -> None:
    for v in values:
        if not isinstance(v, Series) and v == 0:
            raise SingularPointError("argument sits on a pole")


def _units(n: int):
    """Dense two-slot zero operator and a setter for E_ij ⊗ E_kl coefficients."""
    op = TensorOperator.zeros(n, 2)

    def add(i, j, k, l, value):
        r = (i - 1) * n + (k - 1)
        c = (j - 1) * n + (l - 1)
        op.data[r, c] = op.data[r, c] + value

    return op, add


def phi(hbar, z):
    """GL_1 R-matrix 1/hbar + 1/z."""
    _nonzero(hbar, z)
    return 1 / hbar + 1 / z


def constant_vertex(name: str, n: int, hbar, z) -> TensorOperator:
    """Yang's R-matrix (any N) and the N=2 six- and eleven-vertex matrices."""
    _nonzero(hbar, z)
    if name == "yang":
        return identity(n, 2) * (1 / hbar) + permutation(n) * (1 / z)
    if name not in ("six-vertex", "eleven-vertex"):
        raise ValueError(f"unknown constant family {name!r}")
    if n != 2:
        raise ValueError(f"{name} is defined for N=2 only")
    a = 1 / hbar + 1 / z
    ih, iz = 1 / hbar, 1 / z
    if name == "six-vertex":
        rows = [[a, 0, 0, 0], [0, ih, iz, 0], [0, iz, ih, 0], [0, 0, 0, a]]
    else:
        w = z + hbar
        corner = -(z**3) - hbar**3 - 2 * z**2 * hbar - 2 * z * hbar**2
        rows = [[a, 0, 0, 0], [-w, ih, iz, 0], [-w, iz, ih, 0], [corner, w, w, a]]
    op = TensorOperator.zeros(2, 2)
    for r in range(4):
        for c in range(4):
            op.data[r, c] = rows[r][c]
    return op


def r_dynamical(n: int, hbar, z, q: DynParams) -> TensorOperator:
    """Dynamical rational R-matrix depending on z = z1 - z2."""
    _nonzero(hbar, z)
    qs = q.q
    op, add = _units(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                add(i, i, i, i, 1 / z + 1 / hbar)
            else:
                add(i, j, j, i, 1 / z + n / (qs[j - 1] - qs[i - 1]))
                add(i, i, j, j, 1 / hbar + n / (qs[i - 1] - qs[j - 1]))
    return op


def r_semidynamical(n: int, hbar, z1, z2, q: DynParams) -> TensorOperator:
    """Semi-dynamical rational R-matrix; not a function of z1 - z2 alone."""
    _nonzero(hbar, z1 - z2, z2, z1 + hbar)
    qs = q.q
    op, add = _units(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                add(i, i, i, i, 1 / (z1 - z2) + 1 / z2 + 1 / hbar - 1 / (z1 + hbar))
                continue
            c = n / (qs[j - 1] - qs[i - 1])
            add(i, j, j, i, 1 / (z1 - z2) + c)
            add(i, i, j, j, 1 / hbar + c)
            add(i, j, j, j, -(1 / (z1 + hbar) + c))
            add(j, j, i, j, 1 / z2 + c)
    return op


def o_operator(n: int) -> TensorOperator:
    """sum_{i,j} E_jj ⊗ E_ij, the z2-residue of the semi-dynamical R-matrix."""
    op, add = _units(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            add(j, j, i, j, 1)
    return op


def b_operator(n: int, hbar, z1, q: DynParams) -> TensorOperator:
    """Regular part at z2 = 0 of the semi-dynamical R-matrix."""
    _nonzero(hbar, z1, z1 + hbar)
    qs = q.q
    op, add = _units(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            add(i, j, j, i, 1 / z1)
            add(i, i, j, j, 1 / hbar)
            add(i, j, j, j, -1 / (z1 + hbar))
            if i != j:
                c = n / (qs[j - 1] - qs[i - 1])
                add(i, j, j, i, c)
                add(i, i, j, j, c)
                add(i, j, j, j, -c)
                add(j, j, i, j, c)
    return op


def twist(n: int, hbar, z1, q: DynParams):
    """The twist F_12(hbar, z1 | q) and its printed inverse, as a pair."""
    _nonzero(hbar, z1, z1 + hbar)
    qs = q.q
    f, add = _units(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            w = n / (qs[i - 1] - qs[j - 1] + n * hbar)
            add(i, i, j, j, hbar * (1 / hbar - w))
            add(i, j, j, j, hbar * (w - 1 / (z1 + hbar)))
    finv, add = _units(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                add(i, i, i, i, hbar * (1 / hbar + 1 / z1))
            else:
                w = n / (qs[i - 1] - qs[j - 1])
                add(i, j, j, j, hbar * (1 / z1 - w))
                add(i, i, j, j, hbar * (w + 1 / hbar))
    return f, finv


def _g1(z, q):
    return embed(g_matrix(z, q), (1,), 2)


def _g2(z, q):
    return embed(g_matrix(z, q), (2,), 2)


def _g1_inv(z, q):
    return embed(g_inverse(z, q), (1,), 2)


def _g2_inv(z, q):
    return embed(g_inverse(z, q), (2,), 2)


def twist_factorized(n: int, hbar, z1, q: DynParams) -> TensorOperator:
    """g_1^{-1}(z1 + hbar, q) g_1(z1, q - hbar^{(2)}), shifts of step N*hbar."""
    shifted = slot_shifted(lambda qq: _g1(z1, qq), q, 2, -n * hbar, 2)
    return _g1_inv(z1 + hbar, q) @ shifted


def r_vertex(n: int, hbar, z1, z2, q: DynParams | None = None, route: str = "product") -> TensorOperator:
    """Vertex R-matrix obtained by gauging the semi-dynamical one.

    ``product`` multiplies the four gauge factors; ``components`` sums the
    component formula entry by entry.  Output is independent of q and
    depends on z1 - z2 only.
    """
    if q is None:
        q = DynParams.canonical(n)
    if route == "product":
        semi = r_semidynamical(n, hbar, z1, z2, q)
        return _g2(z2, q) @ _g1(z1 + hbar, q) @ semi @ _g2_inv(z2 + hbar, q) @ _g1_inv(z1, q)
    if route == "components":
        return _r_vertex_components(n, hbar, z1, z2, q)
    raise ValueError(f"unknown route {route!r}")


def _r_vertex_components(n, hbar, z1, z2, q):
    _nonzero(hbar, z1 - z2, z2, z1 + hbar)
    ga = g_matrix(z1 + hbar, q).data
    gc = g_matrix(z2, q).data
    gb = g_inverse(z1, q).data
    gd = g_inverse(z2 + hbar, q).data
    qs = q.q
    idx = range(n)
    inv_diff = {(i, j): n / (qs[j] - qs[i]) for i in idx for j in idx if i != j}
    op = TensorOperator.zeros(n, 2)
    for a in idx:
        for b in idx:
            for c in idx:
                for d in idx:
                    acc = mpq(0)
                    for i in idx:
                        for j in idx:
                            t1 = ga[a, i] * gc[c, j] * gb[j, b] * gd[i, d]
                            t2 = ga[a, i] * gc[c, j] * gb[i, b] * gd[j, d]
                            t3 = ga[a, i] * gc[c, j] * gb[j, b] * gd[j, d]
                            t4 = ga[a, j] * gc[c, i] * gb[j, b] * gd[j, d]
                            acc = acc + t1 / (z1 - z2) + t2 / hbar - t3 / (z1 + hbar) + t4 / z2
                            if i != j:
                                acc = acc + inv_diff[i, j] * (t1 + t2 - t3 + t4)
                    op.data[a * n + c, b * n + d] = acc
    return op


def r_vertex_tables(n: int, hbar, z) -> TensorOperator:
    """Vertex R-matrix at q_i = i, z1 = z/2, z2 = -z/2 via the s, t, d tables."""
    _nonzero(hbar, z, z + 2 * hbar, 2 * hbar - z)
    qbar = [mpq(2 * i - n - 1, 2) for i in range(1, n + 1)]
    d = [(-1) ** (n - i) * _fact(i - 1) * _fact(n - i) for i in range(1, n + 1)]
    y = [z / 2 + b for b in qbar]
    v = [-z / 2 + hbar + b for b in qbar]
    sig_y, hat_y = sym_functions(y)
    sig_v, hat_v = sym_functions(v)

    def table(sig, hats, den):
        out = {}
        for k in range(1, n + 1):
            for j in range(1, n + 1):
                r = rho(j, n)
                sign = -1 if r % 2 else 1
                hat = hats[k - 1][r] if r < n else mpq(0)
                out[k, j] = sign * (2 * sig[r] / den - hat)
        return out

    s = table(sig_y, hat_y, n * z)
    t = table(sig_v, hat_v, n * (-z + 2 * hbar))
    up = {(a, i): (z / 2 + hbar + qbar[i - 1]) ** rho(a, n) for a in range(1, n + 1) for i in range(1, n + 1)}
    dn = {(c, j): (-z / 2 + qbar[j - 1]) ** rho(c, n) for c in range(1, n + 1) for j in range(1, n + 1)}
    rng = range(1, n + 1)
    op = TensorOperator.zeros(n, 2)
    for a in rng:
        for b in rng:
            for c in rng:
                for dd in rng:
                    acc = mpq(0)
                    for i in rng:
                        for j in rng:
                            dij = d[i - 1] * d[j - 1]
                            w1 = up[a, i] * dn[c, j] / dij
                            w2 = up[a, j] * dn[c, i] / dij
                            sj_tj = s[j, b] * t[j, dd]
                            acc = acc + w1 * (
                                s[j, b] * t[i, dd] / z + s[i, b] * t[j, dd] / hbar - 2 * sj_tj / (z + 2 * hbar)
                            )
                            acc = acc - w2 * 2 * sj_tj / z
                            if i != j:
                                acc = acc + n * (
                                    w1 * (s[j, b] * t[i, dd] + s[i, b] * t[j, dd] - sj_tj) / (j - i)
                                    + w2 * sj_tj / (j - i)
                                )
                    op.data[(a - 1) * n + (c - 1), (b - 1) * n + (dd - 1)] = acc
    return op


def _fact(m: int) -> int:
    out = 1
    for k in range(2, m + 1):
        out *= k
    return out


def r_vertex_z2zero(n: int, hbar, z, q: DynParams | None = None) -> TensorOperator:
    """Vertex R-matrix from the z2 -> 0 limit:
    g_1(z+hbar) (g_2'(0) O + g_2(0) B(hbar, z)) g_2^{-1}(hbar) g_1^{-1}(z)."""
    if q is None:
        q = DynParams.canonical(n)
    _nonzero(hbar, z, z + hbar)
    dg0 = embed(g_derivative_z(mpq(0), q), (2,), 2)
    g0 = _g2(mpq(0), q)
    inner = dg0 @ o_operator(n) + g0 @ b_operator(n, hbar, z, q)
    return _g1(z + hbar, q) @ inner @ _g2_inv(hbar, q) @ _g1_inv(z, q)


# ---------------------------------------------------------------------------
# explicit closed forms


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def _binom(top: int, bottom: int) -> int:
    if bottom < 0 or top < 0 or bottom > top:
        return 0
    return comb(top, bottom)


class _Mat:
    """Accumulator for a single-slot matrix keyed by 1-based (row, col);
    rows or columns given as ``None`` (undefined rho^{-1}) are dropped."""

    def __init__(self, n):
        self.n = n
        self.op = TensorOperator.zeros(n, 1)

    def add(self, i, j, value):
        if i is None or j is None:
            return
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            return
        self.op.data[i - 1, j - 1] = self.op.data[i - 1, j - 1] + value


def _delta_jn(j, n):
    return 1 if j == n else 0


def explicit_a(n: int, z, hbar) -> TensorOperator:
    """Matrix A(z, hbar) of the closed form."""
    m = _Mat(n)
    m.add(n, n, 1)
    for j in range(1, n + 1):
        m.add(n, j, -(n - j) * z ** (n - j + 1) * _sgn(rho(j, n) + n) * comb(n, j - 1))
    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            for s in range(1, n - j + 1):
                for b in range(0, ri + 1):
                    w = (1 if ri - j == b + s - 2 else 0) - (n * hbar if ri - j == b + s - 1 else 0)
                    if isinstance(w, int) and w == 0:
                        continue
                    term = _sgn(s + _delta_jn(j, n)) * z ** (s - 1) * (z + hbar) ** b
                    term = term * _binom(s + j - 2, j - 1) * _binom(ri, b) * w
                    m.add(i, j, -term)
    return m.op


def explicit_b(n: int, hbar) -> TensorOperator:
    """Matrix B(hbar) of the closed form."""
    m = _Mat(n)
    inner = _Mat(n)
    for j in range(1, n + 1):
        rj = rho(j, n)
        if rj >= 1:
            inner.add(j, rho_inv(rj - 1, n), rj)
        inner.add(rho_inv(j, n), j, -_sgn(_delta_jn(j, n)) * j)
        for b in range(0, rj + 1):
            for c in range(0, n - j + 1):
                top = rj - b + c
                for p in range(0, top + 1):
                    coef = n * _sgn(b + _delta_jn(j, n)) * comb(rj, b) * (-hbar) ** (p + b) * comb(top, p)
                    inner.add(rho_inv(j + c, n), rho_inv(rj - b - p + c, n), coef)
    for i in range(n):
        m.op.data[i, i] = 1 / hbar
    return m.op - inner.op * mpq(1, n)


def _brace_quantum(n, z, hbar) -> TensorOperator:
    """sum_ij E_ij ⊗ {...} part of the closed form, before the 1/z factor."""
    op, add = _units(n)

    def put(i, j, row, col, value):
        if row is None or col is None:
            return
        add(i, j, row, col, value)

    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            dj = _delta_jn(j, n)
            for g in range(0, ri + 1):
                bg = comb(ri, g)
                col = rho_inv(ri - g, n)
                put(i, j, j, col, z**g * bg)
                put(i, j, n, col, -(z ** (g + n - j + 1)) * _sgn(rho(j, n) + n) * (n - j) * bg * comb(n, j - 1))
                for s in range(1, n - j + 1):
                    put(i, j, rho_inv(s + j - 1, n), col, z ** (s + g) * _sgn(s + dj) * bg * comb(s + j - 1, j - 1))
                    pref = -n * _sgn(s + dj) * z**s * (z + hbar) ** g * comb(s + j - 2, j - 1) * bg
                    if ri + 1 <= j + s + g:
                        for c in range(0, n - s - j + 2):
                            top = ri - g + c
                            for p in range(0, top + 1):
                                put(
                                    i, j,
                                    rho_inv(s + j + c - 1, n),
                                    rho_inv(ri - g - p + c, n),
                                    pref * (-hbar) ** p * comb(top, p),
                                )
                    else:
                        for c in range(0, s + j - 1):
                            top = ri - g - c - 1
                            for p in range(0, top + 1):
                                put(
                                    i, j,
                                    rho_inv(s + j - c - 2, n),
                                    rho_inv(ri - g - p - c - 1, n),
                                    -pref * (-hbar) ** p * comb(top, p),
                                )
    return op


def r_explicit(n: int, hbar, z) -> TensorOperator:
    """Closed-form GL_N R-matrix A(z,hbar) ⊗ B(hbar) + (1/z) sum E_ij ⊗ {...}.

    Summands whose rho^{-1} lookup is undefined are skipped.
    """
    _nonzero(hbar, z)
    return explicit_a(n, z, hbar).tensor(explicit_b(n, hbar)) + _brace_quantum(n, z, hbar) * (1 / z)


# -- expansion coefficients ---------------------------------------------------


def _a_coefficient(n: int, z, level: int) -> TensorOperator:
    """hbar^level coefficient of A(z, hbar) for level 0, 1, 2."""
    m = _Mat(n)
    if level == 0:
        m.add(n, n, 1)
        for j in range(1, n + 1):
            m.add(n, j, -(n - j) * z ** (n - j + 1) * _sgn(rho(j, n) + n) * comb(n, j - 1))
    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            for s in range(1, n - j + 1):
                for b in range(0, ri + 1):
                    first = ri - j == b + s - 2
                    second = ri - j == b + s - 1
                    if not (first or second):
                        continue
                    base = _sgn(s + _delta_jn(j, n)) * _binom(s + j - 2, j - 1) * _binom(ri, b)
                    if level == 0:
                        w = z ** (s + b - 1) * (1 if first else 0)
                    elif level == 1:
                        w = z ** (s + b - 2) * ((b if first else 0) - (n * z if second else 0))
                    else:
                        w = z ** (s + b - 3) * (
                            (mpq(b * (b - 1), 2) if first else 0) - (b * n * z if second else 0)
                        )
                    m.add(i, j, -base * w)
    return m.op


def _b_coefficient(n: int, level: int) -> TensorOperator:
    """hbar^level coefficient of B(hbar) for level 0, 1."""
    m = _Mat(n)
    if level == 0:
        for j in range(1, n + 1):
            rj = rho(j, n)
            dj = _delta_jn(j, n)
            if rj >= 1:
                m.add(j, rho_inv(rj - 1, n), -mpq(rj, n))
            m.add(rho_inv(j, n), j, mpq(_sgn(dj) * j, n))
            for c in range(0, n - j + 1):
                m.add(rho_inv(j + c, n), rho_inv(rj + c, n), -_sgn(dj))
    elif level == 1:
        for j in range(1, n + 1):
            rj = rho(j, n)
            dj = _delta_jn(j, n)
            for c in range(0, n - j + 1):
                m.add(rho_inv(j + c, n), rho_inv(rj + c - 1, n), _sgn(dj) * c)
    else:
        raise ValueError("only levels 0 and 1 are tabulated")
    return m.op


def _classical_r(n: int, z) -> TensorOperator:
    _nonzero(z)
    a0 = _a_coefficient(n, z, 0)
    a1 = _a_coefficient(n, z, 1)
    out = a0.tensor(_b_coefficient(n, 0)) + a1.tensor(identity(n))
    op, add = _units(n)

    def put(i, j, row, col, value):
        if row is None or col is None:
            return
        add(i, j, row, col, value)

    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            dj = _delta_jn(j, n)
            for g in range(0, ri + 1):
                bg = comb(ri, g)
                col = rho_inv(ri - g, n)
                put(i, j, j, col, z**g * bg)
                put(i, j, n, col, -(z ** (g + n - j + 1)) * _sgn(rho(j, n) + n) * (n - j) * bg * comb(n, j - 1))
                for s in range(1, n - j + 1):
                    put(i, j, rho_inv(s + j - 1, n), col, z ** (s + g) * _sgn(s + dj) * bg * comb(s + j - 1, j - 1))
                    pref = -n * _sgn(s + dj) * z ** (s + g) * comb(s + j - 2, j - 1) * bg
                    if ri + 1 <= j + s + g:
                        for c in range(0, n - s - j + 2):
                            put(i, j, rho_inv(s + j + c - 1, n), rho_inv(ri - g + c, n), pref)
                    else:
                        for c in range(0, s + j - 1):
                            put(i, j, rho_inv(s + j - c - 2, n), rho_inv(ri - g - c - 1, n), -pref)
    return out + op * (1 / z)


def _m_coefficient(n: int, z) -> TensorOperator:
    _nonzero(z)
    out = (
        _a_coefficient(n, z, 0).tensor(_b_coefficient(n, 1))
        + _a_coefficient(n, z, 1).tensor(_b_coefficient(n, 0))
        + _a_coefficient(n, z, 2).tensor(identity(n))
    )
    op, add = _units(n)

    def put(i, j, row, col, value):
        if row is None or col is None:
            return
        add(i, j, row, col, value)

    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            dj = _delta_jn(j, n)
            for s in range(1, n - j + 1):
                for g in range(0, ri + 1):
                    pref = n * _sgn(s + dj) * z ** (s + g - 2) * comb(s + j - 2, j - 1) * comb(ri, g)
                    if ri + 1 <= j + s + g:
                        for c in range(0, n - s - j + 2):
                            row = rho_inv(s + j + c - 1, n)
                            put(i, j, row, rho_inv(ri - g + c - 1, n), pref * z * (ri - g + c))
                            put(i, j, row, rho_inv(ri - g + c, n), -pref * g)
                    else:
                        for c in range(0, s + j - 1):
                            row = rho_inv(s + j - c - 2, n)
                            put(i, j, row, rho_inv(ri - g - c - 1, n), pref * g)
                            put(i, j, row, rho_inv(ri - g - c - 2, n), -pref * z * (ri - g - c - 1))
    return out + op


def _a_at_zero(n: int, level: int) -> TensorOperator:
    m = _Mat(n)
    if level == 0:
        m.add(n, n, 1)
    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            sg = _sgn(_delta_jn(j, n))
            if level == 0 and ri == j - 1:
                m.add(i, j, sg)
            elif level == 1 and ri == j:
                m.add(i, j, sg * (ri - n))
            elif level == 2 and ri == j + 1:
                m.add(i, j, sg * (mpq(ri * (ri - 1), 2) - n * ri))
    return m.op


def _m_zero(n: int) -> TensorOperator:
    out = (
        _a_at_zero(n, 0).tensor(_b_coefficient(n, 1))
        + _a_at_zero(n, 1).tensor(_b_coefficient(n, 0))
        + _a_at_zero(n, 2).tensor(identity(n))
    )
    op, add = _units(n)

    def put(i, j, row, col, value):
        if row is None or col is None or value == 0:
            return
        add(i, j, row, col, value)

    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            pre = -n * _sgn(_delta_jn(j, n))
            for c in range(0, n - j + 1):
                w = (ri + c) * (1 if ri <= j else 0) - ri * (1 if ri <= j + 1 else 0)
                put(i, j, rho_inv(j + c, n), rho_inv(ri + c - 1, n), pre * w)
            for c in range(0, j):
                w = ri * (1 if ri > j + 1 else 0) - (ri - c - 1) * (1 if ri > j else 0)
                put(i, j, rho_inv(j - c - 1, n), rho_inv(ri - c - 2, n), pre * w)
    return out + op


def _r_zero(n: int) -> TensorOperator:
    out = _a_at_zero(n, 0).tensor(_b_coefficient(n, 0)) + _a_at_zero(n, 1).tensor(identity(n))
    op, add = _units(n)

    def put(i, j, row, col, value):
        if row is None or col is None or value == 0:
            return
        add(i, j, row, col, value)

    for i in range(1, n + 1):
        ri = rho(i, n)
        for j in range(1, n + 1):
            dj = _delta_jn(j, n)
            put(i, j, j, rho_inv(ri - 1, n), ri)
            for g in range(0, ri + 1):
                if g + n == j:
                    put(
                        i, j, n, rho_inv(ri - g, n),
                        -_sgn(rho(j, n) + n) * (n - j) * comb(ri, g) * comb(n, j - 1),
                    )
            put(i, j, rho_inv(j, n), i, -_sgn(dj) * j)
            if ri <= j:
                for c in range(0, n - j + 1):
                    put(i, j, rho_inv(j + c, n), rho_inv(ri + c, n), n * _sgn(dj))
            else:
                for c in range(0, j):
                    put(i, j, rho_inv(j - c - 1, n), rho_inv(ri - c - 1, n), -n * _sgn(dj))
    return out + op


def expansion_coeffs_explicit(n: int, which: str, z=None) -> TensorOperator:
    """Closed-form expansion coefficients of the R-matrix.

    ``classical-r``  r(z), the hbar^0 coefficient
    ``m``            m(z), the hbar^1 coefficient
    ``m-zero``       m(0)
    ``r-zero``       z^0 coefficient of r(z) at z -> 0
    """
    if which == "classical-r":
        return _classical_r(n, z)
    if which == "m":
        return _m_coefficient(n, z)
    if which == "m-zero":
        return _m_zero(n)
    if which == "r-zero":
        return _r_zero(n)
    raise ValueError(f"unknown coefficient {which!r}")


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class RFamilyDescriptor:
    """A named family with its parameter signature and a uniform vertex
    entry point ``vertex(n, hbar, z)`` when the family is of vertex type."""

    name: str
    signature: tuple
    build: Callable
    vertex: Callable | None = None
    n_values: tuple | None = None  # None means any N >= 2

    def supports(self, n: int) -> bool:
        return n >= 2 and (self.n_values is None or n in self.n_values)


def _canonical_vertex(route):
    def build(n, hbar, z):
        return r_vertex(n, hbar, z / 2, -z / 2, DynParams.canonical(n), route=route)

    return build


FAMILIES: dict[str, RFamilyDescriptor] = {
    d.name: d
    for d in [
        RFamilyDescriptor(
            "yang", ("hbar", "z"),
            lambda n, hbar, z: constant_vertex("yang", n, hbar, z),
            lambda n, hbar, z: constant_vertex("yang", n, hbar, z),
        ),
        RFamilyDescriptor(
            "six-vertex", ("hbar", "z"),
            lambda n, hbar, z: constant_vertex("six-vertex", n, hbar, z),
            lambda n, hbar, z: constant_vertex("six-vertex", n, hbar, z),
            (2,),
        ),
        RFamilyDescriptor(
            "eleven-vertex", ("hbar", "z"),
            lambda n, hbar, z: constant_vertex("eleven-vertex", n, hbar, z),
            lambda n, hbar, z: constant_vertex("eleven-vertex", n, hbar, z),
            (2,),
        ),
        RFamilyDescriptor("dynamical", ("hbar", "z", "q"), r_dynamical),
        RFamilyDescriptor("semi-dynamical", ("hbar", "z1", "z2", "q"), r_semidynamical),
        RFamilyDescriptor(
            "vertex-gauge", ("hbar", "z1", "z2", "q"),
            lambda n, hbar, z1, z2, q: r_vertex(n, hbar, z1, z2, q, "product"),
            _canonical_vertex("product"),
        ),
        RFamilyDescriptor(
            "vertex-components", ("hbar", "z1", "z2", "q"),
            lambda n, hbar, z1, z2, q: r_vertex(n, hbar, z1, z2, q, "components"),
            _canonical_vertex("components"),
        ),
        RFamilyDescriptor("vertex-tables", ("hbar", "z"), r_vertex_tables, r_vertex_tables),
        RFamilyDescriptor(
            "vertex-z2zero", ("hbar", "z", "q"),
            r_vertex_z2zero,
            lambda n, hbar, z: r_vertex_z2zero(n, hbar, z),
        ),
        RFamilyDescriptor("closed-form", ("hbar", "z"), r_explicit, r_explicit),
        RFamilyDescriptor(
            "classical-explicit", ("z",),
            lambda n, z: expansion_coeffs_explicit(n, "classical-r", z),
        ),
        RFamilyDescriptor("m-explicit", ("z",), lambda n, z: expansion_coeffs_explicit(n, "m", z)),
        RFamilyDescriptor("m-zero", (), lambda n: expansion_coeffs_explicit(n, "m-zero")),
        RFamilyDescriptor("r-zero", (), lambda n: expansion_coeffs_explicit(n, "r-zero")),
    ]
}


def get_family(name: str) -> RFamilyDescriptor:
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}") from None
