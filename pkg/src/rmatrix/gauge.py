"""Rational IRF-Vertex gauge matrix g(z, q) = Xi(z, q) D(q)^{-1} and friends.

All functions take 1-based matrix indices in their formulas and return
:class:`~rmatrix.algebra.TensorOperator` instances.  Any argument may be a
``Rat`` or a :class:`~rmatrix.algebra.Series`; derivatives and residues are
read off series coefficients, never finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

from gmpy2 import mpq

from .algebra import Series, TensorOperator, embed, series_coeff

__all__ = [
    "SingularPointError",
    "DegenerateParametersError",
    "DynParams",
    "rho",
    "rho_inv",
    "xi_matrix",
    "d_diagonal",
    "g_matrix",
    "g_inverse",
    "xi_inverse_from_points",
    "vandermonde_inverse",
    "sym_functions",
    "cal_l_eta",
    "cauchy_matrix",
    "l_matrix",
    "l_n_matrix",
    "g_derivative_z",
    "g_derivative_q",
    "g_residue",
    "LaxData",
    "lax_build",
    "slot_shifted",
]


class SingularPointError(ZeroDivisionError):
    """The requested point is a pole or a degenerate configuration."""


class DegenerateParametersError(SingularPointError):
    """Two dynamical parameters coincide, so D(q) is singular."""


def _differs(a, b) -> bool:
    d = a - b
    if isinstance(d, Series):
        return not d.is_zero()
    return d != 0


@dataclass(frozen=True)
class DynParams:
    """Dynamical parameters q_1..q_N (pairwise distinct)."""

    q: tuple

    def __init__(self, q: Sequence):
        q = tuple(mpq(v) if not isinstance(v, Series) else v for v in q)
        if len(q) < 1:
            raise ValueError("at least one dynamical parameter is required")
        for i in range(len(q)):
            for j in range(i + 1, len(q)):
                if not _differs(q[i], q[j]):
                    raise DegenerateParametersError(f"q_{i + 1} = q_{j + 1}")
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return len(self.q)

    @property
    def bar(self) -> tuple:
        """Centered parameters q_j - mean(q); they sum to zero exactly."""
        mean = sum(self.q, mpq(0)) / self.n
        return tuple(v - mean for v in self.q)

    def shifted(self, k: int, delta) -> "DynParams":
        """Copy with q_k (1-based) moved by ``delta``."""
        q = list(self.q)
        q[k - 1] = q[k - 1] + delta
        return DynParams(q)

    def with_value(self, k: int, value) -> "DynParams":
        q = list(self.q)
        q[k - 1] = value
        return DynParams(q)

    @classmethod
    def canonical(cls, n: int) -> "DynParams":
        """q_i = i."""
        return cls(range(1, n + 1))


def rho(i: int, n: int) -> int:
    """Row exponent of Xi: i-1 for i < N, and N for the last row."""
    return i - 1 if i <= n - 1 else n


def rho_inv(m: int, n: int) -> int | None:
    """Partial inverse of :func:`rho`; ``None`` marks an undefined lookup
    (m = N-1 or out of range), meaning the summand is skipped."""
    if 0 <= m <= n - 2:
        return m + 1
    if m == n:
        return n
    return None


def d_diagonal(q: DynParams) -> list:
    """Diagonal of D(q): prod_{k != i} (q_i - q_k)."""
    out = []
    for i, qi in enumerate(q.q):
        prod = mpq(1)
        for k, qk in enumerate(q.q):
            if k != i:
                prod = prod * (qi - qk)
        out.append(prod)
    return out


def xi_matrix(z, q: DynParams) -> TensorOperator:
    n = q.n
    qb = q.bar
    return TensorOperator.from_function(n, lambda i, j: (z + qb[j - 1]) ** rho(i, n))


def g_matrix(z, q: DynParams) -> TensorOperator:
    n = q.n
    qb = q.bar
    d = d_diagonal(q)
    return TensorOperator.from_function(n, lambda i, j: (z + qb[j - 1]) ** rho(i, n) / d[j - 1])


def sym_functions(x: Sequence):
    """Signed elementary symmetric functions.

    Returns ``(sigma, sigma_hat)`` with ``sigma[k]`` defined by
    ``prod_k (zeta - x_k) = sum_k (-1)^k zeta^k sigma_k`` and
    ``sigma_hat[k-1][s]`` by ``-prod_{m != k} (zeta - x_m) = sum_s (-1)^s zeta^s sigma_hat^k_s``.
    """
    n = len(x)

    def poly(points):
        # coefficients of prod (zeta - p), lowest degree first
        c = [mpq(1)]
        for p in points:
            nxt = [mpq(0)] * (len(c) + 1)
            for d, cd in enumerate(c):
                nxt[d + 1] = nxt[d + 1] + cd
                nxt[d] = nxt[d] - p * cd
            c = nxt
        return c

    full = poly(x)
    sigma = [full[k] if k % 2 == 0 else -full[k] for k in range(n + 1)]
    hats = []
    for k in range(n):
        c = poly([x[m] for m in range(n) if m != k])
        hats.append([-c[s] if s % 2 == 0 else c[s] for s in range(n)])
    return sigma, hats


def _sigma_hat(hats, k: int, s: int):
    # sigma_hat^k_s with out-of-range s treated as zero
    if 0 <= s < len(hats[k - 1]):
        return hats[k - 1][s]
    return mpq(0)


def _sigma(sigma, s: int):
    if 0 <= s < len(sigma):
        return sigma[s]
    return mpq(0)


def g_inverse(z, q: DynParams, method: str = "symmetric") -> TensorOperator:
    """Inverse of g(z, q) by one of three independent routes.

    ``direct``       Gauss-Jordan elimination of g itself.
    ``symmetric``    closed form in symmetric functions of x_j = z + qbar_j.
    ``z-expansion``  the same closed form expanded in powers of z around the
                     centered parameters.
    """
    n = q.n
    if not isinstance(z, Series) and z == 0:
        raise SingularPointError("g(z, q) is degenerate at z = 0")
    if method == "direct":
        return g_matrix(z, q).inverse()
    if method == "symmetric":
        x = [z + b for b in q.bar]
        sigma, hats = sym_functions(x)

        def entry(k, j):
            r = rho(j, n)
            sign = -1 if r % 2 else 1
            return sign * (_sigma(sigma, r) / (n * z) - _sigma_hat(hats, k, r))

        return TensorOperator.from_function(n, entry)
    if method == "z-expansion":
        sigma, hats = sym_functions(list(q.bar))

        def entry(m, j):
            r = rho(j, n)
            sign = -1 if r % 2 else 1
            acc = _sigma(sigma, r)
            for s in range(1, n - j + 1):
                acc = acc + z**s * (
                    _sigma(sigma, s + j - 1) * comb(s + j - 1, j - 1)
                    - n * _sigma_hat(hats, m, s + j - 2) * comb(s + j - 2, j - 1)
                )
            acc = acc - (n - j) * z ** (n - j + 1) * _sigma_hat(hats, m, n - 1) * comb(n, j - 1)
            return sign * acc / (n * z)

        return TensorOperator.from_function(n, entry)
    raise ValueError(f"unknown inverse method {method!r}")


def vandermonde_inverse(x: Sequence) -> TensorOperator:
    """Inverse of V_ij = x_j^(i-1) via the marked symmetric functions."""
    n = len(x)
    _, hats = sym_functions(x)

    def entry(k, j):
        den = mpq(1)
        for s in range(n):
            if s != k - 1:
                den = den * (x[k - 1] - x[s])
        sign = -1 if j % 2 else 1
        return sign * _sigma_hat(hats, k, j - 1) / den

    return TensorOperator.from_function(n, entry)


def xi_inverse_from_points(x: Sequence, variant: str = "combined") -> TensorOperator:
    """Inverse of Xi_ij = x_j^rho(i) for arbitrary points x.

    ``difference`` uses sigma_hat_{rho-1} - (sum_{s != k} x_s) sigma_hat_rho;
    ``combined`` splits into a sigma_rho / (sum x) part and a sigma_hat part.
    The two printed variants are checked against direct inversion.
    """
    n = len(x)
    sigma, hats = sym_functions(x)
    total = sum(x, mpq(0))

    def prod_k(k):
        den = mpq(1)
        for s in range(n):
            if s != k - 1:
                den = den * (x[k - 1] - x[s])
        return den

    def entry(k, j):
        r = rho(j, n)
        sign = -1 if r % 2 else 1
        pk = prod_k(k)
        if variant == "difference":
            others = total - x[k - 1]
            num = _sigma_hat(hats, k, r - 1) - others * _sigma_hat(hats, k, r)
            return sign * num / (total * pk)
        if variant == "combined":
            return sign * _sigma(sigma, r) / (total * pk) - sign * _sigma_hat(hats, k, r) / pk
        raise ValueError(f"unknown variant {variant!r}")

    return TensorOperator.from_function(n, entry)


def cal_l_eta(eta, z, q: DynParams) -> TensorOperator:
    """The Ruijsenaars-type matrix that factorizes as g^{-1}(z) g(z - eta)."""
    n = q.n
    qs = q.q

    def entry(i, j):
        prod = mpq(1)
        for k in range(1, n + 1):
            if k != j:
                prod = prod * (qs[j - 1] - qs[k - 1] - eta) / (qs[j - 1] - qs[k - 1])
        return eta * (1 / (qs[i - 1] - qs[j - 1] + eta) - 1 / (n * z)) * prod

    return TensorOperator.from_function(n, entry)


def cauchy_matrix(eta, z, q: DynParams, u: DynParams) -> TensorOperator:
    """Cauchy-like matrix equal to -Xi^{-1}(z, q) Xi(z - eta, u)."""
    n = q.n
    if u.n != n:
        raise ValueError("q and u must have the same length")
    qb, ub = q.bar, u.bar

    def entry(i, j):
        num = mpq(1)
        for k in range(n):
            num = num * (ub[j - 1] - qb[k] - eta)
        den = mpq(1)
        for k in range(n):
            if k != i - 1:
                den = den * (qb[i - 1] - qb[k])
        return (1 / (qb[i - 1] - ub[j - 1] + eta) - 1 / (n * z)) * num / den

    return TensorOperator.from_function(n, entry)


def l_matrix(z, q: DynParams) -> TensorOperator:
    """Closed form of g^{-1} dg/dz."""
    n = q.n
    qs = q.q

    def entry(i, j):
        if i == j:
            acc = 1 / (n * z)
            for k in range(1, n + 1):
                if k != j:
                    acc = acc + 1 / (qs[i - 1] - qs[k - 1])
            return acc
        return 1 / (n * z) - 1 / (qs[i - 1] - qs[j - 1])

    return TensorOperator.from_function(n, entry)


def l_n_matrix(index: int, z, q: DynParams) -> TensorOperator:
    """Closed form of g^{-1} dg/dq_n for n = ``index`` (1-based)."""
    n = q.n
    qs = q.q
    lz = l_matrix(z, q)

    def log_d(i):
        if i != index:
            return 1 / (qs[index - 1] - qs[i - 1])
        acc = mpq(0)
        for k in range(1, n + 1):
            if k != i:
                acc = acc + 1 / (qs[i - 1] - qs[k - 1])
        return acc

    def entry(i, j):
        lij = lz.data[i - 1, j - 1]
        val = mpq(n - 1, n) * lij if j == index else -lij / n
        if i == j:
            val = val - log_d(i)
        return val

    return TensorOperator.from_function(n, entry)


_DERIV_ORDER = 3


def g_derivative_z(z, q: DynParams) -> TensorOperator:
    """dg/dz by evaluating g at z + eps."""
    return g_matrix(z + Series([0, 1], 0, _DERIV_ORDER), q).coeff(1)


def g_derivative_q(index: int, z, q: DynParams) -> TensorOperator:
    """dg/dq_index by promoting q_index to a series."""
    eps = Series([0, 1], 0, _DERIV_ORDER)
    return g_matrix(z, q.shifted(index, eps)).coeff(1)


def g_residue(q: DynParams, order: int = 1) -> TensorOperator:
    """Res_{z=0} g^{-1}(z, q), the eps^{-1} coefficient of g^{-1}(eps, q)."""
    eps = Series([0, 1], 0, order)
    return g_inverse(eps, q, "symmetric").coeff(-1)


@dataclass(frozen=True)
class LaxData:
    l_rs: TensorOperator
    l_top: TensorOperator
    s: TensorOperator
    weights: tuple


def lax_build(eta, z, q: DynParams, weights: Sequence) -> LaxData:
    """Ruijsenaars-Schneider Lax matrix, its gauge-transformed top Lax matrix
    and the residue S.  ``weights`` play the role of exp(p_j)."""
    if any(w == 0 for w in weights):
        raise ValueError("momentum weights must be nonzero")
    if len(weights) != q.n:
        raise ValueError("one weight per particle")
    exp_p = TensorOperator.diag(list(weights))
    g_inv = g_inverse(z, q)
    g_shift = g_matrix(z + eta, q)
    l_rs = g_inv @ g_shift @ exp_p
    l_top = g_shift @ exp_p @ g_inv
    s = g_matrix(eta, q) @ exp_p @ g_residue(q)
    return LaxData(l_rs=l_rs, l_top=l_top, s=s, weights=tuple(weights))


def slot_shifted(
    build: Callable[[DynParams], TensorOperator],
    q: DynParams,
    slot: int,
    delta,
    total_slots: int,
) -> TensorOperator:
    """Operator ``build(q)`` with q shifted according to the basis index of a
    bystander slot: sum_k build(q with q_k + delta) * E_kk on ``slot``.

    ``build`` must act as the identity on ``slot``.
    """
    n = q.n
    acc = None
    for k in range(1, n + 1):
        proj = TensorOperator.zeros(n, 1)
        proj.data[k - 1, k - 1] = 1
        term = build(q.shifted(k, delta)) @ embed(proj, (slot,), total_slots)
        acc = term if acc is None else acc + term
    return acc
