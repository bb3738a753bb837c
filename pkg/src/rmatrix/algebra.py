"""Exact scalar rings and dense tensor operators on (C^N)^{⊗k}.

Scalars are ``Rat`` (gmpy2 ``mpq``) or :class:`Series`, a truncated Laurent
series in one formal variable with tracked absolute precision.  Every matrix
builder in the package is written against plain ``+ - * /`` so the same code
runs over both rings.

Basis ordering of (C^N)^{⊗k}: slot 1 is the most significant base-N digit, so
for N=2, k=2 the order is 11, 12, 21, 22.
"""

from __future__ import annotations

import itertools
from numbers import Integral
from typing import Callable, Iterable, Sequence

import numpy as np
from gmpy2 import mpq

Rat = mpq

__all__ = [
    "Rat",
    "rat",
    "Series",
    "SeriesWindowError",
    "series_point",
    "series_coeff",
    "TensorOperator",
    "basis_matrix",
    "identity",
    "embed",
    "permutation",
    "partial_trace",
    "format_rat",
]


def rat(value) -> Rat:
    """Coerce ints, ``"p/q"`` strings and Fractions to ``Rat``."""
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def format_rat(value) -> str:
    """Serialize a rational as ``"p/q"`` (reduced, q > 0) or ``"p"``."""
    return str(mpq(value))


def _is_scalar(x) -> bool:
    return isinstance(x, (Integral, type(mpq(0)))) or type(x).__name__ == "Fraction"


class SeriesWindowError(ArithmeticError):
    """A coefficient was requested beyond the known precision of a series,
    or a series with no known nonzero coefficient was inverted."""


class Series:
    """Truncated Laurent series ``sum_k c_k eps^k + O(eps^(order+1))``.

    ``start`` is the lowest stored degree (the valuation once normalized),
    ``order`` the truncation order: coefficients of degree > ``order`` are
    unknown.  Precision is propagated honestly through products and
    inverses, so a pole never smuggles unknown terms into known ones.
    """

    __slots__ = ("var", "start", "coeffs", "order")

    def __init__(self, coeffs: Sequence, start: int, order: int, var: str = "eps"):
        coeffs = [mpq(c) for c in coeffs]
        # drop anything past the truncation order
        keep = order - start + 1
        if keep < len(coeffs):
            coeffs = coeffs[: max(keep, 0)]
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        coeffs = coeffs[lead:]
        start += lead
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            start = order + 1
        self.var = var
        self.start = start
        self.coeffs = tuple(coeffs)
        self.order = order

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, value, order: int, var: str = "eps") -> "Series":
        return cls([value], 0, order, var)

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self.coeffs

    def coeff(self, k: int) -> Rat:
        if k > self.order:
            raise SeriesWindowError(
                f"coefficient of {self.var}^{k} requested but series is only known "
                f"through {self.var}^{self.order}"
            )
        idx = k - self.start
        if 0 <= idx < len(self.coeffs):
            return self.coeffs[idx]
        return mpq(0)

    def _dense(self, lo: int, hi: int) -> list:
        return [self.coeff(k) if k <= self.order else mpq(0) for k in range(lo, hi + 1)]

    def _check_var(self, other: "Series") -> None:
        if other.var != self.var:
            raise ValueError(f"cannot combine series in {self.var!r} and {other.var!r}")

    # -- ring operations ------------------------------------------------------

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs], self.start, self.order, self.var)

    def __pos__(self) -> "Series":
        return self

    def __add__(self, other):
        if isinstance(other, Series):
            self._check_var(other)
            order = min(self.order, other.order)
            lo = min(self.start, other.start)
            if lo > order:
                return Series([], order + 1, order, self.var)
            vals = [a + b for a, b in zip(self._dense(lo, order), other._dense(lo, order))]
            return Series(vals, lo, order, self.var)
        if _is_scalar(other):
            if other == 0 or self.order < 0:
                return self
            lo = min(self.start, 0)
            vals = self._dense(lo, self.order)
            vals[-lo] += other
            return Series(vals, lo, self.order, self.var)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Series) or _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Series):
            self._check_var(other)
            start = self.start + other.start
            order = min(self.order + other.start, other.order + self.start)
            n = order - start + 1
            if n <= 0 or not self.coeffs or not other.coeffs:
                return Series([], start, order, self.var)
            out = [mpq(0)] * n
            a, b = self.coeffs, other.coeffs
            for i, ai in enumerate(a[:n]):
                for j in range(min(len(b), n - i)):
                    out[i + j] += ai * b[j]
            return Series(out, start, order, self.var)
        if _is_scalar(other):
            return Series([c * other for c in self.coeffs], self.start, self.order, self.var)
        return NotImplemented

    __rmul__ = __mul__

    def invert(self) -> "Series":
        """Multiplicative inverse; requires a known nonzero lowest coefficient."""
        if not self.coeffs:
            raise SeriesWindowError(
                f"cannot invert series with no known nonzero coefficient (known through "
                f"{self.var}^{self.order})"
            )
        v = self.start
        order = self.order - 2 * v
        n = order + v + 1
        a = self._dense(v, v + max(n, 1) - 1)
        inv0 = 1 / a[0]
        b = [inv0]
        for m in range(1, n):
            acc = mpq(0)
            for k in range(1, m + 1):
                if k < len(a):
                    acc += a[k] * b[m - k]
            b.append(-acc * inv0)
        return Series(b, -v, order, self.var)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.invert()
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("series divided by zero")
            return self * (1 / mpq(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return self.invert() * other
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, Integral):
            return NotImplemented
        e = int(exponent)
        if e < 0:
            return self.invert() ** (-e)
        if e == 0:
            return mpq(1)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        """Equality of all coefficients known on both sides."""
        if _is_scalar(other):
            other = Series.constant(other, self.order, self.var)
        if not isinstance(other, Series):
            return NotImplemented
        if other.var != self.var:
            return False
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = [f"({c})*{self.var}^{self.start + i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}^{self.order + 1})"


def series_point(value, min_degree: int = -2, order: int = 2, var: str = "eps") -> Series:
    """The series ``value + eps`` known through degree ``order``.

    ``min_degree`` is the lower edge of the caller's window; it must admit the
    linear term.
    """
    if order < min_degree:
        raise ValueError("order must be >= min_degree")
    if min_degree > 1 or order < 1:
        raise ValueError("window must contain degrees 0 and 1")
    return Series([value, 1], 0, order, var)


def series_coeff(s, k: int) -> Rat:
    """Exact coefficient of degree ``k``.

    Plain scalars are exact constants.  Degrees above the truncation order
    raise :class:`SeriesWindowError`; degrees below the valuation are zero.
    """
    if isinstance(s, Series):
        return s.coeff(k)
    return mpq(s) if k == 0 else mpq(0)


# ---------------------------------------------------------------------------
# tensor operators


def _zeros(dim: int) -> np.ndarray:
    out = np.empty((dim, dim), dtype=object)
    out.fill(mpq(0))
    return out


class TensorOperator:
    """Dense linear operator on (C^n)^{⊗slots} with exact entries.

    ``op @ other`` is the operator product, ``c * op`` scalar scaling,
    ``a.tensor(b)`` the Kronecker product with ``a`` on the leading slots.
    """

    __slots__ = ("n", "slots", "data")

    def __init__(self, n: int, slots: int, data):
        if n < 1 or slots < 1:
            raise ValueError("n and slots must be positive")
        data = np.asarray(data, dtype=object)
        dim = n**slots
        if data.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} entries, got {data.shape}")
        self.n = n
        self.slots = slots
        self.data = data

    @property
    def dim(self) -> int:
        return self.n**self.slots

    @classmethod
    def zeros(cls, n: int, slots: int = 1) -> "TensorOperator":
        return cls(n, slots, _zeros(n**slots))

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int], object]) -> "TensorOperator":
        """Single-slot operator with 1-based entries ``fn(i, j)``."""
        data = _zeros(n)
        for i in range(n):
            for j in range(n):
                data[i, j] = fn(i + 1, j + 1)
        return cls(n, 1, data)

    @classmethod
    def diag(cls, values: Sequence) -> "TensorOperator":
        n = len(values)
        data = _zeros(n)
        for i, v in enumerate(values):
            data[i, i] = v
        return cls(n, 1, data)

    def _same_space(self, other: "TensorOperator") -> None:
        if (self.n, self.slots) != (other.n, other.slots):
            raise ValueError(
                f"operators act on different spaces: N={self.n},k={self.slots} vs "
                f"N={other.n},k={other.slots}"
            )

    def __matmul__(self, other: "TensorOperator") -> "TensorOperator":
        self._same_space(other)
        return TensorOperator(self.n, self.slots, self.data @ other.data)

    def __add__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        self._same_space(other)
        return TensorOperator(self.n, self.slots, self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        self._same_space(other)
        return TensorOperator(self.n, self.slots, self.data - other.data)

    def __neg__(self) -> "TensorOperator":
        return TensorOperator(self.n, self.slots, -self.data)

    def __mul__(self, scalar):
        if isinstance(scalar, TensorOperator):
            return NotImplemented
        if isinstance(scalar, float):
            raise TypeError("floating-point scalars are not exact")
        return TensorOperator(self.n, self.slots, self.data * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Integral):
            scalar = mpq(scalar)
        return self * (1 / scalar)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorOperator):
            return NotImplemented
        if (self.n, self.slots) != (other.n, other.slots):
            return False
        return all(a == b for a, b in zip(self.data.flat, other.data.flat))

    __hash__ = None  # type: ignore[assignment]

    def __getitem__(self, idx):
        return self.data[idx]

    def entry(self, row: Sequence[int], col: Sequence[int]):
        """Entry addressed by 1-based per-slot basis indices."""
        return self.data[self._flat(row), self._flat(col)]

    def _flat(self, digits: Sequence[int]) -> int:
        if len(digits) != self.slots:
            raise ValueError("one index per slot required")
        out = 0
        for d in digits:
            out = out * self.n + (d - 1)
        return out

    def tensor(self, other: "TensorOperator") -> "TensorOperator":
        if self.n != other.n:
            raise ValueError("local dimensions differ")
        data = np.multiply.outer(self.data, other.data)
        data = data.transpose(0, 2, 1, 3).reshape(self.dim * other.dim, self.dim * other.dim)
        return TensorOperator(self.n, self.slots + other.slots, data)

    def map(self, fn: Callable) -> "TensorOperator":
        out = np.empty(self.data.shape, dtype=object)
        for idx, v in np.ndenumerate(self.data):
            out[idx] = fn(v)
        return TensorOperator(self.n, self.slots, out)

    def coeff(self, k: int) -> "TensorOperator":
        """Entrywise Laurent coefficient of degree ``k``."""
        return self.map(lambda v: series_coeff(v, k))

    def transposed(self) -> "TensorOperator":
        return TensorOperator(self.n, self.slots, self.data.T.copy())

    def trace(self):
        total = mpq(0)
        for i in range(self.dim):
            total = total + self.data[i, i]
        return total

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.data.flat)

    def max_discrepancy(self, other: "TensorOperator") -> Rat:
        """Largest absolute entrywise difference (Rat entries only)."""
        self._same_space(other)
        diff = [abs(mpq(a - b)) for a, b in zip(self.data.flat, other.data.flat)]
        return max(diff, default=mpq(0))

    def rank(self) -> int:
        """Exact rank by fraction-free elimination over Rat."""
        m = [[mpq(v) for v in row] for row in self.data.tolist()]
        rows, cols = len(m), len(m[0])
        r = 0
        for c in range(cols):
            piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            for i in range(r + 1, rows):
                if m[i][c] != 0:
                    f = m[i][c] / m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            r += 1
        return r

    def inverse(self) -> "TensorOperator":
        """Gauss-Jordan inverse; raises ZeroDivisionError when singular."""
        dim = self.dim
        m = [list(row) + [1 if i == j else 0 for j in range(dim)] for i, row in enumerate(self.data.tolist())]
        for c in range(dim):
            piv = next((i for i in range(c, dim) if not _vanishes(m[i][c])), None)
            if piv is None:
                raise ZeroDivisionError("singular operator")
            m[c], m[piv] = m[piv], m[c]
            inv = 1 / m[c][c]
            m[c] = [v * inv for v in m[c]]
            for i in range(dim):
                if i != c and not _vanishes(m[i][c]):
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        data = np.array([row[dim:] for row in m], dtype=object)
        return TensorOperator(self.n, self.slots, data)

    def tolist(self) -> list:
        return self.data.tolist()

    def __repr__(self) -> str:
        return f"TensorOperator(n={self.n}, slots={self.slots})"


def _vanishes(v) -> bool:
    if isinstance(v, Series):
        return v.is_zero()
    return v == 0


def basis_matrix(n: int, i: int, j: int) -> TensorOperator:
    """Matrix unit E_ij (1-based)."""
    data = _zeros(n)
    data[i - 1, j - 1] = 1
    return TensorOperator(n, 1, data)


def identity(n: int, slots: int = 1) -> TensorOperator:
    dim = n**slots
    data = _zeros(dim)
    for i in range(dim):
        data[i, i] = mpq(1)
    return TensorOperator(n, slots, data)


def embed(op: TensorOperator, target_slots: Sequence[int], total_slots: int) -> TensorOperator:
    """Place ``op`` on ``target_slots`` (1-based, in op's slot order) of a
    ``total_slots``-fold tensor power, acting as identity elsewhere."""
    targets = tuple(target_slots)
    n, m, k = op.n, op.slots, total_slots
    if len(targets) != m:
        raise ValueError(f"operator has {m} slots but {len(targets)} targets were given")
    if len(set(targets)) != m:
        raise ValueError(f"duplicate target slots {targets}")
    if any(not 1 <= s <= k for s in targets):
        raise ValueError(f"target slots {targets} out of range 1..{k}")
    # reorder op's tensor axes so its slots appear in increasing target order
    order = sorted(range(m), key=lambda t: targets[t])
    src = op.data.reshape((n,) * (2 * m))
    src = src.transpose(order + [m + t for t in order])
    sorted_targets = [targets[t] - 1 for t in order]
    rest = [s for s in range(k) if s not in sorted_targets]
    out = np.empty((n,) * (2 * k), dtype=object)
    out.fill(0)
    for e in itertools.product(range(n), repeat=len(rest)):
        idx: list = [slice(None)] * (2 * k)
        for axis, val in zip(rest, e):
            idx[axis] = val
            idx[k + axis] = val
        out[tuple(idx)] = src
    return TensorOperator(n, k, out.reshape(n**k, n**k))


def permutation(n: int, a: int = 1, b: int = 2, total_slots: int = 2) -> TensorOperator:
    """The operator swapping the basis indices of slots ``a`` and ``b``."""
    if a == b:
        raise ValueError("permutation needs two distinct slots")
    swap = _zeros(n * n)
    for i in range(n):
        for j in range(n):
            swap[i * n + j, j * n + i] = 1
    return embed(TensorOperator(n, 2, swap), (a, b), total_slots)


def partial_trace(op: TensorOperator, slot: int) -> TensorOperator:
    """Trace over one slot (1-based)."""
    n, k = op.n, op.slots
    if k < 2:
        raise ValueError("partial trace needs at least two slots")
    if not 1 <= slot <= k:
        raise ValueError(f"slot {slot} out of range")
    t = op.data.reshape((n,) * (2 * k))
    s = slot - 1
    acc = None
    for i in range(n):
        idx: list = [slice(None)] * (2 * k)
        idx[s] = i
        idx[k + s] = i
        part = t[tuple(idx)]
        acc = part.copy() if acc is None else acc + part
    dim = n ** (k - 1)
    return TensorOperator(n, k - 1, acc.reshape(dim, dim))


def operator_sum(ops: Iterable[TensorOperator]) -> TensorOperator:
    ops = iter(ops)
    total = next(ops)
    for op in ops:
        total = total + op
    return total
