"""Truncated power series k_E[[u]]/(u^N) and matrices over them.

All values are immutable after construction.  Binary operations carry precision
min(N_lhs, N_rhs); the Frobenius substitution phi fixes k_E coefficients and
sends u to u^p, silently truncating at precision (flagged on the result).
"""

from __future__ import annotations

import math

import numpy as np

from ._kernels import series_mul
from .errors import NotAUnit, NotInvertible
from .gf import GF, FieldElem

INF = math.inf


def _red_rows_array(field: GF) -> np.ndarray:
    m = field.m
    if m == 1:
        return np.zeros((0, 1), dtype=np.int64)
    return np.array(field.red_rows, dtype=np.int64).reshape(m - 1, m)


class TruncSeries:
    """Element of k_E[[u]] known modulo u^precision."""

    __slots__ = ("field", "coeffs", "precision", "truncated")

    def __init__(self, field: GF, coeffs: np.ndarray, truncated: bool = False):
        coeffs = np.ascontiguousarray(coeffs, dtype=np.int64) % field.p
        if coeffs.ndim != 2 or coeffs.shape[1] != field.m or coeffs.shape[0] < 1:
            raise ValueError("coeffs must have shape (N, m) with N >= 1")
        coeffs.flags.writeable = False
        self.field = field
        self.coeffs = coeffs
        self.precision = coeffs.shape[0]
        self.truncated = truncated

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: GF, n: int) -> "TruncSeries":
        return cls(field, np.zeros((n, field.m), dtype=np.int64))

    @classmethod
    def one(cls, field: GF, n: int) -> "TruncSeries":
        return cls.monomial(field, 0, n)

    @classmethod
    def monomial(cls, field: GF, k: int, n: int, coeff=None) -> "TruncSeries":
        arr = np.zeros((n, field.m), dtype=np.int64)
        if k >= n:
            raise ValueError(f"monomial exponent {k} >= precision {n}")
        if coeff is None:
            coeff = field.one
        arr[k] = np.array(coeff.coeffs if isinstance(coeff, FieldElem) else field.elem(coeff).coeffs)
        return cls(field, arr)

    @classmethod
    def from_list(cls, field: GF, items, n: int) -> "TruncSeries":
        arr = np.zeros((n, field.m), dtype=np.int64)
        for k, item in enumerate(items):
            if k >= n:
                break
            e = item if isinstance(item, FieldElem) else field.elem(item)
            arr[k] = np.array(e.coeffs)
        return cls(field, arr)

    @classmethod
    def constant(cls, field: GF, c, n: int) -> "TruncSeries":
        return cls.from_list(field, [c], n)

    # -- inspection ---------------------------------------------------------

    def __getitem__(self, k: int) -> FieldElem:
        if not 0 <= k < self.precision:
            raise IndexError(k)
        return FieldElem(self.field, tuple(int(c) for c in self.coeffs[k]))

    def constant_term(self) -> FieldElem:
        return self[0]

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def is_unit(self) -> bool:
        return bool(self.coeffs[0].any())

    def degree(self):
        """Largest exponent with a nonzero coefficient; -Infinity for 0."""
        nz = np.nonzero(self.coeffs.any(axis=1))[0]
        return int(nz[-1]) if len(nz) else -INF

    def u_valuation(self):
        nz = np.nonzero(self.coeffs.any(axis=1))[0]
        return int(nz[0]) if len(nz) else INF

    def divides_upow(self, k: int) -> bool:
        """Whether u^k divides this series; legal only for k < precision."""
        if k >= self.precision:
            raise ValueError(f"divisibility query u^{k} at precision {self.precision}")
        return not self.coeffs[:k].any()

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.field is other.field
            and self.precision == other.precision
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs.tobytes()))

    def __repr__(self):
        terms = []
        for k in range(self.precision):
            if self.coeffs[k].any():
                c = list(int(x) for x in self.coeffs[k])
                cs = str(c[0]) if self.field.m == 1 else str(c)
                terms.append(cs if k == 0 else (f"{cs}*u^{k}" if k > 1 or cs != "1" else "u"))
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(u^{self.precision})>"

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other: "TruncSeries"):
        if not isinstance(other, TruncSeries) or other.field is not self.field:
            raise TypeError("operands over different fields")
        n = min(self.precision, other.precision)
        return self.coeffs[:n], other.coeffs[:n], n

    def __add__(self, other):
        a, b, n = self._align(other)
        return TruncSeries(self.field, (a + b) % self.field.p)

    def __sub__(self, other):
        a, b, n = self._align(other)
        return TruncSeries(self.field, (a - b) % self.field.p)

    def __neg__(self):
        return TruncSeries(self.field, (-self.coeffs) % self.field.p)

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            return self.scale(other)
        a, b, n = self._align(other)
        out = series_mul(a, b, n, self.field.p, _red_rows_array(self.field))
        return TruncSeries(self.field, out)

    def scale(self, c: FieldElem) -> "TruncSeries":
        arr = np.zeros((1, self.field.m), dtype=np.int64)
        arr[0] = np.array(c.coeffs)
        out = series_mul(self.coeffs, arr, self.precision, self.field.p, _red_rows_array(self.field))
        return TruncSeries(self.field, out)

    def truncate(self, n: int) -> "TruncSeries":
        if n > self.precision:
            raise ValueError("cannot raise precision")
        return TruncSeries(self.field, self.coeffs[:n].copy())

    def mul_upow(self, k: int) -> "TruncSeries":
        """Multiply by u^k, keeping the same precision."""
        arr = np.zeros_like(self.coeffs)
        if k < self.precision:
            arr[k:] = self.coeffs[: self.precision - k]
        return TruncSeries(self.field, arr)

    def div_upow(self, k: int) -> "TruncSeries":
        """Exact division by u^k; precision drops to N - k."""
        if k == 0:
            return self
        if k >= self.precision:
            raise ValueError("division exponent exceeds precision")
        if self.coeffs[:k].any():
            raise ValueError(f"series not divisible by u^{k}")
        return TruncSeries(self.field, self.coeffs[k:].copy())

    def invert(self) -> "TruncSeries":
        """Multiplicative inverse of a unit series, exact at full precision."""
        if not self.is_unit():
            raise NotAUnit("constant term is zero")
        n = self.precision
        a = [self[k] for k in range(n)]
        inv0 = a[0].inverse()
        g = [inv0]
        zero = self.field.zero
        for k in range(1, n):
            acc = zero
            for i in range(1, k + 1):
                acc = acc + a[i] * g[k - i]
            g.append(-(inv0 * acc))
        return TruncSeries.from_list(self.field, g, n)

    def phi(self, p: int | None = None) -> "TruncSeries":
        """Frobenius substitution u -> u^p; k_E coefficients are fixed."""
        p = p if p is not None else self.field.p
        n = self.precision
        arr = np.zeros_like(self.coeffs)
        lost = False
        for k in range(n):
            if self.coeffs[k].any():
                if p * k < n:
                    arr[p * k] = self.coeffs[k]
                else:
                    lost = True
        return TruncSeries(self.field, arr, truncated=lost)

    def derivative(self) -> "TruncSeries":
        arr = np.zeros_like(self.coeffs)
        for k in range(1, self.precision):
            arr[k - 1] = (k * self.coeffs[k]) % self.field.p
        return TruncSeries(self.field, arr)


class SeriesMatrix:
    """d x d matrix of TruncSeries sharing one precision."""

    __slots__ = ("field", "dim", "precision", "entries", "truncated")

    def __init__(self, entries, truncated: bool = False):
        rows = tuple(tuple(row) for row in entries)
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ValueError("matrix must be square")
        field = rows[0][0].field
        n = min(e.precision for row in rows for e in row)
        rows = tuple(tuple(e.truncate(n) if e.precision > n else e for e in row) for row in rows)
        if any(e.field is not field for row in rows for e in row):
            raise TypeError("mixed fields in matrix")
        self.field = field
        self.dim = d
        self.precision = n
        self.entries = rows
        self.truncated = truncated

    @classmethod
    def identity(cls, field: GF, d: int, n: int) -> "SeriesMatrix":
        one = TruncSeries.one(field, n)
        zero = TruncSeries.zero(field, n)
        return cls([[one if i == j else zero for j in range(d)] for i in range(d)])

    @classmethod
    def zero(cls, field: GF, d: int, n: int) -> "SeriesMatrix":
        zero = TruncSeries.zero(field, n)
        return cls([[zero for _ in range(d)] for _ in range(d)])

    @classmethod
    def diagonal(cls, diag_entries) -> "SeriesMatrix":
        diag_entries = list(diag_entries)
        field = diag_entries[0].field
        n = min(e.precision for e in diag_entries)
        zero = TruncSeries.zero(field, n)
        d = len(diag_entries)
        return cls([[diag_entries[i] if i == j else zero for j in range(d)] for i in range(d)])

    @classmethod
    def u_diagonal(cls, field: GF, exponents, n: int) -> "SeriesMatrix":
        """diag(u^{r_1}, ..., u^{r_d})."""
        return cls.diagonal([TruncSeries.monomial(field, r, n) for r in exponents])

    @classmethod
    def from_const(cls, field: GF, rows, n: int) -> "SeriesMatrix":
        return cls(
            [[TruncSeries.constant(field, c, n) for c in row] for row in rows]
        )

    def entry(self, i: int, j: int) -> TruncSeries:
        return self.entries[i][j]

    def column(self, j: int):
        return [self.entries[i][j] for i in range(self.dim)]

    def const_matrix(self):
        return [[e.constant_term() for e in row] for row in self.entries]

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(e) for e in row] for row in self.entries])

    def truncate(self, n: int) -> "SeriesMatrix":
        return self.map(lambda e: e.truncate(n))

    def __add__(self, other):
        self._check(other)
        return SeriesMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        self._check(other)
        return SeriesMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __neg__(self):
        return self.map(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, SeriesMatrix):
            self._check(other)
            d = self.dim
            n = min(self.precision, other.precision)
            out = []
            for i in range(d):
                row = []
                for j in range(d):
                    acc = TruncSeries.zero(self.field, n)
                    for k in range(d):
                        a = self.entries[i][k]
                        b = other.entries[k][j]
                        if a.is_zero() or b.is_zero():
                            continue
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return SeriesMatrix(out)
        if isinstance(other, TruncSeries):
            return self.map(lambda e: e * other)
        if isinstance(other, FieldElem):
            return self.map(lambda e: e.scale(other))
        return NotImplemented

    def scale(self, c: FieldElem) -> "SeriesMatrix":
        return self.map(lambda e: e.scale(c))

    def __eq__(self, other):
        return (
            isinstance(other, SeriesMatrix)
            and self.dim == other.dim
            and self.precision == other.precision
            and all(
                a == b for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2)
            )
        )

    def __hash__(self):
        return hash(tuple(hash(e) for row in self.entries for e in row))

    def __repr__(self):
        return "SeriesMatrix([\n" + "\n".join("  " + repr(list(r)) for r in self.entries) + "\n])"

    def _check(self, other):
        if self.field is not other.field or self.dim != other.dim:
            raise TypeError("incompatible matrices")

    def is_invertible(self) -> bool:
        return _const_det(self.const_matrix(), self.field) != self.field.zero

    def is_upper_triangular(self) -> bool:
        return all(
            self.entries[i][j].is_zero() for i in range(self.dim) for j in range(i)
        )

    def invert(self) -> "SeriesMatrix":
        """Inverse via Gaussian elimination with unit-constant-term pivoting."""
        d, n = self.dim, self.precision
        a = [[self.entries[i][j] for j in range(d)] for i in range(d)]
        b = [
            [
                TruncSeries.one(self.field, n) if i == j else TruncSeries.zero(self.field, n)
                for j in range(d)
            ]
            for i in range(d)
        ]
        for col in range(d):
            piv = None
            for row in range(col, d):
                if a[row][col].is_unit():
                    piv = row
                    break
            if piv is None:
                raise NotInvertible("constant-term matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
            inv = a[col][col].invert()
            a[col] = [e * inv for e in a[col]]
            b[col] = [e * inv for e in b[col]]
            for row in range(d):
                if row != col and not a[row][col].is_zero():
                    t = a[row][col]
                    a[row] = [x - t * y for x, y in zip(a[row], a[col])]
                    b[row] = [x - t * y for x, y in zip(b[row], b[col])]
        return SeriesMatrix(b)

    def phi(self, p: int | None = None) -> "SeriesMatrix":
        ims = [[e.phi(p) for e in row] for row in self.entries]
        lost = any(e.truncated for row in ims for e in row)
        return SeriesMatrix(ims, truncated=lost)

    def det(self) -> TruncSeries:
        """Determinant by cofactor expansion (d <= 5 in practice)."""
        d = self.dim
        if d == 1:
            return self.entries[0][0]
        acc = TruncSeries.zero(self.field, self.precision)
        for j in range(d):
            e = self.entries[0][j]
            if e.is_zero():
                continue
            minor = SeriesMatrix(
                [
                    [self.entries[i][k] for k in range(d) if k != j]
                    for i in range(1, d)
                ]
            )
            term = e * minor.det()
            acc = acc + term if j % 2 == 0 else acc - term
        return acc


def _const_det(rows, field: GF) -> FieldElem:
    d = len(rows)
    if d == 1:
        return rows[0][0]
    acc = field.zero
    for j in range(d):
        if not rows[0][j]:
            continue
        minor = [[rows[i][k] for k in range(d) if k != j] for i in range(1, d)]
        term = rows[0][j] * _const_det(minor, field)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


# Spec-level operation aliases -------------------------------------------------

def series_invert(f: TruncSeries) -> TruncSeries:
    return f.invert()


def u_valuation(f: TruncSeries):
    return f.u_valuation()


def mat_invert(m: SeriesMatrix) -> SeriesMatrix:
    return m.invert()


def phi_substitute(m: SeriesMatrix, p: int | None = None) -> SeriesMatrix:
    return m.phi(p)
