"""Exact arithmetic over the coefficient field k_E = F_{p^m}.

p is an odd prime in normal use; F_2 is admitted (m = 1 only) because the
exhaustive canonical-form enumerations are stated over F_2.

Elements are represented by coefficient vectors of length m over F_p with respect
to a fixed monic irreducible modulus; the modulus table ships with the package for
p <= 13, m <= 3 (for m <= 3 irreducibility is equivalent to having no root, which
the test suite re-verifies).
"""

from __future__ import annotations

import functools
import itertools

from .errors import BadParameters

# Least monic irreducible polynomial of degree m over F_p, ascending coefficients
# (constant first, leading coefficient 1 included).
IRREDUCIBLE_TABLE = {
    (3, 2): (1, 0, 1),
    (3, 3): (1, 0, 2, 1),
    (5, 2): (1, 1, 1),
    (5, 3): (1, 0, 1, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (1, 0, 1, 1),
    (11, 2): (1, 0, 1),
    (11, 3): (1, 0, 4, 1),
    (13, 2): (1, 3, 1),
    (13, 3): (1, 0, 4, 1),
}

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


class FieldElem:
    """Immutable element of F_{p^m}, a coefficient vector in the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "GF", coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElem(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        p = self.field.p
        return FieldElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field._mul(self.coeffs, other.coeffs))

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field._inv(self.coeffs))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"FieldElem({self.field.p}^{self.field.m}, {list(self.coeffs)})"

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.field is not self.field:
            raise TypeError("operands belong to different fields")


class GF:
    """The field F_{p^m}; use the cached factory :func:`gf` to construct."""

    def __init__(self, p: int, m: int = 1):
        if p not in _SMALL_PRIMES:
            raise BadParameters(f"p must be an odd prime in {_SMALL_PRIMES}, got {p}")
        if m < 1 or m > 3:
            raise BadParameters(f"m must satisfy 1 <= m <= 3, got {m}")
        if p == 2 and m != 1:
            raise BadParameters("p = 2 is supported for m = 1 only")
        self.p = p
        self.m = m
        if m == 1:
            self.modulus = (0, 1)  # formally x; never used
        else:
            self.modulus = IRREDUCIBLE_TABLE[(p, m)]
        # Reduction rows: x^(m+k) expressed in the power basis, k = 0..m-2.
        self.red_rows = self._reduction_rows()
        self.zero = FieldElem(self, (0,) * m)
        self.one = FieldElem(self, (1,) + (0,) * (m - 1))
        self.order = p**m

    def _reduction_rows(self):
        p, m = self.p, self.m
        rows = []
        if m > 1:
            # x^m = -(a_0 + a_1 x + ... + a_{m-1} x^{m-1})
            cur = [(-c) % p for c in self.modulus[:m]]
            rows.append(tuple(cur))
            for _ in range(m - 2):
                nxt = [0] * m
                for i in range(m - 1):
                    nxt[i + 1] = cur[i]
                if cur[m - 1]:
                    top = rows[0]
                    for i in range(m):
                        nxt[i] = (nxt[i] + cur[m - 1] * top[i]) % p
                cur = nxt
                rows.append(tuple(cur))
        return tuple(rows)

    def elem(self, coeffs) -> FieldElem:
        if isinstance(coeffs, int):
            coeffs = (coeffs,) + (0,) * (self.m - 1)
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.m:
            raise ValueError(f"need {self.m} coordinates, got {len(coeffs)}")
        return FieldElem(self, coeffs)

    def elements(self):
        for tup in itertools.product(range(self.p), repeat=self.m):
            yield FieldElem(self, tup)

    def units(self):
        for e in self.elements():
            if e:
                yield e

    def random(self, rng) -> FieldElem:
        return FieldElem(self, tuple(rng.randrange(self.p) for _ in range(self.m)))

    def random_unit(self, rng) -> FieldElem:
        while True:
            e = self.random(rng)
            if e:
                return e

    def _mul(self, a: tuple, b: tuple) -> tuple:
        p, m = self.p, self.m
        if m == 1:
            return ((a[0] * b[0]) % p,)
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % p for c in conv[:m]]
        for k, row in enumerate(self.red_rows):
            c = conv[m + k] % p
            if c:
                for i in range(m):
                    out[i] = (out[i] + c * row[i]) % p
        return tuple(out)

    def _inv(self, a: tuple) -> tuple:
        if not any(a):
            raise ZeroDivisionError("inverse of zero in F_{p^m}")
        # a^(q-2) by square-and-multiply; fields here are tiny.
        result = self.one.coeffs
        base = a
        n = self.order - 2
        while n:
            if n & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            n >>= 1
        return result


@functools.cache
def gf(p: int, m: int = 1) -> GF:
    """Cached field factory; identity of the GF object doubles as field identity."""
    return GF(p, m)
