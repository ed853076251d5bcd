"""Tame local-field model: O_L = (Z/p^M)[x]/(x^e0 - p) with uniformizer w = x.

Valuations are normalized by v(w) = 1, so v(p) = e0.  Field elements are
w^(-s) * num with an explicit certified w-adic precision on num; dividing by an
element of valuation t costs ceil(t/e0) p-adic digits, which the precision flag
tracks so that every returned valuation is certified.
"""

from __future__ import annotations

import math

from .errors import BadParameters, NotAUnit, PrecisionExhausted

INF = math.inf

_PRIMES = (3, 5, 7, 11, 13)


class LocalRing:
    """Context object for (Z/p^M)[x]/(x^e0 - p)."""

    def __init__(self, p: int, M: int, e0: int):
        if p not in _PRIMES:
            raise BadParameters(f"p must be an odd prime in {_PRIMES}")
        if M < 1:
            raise BadParameters("M must be positive")
        if e0 < 1 or e0 % p == 0:
            raise BadParameters("need p coprime to e0 (tame model only)")
        if (p - 1) % e0 != 0:
            raise BadParameters(f"e0={e0} must divide p-1={p - 1}")
        self.p = p
        self.M = M
        self.e0 = e0
        self.pM = p**M
        self.full_prec = e0 * M

    def elem(self, coeffs) -> "LocalRingElem":
        if isinstance(coeffs, int):
            coeffs = (coeffs,) + (0,) * (self.e0 - 1)
        coeffs = tuple(int(c) % self.pM for c in coeffs)
        if len(coeffs) != self.e0:
            raise ValueError(f"need {self.e0} coordinates")
        return LocalRingElem(self, coeffs)

    @property
    def zero(self):
        return self.elem(0)

    @property
    def one(self):
        return self.elem(1)

    @property
    def w(self):
        """The uniformizer (the class of x)."""
        if self.e0 == 1:
            return self.elem(self.p)
        return LocalRingElem(self, (0, 1) + (0,) * (self.e0 - 2))

    def vp(self, c: int) -> int:
        """p-adic valuation of c in Z/p^M (M for the zero class)."""
        c %= self.pM
        if c == 0:
            return self.M
        v = 0
        while c % self.p == 0:
            c //= self.p
            v += 1
        return v


class LocalRingElem:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: LocalRing, coeffs: tuple):
        self.ring = ring
        self.coeffs = coeffs

    def __add__(self, other):
        r = self.ring
        return LocalRingElem(r, tuple((a + b) % r.pM for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        r = self.ring
        return LocalRingElem(r, tuple((a - b) % r.pM for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        r = self.ring
        return LocalRingElem(r, tuple((-a) % r.pM for a in self.coeffs))

    def __mul__(self, other):
        r = self.ring
        e0, pM = r.e0, r.pM
        conv = [0] * (2 * e0 - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    conv[i + j] += a * b
        out = list(conv[:e0])
        for k in range(e0, 2 * e0 - 1):
            out[k - e0] += r.p * conv[k]  # fold x^e0 -> p
        return LocalRingElem(r, tuple(c % pM for c in out))

    def __pow__(self, n: int):
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: int) -> "LocalRingElem":
        r = self.ring
        return LocalRingElem(r, tuple((a * c) % r.pM for a in self.coeffs))

    def mul_wpow(self, k: int) -> "LocalRingElem":
        out = self
        w = self.ring.w
        for _ in range(k):
            out = out * w
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LocalRingElem)
            and self.ring is other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"LocalRingElem{self.coeffs}"

    def valuation(self) -> int:
        """w-adic valuation, exact for nonzero classes; e0*M for the zero class.

        The candidate term valuations i + e0*vp(c_i) are pairwise distinct
        mod e0, so the minimum is the exact valuation.
        """
        r = self.ring
        best = r.full_prec
        for i, c in enumerate(self.coeffs):
            if c:
                best = min(best, i + r.e0 * r.vp(c))
        return best

    def unit_inverse(self) -> "LocalRingElem":
        """Inverse of a valuation-0 element by Newton iteration mod p^M."""
        r = self.ring
        if self.valuation() != 0:
            raise NotAUnit("element is not a unit of O_L")
        z = r.elem(pow(self.coeffs[0] % r.p, -1, r.p))
        two = r.elem(2)
        steps = max(1, math.ceil(math.log2(r.M))) + 1
        for _ in range(steps):
            z = z * (two - self * z)
        return z


class LocalFieldElem:
    """w^(-shift) * num, with num certified modulo w^prec."""

    __slots__ = ("ring", "shift", "num", "prec")

    def __init__(self, ring: LocalRing, shift: int, num: LocalRingElem, prec: int | None = None):
        if shift < 0:
            raise ValueError("shift must be nonnegative")
        self.ring = ring
        self.shift = shift
        self.num = num
        self.prec = ring.full_prec if prec is None else min(prec, ring.full_prec)

    @classmethod
    def from_ring(cls, x: LocalRingElem) -> "LocalFieldElem":
        return cls(x.ring, 0, x)

    @classmethod
    def from_int(cls, ring: LocalRing, c: int) -> "LocalFieldElem":
        return cls(ring, 0, ring.elem(c))

    def _align(self, other: "LocalFieldElem"):
        s = max(self.shift, other.shift)
        a = self.num.mul_wpow(s - self.shift)
        pa = min(self.prec + (s - self.shift), self.ring.full_prec)
        b = other.num.mul_wpow(s - other.shift)
        pb = min(other.prec + (s - other.shift), self.ring.full_prec)
        return s, a, pa, b, pb

    def __add__(self, other):
        s, a, pa, b, pb = self._align(other)
        return LocalFieldElem(self.ring, s, a + b, min(pa, pb))

    def __sub__(self, other):
        s, a, pa, b, pb = self._align(other)
        return LocalFieldElem(self.ring, s, a - b, min(pa, pb))

    def __neg__(self):
        return LocalFieldElem(self.ring, self.shift, -self.num, self.prec)

    def __mul__(self, other):
        if isinstance(other, LocalRingElem):
            other = LocalFieldElem.from_ring(other)
        return LocalFieldElem(
            self.ring,
            self.shift + other.shift,
            self.num * other.num,
            min(self.prec, other.prec),
        )

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LocalFieldElem.from_int(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "LocalFieldElem":
        r = self.ring
        t = self.num.valuation()
        if t >= self.prec:
            raise PrecisionExhausted("cannot certify a unit part for inversion")
        pad = (-t) % r.e0
        z = self.num.mul_wpow(pad)  # valuation t + pad = e0*k
        k = (t + pad) // r.e0
        pk = r.p**k
        unit_coeffs = []
        for c in z.coeffs:
            if c % pk != 0:
                raise PrecisionExhausted("inexact p-power division during inversion")
            unit_coeffs.append(c // pk)
        unit = r.elem(tuple(unit_coeffs))
        inv = unit.unit_inverse()
        # 1/self = w^shift * w^pad * unit^{-1} * w^{-e0 k}
        num = inv.mul_wpow(self.shift + pad)
        prec = min(self.prec, r.e0 * (r.M - k))
        return LocalFieldElem(r, r.e0 * k, num, prec)

    def __truediv__(self, other):
        if isinstance(other, LocalRingElem):
            other = LocalFieldElem.from_ring(other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        """Zero to certified precision."""
        return self.num.valuation() >= self.prec

    def __eq__(self, other):
        return isinstance(other, LocalFieldElem) and (self - other).is_zero()

    def __repr__(self):
        return f"LocalFieldElem(w^-{self.shift} * {self.num.coeffs}, prec={self.prec})"

    def valuation(self):
        """Certified w-adic valuation; Infinity for an exact zero."""
        t = self.num.valuation()
        if t >= self.prec:
            if self.prec == self.ring.full_prec and not self.num:
                return INF
            raise PrecisionExhausted(
                f"valuation >= certified precision {self.prec}; cannot decide"
            )
        return t - self.shift

    def valuation_lower_bound(self):
        """Certified lower bound: exact valuation, or prec - shift when the
        numerator vanishes to certified precision."""
        t = self.num.valuation()
        if t >= self.prec:
            if self.prec == self.ring.full_prec and not self.num:
                return INF
            return self.prec - self.shift
        return t - self.shift


def lf_valuation(x: LocalFieldElem):
    return x.valuation()


class LPolynomial:
    """Polynomial in u with LocalFieldElem coefficients (ascending)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: LocalRing, coeffs):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            coeffs = [LocalFieldElem.from_int(ring, 0)]
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def from_ints(cls, ring: LocalRing, ints) -> "LPolynomial":
        return cls(ring, [LocalFieldElem.from_int(ring, c) for c in ints])

    @classmethod
    def linear_root(cls, pi: LocalRingElem) -> "LPolynomial":
        """The polynomial u - pi."""
        r = pi.ring
        return cls(r, [LocalFieldElem.from_ring(-pi), LocalFieldElem.from_int(r, 1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = LocalFieldElem.from_int(self.ring, 0)
        a = self.coeffs + [zero] * (n - len(self.coeffs))
        b = other.coeffs + [zero] * (n - len(other.coeffs))
        return LPolynomial(self.ring, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return LPolynomial(self.ring, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (LocalFieldElem, LocalRingElem)):
            if isinstance(other, LocalRingElem):
                other = LocalFieldElem.from_ring(other)
            return LPolynomial(self.ring, [c * other for c in self.coeffs])
        zero = LocalFieldElem.from_int(self.ring, 0)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return LPolynomial(self.ring, out)

    def __pow__(self, n: int):
        result = LPolynomial.from_ints(self.ring, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, LPolynomial) and (self - other).is_zero()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def evaluate(self, pi) -> LocalFieldElem:
        if isinstance(pi, LocalRingElem):
            pi = LocalFieldElem.from_ring(pi)
        acc = LocalFieldElem.from_int(self.ring, 0)
        for c in reversed(self.coeffs):
            acc = acc * pi + c
        return acc

    def synth_div(self, pi: LocalRingElem):
        """Divide by (u - pi): returns (quotient, remainder)."""
        pif = LocalFieldElem.from_ring(pi)
        n = self.degree
        b = [None] * (n + 1)
        b[n] = self.coeffs[n]
        for k in range(n - 1, -1, -1):
            b[k] = self.coeffs[k] + pif * b[k + 1]
        remainder = b[0]
        quotient = LPolynomial(self.ring, b[1:]) if n >= 1 else LPolynomial.from_ints(self.ring, [0])
        return quotient, remainder

    def derivative(self) -> "LPolynomial":
        if self.degree == 0:
            return LPolynomial.from_ints(self.ring, [0])
        out = []
        for k in range(1, len(self.coeffs)):
            out.append(self.coeffs[k] * LocalFieldElem.from_int(self.ring, k))
        return LPolynomial(self.ring, out)


def eisenstein_roots(e0: int, p: int, M: int) -> list[LocalRingElem]:
    """Roots pi_j = zeta^j * w of u^e0 - p in O_L, zeta Hensel-lifted.

    zeta starts from the least residue of exact multiplicative order e0 mod p
    and is lifted to a root of z^e0 = 1 mod p^M by Newton iteration.
    """
    ring = LocalRing(p, M, e0)
    pM = ring.pM
    base = None
    for c in range(1, p):
        order, acc = 1, c % p
        while acc != 1:
            acc = (acc * c) % p
            order += 1
        if order == e0:
            base = c
            break
    if base is None:
        raise BadParameters(f"no element of order {e0} mod {p}")
    z = base
    for _ in range(max(1, math.ceil(math.log2(M))) + 1):
        fz = (pow(z, e0, pM) - 1) % pM
        dfz = (e0 * pow(z, e0 - 1, pM)) % pM
        z = (z - fz * pow(dfz, -1, pM)) % pM
    assert pow(z, e0, pM) == 1
    w = ring.w
    return [w.scale(pow(z, j, pM)) for j in range(e0)]


def expand_at(f: LPolynomial, pi: LocalRingElem) -> list[LocalFieldElem]:
    """Coefficients a_i with f = sum a_i (u - pi)^i, by iterated synthetic division."""
    out = []
    cur = f
    for _ in range(f.degree):
        cur, rem = cur.synth_div(pi)
        out.append(rem)
    out.append(cur.coeffs[0])
    return out


def check_property_b(f: LPolynomial, pi: LocalRingElem) -> bool:
    """v(a_i) >= -i for every coefficient of the (u - pi)-expansion.

    A certified lower bound >= -i suffices to accept; when the bound is below
    -i and the valuation is not exact, the query is genuinely undecidable at
    this precision and PrecisionExhausted propagates.
    """
    for i, a in enumerate(expand_at(f, pi)):
        if a.valuation_lower_bound() >= -i:
            continue
        if a.valuation() < -i:  # exact here, or raises PrecisionExhausted
            return False
    return True
