"""Polynomial-level correction machinery over the tame local-field model.

The monodromy operator N = -u d/du, the correction polynomial H with its
companions Q and G, the Property-A divisibility and Coe-2 valuation checks,
the Taylor-twist operator, and evaluation maps at the Eisenstein roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadParameters
from .localfield import (
    LocalFieldElem,
    LocalRingElem,
    LPolynomial,
    check_property_b,
)


def n_operator(f: LPolynomial) -> LPolynomial:
    """N(f) = -u * f'(u); in coefficients, (Nf)_k = -k f_k."""
    out = []
    for k, c in enumerate(f.coeffs):
        out.append(-(c * LocalFieldElem.from_int(f.ring, k)))
    return LPolynomial(f.ring, out)


@dataclass(frozen=True)
class HRecord:
    """H, G, Q at level j together with the data they were built from.

    Q = prod_{q<j} (u - pi_q)^{r_q}; G = Q / prod_{q<j} (pi_j - pi_q)^{r_q};
    H = (u - pi_j)/pi_j * prod_{q<j} (u - pi_q)^{m_q} / (pi_j - pi_q)^{m_q}
    with m_q = max(r_q, 1).  H vanishes at pi_0, ..., pi_j.
    """

    h: LPolynomial
    g: LPolynomial
    q: LPolynomial
    j: int
    pis: tuple
    rbars: tuple


def build_h(j: int, pis, rbars) -> HRecord:
    """Correction polynomial record at level j from roots and top exponents."""
    if j < 1:
        raise BadParameters("level index j must be at least 1")
    pis = tuple(pis)
    rbars = tuple(int(r) for r in rbars)
    if len(pis) <= j:
        raise BadParameters("need roots pi_0..pi_j")
    if len(rbars) < j:
        raise BadParameters("need exponents r_{q,d} for every q < j")
    if any(r < 0 for r in rbars):
        raise BadParameters("exponents must be nonnegative")
    ring = pis[0].ring
    pij = pis[j]

    one = LPolynomial.from_ints(ring, [1])
    qpoly = one
    hnum = LPolynomial.linear_root(pij)
    hden = LocalFieldElem.from_ring(pij)
    for qi in range(j):
        rq = rbars[qi]
        mq = max(rq, 1)
        lin = LPolynomial.linear_root(pis[qi])
        diff = LocalFieldElem.from_ring(pij - pis[qi])
        qpoly = qpoly * lin**rq
        hnum = hnum * lin**mq
        hden = hden * diff**mq
    h = hnum * hden.inverse()

    gden = LocalFieldElem.from_int(ring, 1)
    for qi in range(j):
        gden = gden * LocalFieldElem.from_ring(pij - pis[qi]) ** rbars[qi]
    g = qpoly * gden.inverse()
    return HRecord(h=h, g=g, q=qpoly, j=j, pis=pis, rbars=rbars[:j])


def check_property_a(rec: HRecord) -> bool:
    """(u - pi_j) divides N(H) + 1: zero remainder under synthetic division."""
    nh1 = n_operator(rec.h) + LPolynomial.from_ints(rec.h.ring, [1])
    _, rem = nh1.synth_div(rec.pis[rec.j])
    return rem.is_zero()


def coe2_witness(rec: HRecord, ell: int) -> LPolynomial:
    """The polynomial H^ell / (G * ell!), built from its factored form.

    Expanding both sides, H^ell/(G ell!) =
    (u-pi_j)^ell * prod_{q<j} (u-pi_q)^{ell*m_q - r_q}
    / (ell! * pi_j^ell * prod_{q<j} (pi_j - pi_q)^{ell*m_q - r_q}),
    which avoids dividing one expanded polynomial by another.
    """
    ring = rec.h.ring
    if not 1 <= ell < ring.p:
        raise BadParameters("need 1 <= ell < p")
    pij = rec.pis[rec.j]
    num = LPolynomial.linear_root(pij) ** ell
    den = LocalFieldElem.from_ring(pij) ** ell
    den = den * LocalFieldElem.from_int(ring, math.factorial(ell))
    for qi in range(rec.j):
        exp = ell * max(rec.rbars[qi], 1) - rec.rbars[qi]
        num = num * LPolynomial.linear_root(rec.pis[qi]) ** exp
        den = den * LocalFieldElem.from_ring(pij - rec.pis[qi]) ** exp
    return num * den.inverse()


def check_coe2(rec: HRecord, ell: int) -> bool:
    """H^ell/(G ell!) satisfies the valuation bound v(a_i) >= -i at pi_j."""
    return check_property_b(coe2_witness(rec, ell), rec.pis[rec.j])


def taylor_twist(fvec, rec: HRecord, n: int):
    """Coordinatewise twist sum_{ell<=n} H^ell N^ell(f) / ell!.

    The twist agrees with f at every root pi_q, q <= j, because H vanishes
    there.
    """
    fvec = list(fvec)
    ring = rec.h.ring
    if not 0 <= n < ring.p:
        raise BadParameters("need 0 <= n < p for invertible factorials")
    out = []
    for f in fvec:
        acc = f
        hpow = LPolynomial.from_ints(ring, [1])
        nf = f
        for ell in range(1, n + 1):
            hpow = hpow * rec.h
            nf = n_operator(nf)
            inv_fact = LocalFieldElem.from_int(ring, math.factorial(ell)).inverse()
            acc = acc + hpow * nf * inv_fact
        out.append(acc)
    return out


def evaluate_f_ij(f: LPolynomial, pi: LocalRingElem) -> LocalFieldElem:
    """Evaluation map f -> f(pi), exact Horner scheme."""
    return f.evaluate(pi)


def suggest_m(e0: int, p: int, rbars, lmax: int) -> int:
    """Working p-adic precision for a Coe-2 sweep at top twist lmax.

    The denominators reach w-valuation about lmax*(1 + sum max(r,1)); keeping
    that many digits plus slack on both sides of the certificate gives the
    bound below, floored at the default M = 8.
    """
    msum = sum(max(int(r), 1) for r in rbars)
    return max(8, (2 * lmax * (1 + msum) + 4 * p) // e0 + 4)
