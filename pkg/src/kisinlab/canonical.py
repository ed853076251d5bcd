"""Column canonical forms over k_E + u^Delta k_E[[u]] and the ordering lemmas.

Property Z of a matrix M, per column x: the topmost unit entry (k_x, x) is the
pivot, the entries above it are divisible by u^Delta, and the entries to the
right of the pivot in row k_x have zero constant part (exactly zero when
Delta = 0).  The orderings k are 1-based permutations, as in the statements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    EntryOutsideRing,
    GapViolation,
    HypothesisViolation,
    NotInvertible,
)
from .series import SeriesMatrix, TruncSeries


@dataclass(frozen=True)
class PropertyZCertificate:
    C: SeriesMatrix  # unipotent, constant entries
    ordering: tuple  # 1-based permutation (k_1, ..., k_d)
    M: SeriesMatrix  # A * C
    delta: int


def _entry_in_ring(e: TruncSeries, delta: int) -> bool:
    if delta <= 1:
        return True
    return not e.coeffs[1:delta].any()


def _tail_divisible(e: TruncSeries, delta: int) -> bool:
    """Entry lies in u^delta * k_E[[u]] (delta=0: entry is exactly zero)."""
    if delta == 0:
        return e.is_zero()
    return not e.coeffs[:delta].any()


def check_ring_membership(a: SeriesMatrix, delta: int) -> None:
    for row in a.entries:
        for e in row:
            if not _entry_in_ring(e, delta):
                raise EntryOutsideRing(
                    f"entry has a term u^j with 0 < j < {delta}"
                )


def check_property_z(m: SeriesMatrix, delta: int):
    """Return the witnessing 1-based ordering, or None on failure."""
    d = m.dim
    pivots = []
    for x in range(d):
        k = None
        for z in range(d):
            if m.entries[z][x].is_unit():
                k = z
                break
        if k is None:
            return None
        for z in range(k):
            if not _tail_divisible(m.entries[z][x], delta):
                return None
        for y in range(x + 1, d):
            if not _tail_divisible(m.entries[k][y], delta):
                return None
        pivots.append(k)
    if len(set(pivots)) != d:
        return None
    return tuple(k + 1 for k in pivots)


def property_z_canonicalize(a: SeriesMatrix, delta: int) -> PropertyZCertificate:
    """The unique unipotent constant C with A*C satisfying Property Z."""
    check_ring_membership(a, delta)
    if not a.is_invertible():
        raise NotInvertible("constant-term matrix is singular")
    field, d, n = a.field, a.dim, a.precision
    m = [[a.entries[i][j] for j in range(d)] for i in range(d)]
    c = [[field.one if i == j else field.zero for j in range(d)] for i in range(d)]
    pivots = []
    for x in range(d):
        # Clear the constant part of column x in every already-chosen pivot row,
        # in pivot order (the constraint system is triangular in that order).
        for z, kz in enumerate(pivots):
            piv = m[kz][z].constant_term()
            cc = m[kz][x].constant_term() * piv.inverse()
            if cc:
                for i in range(d):
                    m[i][x] = m[i][x] - m[i][z].scale(cc)
                for i in range(d):
                    c[i][x] = c[i][x] - c[i][z] * cc
        k = None
        for z in range(d):
            if m[z][x].is_unit():
                k = z
                break
        if k is None:
            raise NotInvertible("no unit pivot available; matrix not invertible")
        pivots.append(k)
    cmat = SeriesMatrix(
        [[TruncSeries.constant(field, c[i][j], n) for j in range(d)] for i in range(d)]
    )
    mmat = SeriesMatrix(m)
    ordering = tuple(k + 1 for k in pivots)
    verified = check_property_z(mmat, delta)
    if verified != ordering:
        raise HypothesisViolation("canonical form verification failed")
    return PropertyZCertificate(C=cmat, ordering=ordering, M=mmat, delta=delta)


def ordering_from_product(
    m1: SeriesMatrix,
    r,
    m4: SeriesMatrix,
    delta: int,
    m2_invertible: bool,
):
    """Ordering k with r_{k_x} <= t_x (equality when M2 is invertible).

    M1 must be upper triangular with diagonal valuations t_x; the caller asserts
    M1 = M2 * diag(u^r) * M4.  The conclusions are verified, not trusted.
    """
    r = list(r)
    d = m4.dim
    if len(r) != d or any(r[i] > r[i + 1] for i in range(d - 1)):
        raise HypothesisViolation("exponents r must be sorted ascending")
    if r and (r[0] < 0 or r[-1] > delta):
        raise HypothesisViolation("need 0 <= r_1 <= ... <= r_d <= Delta")
    if not m1.is_upper_triangular():
        raise HypothesisViolation("M1 must be upper triangular")
    t = []
    for x in range(d):
        tv = m1.entries[x][x].u_valuation()
        if tv == float("inf"):
            raise HypothesisViolation("M1 diagonal entry vanishes to precision")
        t.append(tv)
    cert = property_z_canonicalize(m4, delta)
    ordering = cert.ordering
    for x in range(d):
        if r[ordering[x] - 1] > t[x]:
            raise HypothesisViolation(
                f"r_k={r[ordering[x] - 1]} > t={t[x]} at column {x + 1}"
            )
    if m2_invertible:
        for x in range(d):
            if r[ordering[x] - 1] != t[x]:
                raise HypothesisViolation(
                    f"equality r_k = t fails at column {x + 1}"
                )
        if sum(r) != sum(t):
            raise HypothesisViolation("determinant valuation audit failed")
    return ordering


def q_factorize(r, m4: SeriesMatrix, delta: int, small_delta: int):
    """diag(u^r) * M4 * M7 = Q * diag(u^{r_{k_x}}) with Q in GL_d(k_E + u^d...).

    M7 is the Property-Z corrector of M4; requires the gap conditions
    r_{x+1} - r_x >= small_delta and Delta - r_d >= small_delta.
    """
    r = list(r)
    d = m4.dim
    field, n = m4.field, m4.precision
    if any(r[i] > r[i + 1] for i in range(d - 1)) or r[0] < 0:
        raise GapViolation("exponents r must be sorted ascending and nonnegative")
    for x in range(d - 1):
        if r[x + 1] - r[x] < small_delta:
            raise GapViolation(f"gap r_{x + 2} - r_{x + 1} < delta")
    if delta - r[-1] < small_delta:
        raise GapViolation("Delta - r_d < delta")
    cert = property_z_canonicalize(m4, delta)
    m7, ordering = cert.C, cert.ordering
    g = SeriesMatrix.u_diagonal(field, r, n) * cert.M
    rk = [r[k - 1] for k in ordering]
    nq = n - max(rk) if rk else n
    qcols = []
    for x in range(d):
        col = []
        for i in range(d):
            e = g.entries[i][x]
            if rk[x] and not e.divides_upow(rk[x]):
                raise HypothesisViolation("column not divisible by u^{r_k}")
            col.append(e.div_upow(rk[x]).truncate(nq) if rk[x] else e.truncate(nq))
        qcols.append(col)
    q = SeriesMatrix([[qcols[x][i] for x in range(d)] for i in range(d)])
    for row in q.entries:
        for e in row:
            if small_delta > 1 and e.coeffs[1:small_delta].any():
                raise HypothesisViolation("Q entry outside k_E + u^delta k_E[[u]]")
    if not q.is_invertible():
        raise HypothesisViolation("Q is not invertible")
    recon = q * SeriesMatrix.u_diagonal(field, rk, nq)
    if recon != g.truncate(nq):
        raise HypothesisViolation("Q reconstruction failed")
    return m7, q, ordering
