"""Shape theory for upper-triangular phi-matrices.

Predicates (DEG) and (P) on shaped matrices, allowable column procedures, the
two-factor shape factorization X = X1*X0 (with its extra-power variant), degree
normalization of phi-families, the full decomposition F = C*F1*F0, and the
block-linearity of extension classes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import (
    DivisibilityViolation,
    GapViolation,
    HypothesisViolation,
    IllegalStep,
    InputNotFactored,
    NotNormalizable,
    NotPropertyP,
    WitnessMismatch,
)
from .family import PhiFamily
from .gf import FieldElem, GF
from .series import SeriesMatrix, TruncSeries

# ---------------------------------------------------------------------------
# constant-matrix helpers over k_E

def _const_identity(field: GF, d: int):
    return [[field.one if i == j else field.zero for j in range(d)] for i in range(d)]


def _const_mul(a, b, field: GF):
    d = len(a)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            acc = field.zero
            for k in range(d):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _const_inverse(a, field: GF):
    d = len(a)
    m = [row[:] for row in a]
    inv = _const_identity(field, d)
    for col in range(d):
        piv = next((r for r in range(col, d) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        t = m[col][col].inverse()
        m[col] = [e * t for e in m[col]]
        inv[col] = [e * t for e in inv[col]]
        for r in range(d):
            if r != col and m[r][col]:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[col])]
                inv[r] = [x - c * y for x, y in zip(inv[r], inv[col])]
    return inv


def solve_field_linear(rows, rhs, nunknowns, field: GF):
    """Particular solution of a linear system over k_E (free variables 0).

    rows: list of coefficient lists; returns list of FieldElem or None.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(nunknowns):
        piv = next((r for r in range(rank, len(aug)) if aug[r][col]), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        t = aug[rank][col].inverse()
        aug[rank] = [e * t for e in aug[rank]]
        for r in range(len(aug)):
            if r != rank and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(aug)):
        if aug[r][nunknowns]:
            return None  # inconsistent
    sol = [field.zero] * nunknowns
    for r, col in enumerate(pivots):
        sol[col] = aug[r][nunknowns]
    return sol


# ---------------------------------------------------------------------------
# shaped matrices and predicates

@dataclass(frozen=True)
class ShapedMatrix:
    """Upper-triangular matrix with exact monomial diagonal u^{s_i}.

    Unit scalars are factored out into a separate constant diagonal by the
    callers, so the diagonal here is exactly u^{s_i}.  The s_i are distinct in
    every lemma hypothesis, but distinctness is checked by the operations that
    need it, not by the type (the DEG factor of a zero-gap factorization has
    repeated exponents).
    """

    x: SeriesMatrix
    s: tuple

    def __post_init__(self):
        d = self.x.dim
        if len(self.s) != d:
            raise ValueError("exponent vector length mismatch")
        if any(e < 0 for e in self.s):
            raise ValueError("exponents must be nonnegative")
        if not self.x.is_upper_triangular():
            raise ValueError("matrix must be upper triangular")
        n = self.x.precision
        for i in range(d):
            want = TruncSeries.monomial(self.x.field, self.s[i], n)
            if self.x.entries[i][i] != want:
                raise ValueError(f"diagonal entry {i} is not exactly u^{self.s[i]}")

    @property
    def dim(self):
        return self.x.dim

    @property
    def field(self):
        return self.x.field


@dataclass(frozen=True)
class AllowableStep:
    """Right multiplication by Id - c*E_{ij}; indices 1-based, legal iff s_i < s_j."""

    i: int
    j: int
    c: FieldElem


@dataclass(frozen=True)
class ShapeFactorization:
    x1: ShapedMatrix  # satisfies DEG, diagonal u^{delta_i}
    x0: ShapedMatrix  # satisfies P, diagonal u^{t_i}
    b: SeriesMatrix


def check_deg(m: ShapedMatrix) -> bool:
    """deg(x_{i,j}) < s_j for every strictly-upper entry."""
    d = m.dim
    for i in range(d):
        for j in range(i + 1, d):
            if m.x.entries[i][j].degree() >= m.s[j]:
                return False
    return True


def check_p(m: ShapedMatrix) -> bool:
    """x_{i,j} = u^{s_i}*y with y in k_E, and y = 0 whenever s_i > s_j."""
    d = m.dim
    for i in range(d):
        for j in range(i + 1, d):
            e = m.x.entries[i][j]
            if m.s[i] > m.s[j]:
                if not e.is_zero():
                    return False
                continue
            if e.is_zero():
                continue
            if e.u_valuation() != m.s[i] or e.degree() != m.s[i]:
                return False
    return True


def allowable_step(m: ShapedMatrix, step: AllowableStep) -> ShapedMatrix:
    i, j = step.i - 1, step.j - 1
    if not (0 <= i < j < m.dim):
        raise IllegalStep("need 1 <= i < j <= d")
    if m.s[i] >= m.s[j]:
        raise IllegalStep(f"s_{step.i} >= s_{step.j}")
    cols = [list(col) for col in zip(*m.x.entries)]
    newcol = [a - b.scale(step.c) for a, b in zip(cols[j], cols[i])]
    cols[j] = newcol
    rows = [list(r) for r in zip(*cols)]
    return ShapedMatrix(SeriesMatrix(rows), m.s)


def reduce_p_to_diagonal(m: ShapedMatrix) -> list[AllowableStep]:
    """Allowable steps carrying a P-matrix to its monomial diagonal."""
    if not check_p(m):
        raise NotPropertyP("input does not satisfy (P)")
    steps = []
    cur = m
    d = m.dim
    for j in range(1, d):
        for i in range(j - 1, -1, -1):
            e = cur.x.entries[i][j]
            if e.is_zero():
                continue
            y = e[m.s[i]]
            step = AllowableStep(i + 1, j + 1, y)
            cur = allowable_step(cur, step)
            steps.append(step)
    assert all(
        cur.x.entries[i][j].is_zero() for i in range(d) for j in range(i + 1, d)
    )
    return steps


# ---------------------------------------------------------------------------
# the two-factor shape factorization

def shape_factorize(
    m: ShapedMatrix,
    a: SeriesMatrix,
    t,
    deltas,
    gamma: int | None = None,
) -> ShapeFactorization:
    """Factor X = X1*X0 with X0 satisfying (P) and X1 satisfying (DEG).

    Diagonal exponents of X must be t_i + delta_i; the t_i are separated by
    more than delta = max(delta_i); A is constant (gamma None) or lies in
    GL_d(k_E + u^gamma k_E[[u]]) with gamma >= max t + max delta.  Also returns
    B with X0*A = B*diag(u^{t_i}) and B in GL_d(k_E + u^delta k_E[[u]]).

    The unipotent corrector is found by a per-column linear solve over k_E
    (complete: a solution is found whenever one exists) and every contract
    clause is verified on the result.
    """
    field, d, n = m.field, m.dim, m.x.precision
    t = list(t)
    deltas = list(deltas)
    if len(t) != d or len(deltas) != d:
        raise HypothesisViolation("exponent vectors must have length d")
    delta = max(deltas)
    for i in range(d):
        if m.s[i] != t[i] + deltas[i]:
            raise HypothesisViolation("diagonal exponents must be t_i + delta_i")
    for x1, x2 in itertools.combinations(range(d), 2):
        if abs(t[x1] - t[x2]) <= delta:
            raise GapViolation(f"|t_{x1 + 1} - t_{x2 + 1}| <= max delta")
    if not check_deg(m):
        raise HypothesisViolation("X does not satisfy (DEG)")

    # Split A into its constant part and the u^gamma tail.
    aconst = a.const_matrix()
    if gamma is None:
        for i in range(d):
            for j in range(d):
                if a.entries[i][j].degree() > 0:
                    raise HypothesisViolation("A must be constant when gamma is None")
        a2 = None
    else:
        if gamma < max(t) + delta:
            raise GapViolation("gamma < max t + max delta")
        a2rows = []
        for i in range(d):
            row = []
            for j in range(d):
                e = a.entries[i][j]
                tail = e - TruncSeries.constant(field, e.constant_term(), e.precision)
                if not tail.is_zero() and tail.u_valuation() < gamma:
                    raise HypothesisViolation(
                        "A has a term u^j with 0 < j < gamma"
                    )
                if gamma >= e.precision:
                    continue  # tail invisible at this precision
                row.append(tail.div_upow(gamma) if not tail.is_zero() else
                           TruncSeries.zero(field, e.precision - gamma))
            if row:
                a2rows.append(row)
        a2 = SeriesMatrix(a2rows) if len(a2rows) == d else None
    ainv = _const_inverse(aconst, field)
    if ainv is None:
        raise HypothesisViolation("constant part of A is singular")

    # Hypothesis: u^{t_i} divides column i of X*A1.
    xa = m.x * SeriesMatrix(
        [[TruncSeries.constant(field, c, n) for c in row] for row in aconst]
    )
    for j in range(d):
        for i in range(d):
            if t[j] and not xa.entries[i][j].divides_upow(min(t[j], n - 1)):
                raise DivisibilityViolation(
                    f"u^{t[j]} does not divide column {j + 1} of X*A"
                )

    # Solve for V (supported on t_l >= t_j) with Z = A1*V the corrector:
    # Z unipotent upper with support t_k < t_j, and X*Z*diag(u^{-t_j})
    # polynomial with (DEG).  All constraints are linear and decouple per
    # column of V.
    v = [[field.zero] * d for _ in range(d)]
    for j in range(d):
        unknowns = [l for l in range(d) if t[l] >= t[j]]
        idx = {l: q for q, l in enumerate(unknowns)}
        rows, rhs = [], []
        # (A1 V)_{rj} = 1 at r = j, 0 at r > j and at r < j with t_r > t_j
        for r in range(d):
            if r == j or r > j or t[r] > t[j]:
                rows.append([aconst[r][l] for l in unknowns])
                rhs.append(field.one if r == j else field.zero)
        # degree window of column j of X*A1*V: entry (i,j) is divisible by
        # u^{t_j}, has degree < t_j + delta_j off the diagonal, and equals
        # exactly u^{t_j + delta_j} on the diagonal.
        for i in range(j + 1):
            series = [xa.entries[i][l] for l in unknowns]
            for w in itertools.chain(range(t[j]), range(t[j] + deltas[j], n)):
                coeffs = [s_[w] for s_ in series]
                want = field.one if (i == j and w == t[j] + deltas[j]) else field.zero
                if any(coeffs) or want:
                    rows.append(coeffs)
                    rhs.append(want)
        sol = solve_field_linear(rows, rhs, len(unknowns), field)
        if sol is None:
            raise HypothesisViolation(
                f"no shape corrector exists for column {j + 1}"
            )
        for l in unknowns:
            v[l][j] = sol[idx[l]]

    z = _const_mul(aconst, v, field)
    vinv = _const_inverse(v, field)
    if vinv is None:
        raise HypothesisViolation("corrector is singular")

    # X1 = X * Z * diag(u^{-t_j}), column-exact division.
    zmat = SeriesMatrix(
        [[TruncSeries.constant(field, z[i][j], n) for j in range(d)] for i in range(d)]
    )
    xz = m.x * zmat
    n1 = n - max(t)
    x1rows = []
    for i in range(d):
        row = []
        for j in range(d):
            e = xz.entries[i][j]
            if t[j] and not e.divides_upow(t[j]):
                raise DivisibilityViolation("corrected column not divisible by u^{t_j}")
            row.append((e.div_upow(t[j]) if t[j] else e).truncate(n1))
        x1rows.append(row)
    x1 = ShapedMatrix(SeriesMatrix(x1rows), tuple(deltas))

    # X0 = diag(u^{t_i}) * Z^{-1},   B = diag(u^{t_i}) * V^{-1} * diag(u^{-t_j})
    zinv = _const_mul(vinv, ainv, field)
    x0rows, brows = [], []
    for i in range(d):
        xrow, brow = [], []
        for j in range(d):
            xrow.append(
                TruncSeries.monomial(field, t[i], n, zinv[i][j])
                if (zinv[i][j] and t[i] < n)
                else TruncSeries.zero(field, n)
            )
            if vinv[i][j] and t[i] >= t[j]:
                brow.append(TruncSeries.monomial(field, t[i] - t[j], n, vinv[i][j]))
            else:
                if vinv[i][j]:
                    raise HypothesisViolation("B would have a negative u-power")
                brow.append(TruncSeries.zero(field, n))
        x0rows.append(xrow)
        brows.append(brow)
    x0 = ShapedMatrix(SeriesMatrix(x0rows), tuple(t))
    b = SeriesMatrix(brows)

    if gamma is not None and a2 is not None:
        # B += X0 * A2 * diag(u^{gamma - t_j}); exponents at or beyond the
        # working precision contribute nothing there.
        extra = x0.x.truncate(a2.precision) * a2
        nex = extra.precision
        gshift = SeriesMatrix.diagonal(
            [
                TruncSeries.monomial(field, gamma - tj, nex)
                if gamma - tj < nex
                else TruncSeries.zero(field, nex)
                for tj in t
            ]
        )
        b = b.truncate(nex) + extra * gshift

    _verify_factorization(m, a, x1, x0, b, t, delta)
    return ShapeFactorization(x1=x1, x0=x0, b=b)


def _verify_factorization(m, a, x1, x0, b, t, delta):
    field = m.field
    nver = min(x1.x.precision, b.precision, a.precision)
    recon = x1.x * x0.x
    if recon != m.x.truncate(recon.precision):
        raise HypothesisViolation("X1*X0 != X")
    if not check_deg(x1):
        raise HypothesisViolation("X1 fails (DEG)")
    if not check_p(x0):
        raise HypothesisViolation("X0 fails (P)")
    lhs = x0.x.truncate(nver) * a.truncate(nver)
    rhs = b.truncate(nver) * SeriesMatrix.u_diagonal(field, t, nver)
    if lhs != rhs:
        raise HypothesisViolation("X0*A != B*diag(u^t)")
    for row in b.entries:
        for e in row:
            if delta > 1 and e.coeffs[1:delta].any():
                raise HypothesisViolation("B entry outside k_E + u^delta k_E[[u]]")
    if not b.is_invertible():
        raise HypothesisViolation("B is not invertible")


# ---------------------------------------------------------------------------
# degree normalization of a phi-family

def normalize_to_deg(fam: PhiFamily):
    """Conjugate F_i -> T_i F_i phi(T_{i-1}^{-1}) into (DEG) form.

    Diagonal valuations must be <= p-2 and pairwise distinct per column index;
    the u-adic elimination then contracts.  Raises NotNormalizable when the
    iteration bound is exceeded.
    """
    mats = list(fam.matrices)
    f = len(mats)
    field = mats[0].field
    d = mats[0].dim
    p = field.p
    n = mats[0].precision
    tvals = []
    for fm in mats:
        if not fm.is_upper_triangular():
            raise HypothesisViolation("family must be upper triangular")
        col = []
        for x in range(d):
            v = fm.entries[x][x].u_valuation()
            if v == float("inf") or v > p - 2:
                raise HypothesisViolation("diagonal valuations must be <= p-2")
            col.append(v)
        if len(set(col)) != d:
            raise HypothesisViolation("diagonal valuations must be distinct")
        tvals.append(col)

    t_list = [SeriesMatrix.identity(field, d, n) for _ in range(f)]

    # Phase A: scale rows so every diagonal entry is exactly (const)*u^{t}.
    # Write the diagonal entry as c*u^t*w with w a 1-unit; the row scalers
    # tau_i solving tau_i * w_i = phi(tau_{i-1}) are found by fixed-point
    # iteration, which contracts u-adically because phi multiplies degrees
    # by p (the residual constant c cannot be removed and stays).
    passes = max(2, math.ceil(math.log(n, p))) + 2
    for x in range(d):
        units = []
        for i in range(f):
            e = mats[i].entries[x][x]
            c = e[tvals[i][x]]
            units.append(e.div_upow(tvals[i][x]).scale(c.inverse()))
        taus = [TruncSeries.one(field, units[i].precision) for i in range(f)]
        for _ in range(passes):
            for i in range(f):
                taus[i] = taus[i - 1].phi() * units[i].invert()
        scalers = []
        for i in range(f):
            nn = min(n, taus[i].precision)
            diag = [TruncSeries.one(field, nn) for _ in range(d)]
            diag[x] = taus[i].truncate(nn)
            scalers.append(SeriesMatrix.diagonal(diag))
        for i in range(f):
            t_list[i] = scalers[i] * t_list[i]
        mats = [
            scalers[i] * mats[i] * scalers[(i - 1) % f].invert().phi()
            for i in range(f)
        ]

    nwork = mats[0].precision
    for i in range(f):
        for x in range(d):
            cexp = tvals[i][x]
            c = mats[i].entries[x][x][cexp]
            want = TruncSeries.monomial(field, cexp, mats[i].precision, c)
            if mats[i].entries[x][x] != want:
                raise NotNormalizable("diagonal did not contract to a monomial")

    # Phase B: eliminate every upper-entry coefficient at degree >= t_{i,y}.
    # Scanning in (index, column, degree) order means a step never re-pollutes
    # anything earlier in the scan except through the phi-twist, which lands at
    # p times the step size; the budget covers log_p(N) contraction sweeps.
    budget = (math.ceil(math.log(max(nwork, p), p)) + 4) * max(1, f) * d * d * nwork
    count = 0
    while True:
        offense = None
        for i in range(f):
            for y in range(d):
                for w in range(tvals[i][y], nwork):
                    for x in range(y):
                        if mats[i].entries[x][y][w]:
                            offense = (i, x, y, w)
                            break
                    if offense:
                        break
                if offense:
                    break
            if offense:
                break
        if offense is None:
            break
        count += 1
        if count > budget:
            raise NotNormalizable("elimination bound exceeded")
        i, x, y, w = offense
        nstep = w - tvals[i][y]
        cy = mats[i].entries[y][y][tvals[i][y]]
        mu = -(mats[i].entries[x][y][w] / cy)
        e_plus = SeriesMatrix.identity(field, d, nwork)
        rows = [list(r) for r in e_plus.entries]
        rows[x][y] = TruncSeries.monomial(field, nstep, nwork, mu)
        e_plus = SeriesMatrix(rows)
        t_list[i] = e_plus * t_list[i]
        mats[i] = e_plus * mats[i]
        nxt = (i + 1) % f
        rows = [list(r) for r in SeriesMatrix.identity(field, d, nwork).entries]
        if p * nstep < nwork:
            rows[x][y] = TruncSeries.monomial(field, p * nstep, nwork, -mu)
        e_phi_inv = SeriesMatrix(rows)
        mats[nxt] = mats[nxt] * e_phi_inv

    normalized = PhiFamily(matrices=tuple(mats), witnesses=None, meta=dict(fam.meta))
    return t_list, normalized


# ---------------------------------------------------------------------------
# the full decomposition F_i = C_i * F1 * F0

@dataclass(frozen=True)
class PhiShapeFactor:
    c: SeriesMatrix  # constant diagonal
    f1: ShapedMatrix
    f0: ShapedMatrix
    sigma0: tuple
    sigma1: tuple


def _perm_matrix(field: GF, perm, n: int) -> SeriesMatrix:
    """W with W*diag(a)*W^{-1} = diag(a o perm) (perm 0-based)."""
    d = len(perm)
    rows = []
    for x in range(d):
        row = [TruncSeries.zero(field, n)] * d
        row[perm[x]] = TruncSeries.one(field, n)
        rows.append(row)
    return SeriesMatrix(rows)


def shape_decompose_phi(fam: PhiFamily, witnesses, weights) -> list[PhiShapeFactor]:
    """Per-index factorization F_i = C_i * F1 * F0 with both factors (P).

    Requires e = 2, the gap assumption r_{i,0,x+1} - r_{i,0,x} > r_{i,1,d} and
    the bound r_{i,0,d} + r_{i,1,d} <= p-2; the family must satisfy (DEG) and
    carry a consistent witness factorization.  Driver: conjugate the weight
    diagonal into sorted position, apply the extra-power factorization with
    gamma = p, then once more with gamma = r_{i,1,d} and zero gaps to certify
    that the DEG factor already satisfies (P).
    """
    from .kisin import diag_shape_verify  # local import to avoid a cycle

    if weights.e != 2:
        raise HypothesisViolation("decomposition requires e = 2")
    if not weights.check_a1():
        raise HypothesisViolation("gap assumption on the level-0 weights fails")
    if not weights.check_a2():
        raise HypothesisViolation("weight sum exceeds p-2")
    if witnesses is None:
        witnesses = fam.witnesses
    fam = PhiFamily(matrices=fam.matrices, witnesses=witnesses, meta=fam.meta)
    fam.check_witnesses()
    field = fam.matrices[0].field
    p = weights.p
    d = fam.dim
    n = fam.matrices[0].precision

    # Witness Lambdas must be the canonical monomial diagonals.
    for i in range(fam.f):
        for j, key in ((0, "Lambda0"), (1, "Lambda1")):
            want = SeriesMatrix.u_diagonal(field, weights.r[i][j], n)
            got = witnesses[key][i]
            if got != want.truncate(got.precision):
                raise WitnessMismatch(f"{key}[{i}] is not the weight diagonal")

    tvals = []
    for i, fmat in enumerate(fam.matrices):
        if not fmat.is_upper_triangular():
            raise HypothesisViolation("F must be upper triangular")
        tvals.append([fmat.entries[x][x].u_valuation() for x in range(d)])
    sigmas = diag_shape_verify(tvals, weights)
    if sigmas is None:
        raise HypothesisViolation("diagonal valuations do not match the weights")

    out = []
    for i, fmat in enumerate(fam.matrices):
        sigma0, sigma1 = sigmas[i]
        r0 = weights.r[i][0]
        r1 = weights.r[i][1]
        t_vec = [r0[sigma0[x] - 1] for x in range(d)]
        d_vec = [r1[sigma1[x] - 1] for x in range(d)]
        cvals = [fmat.entries[x][x][tvals[i][x]] for x in range(d)]
        cinv = SeriesMatrix.diagonal(
            [TruncSeries.constant(field, c.inverse(), n) for c in cvals]
        )
        cmat = SeriesMatrix.diagonal(
            [TruncSeries.constant(field, c, n) for c in cvals]
        )
        xmat = fmat * cinv
        try:
            xshaped = ShapedMatrix(xmat, tuple(tv + dv for tv, dv in zip(t_vec, d_vec)))
        except ValueError as exc:
            raise HypothesisViolation(str(exc)) from exc
        w0 = _perm_matrix(field, [s - 1 for s in sigma0], n)
        s_inv = witnesses["S"][i].invert()
        a_full = cmat * s_inv * w0.invert()
        fact = shape_factorize(xshaped, a_full, t_vec, d_vec, gamma=p)
        f1, f0, b = fact.x1, fact.x0, fact.b

        # Second pass with zero gaps: certifies that F1 itself satisfies (P).
        w1 = _perm_matrix(field, [s - 1 for s in sigma1], b.precision)
        z1inv = witnesses["Z1"][i].invert()
        a_second = b * w0.truncate(b.precision) * z1inv.truncate(b.precision) * w1.invert()
        r1_top = r1[-1]
        second = shape_factorize(
            f1, a_second, d_vec, [0] * d, gamma=r1_top if r1_top > 0 else None
        )
        if not check_p(second.x0):
            raise HypothesisViolation("DEG factor fails (P)")

        # F = X1 X0 C = C (C^{-1} X1 C)(C^{-1} X0 C); conjugating by the
        # constant diagonal preserves the shapes and monomial diagonals.
        n1 = f1.x.precision
        f1c = ShapedMatrix(cinv.truncate(n1) * f1.x * cmat.truncate(n1), f1.s)
        n0 = f0.x.precision
        f0c = ShapedMatrix(cinv.truncate(n0) * f0.x * cmat.truncate(n0), f0.s)
        recon = cmat.truncate(n1) * f1c.x * f0c.x
        if recon != fmat.truncate(recon.precision):
            raise HypothesisViolation("C*F1*F0 != F")
        out.append(
            PhiShapeFactor(c=cmat, f1=f1c, f0=f0c, sigma0=sigma0, sigma1=sigma1)
        )
    return out


# ---------------------------------------------------------------------------
# block linearity of extension classes

def _rect(block):
    return [list(row) for row in block]


def _rect_mul_left(m: SeriesMatrix, block):
    """m (square, dim = rows of block) times a rectangular block."""
    rows, cols = len(block), len(block[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(rows):
                term = m.entries[i][k] * block[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def _rect_mul_right(block, m: SeriesMatrix):
    """A rectangular block times m (square, dim = cols of block)."""
    rows, cols = len(block), len(block[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(cols):
                term = block[i][k] * m.entries[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def _rect_comb(b1, b2, a: FieldElem, b: FieldElem):
    return [
        [x.scale(a) + y.scale(b) for x, y in zip(r1, r2)] for r1, r2 in zip(b1, b2)
    ]


def _rect_eq(b1, b2) -> bool:
    n = min(
        min(e.precision for row in b1 for e in row),
        min(e.precision for row in b2 for e in row),
    )
    return all(
        x.truncate(n) == y.truncate(n) for r1, r2 in zip(b1, b2) for x, y in zip(r1, r2)
    )


@dataclass(frozen=True)
class BlockFactorization:
    """[[A, C],[0, A']] = [[A1, C1],[0, A1']] * [[A0, C0],[0, A0']].

    The diagonal factors are square SeriesMatrix (sub and quotient sizes may
    differ); the C blocks are rectangular row-lists of TruncSeries.
    """

    a: SeriesMatrix
    aq: SeriesMatrix
    c: tuple
    a1: SeriesMatrix
    a0: SeriesMatrix
    aq1: SeriesMatrix
    aq0: SeriesMatrix
    c1: tuple
    c0: tuple

    def __post_init__(self):
        for name in ("c", "c1", "c0"):
            block = tuple(tuple(row) for row in getattr(self, name))
            if len(block) != self.a.dim or any(
                len(row) != self.aq.dim for row in block
            ):
                raise InputNotFactored(f"block {name} is not sub-dim x quot-dim")
            object.__setattr__(self, name, block)

    def verify(self) -> None:
        n = min(self.a.precision, self.a1.precision, self.a0.precision)
        if self.a.truncate(n) != self.a1.truncate(n) * self.a0.truncate(n):
            raise InputNotFactored("A != A1*A0")
        if self.aq.truncate(n) != self.aq1.truncate(n) * self.aq0.truncate(n):
            raise InputNotFactored("A' != A1'*A0'")
        lhs = _rect_mul_left(self.a1, _rect(self.c0))
        rhs = _rect_mul_right(_rect(self.c1), self.aq0)
        want = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
        if not _rect_eq(_rect(self.c), want):
            raise InputNotFactored("C != A1*C0 + C1*A0'")


def ext_block_sum(
    f1: BlockFactorization,
    f2: BlockFactorization,
    a: FieldElem,
    b: FieldElem,
) -> BlockFactorization:
    """The a,b-linear combination of two block factorizations sharing diagonals."""
    f1.verify()
    f2.verify()
    for attr in ("a", "aq", "a1", "a0", "aq1", "aq0"):
        if getattr(f1, attr) != getattr(f2, attr):
            raise InputNotFactored(f"diagonal factor {attr} differs between inputs")
    comb = BlockFactorization(
        a=f1.a,
        aq=f1.aq,
        c=_rect_comb(f1.c, f2.c, a, b),
        a1=f1.a1,
        a0=f1.a0,
        aq1=f1.aq1,
        aq0=f1.aq0,
        c1=_rect_comb(f1.c1, f2.c1, a, b),
        c0=_rect_comb(f1.c0, f2.c0, a, b),
    )
    comb.verify()
    return comb
