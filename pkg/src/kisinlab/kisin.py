"""Weight data, rank-1 modules, phi-family generators and shape verifiers.

HTWeights carries the labelled weight grid with its ordering and sum
predicates; rank-1 modules exist at the integral level (RankOneO) and their
reduction (RankOneBar).  Generators produce seeded phi-families in adapted or
planted-triangular form; diag_shape_verify recovers the permutation pair
realizing a diagonal-valuation profile, and check_e_phi_shape decides
membership in the C*F1*F0 shape class.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .errors import (
    BadParameters,
    DimensionMismatch,
    HypothesisViolation,
    SearchSpaceTooLarge,
)
from .family import WITNESS_KEYS, PhiFamily, phi_conjugate  # noqa: F401  (re-exported)
from .gf import GF, FieldElem
from .series import SeriesMatrix, TruncSeries
from .shape import ShapedMatrix, _const_inverse, check_p


@dataclass(frozen=True)
class HTWeights:
    """Labelled weight grid r[i][j] = (r_{i,j,1}, ..., r_{i,j,d}).

    Each row is strictly increasing, starts at 0 and is bounded by p.
    """

    p: int
    f: int
    e: int
    d: int
    r: tuple

    def __post_init__(self):
        if self.f < 1 or self.e < 1 or self.d < 1:
            raise BadParameters("f, e, d must be positive")
        if len(self.r) != self.f or any(len(ri) != self.e for ri in self.r):
            raise BadParameters("weight grid must be f x e")
        norm = []
        for ri in self.r:
            cols = []
            for rij in ri:
                rij = tuple(int(x) for x in rij)
                if len(rij) != self.d:
                    raise BadParameters("each weight row must have d entries")
                if rij[0] != 0:
                    raise BadParameters("weight rows must start at 0")
                if any(rij[x] >= rij[x + 1] for x in range(self.d - 1)):
                    raise BadParameters("weight rows must be strictly increasing")
                if rij[-1] > self.p:
                    raise BadParameters("weights must be bounded by p")
                cols.append(rij)
            norm.append(tuple(cols))
        object.__setattr__(self, "r", tuple(norm))

    def check_a0(self) -> bool:
        """Sum over levels of the top weight is at most p, per index."""
        return all(sum(ri[j][-1] for j in range(self.e)) <= self.p for ri in self.r)

    def check_a1(self) -> bool:
        """Level-0 gaps strictly exceed the level-1 top weight (e = 2)."""
        if self.e != 2:
            return False
        return all(
            ri[0][x + 1] - ri[0][x] > ri[1][-1]
            for ri in self.r
            for x in range(self.d - 1)
        )

    def check_a2(self) -> bool:
        """r_{i,0,d} + r_{i,1,d} <= p - 2 per index (e = 2)."""
        if self.e != 2:
            return False
        return all(ri[0][-1] + ri[1][-1] <= self.p - 2 for ri in self.r)

    def check_serre_type(self) -> bool:
        """Every level j != 0 carries the minimal weights (0, 1, ..., d-1)."""
        want = tuple(range(self.d))
        return all(ri[j] == want for ri in self.r for j in range(1, self.e))


@dataclass(frozen=True)
class RankOneBar:
    """Rank-1 module over k_E: phi(e_{i-1}) = (a)_i u^{t_i} e_i, (a)_0 = a."""

    t: tuple
    a: FieldElem

    def __post_init__(self):
        if any(ti < 0 for ti in self.t):
            raise BadParameters("twists must be nonnegative")
        if not self.a:
            raise BadParameters("a must be nonzero")


@dataclass(frozen=True)
class RankOneO:
    """Integral rank-1 module: phi(e_{i-1}) = (a)_i prod_j (u - pi_{ij})^{r_{i,j}} e_i."""

    rmatrix: tuple  # f x e grid of nonnegative integers
    ahat: object  # unit of the integral coefficient ring (or a plain integer)

    def __post_init__(self):
        grid = tuple(tuple(int(x) for x in row) for row in self.rmatrix)
        if not grid or any(len(row) != len(grid[0]) for row in grid):
            raise BadParameters("rmatrix must be rectangular and nonempty")
        if any(x < 0 for row in grid for x in row):
            raise BadParameters("rmatrix entries must be nonnegative")
        object.__setattr__(self, "rmatrix", grid)


def rank1_reduce(m: RankOneO, field: GF) -> RankOneBar:
    """Reduction of an integral rank-1 module: t_i is the row sum of r_{i,j}."""
    t = tuple(sum(row) for row in m.rmatrix)
    ahat = m.ahat
    if hasattr(ahat, "coeffs"):  # integral ring element: constant coeff mod p
        a = field.elem(int(ahat.coeffs[0]))
    else:
        a = ahat if isinstance(ahat, FieldElem) else field.elem(int(ahat))
    return RankOneBar(t=t, a=a)


# ---------------------------------------------------------------------------
# seeded generators

def _random_const_invertible(field: GF, d: int, rng) -> list:
    while True:
        rows = [[field.random(rng) for _ in range(d)] for _ in range(d)]
        if _const_inverse(rows, field) is not None:
            return rows


def _random_upper_const(field: GF, d: int, rng, unit_diag: bool = False) -> list:
    rows = []
    for i in range(d):
        row = [field.zero] * i
        row.append(field.one if unit_diag else field.random_unit(rng))
        row.extend(field.random(rng) for _ in range(d - i - 1))
        rows.append(row)
    return rows


def _random_series_invertible(field: GF, d: int, n: int, rng, maxdeg: int) -> SeriesMatrix:
    const = _random_const_invertible(field, d, rng)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            items = [const[i][j]] + [field.random(rng) for _ in range(min(maxdeg, n - 1))]
            row.append(TruncSeries.from_list(field, items, n))
        rows.append(row)
    return SeriesMatrix(rows)


def make_adapted_phi(w: HTWeights, seed: int, field: GF | None = None,
                     precision: int | None = None) -> PhiFamily:
    """Seeded family in adapted form: F_i = X_i * (prod_j L_{i,e-j} Z_{i,e-j}) * L_{i,0}.

    L_{i,j} = diag(u^{r_{i,j,x}}); X_i is a random invertible series matrix and
    each Z a random constant invertible matrix.  The determinant valuation of
    F_i is the full weight sum over (j, x).
    """
    if not w.check_a0():
        raise HypothesisViolation("weight sums exceed p")
    if w.e % w.p == 0:
        raise HypothesisViolation("p divides e (wild case)")
    field = field or _default_field(w.p)
    n = precision or 4 * w.p
    rng = random.Random(seed)
    d = w.d
    mats, xs, zs = [], [], []
    for i in range(w.f):
        x = _random_series_invertible(field, d, n, rng, maxdeg=w.p - 1)
        acc = x
        zrow = []
        for j in range(w.e - 1, 0, -1):
            lam = SeriesMatrix.u_diagonal(field, w.r[i][j], n)
            z = SeriesMatrix.from_const(field, _random_const_invertible(field, d, rng), n)
            zrow.append(z)
            acc = acc * lam * z
        acc = acc * SeriesMatrix.u_diagonal(field, w.r[i][0], n)
        mats.append(acc)
        xs.append(x)
        zs.append(zrow)
    witnesses = None
    if w.e == 2:
        ident = SeriesMatrix.identity(field, d, n)
        witnesses = {
            "T": [ident] * w.f,
            "X": xs,
            "Lambda1": [SeriesMatrix.u_diagonal(field, w.r[i][1], n) for i in range(w.f)],
            "Z1": [zs[i][0] for i in range(w.f)],
            "Lambda0": [SeriesMatrix.u_diagonal(field, w.r[i][0], n) for i in range(w.f)],
            "S": [ident] * w.f,
        }
    meta = {"mode": "adapted", "seed": seed, "p": w.p, "m": field.m}
    return PhiFamily(matrices=tuple(mats), witnesses=witnesses, meta=meta)


def _check_perms(perms, f: int, d: int):
    perms = [tuple(int(x) for x in s) for s in perms]
    if len(perms) != f or any(sorted(s) != list(range(1, d + 1)) for s in perms):
        raise BadParameters("need one permutation of 1..d per index")
    return perms


def make_triangular_instance(w: HTWeights, sigma0, sigma1, seed: int,
                             field: GF | None = None,
                             precision: int | None = None) -> PhiFamily:
    """Planted upper-triangular family F_i = X'_i D(r1 o s1) Z'_i D(r0 o s0).

    X', Z' are seeded random constant upper-triangular invertible matrices, so
    the diagonal valuation at x is exactly r_{i,0,s0(x)} + r_{i,1,s1(x)}.
    Requires e = 2, level-0 gaps >= r_{i,1,d} and r_{i,0,d} + r_{i,1,d} <= p.
    """
    if w.e != 2:
        raise HypothesisViolation("planted instances require e = 2")
    for ri in w.r:
        if any(ri[0][x + 1] - ri[0][x] < ri[1][-1] for x in range(w.d - 1)):
            raise HypothesisViolation("level-0 gaps smaller than the level-1 top weight")
        if ri[0][-1] + ri[1][-1] > w.p:
            raise HypothesisViolation("weight sum exceeds p")
    sigma0 = _check_perms(sigma0, w.f, w.d)
    sigma1 = _check_perms(sigma1, w.f, w.d)
    field = field or _default_field(w.p)
    n = precision or 4 * w.p
    rng = random.Random(seed)
    d = w.d
    mats = []
    for i in range(w.f):
        xp = SeriesMatrix.from_const(field, _random_upper_const(field, d, rng), n)
        zp = SeriesMatrix.from_const(field, _random_upper_const(field, d, rng), n)
        lam1 = SeriesMatrix.u_diagonal(field, [w.r[i][1][s - 1] for s in sigma1[i]], n)
        lam0 = SeriesMatrix.u_diagonal(field, [w.r[i][0][s - 1] for s in sigma0[i]], n)
        mats.append(xp * lam1 * zp * lam0)
    meta = {
        "mode": "triangular",
        "seed": seed,
        "sigma0": [list(s) for s in sigma0],
        "sigma1": [list(s) for s in sigma1],
        "p": w.p,
        "m": field.m,
    }
    return PhiFamily(matrices=tuple(mats), witnesses=None, meta=meta)


def _default_field(p: int) -> GF:
    from .gf import gf

    return gf(p, 1)


# ---------------------------------------------------------------------------
# diagonal-shape verification and extensions

def diag_shape_verify(t, w: HTWeights):
    """Permutation pairs with t_{i,x} = r_{i,0,s0(x)} + r_{i,1,s1(x)}, or None.

    Exhaustive over both permutation groups (d <= 5), returning the
    lexicographically least witness per index; None when some index admits
    no pair.
    """
    if w.e != 2:
        raise HypothesisViolation("diagonal-shape verification requires e = 2")
    if w.d > 5:
        raise SearchSpaceTooLarge("permutation search limited to d <= 5")
    out = []
    for i in range(w.f):
        ti = [int(x) for x in t[i]]
        if len(ti) != w.d:
            raise BadParameters("valuation profile must have d entries per index")
        r0, r1 = w.r[i][0], w.r[i][1]
        found = None
        for s0 in itertools.permutations(range(1, w.d + 1)):
            for s1 in itertools.permutations(range(1, w.d + 1)):
                if all(
                    ti[x] == r0[s0[x] - 1] + r1[s1[x] - 1] for x in range(w.d)
                ):
                    found = (s0, s1)
                    break
            if found:
                break
        if found is None:
            return None
        out.append(found)
    return out


def build_extension(sub: PhiFamily, quot: PhiFamily, classes) -> PhiFamily:
    """Block upper-triangular family [[F_sub, C], [0, F_quot]].

    classes is a per-index rectangular block (rows of TruncSeries) with
    sub.dim rows and quot.dim columns.
    """
    if sub.f != quot.f or len(classes) != sub.f:
        raise DimensionMismatch("family lengths differ")
    ds, dq = sub.dim, quot.dim
    field = sub.matrices[0].field
    mats = []
    for i in range(sub.f):
        block = classes[i]
        if len(block) != ds or any(len(row) != dq for row in block):
            raise DimensionMismatch(f"class block {i} is not {ds} x {dq}")
        n = min(
            sub.matrices[i].precision,
            quot.matrices[i].precision,
            min(e.precision for row in block for e in row) if ds and dq else 10**9,
        )
        zero = TruncSeries.zero(field, n)
        rows = []
        for x in range(ds):
            rows.append(
                [sub.matrices[i].entries[x][y].truncate(n) for y in range(ds)]
                + [block[x][y].truncate(n) for y in range(dq)]
            )
        for x in range(dq):
            rows.append(
                [zero] * ds
                + [quot.matrices[i].entries[x][y].truncate(n) for y in range(dq)]
            )
        mats.append(SeriesMatrix(rows))
    meta = {"mode": "extension", "sub": sub.meta, "quot": quot.meta}
    return PhiFamily(matrices=tuple(mats), witnesses=None, meta=meta)


# ---------------------------------------------------------------------------
# phi-shape membership

def _certify_index(fmat: SeriesMatrix, w: HTWeights, i: int):
    """Search a factorization F = C*F1*F0 with both factors (P)-patterned.

    Enumerates the finitely many (P)-shaped F1 candidates; F0 is then forced
    and checked.  Returns (C, F1, F0) or None.
    """
    field, d, n = fmat.field, fmat.dim, fmat.precision
    r0, r1 = w.r[i][0], w.r[i][1]
    tvals = [fmat.entries[x][x].u_valuation() for x in range(d)]
    if any(v == float("inf") for v in tvals):
        return None
    cvals = [fmat.entries[x][x][tvals[x]] for x in range(d)]
    cinvmat = SeriesMatrix.diagonal(
        [TruncSeries.constant(field, c.inverse(), n) for c in cvals]
    )
    g = cinvmat * fmat  # = F1 * F0 if a certificate exists
    for s1 in itertools.permutations(range(1, d + 1)):
        deltas = [r1[s1[x] - 1] for x in range(d)]
        texp = [tvals[x] - deltas[x] for x in range(d)]
        if any(tx < 0 for tx in texp) or sorted(texp) != list(r0):
            continue
        # F1 = D_delta * K with K constant unipotent supported on delta_x < delta_y
        free = [
            (x, y) for x in range(d) for y in range(x + 1, d) if deltas[x] < deltas[y]
        ]
        for vals in itertools.product(field.elements(), repeat=len(free)):
            k = [[field.one if a == b else field.zero for b in range(d)] for a in range(d)]
            for (x, y), v in zip(free, vals):
                k[x][y] = v
            kinv = _const_inverse(k, field)
            # F0 = K^{-1} * (D_delta^{-1} * G): row x of G must be divisible
            rows = []
            ok = True
            for x in range(d):
                row = []
                for y in range(d):
                    e = g.entries[x][y]
                    if deltas[x] and not (e.is_zero() or e.divides_upow(deltas[x])):
                        ok = False
                        break
                    row.append(e.div_upow(deltas[x]) if (deltas[x] and not e.is_zero()) else
                               (TruncSeries.zero(field, n - deltas[x]) if e.is_zero() and deltas[x] else e))
                if not ok:
                    break
                rows.append(row)
            if not ok:
                continue
            nf = min(e.precision for row in rows for e in row)
            f0mat = SeriesMatrix.from_const(field, kinv, nf) * SeriesMatrix(
                [[e.truncate(nf) for e in row] for row in rows]
            )
            try:
                f0 = ShapedMatrix(f0mat, tuple(texp))
            except ValueError:
                continue
            if not check_p(f0):
                continue
            f1rows = []
            for x in range(d):
                f1rows.append(
                    [
                        TruncSeries.monomial(field, deltas[x], n, k[x][y])
                        if k[x][y]
                        else TruncSeries.zero(field, n)
                        for y in range(d)
                    ]
                )
            try:
                f1 = ShapedMatrix(SeriesMatrix(f1rows), tuple(deltas))
            except ValueError:
                continue
            if not check_p(f1):
                continue
            cmat = SeriesMatrix.diagonal(
                [TruncSeries.constant(field, c, n) for c in cvals]
            )
            recon = cmat * f1.x * f0.x
            if recon == fmat.truncate(recon.precision):
                return (cmat, f1, f0)
    return None


def check_e_phi_shape(fam: PhiFamily, w: HTWeights, certificate=None):
    """Membership in the C*F1*F0 shape class, with certificate.

    With a certificate (per-index (C, F1, F0) triples) the claim is verified
    at any size; without one, an exhaustive search over (P)-patterned
    candidates runs for d <= 3 and |k_E| <= 5.
    Returns (True, certificate) or (False, None).
    """
    if w.e != 2:
        raise HypothesisViolation("shape membership requires e = 2")
    if certificate is not None:
        if len(certificate) != fam.f:
            raise DimensionMismatch("certificate length differs from family length")
        for i, (cmat, f1, f0) in enumerate(certificate):
            if not (check_p(f1) and check_p(f0)):
                return False, None
            recon = cmat * f1.x * f0.x
            if recon != fam.matrices[i].truncate(recon.precision):
                return False, None
        return True, list(certificate)
    field = fam.matrices[0].field
    if fam.dim > 3 or field.order > 5:
        raise SearchSpaceTooLarge(
            "exhaustive shape search limited to d <= 3 and |k_E| <= 5"
        )
    cert = []
    for i, fmat in enumerate(fam.matrices):
        if not fmat.is_upper_triangular():
            return False, None
        found = _certify_index(fmat, w, i)
        if found is None:
            return False, None
        cert.append(found)
    return True, cert
