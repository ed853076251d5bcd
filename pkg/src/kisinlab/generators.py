"""Seeded instance generators for drivers, campaigns and the CLI.

Every generator takes an explicit seed and returns instances that satisfy the
hypotheses of the lemma they exercise by construction, together with whatever
was planted so callers can compare recovered data against it.
"""

from __future__ import annotations

import hashlib
import itertools
import random

from .canonical import q_factorize
from .errors import ConfigError
from .family import PhiFamily
from .gf import GF, gf
from .kisin import (
    HTWeights,
    _random_const_invertible,
    _random_series_invertible,
)
from .series import SeriesMatrix, TruncSeries
from .shape import (
    BlockFactorization,
    ShapedMatrix,
    _const_inverse,
    _const_mul,
    _perm_matrix,
    _rect_mul_left,
    _rect_mul_right,
)


def rng_for(seed: int, trial: int | None = None) -> random.Random:
    """Per-trial generator: counter-mode derivation from (seed, trial)."""
    if trial is None:
        return random.Random(seed)
    h = hashlib.sha256(f"{seed}:{trial}".encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


# ---------------------------------------------------------------------------
# canonical-form instances

def gen_ring_matrix(field: GF, d: int, n: int, delta: int, rng,
                    maxdeg: int | None = None) -> SeriesMatrix:
    """Random invertible matrix with entries in k_E + u^delta k_E[[u]]."""
    maxdeg = n - 1 if maxdeg is None else min(maxdeg, n - 1)
    const = _random_const_invertible(field, d, rng)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            items = [const[i][j]] + [field.zero] * (delta - 1)
            items += [field.random(rng) for _ in range(max(0, maxdeg + 1 - len(items)))]
            row.append(TruncSeries.from_list(field, items, n))
        rows.append(row)
    return SeriesMatrix(rows)


def gen_gapped_exponents(d: int, small_delta: int, rng, start_max: int = 2):
    """Ascending r with gaps >= small_delta, plus a Delta with Delta - r_d >= small_delta."""
    r = [rng.randrange(0, start_max)]
    for _ in range(d - 1):
        r.append(r[-1] + small_delta + rng.randrange(0, 2))
    delta = r[-1] + small_delta + rng.randrange(0, 2)
    return r, max(delta, 1)


def gen_ordering_instance(field: GF, d: int, seed: int, equality: bool = True):
    """Instance (M1, r, M4, Delta) of the triangular-product ordering lemma.

    Built backwards from the Q-factorization so that M1 = M2 * diag(u^r) * M4
    holds with M2 = V * Q^{-1}: V upper triangular with unit diagonal gives the
    equality case (M2 invertible); extra diagonal u-powers in V give the
    inequality case.  Returns the planted ordering for comparison.
    """
    rng = rng_for(seed)
    small_delta = rng.randrange(1, 3)
    r, delta = gen_gapped_exponents(d, small_delta, rng)
    n = 4 * (delta + d) + 8
    m4 = gen_ring_matrix(field, d, n, delta, rng, maxdeg=2 * delta + 2)
    m7, q, ordering = q_factorize(r, m4, delta, small_delta)
    m4p = m4 * m7  # already in canonical position; same ordering
    rk = [r[k - 1] for k in ordering]
    extra = [0] * d if equality else [rng.randrange(0, 2) for _ in range(d)]
    if not equality and not any(extra):
        extra[rng.randrange(d)] = 1
    vrows = []
    for i in range(d):
        row = [TruncSeries.zero(field, n)] * i
        row.append(TruncSeries.monomial(field, extra[i], n, field.random_unit(rng)))
        row.extend(
            TruncSeries.from_list(field, [field.random(rng) for _ in range(3)], n)
            for _ in range(d - i - 1)
        )
        vrows.append(row)
    v = SeriesMatrix(vrows)
    m1 = v * SeriesMatrix.u_diagonal(field, rk, n)
    m2 = v * q.invert()
    return {
        "m1": m1,
        "r": r,
        "m4": m4p,
        "delta": delta,
        "m2": m2,
        "ordering": ordering,
        "equality": equality,
    }


def gen_q_instance(field: GF, d: int, seed: int):
    """Valid (r, M4, Delta, small_delta) input for the Q-factorization."""
    rng = rng_for(seed)
    small_delta = rng.randrange(1, 3)
    r, delta = gen_gapped_exponents(d, small_delta, rng)
    n = 4 * (delta + d) + 8
    m4 = gen_ring_matrix(field, d, n, delta, rng, maxdeg=2 * delta + 2)
    return {"r": r, "m4": m4, "delta": delta, "small_delta": small_delta}


# ---------------------------------------------------------------------------
# shape instances

def _planted_p_matrix(field: GF, t, n: int, rng):
    """(P)-shaped matrix diag u^{t_i} with random upper monomial entries,
    together with its constant unipotent part K (matrix = D_t * K)."""
    d = len(t)
    k = [[field.one if i == j else field.zero for j in range(d)] for i in range(d)]
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            if i == j:
                row.append(TruncSeries.monomial(field, t[i], n))
            elif i < j and t[i] < t[j]:
                c = field.random(rng)
                k[i][j] = c
                row.append(
                    TruncSeries.monomial(field, t[i], n, c)
                    if c
                    else TruncSeries.zero(field, n)
                )
            else:
                row.append(TruncSeries.zero(field, n))
        rows.append(row)
    return ShapedMatrix(SeriesMatrix(rows), tuple(t)), k


def _planted_deg_matrix(field: GF, deltas, n: int, rng) -> ShapedMatrix:
    d = len(deltas)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            if i == j:
                row.append(TruncSeries.monomial(field, deltas[i], n))
            elif i < j:
                row.append(
                    TruncSeries.from_list(
                        field, [field.random(rng) for _ in range(deltas[j])], n
                    )
                )
            else:
                row.append(TruncSeries.zero(field, n))
        rows.append(row)
    return ShapedMatrix(SeriesMatrix(rows), tuple(deltas))


def gen_shape_instance(field: GF, d: int, seed: int):
    """Planted X = X1(DEG) * X0(P) with a hypothesis-compatible constant A.

    A = K^{-1} * A_st with K the unipotent part of X0 and A_st invertible
    supported on the staircase t_i >= t_j, which makes u^{t_j} divide
    column j of X * A.
    """
    rng = rng_for(seed)
    deltas = [rng.randrange(0, 3) for _ in range(d)]
    delta = max(deltas)
    t = [rng.randrange(0, 2)]
    for _ in range(d - 1):
        t.append(t[-1] + delta + 1 + rng.randrange(0, 2))
    rng.shuffle(t)
    n = 4 * (max(t) + delta) + 12
    x0, k = _planted_p_matrix(field, t, n, rng)
    x1 = _planted_deg_matrix(field, deltas, n, rng)
    x = ShapedMatrix(x1.x * x0.x, tuple(ti + di for ti, di in zip(t, deltas)))
    while True:
        beta = [[field.zero] * d for _ in range(d)]
        for i in range(d):
            beta[i][i] = field.random_unit(rng)
            for j in range(d):
                if t[i] > t[j]:
                    beta[i][j] = field.random(rng)
        if _const_inverse(beta, field) is not None:
            break
    aconst = _const_mul(_const_inverse(k, field), beta, field)
    a = SeriesMatrix.from_const(field, aconst, n)
    return {"x": x, "a": a, "t": t, "deltas": deltas, "x1": x1, "x0": x0}


def gen_p_step_instance(field: GF, d: int, seed: int, want_p: bool):
    """Random (X, legal step) pair; X satisfies (P) iff want_p."""
    rng = rng_for(seed)
    s = list(range(0, 2 * d, 2))
    while True:
        rng.shuffle(s)
        if any(s[i] < s[j] for i in range(d) for j in range(i + 1, d)):
            break
    n = 2 * max(s) + 8
    m, _ = _planted_p_matrix(field, s, n, rng)
    if not want_p:
        # Break the (P) pattern in a random upper entry without breaking DEG.
        while True:
            i = rng.randrange(d - 1)
            j = rng.randrange(i + 1, d)
            if s[i] < s[j]:
                exp = s[i] + 1
                if exp >= s[j]:
                    continue
                rows = [list(r) for r in m.x.entries]
                rows[i][j] = rows[i][j] + TruncSeries.monomial(
                    field, exp, n, field.random_unit(rng)
                )
                m = ShapedMatrix(SeriesMatrix(rows), m.s)
                break
    legal = [(i, j) for i in range(d) for j in range(i + 1, d) if s[i] < s[j]]
    i, j = legal[rng.randrange(len(legal))]
    from .shape import AllowableStep

    step = AllowableStep(i + 1, j + 1, field.random(rng))
    return {"x": m, "step": step, "is_p": want_p}


# ---------------------------------------------------------------------------
# phi-family decomposition instances

def gen_decompose_instance(w: HTWeights, seed: int, field: GF | None = None,
                           precision: int | None = None):
    """Planted F_i = C_i F1_i F0_i with exact constant witnesses.

    F1, F0 are (P)-shaped around permuted weight diagonals; the witness chain
    T, X, Z1, S consists of constant matrices assembled so that the product
    T X L1 Z1 L0 S reproduces F with S_i = phi(T_{i-1}^{-1}) (phi fixes
    constants, which closes the cycle).
    """
    if w.e != 2 or not (w.check_a1() and w.check_a2()):
        raise ConfigError("decompose instances need e = 2 and the gap/sum bounds")
    field = field or gf(w.p, 1)
    n = precision or 4 * w.p
    rng = rng_for(seed)
    d, f = w.d, w.f
    perms = list(itertools.permutations(range(1, d + 1)))
    sigma0 = [perms[rng.randrange(len(perms))] for _ in range(f)]
    sigma1 = [perms[rng.randrange(len(perms))] for _ in range(f)]
    f0s, f1s, k0s, k1s, cmats, w0s, w1s = [], [], [], [], [], [], []
    mats = []
    for i in range(f):
        t = [w.r[i][0][s - 1] for s in sigma0[i]]
        deltas = [w.r[i][1][s - 1] for s in sigma1[i]]
        f0, k0 = _planted_p_matrix(field, t, n, rng)
        f1, k1 = _planted_p_matrix(field, deltas, n, rng)
        cvals = [field.random_unit(rng) for _ in range(d)]
        cmat = SeriesMatrix.diagonal(
            [TruncSeries.constant(field, c, n) for c in cvals]
        )
        mats.append(cmat * f1.x * f0.x)
        f0s.append(f0)
        f1s.append(f1)
        k0s.append(k0)
        k1s.append(k1)
        cmats.append(cmat)
        w0s.append(_perm_matrix(field, [s - 1 for s in sigma0[i]], n))
        w1s.append(_perm_matrix(field, [s - 1 for s in sigma1[i]], n))
    # Witness chain: F_i = C_i W1 L1 (W1^{-1} K1 W0) L0 (W0^{-1} K0) with
    # D_delta = W1 L1 W1^{-1}, D_t = W0 L0 W0^{-1}; distribute so that
    # T_{i-1} = S_i^{-1}.
    t_wit, x_wit, z1_wit, s_wit, l1_wit, l0_wit = [], [], [], [], [], []
    for i in range(f):
        k0mat = SeriesMatrix.from_const(field, k0s[i], n)
        s_wit.append(w0s[i].invert() * k0mat)
        l1_wit.append(SeriesMatrix.u_diagonal(field, w.r[i][1], n))
        l0_wit.append(SeriesMatrix.u_diagonal(field, w.r[i][0], n))
    for i in range(f):
        t_wit.append(s_wit[(i + 1) % f].invert())
    for i in range(f):
        k1mat = SeriesMatrix.from_const(field, k1s[i], n)
        z1_wit.append(w1s[i].invert() * k1mat * w0s[i])
        x_wit.append(t_wit[i].invert() * cmats[i] * w1s[i])
    witnesses = {
        "T": t_wit,
        "X": x_wit,
        "Lambda1": l1_wit,
        "Z1": z1_wit,
        "Lambda0": l0_wit,
        "S": s_wit,
    }
    fam = PhiFamily(
        matrices=tuple(mats),
        witnesses=witnesses,
        meta={"mode": "decompose", "seed": seed,
              "sigma0": [list(s) for s in sigma0],
              "sigma1": [list(s) for s in sigma1]},
    )
    fam.check_witnesses()
    return {"family": fam, "sigma0": sigma0, "sigma1": sigma1,
            "c": cmats, "f1": f1s, "f0": f0s}


# ---------------------------------------------------------------------------
# block-linearity instances

def gen_block_pair(field: GF, ds: int, dq: int, seed: int, n: int = 16):
    """Two block factorizations sharing diagonal factors."""
    rng = rng_for(seed)
    a1 = _random_series_invertible(field, ds, n, rng, maxdeg=3)
    a0 = _random_series_invertible(field, ds, n, rng, maxdeg=3)
    aq1 = _random_series_invertible(field, dq, n, rng, maxdeg=3)
    aq0 = _random_series_invertible(field, dq, n, rng, maxdeg=3)
    a = a1 * a0
    aq = aq1 * aq0

    def rand_block():
        return [
            [
                TruncSeries.from_list(field, [field.random(rng) for _ in range(4)], n)
                for _ in range(dq)
            ]
            for _ in range(ds)
        ]

    out = []
    for _ in range(2):
        c1, c0 = rand_block(), rand_block()
        lhs = _rect_mul_left(a1, c0)
        rhs = _rect_mul_right(c1, aq0)
        c = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
        out.append(
            BlockFactorization(a=a, aq=aq, c=c, a1=a1, a0=a0, aq1=aq1, aq0=aq0,
                               c1=c1, c0=c0)
        )
    return out[0], out[1]


# ---------------------------------------------------------------------------
# normalization instances

def gen_normalizable_family(field: GF, d: int, f: int, seed: int,
                            precision: int | None = None) -> PhiFamily:
    """Family with distinct diagonal valuations <= p-2, random unit diagonals
    and dense upper entries; normalizable by construction."""
    rng = rng_for(seed)
    p = field.p
    n = precision or 6 * p
    mats = []
    tcols = []
    for _ in range(f):
        tv = rng.sample(range(0, p - 1), d)
        tcols.append(tv)
        rows = []
        for x in range(d):
            row = []
            for y in range(d):
                if x == y:
                    unit = TruncSeries.from_list(
                        field,
                        [field.random_unit(rng)]
                        + [field.random(rng) for _ in range(p)],
                        n,
                    )
                    row.append(unit.mul_upow(tv[x]))
                elif x < y:
                    row.append(
                        TruncSeries.from_list(
                            field, [field.random(rng) for _ in range(2 * p)], n
                        )
                    )
                else:
                    row.append(TruncSeries.zero(field, n))
            rows.append(row)
        mats.append(SeriesMatrix(rows))
    return PhiFamily(matrices=tuple(mats), meta={"t": tcols, "seed": seed})
