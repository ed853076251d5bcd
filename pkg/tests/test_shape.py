"""Shaped matrices: monomial patterns, column steps, two-factor
factorizations, degree normalization, and block factorizations."""

import pytest

from kisinlab import (
    AllowableStep,
    HTWeights,
    SeriesMatrix,
    ShapedMatrix,
    TruncSeries,
    allowable_step,
    check_deg,
    check_p,
    ext_block_sum,
    gf,
    normalize_to_deg,
    reduce_p_to_diagonal,
    shape_decompose_phi,
    shape_factorize,
)
from kisinlab.errors import (
    GapViolation,
    IllegalStep,
    InputNotFactored,
    NotPropertyP,
)
from kisinlab.family import phi_conjugate
from kisinlab.generators import (
    gen_block_pair,
    gen_decompose_instance,
    gen_normalizable_family,
    gen_p_step_instance,
    gen_shape_instance,
)

F5 = gf(5, 1)


def upper(field, entries, s, n=16):
    rows = []
    for i, row in enumerate(entries):
        rows.append(
            [
                e if isinstance(e, TruncSeries) else TruncSeries.monomial(field, e[0], n, field.elem(e[1]))
                for e in row
            ]
        )
    return ShapedMatrix(SeriesMatrix(rows), tuple(s))


def test_shaped_matrix_requires_exact_monomial_diagonal():
    n = 10
    bad = SeriesMatrix(
        [
            [TruncSeries.monomial(F5, 2, n, F5.elem(2)), TruncSeries.zero(F5, n)],
            [TruncSeries.zero(F5, n), TruncSeries.one(F5, n)],
        ]
    )
    with pytest.raises(ValueError):
        ShapedMatrix(bad, (2, 0))


def test_pattern_predicates_by_hand():
    n = 16
    # upper entry u^0 * c with s = (0, 3): monomial at exponent s_1 = 0, fine
    x = upper(F5, [[(0, 1), (0, 2)], [(3, 0), (3, 1)]], (0, 3), n)
    assert check_p(x)
    assert check_deg(x)
    # an extra u term above the pivot breaks (P) but not (DEG)
    broken = x.x.entries[0][1] + TruncSeries.monomial(F5, 1, n)
    y = ShapedMatrix(
        SeriesMatrix([[x.x.entries[0][0], broken], x.x.entries[1]]), (0, 3)
    )
    assert not check_p(y)
    assert check_deg(y)


def test_step_requires_increasing_exponents():
    x = upper(F5, [[(2, 1), (2, 0)], [(0, 0), (0, 1)]], (2, 0))
    with pytest.raises(IllegalStep):
        allowable_step(x, AllowableStep(1, 2, F5.elem(1)))


@pytest.mark.parametrize("want_p", [True, False])
@pytest.mark.parametrize("seed", range(20))
def test_step_preserves_and_reflects_pattern(seed, want_p):
    inst = gen_p_step_instance(F5, 4, seed, want_p)
    assert check_p(inst["x"]) == want_p
    stepped = allowable_step(inst["x"], inst["step"])
    assert check_p(stepped) == want_p
    assert check_deg(stepped)


@pytest.mark.parametrize("seed", range(10))
def test_reduction_to_diagonal_within_step_budget(seed):
    inst = gen_p_step_instance(F5, 4, seed, True)
    steps = reduce_p_to_diagonal(inst["x"])
    assert len(steps) <= 4 * 3 // 2
    m = inst["x"]
    for st in steps:
        m = allowable_step(m, st)
    for i in range(4):
        for j in range(4):
            if i != j:
                assert m.x.entries[i][j].is_zero()


def test_reduction_refuses_non_pattern_input():
    inst = gen_p_step_instance(F5, 3, 0, False)
    with pytest.raises(NotPropertyP):
        reduce_p_to_diagonal(inst["x"])


@pytest.mark.parametrize("seed", range(20))
def test_factorization_round_trip_recovers_plant(seed):
    inst = gen_shape_instance(F5, 3, seed)
    fact = shape_factorize(inst["x"], inst["a"], inst["t"], inst["deltas"])
    n = fact.x1.x.precision
    assert fact.x1.x * fact.x0.x == inst["x"].x.truncate(n)
    assert check_deg(fact.x1)
    assert check_p(fact.x0)
    # the (P) factor is the planted one
    assert fact.x0.x == inst["x0"].x.truncate(fact.x0.x.precision)


def test_factorization_with_deep_tail_in_a():
    inst = gen_shape_instance(F5, 3, 77)
    gamma = max(inst["t"]) + max(inst["deltas"])
    n = inst["a"].precision
    tail = SeriesMatrix(
        [
            [TruncSeries.monomial(F5, gamma, n, F5.elem((i + j) % 5)) for j in range(3)]
            for i in range(3)
        ]
    )
    a = inst["a"] + tail
    fact = shape_factorize(inst["x"], a, inst["t"], inst["deltas"], gamma=gamma)
    m = fact.x1.x.precision
    assert fact.x1.x * fact.x0.x == inst["x"].x.truncate(m)
    assert check_p(fact.x0)


def test_factorization_needs_separated_exponents():
    n = 16
    x = upper(F5, [[(2, 1), (0, 0)], [(0, 0), (3, 1)]], (2, 3), n)
    a = SeriesMatrix.identity(F5, 2, n)
    with pytest.raises(GapViolation):
        shape_factorize(x, a, [1, 2], [1, 1])


@pytest.mark.parametrize("seed", range(5))
def test_normalization_conjugation_identity(seed):
    fam = gen_normalizable_family(F5, 3, 2, seed)
    taus, out = normalize_to_deg(fam)
    conj = phi_conjugate(taus, fam.matrices)
    for got, want in zip(out.matrices, conj):
        assert got == want.truncate(got.precision)
    for mat in out.matrices:
        d = mat.dim
        for i in range(d):
            si = mat.entries[i][i].u_valuation()
            for j in range(d):
                if i != j:
                    e = mat.entries[i][j]
                    assert e.is_zero() or e.degree() < max(
                        mat.entries[j][j].u_valuation(), si
                    )


@pytest.mark.parametrize("seed", range(5))
def test_full_decomposition_of_witnessed_family(seed):
    w = HTWeights(p=13, f=1, e=2, d=3, r=(((0, 3, 6), (0, 1, 2)),))
    inst = gen_decompose_instance(w, seed)
    fam = inst["family"]
    factors = shape_decompose_phi(fam, fam.witnesses, w)
    for i, fac in enumerate(factors):
        recon = fac.c * fac.f1.x * fac.f0.x
        assert recon == fam.matrices[i].truncate(recon.precision)
        assert check_p(fac.f1)
        assert check_p(fac.f0)
        assert tuple(fac.sigma0) == tuple(inst["sigma0"][i])
        assert tuple(fac.sigma1) == tuple(inst["sigma1"][i])


# -- block factorizations ----------------------------------------------------

def test_block_sum_is_verified_and_linear():
    b1, b2 = gen_block_pair(F5, 2, 2, 11)
    comb = ext_block_sum(b1, b2, F5.elem(2), F5.elem(3))
    comb.verify()
    # coefficient (1, 0) reduces to the first summand
    same = ext_block_sum(b1, b2, F5.one, F5.zero)
    assert all(
        x == y for r1, r2 in zip(same.c, b1.c) for x, y in zip(r1, r2)
    )


def test_block_sum_rejects_mismatched_diagonals():
    b1, _ = gen_block_pair(F5, 2, 2, 1)
    _, b2 = gen_block_pair(F5, 2, 2, 2)
    with pytest.raises(InputNotFactored):
        ext_block_sum(b1, b2, F5.one, F5.one)
