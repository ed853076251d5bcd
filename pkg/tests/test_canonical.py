"""Canonical position, pivot orderings, and the exact Q-factorization."""

import itertools

import pytest

from kisinlab import (
    HypothesisViolation,
    NotInvertible,
    SeriesMatrix,
    TruncSeries,
    check_property_z,
    gf,
    ordering_from_product,
    property_z_canonicalize,
    q_factorize,
)
from kisinlab.generators import gen_ordering_instance, gen_q_instance


def const_matrix(field, rows, n=8):
    return SeriesMatrix(
        [[TruncSeries.constant(field, field.elem(c), n) for c in row] for row in rows]
    )


def test_unique_corrector_exhaustive_f3():
    """Every invertible constant 2x2 matrix over F_3 admits exactly one
    unipotent upper-triangular corrector landing in canonical position."""
    field = gf(3, 1)
    correctors = [const_matrix(field, [[1, c], [0, 1]]) for c in range(3)]
    count = 0
    for flat in itertools.product(range(3), repeat=4):
        a = const_matrix(field, [flat[:2], flat[2:]])
        if not a.is_invertible():
            continue
        count += 1
        hits = [c for c in correctors if check_property_z(a * c, 0) is not None]
        cert = property_z_canonicalize(a, 0)
        assert len(hits) == 1
        assert hits[0] == cert.C
        assert cert.M == a * cert.C
    assert count == 48  # |GL_2(F_3)|


def test_canonicalize_identity_is_fixed():
    field = gf(5, 1)
    ident = SeriesMatrix.identity(field, 3, 8)
    cert = property_z_canonicalize(ident, 0)
    assert cert.C == ident
    assert cert.ordering == (1, 2, 3)


def test_singular_matrix_rejected():
    field = gf(5, 1)
    a = const_matrix(field, [[1, 2], [2, 4]])
    with pytest.raises(NotInvertible):
        property_z_canonicalize(a, 0)


def test_antidiagonal_ordering():
    field = gf(5, 1)
    a = const_matrix(field, [[0, 1], [1, 0]])
    cert = property_z_canonicalize(a, 0)
    assert cert.ordering == (2, 1)


@pytest.mark.parametrize("equality", [True, False])
@pytest.mark.parametrize("seed", range(25))
def test_ordering_recovers_planted_permutation(seed, equality, f5):
    inst = gen_ordering_instance(f5, 3, seed, equality=equality)
    k = ordering_from_product(
        inst["m1"], inst["r"], inst["m4"], inst["delta"], equality
    )
    assert k == inst["ordering"]
    if equality:
        # determinant-valuation audit: the diagonal exponents of M1 must be
        # exactly the permuted exponents r
        t = [inst["m1"].entries[x][x].u_valuation() for x in range(3)]
        assert [inst["r"][x - 1] for x in k] == t


def test_ordering_rejects_unsorted_exponents(f5):
    inst = gen_ordering_instance(f5, 3, 0)
    with pytest.raises(HypothesisViolation):
        ordering_from_product(
            inst["m1"], list(reversed(inst["r"])), inst["m4"], inst["delta"], True
        )


@pytest.mark.parametrize("seed", range(25))
def test_q_factorization_multiplies_back(seed, f5):
    inst = gen_q_instance(f5, 4, seed)
    m7, q, k = q_factorize(inst["r"], inst["m4"], inst["delta"], inst["small_delta"])
    rk = [inst["r"][x - 1] for x in k]
    lhs = SeriesMatrix.u_diagonal(f5, inst["r"], inst["m4"].precision) * (
        inst["m4"] * m7
    )
    rhs = q * SeriesMatrix.u_diagonal(f5, rk, q.precision)
    assert rhs == lhs.truncate(rhs.precision)
    assert q.is_invertible()
    # entries of Q are a constant plus a tail divisible by u^small_delta
    for row in q.entries:
        for e in row:
            if inst["small_delta"] > 1:
                assert not e.coeffs[1 : inst["small_delta"]].any()


def test_q_factorization_is_deterministic(f5):
    inst = gen_q_instance(f5, 3, 7)
    a = q_factorize(inst["r"], inst["m4"], inst["delta"], inst["small_delta"])
    b = q_factorize(inst["r"], inst["m4"], inst["delta"], inst["small_delta"])
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]
