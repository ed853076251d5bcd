"""Arithmetic in (Z/p^M)[x]/(x^e0 - p): valuations, Eisenstein roots, and
the coefficient-valuation bound on twisted expansions."""

import random

import pytest

from kisinlab import (
    LPolynomial,
    LocalFieldElem,
    LocalRing,
    check_property_b,
    eisenstein_roots,
)
from kisinlab.errors import BadParameters, PrecisionExhausted


def test_uniformizer_and_p_valuations():
    ring = LocalRing(5, 6, 2)
    assert ring.w.valuation() == 1
    assert ring.elem(5).valuation() == 2  # v(p) = e0
    assert (ring.w * ring.w - ring.elem(5)).valuation() == ring.full_prec


def test_wild_ramification_rejected():
    with pytest.raises(BadParameters):
        LocalRing(5, 4, 5)
    with pytest.raises(BadParameters):
        LocalRing(5, 4, 3)  # e0 must divide p - 1


@pytest.mark.parametrize("e0,p", [(2, 3), (2, 5), (2, 7), (2, 13), (4, 5), (4, 13)])
def test_eisenstein_roots_and_tame_differences(e0, p):
    roots = eisenstein_roots(e0, p, 8)
    assert len(roots) == e0
    for r in roots:
        assert (r ** e0 - r.ring.elem(p)).valuation() == r.ring.full_prec
        assert r.valuation() == 1
    for j in range(e0):
        for q in range(e0):
            if j != q:
                assert (roots[j] - roots[q]).valuation() == 1


def test_unit_inverse():
    ring = LocalRing(7, 5, 2)
    x = ring.elem((3, 4))
    assert (x * x.unit_inverse() - ring.one).valuation() == ring.full_prec


def test_field_elem_pow_and_inverse():
    ring = LocalRing(5, 6, 2)
    x = LocalFieldElem(ring, 1, ring.elem((2, 3)))
    cube = x * x * x
    assert (x ** 3 - cube).is_zero()
    assert ((x ** -2) * x * x - LocalFieldElem.from_int(ring, 1)).is_zero()


def test_valuation_of_certified_zero_raises():
    ring = LocalRing(5, 3, 2)
    x = LocalFieldElem(ring, 0, ring.elem(0), prec=4)
    with pytest.raises(PrecisionExhausted):
        x.valuation()
    assert x.valuation_lower_bound() == 4


def test_synthetic_division_reassembles():
    ring = LocalRing(5, 6, 2)
    pi = eisenstein_roots(2, 5, 6)[0]
    f = LPolynomial.from_ints(ring, [3, 1, 4, 1, 5])
    q, r = f.synth_div(pi)
    back = q * LPolynomial.linear_root(pi) + LPolynomial(ring, [r])
    assert back == f
    assert (f.evaluate(pi) - r).is_zero()


def test_evaluate_horner_matches_powers():
    ring = LocalRing(13, 4, 2)
    pi = eisenstein_roots(2, 13, 4)[1]
    f = LPolynomial.from_ints(ring, [7, 0, 2])
    pif = LocalFieldElem.from_ring(pi)
    direct = LocalFieldElem.from_int(ring, 7) + pif * pif * LocalFieldElem.from_int(ring, 2)
    assert (f.evaluate(pi) - direct).is_zero()


def rand_bounded_poly(ring, pij, rng, deg):
    """f = sum a_i (u - pi)^i with v(a_i) >= -i."""
    f = LPolynomial.from_ints(ring, [0])
    base = LPolynomial.from_ints(ring, [1])
    lin = LPolynomial.linear_root(pij)
    for i in range(deg + 1):
        shift = rng.randrange(0, i + 1)
        num = ring.elem(tuple(rng.randrange(ring.pM) for _ in range(ring.e0)))
        f = f + base * LocalFieldElem(ring, shift, num)
        base = base * lin
    return f


@pytest.mark.parametrize("seed", range(20))
def test_coefficient_bound_closed_under_products(seed):
    rng = random.Random(seed)
    roots = eisenstein_roots(2, 5, 12)
    pij = roots[1]
    f1 = rand_bounded_poly(roots[0].ring, pij, rng, rng.randrange(1, 4))
    f2 = rand_bounded_poly(roots[0].ring, pij, rng, rng.randrange(1, 4))
    assert check_property_b(f1, pij)
    assert check_property_b(f2, pij)
    assert check_property_b(f1 * f2, pij)


def test_coefficient_bound_detects_violations():
    ring = LocalRing(5, 8, 2)
    pi = eisenstein_roots(2, 5, 8)[0]
    # constant term w^{-2}: valuation -2 < 0 breaks the i = 0 bound
    bad = LPolynomial(ring, [LocalFieldElem(ring, 2, ring.one)])
    assert not check_property_b(bad, pi)
