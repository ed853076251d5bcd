"""Truncated power-series arithmetic: ring laws, inversion, Frobenius twist,
and agreement between the compiled and pure convolution kernels."""

import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kisinlab import SeriesMatrix, TruncSeries, gf
from kisinlab._kernels import _pure
from kisinlab.series import _red_rows_array

F5 = gf(5, 1)
F9 = gf(3, 2)
N = 12


def series(field, n=N):
    return st.lists(
        st.sampled_from(list(field.elements())), min_size=n, max_size=n
    ).map(lambda items: TruncSeries.from_list(field, items, n))


@given(series(F5), series(F5), series(F5))
def test_series_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == TruncSeries.zero(F5, N)
    assert a * TruncSeries.one(F5, N) == a


@given(series(F9), series(F9))
def test_series_ring_laws_nonprime_field(a, b):
    assert a * b == b * a
    assert (a + b) - b == a


@given(series(F5))
def test_unit_inversion_round_trip(a):
    if not a.is_unit():
        a = a + TruncSeries.one(F5, N)
    if not a.is_unit():
        return
    assert a * a.invert() == TruncSeries.one(F5, N)


@given(series(F9), series(F9))
def test_phi_is_a_ring_homomorphism(a, b):
    # phi substitutes u -> u^p and fixes coefficients, so it distributes
    # over both operations (up to the common truncation order).
    lhs = (a * b).phi()
    rhs = a.phi() * b.phi()
    assert lhs == rhs
    assert (a + b).phi() == a.phi() + b.phi()


@given(series(F5), series(F5))
def test_derivative_product_rule(a, b):
    # the top coefficient of a derivative is unknowable at fixed truncation,
    # so the rule is compared one order lower
    lhs = (a * b).derivative().truncate(N - 1)
    rhs = (a.derivative() * b + a * b.derivative()).truncate(N - 1)
    assert lhs == rhs


def test_monomial_and_valuation():
    s = TruncSeries.monomial(F5, 3, 8)
    assert s.u_valuation() == 3
    assert s.degree() == 3
    assert s.divides_upow(3)
    assert not TruncSeries.one(F5, 8).divides_upow(1)


def test_division_by_u_power_is_exact():
    s = TruncSeries.monomial(F5, 4, 10, F5.elem(2))
    q = s.div_upow(3)
    assert q.precision == 7
    assert q == TruncSeries.monomial(F5, 1, 7, F5.elem(2))


@pytest.mark.parametrize("field", [F5, F9, gf(7, 3)], ids=lambda f: f"F{f.order}")
def test_kernel_backends_agree(field):
    """The compiled convolution must match the numpy fallback bit for bit."""
    speedups = pytest.importorskip("kisinlab._speedups")
    rng = np.random.default_rng(99)
    red = _red_rows_array(field)
    for _ in range(50):
        na, nb = rng.integers(1, 24, size=2)
        nout = int(rng.integers(1, 32))
        a = rng.integers(0, field.p, size=(na, field.m)).astype(np.int64)
        b = rng.integers(0, field.p, size=(nb, field.m)).astype(np.int64)
        got = speedups.series_mul(a, b, nout, field.p, red)
        want = _pure.series_mul(a, b, nout, field.p, red)
        assert np.array_equal(np.asarray(got), want)


# -- matrices ---------------------------------------------------------------

def rand_matrix(field, d, n, rng, invertible=False):
    while True:
        m = SeriesMatrix(
            [
                [
                    TruncSeries.from_list(
                        field, [field.random(rng) for _ in range(n)], n
                    )
                    for _ in range(d)
                ]
                for _ in range(d)
            ]
        )
        if not invertible or m.is_invertible():
            return m


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_matrix_inverse_and_det(seed):
    rng = random.Random(seed)
    d = rng.randrange(1, 4)
    m = rand_matrix(F5, d, 10, rng, invertible=True)
    assert m * m.invert() == SeriesMatrix.identity(F5, d, 10)
    assert m.det().is_unit()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_matrix_phi_is_multiplicative(seed):
    rng = random.Random(seed)
    a = rand_matrix(F9, 3, 9, rng)
    b = rand_matrix(F9, 3, 9, rng)
    assert (a * b).phi() == a.phi() * b.phi()


def test_u_diagonal_exponents():
    m = SeriesMatrix.u_diagonal(F5, [0, 2, 5], 8)
    for i, e in enumerate([0, 2, 5]):
        assert m.entries[i][i].u_valuation() == e
    assert m.entries[0][1].is_zero()
