"""JSON codec round trips and malformed-input rejection."""

import json

import pytest

from kisinlab import HTWeights, LocalRing, gf
from kisinlab.errors import ConfigError
from kisinlab.generators import gen_decompose_instance, gen_shape_instance
from kisinlab.localfield import LPolynomial, LocalFieldElem, eisenstein_roots
from kisinlab.serialize import (
    family_from_json,
    family_to_json,
    field_elem_from_json,
    field_elem_to_json,
    lpoly_from_json,
    lpoly_to_json,
    matrix_from_json,
    matrix_to_json,
    ring_elem_from_json,
    ring_elem_to_json,
    series_from_json,
    series_to_json,
    shaped_from_json,
    shaped_to_json,
    weights_from_json,
    weights_to_json,
)


def test_matrix_and_shaped_round_trip(f9):
    inst = gen_shape_instance(f9, 3, 42)
    for enc, dec, val in [
        (matrix_to_json, matrix_from_json, inst["a"]),
        (shaped_to_json, shaped_from_json, inst["x"]),
    ]:
        rec = json.loads(json.dumps(enc(val)))  # through actual JSON text
        assert dec(rec) == val


def test_series_round_trip(f5):
    inst = gen_shape_instance(f5, 2, 1)
    s = inst["a"].entries[0][0]
    assert series_from_json(series_to_json(s)) == s


def test_field_elem_and_poly_round_trip():
    roots = eisenstein_roots(2, 7, 5)
    ring = roots[0].ring
    x = LocalFieldElem(ring, 3, ring.elem((4, 5)), prec=6)
    back = field_elem_from_json(json.loads(json.dumps(field_elem_to_json(x))))
    assert (back - x).is_zero() and back.prec == x.prec
    f = LPolynomial.from_ints(ring, [1, 2, 3])
    assert lpoly_from_json(lpoly_to_json(f)) == f
    r = ring.elem((6, 1))
    assert ring_elem_from_json(ring_elem_to_json(r)).coeffs == r.coeffs


def test_weights_round_trip():
    w = HTWeights(p=13, f=2, e=2, d=2, r=(((0, 4), (0, 1)), ((0, 3), (0, 1))))
    assert weights_from_json(weights_to_json(w)) == w


def test_family_round_trip_preserves_witnesses():
    w = HTWeights(p=13, f=2, e=2, d=2, r=(((0, 4), (0, 1)), ((0, 4), (0, 1))))
    fam = gen_decompose_instance(w, 5)["family"]
    back = family_from_json(json.loads(json.dumps(family_to_json(fam))))
    assert back.matrices == fam.matrices
    back.check_witnesses()


@pytest.mark.parametrize(
    "codec,blob",
    [
        (series_from_json, {"p": 5}),
        (series_from_json, {"p": 5, "m": 1, "N": 3, "coeffs": [[0]]}),
        (matrix_from_json, {"d": 2, "entries": []}),
        (shaped_from_json, {"s": [0]}),
        (field_elem_from_json, {"p": 5, "M": "x"}),
        (lpoly_from_json, []),
        (lpoly_from_json, {"not": "a list"}),
        (weights_from_json, {"p": 5, "f": 1, "e": 1, "d": 1}),
        (family_from_json, {"f": 1, "matrices": []}),
    ],
)
def test_malformed_records_raise_config_error(codec, blob):
    with pytest.raises(ConfigError):
        codec(blob)
