"""JSON codecs for series, matrices, local-field data, weights and families."""

from __future__ import annotations

from .errors import ConfigError
from .family import WITNESS_KEYS, PhiFamily
from .gf import GF, gf
from .kisin import HTWeights
from .localfield import LocalFieldElem, LocalRing, LocalRingElem, LPolynomial
from .series import SeriesMatrix, TruncSeries
from .shape import ShapedMatrix


def series_to_json(s: TruncSeries) -> dict:
    return {
        "p": s.field.p,
        "m": s.field.m,
        "N": s.precision,
        "coeffs": [[int(c) for c in row] for row in s.coeffs],
    }


def series_from_json(obj: dict) -> TruncSeries:
    try:
        field = gf(int(obj["p"]), int(obj["m"]))
        coeffs = obj["coeffs"]
        n = int(obj["N"])
        if len(coeffs) != n:
            raise ConfigError("series record: coeffs length differs from N")
        return TruncSeries.from_list(field, [field.elem(tuple(c)) for c in coeffs], n)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed series record: {exc}") from exc


def matrix_to_json(m: SeriesMatrix) -> dict:
    return {
        "d": m.dim,
        "entries": [[series_to_json(e) for e in row] for row in m.entries],
    }


def matrix_from_json(obj: dict) -> SeriesMatrix:
    try:
        entries = obj["entries"]
        if len(entries) != int(obj["d"]):
            raise ConfigError("matrix record: wrong number of rows")
        return SeriesMatrix([[series_from_json(e) for e in row] for row in entries])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed matrix record: {exc}") from exc


def shaped_to_json(m: ShapedMatrix) -> dict:
    return {"s": list(m.s), "x": matrix_to_json(m.x)}


def shaped_from_json(obj: dict) -> ShapedMatrix:
    try:
        return ShapedMatrix(matrix_from_json(obj["x"]), tuple(int(v) for v in obj["s"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed shaped-matrix record: {exc}") from exc


def field_elem_to_json(x: LocalFieldElem) -> dict:
    return {
        "p": x.ring.p,
        "M": x.ring.M,
        "e0": x.ring.e0,
        "shift": x.shift,
        "num": list(x.num.coeffs),
        "prec": x.prec,
    }


def field_elem_from_json(obj: dict, ring: LocalRing | None = None) -> LocalFieldElem:
    try:
        if ring is None:
            ring = LocalRing(int(obj["p"]), int(obj["M"]), int(obj["e0"]))
        num = ring.elem(tuple(int(c) for c in obj["num"]))
        return LocalFieldElem(ring, int(obj["shift"]), num, obj.get("prec"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed local-field record: {exc}") from exc


def lpoly_to_json(f: LPolynomial) -> list:
    return [field_elem_to_json(c) for c in f.coeffs]


def lpoly_from_json(obj: list, ring: LocalRing | None = None) -> LPolynomial:
    if not isinstance(obj, list) or not obj:
        raise ConfigError("malformed polynomial record: expected nonempty array")
    coeffs = []
    for c in obj:
        elem = field_elem_from_json(c, ring)
        ring = elem.ring
        coeffs.append(elem)
    return LPolynomial(ring, coeffs)


def ring_elem_to_json(x: LocalRingElem) -> dict:
    return {"p": x.ring.p, "M": x.ring.M, "e0": x.ring.e0, "coeffs": list(x.coeffs)}


def ring_elem_from_json(obj: dict, ring: LocalRing | None = None) -> LocalRingElem:
    try:
        if ring is None:
            ring = LocalRing(int(obj["p"]), int(obj["M"]), int(obj["e0"]))
        return ring.elem(tuple(int(c) for c in obj["coeffs"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed ring-element record: {exc}") from exc


def weights_to_json(w: HTWeights) -> dict:
    return {
        "p": w.p,
        "f": w.f,
        "e": w.e,
        "d": w.d,
        "r": [[list(rij) for rij in ri] for ri in w.r],
    }


def weights_from_json(obj: dict) -> HTWeights:
    try:
        return HTWeights(
            p=int(obj["p"]),
            f=int(obj["f"]),
            e=int(obj["e"]),
            d=int(obj["d"]),
            r=tuple(tuple(tuple(int(x) for x in rij) for rij in ri) for ri in obj["r"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed weights record: {exc}") from exc


def family_to_json(fam: PhiFamily) -> dict:
    out = {
        "f": fam.f,
        "matrices": [matrix_to_json(m) for m in fam.matrices],
        "witnesses": None,
        "meta": dict(fam.meta),
    }
    if fam.witnesses is not None:
        out["witnesses"] = {
            key: [matrix_to_json(m) for m in fam.witnesses[key]] for key in WITNESS_KEYS
        }
    return out


def family_from_json(obj: dict) -> PhiFamily:
    try:
        mats = tuple(matrix_from_json(m) for m in obj["matrices"])
        if len(mats) != int(obj["f"]):
            raise ConfigError("family record: wrong number of matrices")
        witnesses = None
        if obj.get("witnesses") is not None:
            witnesses = {
                key: [matrix_from_json(m) for m in obj["witnesses"][key]]
                for key in WITNESS_KEYS
            }
        return PhiFamily(matrices=mats, witnesses=witnesses, meta=dict(obj.get("meta", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed family record: {exc}") from exc
