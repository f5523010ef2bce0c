"""JSON schemas for inputs and reports. Indices in JSON are 1-based."""

from __future__ import annotations

import json
from typing import Any

from .charpair import CharacteristicPair, make_pair
from .errors import ToricError
from .fan import Fan, build_fan, fan_to_pair
from .polytope import SimplePolytope, build_polytope, product_of_simplices
from .towers import HirzebruchParams, TowerSpec, hirzebruch_params, make_tower

SCHEMA_VERSION = "1.0"


class InputError(ToricError):
    """Malformed input: bad JSON or a missing/ill-typed field."""


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _field(d: dict, key: str, kind=None):
    if not isinstance(d, dict):
        raise InputError(f"expected a JSON object, got {type(d).__name__}")
    if key not in d:
        raise InputError(f"missing field '{key}'")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise InputError(f"field '{key}' must be {kind.__name__}")
    return v


def _int_matrix(rows, what: str) -> list[list[int]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError(f"'{what}' must be a list of integer lists")
    for r in rows:
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
            raise InputError(f"'{what}' must contain only integers")
    return rows


def polytope_from_json(d: dict) -> SimplePolytope:
    if "product_of_simplices" in d:
        dims = _field(d, "product_of_simplices", list)
        return product_of_simplices([int(x) for x in dims])
    n = _field(d, "dim", int)
    m = _field(d, "facets", int)
    verts = _int_matrix(_field(d, "vertices", list), "vertices")
    return build_polytope(n, m, [[i - 1 for i in v] for v in verts])


def polytope_to_json(P: SimplePolytope) -> dict:
    return {"dim": P.dim, "facets": P.n_facets, "vertices": [sorted(i + 1 for i in v) for v in P.vertices]}


def pair_from_json(d: dict) -> CharacteristicPair:
    P = polytope_from_json(_field(d, "polytope", dict))
    lam = _int_matrix(_field(d, "lambda", list), "lambda")
    return make_pair(P, lam)


def pair_to_json(pair: CharacteristicPair) -> dict:
    return {"polytope": polytope_to_json(pair.polytope), "lambda": [list(v) for v in pair.lam]}


def fan_from_json(d: dict) -> Fan:
    rays = _int_matrix(_field(d, "rays", list), "rays")
    cones = _int_matrix(_field(d, "max_cones", list), "max_cones")
    dim = d.get("dim")
    return build_fan(rays, [[i - 1 for i in c] for c in cones], dim=dim)


def fan_to_json(fan: Fan) -> dict:
    return {"dim": fan.dim, "rays": [list(r) for r in fan.rays],
            "max_cones": [[i + 1 for i in c] for c in fan.max_cones]}


def is_fan(d: dict) -> bool:
    return isinstance(d, dict) and "rays" in d


def is_pair(d: dict) -> bool:
    return isinstance(d, dict) and "lambda" in d


def pair_or_fan(d: dict) -> tuple[CharacteristicPair, Fan | None]:
    """A pair, with its fan when the input was a fan."""
    if is_fan(d):
        fan = fan_from_json(d)
        return fan_to_pair(fan), fan
    if is_pair(d):
        return pair_from_json(d), None
    raise InputError("expected a characteristic pair ('polytope', 'lambda') or a fan ('rays', 'max_cones')")


def tower_from_json(d: dict) -> TowerSpec:
    weights = _int_matrix(_field(d, "weights", list), "weights")
    twists = d.get("twists", {})
    if not isinstance(twists, dict):
        raise InputError("'twists' must be an object keyed by \"i,j\"")
    parsed = {}
    for key, v in twists.items():
        try:
            i, j = (int(x) for x in key.split(","))
        except ValueError as exc:
            raise InputError(f"twist key '{key}' is not of the form \"i,j\"") from exc
        parsed[(i, j)] = _int_matrix([v], "twists")[0]
    return make_tower(weights, parsed)


def hirzebruch_from_json(d: dict) -> HirzebruchParams:
    if "alpha" in d:
        return HirzebruchParams(_field(d, "alpha", int), _field(d, "beta", int))
    keys = ("a1", "b1", "a2", "b2", "c", "d")
    return hirzebruch_params(*(_field(d, k, int) for k in keys))


def dumps(obj: Any, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, sort_keys=False,
                      separators=None if pretty else (",", ":"))
