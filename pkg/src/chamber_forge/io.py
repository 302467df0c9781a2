"""Canonical JSON documents for fans, groups, monoids and reports.

Every document carries ``"schema_version": "1"``.  Integers whose magnitude
needs more than 53 bits are written as decimal strings so that readers
using IEEE doubles do not silently round them; rationals are written as
``"p/q"`` strings.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .dvr import DvrFan
from .errors import ChamberForgeError
from .polyhedral import Fan, MatrixGroup, fan_validate

SCHEMA_VERSION = "1"
_SAFE = 2 ** 53


class DocumentError(ChamberForgeError, ValueError):
    """Malformed or inconsistent input document."""


def to_jsonable(obj):
    """Recursively convert tuples, sets, fractions and big integers."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < _SAFE else str(obj)
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return to_jsonable(obj.numerator)
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(x) for x in obj), key=repr)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(obj) -> str:
    text = json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def parse_int(x) -> int:
    if isinstance(x, bool):
        raise DocumentError("booleans are not integers")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise DocumentError(f"expected an integer, got {x!r}")


def _int_vector(v, length=None, what="vector"):
    if not isinstance(v, list):
        raise DocumentError(f"{what} must be an array")
    out = tuple(parse_int(x) for x in v)
    if length is not None and len(out) != length:
        raise DocumentError(f"{what} has length {len(out)}, expected {length}")
    return out


def _check_version(doc):
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc.get('schema_version')!r}")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def read_document(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc


# --------------------------------------------------------------------------
# fans


def fan_to_document(f: Fan) -> dict:
    """FanDocument listing the maximal cones of ``f`` by ray index."""
    return {
        "schema_version": SCHEMA_VERSION,
        "rank": f.rank,
        "rays": [list(r) for r in f.rays],
        "cones": [sorted(c) for c in f.maximal_cones],
    }


def _fan_parts(doc, rank_key="rank"):
    _check_version(doc)
    rank = parse_int(doc.get(rank_key))
    if rank < 0:
        raise DocumentError("rank must be nonnegative")
    rays = doc.get("rays")
    cones = doc.get("cones")
    if not isinstance(rays, list) or not isinstance(cones, list):
        raise DocumentError("rays and cones must be arrays")
    rays = [_int_vector(r, rank, "ray") for r in rays]
    out = []
    for c in cones:
        idx = _int_vector(c, None, "cone")
        if any(i < 0 or i >= len(rays) for i in idx):
            raise DocumentError(f"cone {list(idx)} has a ray index out of range")
        out.append(idx)
    return rank, rays, out


def fan_from_document(doc) -> Fan:
    """Decode and validate a FanDocument.

    Raises
    ------
    DocumentError
        On malformed input, or when the cones do not form a fan.
    """
    rank, rays, cones = _fan_parts(doc)
    if any(not any(r) for r in rays):
        raise DocumentError("zero vector given as a ray")
    try:
        f = Fan.from_cones(rank, [[rays[i] for i in c] for c in cones])
    except ChamberForgeError as exc:
        raise DocumentError(f"invalid cone: {exc}") from exc
    rep = fan_validate(f)
    if not rep.ok:
        raise DocumentError("not a fan: " + "; ".join(rep.errors))
    return f


def dvr_fan_to_document(d: DvrFan) -> dict:
    doc = fan_to_document(d.fan)
    doc["base_rank"] = d.base_rank
    return doc


def dvr_fan_from_document(doc) -> DvrFan:
    _check_version(doc)
    base = parse_int(doc.get("base_rank"))
    doc = dict(doc)
    doc.setdefault("rank", base + 1)
    f = fan_from_document(doc)
    if f.rank != base + 1:
        raise DocumentError("rank must equal base_rank + 1")
    try:
        return DvrFan(base, f)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


# --------------------------------------------------------------------------
# groups and monoids


def group_to_document(g: MatrixGroup) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "rank": g.rank,
        "generators": [[list(row) for row in m] for m in g.generators],
    }


def group_from_document(doc) -> MatrixGroup:
    _check_version(doc)
    rank = parse_int(doc.get("rank"))
    gens = doc.get("generators")
    if not isinstance(gens, list):
        raise DocumentError("generators must be an array of matrices")
    mats = []
    for m in gens:
        if not isinstance(m, list) or len(m) != rank:
            raise DocumentError("each generator must be a rank x rank matrix")
        mats.append(tuple(_int_vector(row, rank, "matrix row") for row in m))
    try:
        return MatrixGroup(mats, rank)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def generators_from_json(value) -> list[tuple[int, ...]]:
    """Monoid generators from ``[[..], ..]``, ``[2, 3]`` (rank one) or a document."""
    if isinstance(value, dict):
        _check_version(value)
        value = value.get("generators")
    if not isinstance(value, list) or not value:
        raise DocumentError("generators must be a nonempty array")
    if all(isinstance(x, (int, str)) and not isinstance(x, bool) for x in value):
        return [(parse_int(x),) for x in value]
    gens = [_int_vector(g, None, "generator") for g in value]
    if len({len(g) for g in gens}) != 1:
        raise DocumentError("generators must all have the same length")
    return gens


def report(command: str, inputs, verdicts: dict, witnesses: dict, timing: dict | None = None) -> dict:
    """Report document; ``timing`` is included only when given."""
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs_digest": digest(inputs),
        "verdicts": verdicts,
        "witnesses": witnesses,
    }
    if timing is not None:
        out["timing"] = timing
    return out
