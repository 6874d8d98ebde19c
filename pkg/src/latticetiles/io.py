"""JSON encodings of polygons and lattices with rationals as lowest-terms strings."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import GeometryError
from .geometry import CSPolygon, Lattice, Rat2, polygon_from_points, rat


class InputFormatError(ValueError):
    """Malformed polygon or lattice JSON."""


def fmt(q: Fraction) -> str:
    return str(Fraction(q))


def point_json(p: Rat2) -> list[str]:
    return [fmt(p.x), fmt(p.y)]


def polygon_to_json(P: CSPolygon) -> dict:
    return {"vertices": [point_json(v) for v in P.vertices]}


def lattice_to_json(L: Lattice) -> dict:
    return {"basis": [point_json(b) for b in L.basis]}


def _pair(item, what: str) -> Rat2:
    if not isinstance(item, (list, tuple)) or len(item) != 2:
        raise InputFormatError(f"{what}: expected a pair of rational strings, got {item!r}")
    if not all(isinstance(c, (str, int)) and not isinstance(c, bool) for c in item):
        raise InputFormatError(f"{what}: coordinates must be strings such as \"1/2\", got {item!r}")
    try:
        return Rat2(rat(str(item[0])), rat(str(item[1])))
    except (GeometryError, ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"{what}: {exc}") from None


def polygon_from_json(data) -> CSPolygon:
    if not isinstance(data, dict) or "vertices" not in data or not isinstance(data["vertices"], list):
        raise InputFormatError('polygon JSON must be an object with a "vertices" list')
    pts = [_pair(item, f"vertex {i}") for i, item in enumerate(data["vertices"])]
    return polygon_from_points(pts)


def lattice_from_json(data) -> Lattice:
    if not isinstance(data, dict) or not isinstance(data.get("basis"), list) or len(data["basis"]) != 2:
        raise InputFormatError('lattice JSON must be an object with a two-vector "basis"')
    b1, b2 = (_pair(item, f"basis vector {i}") for i, item in enumerate(data["basis"]))
    if b1.cross(b2) == 0:
        raise InputFormatError("lattice basis vectors are linearly dependent")
    return Lattice(b1, b2)


def _load(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_polygon(path) -> CSPolygon:
    return polygon_from_json(_load(path))


def load_lattice(path) -> Lattice:
    return lattice_from_json(_load(path))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
