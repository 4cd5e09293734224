"""File formats.

Triangulation: ``{"vertices": [...], "tetrahedra": [[a,b,c,d], ...]}`` with
each tetrahedron sorted and the list sorted lexicographically.  Rationals are
written as ``"p/q"`` strings.  Every artifact may carry a ``"header"`` object
(tool version and config hash), which readers ignore.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .complex import Triangulation, TriangulationError


class FormatError(ValueError):
    pass


def q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: top level must be a JSON object")
    return obj


def dumps(obj: dict, header: dict | None = None) -> str:
    if header is not None:
        obj = {"header": header, **obj}
    text = json.dumps(obj, indent=1)
    # keep arrays of scalars on one line
    text = _SCALAR_ARRAY.sub(lambda m: json.dumps(json.loads(m.group(0))), text)
    return text + "\n"


_SCALAR_ARRAY = re.compile(r'\[\s*((?:-?\d+|"[^"\\\n]*"|true|false|null)(?:,\s*(?:-?\d+|"[^"\\\n]*"|true|false|null))*)\s*\]')


def triangulation_from_obj(obj: dict, strict: bool = True, where: str = "input") -> Triangulation:
    try:
        verts = obj["vertices"]
        tets = obj["tetrahedra"]
    except KeyError as exc:
        raise FormatError(f"{where}: missing key {exc.args[0]!r}") from exc
    if not isinstance(verts, list) or not isinstance(tets, list):
        raise FormatError(f"{where}: 'vertices' and 'tetrahedra' must be lists")
    for i, tet in enumerate(tets):
        if not isinstance(tet, list) or not all(isinstance(v, int) for v in tet):
            raise FormatError(f"{where}: tetrahedron #{i} is not a list of integers")
    if strict:
        if verts != sorted(verts):
            raise FormatError(f"{where}: vertices are not sorted (use --normalize)")
        for i, tet in enumerate(tets):
            if tet != sorted(tet):
                raise FormatError(f"{where}: tetrahedron #{i} {tet} is not sorted (use --normalize)")
        if tets != sorted(tets):
            bad = next(i for i in range(1, len(tets)) if tets[i] < tets[i - 1])
            raise FormatError(f"{where}: tetrahedron list is not sorted at #{bad} (use --normalize)")
    try:
        return Triangulation(tuple(verts), tuple(tuple(t) for t in tets))
    except TriangulationError as exc:
        raise FormatError(f"{where}: {exc}") from exc


def read_triangulation(path, strict: bool = True) -> Triangulation:
    return triangulation_from_obj(load_json(path), strict, str(path))


def coords_to_obj(coords: dict, key: str) -> dict:
    return {key: {str(v): [q(x) for x in p] for v, p in sorted(coords.items())}}


def coords_from_obj(obj: dict, key: str, dim: int) -> dict:
    if key not in obj:
        raise FormatError(f"missing {key!r}")
    out = {}
    for v, p in obj[key].items():
        if len(p) != dim:
            raise FormatError(f"vertex {v}: expected {dim} coordinates, got {len(p)}")
        out[int(v)] = tuple(parse_q(x) for x in p)
    return out
