"""JSON file formats for codes, designs, profiles and erasure patterns.

Every loader reports malformed input with the file name and the JSON path of
the offending entry (and line/column for syntax errors).
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .codes import CodeError, code_from_json
from .fields import FieldError, field_from_spec
from .linalg import Subspace
from .matroids import ErasurePattern, PatternError


class InputError(ValueError):
    """Malformed input; the message names the file and location."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=_default)


def pretty_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, default=_default)


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from exc


def _need(d, key, where):
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected an object, got {type(d).__name__}")
    if key not in d:
        raise InputError(f"{where}: missing key {key!r}")
    return d[key]


def _int(v, where):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}: expected an integer, got {v!r}")
    return v


def _field(d, where):
    spec = d.get("field", d.get("q"))
    if spec is None:
        raise InputError(f"{where}: missing key 'field' (or 'q')")
    try:
        return field_from_spec(spec)
    except FieldError as exc:
        raise InputError(f"{where}.field: {exc}") from exc


def _matrix(F, rows, width, where):
    if not isinstance(rows, list):
        raise InputError(f"{where}: expected a list of row vectors")
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise InputError(f"{where}[{r}]: expected a row of length {width}")
        vals = []
        for c, x in enumerate(row):
            try:
                vals.append(F.from_json(x))
            except (ValueError, TypeError, FieldError, ZeroDivisionError) as exc:
                raise InputError(f"{where}[{r}][{c}]: bad field element {x!r} ({exc})") from exc
        out.append(vals)
    return out


def parse_subspaces(F, dim, lists, where):
    if not isinstance(lists, list):
        raise InputError(f"{where}: expected a list of basis matrices")
    return tuple(Subspace.span(F, _matrix(F, B, dim, f"{where}[{i}]"), dim) for i, B in enumerate(lists))


def profile_from_json(d, where="profile"):
    from .profiles import LocalProfile
    F = _field(d, where)
    b = _int(_need(d, "b", where), f"{where}.b")
    subs = parse_subspaces(F, b, _need(d, "subspaces", where), f"{where}.subspaces")
    if "n" in d and _int(d["n"], f"{where}.n") != len(subs):
        raise InputError(f"{where}.n: declared {d['n']} but {len(subs)} subspaces given")
    return LocalProfile(F, b, subs)


def design_from_json(d, where="design"):
    from .designs import explicit_design
    F = _field(d, where)
    k = _int(_need(d, "k", where), f"{where}.k")
    lists = _need(d, "subspaces", where)
    vecs = [_matrix(F, B, k, f"{where}.subspaces[{i}]") for i, B in enumerate(lists)]
    s = d.get("s")
    try:
        return explicit_design(F, vecs, k, s)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


def pattern_from_json(d, where="pattern"):
    m = _int(_need(d, "m", where), f"{where}.m")
    n = _int(_need(d, "n", where), f"{where}.n")
    cells = _need(d, "cells", where)
    if not isinstance(cells, list):
        raise InputError(f"{where}.cells: expected a list of [i, j] pairs")
    for t, c in enumerate(cells):
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(x, int) for x in c)):
            raise InputError(f"{where}.cells[{t}]: expected [i, j] with integer entries, got {c!r}")
    try:
        return ErasurePattern(m, n, tuple(tuple(c) for c in cells))
    except PatternError as exc:
        raise InputError(f"{where}.cells: {exc}") from exc


def code_from_file_json(d, where="code"):
    F = _field(d, where)
    G = _need(d, "generator", where)
    if not isinstance(G, list) or not G or not isinstance(G[0], list):
        raise InputError(f"{where}.generator: expected a non-empty list of rows")
    _matrix(F, G, len(G[0]), f"{where}.generator")   # location-aware element check
    try:
        return code_from_json(d)
    except (CodeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def load(path, kind):
    """Load a file of the given kind: code, design, profile or pattern."""
    parser = {"code": code_from_file_json, "design": design_from_json,
              "profile": profile_from_json, "pattern": pattern_from_json}[kind]
    return parser(load_json(path), where=str(path))
