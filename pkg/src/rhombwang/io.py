"""JSON file formats for shapesets, tilesets, patches, patterns, and square
Wang tilesets.

Every document is a JSON object carrying ``format_version`` (currently 1) and
``kind``. Exactness is preserved: anchors are integer coefficient vectors on
the direction basis, never floats. Pattern list files are order-significant
(forbidden lists are prefixes of an enumeration). Writes are atomic (temp
file + rename), so a crashed run never leaves a half-written document.

Schemas (all with "format_version": 1):

- shapeset: {"kind": "shapeset", "basis_order": N, "shapes": [[c1, c2], ...]}
- tileset: {"kind": "tileset", "basis_order": N, "name": str,
  "shapes": [[c1, c2], ...], "colors": [str, ...],
  "tiles": [{"shape": [c1, c2], "edges": [a0, a1, a2, a3]}, ...]}
- patch: {"kind": "patch", "basis_order": N,
  "placed": [{"shape": [c1, c2], "anchor": [phi(N) ints, reduced basis],
              "colors": [a0..a3]?}, ...]}
- pattern: patch schema with "kind": "pattern" (anchors canonical)
- patterns: {"kind": "patterns",
  "patterns": [{"basis_order": N, "placed": [...]}, ...]}
- wang_tileset: {"kind": "wang_tileset", "colors": [str, ...],
  "tiles": [[a0, a1, a2, a3], ...]}

A tileset's ``color_action`` is a callable and is not representable in a
file; it is dropped on save (tileset equality ignores it). Loaders reject
"!"-reserved colors by default, mirroring the constructors; pass
``allow_reserved=True`` to reload reduction outputs that use "!blank" or
fresh "!f..." colors.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Iterable, Sequence

from .geometry import (
    DirectionBasis,
    Patch,
    PlacedRhombus,
    ShapeSet,
    point_from_vkey,
)
from .patterns import Pattern, canonicalize
from .reductions import SquareWangTileset
from .tiles import Tile, Tileset

FORMAT_VERSION = 1

KINDS = ("shapeset", "tileset", "patch", "pattern", "patterns", "wang_tileset")


class IOFormatError(ValueError):
    """A document failed to parse or violated its schema."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _want(data, field, types, where):
    if not isinstance(data, dict):
        raise IOFormatError("expected a JSON object", where)
    if field not in data:
        raise IOFormatError(f"missing field '{field}'", where)
    val = data[field]
    if not isinstance(val, types):
        names = types.__name__ if isinstance(types, type) else "/".join(
            t.__name__ for t in types
        )
        raise IOFormatError(
            f"field '{field}' must be {names}, got {type(val).__name__}", where
        )
    return val


def _check_header(data, expected_kind: str, where: str) -> None:
    version = _want(data, "format_version", int, where)
    if version != FORMAT_VERSION:
        raise IOFormatError(
            f"field 'format_version' is {version}, expected {FORMAT_VERSION}",
            where,
        )
    kind = _want(data, "kind", str, where)
    if kind != expected_kind:
        raise IOFormatError(
            f"field 'kind' is '{kind}', expected '{expected_kind}'", where
        )


def _int_pair(val, field, where) -> tuple[int, int]:
    if (
        not isinstance(val, list)
        or len(val) != 2
        or not all(isinstance(x, int) for x in val)
    ):
        raise IOFormatError(f"field '{field}' must be a pair of integers", where)
    return val[0], val[1]


def _colors4(val, field, where, allow_reserved: bool) -> tuple[str, ...]:
    if (
        not isinstance(val, list)
        or len(val) != 4
        or not all(isinstance(c, str) and c for c in val)
    ):
        raise IOFormatError(
            f"field '{field}' must be 4 nonempty color strings", where
        )
    if not allow_reserved:
        for c in val:
            if c.startswith("!"):
                raise IOFormatError(
                    f"field '{field}' uses reserved color '{c}' "
                    "(load with allow_reserved=True to accept it)",
                    where,
                )
    return tuple(val)


# ---------------------------------------------------------------------------
# data <-> object


def shapeset_to_data(ss: ShapeSet) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "shapeset",
        "basis_order": ss.basis.order,
        "shapes": [list(k) for k in ss.keys()],
    }


def shapeset_from_data(data, where: str = "shapeset") -> ShapeSet:
    _check_header(data, "shapeset", where)
    order = _want(data, "basis_order", int, where)
    shapes = _want(data, "shapes", list, where)
    if not shapes:
        raise IOFormatError("field 'shapes' is empty", where)
    pairs = [
        _int_pair(s, f"shapes[{i}]", where) for i, s in enumerate(shapes)
    ]
    try:
        return ShapeSet.from_pairs(order, pairs)
    except ValueError as e:
        raise IOFormatError(str(e), where) from e


def tileset_to_data(ts: Tileset) -> dict:
    colors = sorted({c for t in ts.tiles for c in t.colors})
    return {
        "format_version": FORMAT_VERSION,
        "kind": "tileset",
        "basis_order": ts.shapeset.basis.order,
        "name": ts.name,
        "shapes": [list(k) for k in ts.shapeset.keys()],
        "colors": colors,
        "tiles": [
            {"shape": list(t.shape.key), "edges": list(t.colors)}
            for t in ts.tiles
        ],
    }


def tileset_from_data(
    data, where: str = "tileset", allow_reserved: bool = False
) -> Tileset:
    _check_header(data, "tileset", where)
    order = _want(data, "basis_order", int, where)
    name = _want(data, "name", str, where)
    shapes = _want(data, "shapes", list, where)
    pairs = [
        _int_pair(s, f"shapes[{i}]", where) for i, s in enumerate(shapes)
    ]
    declared = _want(data, "colors", list, where)
    if not all(isinstance(c, str) for c in declared):
        raise IOFormatError("field 'colors' must be a list of strings", where)
    declared = set(declared)
    entries = _want(data, "tiles", list, where)
    try:
        ss = ShapeSet.from_pairs(order, pairs)
        tiles = []
        for i, e in enumerate(entries):
            w = f"{where}.tiles[{i}]"
            c1, c2 = _int_pair(_want(e, "shape", list, w), "shape", w)
            edges = _colors4(
                _want(e, "edges", list, w), "edges", w, allow_reserved
            )
            for c in edges:
                if c not in declared:
                    raise IOFormatError(
                        f"edge color '{c}' is not in the 'colors' list", w
                    )
            tiles.append(Tile(ss.get(c1, c2), edges))
        return Tileset(ss, tiles, name=name, allow_reserved=allow_reserved)
    except IOFormatError:
        raise
    except ValueError as e:
        raise IOFormatError(str(e), where) from e


def _placed_to_data(rh: PlacedRhombus) -> dict:
    # anchors are stored reduced (length phi(N)): unique per point, so equal
    # patches emit equal bytes whatever construction path produced them
    out = {"shape": list(rh.shape.key), "anchor": list(rh.anchor.red.co)}
    if rh.colors is not None:
        out["colors"] = list(rh.colors)
    return out


def _placed_from_data(e, ss: ShapeSet, where: str, allow_reserved: bool):
    c1, c2 = _int_pair(_want(e, "shape", list, where), "shape", where)
    anchor = _want(e, "anchor", list, where)
    if not all(isinstance(x, int) for x in anchor):
        raise IOFormatError("field 'anchor' must be a list of integers", where)
    colors = None
    if "colors" in e:
        colors = _colors4(e["colors"], "colors", where, allow_reserved)
    try:
        point = point_from_vkey(ss.basis, tuple(anchor))
        return PlacedRhombus(ss.get(c1, c2), point, colors)
    except ValueError as e2:
        raise IOFormatError(str(e2), where) from e2


def patch_to_data(patch: Patch, kind: str = "patch") -> dict:
    keys = sorted({rh.shape.key for rh in patch})
    placed = list(patch)
    if kind == "pattern":
        # canonical order: a pattern's placement sequence is not meaningful,
        # and enumeration may discover equal patterns in different orders
        placed.sort(key=lambda rh: rh.key)
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "basis_order": patch.basis.order,
        "shapes": [list(k) for k in keys],
        "placed": [_placed_to_data(rh) for rh in placed],
    }


def patch_from_data(
    data, where: str = "patch", allow_reserved: bool = False,
    kind: str = "patch",
) -> Patch:
    _check_header(data, kind, where)
    order = _want(data, "basis_order", int, where)
    placed = _want(data, "placed", list, where)
    try:
        ss = ShapeSet.all_shapes(order)
    except ValueError as e:
        raise IOFormatError(str(e), where) from e
    rhombi = [
        _placed_from_data(e, ss, f"{where}.placed[{i}]", allow_reserved)
        for i, e in enumerate(placed)
    ]
    try:
        return Patch.from_placements(DirectionBasis(order), rhombi)
    except ValueError as e:
        raise IOFormatError(str(e), where) from e


def pattern_to_data(pattern: Pattern) -> dict:
    return patch_to_data(pattern.patch, kind="pattern")


def pattern_from_data(
    data, where: str = "pattern", allow_reserved: bool = False
) -> Pattern:
    return canonicalize(
        patch_from_data(data, where, allow_reserved, kind="pattern")
    )


def patterns_to_data(patterns: Iterable[Pattern]) -> dict:
    entries = []
    for p in patterns:
        d = pattern_to_data(p)
        del d["format_version"], d["kind"]
        entries.append(d)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "patterns",
        "patterns": entries,
    }


def patterns_from_data(
    data, where: str = "patterns", allow_reserved: bool = False
) -> tuple[Pattern, ...]:
    _check_header(data, "patterns", where)
    entries = _want(data, "patterns", list, where)
    out = []
    for i, e in enumerate(entries):
        w = f"{where}.patterns[{i}]"
        inner = dict(e) if isinstance(e, dict) else e
        if isinstance(inner, dict):
            inner.setdefault("format_version", FORMAT_VERSION)
            inner.setdefault("kind", "pattern")
        out.append(pattern_from_data(inner, w, allow_reserved))
    return tuple(out)


def wang_to_data(wang: SquareWangTileset) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "wang_tileset",
        "name": wang.name,
        "colors": list(wang.colors),
        "tiles": [list(t) for t in wang.tiles],
    }


def wang_from_data(data, where: str = "wang_tileset") -> SquareWangTileset:
    _check_header(data, "wang_tileset", where)
    name = data.get("name", "")
    if not isinstance(name, str):
        raise IOFormatError("field 'name' must be a string", where)
    colors = _want(data, "colors", list, where)
    entries = _want(data, "tiles", list, where)
    tiles = [
        _colors4(t, f"tiles[{i}]", where, allow_reserved=False)
        for i, t in enumerate(entries)
    ]
    try:
        return SquareWangTileset(colors, tiles, name=name)
    except ValueError as e:
        raise IOFormatError(str(e), where) from e


# ---------------------------------------------------------------------------
# files

_TO_DATA = {
    "shapeset": shapeset_to_data,
    "tileset": tileset_to_data,
    "patch": patch_to_data,
    "pattern": pattern_to_data,
    "patterns": patterns_to_data,
    "wang_tileset": wang_to_data,
}


def emit(data: dict) -> str:
    """Deterministic text for a document dict (stable key order, 2-space
    indent, trailing newline)."""
    return json.dumps(data, indent=2, ensure_ascii=True) + "\n"


def write_text(path: str, text: str) -> None:
    """Atomically write text: temp file in the target directory, then rename
    over the destination."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".rhombwang-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_document(path: str, data: dict) -> None:
    """Atomic write of a document dict."""
    write_text(path, emit(data))


def read_document(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise IOFormatError(str(e), path) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise IOFormatError(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}", path
        ) from e
    if not isinstance(data, dict):
        raise IOFormatError("top level must be a JSON object", path)
    return data


def save_shapeset(path: str, ss: ShapeSet) -> None:
    write_document(path, shapeset_to_data(ss))


def load_shapeset(path: str) -> ShapeSet:
    return shapeset_from_data(read_document(path), path)


def save_tileset(path: str, ts: Tileset) -> None:
    write_document(path, tileset_to_data(ts))


def load_tileset(path: str, allow_reserved: bool = False) -> Tileset:
    return tileset_from_data(read_document(path), path, allow_reserved)


def save_patch(path: str, patch: Patch) -> None:
    write_document(path, patch_to_data(patch))


def load_patch(path: str, allow_reserved: bool = False) -> Patch:
    return patch_from_data(read_document(path), path, allow_reserved)


def save_pattern(path: str, pattern: Pattern) -> None:
    write_document(path, pattern_to_data(pattern))


def load_pattern(path: str, allow_reserved: bool = False) -> Pattern:
    return pattern_from_data(read_document(path), path, allow_reserved)


def save_patterns(path: str, patterns: Sequence[Pattern]) -> None:
    write_document(path, patterns_to_data(patterns))


def load_patterns(
    path: str, allow_reserved: bool = False
) -> tuple[Pattern, ...]:
    return patterns_from_data(read_document(path), path, allow_reserved)


def save_wang(path: str, wang: SquareWangTileset) -> None:
    write_document(path, wang_to_data(wang))


def load_wang(path: str) -> SquareWangTileset:
    return wang_from_data(read_document(path), path)


def load_any(path: str, allow_reserved: bool = False):
    """Read any known document kind; returns (kind, object)."""
    data = read_document(path)
    kind = _want(data, "kind", str, path)
    if kind == "shapeset":
        return kind, shapeset_from_data(data, path)
    if kind == "tileset":
        return kind, tileset_from_data(data, path, allow_reserved)
    if kind == "patch":
        return kind, patch_from_data(data, path, allow_reserved)
    if kind == "pattern":
        return kind, pattern_from_data(data, path, allow_reserved)
    if kind == "patterns":
        return kind, patterns_from_data(data, path, allow_reserved)
    if kind == "wang_tileset":
        return kind, wang_from_data(data, path)
    raise IOFormatError(
        f"unknown kind '{kind}' (known: {', '.join(KINDS)})", path
    )
