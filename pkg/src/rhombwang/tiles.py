"""Colored rhombus Wang tiles and tilesets.

A tile is a shape plus one color per side (the quintuple (r, a0..a3)); a
tileset is a finite set of tiles over a shapeset with at least one tile per
shape. Includes the color-erasing projection, standalone color-validity
checking, and closure under rotations that map the direction basis to itself.

Colors starting with "!" form a reserved namespace (used by the reductions
for blank/fresh colors) and are rejected for ordinary construction so user
alphabets can never collide with them.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .geometry import (
    DirectionBasis,
    ExactPoint,
    Patch,
    PlacedRhombus,
    Shape,
    ShapeSet,
)

RESERVED_COLOR_PREFIX = "!"


class TilesetError(ValueError):
    """Invalid tile or tileset. .code holds the reason."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}{': ' + detail if detail else ''}")
        self.code = code


class Tile:
    """A rhombus Wang tile: shape + colors (a0, a1, a2, a3), color a_i on
    side i of the placement convention."""

    __slots__ = ("shape", "colors", "_key")

    def __init__(self, shape: Shape, colors: Sequence[str]):
        colors = tuple(colors)
        if len(colors) != 4 or not all(isinstance(c, str) and c for c in colors):
            raise TilesetError("BAD_COLORS", "need 4 nonempty color strings")
        self.shape = shape
        self.colors = colors
        self._key = (shape.key, colors)

    @property
    def key(self):
        return self._key

    def __eq__(self, other) -> bool:
        if isinstance(other, Tile):
            return self.shape.basis is other.shape.basis and self._key == other._key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Tile({self.shape!r}, {self.colors})"

    def placed(self, anchor: ExactPoint) -> PlacedRhombus:
        return PlacedRhombus(self.shape, anchor, self.colors)

    def uses_reserved_color(self) -> bool:
        return any(c.startswith(RESERVED_COLOR_PREFIX) for c in self.colors)


class Tileset:
    """A finite set of tiles over a shapeset, every shape carrying at least
    one tile. Tiles are kept in canonical (shape key, colors) order.

    color_action, if given, is the hook rotation_closure uses to rotate
    colors together with directions: action(color, shift, sign) returns the
    color's name after the rotation z -> sign * zeta^shift * z.
    """

    def __init__(
        self,
        shapeset: ShapeSet,
        tiles: Iterable[Tile],
        name: str = "",
        color_action: Optional[Callable[[str, int, int], str]] = None,
        allow_reserved: bool = False,
    ):
        tiles = tuple(sorted(set(tiles), key=lambda t: t.key))
        if not tiles:
            raise TilesetError("EMPTY")
        basis = shapeset.basis
        covered = set()
        for t in tiles:
            if t.shape.basis is not basis:
                raise TilesetError("BASIS_MISMATCH")
            if not shapeset.has_key(t.shape.key):
                raise TilesetError(
                    "SHAPE_NOT_IN_SHAPESET", f"tile shape {t.shape.key}"
                )
            if not allow_reserved and t.uses_reserved_color():
                raise TilesetError(
                    "RESERVED_COLOR",
                    f"colors starting with {RESERVED_COLOR_PREFIX!r} are reserved",
                )
            covered.add(t.shape.key)
        missing = [k for k in shapeset.keys() if k not in covered]
        if missing:
            raise TilesetError("SHAPE_WITHOUT_TILE", f"shapes {missing}")
        self.shapeset = shapeset
        self.tiles = tiles
        self.name = name
        self.color_action = color_action
        self._by_shape: dict = {}
        for t in tiles:
            self._by_shape.setdefault(t.shape.key, []).append(t)

    @property
    def basis(self) -> DirectionBasis:
        return self.shapeset.basis

    @property
    def colors(self) -> tuple[str, ...]:
        return tuple(sorted({c for t in self.tiles for c in t.colors}))

    def __iter__(self) -> Iterator[Tile]:
        return iter(self.tiles)

    def __len__(self) -> int:
        return len(self.tiles)

    def __contains__(self, tile) -> bool:
        return isinstance(tile, Tile) and tile.key in {t.key for t in self.tiles}

    def __eq__(self, other) -> bool:
        if isinstance(other, Tileset):
            return (
                self.basis is other.basis
                and self.shapeset == other.shapeset
                and tuple(t.key for t in self.tiles)
                == tuple(t.key for t in other.tiles)
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.basis.order, tuple(t.key for t in self.tiles)))

    def __repr__(self) -> str:
        nm = f"{self.name!r}, " if self.name else ""
        return f"Tileset({nm}{len(self.tiles)} tiles, {len(self.shapeset)} shapes)"

    def tiles_for_shape(self, shape_key) -> tuple[Tile, ...]:
        return tuple(self._by_shape.get(tuple(shape_key), ()))

    def tile_keys(self) -> tuple:
        return tuple(t.key for t in self.tiles)


# ---------------------------------------------------------------------------
# color erasing


def erase_colors(x: Union[Tile, Tileset, Patch, PlacedRhombus]):
    """The color-erasing projection: tiles to shapes, tilesets to shapesets,
    colored patches/placements to geometric ones (anchors preserved)."""
    if isinstance(x, Tile):
        return x.shape
    if isinstance(x, Tileset):
        shapes = {t.shape for t in x.tiles}
        return ShapeSet(x.basis, shapes)
    if isinstance(x, PlacedRhombus):
        return x.erase_colors()
    if isinstance(x, Patch):
        return x.erase_colors()
    raise TypeError(f"cannot erase colors of {type(x).__name__}")


# ---------------------------------------------------------------------------
# color validity


def check_color_validity(
    patch: Union[Patch, Iterable[PlacedRhombus]],
    require_all_colored: bool = False,
) -> bool:
    """Do the two tiles of every interior edge agree on its color?

    Works on a Patch or a raw placement list (the latter lets externally
    loaded data be checked without the construction-time enforcement).
    Uncolored sides constrain nothing unless require_all_colored is set.
    """
    placements = list(patch) if not isinstance(patch, Patch) else list(patch.placements)
    edge_sides: dict = {}
    for rh in placements:
        if require_all_colored and rh.colors is None:
            return False
        for s in range(4):
            edge_sides.setdefault(rh.edge_key(s), []).append((rh, s))
    for inc in edge_sides.values():
        if len(inc) < 2:
            continue
        (ra, sa), (rb, sb) = inc[0], inc[1]
        ca, cb = ra.side_color(sa), rb.side_color(sb)
        if ca is not None and cb is not None and ca != cb:
            return False
        if require_all_colored and (ca is None or cb is None):
            return False
    return True


# ---------------------------------------------------------------------------
# rotation closure


def rotation_step(order: int, k: int) -> tuple[int, int]:
    """The rotation by 2*pi/k as (shift, sign): z -> sign * zeta^shift * z.

    Exists iff a := 2N/k is an integer and is even or N is odd; otherwise
    ROTATION_NOT_IN_BASIS. The odd case uses -zeta^m = e^{i pi} zeta^m,
    available because a parallelogram is centrally symmetric even when -u is
    not itself a listed direction.
    """
    if k < 1:
        raise TilesetError("ROTATION_NOT_IN_BASIS", "k must be >= 1")
    if (2 * order) % k != 0:
        raise TilesetError(
            "ROTATION_NOT_IN_BASIS", f"2*pi/{k} is not a multiple of pi/{order}"
        )
    a = (2 * order) // k
    if a % 2 == 0:
        return (a // 2) % order, 1
    if order % 2 == 1:
        return ((a - order) // 2) % order, -1
    raise TilesetError(
        "ROTATION_NOT_IN_BASIS",
        f"rotation by 2*pi/{k} does not map the {order} directions to themselves",
    )


def rotate_tile(tile: Tile, shift: int, sign: int,
                color_action: Optional[Callable[[str, int, int], str]] = None) -> Tile:
    """Rotate a tile by z -> sign * zeta^shift * z and re-canonicalize.

    The rotated parallelogram is re-anchored at its canonical corner (the
    one from which +u and +v reach neighbors) and side colors are carried
    over by exact segment matching, then renamed through color_action.
    """
    basis = tile.shape.basis
    ring = basis.ring
    u2 = ring.unit(tile.shape.c1 + shift)
    v2 = ring.unit(tile.shape.c2 + shift)
    if sign < 0:
        u2, v2 = -u2, -v2
    corners = (ring.zero, u2, u2 + v2, v2)
    # original side i runs corners[i] -> corners[i+1] and carries colors[i]
    seg_color = {}
    for i in range(4):
        a, b = corners[i].co, corners[(i + 1) % 4].co
        seg_color[(a, b) if a <= b else (b, a)] = tile.colors[i]

    # canonical shape of the rotated parallelogram
    def cls(d: int) -> int:
        d %= basis.order
        return d % basis.n_classes if basis.order % 2 == 0 else d

    g1, g2 = cls(tile.shape.c1 + shift), cls(tile.shape.c2 + shift)
    if g1 > g2:
        g1, g2 = g2, g1
    new_shape = Shape(basis, g1, g2)
    nu, nv = new_shape.u, new_shape.v

    corner_keys = {c.co for c in corners}
    anchor = None
    for c in corners:
        if (c + nu).co in corner_keys and (c + nv).co in corner_keys:
            anchor = c
            break
    assert anchor is not None, "rotated parallelogram has a canonical corner"
    canon = (anchor, anchor + nu, anchor + nu + nv, anchor + nv)
    new_colors = []
    for i in range(4):
        a, b = canon[i].co, canon[(i + 1) % 4].co
        color = seg_color[(a, b) if a <= b else (b, a)]
        if color_action is not None:
            color = color_action(color, shift, sign)
        new_colors.append(color)
    return Tile(new_shape, tuple(new_colors))


def rotation_closure(ts: Tileset, k: int) -> Tileset:
    """The smallest tileset containing ts closed under rotation by multiples
    of 2*pi/k, with shapes and colors rotating together (via the tileset's
    color_action hook; identity renaming by default)."""
    shift, sign = rotation_step(ts.basis.order, k)
    seen = {t.key: t for t in ts.tiles}
    frontier = list(ts.tiles)
    while frontier:
        t = frontier.pop()
        rt = rotate_tile(t, shift, sign, ts.color_action)
        if rt.key not in seen:
            seen[rt.key] = rt
            frontier.append(rt)
    tiles = sorted(seen.values(), key=lambda t: t.key)
    shapes = {t.shape for t in tiles}
    shapeset = ShapeSet(ts.basis, shapes)
    return Tileset(
        shapeset,
        tiles,
        name=f"{ts.name}+rot{k}" if ts.name else "",
        color_action=ts.color_action,
        allow_reserved=True,
    )
