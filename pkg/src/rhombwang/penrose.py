"""Penrose rhombus Wang tilesets and a pentagrid patch generator.

The classical Penrose rhombi carry arrows on their edges: adjacent tiles
must agree on the type (single or double) and direction of the arrow on a
shared edge. Arrows are not colors, but over a fixed direction family every
edge has a canonical orientation, so an arrow is equivalent to a pair (type,
with-or-against), and that pair is a color. Translating the arrow-labeled
family gives a 20-tile Wang tileset on the 10 rhombus shapes of the N=5
basis (two tiles per shape), closed under rotation by 2*pi/5 with four free
orbits, so a 4-tile representative set regenerates it.

The arrow assignment is driven by vertex indices. In a pentagrid tiling
every vertex carries an index (the sum of its five integer coordinates),
consecutive along every edge, and taking values in {1,2,3,4} after
normalizing the grid offsets to an integral sum. Edges between indices 1,2
carry a single arrow toward the 2 end; between 2,3 a double arrow toward
the 3 end; between 3,4 a single arrow toward the 3 end. A rhombus anchor
then has index 1 or 2, which selects one of the two tiles per shape, and
adjacent tiles agree on shared edges by construction since the indices are
per-vertex. Aperiodicity of the resulting Wang tileset is not claimed here;
the tests record finite-window consistency only.

pentagrid_patch builds geometric test patches: the rhombus dual to the
crossing of grid line a of family j with line b of family k, for all line
indices in [-window, window], computed in exact cyclotomic arithmetic.
Grids with three concurrent lines are rejected (SINGULAR_GRID), never
perturbed. With colored=True the generator also applies the arrow coloring,
which requires the offsets to sum to an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cyclotomic import QCyc
from .geometry import (
    DirectionBasis,
    Patch,
    PlacedRhombus,
    Shape,
    ShapeSet,
)
from .patterns import full_shift
from .solver import periodic_certificate
from .tiles import Tile, Tileset, rotation_closure

Rational = Union[int, Fraction]


class PenroseError(ValueError):
    """Invalid Penrose-fixture input. .code holds the reason."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}{': ' + detail if detail else ''}")
        self.code = code


# ---------------------------------------------------------------------------
# arrow labels and their color translation


@dataclass(frozen=True)
class ArrowLabel:
    """One edge arrow: kind in {single, double}, sign in {along, against}
    relative to the canonical orientation of the edge's direction class."""

    kind: str
    sign: str

    def __post_init__(self):
        if self.kind not in ("single", "double"):
            raise PenroseError("BAD_ARROW", f"kind {self.kind!r}")
        if self.sign not in ("along", "against"):
            raise PenroseError("BAD_ARROW", f"sign {self.sign!r}")


@dataclass(frozen=True)
class ArrowTile:
    """A rhombus shape with one ArrowLabel per side (side order as Tile)."""

    shape: Shape
    arrows: tuple

    def __post_init__(self):
        if len(self.arrows) != 4 or not all(
            isinstance(a, ArrowLabel) for a in self.arrows
        ):
            raise PenroseError("BAD_ARROW", "need exactly 4 ArrowLabels")


def _arrow_color(cls_idx: int, label: ArrowLabel) -> str:
    kind = "s" if label.kind == "single" else "d"
    sign = "+" if label.sign == "along" else "-"
    return f"{kind}{cls_idx}{sign}"


def arrows_to_colors(tile: ArrowTile) -> Tile:
    """Translate an arrow-labeled tile into a Wang tile.

    Per direction class k the four (kind, sign) combinations map to the four
    colors sk+/sk-/dk+/dk-; the assignment for class k is the class-0
    assignment rotated k steps, so rotating a tile commutes with the
    translation. Arrows match across a shared edge exactly when the
    translated colors are equal, because both tiles see the same class and
    the map (kind, sign) -> color is injective per class.
    """
    basis = tile.shape.basis
    if basis.order != 5:
        raise PenroseError(
            "UNSUPPORTED_DIRECTION", f"order {basis.order} is not the N=5 family"
        )
    colors = tuple(
        _arrow_color(tile.shape.side_class(s), tile.arrows[s]) for s in range(4)
    )
    return Tile(tile.shape, colors)


def penrose_color_action(color: str, shift: int, sign: int) -> str:
    """Rotate an arrow color: the direction digit advances by the class
    shift, and a sign-reversing rotation flips along/against because it
    reverses the canonical orientation of every direction."""
    kind, digit, arrow_sign = color[0], int(color[1]), color[2]
    if sign < 0:
        arrow_sign = "+" if arrow_sign == "-" else "-"
    return f"{kind}{(digit + shift) % 5}{arrow_sign}"


# vertex indices around a tile whose anchor has index m: anchor m, the two
# side neighbors m+1, the far corner m+2; every edge runs low->high along
# its canonical direction. Arrow rule by the low endpoint index:
# {1,2} single toward 2, {2,3} double toward 3, {3,4} single toward 3.
_EDGE_ARROW_BY_LOW = {
    1: ArrowLabel("single", "along"),
    2: ArrowLabel("double", "along"),
    3: ArrowLabel("single", "against"),
}
# low endpoint index of side s, as an offset from the anchor index
_SIDE_LOW_OFFSET = (0, 1, 1, 0)


def _family_arrows(m: int) -> tuple:
    if m not in (1, 2):
        raise PenroseError("BAD_INDEX", f"anchor index {m} not in {{1, 2}}")
    return tuple(_EDGE_ARROW_BY_LOW[m + off] for off in _SIDE_LOW_OFFSET)


def penrose_arrow_tiles() -> tuple:
    """The Penrose family as arrow-labeled tiles: every N=5 shape in both
    anchor-index versions, 20 tiles."""
    out = []
    for shape in ShapeSet.all_shapes(5):
        for m in (1, 2):
            out.append(ArrowTile(shape, _family_arrows(m)))
    return tuple(out)


def penrose_wang20() -> Tileset:
    """The 20-tile, 10-shape Penrose Wang tileset (translation classes)."""
    tiles = [arrows_to_colors(t) for t in penrose_arrow_tiles()]
    return Tileset(
        ShapeSet.all_shapes(5),
        tiles,
        name="penrose-wang20",
        color_action=penrose_color_action,
    )


def penrose_wang4() -> Tileset:
    """Representatives of the four rotation orbits of penrose_wang20: both
    tiles on the lex-least thick and thin shapes, (0,1) and (0,2)."""
    basis = DirectionBasis(5)
    tiles = [
        arrows_to_colors(ArrowTile(Shape(basis, c1, c2), _family_arrows(m)))
        for (c1, c2) in ((0, 1), (0, 2))
        for m in (1, 2)
    ]
    return Tileset(
        ShapeSet.from_pairs(5, [(0, 1), (0, 2)]),
        tiles,
        name="penrose-wang4",
        color_action=penrose_color_action,
    )


# ---------------------------------------------------------------------------
# the up-to-isometry counterexample


def single_tile_isometry_counterexample():
    """A square tile with four distinct colors, closed under rotation by pi,
    tiles the plane periodically: returns the 2-tile closure and a validated
    periodic certificate (patch plus period vectors). Translation-only, the
    single tile cannot even form a 2x2 block, so up-to-isometry tilesets
    cannot be aperiodic at this size."""
    ss = ShapeSet.from_pairs(4, [(0, 1)])
    base = Tile(ss.get(0, 1), ("1", "2", "3", "4"))
    closure = rotation_closure(Tileset(ss, [base], name="four-colors"), 2)
    cert = periodic_certificate(closure, full_shift(ss))
    assert cert is not None, "the pi-closure admits a periodic tiling"
    return closure, cert


# ---------------------------------------------------------------------------
# pentagrid generation


def _as_offsets(offsets) -> tuple:
    offs = tuple(Fraction(o) for o in offsets)
    if len(offs) != 5:
        raise PenroseError("BAD_OFFSETS", f"need 5 offsets, got {len(offs)}")
    return offs


def pentagrid_patch(
    window: int, offsets: Sequence[Rational], colored: bool = False
) -> Patch:
    """The rhombus patch dual to the pentagrid crossings within a window.

    Family j consists of the lines Re(z * zeta^-j) + offsets[j] = a over
    integer a; the window keeps line indices in [-window, window]. Each
    crossing of two non-parallel lines contributes the rhombus spanned by
    the two family directions, anchored at the integer 5-vector of ceilings
    just below the crossing, all in exact arithmetic. A third line through
    any crossing raises SINGULAR_GRID.

    With colored=True the arrow coloring is applied from the true vertex
    indices, which requires sum(offsets) to be an integer (the index range
    theorem fails otherwise; NONINTEGRAL_SUM).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    offs = _as_offsets(offsets)
    gsum = sum(offs)
    if colored and gsum.denominator != 1:
        raise PenroseError(
            "NONINTEGRAL_SUM", f"offsets sum to {gsum}, cannot assign indices"
        )
    basis = DirectionBasis(5)
    ring = basis.ring
    sines = {d: QCyc(ring.unit(d) - ring.unit(-d)) for d in range(1, 5)}

    def q(f: Fraction) -> QCyc:
        return QCyc.from_fraction(ring, f)

    placements = []
    lines = range(-window, window + 1)
    for j in range(5):
        for k in range(j + 1, 5):
            shape = Shape(basis, j, k)
            inv_jk = sines[(k - j) % 5].inv()
            for a in lines:
                alpha = q(Fraction(a) - offs[j])
                for b in lines:
                    beta = q(Fraction(b) - offs[k])
                    coeffs = [0] * 5
                    coeffs[j], coeffs[k] = a, b
                    for m in range(5):
                        if m == j or m == k:
                            continue
                        x = (
                            alpha * sines[(k - m) % 5] - beta * sines[(j - m) % 5]
                        ) * inv_jk + q(offs[m])
                        if x.is_integer():
                            raise PenroseError(
                                "SINGULAR_GRID",
                                f"families {j},{k},{m} concurrent at "
                                f"lines ({a}, {b})",
                            )
                        coeffs[m] = -((-x).floor_real())
                    colors = None
                    if colored:
                        m_rel = sum(coeffs) - int(gsum)
                        colors = arrows_to_colors(
                            ArrowTile(shape, _family_arrows(m_rel))
                        ).colors
                    placements.append(
                        PlacedRhombus(shape, basis.point(coeffs), colors)
                    )
    return Patch.from_placements(basis, placements)
