"""Computable reductions between square Wang tilings and rhombus subshifts.

Three constructions:

  * phi_r embeds a square Wang tileset into a rhombus tileset over a
    shapeset with a designated shape r. Coding tiles copy the Wang tiles
    onto r; link tiles transmit one color along both sides of the one
    direction they share with r and are blank elsewhere; neutral tiles are
    all blank. Occurrences of r inherit the Z^2 structure of their chains,
    so a valid coloring restricted to coding tiles reads off a Wang tiling.

  * restrict_shapeset cuts a subshift down to configurations using only a
    subset of the shapes; forbidden patterns mentioning a removed shape can
    never occur and are dropped, the rest keep their order.

  * fresh_color_reduction completes a tileset on a shape subset to the full
    shapeset by adding, per missing shape, one tile with four globally
    fresh colors. Such a tile can never sit next to anything (not even a
    copy of itself), so allowed patterns of radius >= 1 cannot contain it.

find_uniformly_recurrent_candidate is the bounded empirical companion to
the last reduction: selecting a shape subset with a uniformly recurrent
shape is not computable in general, so the routine only reports, per shape,
whether some allowed pattern omits it at each tested rank. The report is a
heuristic aid and claims nothing about the infinite subshift.

The blank color of phi_r and the fresh colors live in the reserved "!"
namespace, which user alphabets cannot contain, so freshness is structural
rather than checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .chains import ChainError, extract_chains, index_occurrences
from .geometry import GeometryError, Patch, PlacedRhombus, Shape, ShapeSet
from .patterns import Pattern, SubshiftSpec
from .solver import BudgetExceeded, enumerate_locally_allowed
from .tiles import RESERVED_COLOR_PREFIX, Tile, Tileset, erase_colors

BLANK = RESERVED_COLOR_PREFIX + "blank"
FRESH_STEM = RESERVED_COLOR_PREFIX + "f"


class ReductionError(ValueError):
    """Invalid reduction input. .code holds the reason."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}{': ' + detail if detail else ''}")
        self.code = code


# ---------------------------------------------------------------------------
# square Wang tilesets and periodic certificates


class SquareWangTileset:
    """A classical square Wang tileset: an alphabet and distinct tiles
    (a0, a1, a2, a3) on the unit square, a_i on side i (south, east, north,
    west). Tiles are kept sorted and deduplicated."""

    def __init__(self, colors: Iterable[str], tiles: Iterable[Sequence[str]],
                 name: str = ""):
        colors = tuple(sorted(set(colors)))
        if not colors:
            raise ReductionError("EMPTY_ALPHABET")
        for c in colors:
            if not isinstance(c, str) or not c:
                raise ReductionError("BAD_COLOR", repr(c))
            if c.startswith(RESERVED_COLOR_PREFIX):
                raise ReductionError(
                    "RESERVED_COLOR",
                    f"alphabet may not contain {RESERVED_COLOR_PREFIX!r} names",
                )
        norm = []
        for t in tiles:
            t = tuple(t)
            if len(t) != 4:
                raise ReductionError("BAD_TILE", f"{t!r} is not a 4-tuple")
            for c in t:
                if c not in colors:
                    raise ReductionError(
                        "COLOR_NOT_IN_ALPHABET", f"{c!r} in tile {t!r}"
                    )
            norm.append(t)
        self.colors = colors
        self.tiles = tuple(sorted(set(norm)))
        self.name = name

    @classmethod
    def from_tiles(cls, tiles: Iterable[Sequence[str]], name: str = ""):
        tiles = [tuple(t) for t in tiles]
        alphabet = {c for t in tiles for c in t}
        return cls(alphabet, tiles, name)

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def __eq__(self, other) -> bool:
        if isinstance(other, SquareWangTileset):
            return self.colors == other.colors and self.tiles == other.tiles
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.colors, self.tiles))

    def __repr__(self) -> str:
        nm = f"{self.name!r}, " if self.name else ""
        return f"SquareWangTileset({nm}{len(self.tiles)} tiles, {len(self.colors)} colors)"


class WangCertificate:
    """A periodic square Wang tiling given by an a x b fundamental domain
    with a horizontal shear: cell (i, j) carries cells[((i - (j // b) * shift)
    mod a, j mod b)]. Adjacency (east == west of the right neighbor, north ==
    south of the upper one) is verified over one domain, which covers all of
    Z^2 by periodicity."""

    def __init__(self, wang: SquareWangTileset, a: int, b: int,
                 cells: dict, shift: int = 0):
        if a < 1 or b < 1:
            raise ReductionError("BAD_TORUS", "periods must be positive")
        self.wang = wang
        self.a = a
        self.b = b
        self.shift = shift % a
        grid = {}
        for i in range(a):
            for j in range(b):
                try:
                    t = tuple(cells[(i, j)])
                except KeyError:
                    raise ReductionError("BAD_TORUS", f"missing cell ({i},{j})") from None
                if t not in wang.tiles:
                    raise ReductionError("BAD_TORUS", f"cell ({i},{j}) not a tileset tile")
                grid[(i, j)] = t
        self.cells = grid
        for i in range(a):
            for j in range(b):
                t = self.at(i, j)
                if t[1] != self.at(i + 1, j)[3]:
                    raise ReductionError("WANG_MISMATCH", f"east of ({i},{j})")
                if t[2] != self.at(i, j + 1)[0]:
                    raise ReductionError("WANG_MISMATCH", f"north of ({i},{j})")

    @classmethod
    def uniform(cls, wang: SquareWangTileset, tile: Sequence[str]):
        """The 1 x 1 certificate repeating one tile everywhere."""
        return cls(wang, 1, 1, {(0, 0): tuple(tile)})

    def at(self, i: int, j: int) -> tuple:
        jj = j % self.b
        steps = (j - jj) // self.b
        ii = (i - steps * self.shift) % self.a
        return self.cells[(ii, jj)]


# ---------------------------------------------------------------------------
# phi_r: square Wang -> rhombus tileset


@dataclass
class ReductionReport:
    """Sizes and per-part counts of one reduction run; counts sum to the
    output tileset size."""

    kind: str
    tileset: Tileset
    counts: dict
    chosen: tuple
    input_sizes: dict = field(default_factory=dict)

    def check(self) -> None:
        if sum(self.counts.values()) != len(self.tileset):
            raise AssertionError("reduction part counts do not sum to output size")

    def lines(self) -> list[str]:
        out = [f"reduction {self.kind}: {len(self.tileset)} tiles"]
        for k in sorted(self.input_sizes):
            out.append(f"  input {k}: {self.input_sizes[k]}")
        for k in sorted(self.counts):
            out.append(f"  {k}: {self.counts[k]}")
        out.append(f"  chosen: {self.chosen}")
        return out


def _shared_classes(a: Shape, b: Shape) -> set:
    return {a.c1, a.c2} & {b.c1, b.c2}


def phi_r_report(wang: SquareWangTileset, shapeset: ShapeSet, r: Shape) -> ReductionReport:
    """phi_r with its part counts: coding tiles on r, link tiles per
    (one-direction-sharing shape, color), one neutral tile per disjoint
    shape."""
    if r.basis is not shapeset.basis or not shapeset.has_key(r.key):
        raise ReductionError("SHAPE_NOT_IN_SHAPESET", f"r = {r.key}")
    if not wang.tiles:
        raise ReductionError("EMPTY_WANG", "no coding tiles to build")
    coding = [Tile(r, t) for t in wang.tiles]
    link: list[Tile] = []
    neutral: list[Tile] = []
    for shape in shapeset:
        if shape.key == r.key:
            continue
        shared = _shared_classes(shape, r)
        # two shared classes would make shape == r in canonical form
        assert len(shared) <= 1, (shape.key, r.key)
        if shared:
            sides = (0, 2) if shape.c1 in shared else (1, 3)
            for a in wang.colors:
                colors = [BLANK] * 4
                colors[sides[0]] = a
                colors[sides[1]] = a
                link.append(Tile(shape, colors))
        else:
            neutral.append(Tile(shape, (BLANK,) * 4))
    ts = Tileset(
        shapeset,
        coding + link + neutral,
        name=f"phi_r({wang.name or len(wang)}@{r.key})",
        allow_reserved=True,
    )
    report = ReductionReport(
        kind="wang-to-rhombus",
        tileset=ts,
        counts={"coding": len(coding), "link": len(link), "neutral": len(neutral)},
        chosen=r.key,
        input_sizes={"wang_tiles": len(wang), "wang_colors": len(wang.colors),
                     "shapes": len(shapeset)},
    )
    report.check()
    return report


def phi_r(wang: SquareWangTileset, shapeset: ShapeSet, r: Shape) -> Tileset:
    return phi_r_report(wang, shapeset, r).tileset


# ---------------------------------------------------------------------------
# coloring a geometric patch from a periodic Wang certificate


@dataclass
class ColoringReport:
    """A colored patch over phi_r tiles plus the boundary-truncation flags:
    partial holds the placement keys of link tiles whose chain segment is
    cut by the patch boundary (their color is read from one endpoint only,
    or is an arbitrary alphabet default when the chain misses r entirely)."""

    patch: Patch
    partial: frozenset
    counts: dict

    def is_total(self) -> bool:
        return not self.partial


def _transmission_sides(rh: PlacedRhombus, g: int) -> tuple[int, int]:
    return (0, 2) if rh.shape.c1 == g else (1, 3)


def _facing_side(rh: PlacedRhombus, neighbor: PlacedRhombus, g: int) -> int:
    """The class-g side of rh glued to the chain neighbor."""
    adj = {neighbor.edge_key(s) for s in range(4)}
    for s in _transmission_sides(rh, g):
        if rh.edge_key(s) in adj:
            return s
    raise AssertionError("chain members must share a normal-class edge")


def color_penrose_patch_report(
    wang_tiling: WangCertificate, geometric_patch: Patch, r: Shape
) -> ColoringReport:
    """Color a geometric patch with phi_r(wang) tiles following a periodic
    Wang certificate: coding tiles read the certificate at their chain
    index, link tiles carry the transmitted color of their segment, the
    rest is blank. Link segments with both endpoint occurrences of r inside
    the patch are exact; boundary-truncated segments are flagged partial.
    """
    basis = geometric_patch.basis
    if r.basis is not basis:
        raise GeometryError("shape basis differs from patch")
    geometric = erase_colors(geometric_patch)
    try:
        idx = index_occurrences(geometric, r)
    except ChainError as e:
        raise ReductionError("UNINDEXABLE", str(e)) from e

    wang = wang_tiling.wang
    r_classes = {r.c1, r.c2}
    colors_of: dict = {}
    counts = {"coding": 0, "link": 0, "neutral": 0}
    for rh in geometric.placements:
        if rh.shape.key == r.key:
            i, j = idx[rh.key]
            colors_of[rh.key] = list(wang_tiling.at(i, j))
            counts["coding"] += 1
        else:
            shared = _shared_classes(rh.shape, r)
            assert len(shared) <= 1, (rh.shape.key, r.key)
            colors_of[rh.key] = [BLANK] * 4
            counts["link" if shared else "neutral"] += 1

    partial: set = set()
    default = wang.colors[0]
    for chain in extract_chains(geometric):
        g = chain.normal
        if g not in r_classes:
            continue
        members = chain.members
        occ_pos = [t for t, m in enumerate(members) if m.shape.key == r.key]
        if not occ_pos:
            for m in members:
                for s in _transmission_sides(m, g):
                    colors_of[m.key][s] = default
                partial.add(m.key)
            continue
        for p, q in zip(occ_pos, occ_pos[1:]):
            mp, mq = members[p], members[q]
            a = colors_of[mp.key][_facing_side(mp, members[p + 1], g)]
            back = colors_of[mq.key][_facing_side(mq, members[q - 1], g)]
            if back != a:
                # unreachable for a valid certificate: chain-consecutive
                # occurrences differ by one index step, where the torus
                # adjacency equations force equal facing colors
                raise ReductionError(
                    "CERTIFICATE_MISMATCH", f"{a!r} vs {back!r} between occurrences"
                )
            for m in members[p + 1 : q]:
                for s in _transmission_sides(m, g):
                    colors_of[m.key][s] = a
        first, last = occ_pos[0], occ_pos[-1]
        if first > 0:
            mf = members[first]
            a = colors_of[mf.key][_facing_side(mf, members[first - 1], g)]
            for m in members[:first]:
                for s in _transmission_sides(m, g):
                    colors_of[m.key][s] = a
                partial.add(m.key)
        if last < len(members) - 1:
            ml = members[last]
            a = colors_of[ml.key][_facing_side(ml, members[last + 1], g)]
            for m in members[last + 1 :]:
                for s in _transmission_sides(m, g):
                    colors_of[m.key][s] = a
                partial.add(m.key)

    colored = Patch.from_placements(
        basis,
        (
            PlacedRhombus(rh.shape, rh.anchor, tuple(colors_of[rh.key]))
            for rh in geometric.placements
        ),
    )
    return ColoringReport(colored, frozenset(partial), counts)


def color_penrose_patch(
    wang_tiling: WangCertificate, geometric_patch: Patch, r: Shape
) -> Patch:
    return color_penrose_patch_report(wang_tiling, geometric_patch, r).patch


# ---------------------------------------------------------------------------
# restriction and the fresh-color completion


def restrict_shapeset(spec: SubshiftSpec, subset: ShapeSet) -> SubshiftSpec:
    """The restriction of a subshift to a shape subset. Forbidden patterns
    mentioning a removed shape are dropped (they cannot occur in a
    subset-only configuration); the others keep their relative order. A
    generator-backed spec stays generator-backed: the restricted generator
    pulls and filters the parent's enumeration, so the parent's prefix
    materializes as a side effect."""
    parent_ss = spec.shapeset
    if subset.basis is not parent_ss.basis:
        raise ReductionError("NOT_A_SUBSET", "different direction basis")
    keys = set(subset.keys())
    if not keys <= set(parent_ss.keys()):
        raise ReductionError("NOT_A_SUBSET", f"{sorted(keys - set(parent_ss.keys()))}")

    def survives(f: Pattern) -> bool:
        return all(k in keys for k in f.shape_keys())

    name = f"{spec.restrict_name()}|rho{sorted(keys)}"
    if spec.generator is None:
        kept = [f for f in spec.forbidden if survives(f)]
        return SubshiftSpec(subset, kept, name=name, complete=spec.complete)

    parent = spec
    pos = 0

    def gen(_i: int) -> Pattern:
        nonlocal pos
        while True:
            batch = parent.forbidden_prefix(pos + 1)
            f = batch[pos]
            pos += 1
            if survives(f):
                return f

    return SubshiftSpec(subset, (), name=name, generator=gen, complete=False)


def fresh_color_report(
    tileset_on_subset: Tileset, full_shapeset: ShapeSet
) -> ReductionReport:
    """Complete a tileset on a shape subset to the full shapeset: per
    missing shape, one tile whose four colors are globally fresh (distinct
    from every color in play and from each other)."""
    ts = tileset_on_subset
    if ts.basis is not full_shapeset.basis:
        raise ReductionError("NOT_A_SUBSET", "different direction basis")
    present = {t.shape.key for t in ts.tiles}
    full_keys = set(full_shapeset.keys())
    if not present <= full_keys:
        raise ReductionError(
            "SHAPE_NOT_IN_SHAPESET", f"{sorted(present - full_keys)}"
        )
    used = set(ts.colors)
    counter = 0

    def fresh() -> str:
        nonlocal counter
        while True:
            c = f"{FRESH_STEM}{counter}"
            counter += 1
            if c not in used:
                used.add(c)
                return c

    fresh_tiles = [
        Tile(shape, (fresh(), fresh(), fresh(), fresh()))
        for shape in full_shapeset
        if shape.key not in present
    ]
    out = Tileset(
        full_shapeset,
        list(ts.tiles) + fresh_tiles,
        name=f"{ts.name or 'tileset'}+fresh",
        color_action=ts.color_action,
        allow_reserved=True,
    )
    report = ReductionReport(
        kind="fresh-color",
        tileset=out,
        counts={"input": len(ts), "fresh": len(fresh_tiles)},
        chosen=tuple(sorted(present)),
        input_sizes={"tiles": len(ts), "subset_shapes": len(present),
                     "full_shapes": len(full_shapeset)},
    )
    report.check()
    return report


def fresh_color_reduction(
    tileset_on_subset: Tileset, full_shapeset: ShapeSet
) -> Tileset:
    return fresh_color_report(tileset_on_subset, full_shapeset).tileset


# ---------------------------------------------------------------------------
# bounded empirical recurrence check


@dataclass
class ShapeRecurrence:
    shape_key: tuple
    verdict: str  # "present-in-all" or "absent-from-some"
    omission_ranks: tuple
    witness: Optional[Pattern]


@dataclass
class RecurrenceReport:
    """Per-shape empirical recurrence verdicts up to r_max. candidates are
    the shapes never omitted at any tested rank. This is a bounded check on
    finite patterns only: it proves nothing about the infinite subshift,
    and no computable rule can select a suitable subset in general."""

    spec_name: str
    r_max: int
    entries: tuple
    candidates: tuple

    def lines(self) -> list[str]:
        out = [f"recurrence check on {self.spec_name} up to rank {self.r_max} "
               "(bounded heuristic, no claim about the infinite subshift)"]
        for e in self.entries:
            ranks = f" omitted at ranks {list(e.omission_ranks)}" if e.omission_ranks else ""
            out.append(f"  shape {e.shape_key}: {e.verdict}{ranks}")
        out.append(f"  candidates: {list(self.candidates)}")
        return out


def _omission_witness(
    spec: SubshiftSpec, others: ShapeSet, n: int, budget_nodes: Optional[int]
) -> Optional[Pattern]:
    """Some rank-n allowed pattern avoiding the complement of others, or
    None. Patterns over a shape subset see only the forbidden entries fully
    inside the subset; the others cannot occur."""
    keys = set(others.keys())
    prefix = [
        f for f in spec.forbidden_prefix(n)
        if all(k in keys for k in f.shape_keys())
    ]
    mono = Tileset(
        others,
        [Tile(s, ("m", "m", "m", "m")) for s in others],
        name="mono",
    )
    res = enumerate_locally_allowed(
        n, prefix, mono, budget_nodes=budget_nodes, stop_after=1
    )
    if res.patterns:
        return res.patterns[0]
    if not res.complete:
        raise BudgetExceeded(f"omission check exhausted budget at rank {n}", rank=n)
    return None


def find_uniformly_recurrent_candidate(
    spec: SubshiftSpec, r_max: int, budget_nodes: Optional[int] = None
) -> RecurrenceReport:
    """For each shape: does every allowed pattern of rank n contain it, for
    each n up to r_max? Omissions are downward closed (shrinking a pattern
    omitting s to a smaller rank keeps omitting s), so ranks are tested
    ascending and the scan stops at the first rank with no omission."""
    if r_max < 1:
        raise ValueError("r_max must be at least 1")
    entries = []
    for shape in spec.shapeset:
        rest = [s for s in spec.shapeset if s.key != shape.key]
        omitted, witness = [], None
        if rest:
            others = ShapeSet(spec.shapeset.basis, rest)
            for n in range(1, r_max + 1):
                w = _omission_witness(spec, others, n, budget_nodes)
                if w is None:
                    break
                omitted.append(n)
                witness = w
        verdict = "absent-from-some" if omitted else "present-in-all"
        entries.append(ShapeRecurrence(shape.key, verdict, tuple(omitted), witness))
    candidates = tuple(e.shape_key for e in entries if e.verdict == "present-in-all")
    return RecurrenceReport(spec.restrict_name(), r_max, tuple(entries), candidates)
