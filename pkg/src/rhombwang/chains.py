"""Chains of rhombuses: extraction, crossings, the monotonicity cone, and
Z^2 indexing of shape occurrences.

A chain collects consecutive rhombuses sharing edges of one direction class
(the chain's normal). Within a finite patch chains are maximal segments;
every rhombus lies on exactly two of them, one per spanning direction of its
shape. Two chains meet in at most one rhombus, and the occurrences of a
shape are exactly the meetings of one chain per class, which yields the Z^2
indexing.

Key bookkeeping fact, used throughout: walking a normal-g chain, consecutive
anchors differ by one unit vector of the crossed tile's other class, so the
level K_g is constant along the chain and K_h jumps by exactly one when the
crossed tile has other class h. Consecutive occurrences of a shape (g, h)
along the chain therefore differ by exactly one in K_h.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .geometry import (
    GeometryError,
    Patch,
    PlacedRhombus,
    Shape,
    ShapeSet,
    in_open_double_cone,
    vertex_coordinates,
)


class ChainError(ValueError):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}{': ' + detail if detail else ''}")
        self.code = code


@dataclass
class Chain:
    """A maximal run of rhombuses sharing edges of one direction class.

    normal is that class; members are in walk order (each member is entered
    through one normal-class side and left through the opposite one, side
    indices s and s + 2). index orders parallel chains within a patch and is
    -1 until chain_indices assigns it.
    """

    normal: int
    members: tuple[PlacedRhombus, ...]
    index: int = -1

    def __len__(self) -> int:
        return len(self.members)

    def member_keys(self) -> frozenset:
        return frozenset(rh.key for rh in self.members)

    def __contains__(self, rh) -> bool:
        return isinstance(rh, PlacedRhombus) and any(
            rh.key == m.key for m in self.members
        )


def _normal_sides(rh: PlacedRhombus, normal: int) -> tuple[int, int]:
    """The two opposite sides of the placement whose class is the normal."""
    if rh.shape.c1 == normal:
        return (0, 2)
    if rh.shape.c2 == normal:
        return (1, 3)
    raise ChainError("NOT_ON_CHAIN", f"shape has no side of class {normal}")


def extract_chains(patch: Patch) -> list[Chain]:
    """All maximal chain segments of the patch; each rhombus appears in
    exactly two (one per direction class of its shape)."""
    chains: list[Chain] = []
    visited: set = set()  # (placement key, normal class)
    index_of = {rh.key: i for i, rh in enumerate(patch.placements)}

    def neighbor_through(rh: PlacedRhombus, side: int) -> Optional[PlacedRhombus]:
        for idx, _s in patch.edge_incidence(rh.edge_key(side)):
            other = patch.placements[idx]
            if other.key != rh.key:
                return other
        return None

    for rh in patch.placements:
        for normal in (rh.shape.c1, rh.shape.c2):
            if (rh.key, normal) in visited:
                continue
            s_lo, s_hi = _normal_sides(rh, normal)
            run = [rh]
            run_keys = {rh.key}
            for start_side, prepend in ((s_lo, True), (s_hi, False)):
                cur, via = rh, start_side
                while True:
                    nxt = neighbor_through(cur, via)
                    if nxt is None or nxt.key in run_keys:
                        break  # patch border, or a closed ribbon (holed input)
                    n_lo, n_hi = _normal_sides(nxt, normal)
                    entered_lo = nxt.edge_key(n_lo) == cur.edge_key(via)
                    leave = n_hi if entered_lo else n_lo
                    if prepend:
                        run.insert(0, nxt)
                    else:
                        run.append(nxt)
                    run_keys.add(nxt.key)
                    cur, via = nxt, leave
            for m in run:
                visited.add((m.key, normal))
            chains.append(Chain(normal, tuple(run)))

    chains.sort(key=lambda c: (c.normal, index_of[c.members[0].key]))
    return chains


def crossings(c1: Chain, c2: Chain) -> int:
    """Number of shared members; at most 1 in a valid patch, and 0 for
    distinct chains of equal normal."""
    return len(c1.member_keys() & c2.member_keys())


def check_monotonicity_cone(
    patch: Patch,
    chain: Chain,
    rhombus: PlacedRhombus,
    shapeset: Optional[ShapeSet] = None,
) -> bool:
    """Is every other member's center outside the open double cone of
    half-angle theta_min about the axis through the given member's center
    along the chain's normal direction?

    theta_min is the least rhombus angle of the shapeset (the patch's own
    shapes unless one is given). Exact sign tests on doubled centers; the
    cone is open, so a center exactly on the boundary passes: a straight
    square-grid row lies on the boundary of its half-angle pi/2 cone.
    """
    if not any(rhombus.key == m.key for m in chain.members):
        raise ChainError("NOT_ON_CHAIN", "rhombus is not a member of the chain")
    if shapeset is None:
        shapeset = ShapeSet(patch.basis, {rh.shape for rh in patch.placements})
    cos2 = shapeset.cos_theta_min_doubled()
    c0 = rhombus.center_doubled()
    for m in chain.members:
        if m.key == rhombus.key:
            continue
        w = m.center_doubled() - c0
        if in_open_double_cone(w, chain.normal, cos2):
            return False
    return True


# ---------------------------------------------------------------------------
# Z^2 indexing of shape occurrences


def index_occurrences(
    patch: Patch, shape: Shape
) -> dict[tuple, tuple[int, int]]:
    """Map each occurrence of the shape (by placement key) to (i, j): the
    levels K_c1, K_c2 of its anchor, shifted so the lex-least occurrence is
    (0, 0). i is the level of the occurrence's c1-normal chain and j of its
    c2-normal chain; consecutive occurrences along a chain differ by one in
    exactly one coordinate.
    """
    if shape.basis is not patch.basis:
        raise GeometryError("shape basis differs from patch")
    occs = [rh for rh in patch.placements if rh.shape.key == shape.key]
    if not occs:
        raise ChainError("NO_OCCURRENCE", f"shape {shape.key} not in patch")

    coords = vertex_coordinates(patch)
    raw = {
        rh.key: (coords[rh.anchor.key][shape.c1], coords[rh.anchor.key][shape.c2])
        for rh in occs
    }
    lex = min(raw.values())
    return {k: (v[0] - lex[0], v[1] - lex[1]) for k, v in raw.items()}


def chain_level(patch: Patch, chain: Chain, coords=None) -> int:
    """The K_normal level shared by every member anchor of the chain: the
    transversal position separating parallel chains."""
    if coords is None:
        coords = vertex_coordinates(patch)
    return coords[chain.members[0].anchor.key][chain.normal]


def chain_indices(patch: Patch) -> list[Chain]:
    """extract_chains with index assigned per normal class by transversal
    level. Distinct parallel chains in a convex patch have distinct levels;
    two maximal segments of one interrupted strip share a level and are
    ordered by first member as a deterministic fallback."""
    coords = vertex_coordinates(patch)
    chains = extract_chains(patch)
    by_normal: dict[int, list[Chain]] = {}
    for c in chains:
        by_normal.setdefault(c.normal, []).append(c)
    out = []
    for normal in sorted(by_normal):
        group = by_normal[normal]
        group.sort(
            key=lambda c: (chain_level(patch, c, coords), c.members[0].key)
        )
        out.extend(
            Chain(c.normal, c.members, index=i) for i, c in enumerate(group)
        )
    return out
