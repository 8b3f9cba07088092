"""Patterns (patches up to translation), minimal radius, occurrence tests,
and subshift specifications given by an ordered forbidden-pattern list.

A pattern's canonical form translates the patch so that its lexicographically
least vertex key sits at the origin; reduction modulo the cyclotomic
relations is linear, so lexicographic order on reduced coefficient tuples is
translation-covariant and the choice is well defined.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional, Sequence

from .cyclotomic import CycInt, QCyc
from .geometry import (
    ExactPoint,
    GeometryError,
    Patch,
    PlacedRhombus,
    Shape,
    ShapeSet,
    point_from_vkey,
    point_segment_dist_sq,
)


class RankExceedsKnownPrefix(ValueError):
    """Rank-r check requested but only fewer forbidden patterns are known."""


def _entry_sort_key(entry):
    shape_key, rel, colors = entry
    return (shape_key, rel, colors if colors is not None else ())


class Pattern:
    """A patch up to translation, in canonical position.

    Equality and hashing use the canonical entry tuple: the sorted sequence
    of (shape key, anchor offset from the least vertex, colors).
    """

    __slots__ = ("patch", "entries", "_hash")

    def __init__(self, patch: Patch):
        if patch.is_empty:
            raise GeometryError("pattern requires a nonempty patch")
        vmin = min(patch.vertex_map.keys())
        offset = -point_from_vkey(patch.basis, vmin)
        if any(offset.coeffs):
            patch = patch.translated(offset)
        entries = tuple(
            sorted(
                ((rh.shape.key, rh.anchor.key, rh.colors) for rh in patch),
                key=_entry_sort_key,
            )
        )
        self.patch = patch
        self.entries = entries
        self._hash = hash((patch.basis.order, entries))

    @property
    def key(self):
        return (self.patch.basis.order, self.entries)

    def sort_key(self):
        return (len(self.entries), tuple(map(_entry_sort_key, self.entries)))

    def __eq__(self, other) -> bool:
        if isinstance(other, Pattern):
            return (
                self.patch.basis is other.patch.basis
                and self.entries == other.entries
            )
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        return f"Pattern({len(self.entries)} placements, order {self.patch.basis.order})"

    @property
    def is_colored(self) -> bool:
        return any(colors is not None for _, _, colors in self.entries)

    def shape_keys(self) -> set:
        return {shape_key for shape_key, _, _ in self.entries}

    def erase_colors(self) -> "Pattern":
        if not self.is_colored:
            return self
        return Pattern(self.patch.erase_colors())

    def occurrences(
        self, haystack: Patch, ignore_colors: Optional[bool] = None
    ) -> list[ExactPoint]:
        """All translations t such that needle + t is a sub-collection of the
        haystack. Colored needles match colors exactly; uncolored needles
        match geometry only (unless ignore_colors overrides)."""
        if ignore_colors is None:
            ignore_colors = not self.is_colored
        basis = self.patch.basis
        if haystack.basis is not basis:
            raise GeometryError("pattern and patch basis differ")
        ring = basis.ring
        s0, rel0, col0 = self.entries[0]
        rel0_elem = CycInt(ring, rel0)
        rest = self.entries[1:]
        out = []
        for rh in haystack.placements:
            if rh.shape.key != s0:
                continue
            if not ignore_colors and rh.colors != col0:
                continue
            t = rh.anchor.red - rel0_elem
            if self._occurs_at(haystack, t, rest, ignore_colors):
                out.append(point_from_vkey(basis, t.co))
        return out

    def _occurs_at(self, haystack: Patch, t: CycInt, rest, ignore_colors) -> bool:
        ring = self.patch.basis.ring
        for shape_key, rel, colors in rest:
            spot = (t + CycInt(ring, rel)).co
            if ignore_colors:
                if not haystack.has_geom_key((shape_key, spot)):
                    return False
            else:
                if not haystack.has_placement_key((shape_key, spot, colors)):
                    return False
        return True

    def occurs_in(self, haystack: Patch, ignore_colors: Optional[bool] = None) -> bool:
        if ignore_colors is None:
            ignore_colors = not self.is_colored
        basis = self.patch.basis
        if haystack.basis is not basis:
            raise GeometryError("pattern and patch basis differ")
        ring = basis.ring
        s0, rel0, col0 = self.entries[0]
        rel0_elem = CycInt(ring, rel0)
        rest = self.entries[1:]
        for rh in haystack.placements:
            if rh.shape.key != s0:
                continue
            if not ignore_colors and rh.colors != col0:
                continue
            if self._occurs_at(haystack, rh.anchor.red - rel0_elem, rest, ignore_colors):
                return True
        return False

    def occurs_including(
        self, haystack: Patch, rh: PlacedRhombus, ignore_colors: Optional[bool] = None
    ) -> bool:
        """Does the pattern occur in the haystack with the given placement as
        one of its members? The incremental prune used during growth."""
        if ignore_colors is None:
            ignore_colors = not self.is_colored
        ring = self.patch.basis.ring
        rk = rh.shape.key
        for shape_key, rel, colors in self.entries:
            if shape_key != rk:
                continue
            if not ignore_colors and colors != rh.colors:
                continue
            t = rh.anchor.red - CycInt(ring, rel)
            if self._occurs_at(haystack, t, self.entries, ignore_colors):
                return True
        return False


def canonicalize(patch: Patch) -> Pattern:
    """The translation class of a patch. Idempotent: canonicalizing the
    canonical patch returns an equal Pattern."""
    return Pattern(patch)


# ---------------------------------------------------------------------------
# minimal radius


def covered_vertices(patch: Patch, num: int, den: int = 1) -> list[ExactPoint]:
    """Patch vertices whose num/den-disk lies inside the support."""
    out = []
    for vk in patch.vertex_map:
        v = point_from_vkey(patch.basis, vk)
        if patch.support_contains_disk(v, num, den):
            out.append(v)
    return out


def covered_radius_sq(patch: Patch) -> Optional[tuple[ExactPoint, QCyc]]:
    """The largest exactly-squared radius of a vertex-centered disk inside
    the support, with its center; None for an empty patch.

    For each vertex the radius is the minimum exact distance to a boundary
    edge; the result maximizes over vertices. Boundary vertices give 0.
    """
    if patch.is_empty:
        return None
    bedges = [patch.edge_endpoints(ek) for ek in patch.boundary_edges()]
    best: Optional[tuple[ExactPoint, QCyc]] = None
    for vk in patch.vertex_map:
        v = point_from_vkey(patch.basis, vk)
        vmin: Optional[QCyc] = None
        for a, b in bedges:
            d2 = point_segment_dist_sq(v.red, a.red, b.red)
            if vmin is None or (d2 - vmin).sign_re() < 0:
                vmin = d2
            if vmin.is_zero:
                break
        assert vmin is not None
        if best is None or (vmin - best[1]).sign_re() > 0:
            best = (v, vmin)
    return best


def minimal_radius(patch: Patch) -> float:
    """Largest radius of a vertex-centered disk contained in the support,
    as a float; the exact squared value is covered_radius_sq."""
    got = covered_radius_sq(patch)
    if got is None:
        return 0.0
    return math.sqrt(max(got[1].complex_value().real, 0.0))


def is_minimal_for(patch: Patch, num: int, den: int = 1) -> bool:
    """Minimal radius num/den in the removal sense: some vertex-centered
    disk of that radius is covered, and removing any one shape leaves no
    vertex whose disk is covered."""
    if patch.is_empty:
        return False
    cov = covered_vertices(patch, num, den)
    if not cov:
        return False
    for i in range(len(patch.placements)):
        sub = patch.without_index(i)
        # removal can only shrink coverage, so only old centers can survive
        if sub.is_empty:
            continue
        for v in cov:
            if sub.support_contains_disk(v, num, den):
                return False
    return True


# ---------------------------------------------------------------------------
# subshift specifications


class SubshiftSpec:
    """A subshift given by its shapeset and an ordered (finite prefix of a)
    forbidden-pattern list. Rank-r checks use exactly the first r entries.

    Forbidden patterns are geometric (uncolored): the subshift constrains
    color-erased projections. Three completeness regimes:

    - complete=True (default, no generator): the list IS the whole F; ranks
      beyond its length just use all of it, and positive certificates
      against this spec are sound.
    - generator given: forbidden[i] beyond the prefix comes from the
      callback (an effective, possibly infinite F); never complete.
    - complete=False, no generator: a truncated prefix of an unknown F;
      asking past it raises RankExceedsKnownPrefix.
    """

    def __init__(
        self,
        shapeset: ShapeSet,
        forbidden: Sequence[Pattern] = (),
        name: str = "",
        generator: Optional[Callable[[int], Pattern]] = None,
        complete: Optional[bool] = None,
    ):
        self.shapeset = shapeset
        self._forbidden = list(forbidden)
        self.name = name
        self.generator = generator
        if complete is None:
            complete = generator is None
        if complete and generator is not None:
            raise ValueError("a spec with a generator cannot be complete")
        self.complete = complete
        for f in self._forbidden:
            self._check_pattern(f)

    def _check_pattern(self, f: Pattern) -> None:
        if f.patch.basis is not self.shapeset.basis:
            raise GeometryError("forbidden pattern basis differs from shapeset")
        if f.is_colored:
            raise GeometryError("forbidden patterns must be uncolored (geometric)")
        for sk in f.shape_keys():
            if not self.shapeset.has_key(sk):
                raise GeometryError(f"forbidden pattern uses shape {sk} not in shapeset")

    @property
    def forbidden(self) -> tuple[Pattern, ...]:
        return tuple(self._forbidden)

    @property
    def known_prefix_length(self) -> int:
        return len(self._forbidden)

    def forbidden_prefix(self, r: int) -> tuple[Pattern, ...]:
        """The first r forbidden patterns, extending through the generator
        if one is supplied; a complete F shorter than r is returned whole."""
        if r < 0:
            raise ValueError("rank must be nonnegative")
        while len(self._forbidden) < r:
            if self.generator is not None:
                nxt = self.generator(len(self._forbidden))
                self._check_pattern(nxt)
                self._forbidden.append(nxt)
            elif self.complete:
                return tuple(self._forbidden)
            else:
                raise RankExceedsKnownPrefix(
                    f"rank {r} requested but only {len(self._forbidden)} "
                    "forbidden patterns are known"
                )
        return tuple(self._forbidden[:r])

    @property
    def complete_finite(self) -> bool:
        """True when the forbidden list is the complete, finite description
        (no generator hook): positive certificates are sound only then."""
        return self.complete and self.generator is None

    def restrict_name(self) -> str:
        return self.name or "unnamed"

    def __repr__(self) -> str:
        g = ", generator" if self.generator else ""
        return (
            f"SubshiftSpec({self.restrict_name()}, {len(self.shapeset)} shapes, "
            f"{len(self._forbidden)} forbidden{g})"
        )


def full_shift(shapeset: ShapeSet, name: str = "") -> SubshiftSpec:
    """The full shift over a shapeset: no forbidden patterns."""
    return SubshiftSpec(shapeset, (), name or f"full-shift-N{shapeset.basis.order}")


def rank_allowed(patch: Patch, spec: SubshiftSpec, r: int) -> bool:
    """Is the patch a rank-r locally allowed pattern: minimal radius r and
    none of the first r forbidden patterns occurs in it (color-erased)?"""
    prefix = spec.forbidden_prefix(r)
    if not is_minimal_for(patch, r):
        return False
    for needle in prefix:
        if needle.occurs_in(patch, ignore_colors=True):
            return False
    return True
