"""Exact planar geometry of edge-to-edge rhombus patches.

All coordinates live in Z[zeta_N] (see cyclotomic): a point is an integer
combination of the N unit directions. A shape is a rhombus spanned by two
distinct unit directions, up to translation; a placed rhombus is a shape plus
an anchor; a patch is a finite overlap-free edge-to-edge collection.

Contact between two placed rhombi is classified exactly (disjoint, single
shared vertex, single shared full edge, interior overlap, or an edge-to-edge
violation such as a T-junction) and the classification is cached by the
translation-invariant key (shape pair, reduced anchor difference), which makes
patch growth mostly dictionary lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .cyclotomic import (
    CycInt,
    CycRing,
    cross_sign,
    dot_sign,
    sign_im,
    sign_real_elem,
)

VKey = tuple  # reduced coefficient tuple of a vertex
EKey = tuple  # (min vertex key, max vertex key)


class GeometryError(ValueError):
    """Invalid geometric input (bad shape, bad basis, malformed patch)."""


class PlacementError(ValueError):
    """A placement that violates patch invariants. .code holds the reason."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}{': ' + detail if detail else ''}")
        self.code = code


class DirectionBasis:
    """N unit directions zeta^k, k = 0..N-1.

    For even N the directions k and k + N/2 are antiparallel and identified
    as a single undirected direction class; classes are indexed 0..N/2-1.
    For odd N every direction is its own class.
    """

    _instances: dict[int, "DirectionBasis"] = {}

    def __new__(cls, order: int) -> "DirectionBasis":
        inst = cls._instances.get(order)
        if inst is None:
            inst = super().__new__(cls)
            inst._init(order)
            cls._instances[order] = inst
        return inst

    def _init(self, order: int) -> None:
        if order < 3:
            raise GeometryError("basis order must be >= 3")
        self.order = order
        self.ring = CycRing(order)
        self.n_classes = order if order % 2 else order // 2
        self.units = tuple(self.ring.unit(k) for k in range(order))
        # reduced unit vector -> (class, sign), for reading edge directions
        step_map: dict[tuple, tuple[int, int]] = {}
        for k in range(self.n_classes):
            step_map[self.units[k].co] = (k, 1)
            step_map[(-self.units[k]).co] = (k, -1)
        self.step_map = step_map
        self.zero_point = ExactPoint(self, (0,) * order)

    def __repr__(self) -> str:
        return f"DirectionBasis({self.order})"

    def point(self, coeffs: Sequence[int]) -> "ExactPoint":
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.order:
            raise GeometryError(
                f"coefficient vector must have length {self.order}, got {len(coeffs)}"
            )
        return ExactPoint(self, coeffs)

    def unit_point(self, k: int) -> "ExactPoint":
        co = [0] * self.order
        co[k % self.order] = 1
        return ExactPoint(self, tuple(co))

    def edge_step(self, diff: CycInt) -> tuple[int, int]:
        """(direction class, sign) of a unit difference vector."""
        try:
            return self.step_map[diff.co]
        except KeyError:
            raise GeometryError("difference is not a unit basis step") from None


class ExactPoint:
    """A point of the plane with exact cyclotomic integer coordinates."""

    __slots__ = ("basis", "coeffs", "red")

    def __init__(self, basis: DirectionBasis, coeffs: tuple[int, ...]):
        self.basis = basis
        self.coeffs = coeffs
        self.red = basis.ring.element(coeffs)

    @property
    def key(self) -> VKey:
        return self.red.co

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoint):
            return self.basis is other.basis and self.red.co == other.red.co
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.red.co)

    def __add__(self, other: "ExactPoint") -> "ExactPoint":
        return ExactPoint(
            self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "ExactPoint") -> "ExactPoint":
        return ExactPoint(
            self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "ExactPoint":
        return ExactPoint(self.basis, tuple(-a for a in self.coeffs))

    def __repr__(self) -> str:
        return f"ExactPoint{self.coeffs}"

    def complex_value(self) -> complex:
        return self.red.complex_value()


@dataclass(frozen=True)
class Shape:
    """A rhombus spanned by unit directions of classes c1 < c2, up to translation."""

    basis: DirectionBasis
    c1: int
    c2: int

    def __post_init__(self):
        n = self.basis.n_classes
        if not (0 <= self.c1 < self.c2 < n):
            raise GeometryError(
                f"shape needs two distinct direction classes in [0, {n}), "
                f"got ({self.c1}, {self.c2})"
            )

    @property
    def key(self) -> tuple[int, int]:
        return (self.c1, self.c2)

    @property
    def u(self) -> CycInt:
        return self.basis.units[self.c1]

    @property
    def v(self) -> CycInt:
        return self.basis.units[self.c2]

    def side_class(self, side: int) -> int:
        """Direction class of side s: sides 0 and 2 run along u, 1 and 3 along v."""
        return self.c1 if side % 2 == 0 else self.c2

    def angle_units(self) -> tuple[int, int]:
        """Interior angles as multiples of pi/N; the two values sum to N."""
        a = _shape_angle_units(self.basis.order, self.c1, self.c2)
        n = self.basis.order
        return (a, n - a) if 2 * a <= n else (n - a, a)

    def min_angle_units(self) -> int:
        return self.angle_units()[0]

    def __repr__(self) -> str:
        return f"Shape({self.basis.order};{self.c1},{self.c2})"


def _shape_angle_units(order: int, c1: int, c2: int) -> int:
    """Angle between unit directions c1, c2 folded into (0, pi), in pi/N units."""
    a = (2 * (c2 - c1)) % (2 * order)
    if a > order:
        a = 2 * order - a
    return a


class ShapeSet:
    """A finite nonempty set of shapes over one direction basis."""

    def __init__(self, basis: DirectionBasis, shapes: Iterable[Shape]):
        shapes = tuple(sorted(set(shapes), key=lambda s: s.key))
        if not shapes:
            raise GeometryError("shapeset must be nonempty")
        for s in shapes:
            if s.basis is not basis:
                raise GeometryError("shape basis does not match shapeset basis")
        self.basis = basis
        self.shapes = shapes
        self._by_key = {s.key: s for s in shapes}

    @classmethod
    def from_pairs(cls, order: int, pairs: Iterable[tuple[int, int]]) -> "ShapeSet":
        basis = DirectionBasis(order)
        return cls(basis, (Shape(basis, a, b) for a, b in pairs))

    @classmethod
    def all_shapes(cls, order: int) -> "ShapeSet":
        basis = DirectionBasis(order)
        n = basis.n_classes
        return cls(
            basis, (Shape(basis, a, b) for a in range(n) for b in range(a + 1, n))
        )

    def __iter__(self) -> Iterator[Shape]:
        return iter(self.shapes)

    def __len__(self) -> int:
        return len(self.shapes)

    def __contains__(self, shape: Shape) -> bool:
        return isinstance(shape, Shape) and shape.key in self._by_key

    def __eq__(self, other) -> bool:
        if isinstance(other, ShapeSet):
            return self.basis is other.basis and self.shapes == other.shapes
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.basis.order, tuple(s.key for s in self.shapes)))

    def keys(self) -> tuple[tuple[int, int], ...]:
        return tuple(s.key for s in self.shapes)

    def get(self, c1: int, c2: int) -> Shape:
        try:
            return self._by_key[(c1, c2)]
        except KeyError:
            raise GeometryError(f"shape ({c1},{c2}) not in shapeset") from None

    def has_key(self, key: tuple[int, int]) -> bool:
        return key in self._by_key

    def theta_min_units(self) -> int:
        """Smallest interior angle over the shapeset, in units of pi/N."""
        return min(s.min_angle_units() for s in self.shapes)

    def cos_theta_min_doubled(self) -> CycInt:
        """2*cos(theta_min) as an exact ring element."""
        t = self.theta_min_units()
        n = self.basis.order
        # theta = t*pi/N; t is 2d or N-2d for some class gap d, and
        # cos(2d*pi/N) = (zeta^d + zeta^-d)/2, cos((N-2d)*pi/N) = -that.
        if t % 2 == 0:
            d = t // 2
            return self.basis.ring.unit(d) + self.basis.ring.unit(-d)
        d = (n - t) // 2
        return -(self.basis.ring.unit(d) + self.basis.ring.unit(-d))

    def diameter_sq_max(self) -> CycInt:
        """Exact square of the largest shape diameter (long diagonal)."""
        best: Optional[CycInt] = None
        for s in self.shapes:
            for diag in (s.u + s.v, s.u - s.v):
                n2 = diag.norm2()
                if best is None or sign_real_elem(n2 - best) > 0:
                    best = n2
        assert best is not None
        return best

    def __repr__(self) -> str:
        return f"ShapeSet({self.basis.order}; {[s.key for s in self.shapes]})"


class PlacedRhombus:
    """A shape at an exact anchor, optionally with four side colors.

    Vertices in order: anchor, anchor+u, anchor+u+v, anchor+v. Side s joins
    vertex s to vertex (s+1) mod 4, so sides 0/2 are translates along u and
    sides 1/3 along v; opposite sides are s and s+2.
    """

    __slots__ = ("shape", "anchor", "colors", "_vertices", "_key", "_fc")

    def __init__(
        self,
        shape: Shape,
        anchor: ExactPoint,
        colors: Optional[Sequence[str]] = None,
    ):
        if colors is not None:
            colors = tuple(colors)
            if len(colors) != 4:
                raise GeometryError("colors must be a 4-tuple")
        self.shape = shape
        self.anchor = anchor
        self.colors = colors
        self._vertices: Optional[tuple[ExactPoint, ...]] = None
        self._key = (shape.key, anchor.key, colors)
        self._fc: Optional[complex] = None

    @property
    def key(self):
        return self._key

    @property
    def geom_key(self):
        return (self.shape.key, self.anchor.key)

    def __eq__(self, other) -> bool:
        if isinstance(other, PlacedRhombus):
            return self._key == other._key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        c = "" if self.colors is None else f", colors={self.colors}"
        return f"PlacedRhombus({self.shape!r}, {self.anchor!r}{c})"

    def vertices(self) -> tuple[ExactPoint, ...]:
        vs = self._vertices
        if vs is None:
            b = self.shape.basis
            p = self.anchor
            pu = p + b.unit_point(self.shape.c1)
            puv = pu + b.unit_point(self.shape.c2)
            pv = p + b.unit_point(self.shape.c2)
            vs = (p, pu, puv, pv)
            self._vertices = vs
        return vs

    def side_endpoints(self, side: int) -> tuple[ExactPoint, ExactPoint]:
        vs = self.vertices()
        return vs[side], vs[(side + 1) % 4]

    def side_color(self, side: int) -> Optional[str]:
        return None if self.colors is None else self.colors[side]

    def edge_key(self, side: int) -> EKey:
        a, b = self.side_endpoints(side)
        ka, kb = a.key, b.key
        return (ka, kb) if ka <= kb else (kb, ka)

    def edge_keys(self) -> tuple[EKey, ...]:
        return tuple(self.edge_key(s) for s in range(4))

    def center_doubled(self) -> CycInt:
        """2 * center, an exact ring element (centers live in half-integers)."""
        return self.anchor.red + self.anchor.red + self.shape.u + self.shape.v

    def float_center(self) -> complex:
        c = self._fc
        if c is None:
            c = self.center_doubled().complex_value() / 2.0
            self._fc = c
        return c

    def erase_colors(self) -> "PlacedRhombus":
        if self.colors is None:
            return self
        return PlacedRhombus(self.shape, self.anchor, None)

    def translated(self, offset: ExactPoint) -> "PlacedRhombus":
        return PlacedRhombus(self.shape, self.anchor + offset, self.colors)


def point_from_vkey(basis: DirectionBasis, vkey: VKey) -> ExactPoint:
    """ExactPoint from a reduced coefficient tuple (vertex/edge key entry).

    Reduced coefficients index powers zeta^0..zeta^(deg-1), which are among
    the unit directions, so padding with zeros reproduces the point.
    """
    return ExactPoint(basis, tuple(vkey) + (0,) * (basis.order - len(vkey)))


# ---------------------------------------------------------------------------
# contact classification


@dataclass(frozen=True)
class Contact:
    kind: str  # "disjoint" | "vertex" | "edge" | "overlap" | "bad"
    shared_edge: Optional[tuple[int, int]] = None  # (side of A, side of B)
    shared_vertex: Optional[tuple] = None  # reduced key relative to A's anchor


_contact_cache: dict[tuple, Contact] = {}


def _rel_vertices(shape: Shape, base: CycInt) -> tuple[CycInt, ...]:
    u, v = shape.u, shape.v
    return (base, base + u, base + u + v, base + v)


def _axis_profile(shape: Shape, axis_conj: CycInt, ring: CycRing):
    """Projection interval of the shape (anchored at 0) onto an axis normal.

    Vertex projections are 0, pu, pu+pv, pv, so the interval endpoints are
    the sums of the negative and of the positive parts of {pu, pv}.
    """
    lo = ring.zero
    hi = ring.zero
    for vec in (shape.u, shape.v):
        e = axis_conj * vec
        s = sign_im(e)
        if s < 0:
            lo = lo + e
        elif s > 0:
            hi = hi + e
    return lo, hi


def classify_contact(shape_a: Shape, shape_b: Shape, delta: CycInt) -> Contact:
    """Classify the contact of B anchored at delta against A anchored at 0.

    A separating-axis test over the involved direction classes decides
    interior overlap; touching cases are then told apart by comparing vertex
    and edge sets exactly, with any vertex lying strictly inside a foreign
    edge (T-junction, partial edge overlap) classified as bad.
    """
    basis = shape_a.basis
    key = (basis.order, shape_a.key, shape_b.key, delta.co)
    hit = _contact_cache.get(key)
    if hit is not None:
        return hit
    ring = basis.ring

    separated = False
    for c in sorted({shape_a.c1, shape_a.c2, shape_b.c1, shape_b.c2}):
        axis_conj = ring.unit(-c)
        lo_a, hi_a = _axis_profile(shape_a, axis_conj, ring)
        lo_b, hi_b = _axis_profile(shape_b, axis_conj, ring)
        off = axis_conj * delta
        if sign_im(off + lo_b - hi_a) >= 0 or sign_im(off + hi_b - lo_a) <= 0:
            separated = True
            break

    if not separated:
        contact = Contact("overlap")
        _contact_cache[key] = contact
        return contact

    va = _rel_vertices(shape_a, ring.zero)
    vb = _rel_vertices(shape_b, delta)
    shared_vkeys = {p.co for p in va} & {p.co for p in vb}

    def edge_set(vs):
        out = []
        for i in range(4):
            ka, kb = vs[i].co, vs[(i + 1) % 4].co
            out.append((ka, kb) if ka <= kb else (kb, ka))
        return out

    ea = edge_set(va)
    eb = edge_set(vb)
    shared_edges = [
        (sa, sb) for sa, e1 in enumerate(ea) for sb, e2 in enumerate(eb) if e1 == e2
    ]

    def strictly_inside_some_edge(p: CycInt, vs) -> bool:
        for i in range(4):
            a, b = vs[i], vs[(i + 1) % 4]
            if p.co == a.co or p.co == b.co:
                continue
            w = b - a
            if cross_sign(w, p - a) != 0:
                continue
            if dot_sign(p - a, w) > 0 and dot_sign(p - b, w) < 0:
                return True
        return False

    bad = any(strictly_inside_some_edge(p, vb) for p in va) or any(
        strictly_inside_some_edge(p, va) for p in vb
    )

    if bad or len(shared_edges) > 1:
        contact = Contact("bad")
    elif len(shared_edges) == 1:
        contact = Contact("edge", shared_edge=shared_edges[0])
    elif not shared_vkeys:
        contact = Contact("disjoint")
    elif len(shared_vkeys) == 1:
        contact = Contact("vertex", shared_vertex=next(iter(shared_vkeys)))
    else:
        contact = Contact("bad")
    _contact_cache[key] = contact
    return contact


_float_radius_cache: dict[tuple, float] = {}


def _float_radius(shape: Shape) -> float:
    """Circumradius of the shape (half the long diagonal), as a float."""
    key = (shape.basis.order, shape.key)
    r = _float_radius_cache.get(key)
    if r is None:
        d1 = abs((shape.u + shape.v).complex_value())
        d2 = abs((shape.u - shape.v).complex_value())
        r = max(d1, d2) / 2.0
        _float_radius_cache[key] = r
    return r


# ---------------------------------------------------------------------------
# exact distance predicates


_edge_dist_cache: dict[tuple, bool] = {}


def edge_dist_ge(rel_a: CycInt, rel_b: CycInt, num: int, den: int = 1) -> bool:
    """True iff dist(0, segment [A, B]) >= num/den, exactly."""
    key = (rel_a.ring.order, rel_a.co, rel_b.co, num, den)
    hit = _edge_dist_cache.get(key)
    if hit is not None:
        return hit
    ring = rel_a.ring
    w = rel_b - rel_a
    nn = ring.from_int(num * num)
    dd = den * den
    # nearest point of the segment: an endpoint or the perpendicular foot
    if dot_sign(w, -rel_a) <= 0:
        res = sign_real_elem(rel_a.norm2() * dd - nn) >= 0
    elif dot_sign(w, -rel_b) >= 0:
        res = sign_real_elem(rel_b.norm2() * dd - nn) >= 0
    else:
        m = w.conj() * (-rel_a)
        s = m - m.conj()  # 2i Im(m), so Im(m)^2 = -(s*s)/4
        lhs = -(s * s) * dd
        rhs = (4 * num * num) * w.norm2()
        res = sign_real_elem(lhs - rhs) >= 0
    _edge_dist_cache[key] = res
    return res


def point_segment_dist_sq(c: CycInt, a: CycInt, b: CycInt):
    """Exact squared distance from point c to segment [a, b] as a QCyc.

    Requires |b - a|^2 to be a rational integer (true for unit edges), so the
    perpendicular-foot case has an integer denominator.
    """
    from .cyclotomic import QCyc

    ring = c.ring
    w = b - a
    if dot_sign(w, c - a) <= 0:
        return QCyc((c - a).norm2(), 1)
    if dot_sign(w, c - b) >= 0:
        return QCyc((c - b).norm2(), 1)
    w2 = w.norm2()
    if any(w2.co[1:]):
        raise GeometryError("segment length squared must be a rational integer")
    m = w.conj() * (c - a)
    s = m - m.conj()  # 2i Im(m)
    return QCyc(-(s * s), 4 * int(w2.co[0]))


def point_norm_le(p: CycInt, num: int, den: int = 1) -> bool:
    """|p| <= num/den, exactly."""
    return sign_real_elem(p.norm2() * (den * den) - p.ring.from_int(num * num)) <= 0


def point_norm_le_n_plus_sqrt(p: CycInt, n: int, d_sq: CycInt) -> bool:
    """|p| <= n + sqrt(d_sq), exactly (d_sq a nonnegative real ring element)."""
    t = p.norm2() - p.ring.from_int(n * n) - d_sq
    if sign_real_elem(t) <= 0:
        return True
    return sign_real_elem(t * t - (4 * n * n) * d_sq) <= 0


# ---------------------------------------------------------------------------
# cone predicate (used by the chain monotonicity check)


def in_open_double_cone(w: CycInt, axis_class: int, cos2_doubled: CycInt) -> bool:
    """Is w != 0 strictly inside the open double cone about direction class
    axis_class with half-angle theta, where cos2_doubled = 2*cos(theta)?

    The angle phi of w to the axis line satisfies cos(phi) > cos(theta) iff
    4*Re(conj(w)*axis)^2 > (2 cos theta)^2 * |w|^2.
    """
    axis = w.ring.unit(axis_class)
    m = w.conj() * axis
    re2 = m + m.conj()  # 2 Re(m)
    lhs = re2 * re2
    rhs = (cos2_doubled * cos2_doubled) * w.norm2()
    return sign_real_elem(lhs - rhs) > 0


# ---------------------------------------------------------------------------
# patches


class Patch:
    """A finite, overlap-free, edge-to-edge set of placed rhombi.

    Immutable; with_placed returns an extended copy and raises PlacementError
    on any violation against the existing tiles. Global properties (support
    connectivity, simple connectivity via the Euler characteristic) are
    checked by validate(), not incrementally.
    """

    __slots__ = (
        "basis",
        "placements",
        "edge_map",
        "vertex_map",
        "_key_set",
        "_geom_key_set",
    )

    def __init__(self, basis, placements, edge_map, vertex_map, key_set, geom_keys):
        self.basis = basis
        self.placements = placements
        self.edge_map = edge_map
        self.vertex_map = vertex_map
        self._key_set = key_set
        self._geom_key_set = geom_keys

    @classmethod
    def empty(cls, basis: DirectionBasis) -> "Patch":
        return cls(basis, (), {}, {}, frozenset(), frozenset())

    @classmethod
    def from_placements(
        cls, basis: DirectionBasis, placements: Iterable[PlacedRhombus]
    ) -> "Patch":
        patch = cls.empty(basis)
        for rh in placements:
            patch = patch.with_placed(rh)
        return patch

    def __len__(self) -> int:
        return len(self.placements)

    def __iter__(self) -> Iterator[PlacedRhombus]:
        return iter(self.placements)

    @property
    def is_empty(self) -> bool:
        return not self.placements

    def has_placement_key(self, key) -> bool:
        return key in self._key_set

    def has_geom_key(self, gkey) -> bool:
        return gkey in self._geom_key_set

    def vertex_keys(self):
        return self.vertex_map.keys()

    def boundary_edges(self) -> Iterator[EKey]:
        for ekey, inc in self.edge_map.items():
            if len(inc) == 1:
                yield ekey

    def edge_incidence(self, ekey: EKey) -> tuple:
        """Incident (placement index, side) pairs of an edge key."""
        return self.edge_map.get(ekey, ())

    def edge_endpoints(self, ekey: EKey) -> tuple[ExactPoint, ExactPoint]:
        """Endpoints as ExactPoints, ordered to match the key order."""
        idx, side = self.edge_map[ekey][0]
        a, b = self.placements[idx].side_endpoints(side)
        return (a, b) if a.key == ekey[0] else (b, a)

    def with_placed(self, rh: PlacedRhombus) -> "Patch":
        if rh.anchor.basis is not self.basis:
            raise GeometryError("placement basis does not match patch basis")
        if rh.key in self._key_set:
            raise PlacementError("DUPLICATE")
        if rh.geom_key in self._geom_key_set:
            raise PlacementError("OVERLAP", "second tile on an occupied parallelogram")
        new_edges = rh.edge_keys()
        for ek in new_edges:
            inc = self.edge_map.get(ek)
            if inc is not None and len(inc) >= 2:
                raise PlacementError("EDGE_SATURATED")

        rc = rh.float_center()
        rrad = _float_radius(rh.shape)
        anchor_red = rh.anchor.red
        for other in self.placements:
            # float prefilter: centers farther apart than the two
            # circumradii plus slack cannot interact
            if abs(rc - other.float_center()) > rrad + _float_radius(other.shape) + 1e-9:
                continue
            contact = classify_contact(
                other.shape, rh.shape, anchor_red - other.anchor.red
            )
            if contact.kind == "overlap":
                raise PlacementError("OVERLAP")
            if contact.kind == "bad":
                raise PlacementError("BAD_CONTACT")
            if contact.kind == "edge":
                sa, sb = contact.shared_edge
                ca = other.side_color(sa)
                cb = rh.side_color(sb)
                if ca is not None and cb is not None and ca != cb:
                    raise PlacementError("COLOR_MISMATCH")

        idx = len(self.placements)
        edge_map = dict(self.edge_map)
        for s, ek in enumerate(new_edges):
            edge_map[ek] = edge_map.get(ek, ()) + ((idx, s),)
        vertex_map = dict(self.vertex_map)
        for v in rh.vertices():
            vk = v.key
            vertex_map[vk] = vertex_map.get(vk, ()) + (idx,)
        return Patch(
            self.basis,
            self.placements + (rh,),
            edge_map,
            vertex_map,
            self._key_set | {rh.key},
            self._geom_key_set | {rh.geom_key},
        )

    def is_connected(self) -> bool:
        """Support connectivity (a shared vertex already connects)."""
        n = len(self.placements)
        if n <= 1:
            return True
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for inc in self.vertex_map.values():
            r = find(inc[0])
            for j in inc[1:]:
                rj = find(j)
                if rj != r:
                    parent[rj] = r
        return len({find(i) for i in range(n)}) == 1

    def euler_characteristic(self) -> int:
        return len(self.vertex_map) - len(self.edge_map) + len(self.placements)

    def is_simply_connected(self) -> bool:
        """Connected with no holes: V - E + F = 1. Any hole or pinch point
        in the support drops the characteristic below 1."""
        return self.is_empty or (
            self.is_connected() and self.euler_characteristic() == 1
        )

    def validate(self) -> None:
        """Re-check every pairwise contact and the global patch shape."""
        ps = self.placements
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                a, b = ps[i], ps[j]
                lim = _float_radius(a.shape) + _float_radius(b.shape) + 1e-9
                if abs(a.float_center() - b.float_center()) > lim:
                    continue
                c = classify_contact(a.shape, b.shape, b.anchor.red - a.anchor.red)
                if c.kind in ("overlap", "bad"):
                    raise PlacementError(
                        "OVERLAP" if c.kind == "overlap" else "BAD_CONTACT",
                        f"placements {i} and {j}",
                    )
                if c.kind == "edge":
                    sa, sb = c.shared_edge
                    ca, cb = a.side_color(sa), b.side_color(sb)
                    if ca is not None and cb is not None and ca != cb:
                        raise PlacementError("COLOR_MISMATCH", f"placements {i}, {j}")
        if not self.is_empty:
            if not self.is_connected():
                raise PlacementError("DISCONNECTED")
            if self.euler_characteristic() != 1:
                raise PlacementError("HOLE", "Euler characteristic != 1")

    def support_contains_disk(
        self, center: ExactPoint, num: int, den: int = 1
    ) -> bool:
        """Does the closed disk of radius num/den about a patch vertex lie
        inside the support? True iff the center is a covered vertex and every
        boundary edge keeps distance >= num/den from it, tested exactly."""
        if center.key not in self.vertex_map:
            return False
        return not self.deficient_boundary_edges(center, num, den, first_only=True)

    def deficient_boundary_edges(
        self, center: ExactPoint, num: int, den: int = 1, first_only: bool = False
    ) -> list[EKey]:
        """Boundary edges at exact distance < num/den from the center."""
        out = []
        c_red = center.red
        cv = c_red.complex_value()
        rad = num / den
        for ekey in self.boundary_edges():
            a, b = self.edge_endpoints(ekey)
            fa = abs(a.red.complex_value() - cv)
            fb = abs(b.red.complex_value() - cv)
            if min(fa, fb) > rad + 1.0:
                continue
            if not edge_dist_ge(a.red - c_red, b.red - c_red, num, den):
                out.append(ekey)
                if first_only:
                    return out
        return out

    def translated(self, offset: ExactPoint) -> "Patch":
        return Patch.from_placements(
            self.basis, (rh.translated(offset) for rh in self.placements)
        )

    def erase_colors(self) -> "Patch":
        return Patch.from_placements(
            self.basis, (rh.erase_colors() for rh in self.placements)
        )

    def without_index(self, drop: int) -> "Patch":
        """Rebuild the patch minus one placement (validation re-run)."""
        return Patch.from_placements(
            self.basis,
            (rh for i, rh in enumerate(self.placements) if i != drop),
        )

    def __repr__(self) -> str:
        return f"Patch({len(self.placements)} placements, order {self.basis.order})"


# ---------------------------------------------------------------------------
# gluing


def place_adjacent(
    patch: Patch,
    edge: EKey,
    shape: Shape,
    side: int,
    colors: Optional[Sequence[str]] = None,
) -> Patch:
    """Glue a new rhombus onto a boundary edge of the patch so that the given
    side of the new rhombus coincides with that edge.

    A side index determines the placement uniquely: sides s and s + 2 give
    the two mirror placements across the edge line. The side's direction
    class must equal the edge's (else NOT_PARALLEL) and the edge must have a
    free side (else EDGE_SATURATED); the usual contact checks then apply.
    """
    inc = patch.edge_incidence(edge)
    if not inc:
        raise PlacementError("NOT_BOUNDARY", "edge not in patch")
    if len(inc) >= 2:
        raise PlacementError("EDGE_SATURATED")
    if not 0 <= side <= 3:
        raise GeometryError("side must be in 0..3")
    a, b = patch.edge_endpoints(edge)
    rh = placed_on_edge(patch.basis, shape, side, a, b, colors)
    return patch.with_placed(rh)


def placements_on_edge(
    basis: DirectionBasis,
    shape: Shape,
    a: ExactPoint,
    b: ExactPoint,
    colors: Optional[Sequence[str]] = None,
) -> list[tuple[int, PlacedRhombus]]:
    """All (side, placement) pairs of the shape covering segment ab: one per
    side whose direction class matches the segment's, so two mirror
    placements when the shape carries the class, none otherwise."""
    diff = b.red - a.red
    try:
        cls, _ = basis.edge_step(diff)
    except GeometryError:
        return []
    out = []
    for side in range(4):
        if shape.side_class(side) == cls:
            out.append((side, placed_on_edge(basis, shape, side, a, b, colors)))
    return out


# side s runs from vertex s to vertex s+1; as (u, v) offsets from the anchor
_SIDE_START_OFFSETS = ((0, 0), (1, 0), (1, 1), (0, 1))
# direction of side s as a signed multiple of the spanning vector
_SIDE_DIR_SIGN = (1, 1, -1, -1)


def placed_on_edge(
    basis: DirectionBasis,
    shape: Shape,
    side: int,
    a: ExactPoint,
    b: ExactPoint,
    colors: Optional[Sequence[str]] = None,
) -> PlacedRhombus:
    """The unique placement whose given side occupies segment {a, b}.

    Side s always runs in a fixed direction (+u, +v, -u, -v for s = 0..3),
    so the anchor is pinned by which endpoint the side starts at.
    """
    cls, sign = basis.edge_step(b.red - a.red)
    if shape.side_class(side) != cls:
        raise PlacementError("NOT_PARALLEL")
    # side runs a->b when its direction sign matches the segment's
    start = a if sign == _SIDE_DIR_SIGN[side] else b
    su, sv = _SIDE_START_OFFSETS[side]
    off = basis.zero_point
    if su:
        off = off + basis.unit_point(shape.c1)
    if sv:
        off = off + basis.unit_point(shape.c2)
    rh = PlacedRhombus(shape, start - off, colors)
    ea, eb = rh.side_endpoints(side)
    assert {ea.key, eb.key} == {a.key, b.key}
    return rh


# ---------------------------------------------------------------------------
# integer vertex coordinates


def connected_components(patch: Patch) -> list["Patch"]:
    """Edge-connected components of a patch, as patches. Ordered largest
    first, ties by least placement key; placements keep their relative
    order. A sample that is not one piece (a pentagrid dual cut to a finite
    window, say) splits into contexts where chain levels are well defined.
    """
    n = len(patch.placements)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for ekey in patch.edge_map:
        inc = patch.edge_incidence(ekey)
        if len(inc) == 2:
            a, b = find(inc[0][0]), find(inc[1][0])
            if a != b:
                parent[max(a, b)] = min(a, b)

    groups: dict[int, list[PlacedRhombus]] = {}
    for i, rh in enumerate(patch.placements):
        groups.setdefault(find(i), []).append(rh)
    members = sorted(
        groups.values(), key=lambda g: (-len(g), min(rh.key for rh in g))
    )
    return [Patch.from_placements(patch.basis, g) for g in members]


def vertex_coordinates(
    patch: Patch, base: Optional[VKey] = None
) -> dict[VKey, tuple[int, ...]]:
    """Integer coordinates of patch vertices: walk edges from a base vertex,
    adding +-e_k per step of direction class k. Path independent on simply
    connected patches; a contradiction raises GeometryError (signals a hole).

    The base vertex (default: lexicographically least key) gets the zero
    vector; coordinate k of vertex w counts signed class-k steps from the
    base to w along any edge path.
    """
    if patch.is_empty:
        return {}
    basis = patch.basis
    nc = basis.n_classes
    if base is None:
        base = min(patch.vertex_map.keys())
    elif base not in patch.vertex_map:
        raise GeometryError("base vertex not in patch")

    adj: dict[VKey, list[tuple[VKey, int, int]]] = {v: [] for v in patch.vertex_map}
    for ekey in patch.edge_map:
        pa, pb = patch.edge_endpoints(ekey)
        cls, sign = basis.edge_step(pb.red - pa.red)
        adj[pa.key].append((pb.key, cls, sign))
        adj[pb.key].append((pa.key, cls, -sign))

    coords: dict[VKey, tuple[int, ...]] = {base: (0,) * nc}
    stack = [base]
    while stack:
        v = stack.pop()
        kv = coords[v]
        for w, cls, sign in adj[v]:
            nw = list(kv)
            nw[cls] += sign
            nw = tuple(nw)
            old = coords.get(w)
            if old is None:
                coords[w] = nw
                stack.append(w)
            elif old != nw:
                raise GeometryError(
                    "inconsistent vertex coordinates; patch is not simply connected"
                )
    if len(coords) != len(patch.vertex_map):
        raise GeometryError("patch support is not edge-connected")
    return coords
