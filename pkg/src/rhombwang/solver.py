"""Enumeration of locally allowed patterns and the disk-tiling procedure.

enumerate_locally_allowed lists the colored minimal-radius-n patterns of a
tileset whose erased projections avoid a finite forbidden list; disk_tiling
asks whether that list is nonempty; refutation_search deepens the rank until
a refutation appears, and periodic_certificate looks for positive witnesses
on translation lattices.

Growth strategy. Each search root fixes a tile with one of its four corners
at the origin, the designated disk center. A partial patch either covers the
closed n-disk (no boundary edge nearer than n) and is emitted if it is a
simply connected removal-minimal patch, or it has a deficient boundary edge;
the lex-least deficient edge is selected and the search branches over every
tile placement covering it from either side. This is complete: a minimal
pattern x cannot strictly contain a covering subpatch (removing the extra
tiles would keep the disk covered), and any deficient edge of a subpatch of
x is interior to x, so the branch placing x's own filler is always among the
children. States are deduplicated per root by placement-key set; emissions
are deduplicated globally by canonical pattern.

Budgets are node caps per root branch so that results do not depend on
worker scheduling; a result object records completeness instead of guessing,
and only disk_tiling raises BudgetExceeded, where "unknown" must never be
conflated with "empty".
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .geometry import (
    DirectionBasis,
    ExactPoint,
    GeometryError,
    Patch,
    PlacedRhombus,
    PlacementError,
    Shape,
    ShapeSet,
    placements_on_edge,
    point_from_vkey,
    point_norm_le_n_plus_sqrt,
)
from .patterns import (
    Pattern,
    SubshiftSpec,
    canonicalize,
    is_minimal_for,
)
from .tiles import Tile, Tileset


class BudgetExceeded(RuntimeError):
    """A search ran out of nodes or time before reaching an answer."""

    def __init__(self, message: str, rank: Optional[int] = None):
        super().__init__(message)
        self.rank = rank


@dataclass
class EnumerationStats:
    nodes: int = 0
    emitted: int = 0
    kept: int = 0
    pruned: dict = field(default_factory=dict)
    roots: int = 0
    elapsed: float = 0.0

    def bump(self, reason: str, k: int = 1) -> None:
        self.pruned[reason] = self.pruned.get(reason, 0) + k

    def merge(self, other: "EnumerationStats") -> None:
        self.nodes += other.nodes
        self.emitted += other.emitted
        self.roots += other.roots
        for k, v in other.pruned.items():
            self.bump(k, v)


@dataclass
class EnumerationResult:
    """patterns is canonical and sorted; complete means every root branch
    was exhausted within budget, so the list is all of A_n."""

    patterns: tuple[Pattern, ...]
    complete: bool
    stats: EnumerationStats

    def __len__(self) -> int:
        return len(self.patterns)


def _check_forbidden(tileset: Tileset, forbidden: Sequence[Pattern]) -> tuple:
    out = []
    for f in forbidden:
        if not isinstance(f, Pattern):
            raise TypeError("forbidden entries must be Patterns")
        if f.patch.basis is not tileset.basis:
            raise GeometryError("forbidden pattern basis differs from tileset")
        if f.is_colored:
            raise GeometryError("forbidden patterns must be uncolored")
        out.append(f)
    return tuple(out)


def _corner_anchor(tile: Tile, corner: int, basis: DirectionBasis) -> ExactPoint:
    """Anchor putting the tile's given corner (vertex index) at the origin."""
    sh = tile.shape
    offs = (
        basis.zero_point,
        basis.unit_point(sh.c1),
        basis.unit_point(sh.c1) + basis.unit_point(sh.c2),
        basis.unit_point(sh.c2),
    )
    return basis.zero_point - offs[corner]


def _grow_root(
    tileset: Tileset,
    forbidden: Sequence[Pattern],
    n: int,
    tile_index: int,
    corner: int,
    budget_nodes: Optional[int],
    stop_after: Optional[int],
    deadline: Optional[float],
) -> tuple[dict, bool, EnumerationStats]:
    """Exhaust one root branch. Returns (patterns by key, complete, stats)."""
    basis = tileset.basis
    center = basis.zero_point
    d_sq = tileset.shapeset.diameter_sq_max()
    stats = EnumerationStats(roots=1)
    found: dict = {}

    tile = tileset.tiles[tile_index]
    root = Patch.empty(basis).with_placed(
        tile.placed(_corner_anchor(tile, corner, basis))
    )
    stack = [root]
    seen = {frozenset(rh.key for rh in root.placements)}
    complete = True

    while stack:
        if budget_nodes is not None and stats.nodes >= budget_nodes:
            complete = False
            break
        if deadline is not None and time.monotonic() > deadline:
            complete = False
            break
        patch = stack.pop()
        stats.nodes += 1

        deficient = patch.deficient_boundary_edges(center, n)
        if not deficient:
            # disk covered: emit if this is a simply connected minimal patch,
            # and stop the branch either way (growing past a cover can never
            # reach a minimal pattern again)
            if patch.is_simply_connected() and is_minimal_for(patch, n):
                for vk in patch.vertex_keys():
                    p = point_from_vkey(basis, vk)
                    assert point_norm_le_n_plus_sqrt(p.red, n, d_sq), (
                        "support escapes the n + diameter disk"
                    )
                pat = canonicalize(patch)
                stats.emitted += 1
                if pat.key not in found:
                    found[pat.key] = pat
                    if stop_after is not None and len(found) >= stop_after:
                        return found, complete, stats
            else:
                stats.bump("not_minimal_or_holed")
            continue

        ekey = min(deficient)
        a, b = patch.edge_endpoints(ekey)
        children = []
        for t in tileset.tiles:
            for _side, rh in placements_on_edge(basis, t.shape, a, b, t.colors):
                try:
                    child = patch.with_placed(rh)
                except PlacementError as e:
                    stats.bump(e.code.lower())
                    continue
                if any(f.occurs_including(child, rh) for f in forbidden):
                    stats.bump("forbidden")
                    continue
                key = frozenset(p.key for p in child.placements)
                if key in seen:
                    stats.bump("revisit")
                    continue
                seen.add(key)
                children.append(child)
        # push reversed so the stack explores children in canonical order
        stack.extend(reversed(children))

    return found, complete, stats


# ---------------------------------------------------------------------------
# multiprocessing plumbing: plain-tuple descriptors, rebuilt in each worker


def _tileset_desc(ts: Tileset) -> tuple:
    return (
        ts.basis.order,
        tuple(s.key for s in ts.shapeset),
        tuple((t.shape.key, t.colors) for t in ts.tiles),
    )


def _tileset_from_desc(desc: tuple) -> Tileset:
    order, shape_keys, tile_rows = desc
    basis = DirectionBasis(order)
    ss = ShapeSet(basis, (Shape(basis, a, b) for a, b in shape_keys))
    tiles = [Tile(Shape(basis, a, b), colors) for (a, b), colors in tile_rows]
    return Tileset(ss, tiles, allow_reserved=True)


def _pattern_desc(p: Pattern) -> tuple:
    return p.key


def _pattern_from_key(basis: DirectionBasis, key: tuple) -> Pattern:
    order, entries = key
    assert order == basis.order
    placements = [
        PlacedRhombus(
            Shape(basis, sk[0], sk[1]), point_from_vkey(basis, rel), colors
        )
        for sk, rel, colors in entries
    ]
    return canonicalize(Patch.from_placements(basis, placements))


def _root_task(args: tuple) -> tuple:
    ts_desc, forb_keys, n, tile_index, corner, budget_nodes = args
    ts = _tileset_from_desc(ts_desc)
    basis = ts.basis
    forbidden = [_pattern_from_key(basis, k).erase_colors() for k in forb_keys]
    found, complete, stats = _grow_root(
        ts, forbidden, n, tile_index, corner, budget_nodes, None, None
    )
    return (
        sorted(found.keys()),
        complete,
        (stats.nodes, stats.emitted, stats.pruned),
    )


# ---------------------------------------------------------------------------
# public operations


def enumerate_locally_allowed(
    n: int,
    forbidden: Sequence[Pattern],
    tileset: Tileset,
    budget_nodes: Optional[int] = None,
    budget_seconds: Optional[float] = None,
    stop_after: Optional[int] = None,
    jobs: int = 1,
) -> EnumerationResult:
    """All colored patterns of minimal radius n over the tileset whose
    erased projections avoid every forbidden pattern.

    The output is duplicate-free in canonical form and sorted, identical for
    any worker count. budget_nodes caps search nodes per root branch (a
    scheduling-independent budget); a capped run returns complete=False.
    stop_after ends the search once that many distinct patterns exist
    (jobs=1 only) - the existence shortcut used by disk_tiling.
    """
    if n < 0:
        raise ValueError("rank must be nonnegative")
    forbidden = _check_forbidden(tileset, forbidden)
    t0 = time.monotonic()
    deadline = t0 + budget_seconds if budget_seconds is not None else None
    stats = EnumerationStats()
    merged: dict = {}
    complete = True

    roots = [
        (ti, corner)
        for ti in range(len(tileset.tiles))
        for corner in range(4)
    ]

    if jobs > 1 and stop_after is None and len(roots) > 1:
        import multiprocessing as mp

        ts_desc = _tileset_desc(tileset)
        forb_keys = [_pattern_desc(f) for f in forbidden]
        tasks = [
            (ts_desc, forb_keys, n, ti, corner, budget_nodes)
            for ti, corner in roots
        ]
        with mp.Pool(processes=jobs) as pool:
            for keys, ok, (nodes, emitted, pruned) in pool.map(_root_task, tasks):
                complete = complete and ok
                sub = EnumerationStats(nodes=nodes, emitted=emitted, roots=1)
                sub.pruned = dict(pruned)
                stats.merge(sub)
                for k in keys:
                    if k not in merged:
                        merged[k] = _pattern_from_key(tileset.basis, k)
    else:
        for ti, corner in roots:
            want = None
            if stop_after is not None:
                want = stop_after - len(merged)
            found, ok, sub = _grow_root(
                tileset, forbidden, n, ti, corner, budget_nodes, want, deadline
            )
            complete = complete and ok
            stats.merge(sub)
            for k, p in found.items():
                merged.setdefault(k, p)
            if stop_after is not None and len(merged) >= stop_after:
                break
            if deadline is not None and time.monotonic() > deadline:
                complete = False
                break

    patterns = tuple(sorted(merged.values(), key=lambda p: p.sort_key()))
    stats.kept = len(patterns)
    stats.elapsed = time.monotonic() - t0
    return EnumerationResult(patterns, complete, stats)


def disk_tiling(
    tileset: Tileset,
    spec: SubshiftSpec,
    n: int,
    budget_nodes: Optional[int] = None,
    budget_seconds: Optional[float] = None,
) -> bool:
    """Is A_n nonempty for the tileset against the first n forbidden
    patterns? True is sound regardless of budget; a capped search that found
    nothing raises BudgetExceeded rather than answering."""
    ok, _ = _disk_tiling_result(tileset, spec, n, budget_nodes, budget_seconds)
    return ok


def _disk_tiling_result(
    tileset: Tileset,
    spec: SubshiftSpec,
    n: int,
    budget_nodes: Optional[int],
    budget_seconds: Optional[float],
) -> tuple[bool, EnumerationResult]:
    if tileset.basis is not spec.shapeset.basis:
        raise GeometryError("tileset and subshift bases differ")
    for s in tileset.shapeset:
        if not spec.shapeset.has_key(s.key):
            raise GeometryError(
                f"tileset shape {s.key} is outside the subshift shapeset"
            )
    forbidden = spec.forbidden_prefix(n)
    result = enumerate_locally_allowed(
        n,
        forbidden,
        tileset,
        budget_nodes=budget_nodes,
        budget_seconds=budget_seconds,
        stop_after=1,
    )
    if result.patterns:
        return True, result
    if not result.complete:
        raise BudgetExceeded(f"rank-{n} search exhausted its budget", rank=n)
    return False, result


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class SearchVerdict:
    """Outcome of a refutation search.

    kind is one of ALLOWED_UP_TO_RANK, UNTILEABLE_AT_RANK,
    PERIODIC_CERTIFICATE, BUDGET_EXHAUSTED; n is the rank the verdict speaks
    about. A periodic certificate carries its fundamental-domain patch and
    period vectors, and certificate_sound records whether the forbidden list
    was declared complete (only then does the certificate settle the Domino
    instance; against a mere prefix it certifies the prefix only).
    """

    kind: str
    n: Optional[int]
    patch: Optional[Patch] = None
    periods: Optional[tuple[ExactPoint, ExactPoint]] = None
    certificate_sound: Optional[bool] = None
    stats: dict = field(default_factory=dict)
    note: str = ""


def refutation_search(
    tileset: Tileset,
    spec: SubshiftSpec,
    n_max: int,
    budget_nodes: Optional[int] = None,
    budget_seconds: Optional[float] = None,
    max_period: int = 3,
) -> SearchVerdict:
    """Iterative deepening over the rank: return UNTILEABLE_AT_RANK at the
    least n <= n_max where A_n is empty; otherwise try for a periodic
    certificate; otherwise ALLOWED_UP_TO_RANK(n_max)."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    t0 = time.monotonic()
    nodes = 0
    retained = 0
    for n in range(n_max + 1):
        remaining = None
        if budget_seconds is not None:
            remaining = budget_seconds - (time.monotonic() - t0)
            if remaining <= 0:
                return SearchVerdict(
                    "BUDGET_EXHAUSTED", n,
                    stats=_verdict_stats(nodes, retained, t0),
                )
        try:
            ok, result = _disk_tiling_result(
                tileset, spec, n, budget_nodes, remaining
            )
        except BudgetExceeded:
            return SearchVerdict(
                "BUDGET_EXHAUSTED", n, stats=_verdict_stats(nodes, retained, t0)
            )
        nodes += result.stats.nodes
        retained += len(result.patterns)
        if not ok:
            return SearchVerdict(
                "UNTILEABLE_AT_RANK", n,
                stats=_verdict_stats(nodes, retained, t0),
            )
    cert = periodic_certificate(tileset, spec, max_period)
    if cert is not None:
        patch, periods = cert
        return SearchVerdict(
            "PERIODIC_CERTIFICATE",
            n_max,
            patch=patch,
            periods=periods,
            certificate_sound=spec.complete_finite,
            stats=_verdict_stats(nodes, retained, t0),
            note=(
                "certificate settles the instance (complete finite F)"
                if spec.complete_finite
                else "certificate valid against the supplied prefix of F only"
            ),
        )
    return SearchVerdict(
        "ALLOWED_UP_TO_RANK", n_max, stats=_verdict_stats(nodes, retained, t0)
    )


def _verdict_stats(nodes: int, retained: int, t0: float) -> dict:
    return {
        "nodes": nodes,
        "patterns_retained": retained,
        "wall_time": time.monotonic() - t0,
    }


# ---------------------------------------------------------------------------
# periodic certificates on translation lattices


def periodic_certificate(
    tileset: Tileset,
    spec: SubshiftSpec,
    max_period: int = 3,
) -> Optional[tuple[Patch, tuple[ExactPoint, ExactPoint]]]:
    """Search for a periodic tiling with a single-shape translation lattice:
    an a x b fundamental domain of one shape with a row shift c, periods
    p1 = a*u and p2 = c*u + b*v. Colors must match across the torus; the
    certificate is then re-validated on an explicit window one forbidden
    diameter beyond a fundamental domain. Returns None when no such
    certificate exists within max_period (absence is a normal outcome; mixed
    shape periodic tilings are out of this search's reach)."""
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    forbidden = list(spec.forbidden)
    domains = sorted(
        (
            (a * b, a, b, c)
            for a in range(1, max_period + 1)
            for b in range(1, max_period + 1)
            for c in range(a)
        ),
    )
    for shape in tileset.shapeset:
        tiles = tileset.tiles_for_shape(shape.key)
        if not tiles:
            continue
        for _area, a, b, c in domains:
            grid = _fill_torus(tiles, a, b, c)
            if grid is None:
                continue
            cert = _validated_certificate(
                tileset.basis, shape, grid, a, b, c, forbidden
            )
            if cert is not None:
                return cert
    return None


def _fill_torus(
    tiles: Sequence[Tile], a: int, b: int, c: int
) -> Optional[list[list[Tile]]]:
    """Backtracking over tile assignments on the a x b torus with row shift
    c. Wrap rules: right of (a-1, j) is (0, j); above (i, b-1) is
    ((i - c) mod a, 0). Sides: 0 bottom, 1 right, 2 top, 3 left."""
    grid: list[list[Optional[Tile]]] = [[None] * b for _ in range(a)]
    order = [(i, j) for j in range(b) for i in range(a)]

    def fits(i: int, j: int, t: Tile) -> bool:
        # check only constraints whose other cell is already assigned (or is
        # t itself through a wrap); the final full pass catches the rest
        lt = grid[(i - 1) % a][j] if a > 1 else t
        if lt is not None and lt.colors[1] != t.colors[3]:
            return False
        rt = grid[(i + 1) % a][j] if a > 1 else t
        if rt is not None and t.colors[1] != rt.colors[3]:
            return False
        bt = grid[i][j - 1] if j > 0 else None
        if bt is not None and bt.colors[2] != t.colors[0]:
            return False
        if j == b - 1:
            ti2 = (i - c) % a
            tt = t if (ti2 == i and b == 1) else grid[ti2][0]
            if tt is not None and t.colors[2] != tt.colors[0]:
                return False
        return True

    def rec(k: int) -> bool:
        if k == len(order):
            return _torus_consistent(grid, a, b, c)
        i, j = order[k]
        for t in tiles:
            grid[i][j] = t
            if fits(i, j, t) and rec(k + 1):
                return True
            grid[i][j] = None
        return False

    if rec(0):
        return [[grid[i][j] for j in range(b)] for i in range(a)]
    return None


def _torus_consistent(grid, a: int, b: int, c: int) -> bool:
    for i in range(a):
        for j in range(b):
            t = grid[i][j]
            right = grid[(i + 1) % a][j]
            if t.colors[1] != right.colors[3]:
                return False
            if j + 1 < b:
                up = grid[i][j + 1]
            else:
                up = grid[(i - c) % a][0]
            if t.colors[2] != up.colors[0]:
                return False
    return True


def _validated_certificate(
    basis: DirectionBasis,
    shape: Shape,
    grid: list[list[Tile]],
    a: int,
    b: int,
    c: int,
    forbidden: Sequence[Pattern],
) -> Optional[tuple[Patch, tuple[ExactPoint, ExactPoint]]]:
    """Re-validate a torus solution on an explicit window and package it."""
    u = basis.unit_point(shape.c1)
    v = basis.unit_point(shape.c2)

    def cell_tile(i: int, j: int) -> Tile:
        # unwrap (i, j) to the fundamental domain through the period lattice
        jj = j % b
        shift_steps = (j - jj) // b
        ii = (i - shift_steps * c) % a
        return grid[ii][jj % b]

    def cell_anchor(i: int, j: int) -> ExactPoint:
        p = basis.zero_point
        if i:
            p = ExactPoint(basis, tuple(i * x for x in u.coeffs))
        if j:
            q = ExactPoint(basis, tuple(j * x for x in v.coeffs))
            p = p + q
        return p

    # window margin in cells: a step across the lattice moves at least the
    # rhombus altitude, so diameter/altitude cells clear any forbidden needle
    diam = _forbidden_diameter(basis, forbidden)
    alt = abs((u.complex_value().conjugate() * v.complex_value()).imag)
    margin = int(diam / max(alt, 1e-9)) + 2 if forbidden else 1

    placements = []
    for i in range(-margin, a + margin):
        for j in range(-margin, b + margin):
            placements.append(cell_tile(i, j).placed(cell_anchor(i, j)))
    try:
        window = Patch.from_placements(basis, placements)
        window.validate()
    except (PlacementError, GeometryError):
        return None
    for f in forbidden:
        if f.occurs_in(window, ignore_colors=True):
            return None

    domain = Patch.from_placements(
        basis,
        (
            grid[i][j].placed(cell_anchor(i, j))
            for i in range(a)
            for j in range(b)
        ),
    )
    p1 = ExactPoint(basis, tuple(a * x for x in u.coeffs))
    p2 = ExactPoint(
        basis, tuple(c * x + b * y for x, y in zip(u.coeffs, v.coeffs))
    )
    return domain, (p1, p2)


def _forbidden_diameter(basis: DirectionBasis, forbidden: Sequence[Pattern]) -> float:
    """Float upper bound on the largest forbidden-pattern diameter."""
    worst = 0.0
    for f in forbidden:
        pts = []
        for rh in f.patch.placements:
            pts.extend(p.complex_value() for p in rh.vertices())
        for p in pts:
            for q in pts:
                worst = max(worst, abs(p - q))
    return worst + 0.01
