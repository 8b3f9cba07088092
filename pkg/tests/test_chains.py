"""Chain extraction, crossings, the monotonicity cone, and Z^2 indexing.

Hand-checked fixtures, all on small grids:

  * a single square lies on exactly two chains, one per class, each of
    length 1;
  * a 1x3 horizontal row of squares has one chain of normal class 1 (the
    shared vertical edges) with all three cells, plus three length-1 chains
    of normal class 0;
  * a 2x2 block has two column chains (normal 0) and two row chains
    (normal 1), each of length 2.

Every fixture obeys the partition law: the chain lengths over a patch sum
to twice the number of rhombuses, one chain per spanning class each.
"""

import pytest

from rhombwang.chains import (
    Chain,
    ChainError,
    chain_indices,
    chain_level,
    check_monotonicity_cone,
    crossings,
    extract_chains,
    index_occurrences,
)
from rhombwang.geometry import (
    DirectionBasis,
    GeometryError,
    Patch,
    PlacedRhombus,
    Shape,
    ShapeSet,
    place_adjacent,
    vertex_coordinates,
)


def square_at(x, y):
    basis = DirectionBasis(4)
    return PlacedRhombus(Shape(basis, 0, 1), basis.point((x, y, 0, 0)), None)


def square_patch(cells):
    basis = DirectionBasis(4)
    return Patch.from_placements(basis, (square_at(x, y) for x, y in cells))


def grid(w, h):
    return square_patch([(x, y) for y in range(h) for x in range(w)])


def chains_by_normal(patch):
    out = {}
    for c in extract_chains(patch):
        out.setdefault(c.normal, []).append(c)
    return out


def assert_walk_order(patch, chain):
    # consecutive members share an edge of the normal class
    for a, b in zip(chain.members, chain.members[1:]):
        sa = a.shape.c1 if a.shape.c1 == chain.normal else a.shape.c2
        keys_a = {a.edge_key(s) for s in range(4) if a.shape.side_class(s) == chain.normal}
        keys_b = {b.edge_key(s) for s in range(4) if b.shape.side_class(s) == chain.normal}
        assert keys_a & keys_b, "consecutive members must share a normal-class edge"
        assert sa == chain.normal


class TestExtraction:
    def test_single_square_two_chains(self):
        patch = square_patch([(0, 0)])
        chains = extract_chains(patch)
        assert len(chains) == 2
        assert sorted(c.normal for c in chains) == [0, 1]
        assert all(len(c) == 1 for c in chains)

    def test_row_of_three(self):
        patch = square_patch([(0, 0), (1, 0), (2, 0)])
        by_normal = chains_by_normal(patch)
        # cells share vertical (class 1) edges, so the long chain has normal 1
        assert len(by_normal[1]) == 1
        long = by_normal[1][0]
        assert len(long) == 3
        assert long.member_keys() == frozenset(rh.key for rh in patch.placements)
        assert [len(c) for c in by_normal[0]] == [1, 1, 1]
        assert_walk_order(patch, long)

    def test_two_by_two_block(self):
        patch = grid(2, 2)
        by_normal = chains_by_normal(patch)
        assert [len(c) for c in by_normal[0]] == [2, 2]
        assert [len(c) for c in by_normal[1]] == [2, 2]
        # columns share horizontal (class 0) edges
        cols = {frozenset({square_at(x, 0).key, square_at(x, 1).key}) for x in (0, 1)}
        assert {c.member_keys() for c in by_normal[0]} == cols
        rows = {frozenset({square_at(0, y).key, square_at(1, y).key}) for y in (0, 1)}
        assert {c.member_keys() for c in by_normal[1]} == rows

    @pytest.mark.parametrize(
        "cells",
        [
            [(0, 0)],
            [(0, 0), (1, 0), (2, 0)],
            [(0, 0), (1, 0), (0, 1), (1, 1)],
            [(0, 0), (1, 0), (0, 1)],  # L tromino
            [(x, y) for y in range(3) for x in range(3)],
        ],
    )
    def test_partition_law(self, cells):
        patch = square_patch(cells)
        chains = extract_chains(patch)
        assert sum(len(c) for c in chains) == 2 * len(cells)
        # each rhombus lies on exactly two chains
        count = {rh.key: 0 for rh in patch.placements}
        for c in chains:
            for m in c.members:
                count[m.key] += 1
        assert set(count.values()) == {2}

    def test_walk_order_everywhere(self):
        patch = grid(3, 3)
        for c in extract_chains(patch):
            assert_walk_order(patch, c)

    def test_deterministic(self):
        patch = grid(3, 2)
        a = [(c.normal, tuple(m.key for m in c.members)) for c in extract_chains(patch)]
        b = [(c.normal, tuple(m.key for m in c.members)) for c in extract_chains(patch)]
        assert a == b

    def test_interrupted_strip_splits(self):
        # a row with a gap is two maximal segments, not one chain
        patch = square_patch([(0, 0), (1, 0), (3, 0), (4, 0), (2, 1), (2, -1)])
        by_normal = chains_by_normal(patch)
        lengths = sorted(len(c) for c in by_normal[1])
        assert lengths == [1, 1, 2, 2]


class TestCrossings:
    def test_row_crosses_each_cell_chain_once(self):
        patch = square_patch([(0, 0), (1, 0), (2, 0)])
        by_normal = chains_by_normal(patch)
        long = by_normal[1][0]
        for c in by_normal[0]:
            assert crossings(long, c) == 1

    def test_parallel_chains_disjoint(self):
        patch = grid(2, 2)
        by_normal = chains_by_normal(patch)
        for group in by_normal.values():
            assert crossings(group[0], group[1]) == 0

    def test_at_most_one_everywhere(self):
        patch = grid(3, 3)
        chains = extract_chains(patch)
        for i, a in enumerate(chains):
            for b in chains[i + 1 :]:
                assert crossings(a, b) <= 1
        assert all(crossings(c, c) == len(c) for c in chains)


class TestMonotonicityCone:
    def test_square_row_on_boundary_passes(self):
        # a straight row sits exactly on the pi/2 cone boundary; the cone is
        # open, so the check holds
        patch = square_patch([(0, 0), (1, 0), (2, 0)])
        long = chains_by_normal(patch)[1][0]
        for m in long.members:
            assert check_monotonicity_cone(patch, long, m)

    def test_grid_all_members(self):
        patch = grid(3, 3)
        for c in extract_chains(patch):
            for m in c.members:
                assert check_monotonicity_cone(patch, c, m)

    def test_not_on_chain(self):
        patch = square_patch([(0, 0), (1, 0)])
        long = chains_by_normal(patch)[1][0]
        with pytest.raises(ChainError) as e:
            check_monotonicity_cone(patch, long, square_at(0, 5))
        assert e.value.code == "NOT_ON_CHAIN"

    def test_axis_displacement_fails(self):
        # fabricated chain whose members are displaced along the normal
        # axis: strictly inside the cone, so the check must reject it
        patch = square_patch([(0, 0), (1, 0), (2, 0)])
        fake = Chain(0, (patch.placements[0], patch.placements[2]))
        assert not check_monotonicity_cone(patch, fake, patch.placements[0])

    def _bent_chain_patch(self):
        # N=8: square (0,2) with a 45 degree rhombus (0,1) glued on top;
        # they share a class-0 edge, so both lie on one normal-0 chain whose
        # center displacement leans 67.5 degrees off the axis
        b8 = DirectionBasis(8)
        sq = Shape(b8, 0, 2)
        thin = Shape(b8, 0, 1)
        patch = Patch.from_placements(b8, [PlacedRhombus(sq, b8.zero_point, None)])
        patch = place_adjacent(patch, patch.placements[0].edge_key(2), thin, 0)
        return patch, sq

    def test_theta_min_from_patch_shapes(self):
        patch, _sq = self._bent_chain_patch()
        chain = chains_by_normal(patch)[0][0]
        assert len(chain) == 2
        # theta_min = pi/4 from the thin rhombus: 67.5 > 45, outside
        for m in chain.members:
            assert check_monotonicity_cone(patch, chain, m)

    def test_explicit_shapeset_narrows_verdict(self):
        patch, sq = self._bent_chain_patch()
        chain = chains_by_normal(patch)[0][0]
        # declaring a square-only universe widens the cone to pi/2 and the
        # same pair now falls inside it
        square_only = ShapeSet(patch.basis, [sq])
        assert not check_monotonicity_cone(
            patch, chain, chain.members[0], shapeset=square_only
        )


class TestIndexOccurrences:
    def test_grid_recovers_lattice(self):
        patch = grid(3, 2)
        idx = index_occurrences(patch, Shape(DirectionBasis(4), 0, 1))
        assert len(idx) == 6
        expect = {square_at(x, y).key: (x, y) for x in range(3) for y in range(2)}
        assert idx == expect

    def test_translation_invariant(self):
        patch = square_patch([(5, -2), (6, -2), (5, -1)])
        idx = index_occurrences(patch, Shape(DirectionBasis(4), 0, 1))
        assert sorted(idx.values()) == [(0, 0), (0, 1), (1, 0)]
        assert idx[square_at(5, -2).key] == (0, 0)

    def test_single_occurrence_is_origin(self):
        patch = square_patch([(3, 7)])
        idx = index_occurrences(patch, Shape(DirectionBasis(4), 0, 1))
        assert list(idx.values()) == [(0, 0)]

    def test_no_occurrence(self):
        b5 = DirectionBasis(5)
        thick = Shape(b5, 0, 1)
        thin = Shape(b5, 0, 2)
        patch = Patch.from_placements(b5, [PlacedRhombus(thick, b5.zero_point, None)])
        with pytest.raises(ChainError) as e:
            index_occurrences(patch, thin)
        assert e.value.code == "NO_OCCURRENCE"

    def test_basis_mismatch(self):
        patch = square_patch([(0, 0)])
        with pytest.raises(GeometryError):
            index_occurrences(patch, Shape(DirectionBasis(8), 0, 2))

    def test_adjacency_along_chains(self):
        # consecutive occurrences of a shape along any chain differ by one
        # in exactly one coordinate
        patch = grid(4, 3)
        shape = Shape(DirectionBasis(4), 0, 1)
        idx = index_occurrences(patch, shape)
        for c in extract_chains(patch):
            seq = [idx[m.key] for m in c.members if m.shape.key == shape.key]
            for (i1, j1), (i2, j2) in zip(seq, seq[1:]):
                assert abs(i1 - i2) + abs(j1 - j2) == 1

    def test_adjacency_mixed_shapes(self):
        # N=8 strip square/thin/square: the two squares are consecutive on
        # the normal-0 chain and their K_2 indices differ by one
        b8 = DirectionBasis(8)
        sq = Shape(b8, 0, 2)
        thin = Shape(b8, 0, 1)
        patch = Patch.from_placements(b8, [PlacedRhombus(sq, b8.zero_point, None)])
        patch = place_adjacent(patch, patch.placements[0].edge_key(2), thin, 0)
        patch = place_adjacent(patch, patch.placements[1].edge_key(2), sq, 0)
        idx = index_occurrences(patch, sq)
        assert sorted(idx.values()) == [(0, 0), (0, 1)]
        chain = chains_by_normal(patch)[0][0]
        assert len(chain) == 3
        seq = [idx[m.key] for m in chain.members if m.shape.key == sq.key]
        (i1, j1), (i2, j2) = seq
        assert abs(i1 - i2) + abs(j1 - j2) == 1


class TestLevelsAndIndices:
    def test_level_constant_along_chain(self):
        patch = grid(3, 3)
        coords = vertex_coordinates(patch)
        for c in extract_chains(patch):
            levels = {coords[m.anchor.key][c.normal] for m in c.members}
            assert len(levels) == 1
            assert chain_level(patch, c, coords) in levels

    def test_indices_follow_transversal_order(self):
        patch = grid(3, 2)
        indexed = chain_indices(patch)
        for c in indexed:
            assert c.index >= 0
        # normal-0 chains are the columns, ordered left to right
        cols = [c for c in indexed if c.normal == 0]
        rows = [c for c in indexed if c.normal == 1]
        assert [c.index for c in cols] == [0, 1, 2]
        assert [c.index for c in rows] == [0, 1]
        for c in cols:
            want = min(m.float_center().real for m in c.members)
            others = [
                min(m.float_center().real for m in d.members)
                for d in cols
                if d.index < c.index
            ]
            assert all(o < want for o in others)
        for c in rows:
            want = min(m.float_center().imag for m in c.members)
            others = [
                min(m.float_center().imag for m in d.members)
                for d in rows
                if d.index < c.index
            ]
            assert all(o < want for o in others)

    def test_indices_match_occurrence_coordinates(self):
        # the (i, j) of an occurrence are the indices of its two chains
        patch = grid(3, 3)
        shape = Shape(DirectionBasis(4), 0, 1)
        idx = index_occurrences(patch, shape)
        indexed = chain_indices(patch)
        for rh in patch.placements:
            mine = [c for c in indexed if any(m.key == rh.key for m in c.members)]
            assert len(mine) == 2
            i = next(c.index for c in mine if c.normal == 0)
            j = next(c.index for c in mine if c.normal == 1)
            assert idx[rh.key] == (i, j)
