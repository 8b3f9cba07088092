"""Penrose fixtures: arrow translation, the 20- and 4-tile Wang tilesets,
the up-to-isometry counterexample, and the pentagrid generator."""

from collections import Counter
from fractions import Fraction

import pytest

from rhombwang.chains import check_monotonicity_cone, crossings, extract_chains
from rhombwang.geometry import DirectionBasis, Shape, ShapeSet
from rhombwang.patterns import full_shift
from rhombwang.penrose import (
    ArrowLabel,
    ArrowTile,
    PenroseError,
    arrows_to_colors,
    penrose_arrow_tiles,
    penrose_color_action,
    penrose_wang4,
    penrose_wang20,
    pentagrid_patch,
    single_tile_isometry_counterexample,
)
from rhombwang.solver import disk_tiling, refutation_search
from rhombwang.tiles import Tileset, check_color_validity, rotation_closure

REGULAR_OFFSETS = (Fraction(1, 7), Fraction(2, 7), Fraction(3, 7),
                   Fraction(-6, 7), 0)

WANG20_GOLDEN = [
    ((0, 1), ("d0+", "s1-", "s0-", "d1+")),
    ((0, 1), ("s0+", "d1+", "d0+", "s1+")),
    ((0, 2), ("d0+", "s2-", "s0-", "d2+")),
    ((0, 2), ("s0+", "d2+", "d0+", "s2+")),
    ((0, 3), ("d0+", "s3-", "s0-", "d3+")),
    ((0, 3), ("s0+", "d3+", "d0+", "s3+")),
    ((0, 4), ("d0+", "s4-", "s0-", "d4+")),
    ((0, 4), ("s0+", "d4+", "d0+", "s4+")),
    ((1, 2), ("d1+", "s2-", "s1-", "d2+")),
    ((1, 2), ("s1+", "d2+", "d1+", "s2+")),
    ((1, 3), ("d1+", "s3-", "s1-", "d3+")),
    ((1, 3), ("s1+", "d3+", "d1+", "s3+")),
    ((1, 4), ("d1+", "s4-", "s1-", "d4+")),
    ((1, 4), ("s1+", "d4+", "d1+", "s4+")),
    ((2, 3), ("d2+", "s3-", "s2-", "d3+")),
    ((2, 3), ("s2+", "d3+", "d2+", "s3+")),
    ((2, 4), ("d2+", "s4-", "s2-", "d4+")),
    ((2, 4), ("s2+", "d4+", "d2+", "s4+")),
    ((3, 4), ("d3+", "s4-", "s3-", "d4+")),
    ((3, 4), ("s3+", "d4+", "d3+", "s4+")),
]


class TestArrowTranslation:
    def test_label_validation(self):
        with pytest.raises(PenroseError):
            ArrowLabel("triple", "along")
        with pytest.raises(PenroseError):
            ArrowLabel("single", "up")
        with pytest.raises(PenroseError):
            ArrowTile(Shape(DirectionBasis(5), 0, 1),
                      (ArrowLabel("single", "along"),) * 3)

    def test_unsupported_direction(self):
        t = ArrowTile(Shape(DirectionBasis(8), 0, 1),
                      (ArrowLabel("single", "along"),) * 4)
        with pytest.raises(PenroseError) as e:
            arrows_to_colors(t)
        assert e.value.code == "UNSUPPORTED_DIRECTION"

    def test_injective_per_class(self):
        shape = Shape(DirectionBasis(5), 0, 1)
        rest = (ArrowLabel("single", "along"),) * 3
        seen = set()
        for kind in ("single", "double"):
            for sign in ("along", "against"):
                t = ArrowTile(shape, (ArrowLabel(kind, sign),) + rest)
                seen.add(arrows_to_colors(t).colors[0])
        assert seen == {"s0+", "s0-", "d0+", "d0-"}

    def test_projection_commutes(self):
        for t in penrose_arrow_tiles():
            assert arrows_to_colors(t).shape is t.shape

    def test_matching_equivalence_exhaustive(self):
        # arrows match across a shared edge geometry iff the translated
        # colors are equal, over every tile pair and same-class side pair
        family = penrose_arrow_tiles()
        colored = [arrows_to_colors(t) for t in family]
        checked = 0
        for ta, ca in zip(family, colored):
            for tb, cb in zip(family, colored):
                for sa in range(4):
                    for sb in range(4):
                        if ta.shape.side_class(sa) != tb.shape.side_class(sb):
                            continue
                        arrows_match = ta.arrows[sa] == tb.arrows[sb]
                        colors_match = ca.colors[sa] == cb.colors[sb]
                        assert arrows_match == colors_match
                        checked += 1
        assert checked > 0

    def test_family_translates_to_wang20(self):
        translated = {arrows_to_colors(t).key for t in penrose_arrow_tiles()}
        assert translated == set(penrose_wang20().tile_keys())


class TestWang20:
    def test_counts(self):
        w = penrose_wang20()
        assert len(w) == 20
        assert len(w.shapeset) == 10
        for s in w.shapeset:
            assert len(w.tiles_for_shape(s.key)) == 2

    def test_golden_fixture(self):
        w = penrose_wang20()
        assert [(t.shape.key, t.colors) for t in w.tiles] == WANG20_GOLDEN

    def test_disk_tiling_rank_one(self):
        spec = full_shift(ShapeSet.all_shapes(5))
        assert disk_tiling(penrose_wang20(), spec, 1)

    def test_pentagrid_cross_check(self):
        # independent witness for rank-1 tilability: a pentagrid patch,
        # colored by vertex indices, is a valid wang20 configuration
        w = penrose_wang20()
        patch = pentagrid_patch(1, REGULAR_OFFSETS, colored=True)
        assert check_color_validity(patch, require_all_colored=True)
        keys = {(rh.shape.key, rh.colors) for rh in patch.placements}
        assert keys <= {(t.shape.key, t.colors) for t in w.tiles}

    def test_orbits_are_free(self):
        w = penrose_wang20()
        t = w.tiles_for_shape((0, 1))[0]
        single = Tileset(
            ShapeSet.from_pairs(5, [(0, 1)]), [t],
            color_action=penrose_color_action,
        )
        orbit = rotation_closure(single, 5)
        assert len(orbit) == 5
        assert set(orbit.tile_keys()) <= set(w.tile_keys())


class TestWang4:
    def test_representatives(self):
        w4 = penrose_wang4()
        assert len(w4) == 4
        assert w4.shapeset.keys() == ((0, 1), (0, 2))
        assert set(w4.tile_keys()) <= set(penrose_wang20().tile_keys())

    def test_closure_is_wang20(self):
        assert rotation_closure(penrose_wang4(), 5) == penrose_wang20()


class TestIsometryCounterexample:
    def test_closure_and_certificate(self):
        ts, (patch, periods) = single_tile_isometry_counterexample()
        assert ts.tile_keys() == (
            ((0, 1), ("1", "2", "3", "4")),
            ((0, 1), ("3", "4", "1", "2")),
        )
        assert len(patch) == 2
        assert check_color_validity(patch)
        p1, p2 = (p.complex_value() for p in periods)
        assert abs(p1 - 2) < 1e-12 and abs(p2 - (1 + 1j)) < 1e-12

    def test_translation_only_untileable(self):
        ts, _ = single_tile_isometry_counterexample()
        base = Tileset(ts.shapeset, [ts.tiles[0]])
        verdict = refutation_search(base, full_shift(ts.shapeset), 1)
        assert verdict.kind == "UNTILEABLE_AT_RANK"
        assert verdict.n == 1

    def test_closure_periodic_verdict(self):
        ts, _ = single_tile_isometry_counterexample()
        verdict = refutation_search(ts, full_shift(ts.shapeset), 2)
        assert verdict.kind == "PERIODIC_CERTIFICATE"
        assert verdict.certificate_sound


class TestPentagrid:
    def test_window_one_counts(self):
        patch = pentagrid_patch(1, REGULAR_OFFSETS)
        # one rhombus per crossing: (2*1+1)^2 per family pair
        assert len(patch) == 90
        counts = Counter(rh.shape.key for rh in patch.placements)
        assert all(counts[k] == 9 for k in ShapeSet.all_shapes(5).keys())

    def test_input_validation(self):
        with pytest.raises(ValueError):
            pentagrid_patch(0, REGULAR_OFFSETS)
        with pytest.raises(PenroseError) as e:
            pentagrid_patch(1, (0, 0, 0))
        assert e.value.code == "BAD_OFFSETS"

    def test_singular_rejected(self):
        with pytest.raises(PenroseError) as e:
            pentagrid_patch(1, (0, 0, 0, 0, 0))
        assert e.value.code == "SINGULAR_GRID"

    def test_deterministic(self):
        a = pentagrid_patch(1, REGULAR_OFFSETS)
        b = pentagrid_patch(1, REGULAR_OFFSETS)
        assert [rh.key for rh in a.placements] == [rh.key for rh in b.placements]

    def test_chain_properties(self):
        patch = pentagrid_patch(1, REGULAR_OFFSETS)
        chains = extract_chains(patch)
        assert sum(len(c.members) for c in chains) == 2 * len(patch)
        for i, c in enumerate(chains):
            for d in chains[i + 1:]:
                assert crossings(c, d) <= 1
            for m in c.members:
                assert check_monotonicity_cone(patch, c, m)

    def test_colored_requires_integral_sum(self):
        offs = (Fraction(1, 7), Fraction(2, 7), Fraction(3, 7),
                Fraction(4, 7), Fraction(5, 7))
        with pytest.raises(PenroseError) as e:
            pentagrid_patch(1, offs, colored=True)
        assert e.value.code == "NONINTEGRAL_SUM"
        # geometric generation has no such constraint
        assert len(pentagrid_patch(1, offs)) == 90
