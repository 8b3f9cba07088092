"""File formats, SVG rendering, and the command-line front end."""

import json
import os
from fractions import Fraction

import pytest

from rhombwang import (
    DirectionBasis,
    Patch,
    PlacedRhombus,
    ShapeSet,
    SquareWangTileset,
    Tile,
    Tileset,
    connected_components,
    enumerate_locally_allowed,
    penrose_wang4,
    penrose_wang20,
    pentagrid_patch,
    phi_r,
)
from rhombwang.cli import run
from rhombwang.io import (
    IOFormatError,
    emit,
    load_any,
    load_patch,
    load_patterns,
    load_shapeset,
    load_tileset,
    load_wang,
    patterns_to_data,
    save_patch,
    save_patterns,
    save_shapeset,
    save_tileset,
    save_wang,
    tileset_to_data,
    write_document,
)
from rhombwang.svg import RenderStyle, render_svg

REGULAR_OFFSETS = (
    Fraction(1, 7), Fraction(2, 7), Fraction(3, 7), Fraction(-6, 7), 0,
)


def square_mono():
    ss = ShapeSet.from_pairs(4, [(0, 1)])
    return Tileset(ss, [Tile(ss.get(0, 1), ("x", "x", "x", "x"))], name="mono")


def square_four():
    ss = ShapeSet.from_pairs(4, [(0, 1)])
    return Tileset(ss, [Tile(ss.get(0, 1), ("1", "2", "3", "4"))], name="four")


class TestRoundTrips:
    def test_shapeset(self, tmp_path):
        ss = ShapeSet.all_shapes(5)
        path = tmp_path / "ss.json"
        save_shapeset(path, ss)
        assert load_shapeset(path) == ss

    def test_tileset(self, tmp_path):
        ts = penrose_wang20()
        path = tmp_path / "ts.json"
        save_tileset(path, ts)
        assert load_tileset(path) == ts

    def test_patch_colored(self, tmp_path):
        patch = pentagrid_patch(1, REGULAR_OFFSETS, colored=True)
        path = tmp_path / "p.json"
        save_patch(path, patch)
        back = load_patch(path)
        assert len(back) == len(patch)
        assert {rh.key for rh in back} == {rh.key for rh in patch}

    def test_patterns_order_significant(self, tmp_path):
        res = enumerate_locally_allowed(0, (), penrose_wang20())
        pats = res.patterns[:6]
        path = tmp_path / "pats.json"
        save_patterns(path, pats)
        assert load_patterns(path) == pats
        save_patterns(path, tuple(reversed(pats)))
        assert load_patterns(path) == tuple(reversed(pats))

    def test_wang(self, tmp_path):
        w = SquareWangTileset(
            ("a", "b"), [("a", "b", "a", "b"), ("b", "a", "b", "a")],
            name="demo",
        )
        path = tmp_path / "w.json"
        save_wang(path, w)
        back = load_wang(path)
        assert back == w and back.name == "demo"

    def test_load_any_detects_kind(self, tmp_path):
        save_shapeset(tmp_path / "x.json", ShapeSet.all_shapes(4))
        kind, obj = load_any(tmp_path / "x.json")
        assert kind == "shapeset" and len(obj) == 1

    def test_emit_deterministic(self):
        assert emit(tileset_to_data(penrose_wang20())) == emit(
            tileset_to_data(penrose_wang20())
        )


class TestLoaderErrors:
    def test_reserved_colors_rejected_by_default(self, tmp_path):
        w = SquareWangTileset(("a",), [("a", "a", "a", "a")])
        ss = ShapeSet.all_shapes(5)
        phi = phi_r(w, ss, ss.get(0, 1))
        path = tmp_path / "phi.json"
        save_tileset(path, phi)
        with pytest.raises(IOFormatError, match="reserved"):
            load_tileset(path)
        assert load_tileset(path, allow_reserved=True) == phi

    def test_parse_error_cites_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format_version": 1,,}\n')
        with pytest.raises(IOFormatError, match="line 1"):
            load_shapeset(path)

    def test_missing_field_cited(self, tmp_path):
        path = tmp_path / "bad.json"
        write_document(
            path, {"format_version": 1, "kind": "shapeset", "basis_order": 4}
        )
        with pytest.raises(IOFormatError, match="missing field 'shapes'"):
            load_shapeset(path)

    def test_wrong_kind(self, tmp_path):
        path = tmp_path / "x.json"
        save_shapeset(path, ShapeSet.all_shapes(4))
        with pytest.raises(IOFormatError, match="kind"):
            load_tileset(path)

    def test_wrong_version(self, tmp_path):
        path = tmp_path / "x.json"
        write_document(
            path, {"format_version": 2, "kind": "shapeset", "shapes": []}
        )
        with pytest.raises(IOFormatError, match="format_version"):
            load_shapeset(path)

    def test_bad_field_position_cited(self, tmp_path):
        path = tmp_path / "x.json"
        write_document(path, {
            "format_version": 1, "kind": "wang_tileset", "name": "",
            "colors": ["a"], "tiles": [["a", "a", "a"]],
        })
        with pytest.raises(IOFormatError, match=r"tiles\[0\]"):
            load_wang(path)


class TestConnectedComponents:
    def test_pentagrid_split(self):
        patch = pentagrid_patch(1, REGULAR_OFFSETS)
        comps = connected_components(patch)
        assert sum(len(c) for c in comps) == len(patch)
        sizes = [len(c) for c in comps]
        assert sizes == sorted(sizes, reverse=True)
        assert all(c.is_connected() for c in comps)

    def test_single_component(self):
        ts = square_mono()
        res = enumerate_locally_allowed(1, (), ts)
        patch = res.patterns[0].patch
        comps = connected_components(patch)
        assert len(comps) == 1 and len(comps[0]) == len(patch)


class TestSvg:
    def test_empty_skeleton(self):
        doc = render_svg(Patch.empty(DirectionBasis(4)))
        assert doc.startswith("<svg") and doc.endswith("</svg>\n")
        assert "polygon" not in doc

    def test_single_square_exact_vertices(self):
        b = DirectionBasis(4)
        ss = ShapeSet.all_shapes(4)
        patch = Patch.from_placements(
            b, [PlacedRhombus(ss.get(0, 1), b.point((0, 0, 0, 0)), None)]
        )
        doc = render_svg(patch)
        assert doc.count("<polygon") == 1
        pts = doc.split('points="')[1].split('"')[0]
        assert pts == "0,0 48,0 48,-48 0,-48"

    def test_deterministic_bytes_with_overlays(self):
        style = RenderStyle(overlays=frozenset({"chains", "indices", "arrows"}))
        d1 = render_svg(pentagrid_patch(1, REGULAR_OFFSETS, colored=True), style)
        d2 = render_svg(pentagrid_patch(1, REGULAR_OFFSETS, colored=True), style)
        assert d1 == d2
        assert d1.count("<polygon") > 90  # base polygons plus arrowheads
        assert "<text" in d1 and "<polyline" in d1

    def test_canonical_polygon_order(self):
        patch = pentagrid_patch(1, REGULAR_OFFSETS)
        doc = render_svg(patch)
        assert doc.count("<polygon") == len(patch)

    def test_unknown_overlay_rejected(self):
        with pytest.raises(ValueError, match="sparkles"):
            RenderStyle(overlays=frozenset({"sparkles"}))

    def test_bad_scale_rejected(self):
        with pytest.raises(ValueError, match="scale"):
            RenderStyle(scale=0)


def invoke(capsys, *args):
    code = run([str(a) for a in args])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCli:
    def test_solve_mono_square(self, tmp_path, capsys):
        save_tileset(tmp_path / "mono.json", square_mono())
        code, out, err = invoke(
            capsys, "solve", "--tileset", tmp_path / "mono.json", "--rank", 3
        )
        assert code == 0
        assert out.splitlines()[0] == "PERIODIC_CERTIFICATE period (1,0),(0,1)"

    def test_solve_four_color_square(self, tmp_path, capsys):
        save_tileset(tmp_path / "four.json", square_four())
        code, out, err = invoke(
            capsys, "solve", "--tileset", tmp_path / "four.json", "--rank", 3
        )
        assert code == 0
        assert out.splitlines()[0] == "UNTILEABLE_AT_RANK 1"

    def test_reduce_wang_to_rhombus_counts(self, tmp_path, capsys):
        w = SquareWangTileset(
            ("a", "b"), [("a", "b", "a", "b"), ("b", "a", "b", "a")]
        )
        save_wang(tmp_path / "w.json", w)
        save_shapeset(tmp_path / "pen.json", ShapeSet.all_shapes(5))
        code, out, err = invoke(
            capsys, "reduce", "wang-to-rhombus", "--wang", tmp_path / "w.json",
            "--shapeset", tmp_path / "pen.json", "--shape", "0,1",
            "--out", tmp_path / "phi.json", "--format", "json",
        )
        assert code == 0
        data = json.loads(out)
        # |T| + 2(k-2)|S| + C(k-2,2) with k = 5, |T| = |S| = 2
        assert data["size"] == 2 + 2 * 3 * 2 + 3
        assert data["counts"] == {"coding": 2, "link": 12, "neutral": 3}
        saved = load_tileset(tmp_path / "phi.json", allow_reserved=True)
        assert len(saved.tiles) == data["size"]

    def test_reduce_fresh(self, tmp_path, capsys):
        save_tileset(tmp_path / "w4.json", penrose_wang4())
        save_shapeset(tmp_path / "pen.json", ShapeSet.all_shapes(5))
        code, out, err = invoke(
            capsys, "reduce", "fresh", "--tileset", tmp_path / "w4.json",
            "--shapeset", tmp_path / "pen.json", "--format", "json",
            "--out", tmp_path / "full.json",
        )
        assert code == 0
        data = json.loads(out)
        assert data["size"] == 4 + 8
        assert data["counts"] == {"fresh": 8, "input": 4}

    def test_penrose_gen_and_chains_and_validate(self, tmp_path, capsys):
        code, out, err = invoke(
            capsys, "penrose", "gen", "--window", 1,
            "--offsets", "1/7,2/7,3/7,-6/7,0", "--colored",
            "--out", tmp_path / "p.json", "--svg", tmp_path / "p.svg",
            "--overlays", "chains,arrows",
        )
        assert code == 0
        assert out.splitlines()[0] == "pentagrid window 1: 90 tiles (colored)"
        assert (tmp_path / "p.svg").read_text().startswith("<svg")

        code, out, err = invoke(capsys, "chains", "--patch", tmp_path / "p.json")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("chains ")
        assert "max-crossings 1" in lines
        assert "monotonicity-cone ok" in lines

        code, out, err = invoke(capsys, "validate", tmp_path / "p.json")
        assert code == 0
        assert out.startswith("ok patch: 90 placements colored")

    def test_penrose_tileset_files(self, tmp_path, capsys):
        code, out, _ = invoke(
            capsys, "penrose", "tileset", "--which", "20",
            "--out", tmp_path / "w20.json",
        )
        assert code == 0 and "20 tiles on 10 shapes" in out
        assert load_tileset(tmp_path / "w20.json") == penrose_wang20()
        code, out, _ = invoke(
            capsys, "penrose", "tileset", "--which", "4",
            "--out", tmp_path / "w4.json",
        )
        assert code == 0
        assert load_tileset(tmp_path / "w4.json") == penrose_wang4()

    def test_singular_grid_is_input_error(self, tmp_path, capsys):
        code, out, err = invoke(
            capsys, "penrose", "gen", "--offsets", "0,0,0,0,0"
        )
        assert code == 1 and "SINGULAR_GRID" in err

    def test_render(self, tmp_path, capsys):
        save_patch(tmp_path / "p.json", pentagrid_patch(1, REGULAR_OFFSETS))
        code, out, err = invoke(
            capsys, "render", "--patch", tmp_path / "p.json",
            "--svg", tmp_path / "out.svg", "--overlays", "indices",
        )
        assert code == 0
        assert (tmp_path / "out.svg").read_text().count("<text") == 90

    def test_enumerate_writes_patterns(self, tmp_path, capsys):
        save_tileset(tmp_path / "mono.json", square_mono())
        code, out, err = invoke(
            capsys, "enumerate", "--tileset", tmp_path / "mono.json",
            "--rank", 1, "--out", tmp_path / "a1.json",
        )
        assert code == 0
        assert out.strip() == "A_1 1 patterns complete"
        assert len(load_patterns(tmp_path / "a1.json")) == 1

    def test_usage_error_exit_1(self, tmp_path, capsys):
        save_tileset(tmp_path / "mono.json", square_mono())
        assert invoke(capsys, "solve", "--tileset", tmp_path / "mono.json")[0] == 1
        assert invoke(capsys, "frobnicate")[0] == 1
        code, _, err = invoke(
            capsys, "reduce", "wang-to-rhombus", "--shape", "0,1"
        )
        assert code == 1 and "needs" in err

    def test_parse_error_exit_1_with_schema_hint(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format_version": 1 "kind": "patch"}\n')
        code, _, err = invoke(capsys, "validate", bad)
        assert code == 1
        assert "line 1" in err and "formats" in err

    def test_budget_exit_2(self, tmp_path, capsys):
        save_tileset(tmp_path / "mono.json", square_mono())
        code, out, _ = invoke(
            capsys, "enumerate", "--tileset", tmp_path / "mono.json",
            "--rank", 2, "--budget-nodes", 5,
        )
        assert code == 2 and "incomplete" in out

    def test_stats_on_stderr_only_when_asked(self, tmp_path, capsys):
        save_tileset(tmp_path / "mono.json", square_mono())
        _, _, err = invoke(
            capsys, "enumerate", "--tileset", tmp_path / "mono.json", "--rank", 1
        )
        assert err == ""
        _, _, err = invoke(
            capsys, "enumerate", "--tileset", tmp_path / "mono.json",
            "--rank", 1, "--stats",
        )
        assert err.startswith("stats ") and "nodes=" in err
        assert "elapsed" not in err

    def test_solve_json_format(self, tmp_path, capsys):
        save_tileset(tmp_path / "mono.json", square_mono())
        code, out, _ = invoke(
            capsys, "solve", "--tileset", tmp_path / "mono.json", "--rank", 2,
            "--format", "json",
        )
        assert code == 0
        data = json.loads(out)
        assert data["verdict"] == "PERIODIC_CERTIFICATE"
        assert data["periods"] == [[1, 0], [0, 1]]
        assert data["certificate_sound"] is True

    def test_jobs_determinism(self, tmp_path, capsys):
        save_tileset(tmp_path / "w20.json", penrose_wang20())
        outs, files = [], []
        for jobs in (1, 4):
            path = tmp_path / f"a1-j{jobs}.json"
            code, out, _ = invoke(
                capsys, "enumerate", "--tileset", tmp_path / "w20.json",
                "--rank", 1, "--budget-nodes", 15, "--jobs", jobs,
                "--out", path,
            )
            assert code == 2  # budget-capped, incomplete
            outs.append(out)
            files.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert files[0] == files[1]
