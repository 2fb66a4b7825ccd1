import csv
import json

import pytest

from coopnav.cli import EXIT_IO, EXIT_NO_PATH, EXIT_SCENARIO, EXIT_USAGE, main
from coopnav.io import decode_pgm
from coopnav.scenario import FIXTURES


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run(*argv):
    return main([str(a) for a in argv])


def test_plan_alpha_zero_distance_matches(tmp_path):
    for alg in ("od", "wd"):
        assert run("plan", "sec72_planning", "--algorithm", alg, "--alpha", 0, "--out-dir", tmp_path / alg) == 0
    od = read_csv(tmp_path / "od" / "summary.csv")[0]
    wd = read_csv(tmp_path / "wd" / "summary.csv")[0]
    assert od["distance"] == wd["distance"]
    assert list(od) == ["algorithm", "alpha", "weight_kind", "distance", "radio_weight", "combined",
                        "expanded", "reexpansions", "runtime_ms"]


def test_plan_path_csv_shape(tmp_path):
    assert run("plan", "small80", "--out-dir", tmp_path) == 0
    rows = read_csv(tmp_path / "path.csv")
    assert list(rows[0]) == ["m", "n1", "n2"]
    assert (rows[0]["n1"], rows[0]["n2"]) == ("4", "4")
    assert (rows[-1]["n1"], rows[-1]["n2"]) == ("76", "76")
    assert b"\r\n" not in (tmp_path / "path.csv").read_bytes()


def test_map_is_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert run("map", "small80", "--seed", 3, "--out-dir", tmp_path / d) == 0
    for name in ("coverage.csv", "waypoints.csv", "final_map.pgm", "map_summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_seed_changes_mapping(tmp_path):
    run("map", "small80", "--seed", 3, "--out-dir", tmp_path / "a")
    run("map", "small80", "--seed", 4, "--out-dir", tmp_path / "b")
    assert (tmp_path / "a" / "waypoints.csv").read_bytes() != (tmp_path / "b" / "waypoints.csv").read_bytes()


def test_bench_effective_trials(tmp_path):
    assert run("bench", "small80", "--trials", 10, "--out-dir", tmp_path) == 0
    rows = read_csv(tmp_path / "benchmark.csv")
    assert len(rows) == 4 * 4 * 4
    assert {r["trials"] for r in rows} == {"10"}
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["effective_trials"] == 10 and manifest["seed"] == 7
    assert len(read_csv(tmp_path / "trials.csv")) == 10 * 64


def test_bench_single_configuration(tmp_path):
    assert run("bench", "small80", "--trials", 3, "--alpha", 0.5, "--algorithm", "wa", "--weight", "tent",
               "--out-dir", tmp_path) == 0
    rows = read_csv(tmp_path / "benchmark.csv")
    assert [(r["weight"], r["algorithm"], r["alpha"]) for r in rows] == [("tent", "oa", "0.5"), ("tent", "wa", "0.5")]


def test_radiomap_outputs(tmp_path):
    assert run("radiomap", "small80", "--weight", "onoff", "--out-dir", tmp_path) == 0
    img = decode_pgm((tmp_path / "radio.pgm").read_bytes())
    assert img.shape == (80, 80) and set(img.ravel().tolist()) <= {0, 255}
    assert len((tmp_path / "radio.csv").read_text().splitlines()) >= 80


def test_render_with_path(tmp_path):
    run("plan", "small80", "--out-dir", tmp_path)
    assert run("render", "small80", "--path", tmp_path / "path.csv", "--out-dir", tmp_path) == 0
    img = decode_pgm((tmp_path / "render.pgm").read_bytes())
    assert img[3, 3] == 64 and img[75, 75] == 64


@pytest.mark.parametrize("name", FIXTURES)
def test_pipeline_composes(tmp_path, name):
    assert run("map", name, "--out-dir", tmp_path) == 0
    assert run("postprocess", name, "--map", tmp_path / "final_map.pgm", "--out-dir", tmp_path) == 0
    assert run("plan", name, "--map", tmp_path / "obstacles.pgm", "--out-dir", tmp_path) == 0
    assert read_csv(tmp_path / "summary.csv")


def test_fixtures_listed():
    assert set(FIXTURES) == {"sec71_mapping", "sec72_planning", "small80"}


def test_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == EXIT_USAGE
    assert run("plan", tmp_path / "missing.scn") == EXIT_USAGE

    bad = tmp_path / "bad.scn"
    bad.write_text("grid.n = 20\nobstacle.1 = 1:30,1:2\n")
    assert run("plan", bad) == EXIT_SCENARIO

    walled = tmp_path / "walled.scn"
    walled.write_text("grid.n = 20\ngrid.delta = 1\nobstacle.1 = 1:20,10:10\n"
                      "post.kernel_size = 1\nplan.start = 5,5\nplan.stop = 5,15\n")
    assert run("plan", walled, "--out-dir", tmp_path) == EXIT_NO_PATH

    assert run("plan", "small80", "--map", tmp_path / "nope.pgm") == EXIT_IO
    (tmp_path / "junk.pgm").write_bytes(b"not a pgm")
    assert run("render", "small80", "--map", tmp_path / "junk.pgm", "--out-dir", tmp_path) == EXIT_IO
    assert "error" in capsys.readouterr().err


def test_ternary_map_rejected_for_planning(tmp_path):
    # a 1-vehicle run stopped early still has undecided cells
    ragged = tmp_path / "r.scn"
    ragged.write_text("grid.n = 30\ngrid.delta = 1\nmapping.max_time = 1\nmapping.n_av = 1\nsensor.rho_max = 3\n")
    run("map", ragged, "--out-dir", tmp_path / "r")
    assert run("plan", ragged, "--map", tmp_path / "r" / "final_map.pgm", "--out-dir", tmp_path) == EXIT_USAGE
