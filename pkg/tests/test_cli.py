import csv
import io
import json
import os
import subprocess
import sys

import pytest

from toric_refine import fixtures
from toric_refine.cli import main
from toric_refine.jobs import parse_job
from toric_refine.errors import InputError

CHAIN = {"vertices": [1, 2, 3], "facets": [[1, 2], [2, 3]]}
TRIANGLE = {"vertices": [1, 2, 3], "facets": [[1, 2, 3]]}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_resolve_a1(tmp_path, capsys):
    job = write(tmp_path, "a1.json", {"complex": CHAIN, "r": 4})
    code, out, _ = run(["resolve", job], capsys)
    assert code == 0
    data = json.loads(out)
    assert len(data["refinement"]["vertices"]) == 9


def test_resolve_printed_a2_schedule(tmp_path, capsys):
    sched = fixtures.load("a2")["schedule"]
    job = write(tmp_path, "a2.json", {"complex": TRIANGLE, "r": 3, "schedule": sched})
    code, out, _ = run(["resolve", job], capsys)
    assert code == 0
    ref = json.loads(out)["refinement"]
    assert len(ref["vertices"]) == 10 and len(ref["facets"]) == 9


def test_resolve_unramified(tmp_path, capsys):
    job = write(tmp_path, "r1.json", {"complex": TRIANGLE, "r": 1})
    code, out, _ = run(["resolve", job], capsys)
    assert code == 0
    assert json.loads(out)["resolution"]["schedule"] == []


def test_incomplete_schedule_is_a_verification_failure(tmp_path, capsys):
    job = write(tmp_path, "part.json", {"complex": TRIANGLE, "r": 3, "schedule": [[3, 0, 0]]})
    code, out, _ = run(["verify", job], capsys)
    assert code == 2
    assert json.loads(out)["stages"][0]["name"] == "terminal"


def test_verify_is_byte_stable(tmp_path, capsys):
    job = write(tmp_path, "a1.json", {"complex": CHAIN, "r": 4})
    first = run(["verify", job], capsys)
    second = run(["verify", job], capsys)
    assert first[0] == 0 and first[1] == second[1]
    report = json.loads(first[1])
    assert [s["name"] for s in report["stages"]] == ["wall-identity", "key-formula"]
    assert "timing_seconds" not in report


def test_verify_import(tmp_path, capsys):
    ref = fixtures.figure_refinement(fixtures.load("a2")).to_json()
    job = write(tmp_path, "imp.json", {"complex": TRIANGLE, "r": 3, "refinement": ref,
                                       "commands": ["terminal", "wall-identity", "key-formula"]})
    code, out, _ = run(["verify", job, "--timing"], capsys)
    assert code == 0
    assert "timing_seconds" in json.loads(out)


def test_verify_rejects_invalid_import(tmp_path, capsys):
    ref = fixtures.figure_refinement(fixtures.load("a2")).to_json()
    ref["facets"] = ref["facets"][1:]
    job = write(tmp_path, "bad.json", {"complex": TRIANGLE, "r": 3, "refinement": ref})
    code, _, err = run(["verify", job], capsys)
    assert code == 3 and "ValidationFailure" in err


@pytest.mark.parametrize(
    "payload, fragment",
    [
        ([], "top level"),
        ({"complex": CHAIN}, "'r'"),
        ({"complex": CHAIN, "r": 0}, "job.r"),
        ({"complex": CHAIN, "r": 2, "commands": ["nope"]}, "unknown stages"),
        ({"complex": CHAIN, "r": 2, "schedule": [], "refinement": {}}, "at most one"),
    ],
)
def test_job_validation(payload, fragment):
    with pytest.raises(InputError, match=fragment):
        parse_job(payload)


def test_malformed_json_points_at_location(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text('{"complex": \n  oops}')
    code, _, err = run(["verify", str(p)], capsys)
    assert code == 3 and "broken.json:2:" in err


def test_missing_file(capsys):
    assert run(["verify", "/nonexistent/job.json"], capsys)[0] == 3


def test_fixture_commands(capsys):
    assert run(["fixture", "a1"], capsys)[0] == 0
    assert run(["fixture", "a2", "--schedule", "figure"], capsys)[0] == 0
    code, _, err = run(["fixture", "a2"], capsys)
    assert code == 2 and "FAIL a2 intersection_matrix" in err


def test_fixture_output_is_byte_stable(capsys):
    assert run(["fixture", "a1"], capsys)[1] == run(["fixture", "a1"], capsys)[1]


def test_fuzz_command(capsys):
    code, out, _ = run(["fuzz", "--seed", "1", "--count", "20"], capsys)
    assert code == 0
    again = run(["fuzz", "--seed", "1", "--count", "20"], capsys)[1]
    assert out == again
    assert json.loads(out)["passed"] == 20


def test_usage_errors_exit_3(capsys):
    assert run(["fuzz", "--seed", "1", "--count", "0"], capsys)[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["fuzz", "--seed", "x", "--count", "2"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 3


def test_export_matrix_fixture(capsys):
    code, out, _ = run(["export-matrix", "a2", "--format", "csv", "--schedule", "figure"], capsys)
    assert code == 0
    header, *rows = csv.reader(io.StringIO(out))
    fx = fixtures.load("a2")
    assert header[1:] == fx["expected"]["columns"]
    body = [[int(x) for x in row[1:]] for row in rows]
    assert body == fx["expected"]["matrix"]


def test_export_matrix_job_markdown(tmp_path, capsys):
    job = write(tmp_path, "a1.json", {"complex": CHAIN, "r": 4})
    code, out, _ = run(["export-matrix", job, "--format", "md"], capsys)
    assert code == 0
    assert out.startswith("| vertex |") and out.count("\n") == 2 + 9


def test_output_directory_env(tmp_path):
    env = dict(os.environ, TORIC_REFINE_OUTPUT_DIR=str(tmp_path / "out"))
    proc = subprocess.run(
        [sys.executable, "-m", "toric_refine", "fixture", "a1"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 0
    written = tmp_path / "out" / "fixture-a1.json"
    assert written.is_file()
    assert json.loads(written.read_text(encoding="utf-8"))["passed"] is True
