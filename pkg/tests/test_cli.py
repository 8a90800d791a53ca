import json
import subprocess
import sys

import pytest

from lsb.cli import main
from lsb.dynamics import Orbit, detect_orbit
from lsb.runword import parse_compressed


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_iterate_plain(capsys):
    code, out, _ = run(capsys, "iterate", "2^22", "-n", "2")
    assert code == 0
    assert out.split() == ["2" * 22, "222", "32"]


def test_iterate_large_word_is_compressed(capsys):
    code, out, _ = run(capsys, "iterate", "2^33333333333", "-n", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("2^33333333333") and "33333333333 digits" in lines[0]
    assert lines[1] == "333333333332"


def test_iterate_json(capsys):
    code, out, _ = run(capsys, "iterate", "1", "-n", "3", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"rule": "lsb", "terms": ["1", "11", "21", "2211"]}


@pytest.mark.parametrize("rule, image", [("ls", "31"), ("lsa", "3311")])
def test_iterate_other_rules(capsys, rule, image):
    code, out, _ = run(capsys, "iterate", "111", "-n", "1", "--rule", rule)
    assert code == 0
    assert out.split()[-1] == image


def test_orbit_json_round_trip(capsys):
    code, out, _ = run(capsys, "orbit", "2^33333333333", "--json")
    assert code == 0
    record = json.loads(out)
    assert (record["mu"], record["period"], record["first_repeat"]) == (7, 2, 9)
    orbit = Orbit.from_record(record)
    assert orbit == detect_orbit(parse_compressed(record["seed"]))


def test_orbit_trajectory(capsys):
    code, out, _ = run(capsys, "orbit", "1", "--json", "--trajectory")
    record = json.loads(out)
    assert record["trajectory_prefix"][-3:] == ["332221", "333211", "332221"]
    assert len(record["trajectory_prefix"]) == record["first_repeat"] + 1


def test_orbit_plain(capsys):
    code, out, _ = run(capsys, "orbit", "0")
    assert code == 0
    assert "mu            5" in out
    assert "33222110, 33322110" in out


@pytest.mark.parametrize(
    "argv, code",
    [
        (["orbit", "2^x"], 2),
        (["orbit", "12a"], 2),
        (["orbit", "2^0"], 2),
        (["iterate", "2^10", "--rule", "ls", "-n", "1"], 3),
        (["iterate", "2^10", "--rule", "lsa", "-n", "1"], 3),
        (["orbit", "1", "--max-steps", "3"], 4),
        (["verify", "--suite", "smallkid", "--max-len", "3", "--bound", "7", "--jobs", "1"], 1),
        (["verify", "--suite", "fixedpoint", "--max-len", "2", "--jobs", "1"], 0),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


@pytest.mark.parametrize(
    "argv",
    [["verify", "--suite", "nope"], ["orbit"], ["sigma"], ["census", "--jobs", "0"], ["frobnicate"]],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_census_bad_alphabet(capsys):
    assert run(capsys, "census", "--alphabet", "1x", "--max-len", "1")[0] == 2


def test_census_io_error(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "census", "--max-len", "1", "--jobs", "1", "--out", str(blocker / "sub"))
    assert code == 5
    assert "error" in err


def test_census_jsonl_lines_parse(capsys):
    code, out, _ = run(capsys, "census", "--max-len", "2", "--format", "jsonl", "--jobs", "1")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records[0]["type"] == "summary" and records[0]["total_seeds"] == 110
    assert sum(r["basin_count"] for r in records[1:]) == 110


def test_census_jobs_byte_identical(capsys):
    outs = []
    for jobs in ("1", "2"):
        code, out, _ = run(capsys, "census", "--max-len", "4", "--format", "jsonl",
                           "--jobs", jobs, "--shard-size", "2000")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_census_out_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "census", "--max-len", "2", "--jobs", "1", "--out", str(tmp_path))
    assert code == 0
    assert "cycle classes" in out
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["total_seeds"] == 110
    assert (tmp_path / "classes.csv").read_text().startswith("canonical,")
    assert (tmp_path / "census.jsonl").read_text().count("\n") == summary["class_count"] + 1


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "--n", "0", "--bound", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["sigma"] == "22"
    code, out, _ = run(capsys, "sigma", "--n", "7", "--bound", "1")
    assert out.startswith("exhausted")


def test_conjecture(capsys):
    code, out, _ = run(capsys, "conjecture", "--format", "json")
    assert code == 0
    record = json.loads(out)
    assert record["first_mismatch"] == 2
    assert record["cycle"] == ["3322213322", "3332113322"]
    code, out, _ = run(capsys, "conjecture")
    assert "differs" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lsb", "iterate", "1", "-n", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.split() == ["1", "11", "21"]
