import json
import random

import pytest

import oracle
from lsb.census import (
    CensusReport,
    census_shard,
    find_sigma,
    merge_reports,
    probe_conjecture,
    run_census,
)
from lsb.errors import OverlappingSpaceError
from lsb.runword import parse_digits, render_compressed, render_digits
from lsb.seeds import SeedSpace, enumerate_seeds, shard_ranges


def texts(words):
    return [render_digits(w, 10**6) for w in words]


@pytest.mark.parametrize(
    "args, expected",
    [
        ((1, 1, range(10), True), [str(d) for d in range(10)]),
        ((2, 2, (0, 1), True), ["00", "01", "10", "11"]),
        ((1, 2, range(10), False), [str(n) for n in range(1, 100)]),
    ],
)
def test_enumerate_seeds(args, expected):
    assert texts(enumerate_seeds(*args)) == expected


def test_seed_space_size_and_slicing():
    space = SeedSpace(1, 3)
    assert space.size == 1110
    everything = list(space.iter_keys())
    assert len(everything) == 1110
    assert list(space.iter_keys(95, 130)) == everything[95:130]
    limited = SeedSpace(1, 3, (0, 1), max_run=2)
    assert [render_digits(w, 9) for w in limited.iter_words()] == [
        s for s in ("0", "1", "00", "01", "10", "11", "000", "001", "010", "011",
                    "100", "101", "110", "111") if "000" not in s and "111" not in s
    ]


@pytest.mark.parametrize("kwargs", [dict(min_len=0, max_len=2), dict(min_len=3, max_len=2),
                                    dict(min_len=1, max_len=2, alphabet=())])
def test_seed_space_rejects_bad_input(kwargs):
    with pytest.raises(ValueError):
        SeedSpace(**kwargs)


def test_shard_ranges():
    assert shard_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert shard_ranges(0, 4) == []


def test_length_one_census():
    report = run_census(SeedSpace(1, 1))
    classes = {tuple(texts(c.members)): c for c in report.cycle_classes()}
    expected = {
        ("22",): "2",
        ("33",): "3",
        ("332221", "333211"): "1",
        ("33222110", "33322110"): "0",
    }
    expected.update({(str(d) * 2,): str(d) for d in range(4, 10)})
    assert set(classes) == set(expected)
    for members, seed in expected.items():
        assert classes[members].basin_count == 1
        assert render_digits(classes[members].witness_max_transient, 9) == seed
    assert report.total_seeds == 10
    assert report.period_histogram == {1: 8, 2: 2}
    assert report.class_period_histogram == {1: 8, 2: 2}
    assert (report.max_transient, report.max_first_repeat) == (6, 8)
    assert report.summary_record()["global_max_transient"] == {"value": 6, "witness": "1"}


def test_census_agrees_with_oracle():
    report = run_census(SeedSpace(1, 3))
    basins: dict = {}
    for n in range(1110):
        s = str(n) if n < 10 else (str(n - 10).zfill(2) if n < 110 else str(n - 110).zfill(3))
        cycle = oracle.orbit(s)[2]
        i = cycle.index(min(cycle, key=lambda c: (len(c), c)))
        key = tuple(cycle[i:] + cycle[:i])
        basins[key] = basins.get(key, 0) + 1
    got = {tuple(texts(c.members)): c.basin_count for c in report.cycle_classes()}
    assert got == basins


def _two(seed_a, seed_b):
    space = SeedSpace(2, 2)
    keys = list(space.iter_keys())
    ia, ib = keys.index(parse_digits(seed_a).key), keys.index(parse_digits(seed_b).key)
    return census_shard(space, ia, ia + 1), census_shard(space, ib, ib + 1)


def test_merge_witness_tie_break():
    # 21 and 31 share a cycle and a transient; the smaller word is kept
    a, b = _two("31", "21")
    assert oracle.orbit("31")[:2] == oracle.orbit("21")[:2] == (4, 2)
    for merged in (merge_reports(a, b), merge_reports(b, a)):
        (cls,) = merged.cycle_classes()
        assert cls.basin_count == 2
        assert render_digits(cls.witness_max_transient, 9) == "21"
        assert merged.summary_record()["global_max_transient"]["witness"] == "21"


def test_merge_identity_and_overlap():
    space = SeedSpace(1, 2)
    part = census_shard(space, 0, 50)
    empty = CensusReport(space.description)
    assert merge_reports(empty, part).to_jsonl() == part.to_jsonl()
    assert merge_reports(part, empty).to_jsonl() == part.to_jsonl()
    with pytest.raises(OverlappingSpaceError):
        merge_reports(part, census_shard(space, 40, 60))
    with pytest.raises(OverlappingSpaceError):
        merge_reports(part, census_shard(SeedSpace(1, 3), 50, 60))


def test_partition_soundness():
    space = SeedSpace(1, 3)
    whole = census_shard(space, 0, space.size)
    rng = random.Random(3)
    cuts = sorted({0, space.size, *rng.sample(range(1, space.size), 7)})
    parts = [census_shard(space, lo, hi) for lo, hi in zip(cuts, cuts[1:])]
    rng.shuffle(parts)
    merged = CensusReport(space.description)
    for p in parts:
        merged = merge_reports(merged, p)
    assert merged.to_jsonl() == whole.to_jsonl()
    assert merged.segments == ((0, space.size),)
    assert sum(c.basin_count for c in merged.cycle_classes()) == space.size


def test_jobs_do_not_change_output():
    space = SeedSpace(1, 4)
    one = run_census(space, jobs=1, shard_size=997)
    two = run_census(space, jobs=2, shard_size=997)
    assert one.to_jsonl() == two.to_jsonl()
    assert one.to_csv() == two.to_csv()


def test_checkpoint_resume(tmp_path):
    space = SeedSpace(1, 3)
    first = run_census(space, shard_size=300, checkpoint_dir=tmp_path)
    files = sorted(p.name for p in tmp_path.glob("shard-*.jsonl"))
    assert files == sorted(f"shard-{lo}-{hi}.jsonl" for lo, hi in shard_ranges(1110, 300))
    # drop one shard; the rest are reused
    (tmp_path / "shard-300-600.jsonl").unlink()
    seen = []
    again = run_census(space, shard_size=300, checkpoint_dir=tmp_path,
                       progress=lambda done, total: seen.append(done))
    assert seen == [600]
    assert again.to_jsonl() == first.to_jsonl()


def test_jsonl_round_trip():
    report = run_census(SeedSpace(1, 3))
    text = report.to_jsonl()
    lines = text.splitlines()
    records = [json.loads(line) for line in lines]
    assert records[0]["type"] == "summary"
    assert records[0]["class_count"] == len(lines) - 1
    assert all(r["type"] == "class" for r in records[1:])
    assert CensusReport.from_jsonl(text).to_jsonl() == text


def test_csv_matches_classes():
    report = run_census(SeedSpace(1, 2))
    rows = report.to_csv().splitlines()
    assert rows[0] == "canonical,period,basin_count,max_transient,witness"
    assert len(rows) == len(report.classes) + 1
    assert sum(int(r.split(",")[2]) for r in rows[1:]) == 110


def test_find_sigma():
    assert render_compressed(find_sigma(1, 1).by_transient) == "2"
    assert render_compressed(find_sigma(0, 2).by_transient) == "22"
    assert render_compressed(find_sigma(8, 1).by_first_repeat) == "1"
    assert find_sigma(7, 1).exhausted


def test_sigma_stable_as_bound_grows():
    for n in range(0, 5):
        found = [find_sigma(n, b).by_transient for b in (2, 3)]
        if found[0] is not None:
            assert found[1] == found[0]


def test_find_sigma_rejects_bad_input():
    with pytest.raises(ValueError):
        find_sigma(-1, 3)


def test_conjecture_probe():
    report = probe_conjecture()
    assert render_digits(report.chain[1], 100) == "333333333332"
    assert (report.orbit.transient, report.orbit.period, report.orbit.first_repeat) == (7, 2, 9)
    assert report.first_mismatch == 2
    # only the second printed step breaks the map
    assert [i for i, ok in enumerate(report.printed_steps_consistent) if not ok] == [1]
    assert (report.printed_orbit.transient, report.printed_orbit.period) == (5, 2)
    s = "333333333332"
    for expected in texts(report.chain[2:]):
        s = oracle.lsb(s)
        assert s == expected
    json.dumps(report.to_record())
