"""Exhaustive checks of the structural laws of the map on bounded domains.

Each ``check_*`` function tests one word and returns ``None`` or a
:class:`Violation`; the ``sweep_*`` functions run a check over a whole seed
space (optionally in worker processes) and return a :class:`LawReport`.
``reproduce_figure1`` and ``reproduce_fossils`` replay the known transition graph and
the pre-cycle chains of small kid seeds.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from .dynamics import OrbitCache, detect_orbit, iterate_n, trajectory
from .errors import PreconditionError
from .maxmap import WordType, classify, last_digit, lsb_step, max_run
from .runword import RunWord, order_key, parse_digits, render_compressed
from .seeds import SeedSpace, shard_ranges

__all__ = [
    "Violation",
    "LawReport",
    "check_fixed_point",
    "check_adult_stabilization",
    "check_kid_closure",
    "check_small_kid_loop",
    "check_last_digit_law",
    "check_type_preservation",
    "reproduce_figure1",
    "reproduce_fossils",
    "sweep_fixed_point",
    "sweep_last_digit",
    "sweep_adult_stabilization",
    "sweep_type_preservation",
    "sweep_kid_closure",
    "sweep_small_kid_loop",
    "random_word",
    "SUITES",
    "run_suite",
    "FIGURE1_EDGES",
    "FOSSIL_BLOCKS",
]

MAX_LISTED = 100
SHARD_SIZE = 1 << 16
KID = tuple(range(4))
ADULT = tuple(range(4, 10))


class Violation(NamedTuple):
    seed: str
    expected: str
    actual: str


@dataclass
class LawReport:
    law_id: str
    domain: str
    seeds_checked: int = 0
    violations: list = field(default_factory=list)
    total_violations: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.total_violations == 0

    def record(self, violation: Optional[Violation]) -> None:
        self.seeds_checked += 1
        if violation is not None:
            self.total_violations += 1
            if len(self.violations) < MAX_LISTED:
                self.violations.append(violation)

    def absorb(self, other: "LawReport") -> None:
        self.seeds_checked += other.seeds_checked
        self.total_violations += other.total_violations
        room = MAX_LISTED - len(self.violations)
        self.violations.extend(other.violations[:room])
        for name, value in other.stats.items():
            mine = self.stats.get(name)
            if mine is None:
                self.stats[name] = value
            elif isinstance(value, int):
                self.stats[name] = mine + value
            else:
                self.stats[name] = _max_with_witness(mine, value)

    def to_record(self) -> dict:
        return {
            "law_id": self.law_id,
            "domain": self.domain,
            "seeds_checked": self.seeds_checked,
            "passed": self.passed,
            "total_violations": self.total_violations,
            "violations": [v._asdict() for v in self.violations],
            "stats": {k: _jsonable(v) for k, v in self.stats.items()},
        }


def _jsonable(value):
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[1], RunWord):
        return {"value": value[0], "witness": render_compressed(value[1])}
    return value


def _max_with_witness(a: tuple, b: tuple) -> tuple:
    """``(value, RunWord)`` pairs: larger value, ties to the smaller word."""
    if b[0] > a[0] or (b[0] == a[0] and order_key(b[1].key) < order_key(a[1].key)):
        return b
    return a


def _word(w: RunWord) -> str:
    return render_compressed(w)


def _require(ok: bool, w: RunWord, what: str) -> None:
    if not ok:
        raise PreconditionError(f"{_word(w)} is not {what}")


# -- single-word checks ---------------------------------------------------------


def check_fixed_point(w: RunWord) -> bool:
    """True iff every run is a pair of one digit >= 2, which forces ``Z(w) == w``."""
    return all(r.count == 2 and r.digit >= 2 for r in w.runs)


def _fixed_point_violation(w: RunWord) -> Optional[Violation]:
    if check_fixed_point(w):
        image = lsb_step(w)
        if image != w:
            return Violation(_word(w), _word(w), _word(image))
    return None


def check_adult_stabilization(w: RunWord) -> Optional[Violation]:
    _require(classify(w) is WordType.ADULT and max_run(w) <= 9, w, "adult with runs <= 9")
    second = iterate_n(w, 2)
    third = lsb_step(second)
    if third != second:
        return Violation(_word(w), _word(second), _word(third))
    return None


def check_type_preservation(w: RunWord) -> Optional[Violation]:
    _require(classify(w) is WordType.ADULT, w, "adult")
    image = lsb_step(w)
    if classify(image) is not WordType.ADULT:
        return Violation(_word(w), "adult", f"{classify(image).value}: {_word(image)}")
    return None


def _is_small_kid(w: RunWord) -> bool:
    return classify(w) is WordType.KID and max_run(w) <= 3


def check_kid_closure(w: RunWord) -> Optional[Violation]:
    _require(_is_small_kid(w), w, "kid with runs <= 3")
    image = lsb_step(w)
    if not _is_small_kid(image):
        return Violation(_word(w), "kid with runs <= 3", _word(image))
    return None


def check_small_kid_loop(w: RunWord, bound: int = 9, orbit=None) -> Optional[Violation]:
    """The orbit must have seen a repeated word after at most ``bound`` steps."""
    _require(_is_small_kid(w), w, "kid with runs <= 3")
    orbit = orbit or detect_orbit(w)
    if orbit.first_repeat > bound:
        return Violation(_word(w), f"first_repeat <= {bound}", f"first_repeat = {orbit.first_repeat}")
    return None


def check_last_digit_law(w: RunWord) -> Optional[Violation]:
    image = lsb_step(w)
    if last_digit(image) != last_digit(w):
        return Violation(_word(w), str(last_digit(w)), str(last_digit(image)))
    return None


# -- sweeps ---------------------------------------------------------------------------


def _sweep_shard(args) -> LawReport:
    law_id, space, lo, hi, check, extra = args
    report = LawReport(law_id, space.description)
    for w in space.iter_words(lo, hi):
        report.record(check(w, *extra))
    return report


def _small_kid_shard(args) -> LawReport:
    law_id, space, lo, hi, bound = args
    report = LawReport(law_id, space.description)
    cache = OrbitCache()
    best = {}
    for w in space.iter_words(lo, hi):
        orbit = cache.orbit(w)
        report.record(check_small_kid_loop(w, bound, orbit))
        # seeds arrive in word order, so strict '>' keeps the smallest witness
        for name, value in (("max_transient", orbit.transient),
                            ("max_first_repeat", orbit.first_repeat),
                            ("max_period", orbit.period)):
            if name not in best or value > best[name][0]:
                best[name] = (value, w)
    report.stats.update(best)
    return report


def _run_sweep(law_id: str, space: SeedSpace, worker: Callable, tail: tuple, jobs: int) -> LawReport:
    shards = shard_ranges(space.size, SHARD_SIZE)
    args = [(law_id, space, lo, hi) + tail for lo, hi in shards]
    report = LawReport(law_id, space.description)
    if jobs > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(worker, args))
    else:
        parts = map(worker, args)
    for part in parts:
        report.absorb(part)
    return report


def sweep_fixed_point(max_len: int = 6, jobs: int = 1) -> LawReport:
    return _run_sweep("fixedpoint", SeedSpace(1, max_len), _sweep_shard,
                      (_fixed_point_violation, ()), jobs)


def random_word(rng: random.Random, max_len: int) -> RunWord:
    """Random digit string of length 1..max_len, biased towards repeated digits."""
    length = rng.randint(1, max_len)
    alphabet = rng.sample(range(10), rng.randint(1, 10))
    return parse_digits("".join(str(rng.choice(alphabet)) for _ in range(length)))


def sweep_last_digit(max_len: int = 6, jobs: int = 1, random_words: int = 0,
                     random_max_len: int = 100, rng_seed: int = 0) -> LawReport:
    report = _run_sweep("lastdigit", SeedSpace(1, max_len), _sweep_shard,
                        (check_last_digit_law, ()), jobs)
    if random_words:
        rng = random.Random(rng_seed)
        for _ in range(random_words):
            report.record(check_last_digit_law(random_word(rng, random_max_len)))
        report.domain += f"; plus {random_words} random words of length <= {random_max_len}"
    return report


def _adult_space(max_len: int) -> SeedSpace:
    return SeedSpace(1, max_len, ADULT, max_run=9)


def _single_runs() -> list:
    return [RunWord([(a, n)]) for a in ADULT for n in range(1, 10)]


def sweep_adult_stabilization(max_len: int = 6, jobs: int = 1) -> LawReport:
    report = _run_sweep("adult", _adult_space(max_len), _sweep_shard,
                        (check_adult_stabilization, ()), jobs)
    for w in _single_runs():
        report.record(check_adult_stabilization(w))
    report.domain += "; plus every a^n with a in 4..9, n <= 9"
    return report


def sweep_type_preservation(max_len: int = 6, jobs: int = 1) -> LawReport:
    report = _run_sweep("adult-closure", _adult_space(max_len), _sweep_shard,
                        (check_type_preservation, ()), jobs)
    for w in _single_runs():
        report.record(check_type_preservation(w))
    report.domain += "; plus every a^n with a in 4..9, n <= 9"
    return report


def _kid_space(max_len: int) -> SeedSpace:
    return SeedSpace(1, max_len, KID, max_run=3)


def sweep_kid_closure(max_len: int = 6, jobs: int = 1) -> LawReport:
    return _run_sweep("kid", _kid_space(max_len), _sweep_shard, (check_kid_closure, ()), jobs)


def sweep_small_kid_loop(max_len: int = 6, bound: int = 9, jobs: int = 1) -> LawReport:
    return _run_sweep("smallkid", _kid_space(max_len), _small_kid_shard, (bound,), jobs)


# -- published small cases --------------------------------------------------------------

FIGURE1_EDGES = (
    ("0", "10"),
    ("00", "20"),
    ("000", "30"),
    ("1", "11"),
    ("11", "21"),
    ("111", "31"),
    ("222", "32"),
    ("2", "22"),
    ("22", "22"),
    ("3", "33"),
    ("33", "33"),
    ("333", "33"),
)


def reproduce_figure1() -> LawReport:
    report = LawReport("figure1", "the twelve drawn edges")
    for src, dst in FIGURE1_EDGES:
        image = lsb_step(parse_digits(src))
        report.record(None if image == parse_digits(dst) else Violation(src, dst, _word(image)))
    return report


class FossilBlock(NamedTuple):
    seeds: tuple
    cycle: tuple
    period: int
    table_steps: int
    chains: dict  # seed -> words drawn on its path


FOSSIL_BLOCKS = (
    FossilBlock(("32",), ("3322",), 1, 1, {"32": ("3322",)}),
    FossilBlock(
        ("31", "21"),
        ("332221", "333211"),
        2,
        5,
        {
            "31": ("3311", "3321", "332211", "332221", "333211"),
            "21": ("2211", "2221", "3211", "332221", "333211"),
        },
    ),
    FossilBlock(
        ("00", "20"),
        ("2233222110", "2233322110"),
        2,
        7,
        {
            "00": ("20", "2210", "221110", "223110", "22332110", "2233222110", "2233322110"),
            "20": ("2210", "221110", "223110", "22332110", "2233222110", "2233322110"),
        },
    ),
    FossilBlock(
        ("0", "10"),
        ("33222110", "33322110"),
        2,
        6,
        {
            "0": ("10", "1110", "3110", "332110", "33222110", "33322110"),
            "10": ("1110", "3110", "332110", "33222110", "33322110"),
        },
    ),
    # the drawn 2-cycle repeats 33222110 on both ends; its partner is 33322110
    FossilBlock(
        ("000", "30"),
        ("33222110", "33322110"),
        2,
        7,
        {
            "000": ("30", "3310", "331110", "333110", "332110", "33222110"),
            "30": ("3310", "331110", "333110", "332110", "33222110"),
        },
    ),
)


def reproduce_fossils() -> LawReport:
    """Cycle sets, periods and drawn chain words; the table's step counts are only reported."""
    report = LawReport("fossils", "seeds 32, 31, 21, 00, 20, 0, 10, 000, 30")
    for block in FOSSIL_BLOCKS:
        expected_cycle = {parse_digits(c) for c in block.cycle}
        for seed in block.seeds:
            w = parse_digits(seed)
            orbit = detect_orbit(w)
            report.stats[seed] = {
                "mu": orbit.transient,
                "period": orbit.period,
                "first_repeat": orbit.first_repeat,
                "table_steps": block.table_steps,
            }
            got = set(orbit.cycle)
            if got != expected_cycle or orbit.period != block.period:
                report.record(
                    Violation(
                        seed,
                        f"cycle {sorted(block.cycle)} period {block.period}",
                        f"cycle {[_word(c) for c in orbit.cycle]} period {orbit.period}",
                    )
                )
                continue
            path = set(trajectory(w, orbit.first_repeat))
            missing = [c for c in block.chains[seed] if parse_digits(c) not in path]
            report.record(
                Violation(seed, "all drawn words on the path", f"missing {missing}") if missing else None
            )
    return report


SUITES = ("fixedpoint", "adult", "kid", "lastdigit", "smallkid", "figure1", "fossils")


def run_suite(name: str, max_len: int = 6, jobs: int = 1, random_words: int = 0,
              bound: int = 9) -> list:
    """Reports for one suite name, or for every suite when ``name == "all"``."""
    if name == "all":
        return [r for suite in SUITES for r in run_suite(suite, max_len, jobs, random_words, bound)]
    if name == "fixedpoint":
        return [sweep_fixed_point(max_len, jobs)]
    if name == "adult":
        return [sweep_adult_stabilization(max_len, jobs), sweep_type_preservation(max_len, jobs)]
    if name == "kid":
        return [sweep_kid_closure(max_len, jobs)]
    if name == "lastdigit":
        return [sweep_last_digit(max_len, jobs, random_words)]
    if name == "smallkid":
        return [sweep_small_kid_loop(max_len, bound, jobs)]
    if name == "figure1":
        return [reproduce_figure1()]
    if name == "fossils":
        return [reproduce_fossils()]
    raise KeyError(name)
