"""Limit-cycle census over bounded seed spaces, sigma search and the 2^x probe.

A census walks every seed of a :class:`~lsb.seeds.SeedSpace`, groups seeds by
the canonical element of their limit cycle, and keeps per-class basin sizes
and transient extremes.  Work is split into contiguous index shards; shard
reports are merged in shard order so the result does not depend on ``jobs``.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Optional

from .dynamics import Orbit, OrbitCache, detect_orbit, trajectory
from .errors import OverlappingSpaceError
from .maxmap import lsb_step
from .runword import (
    RunWord,
    order_key,
    parse_compressed,
    render_compressed,
    render_digits,
    render_key,
    total_length,
)
from .seeds import SeedSpace, shard_ranges

__all__ = [
    "CycleClass",
    "CensusReport",
    "run_census",
    "census_shard",
    "merge_reports",
    "SigmaResult",
    "find_sigma",
    "ConjectureReport",
    "probe_conjecture",
    "CONJECTURE_SEED",
    "PRINTED_CHAIN",
]

DEFAULT_SHARD_SIZE = 1 << 17


class CycleClass(NamedTuple):
    canonical: RunWord
    period: int
    members: tuple
    basin_count: int
    max_transient: int
    witness_max_transient: RunWord


def _better(value, witness, best_value, best_witness) -> bool:
    """Larger value wins; ties go to the smaller witness."""
    if best_witness is None or value > best_value:
        return True
    return value == best_value and order_key(witness) < order_key(best_witness)


@dataclass
class CensusReport:
    """Aggregate over (part of) a seed space.

    ``classes`` maps a canonical run tuple to ``[members, basin, max_mu,
    witness]`` with flat run keys throughout; :meth:`cycle_classes` turns them
    into :class:`CycleClass` values.  ``segments`` are the half-open seed
    index ranges covered, used to refuse merging overlapping reports.
    """

    space: str
    segments: tuple = ()
    total_seeds: int = 0
    classes: dict = field(default_factory=dict)
    max_transient: int = 0
    max_transient_witness: Optional[tuple] = None
    max_first_repeat: int = 0
    max_first_repeat_witness: Optional[tuple] = None

    @property
    def seed_space_description(self) -> str:
        return self.space

    @property
    def period_histogram(self) -> dict:
        """Period -> number of seeds whose limit cycle has that period."""
        hist: dict = {}
        for members, basin, _, _ in self.classes.values():
            hist[len(members)] = hist.get(len(members), 0) + basin
        return dict(sorted(hist.items()))

    @property
    def class_period_histogram(self) -> dict:
        """Period -> number of distinct cycles with that period."""
        hist: dict = {}
        for members, _, _, _ in self.classes.values():
            hist[len(members)] = hist.get(len(members), 0) + 1
        return dict(sorted(hist.items()))

    def add(self, seed: tuple, mu: int, canon: tuple, members: tuple) -> None:
        self.total_seeds += 1
        entry = self.classes.get(canon)
        if entry is None:
            self.classes[canon] = [members, 1, mu, seed]
        else:
            entry[1] += 1
            if _better(mu, seed, entry[2], entry[3]):
                entry[2], entry[3] = mu, seed
        if _better(mu, seed, self.max_transient, self.max_transient_witness):
            self.max_transient, self.max_transient_witness = mu, seed
        first_repeat = mu + len(members)
        if _better(first_repeat, seed, self.max_first_repeat, self.max_first_repeat_witness):
            self.max_first_repeat, self.max_first_repeat_witness = first_repeat, seed

    def cycle_classes(self) -> list:
        out = []
        for canon in sorted(self.classes, key=order_key):
            members, basin, max_mu, witness = self.classes[canon]
            out.append(
                CycleClass(
                    canonical=RunWord.from_key(canon),
                    period=len(members),
                    members=tuple(RunWord.from_key(m) for m in members),
                    basin_count=basin,
                    max_transient=max_mu,
                    witness_max_transient=RunWord.from_key(witness),
                )
            )
        return out

    # -- serialization -------------------------------------------------

    def summary_record(self) -> dict:
        def word(key):
            return None if key is None else render_key(key)

        return {
            "type": "summary",
            "seed_space": self.space,
            "segments": [list(s) for s in self.segments],
            "total_seeds": self.total_seeds,
            "class_count": len(self.classes),
            "period_histogram": {str(p): n for p, n in self.period_histogram.items()},
            "global_max_transient": {
                "value": self.max_transient,
                "witness": word(self.max_transient_witness),
            },
            "global_max_first_repeat": {
                "value": self.max_first_repeat,
                "witness": word(self.max_first_repeat_witness),
            },
        }

    def _sorted_entries(self):
        for canon in sorted(self.classes, key=order_key):
            yield self.classes[canon]

    def iter_records(self):
        yield self.summary_record()
        for members, basin, max_mu, witness in self._sorted_entries():
            yield {
                "type": "class",
                "canonical": render_key(members[0]),
                "period": len(members),
                "members": [render_key(m) for m in members],
                "basin_count": basin,
                "max_transient": max_mu,
                "witness": render_key(witness),
            }

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.iter_records())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["canonical", "period", "basin_count", "max_transient", "witness"])
        for members, basin, max_mu, witness in self._sorted_entries():
            writer.writerow([render_key(members[0]), len(members), basin, max_mu, render_key(witness)])
        return buf.getvalue()

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "CensusReport":
        records = iter(records)
        head = next(records)
        if head.get("type") != "summary":
            raise ValueError("census stream must start with a summary record")

        def key(text):
            return None if text is None else _key(parse_compressed(text))

        report = cls(
            space=head["seed_space"],
            segments=tuple(tuple(s) for s in head["segments"]),
            total_seeds=head["total_seeds"],
            max_transient=head["global_max_transient"]["value"],
            max_transient_witness=key(head["global_max_transient"]["witness"]),
            max_first_repeat=head["global_max_first_repeat"]["value"],
            max_first_repeat_witness=key(head["global_max_first_repeat"]["witness"]),
        )
        for rec in records:
            members = tuple(key(m) for m in rec["members"])
            report.classes[members[0]] = [
                members,
                rec["basin_count"],
                rec["max_transient"],
                key(rec["witness"]),
            ]
        return report

    @classmethod
    def from_jsonl(cls, text: str) -> "CensusReport":
        return cls.from_records(json.loads(line) for line in text.splitlines() if line.strip())


def _key(w: RunWord) -> tuple:
    return w.key


def census_shard(space: SeedSpace, start: int, stop: int, max_steps: int = 10_000,
                 cache: Optional[OrbitCache] = None) -> CensusReport:
    """Census of the seeds with global index in ``[start, stop)``."""
    cache = cache or OrbitCache(max_steps)
    report = CensusReport(space.description, ((start, stop),) if stop > start else ())
    cycles = cache.cycles
    for seed in space.iter_keys(start, stop):
        mu, canon = cache.solve(seed)
        report.add(seed, mu, canon, cycles[canon])
    return report


def _shard_job(args):
    space, start, stop, max_steps = args
    return census_shard(space, start, stop, max_steps)


def merge_reports(a: CensusReport, b: CensusReport) -> CensusReport:
    if not a.segments and not a.total_seeds:
        return _copy(b)
    if not b.segments and not b.total_seeds:
        return _copy(a)
    if a.space != b.space:
        raise OverlappingSpaceError(f"reports cover different spaces: {a.space!r} vs {b.space!r}")
    for lo, hi in a.segments:
        for lo2, hi2 in b.segments:
            if lo < hi2 and lo2 < hi:
                raise OverlappingSpaceError(f"segments {lo}..{hi} and {lo2}..{hi2} overlap")
    out = _copy(a)
    out.segments = _join_segments(a.segments + b.segments)
    out.total_seeds += b.total_seeds
    for canon, (members, basin, max_mu, witness) in b.classes.items():
        entry = out.classes.get(canon)
        if entry is None:
            out.classes[canon] = [members, basin, max_mu, witness]
        else:
            entry[1] += basin
            if _better(max_mu, witness, entry[2], entry[3]):
                entry[2], entry[3] = max_mu, witness
    if b.max_transient_witness is not None and _better(
        b.max_transient, b.max_transient_witness, out.max_transient, out.max_transient_witness
    ):
        out.max_transient, out.max_transient_witness = b.max_transient, b.max_transient_witness
    if b.max_first_repeat_witness is not None and _better(
        b.max_first_repeat, b.max_first_repeat_witness,
        out.max_first_repeat, out.max_first_repeat_witness,
    ):
        out.max_first_repeat = b.max_first_repeat
        out.max_first_repeat_witness = b.max_first_repeat_witness
    return out


def _copy(r: CensusReport) -> CensusReport:
    return CensusReport(
        r.space,
        r.segments,
        r.total_seeds,
        {k: list(v) for k, v in r.classes.items()},
        r.max_transient,
        r.max_transient_witness,
        r.max_first_repeat,
        r.max_first_repeat_witness,
    )


def _join_segments(segments) -> tuple:
    out: list = []
    for lo, hi in sorted(segments):
        if out and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def run_census(space: SeedSpace, max_steps: int = 10_000, jobs: int = 1,
               shard_size: int = DEFAULT_SHARD_SIZE, checkpoint_dir=None,
               progress=None) -> CensusReport:
    """Census of a whole space.

    With ``checkpoint_dir`` each finished shard is written as
    ``shard-<start>-<stop>.jsonl`` and reused on the next run.
    """
    if jobs < 1:
        raise ValueError("jobs must be positive")
    shards = shard_ranges(space.size, shard_size)
    ckpt = Path(checkpoint_dir) if checkpoint_dir is not None else None
    if ckpt is not None:
        ckpt.mkdir(parents=True, exist_ok=True)

    done: dict = {}
    todo = []
    for lo, hi in shards:
        path = ckpt / f"shard-{lo}-{hi}.jsonl" if ckpt else None
        if path is not None and path.exists():
            loaded = CensusReport.from_jsonl(path.read_text())
            if loaded.space == space.description:
                done[lo] = loaded
                continue
        todo.append((lo, hi))

    def finish(lo, hi, rep):
        done[lo] = rep
        if ckpt is not None:
            path = ckpt / f"shard-{lo}-{hi}.jsonl"
            tmp = path.with_suffix(".tmp")
            tmp.write_text(rep.to_jsonl())
            tmp.replace(path)
        if progress is not None:
            progress(hi, space.size)

    if jobs == 1 or len(todo) <= 1:
        cache = OrbitCache(max_steps)
        for lo, hi in todo:
            finish(lo, hi, census_shard(space, lo, hi, max_steps, cache))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = [(space, lo, hi, max_steps) for lo, hi in todo]
            for (lo, hi), rep in zip(todo, pool.map(_shard_job, args)):
                finish(lo, hi, rep)

    report = CensusReport(space.description)
    for lo, _ in shards:
        report = merge_reports(report, done[lo])
    return report


# -- sigma search -------------------------------------------------------------


@dataclass(frozen=True)
class SigmaResult:
    """Smallest seeds reaching their cycle after exactly ``n`` steps.

    ``by_transient`` uses mu = n; ``by_first_repeat`` uses mu + period = n.
    Either is ``None`` when no seed of length <= ``bound`` qualifies.
    """

    n: int
    bound: int
    by_transient: Optional[RunWord]
    by_first_repeat: Optional[RunWord]

    @property
    def exhausted(self) -> bool:
        return self.by_transient is None


def find_sigma(n: int, bound: int, max_steps: int = 10_000) -> SigmaResult:
    if n < 0 or bound < 1:
        raise ValueError("need n >= 0 and bound >= 1")
    space = SeedSpace(1, bound, leading_zeros=False)
    cache = OrbitCache(max_steps)
    by_mu = by_fr = None
    for seed in space.iter_keys():
        mu, canon = cache.solve(seed)
        if by_mu is None and mu == n:
            by_mu = RunWord.from_key(seed)
        if by_fr is None and mu + len(cache.cycles[canon]) == n:
            by_fr = RunWord.from_key(seed)
        if by_mu is not None and by_fr is not None:
            break
    return SigmaResult(n, bound, by_mu, by_fr)


# -- the 2^x probe ---------------------------------------------------------------

# 2 repeated (10^11 - 1)/3 = 33333333333 times
CONJECTURE_SEED = ((2, 33333333333),)

# The chain as printed alongside the conjecture; the last two terms form the
# 2-cycle drawn there.
PRINTED_CHAIN = (
    "2^33333333333",
    "3^11 2",
    "11312",
    "21331122",
    "2211332122",
    "222133221122",
    "321133222122",
    "33222133321122",
    "33321133222122",
)


class ChainComparison(NamedTuple):
    index: int
    engine: str
    printed: str
    match: bool


@dataclass(frozen=True)
class ConjectureReport:
    seed: RunWord
    orbit: Orbit
    chain: tuple
    comparisons: tuple
    printed_orbit: Orbit
    printed_steps_consistent: tuple
    elapsed_seconds: float

    @property
    def first_mismatch(self) -> Optional[int]:
        for c in self.comparisons:
            if not c.match:
                return c.index
        return None

    def to_record(self) -> dict:
        return {
            "seed": render_compressed(self.seed),
            "seed_length": total_length(self.seed),
            "mu": self.orbit.transient,
            "period": self.orbit.period,
            "first_repeat": self.orbit.first_repeat,
            "chain": [render_compressed(w) for w in self.chain],
            "cycle": [render_compressed(w) for w in self.orbit.cycle],
            "comparison": [c._asdict() for c in self.comparisons],
            "first_mismatch": self.first_mismatch,
            "printed_chain_steps_follow_map": list(self.printed_steps_consistent),
            "printed_from_first_mismatch": {
                "mu": self.printed_orbit.transient,
                "period": self.printed_orbit.period,
                "cycle": [render_compressed(w) for w in self.printed_orbit.cycle],
            },
            "elapsed_seconds": self.elapsed_seconds,
        }


def _as_digits(w: RunWord, cap: int = 64) -> str:
    if total_length(w) <= cap:
        return render_digits(w, cap)
    return render_compressed(w)


def probe_conjecture(seed: tuple = CONJECTURE_SEED, printed=PRINTED_CHAIN) -> ConjectureReport:
    """Orbit of the 2^x seed in run form, compared term by term with ``printed``.

    ``printed_steps_consistent[i]`` says whether the map sends printed term i
    to printed term i + 1.  ``printed_orbit`` follows the printed chain from
    its first term that disagrees with the engine, to check where it lands.
    """
    started = time.perf_counter()
    y = RunWord(seed)
    orbit = detect_orbit(y)
    chain = tuple(trajectory(y, orbit.first_repeat))
    elapsed = time.perf_counter() - started

    printed_words = [parse_compressed(t) for t in printed]
    comparisons = []
    for i, text in enumerate(printed):
        engine = _as_digits(chain[i]) if i < len(chain) else ""
        mine = chain[i] if i < len(chain) else None
        comparisons.append(ChainComparison(i, engine, text, mine == printed_words[i]))
    steps_ok = tuple(lsb_step(a) == b for a, b in zip(printed_words, printed_words[1:]))
    start = next((c.index for c in comparisons if not c.match), 0)
    printed_orbit = detect_orbit(printed_words[start])
    return ConjectureReport(y, orbit, chain, tuple(comparisons), printed_orbit, steps_ok, elapsed)
