"""Orbits of the look-and-say-the-biggest map.

Conventions used throughout:

* ``transient`` (mu) is the least ``m`` such that ``Z^m(seed)`` lies on the
  limit cycle;
* ``period`` (tau) is the cycle length;
* ``first_repeat`` is ``mu + tau``, the first step whose word was seen before.

Cycles are stored starting at their smallest element under ``word_compare``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import StepBudgetExceeded
from .maxmap import lsb_step, step_key
from .runword import RunWord, order_key, parse_compressed, render_compressed, word_compare

__all__ = [
    "Orbit",
    "OrbitCache",
    "iterate_n",
    "trajectory",
    "detect_orbit",
    "detect_orbit_brent",
    "canonical_cycle",
    "rotate_to_canonical",
]


@dataclass(frozen=True)
class Orbit:
    seed: RunWord
    transient: int
    period: int
    first_repeat: int
    cycle: tuple

    @property
    def mu(self) -> int:
        return self.transient

    def to_record(self, trajectory_prefix: Optional[int] = None) -> dict:
        record = {
            "seed": render_compressed(self.seed),
            "mu": self.transient,
            "period": self.period,
            "first_repeat": self.first_repeat,
            "cycle": [render_compressed(w) for w in self.cycle],
        }
        if trajectory_prefix is not None:
            record["trajectory_prefix"] = [
                render_compressed(w) for w in trajectory(self.seed, trajectory_prefix)
            ]
        return record

    @classmethod
    def from_record(cls, record: dict) -> "Orbit":
        return cls(
            seed=parse_compressed(record["seed"]),
            transient=record["mu"],
            period=record["period"],
            first_repeat=record["first_repeat"],
            cycle=tuple(parse_compressed(w) for w in record["cycle"]),
        )


def iterate_n(w: RunWord, n: int) -> RunWord:
    if n < 0:
        raise ValueError("n must be non-negative")
    for _ in range(n):
        w = lsb_step(w)
    return w


def trajectory(w: RunWord, n: int) -> list:
    """``[w, Z(w), ..., Z^n(w)]``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = [w]
    for _ in range(n):
        w = lsb_step(w)
        out.append(w)
    return out


def rotate_to_canonical(cycle) -> tuple:
    cycle = tuple(cycle)
    best = 0
    for i in range(1, len(cycle)):
        if word_compare(cycle[i], cycle[best]) < 0:
            best = i
    return cycle[best:] + cycle[:best]


def detect_orbit(w: RunWord, max_steps: int = 10_000) -> Orbit:
    """Find transient and period by remembering every visited word."""
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    seen = {w.key: 0}
    chain = [w]
    current = w
    for step in range(1, max_steps + 1):
        current = lsb_step(current)
        first = seen.get(current.key)
        if first is not None:
            cycle = rotate_to_canonical(chain[first:])
            return Orbit(w, first, step - first, step, cycle)
        seen[current.key] = step
        chain.append(current)
    raise StepBudgetExceeded(render_compressed(w), max_steps)


def detect_orbit_brent(w: RunWord, max_steps: int = 10_000) -> Orbit:
    """Brent's cycle finder; constant memory in the number of visited words."""
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    power = period = 1
    tortoise = w
    hare = lsb_step(w)
    while tortoise != hare:
        if power == period:
            tortoise = hare
            power *= 2
            period = 0
        if power > 2 * max_steps:
            raise StepBudgetExceeded(render_compressed(w), max_steps)
        hare = lsb_step(hare)
        period += 1

    tortoise = w
    hare = iterate_n(w, period)
    mu = 0
    while tortoise != hare:
        tortoise = lsb_step(tortoise)
        hare = lsb_step(hare)
        mu += 1
    if mu + period > max_steps:
        raise StepBudgetExceeded(render_compressed(w), max_steps)
    cycle = trajectory(tortoise, period - 1)
    return Orbit(w, mu, period, mu + period, rotate_to_canonical(cycle))


def canonical_cycle(orbit: Orbit) -> RunWord:
    return orbit.cycle[0]


class OrbitCache:
    """Memoized orbit solver for sweeping many seeds.

    Every word met while walking a seed is remembered with its transient and
    the canonical key of its limit cycle, so later seeds usually stop after
    one step.  Keys are flat run keys (see :attr:`RunWord.key`).  The memo is dropped wholesale once it
    holds ``limit`` words; cycle membership is kept separately so results
    never depend on what was evicted.
    """

    def __init__(self, max_steps: int = 10_000, limit: int = 1 << 20):
        self.max_steps = max_steps
        self.limit = limit
        self._known: dict = {}
        # canonical key -> cycle keys, canonical first
        self.cycles: dict = {}

    def __len__(self):
        return len(self._known)

    def solve(self, key) -> tuple:
        """Return ``(transient, canonical_key)`` for the word with runs ``key``."""
        known = self._known
        hit = known.get(key)
        if hit is not None:
            return hit
        if len(known) >= self.limit:
            known.clear()
        path = []
        index = {}
        current = key
        while True:
            hit = known.get(current)
            if hit is not None:
                mu, canon = hit
                on_cycle = len(path)
                if mu == 0:
                    # evicted members of the same cycle can sit at the end of path
                    members = self.cycles[canon]
                    while on_cycle and path[on_cycle - 1] in members:
                        on_cycle -= 1
                for pos in range(on_cycle, len(path)):
                    known[path[pos]] = (0, canon)
                base = mu if on_cycle == len(path) else 0
                for pos in range(on_cycle):
                    known[path[pos]] = (base + on_cycle - pos, canon)
                return known[key]
            first = index.get(current)
            if first is not None:
                canon = self._register_cycle(path[first:])
                for k in path[first:]:
                    known[k] = (0, canon)
                for pos in range(first):
                    known[path[pos]] = (first - pos, canon)
                return known[key]
            if len(path) > self.max_steps:
                raise StepBudgetExceeded(render_compressed(RunWord.from_key(key)), self.max_steps)
            index[current] = len(path)
            path.append(current)
            current = step_key(current)

    def _register_cycle(self, keys) -> tuple:
        keys = list(keys)
        best = min(range(len(keys)), key=lambda i: order_key(keys[i]))
        members = tuple(keys[best:] + keys[:best])
        return self.cycles.setdefault(members[0], members)[0]

    def orbit(self, w: RunWord) -> Orbit:
        mu, canon = self.solve(w.key)
        cycle = tuple(RunWord.from_key(k) for k in self.cycles[canon])
        return Orbit(w, mu, len(cycle), mu + len(cycle), cycle)
