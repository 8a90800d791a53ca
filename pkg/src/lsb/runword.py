"""Run-length compressed digit words.

A :class:`RunWord` is a nonempty digit string stored as its maximal runs,
e.g. ``11193222`` is ``[(1, 3), (9, 1), (3, 1), (2, 3)]``.  Counts are Python
ints, so a word such as ``2^33333333333`` costs a single run and is never
expanded unless explicitly rendered.

Leading zeros are allowed: ``0``, ``00`` and ``000`` are distinct words.
"""

from __future__ import annotations

import functools
import re
from typing import Iterable, NamedTuple

from .errors import SeedParseError, WordTooLongError

__all__ = [
    "Run",
    "RunWord",
    "normalize",
    "parse_digits",
    "parse_compressed",
    "parse_seed",
    "render_digits",
    "render_compressed",
    "render_key",
    "total_length",
    "word_compare",
    "order_key",
]

_DIGITS = "0123456789"
_NON_DIGIT = re.compile(r"[^0-9]")
_RUN = re.compile(r"([0-9])\1*")


class Run(NamedTuple):
    digit: int
    count: int


def _check_run(run) -> Run:
    digit, count = run
    if not (isinstance(digit, int) and 0 <= digit <= 9):
        raise ValueError(f"run digit must be an int in 0..9, got {digit!r}")
    if not (isinstance(count, int) and count >= 1):
        raise ValueError(f"run count must be a positive int, got {count!r}")
    return Run(digit, count)


@functools.total_ordering
class RunWord:
    """Immutable normalized run sequence.

    The constructor validates; use :func:`normalize` to build a word from runs
    whose neighbours may share a digit.  Ordering follows :func:`word_compare`
    (shorter first, then lexicographic on the digit expansion).
    """

    __slots__ = ("runs", "_hash", "_key")

    def __init__(self, runs: Iterable):
        runs = tuple(_check_run(r) for r in runs)
        if not runs:
            raise ValueError("a word needs at least one run")
        for left, right in zip(runs, runs[1:]):
            if left.digit == right.digit:
                raise ValueError(f"adjacent runs share digit {left.digit}; normalize first")
        object.__setattr__(self, "runs", runs)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)

    @classmethod
    def _trusted(cls, runs: tuple) -> "RunWord":
        # runs must already be normalized (digit, count) pairs
        self = object.__new__(cls)
        object.__setattr__(self, "runs", tuple(map(Run._make, runs)))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)
        return self

    @classmethod
    def from_key(cls, key: tuple) -> "RunWord":
        """Inverse of :attr:`key`; ``key`` must describe a normalized word."""
        it = iter(key)
        return cls._trusted(tuple(zip(it, it)))

    def __setattr__(self, name, value):
        raise AttributeError("RunWord is immutable")

    def __reduce__(self):
        return (RunWord.from_key, (self.key,))

    @property
    def key(self) -> tuple:
        """Flat ``(d0, c0, d1, c1, ...)`` tuple; the compact form used as memo key."""
        if self._key is None:
            object.__setattr__(self, "_key", tuple(x for run in self.runs for x in run))
        return self._key

    def __len__(self) -> int:
        return len(self.runs)

    def __iter__(self):
        return iter(self.runs)

    def __eq__(self, other):
        if not isinstance(other, RunWord):
            return NotImplemented
        return self.runs == other.runs

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.runs))
        return self._hash

    def __lt__(self, other):
        if not isinstance(other, RunWord):
            return NotImplemented
        return word_compare(self, other) < 0

    def __repr__(self):
        return f"RunWord({render_compressed(self)!r})"

    def __str__(self):
        return render_compressed(self)


def normalize(runs: Iterable) -> RunWord:
    """Merge adjacent equal-digit runs and return the resulting word."""
    merged: list[list[int]] = []
    for run in runs:
        digit, count = _check_run(run)
        if merged and merged[-1][0] == digit:
            merged[-1][1] += count
        else:
            merged.append([digit, count])
    if not merged:
        raise ValueError("cannot normalize an empty run sequence")
    return RunWord._trusted(tuple(map(tuple, merged)))


def parse_digits(s: str) -> RunWord:
    if not s:
        raise SeedParseError("empty word", s, 0)
    bad = _NON_DIGIT.search(s)
    if bad:
        raise SeedParseError(f"non-digit character {bad.group()!r}", s, bad.start())
    return RunWord._trusted(tuple((int(m.group(1)), m.end() - m.start()) for m in _RUN.finditer(s)))


def parse_compressed(expr: str) -> RunWord:
    """Parse the seed notation ``term+`` where ``term := digit | digit '^' count``.

    Whitespace may separate terms.  Adjacent terms with the same digit are
    merged, so ``"2^3 2^4"`` is ``2^7``.
    """
    runs = []
    i, n = 0, len(expr)
    while True:
        while i < n and expr[i].isspace():
            i += 1
        if i == n:
            break
        ch = expr[i]
        if ch not in _DIGITS:
            raise SeedParseError(f"expected a digit, found {ch!r}", expr, i)
        digit = int(ch)
        i += 1
        count = 1
        if i < n and expr[i] == "^":
            i += 1
            start = i
            while i < n and expr[i] in _DIGITS:
                i += 1
            if i == start:
                raise SeedParseError("expected a count after '^'", expr, start)
            try:
                count = int(expr[start:i])
            except ValueError:
                raise SeedParseError("count is too long to read", expr, start) from None
            if count == 0:
                raise SeedParseError("run count must be at least 1", expr, start)
        runs.append((digit, count))
    if not runs:
        raise SeedParseError("empty word", expr, 0)
    return normalize(runs)


parse_seed = parse_compressed


def total_length(w: RunWord) -> int:
    return sum(r.count for r in w.runs)


def render_digits(w: RunWord, max_len: int) -> str:
    length = total_length(w)
    if length > max_len:
        raise WordTooLongError(length, max_len)
    return "".join(str(d) * c for d, c in w.runs)


def render_compressed(w: RunWord) -> str:
    """Short runs as plain digits, runs longer than 3 as ``d^n``.

    A space follows every ``d^n`` term that is not last, so the count cannot
    swallow the next digit on re-parse.
    """
    return render_key(w.key)


def render_key(key: tuple) -> str:
    """:func:`render_compressed` straight from a flat run key."""
    parts = []
    after_power = False
    it = iter(key)
    for d, c in zip(it, it):
        if after_power:
            parts.append(" ")
        after_power = c > 3
        parts.append(f"{d}^{c}" if after_power else _DIGITS[d] * c)
    return "".join(parts)


def word_compare(a: RunWord, b: RunWord) -> int:
    """Return -1, 0 or 1: shorter words first, then lexicographic by digits."""
    la, lb = total_length(a), total_length(b)
    if la != lb:
        return -1 if la < lb else 1
    ra, rb = a.runs, b.runs
    i = j = 0
    ca, cb = ra[0].count, rb[0].count
    while i < len(ra) and j < len(rb):
        da, db = ra[i].digit, rb[j].digit
        if da != db:
            return -1 if da < db else 1
        step = min(ca, cb)
        ca -= step
        cb -= step
        if ca == 0:
            i += 1
            if i < len(ra):
                ca = ra[i].count
        if cb == 0:
            j += 1
            if j < len(rb):
                cb = rb[j].count
    return 0


def order_key(key: tuple) -> tuple:
    """Sort key on a flat run key that agrees with :func:`word_compare`.

    Two equal-length expansions first differ either at a digit or where one
    run outlasts the other; there the word whose run ends first is smaller
    exactly when its next digit is below the run's digit.  Encoding each run
    as ``(d, 0, n)`` (next digit below) or ``(d, 1, -n)`` (next digit above)
    makes plain tuple comparison follow the expansions.
    """
    out = []
    size = len(key)
    for i in range(0, size, 2):
        d, n = key[i], key[i + 1]
        if i + 2 < size and key[i + 2] > d:
            out.append((d, 1, -n))
        else:
            out.append((d, 0, n))
    return (sum(key[1::2]), tuple(out))
