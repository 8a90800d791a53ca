"""Rewriting steps on run words.

``lsb_step`` is the look-and-say-the-biggest map: every run ``a^n`` becomes
the decimal digits of ``max(n, a)`` followed by ``a``.  ``ls_step`` (Conway)
and ``lsa_step`` (look-and-say-again) are provided for comparison and only
accept runs of length at most 9.

The hot loop, :func:`step_key`, works on flat ``(d0, c0, d1, c1, ...)`` int
tuples so sweeps can run without building :class:`RunWord` objects.
"""

from __future__ import annotations

import enum
from itertools import groupby

from .errors import RunCountOverflowError
from .runword import Run, RunWord

__all__ = [
    "WordType",
    "z_piece",
    "step_key",
    "lsb_step",
    "ls_step",
    "lsa_step",
    "classify",
    "last_digit",
    "max_run",
]


class WordType(enum.Enum):
    KID = "kid"
    ADULT = "adult"
    MIXED = "mixed"


def _piece(digit: int, count: int) -> tuple:
    """Flat image ``(d, c, d, c, ...)`` of the run ``digit^count``."""
    m = count if count > digit else digit
    if m < 10:
        return (digit, 2) if m == digit else (m, 1, digit, 1)
    out: list = []
    for ch, grp in groupby(str(m)):
        out += [int(ch), sum(1 for _ in grp)]
    if out[-2] == digit:
        out[-1] += 1
    else:
        out += [digit, 1]
    return tuple(out)


# _SMALL[d][c] for every run with count <= 9
_SMALL = [[None] + [_piece(d, c) for c in range(1, 10)] for d in range(10)]


def z_piece(r: Run) -> tuple[Run, ...]:
    """Image of a single run, as normalized runs."""
    it = iter(_piece(r[0], r[1]))
    return tuple(Run(d, c) for d, c in zip(it, it))


def step_key(key: tuple) -> tuple:
    """One step on a flat run key; the inner loop of every sweep."""
    out: list = []
    small = _SMALL
    it = iter(key)
    for d, c in zip(it, it):
        piece = small[d][c] if c < 10 else _piece(d, c)
        if out and out[-2] == piece[0]:
            out[-1] += piece[1]
            out += piece[2:]
        else:
            out += piece
    return tuple(out)


def lsb_step(w: RunWord) -> RunWord:
    return RunWord.from_key(step_key(w.key))


def _expand_small_counts(w: RunWord, template) -> RunWord:
    out: list = []
    for digit, count in w.runs:
        if count > 9:
            raise RunCountOverflowError(digit, count)
        for d in template(digit, count):
            if out and out[-1][0] == d:
                out[-1] = (d, out[-1][1] + 1)
            else:
                out.append((d, 1))
    return RunWord._trusted(tuple(out))


def ls_step(w: RunWord) -> RunWord:
    """Conway's look-and-say: ``a^n`` becomes ``n a``."""
    return _expand_small_counts(w, lambda a, n: (n, a))


def lsa_step(w: RunWord) -> RunWord:
    """Look-and-say-again: ``a^n`` becomes ``n n a a``."""
    return _expand_small_counts(w, lambda a, n: (n, n, a, a))


def classify(w: RunWord) -> WordType:
    digits = {r.digit for r in w.runs}
    if max(digits) <= 3:
        return WordType.KID
    if min(digits) >= 4:
        return WordType.ADULT
    return WordType.MIXED


def last_digit(w: RunWord) -> int:
    return w.runs[-1].digit


def max_run(w: RunWord) -> int:
    return max(r.count for r in w.runs)
