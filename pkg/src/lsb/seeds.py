"""Indexed enumeration of bounded seed spaces.

Seeds are listed by length, then lexicographically, which is the
``word_compare`` order.  Every seed has a global index so a space can be cut
into contiguous shards and processed independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby, islice, product
from typing import Iterator

from .runword import RunWord

__all__ = ["SeedSpace", "enumerate_seeds", "shard_ranges"]


@dataclass(frozen=True)
class SeedSpace:
    min_len: int
    max_len: int
    alphabet: tuple = tuple(range(10))
    leading_zeros: bool = True
    max_run: int | None = None  # drop seeds with a longer run (not counted in size)

    def __post_init__(self):
        if self.min_len < 1 or self.max_len < self.min_len:
            raise ValueError(f"invalid length range {self.min_len}..{self.max_len}")
        alphabet = tuple(sorted(set(self.alphabet)))
        if not alphabet or alphabet[0] < 0 or alphabet[-1] > 9:
            raise ValueError(f"alphabet must be a nonempty subset of 0..9, got {self.alphabet!r}")
        object.__setattr__(self, "alphabet", alphabet)
        if self.max_run is not None and self.max_run < 1:
            raise ValueError("max_run must be positive")

    @property
    def description(self) -> str:
        text = (
            f"lengths {self.min_len}..{self.max_len} over "
            f"{''.join(map(str, self.alphabet))}"
        )
        if not self.leading_zeros:
            text += ", no leading zeros"
        if self.max_run is not None:
            text += f", runs <= {self.max_run}"
        return text

    def _first_digits(self) -> tuple:
        if self.leading_zeros:
            return self.alphabet
        return tuple(d for d in self.alphabet if d != 0)

    def _block_size(self, length: int) -> int:
        return len(self._first_digits()) * len(self.alphabet) ** (length - 1)

    @property
    def size(self) -> int:
        """Number of digit strings in the space, before any ``max_run`` filter."""
        return sum(self._block_size(n) for n in range(self.min_len, self.max_len + 1))

    def iter_keys(self, start: int = 0, stop: int | None = None) -> Iterator[tuple]:
        """Flat run keys of the seeds with global index in ``[start, stop)``."""
        stop = self.size if stop is None else min(stop, self.size)
        offset = 0
        first = self._first_digits()
        cap = self.max_run
        for length in range(self.min_len, self.max_len + 1):
            block = self._block_size(length)
            lo, hi = max(start - offset, 0), min(stop - offset, block)
            offset += block
            if lo >= hi:
                continue
            strings = product(first, *([self.alphabet] * (length - 1)))
            for digits in islice(strings, lo, hi):
                key = []
                for d, g in groupby(digits):
                    key += (d, sum(1 for _ in g))
                if cap is not None and max(key[1::2]) > cap:
                    continue
                yield tuple(key)

    def iter_words(self, start: int = 0, stop: int | None = None) -> Iterator[RunWord]:
        for key in self.iter_keys(start, stop):
            yield RunWord.from_key(key)


def enumerate_seeds(min_len: int, max_len: int, alphabet=range(10), leading_zeros: bool = True):
    return SeedSpace(min_len, max_len, tuple(alphabet), leading_zeros).iter_words()


def shard_ranges(size: int, shard_size: int) -> list:
    if shard_size < 1:
        raise ValueError("shard_size must be positive")
    return [(lo, min(lo + shard_size, size)) for lo in range(0, size, shard_size)]
