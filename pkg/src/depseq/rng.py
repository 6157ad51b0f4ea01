"""Seeded shuffling that is stable across Python versions and platforms.

The generator is SplitMix64: the state advances by the 64-bit golden-ratio
increment and each output is the state passed through two xor-shift-multiply
rounds.  Shuffles use Fisher-Yates from the end of the list, drawing
``next() % (i + 1)`` for position i; the modulo bias is below 2**-40 for any
realistic list length.
"""

from __future__ import annotations

from typing import MutableSequence, TypeVar

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return self.next() % bound

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def shuffled(items, seed: int) -> list:
    out = list(items)
    SplitMix64(seed).shuffle(out)
    return out
