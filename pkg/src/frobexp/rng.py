"""Seeded SplitMix64 generator.

All randomized sampling in the package goes through this generator so that
runs are reproducible bit-for-bit given a seed. The update is the standard
SplitMix64 step::

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

all modulo 2**64. ``below(m)`` reduces ``out`` modulo ``m`` (the bias is
below 2**-50 for the moduli used here and is accepted).
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("modulus must be positive")
        return self.next() % m

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def fork(self, index: int) -> "SplitMix64":
        """Independent stream for sample ``index``; does not advance self."""
        mixer = SplitMix64(self.state ^ ((index * _GOLDEN) & _MASK))
        return SplitMix64(mixer.next())


def sample_stream(seed: int, index: int) -> SplitMix64:
    """Generator for the ``index``-th sample of a seeded batch.

    Deriving per-sample streams keeps batch results independent of how the
    batch is split across workers.
    """
    return SplitMix64(seed).fork(index)
