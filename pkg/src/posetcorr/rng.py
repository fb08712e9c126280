"""SplitMix64: a tiny deterministic 64-bit generator.

Chosen so sampled streams are reproducible across implementations; the
update and output mix follow the usual published constants.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Integer in [0, k) by multiply-shift of one 64-bit draw."""
        if k <= 0:
            raise ValueError("k must be positive")
        return (self.next_u64() * k) >> 64

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))
