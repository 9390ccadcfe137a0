"""SplitMix64 pseudorandom number generator.

The generator is a counter that advances by a golden-ratio constant,
followed by two xor-shift-multiply finalization rounds:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

All arithmetic is modulo 2^64. It is tiny, portable, and has published
test vectors (seed 0 yields 0xE220A8397B1DCDAF first), which makes
seeded behavior reproducible across platforms and languages.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def rng_next(state: int) -> tuple[int, int]:
    """Advance one step: return ``(value, next_state)``.

    Pure function of ``state``; equal states produce equal streams.
    """
    if not 0 <= state <= MASK64:
        raise ValueError("state must be an unsigned 64-bit integer")
    next_state = (state + GOLDEN_GAMMA) & MASK64
    z = next_state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31), next_state


class SplitMix64:
    """Stateful convenience wrapper around :func:`rng_next`."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.state = seed

    def next_u64(self) -> int:
        value, self.state = rng_next(self.state)
        return value

    def next_u01(self) -> float:
        """Uniform float in [0, 1), using the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift map.

        Bias is at most n/2^64, and the map is branch-free, so results
        are exactly reproducible everywhere.
        """
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.next_u64() * n) >> 64

    def next_uniform(self, low: float, high: float) -> float:
        """Uniform float in [low, high)."""
        return low + self.next_u01() * (high - low)
