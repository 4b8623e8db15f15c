"""Seed-portable pseudo-random numbers (SplitMix64).

Every randomized routine in this package (Erdős–Rényi sampling, search
restarts, weight sampling) draws from this generator so that a 64-bit seed
reproduces byte-identical results on any platform.  The state advance is the
standard SplitMix64 finalizer:

    state  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z      = state
    z      = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z      = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output = z XOR (z >> 31)

``uniform()`` maps the top 53 bits of the output to [0, 1).
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator with a documented state advance."""

    __slots__ = ("_state",)

    def __init__(self, seed: int = 0):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniforms(self, count: int) -> list[float]:
        return [self.uniform() for _ in range(count)]

    def symmetric_uniform(self) -> float:
        """Uniform float in [-1, 1)."""
        return 2.0 * self.uniform() - 1.0

    def spawn(self) -> "SplitMix64":
        """Child generator seeded from this stream (for independent restarts)."""
        return SplitMix64(self.next_u64())
