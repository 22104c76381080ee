"""SplitMix64 generator: the single source of randomness for reports.

Kept bit-exact so seeded samples match across implementations.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int = 42):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform3(self) -> tuple[float, float, float]:
        return (self.uniform(), self.uniform(), self.uniform())

    def symmetric3(self, scale: float = 1.0) -> tuple[float, float, float]:
        return tuple(scale * (2.0 * self.uniform() - 1.0) for _ in range(3))
