"""Randomness sources.

Every operation that needs randomness takes an ``rng`` argument and only ever
calls ``rng.randint(lo, hi)`` (inclusive bounds). ``random.Random`` and
``secrets.SystemRandom`` both satisfy that, so tests pass a seeded
``random.Random`` and production code gets the OS generator.
"""

from __future__ import annotations

import random
import secrets
from typing import Iterable, Optional, Protocol


class RandomSource(Protocol):
    def randint(self, a: int, b: int) -> int: ...


def system_rng() -> RandomSource:
    return secrets.SystemRandom()


def make_rng(seed: Optional[int] = None) -> RandomSource:
    """Seeded, reproducible generator when ``seed`` is given, OS randomness otherwise."""
    return system_rng() if seed is None else random.Random(seed)


class ScriptedRandom:
    """Replays a fixed sequence of values, then optionally defers to a fallback.

    Used to force specific nonces or expansion integers. Each scripted value
    must lie inside the requested range.
    """

    def __init__(self, values: Iterable[int], fallback: Optional[RandomSource] = None):
        self._values = list(values)
        self._fallback = fallback
        self.draws: list = []

    def randint(self, a: int, b: int) -> int:
        if self._values:
            v = self._values.pop(0)
            if not a <= v <= b:
                raise ValueError(f"scripted value {v} outside [{a}, {b}]")
        elif self._fallback is not None:
            v = self._fallback.randint(a, b)
        else:
            raise IndexError("scripted randomness exhausted")
        self.draws.append(v)
        return v
