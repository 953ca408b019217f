"""Key pair generation and additive key expansion (e = p + r, E = P + R)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .ec_core import Curve, CurvePoint, Point, base_mul, get_curve, point_add
from .errors import ScalarOutOfRange
from .randomness import RandomSource


@dataclass(frozen=True)
class KeyPair:
    curve: str
    private: int
    public: Point

    @classmethod
    def from_private(cls, curve: Union[str, Curve], private: int) -> "KeyPair":
        curve = get_curve(curve)
        if not 1 <= private < curve.n:
            raise ScalarOutOfRange(f"private key must lie in [1, {curve.n - 1}]")
        return cls(curve.name, private, base_mul(private, curve))


@dataclass(frozen=True)
class ExpansionValue:
    """The expansion integer r together with R = rG."""

    r: int
    R: CurvePoint


def random_scalar(curve: Union[str, Curve], rng: RandomSource, upper: Optional[int] = None) -> int:
    """Uniform integer in [1, upper], where upper defaults to n - 1."""
    curve = get_curve(curve)
    upper = curve.n - 1 if upper is None else upper
    if not 1 <= upper < curve.n:
        raise ScalarOutOfRange(f"upper bound must lie in [1, {curve.n - 1}]")
    return rng.randint(1, upper)


def generate_keypair(curve: Union[str, Curve], rng: RandomSource) -> KeyPair:
    return KeyPair.from_private(curve, random_scalar(curve, rng))


def draw_expansion(curve: Union[str, Curve], rng: RandomSource, upper: Optional[int] = None) -> ExpansionValue:
    r = random_scalar(curve, rng, upper)
    return ExpansionValue(r, base_mul(r, curve))


def expand_private(curve: Union[str, Curve], p: int, r: int) -> int:
    """(p + r) mod n. A zero result is returned as-is; callers needing a key check it."""
    return (p + r) % get_curve(curve).n


def expand_public(P: CurvePoint, R: CurvePoint) -> CurvePoint:
    return point_add(P, R)


def expand_keypair(keys: KeyPair, expansion: ExpansionValue) -> tuple:
    """Apply one expansion to a key pair, returning (e, E)."""
    return expand_private(keys.curve, keys.private, expansion.r), expand_public(keys.public, expansion.R)
