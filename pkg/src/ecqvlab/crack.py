"""Recovering a CA private key from weak ECQV issuances.

The reconstruction private value is w = h*r + c (mod n). When r is small,
a device that holds (w, h) can search r and read off c. If additionally
h*r + c < n, the reduction never happened and c = w - h*r over the
integers. The probability of that event, for h uniform on [1, H] and r
uniform on [1, R], is

    Pr(h*r < n - c) = (1 / HR) * sum_{h=1}^{min(H, n-c-1)} min(R, floor((n-c-1) / h))

which ``crack_probability_exact`` evaluates. ``crack_probability_enum`` and
``crack_probability_montecarlo`` are independent checks of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .ec_core import INFINITY, Curve, CurvePoint, _add, _base_mul, _mul, get_curve, is_on_curve
from .errors import NotFound, NotOnCurve, TooLarge
from .randomness import RandomSource

EXACT_TERM_BUDGET = 10 ** 8
ENUM_PAIR_BUDGET = 10 ** 8
MIN_TRIALS = 1000
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class CrackParams:
    H: int  # h is uniform on [1, H]
    R: int  # r is uniform on [1, R]
    n: int
    c: int

    def __post_init__(self):
        if self.H < 1 or self.R < 1:
            raise ValueError("H and R must be at least 1")
        if self.n < 2 or not 1 <= self.c < self.n:
            raise ValueError("need n >= 2 and 1 <= c < n")


@dataclass(frozen=True)
class Probability:
    """count favourable pairs out of total = H*R, kept unreduced."""

    count: int
    total: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.total)

    def __float__(self) -> float:
        return self.count / self.total

    def __str__(self) -> str:
        return f"{self.count}/{self.total}"


@dataclass(frozen=True)
class MonteCarloEstimate:
    hits: int
    trials: int

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)


def crack_probability_exact(params: CrackParams, *, budget: int = EXACT_TERM_BUDGET) -> Probability:
    bound = params.n - params.c - 1  # largest admissible product h*r
    terms = min(params.H, bound)
    full = min(terms, bound // params.R)  # every h up to here admits all R values of r
    if terms - full > budget:
        raise TooLarge(f"{terms - full} summation terms exceed the budget of {budget}")
    count = full * params.R + sum(bound // h for h in range(full + 1, terms + 1))
    return Probability(count, params.H * params.R)


def crack_probability_enum(params: CrackParams, *, budget: int = ENUM_PAIR_BUDGET) -> Probability:
    """Brute force: test h*r + c < n for every pair in [1, H] x [1, R]."""
    H, R, n, c = params.H, params.R, params.n, params.c
    if H * R > budget:
        raise TooLarge(f"{H * R} pairs exceed the budget of {budget}")
    if H * R + n < _INT64_SAFE:
        products = np.outer(np.arange(1, H + 1, dtype=np.int64), np.arange(1, R + 1, dtype=np.int64))
        count = int(np.count_nonzero(products + c < n))
    else:
        count = 0
        for h in range(1, H + 1):
            for r in range(1, R + 1):
                if h * r + c < n:
                    count += 1
    return Probability(count, H * R)


def crack_probability_montecarlo(params: CrackParams, trials: int, rng: RandomSource) -> MonteCarloEstimate:
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials")
    H, R, n, c = params.H, params.R, params.n, params.c
    draw = rng.randint
    hits = sum(1 for _ in range(trials) if draw(1, H) * draw(1, R) + c < n)
    return MonteCarloEstimate(hits, trials)


def crack_probability_upper_bound(params: CrackParams) -> float:
    """Harmonic-sum bound for parameters too large to sum term by term."""
    bound = params.n - params.c - 1
    terms = min(params.H, bound)
    if terms < 1:
        return 0.0
    harmonic = 1 + math.log(terms)
    return min(1.0, min(params.R * terms, bound * harmonic) / (params.H * params.R))


@dataclass(frozen=True)
class Recovery:
    c: int
    r: int
    wrapped: bool  # h*r + c >= n, i.e. w was actually reduced


def attack_recover_ca_key(
    curve: Union[str, Curve],
    w: int,
    h: int,
    ca_public: CurvePoint,
    r_max: int,
    *,
    allow_wrap: bool = True,
) -> Recovery:
    """Find the smallest r in [1, r_max] with (w - h*r)G = C and return c.

    Equivalent to trying every r in turn, but done as a baby-step
    giant-step search for r*(hG) = wG - C, so the cost is about
    2*sqrt(r_max) point additions. With ``allow_wrap=False`` a hit only
    counts when w - h*r is already the positive integer c, the case the
    probability model above describes.
    """
    curve = get_curve(curve)
    n = curve.n
    if ca_public is INFINITY or not is_on_curve(ca_public):
        raise NotOnCurve("CA public key must be a finite point on its curve")
    if r_max < 1:
        raise NotFound("empty search budget")
    h %= n
    w %= n
    C = (ca_public.x, ca_public.y)
    neg = lambda P: None if P is None else (P[0], (-P[1]) % curve.p)
    B = _base_mul(curve, h)
    # search j = r - 1 in [0, r_max - 1] with j*B = wG - C - B
    target = _add(curve, _add(curve, _base_mul(curve, w), neg(C)), neg(B))

    m = math.isqrt(r_max - 1) + 1
    baby: dict = {}
    P = None
    for j in range(m):
        baby.setdefault(P, j)
        P = _add(curve, P, B)
    stride = neg(_mul(curve, m, B))

    Y = target
    for i in range(m):
        j = baby.get(Y)
        if j is not None:
            r = i * m + j + 1
            if r > r_max:
                break
            c = (w - h * r) % n
            wrapped = w - h * r != c
            if wrapped and not allow_wrap:
                break
            return Recovery(c, r, wrapped)
        Y = _add(curve, Y, stride)
    raise NotFound(f"no r in [1, {r_max}] reproduces the CA public key")
