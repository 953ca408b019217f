"""Timing harness for key generation, key expansion, signing and verification."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, List, Optional, Sequence

from . import ecdsa
from .ec_core import NIST_CURVES, CURVE_NAMES, get_curve
from .keymgmt import draw_expansion, expand_private, expand_public, generate_keypair
from .randomness import RandomSource, make_rng

OPERATIONS = ("keygen", "key_expand", "sign", "verify")
MIN_ITERATIONS = 30
MIN_WARMUP = 5
CLOCK = "perf_counter"


@dataclass(frozen=True)
class BenchResult:
    op: str
    curve: str
    iterations: int
    mean_ms: float
    median_ms: float
    stddev_ms: float
    clock_resolution_s: float

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def _case(op: str, curve: str, rng: RandomSource) -> Callable[[], Callable[[], object]]:
    """Return a factory: each call prepares fresh inputs (untimed) and hands back the timed thunk."""
    n = get_curve(curve).n

    if op == "keygen":
        return lambda: (lambda: generate_keypair(curve, rng))

    if op == "key_expand":
        def prepare():
            keys = generate_keypair(curve, rng)

            def run():
                ex = draw_expansion(curve, rng)
                return expand_private(curve, keys.private, ex.r), expand_public(keys.public, ex.R)
            return run
        return prepare

    if op == "sign":
        def prepare():
            keys = generate_keypair(curve, rng)
            m = rng.randint(0, n - 1)
            return lambda: ecdsa.sign(curve, m, keys.private, rng)
        return prepare

    if op == "verify":
        def prepare():
            keys = generate_keypair(curve, rng)
            m = rng.randint(0, n - 1)
            sig = ecdsa.sign(curve, m, keys.private, rng)
            return lambda: ecdsa.verify(m, sig, keys.public)
        return prepare

    raise ValueError(f"unknown operation {op!r}; choose from {', '.join(OPERATIONS)}")


def run_bench(
    operations: Iterable[str] = OPERATIONS,
    curves: Iterable[str] = NIST_CURVES,
    iterations: int = 100,
    warmup: int = 10,
    rng: Optional[RandomSource] = None,
    workers: int = 1,
) -> List[BenchResult]:
    """Time each (operation, curve) pair; results come out in registry curve order."""
    if workers != 1:
        raise ValueError("timed sections are strictly single-threaded; workers must be 1")
    if iterations < MIN_ITERATIONS:
        raise ValueError(f"iterations must be >= {MIN_ITERATIONS}")
    if warmup < MIN_WARMUP:
        raise ValueError(f"warmup must be >= {MIN_WARMUP}")
    operations = list(operations)
    for op in operations:
        if op not in OPERATIONS:
            raise ValueError(f"unknown operation {op!r}; choose from {', '.join(OPERATIONS)}")
    wanted = [get_curve(c).name for c in curves]
    ordered = [c for c in CURVE_NAMES if c in wanted]
    rng = rng if rng is not None else make_rng()
    resolution = time.get_clock_info(CLOCK).resolution

    results = []
    for curve in ordered:
        get_curve(curve)
        ecdsa.sign(curve, 1, 1, rng)  # builds the base-point table outside the timed loop
        for op in operations:
            prepare = _case(op, curve, rng)
            for _ in range(warmup):
                prepare()()
            samples = []
            for _ in range(iterations):
                run = prepare()
                start = time.perf_counter()
                run()
                samples.append((time.perf_counter() - start) * 1000.0)
            results.append(BenchResult(
                op, curve, iterations,
                statistics.fmean(samples), statistics.median(samples), statistics.stdev(samples),
                resolution,
            ))
    return results


def to_csv(results: Sequence[BenchResult]) -> str:
    buf = io.StringIO()
    fields = list(BenchResult.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(asdict(r))
    return buf.getvalue()
