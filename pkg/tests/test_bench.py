import csv
import io
import json
import random

import pytest

from ecqvlab import bench


def _small(**kw):
    args = dict(operations=["keygen", "verify"], curves=["P-224", "P-192"], iterations=30, warmup=5,
                rng=random.Random(3))
    args.update(kw)
    return bench.run_bench(**args)


def test_result_shape_and_order():
    results = _small()
    assert [(r.op, r.curve) for r in results] == [
        ("keygen", "P-192"), ("verify", "P-192"), ("keygen", "P-224"), ("verify", "P-224"),
    ]
    for r in results:
        assert r.iterations == 30
        assert 0 < r.median_ms and 0 < r.mean_ms and r.stddev_ms >= 0
        assert r.clock_resolution_s > 0


@pytest.mark.parametrize("kw", [
    {"iterations": 29}, {"warmup": 4}, {"workers": 2}, {"operations": ["decrypt"]},
])
def test_rejects_bad_configuration(kw):
    with pytest.raises(ValueError):
        _small(**kw)


def test_unknown_curve():
    from ecqvlab.errors import UnknownCurve
    with pytest.raises(UnknownCurve):
        _small(curves=["P-999"])


def test_json_and_csv_round_trip():
    results = _small(operations=["key_expand"], curves=["TOY-97"])
    record = json.loads(results[0].to_json())
    assert record["op"] == "key_expand" and record["curve"] == "TOY-97"
    rows = list(csv.DictReader(io.StringIO(bench.to_csv(results))))
    assert len(rows) == 1
    assert float(rows[0]["median_ms"]) == pytest.approx(results[0].median_ms)
