import json
import math

import numpy as np
import pytest

from operator_ssa.reporting import dumps, format_real, render_summary, summarize


def test_format_real_uses_17_significant_digits():
    assert format_real(0.1) == "0.10000000000000001"
    assert format_real(1.0) == "1"
    assert float(format_real(math.pi)) == math.pi


@pytest.mark.parametrize("value", [math.inf, -math.inf, math.nan])
def test_format_real_rejects_non_finite(value):
    with pytest.raises(ValueError):
        format_real(value)


def test_dumps_keeps_insertion_order_and_types():
    record = {'b': 1, 'a': [0.5, True, None], 'z': np.float64(2.5), 'c': 1 - 2j, 's': "x\"y"}
    text = dumps(record)
    assert text == '{"b": 1, "a": [0.5, true, null], "z": 2.5, "c": [1, -2], "s": "x\\"y"}'
    assert list(json.loads(text)) == ['b', 'a', 'z', 'c', 's']


def test_dumps_handles_numpy_arrays():
    assert dumps(np.array([1.0, 2.0])) == "[1, 2]"
    assert dumps({'n': np.int64(3), 'ok': np.bool_(False)}) == '{"n": 3, "ok": false}'


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        dumps({'x': object()})


def test_summarize_counts_verdicts_and_extremes():
    records = [
        {'trial_index': 0, 'verdict': 'pass', 'scalars': {'margin': 0.5, 'count': 3}},
        {'trial_index': 1, 'verdict': 'fail', 'scalars': {'margin': -0.25}},
        {'trial_index': 2, 'verdict': 'anomaly', 'scalars': {}},
    ]
    summary, worst = summarize(records)
    assert summary == {'trials': 3, 'passed': 1, 'failures': 1, 'anomalies': 1}
    margin = worst.set_index('scalar').loc['margin']
    assert margin['min'] == -0.25 and margin['max'] == 0.5

    table = render_summary(summary, worst)
    assert 'failures' in table and 'margin' in table and '+--' in table


def test_summarize_empty_campaign():
    summary, worst = summarize([])
    assert summary['trials'] == 0
    assert worst.empty
