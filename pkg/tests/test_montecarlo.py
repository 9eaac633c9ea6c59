import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from rotorsos.montecarlo import McEstimate, RunningStats, chunk_sizes, substream


def test_substreams_are_reproducible_and_distinct():
    a = substream(7, 0).standard_normal(5)
    assert np.array_equal(a, substream(7, 0).standard_normal(5))
    assert not np.array_equal(a, substream(7, 1).standard_normal(5))
    assert not np.array_equal(a, substream(8, 0).standard_normal(5))


def test_chunk_plan_covers_samples():
    plan = list(chunk_sizes(150_000, 65536))
    assert [i for i, _ in plan] == [0, 1, 2]
    assert sum(s for _, s in plan) == 150_000


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=2, max_size=60), st.integers(1, 59))
def test_merged_stats_match_numpy(values, split):
    values = np.array(values)
    split = min(split, len(values) - 1)
    a, b = RunningStats(), RunningStats()
    a.add_batch(values[:split])
    b.add_batch(values[split:])
    a.merge(b)
    assert np.isclose(a.mean, values.mean(), atol=1e-9)
    assert np.isclose(a.variance, values.var(ddof=1), rtol=1e-8, atol=1e-8)


def test_vector_valued_stats():
    s = RunningStats((3,))
    data = np.arange(30, dtype=float).reshape(10, 3)
    s.add_batch(data[:4])
    s.add_batch(data[4:])
    assert np.allclose(s.mean, data.mean(0))
    assert np.allclose(s.std_err, data.std(0, ddof=1) / np.sqrt(10))


def test_estimate_within():
    e = McEstimate(1.0, 0.1, 100)
    assert e.within(1.35)
    assert not e.within(1.5)
    assert e.within(1.5, floor=0.2)
