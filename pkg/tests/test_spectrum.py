import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specflow.spectrum import (
    SpectrumWindow,
    canonical_window,
    d_a,
    quotient_distance,
    shift,
    spectral_part,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def windows(draw, index_lo=None, length=None):
    n = length if length is not None else draw(st.integers(1, 30))
    vals = sorted(draw(st.lists(finite, min_size=n, max_size=n)))
    lo = index_lo if index_lo is not None else draw(st.integers(-50, 50))
    return SpectrumWindow(lo, np.array(vals))


@st.composite
def aligned_triples(draw):
    n = draw(st.integers(1, 25))
    lo = draw(st.integers(-20, 20))
    return tuple(draw(windows(index_lo=lo, length=n)) for _ in range(3))


def test_canonical_window_examples():
    w = canonical_window([-2, -1, 0, 0, 3])
    assert (w.index_lo, w.index_hi) == (-2, 2)
    assert w.values.tolist() == [-2, -1, 0, 0, 3]
    assert w[0] == 0

    w = canonical_window([3, 1, 2])
    assert (w.index_lo, w.index_hi) == (0, 2)
    assert w.values.tolist() == [1, 2, 3]

    w = canonical_window([-1, -3])
    assert (w.index_lo, w.index_hi) == (-2, -1)
    assert w.values.tolist() == [-3, -1]


def test_canonical_window_rejects_empty():
    with pytest.raises(ValueError):
        canonical_window([])


@given(st.lists(finite, min_size=1, max_size=40))
def test_canonical_window_sorted_and_anchored(eigs):
    w = canonical_window(eigs)
    assert np.all(np.diff(w.values) >= 0)
    assert sorted(eigs) == w.values.tolist()
    for j, x in zip(w.indices, w.values):
        assert (x < 0) == (j < 0)


def test_window_rejects_decreasing_values():
    with pytest.raises(ValueError):
        SpectrumWindow(0, [2.0, 1.0])


def test_shift_examples():
    u = SpectrumWindow(0, [1.0, 2.0, 3.0])
    assert shift(u, 0) == u
    v = shift(u, 1)
    assert (v.index_lo, v.index_hi) == (-1, 1)
    assert v.values.tolist() == [1, 2, 3]
    assert v[-1] == u[0]
    assert shift(shift(u, 4), -7) == shift(u, -3)


@given(windows(), st.integers(-100, 100), st.integers(-100, 100), st.integers(-100, 100))
def test_shift_action(u, a, b, j):
    assert shift(shift(u, a), b) == shift(u, a + b)
    w = shift(u, a)
    if j + a in u:
        assert w[j] == u[j + a]


def test_d_a_examples():
    u = SpectrumWindow(0, [0.0, 1.0])
    assert d_a(u, u) == 0
    zeros, ones = SpectrumWindow(-3, np.zeros(7)), SpectrumWindow(-3, np.ones(7))
    assert d_a(zeros, ones) == pytest.approx(math.log(1 + math.sqrt(2)), abs=1e-15)
    assert d_a(zeros, ones) == pytest.approx(0.881374, abs=1e-6)
    # ln(3 + sqrt 10) - ln(1 + sqrt 2), evaluated in log form
    expected = math.log(3 + math.sqrt(10)) - math.log(1 + math.sqrt(2))
    assert d_a(u, SpectrumWindow(0, [0.0, 3.0])) == pytest.approx(expected, abs=1e-14)
    assert expected == pytest.approx(0.937073, abs=1e-6)


def test_d_a_requires_alignment():
    with pytest.raises(ValueError):
        d_a(SpectrumWindow(0, [1.0, 2.0]), SpectrumWindow(1, [1.0, 2.0]))


@given(aligned_triples())
def test_d_a_metric_axioms(triple):
    u, v, w = triple
    assert d_a(u, v) == d_a(v, u)
    assert d_a(u, w) <= d_a(u, v) + d_a(v, w) + 1e-12
    assert (d_a(u, v) == 0) == np.array_equal(u.values, v.values)


@given(aligned_triples(), st.integers(-1000, 1000))
def test_shift_is_isometry(triple, k):
    u, v, _ = triple
    assert d_a(shift(u, k), shift(v, k)) == d_a(u, v)


def test_quotient_distance_examples():
    rng = np.random.default_rng(3)
    u = canonical_window(rng.normal(size=30))
    q = quotient_distance(u, shift(u, 5), max_shift=10)
    assert (q.shift, q.distance) == (5, 0.0)

    zeros, ones = SpectrumWindow(-20, np.zeros(41)), SpectrumWindow(-20, np.ones(41))
    q = quotient_distance(zeros, ones, max_shift=6)
    assert q.shift == 0
    assert q.distance == pytest.approx(math.asinh(1.0), abs=1e-15)

    far = SpectrumWindow(1000, [1.0, 2.0, 3.0])
    q = quotient_distance(SpectrumWindow(0, [1.0, 2.0, 3.0]), far, max_shift=5)
    assert q.distance == math.inf and q.shift is None


@given(aligned_triples())
def test_quotient_below_d_a(triple):
    u, v, _ = triple
    assert quotient_distance(u, v, max_shift=len(u)).distance <= d_a(u, v)


@given(windows(), windows(), st.integers(-15, 15))
def test_quotient_pre_shift_invariance(u, v, a):
    big = len(u) + len(v) + 200
    q = quotient_distance(u, v, max_shift=big)
    qa = quotient_distance(shift(u, a), v, max_shift=big)
    assert qa.distance == q.distance
    if math.isfinite(q.distance):
        # shift k* - a attains the same distance for the pre-shifted pair
        at = quotient_distance(shift(shift(u, a), q.shift - a), v, max_shift=0)
        assert at.distance == q.distance
    qb = quotient_distance(u, shift(v, a), max_shift=big)
    assert qb.distance == q.distance


def test_spectral_part_examples():
    u = canonical_window([-2, -1, 0, 0, 3])
    assert spectral_part(u, (-1, 0)).tolist() == [-1, 0, 0]
    assert spectral_part(u, (10, 20)).tolist() == []
    assert spectral_part(u, (0, 10)).tolist() == [0, 0, 3]
    with pytest.raises(ValueError):
        spectral_part(u, (1, 0))


@settings(max_examples=200)
@given(windows())
def test_json_round_trip(u):
    text = u.to_json()
    assert set(json.loads(text)) == {"index_lo", "values"}
    assert SpectrumWindow.from_json(text) == u


def test_json_round_trip_bounds():
    u = SpectrumWindow(-2, [-1.0, -0.5, 0.1], lower=-1.5, upper=0.25)
    assert SpectrumWindow.from_json(u.to_json()) == u
    with pytest.raises(ValueError):
        SpectrumWindow.from_dict({"index_lo": 0, "values": [1.0], "colour": 1})
