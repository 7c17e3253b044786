import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specflow.torus import (
    UNIT_SHEAR,
    FlatTorus,
    as_unimodular,
    int_det,
    lattice_enumerate,
    pullback,
    standard_torus,
    torus_spectrum,
)


def _smallest_abs(window, k):
    return np.sort(np.abs(window.values))[:k]


def test_circle_antiperiodic():
    w = torus_spectrum(standard_torus(1, [1]), 4)
    assert (w.index_lo, w.index_hi) == (-4, 3)
    expected = math.pi * np.array([-7, -5, -3, -1, 1, 3, 5, 7])
    assert np.allclose(w.values, expected, rtol=1e-14, atol=0)
    assert w[0] == pytest.approx(math.pi, abs=1e-12)


def test_circle_periodic_has_kernel():
    w = torus_spectrum(standard_torus(1, [0]), 2)
    assert w.values.tolist().count(0.0) == 1
    assert np.allclose(_smallest_abs(w, 5), [0, 2 * math.pi, 2 * math.pi, 4 * math.pi, 4 * math.pi])


def test_three_torus_examples():
    w = torus_spectrum(standard_torus(3, [1, 0, 0]), 4)
    assert w[0] == pytest.approx(math.pi, abs=1e-12)
    assert w[-1] == pytest.approx(-math.pi, abs=1e-12)
    # xi = (+-1/2, 0, 0): two points, one per sign each, multiplicity 1 per point
    assert np.sum(np.isclose(w.values, math.pi)) == 2

    w = torus_spectrum(standard_torus(3, [1, 1, 0]), 4)
    assert w[0] == pytest.approx(math.pi * math.sqrt(2), abs=1e-12)
    assert np.sum(np.isclose(w.values, math.pi * math.sqrt(2))) == 4


def test_untwisted_three_torus_kernel():
    w = torus_spectrum(standard_torus(3, [0, 0, 0]), 3)
    assert w.values.tolist().count(0.0) == 2
    assert w[0] == 0.0 and w[1] == 0.0 and w[2] == pytest.approx(2 * math.pi)


def test_window_bounds_hold_whole_shells():
    w = torus_spectrum(standard_torus(2, [1, 1]), 5)
    assert w.upper == -w.lower and w.upper >= w.values.max()
    # the bound sits at a shell: no eigenvalue strictly between the window max and the bound
    bigger = torus_spectrum(standard_torus(2, [1, 1]), 40)
    inside = bigger.values[np.abs(bigger.values) <= w.upper]
    assert np.array_equal(np.sort(inside), w.values)


def test_pullback_example():
    base = standard_torus(3, [1, 1, 0])
    pulled = pullback(base, UNIT_SHEAR)
    assert pulled.delta == (1, 0, 0)
    assert np.array_equal(pulled.gram, [[1, 1, 0], [1, 2, 0], [0, 0, 1]])
    a, b = torus_spectrum(base, 12), torus_spectrum(pulled, 12)
    assert a == b
    c = torus_spectrum(standard_torus(3, [1, 0, 0]), 12)
    assert c[0] == pytest.approx(math.pi) and a[0] == pytest.approx(math.pi * math.sqrt(2))


def test_identity_pullback():
    t = FlatTorus(np.array([[2.0, 0.3], [0.3, 1.0]]), (1, 0))
    assert pullback(t, np.eye(2, dtype=int)) == t


def _random_unimodular(rng, n, moves=6):
    f = np.eye(n, dtype=np.int64)
    for _ in range(moves):
        i, j = rng.choice(n, size=2, replace=False)
        e = np.eye(n, dtype=np.int64)
        e[i, j] = rng.choice([-1, 1])
        f = f @ e
    if n > 1 and rng.random() < 0.5:
        p = np.eye(n, dtype=np.int64)[rng.permutation(n)]
        if int_det(p.tolist()) == -1:
            p[0] = -p[0]
        f = f @ p
    return f


def _random_spd(rng, n):
    m = rng.normal(size=(n, n))
    return m @ m.T + n * np.eye(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_pullback_isospectral(n, seed):
    rng = np.random.default_rng(seed)
    torus = FlatTorus(_random_spd(rng, n), tuple(int(x) for x in rng.integers(0, 2, n)))
    f = _random_unimodular(rng, n) if n > 1 else np.eye(1, dtype=int)
    count = 6
    a, b = torus_spectrum(torus, count), torus_spectrum(pullback(torus, f), count)
    idx = range(-count, count)
    assert np.allclose([a[j] for j in idx], [b[j] for j in idx], rtol=1e-10, atol=0)


@given(st.floats(0.2, 5.0), st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_scaling_covariance(c, seed):
    rng = np.random.default_rng(seed)
    g = _random_spd(rng, 2)
    delta = (1, 1)
    a = torus_spectrum(FlatTorus(g, delta), 5)
    b = torus_spectrum(FlatTorus(c * c * g, delta), 5)
    for j in range(-5, 5):
        assert b[j] == pytest.approx(a[j] / c, rel=1e-10)


def test_lattice_enumerate_examples():
    pts = lattice_enumerate(np.eye(1), [0.5], 2.0)
    assert [p[0] for p, _ in pts] == [-0.5, 0.5, -1.5, 1.5]
    assert [r for _, r in pts] == [0.5, 0.5, 1.5, 1.5]

    pts = lattice_enumerate(np.eye(2), [0.0, 0.0], 1.0)
    assert len(pts) == 5
    assert pts[0][1] == 0.0
    assert [tuple(p) for p, _ in pts[1:]] == [(-1, 0), (0, -1), (0, 1), (1, 0)]

    pts = lattice_enumerate(np.eye(3), [0.5, 0.5, 0.0], 1.0)
    assert len(pts) == 4
    assert all(r == pytest.approx(1 / math.sqrt(2)) for _, r in pts)


def _brute_force(Q, s, radius):
    n = len(s)
    G = np.linalg.inv(Q)
    box = [int(math.ceil(radius * math.sqrt(G[i, i]))) + 1 for i in range(n)]
    out = []
    for m in itertools.product(*(range(-b, b + 1) for b in box)):
        xi = np.array(m, dtype=float) + s
        if xi @ Q @ xi <= radius * radius * (1 + 1e-12):
            out.append(tuple(m))
    return sorted(out)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.floats(0.3, 3.0))
def test_lattice_enumerate_complete(n, seed, radius):
    rng = np.random.default_rng(seed)
    Q = np.linalg.inv(_random_spd(rng, n) / n)
    s = rng.integers(0, 2, n) / 2
    got = sorted(tuple(int(round(x)) for x in p - s) for p, _ in lattice_enumerate(Q, s, radius))
    assert got == _brute_force(Q, s, radius)
    norms = [r for _, r in lattice_enumerate(Q, s, radius)]
    assert norms == sorted(norms)


def test_int_det():
    assert int_det([[1, 1, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert int_det([[0, 1], [1, 0]]) == -1
    assert int_det([[2, 0], [0, 3]]) == 6
    assert int_det([[1, 2], [2, 4]]) == 0
    big = np.random.default_rng(0).integers(-5, 6, size=(6, 6))
    assert int_det(big.tolist()) == round(np.linalg.det(big))


def test_non_unimodular_maps_rejected():
    t = standard_torus(2, [1, 0])
    with pytest.raises(ValueError):
        pullback(t, [[2, 0], [0, 1]])
    with pytest.raises(ValueError):
        pullback(t, [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        as_unimodular([[1.5, 0], [0, 1]])
    with pytest.raises(ValueError):
        pullback(t, np.eye(3, dtype=int))


def test_torus_validation_and_json():
    with pytest.raises(ValueError):
        FlatTorus(np.array([[1.0, 2.0], [2.0, 1.0]]), (0, 0))
    with pytest.raises(ValueError):
        FlatTorus(np.eye(2), (0, 2))
    t = FlatTorus(np.array([[2.0, 0.5], [0.5, 1.0]]), (1, 0))
    assert FlatTorus.from_dict(t.to_dict()) == t
    with pytest.raises(ValueError):
        FlatTorus.from_dict({**t.to_dict(), "n": 3})


def _fd_circle_oracle(length, antiperiodic, grid, k):
    """sqrt of the k lowest eigenvalues of a second-order FD -d^2/dx^2."""
    h = length / grid
    a = np.diag(np.full(grid, 2.0)) - np.eye(grid, k=1) - np.eye(grid, k=-1)
    corner = 1.0 if antiperiodic else -1.0
    a[0, -1] = a[-1, 0] = corner
    ev = np.linalg.eigvalsh(a / (h * h))
    return np.sqrt(np.clip(np.sort(ev)[:k], 0, None))


@pytest.mark.parametrize("g,delta", [(1.0, 1), (2.5, 1), (0.7, 0)])
def test_circle_against_finite_difference(g, delta):
    w = torus_spectrum(FlatTorus(np.array([[g]]), (delta,)), 12)
    closed = _smallest_abs(w, 20)
    fd = _fd_circle_oracle(math.sqrt(g), delta == 1, 2048, 20)
    mask = closed > 0
    assert np.all(np.abs(fd[mask] - closed[mask]) <= 1e-4 * closed[mask])
    assert np.all(fd[~mask] < 1e-6)

