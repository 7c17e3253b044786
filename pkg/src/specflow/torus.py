"""Dirac spectra of flat spin tori ``R^n / Z^n``.

A flat torus is a Gram matrix ``G`` (the metric on the unit lattice) and a
spin structure ``delta in {0,1}^n``; ``delta_i = 1`` means spinors are
antiperiodic around the i-th generator.  The Dirac eigenvalues are
``+-2 pi |xi|`` with ``xi`` running over the shifted dual lattice
``Z^n + delta/2`` and ``|xi|^2 = xi^T G^{-1} xi``.  Each sign of a nonzero
``xi`` carries multiplicity ``2^(floor(n/2) - 1)``; ``xi = 0`` (only when
``delta = 0``) gives the eigenvalue 0 with the full spinor rank
``2^floor(n/2)``.  For ``n = 1`` the spectrum is the signed set
``{2 pi xi / sqrt(G)}``, each simple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrum import SpectrumWindow, canonical_window

_SHELL_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class FlatTorus:
    gram: np.ndarray
    delta: tuple[int, ...]

    def __post_init__(self):
        g = np.array(self.gram, dtype=float)
        if g.ndim == 0:
            g = g.reshape(1, 1)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise ValueError("gram must be a non-empty square matrix")
        if not np.allclose(g, g.T, rtol=1e-12, atol=1e-12):
            raise ValueError("gram must be symmetric")
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise ValueError("gram must be positive definite") from None
        delta = tuple(int(d) for d in self.delta)
        if len(delta) != g.shape[0] or any(d not in (0, 1) for d in delta):
            raise ValueError("delta must be a 0/1 vector of length n")
        g.flags.writeable = False
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def __eq__(self, other):
        if not isinstance(other, FlatTorus):
            return NotImplemented
        return self.delta == other.delta and np.array_equal(self.gram, other.gram)

    def to_dict(self) -> dict:
        return {"n": self.n, "gram": self.gram.tolist(), "delta": list(self.delta)}

    @classmethod
    def from_dict(cls, d: dict) -> "FlatTorus":
        unknown = set(d) - {"n", "gram", "delta"}
        if unknown:
            raise ValueError(f"unknown torus keys: {sorted(unknown)}")
        torus = cls(np.array(d["gram"], dtype=float), tuple(d["delta"]))
        if "n" in d and d["n"] != torus.n:
            raise ValueError("n does not match gram dimension")
        return torus


def standard_torus(n: int, delta) -> FlatTorus:
    return FlatTorus(np.eye(n), tuple(delta))


def lattice_enumerate(inverse_gram, shift, radius: float) -> list[tuple[np.ndarray, float]]:
    """All ``xi in Z^n + shift`` with ``sqrt(xi^T Q xi) <= radius``, ``Q = inverse_gram``.

    Fincke-Pohst enumeration over a Cholesky factorisation of ``Q``, sorted by
    norm; equal norms (to a relative 1e-12) are ordered lexicographically by
    the integer part ``xi - shift``.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    Q = np.atleast_2d(np.asarray(inverse_gram, dtype=float))
    n = Q.shape[0]
    s = np.asarray(shift, dtype=float).reshape(n)
    Rm = np.linalg.cholesky(Q).T  # Q = R^T R, R upper triangular
    r2 = radius * radius * (1 + 1e-12)
    found: list[tuple[tuple[int, ...], float]] = []
    m = [0] * n

    # coordinate i contributes (R_ii (xi_i + c_i))^2 with c_i from coordinates > i
    def recurse(i: int, partial: float):
        centre = sum(Rm[i, j] * (m[j] + s[j]) for j in range(i + 1, n)) / Rm[i, i]
        room = math.sqrt(max(0.0, r2 - partial)) / Rm[i, i]
        lo = math.ceil(-centre - room - s[i])
        hi = math.floor(-centre + room - s[i])
        for mi in range(lo, hi + 1):
            term = (Rm[i, i] * (mi + s[i] + centre)) ** 2
            if partial + term > r2:
                continue
            m[i] = mi
            if i == 0:
                found.append((tuple(m), partial + term))
            else:
                recurse(i - 1, partial + term)
        m[i] = 0

    recurse(n - 1, 0.0)
    out = []
    for ints, _ in found:
        xi = np.array(ints, dtype=float) + s
        nrm = math.sqrt(max(0.0, float(xi @ Q @ xi)))
        if nrm <= radius * (1 + 1e-12):
            out.append((ints, xi, nrm))
    out.sort(key=lambda r: r[2])
    # lexicographic order within numerically equal norms
    result, i = [], 0
    while i < len(out):
        j = i + 1
        while j < len(out) and out[j][2] - out[i][2] <= 1e-12 * max(1.0, out[i][2]):
            j += 1
        group = sorted(out[i:j], key=lambda r: r[0])
        result.extend((xi, nrm) for _, xi, nrm in group)
        i = j
    return result


def _rank(n: int) -> int:
    return 2 ** (n // 2)


def torus_spectrum(torus: FlatTorus, count: int) -> SpectrumWindow:
    """Canonical window with at least ``count`` eigenvalues on each side of 0.

    Whole norm shells are included, so the window holds every eigenvalue in
    ``[-2 pi r, 2 pi r]`` and carries those bounds.
    """
    if count < 1:
        raise ValueError("count must be positive")
    n = torus.n
    Q = np.linalg.inv(torus.gram)
    Q = (Q + Q.T) / 2
    shift = np.array(torus.delta, dtype=float) / 2
    per_sign = 1 if n == 1 else _rank(n) // 2
    # volume heuristic for the initial radius, then grow until enough points
    unit_ball = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    vol = unit_ball * math.sqrt(np.linalg.det(torus.gram))
    needed = count if n == 1 else math.ceil(count / per_sign)
    radius = max((2.0 * needed / vol) ** (1.0 / n), 1.0)
    while True:
        pts = lattice_enumerate(Q, shift, radius)
        eigs = _dirac_values(pts, n, per_sign, torus.gram)
        pos = np.sort(eigs[eigs > 0])
        neg = np.sort(-eigs[eigs < 0])
        if len(pos) >= count and len(neg) >= count:
            break
        radius *= 1.5
    cut = max(pos[count - 1], neg[count - 1]) * (1 + _SHELL_RTOL)
    keep = eigs[np.abs(eigs) <= cut]
    return canonical_window(keep, lower=-cut, upper=cut)


def _dirac_values(pts, n: int, per_sign: int, gram: np.ndarray) -> np.ndarray:
    vals = []
    for xi, nrm in pts:
        if n == 1:
            vals.append(2 * math.pi * xi[0] / math.sqrt(gram[0, 0]))
        elif nrm == 0.0:
            vals.extend([0.0] * _rank(n))
        else:
            lam = 2 * math.pi * nrm
            vals.extend([lam] * per_sign + [-lam] * per_sign)
    return np.array(vals, dtype=float)


def int_det(f) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    a = [[int(x) for x in row] for row in f]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def as_unimodular(f) -> np.ndarray:
    arr = np.asarray(f)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("map must be a square matrix")
    if not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ValueError("map must have integer entries")
    ints = arr.astype(np.int64)
    if int_det(ints.tolist()) != 1:
        raise ValueError("map must have determinant 1")
    return ints


def pullback(torus: FlatTorus, f) -> FlatTorus:
    """Pull the metric and spin structure back along ``x -> f x``.

    ``gram' = f^T G f`` and ``delta' = f^T delta (mod 2)``.
    """
    f = as_unimodular(f)
    if f.shape[0] != torus.n:
        raise ValueError("map dimension does not match torus")
    g = f.T.astype(float) @ torus.gram @ f.astype(float)
    delta = tuple(int(x) % 2 for x in f.T @ np.array(torus.delta, dtype=np.int64))
    return FlatTorus((g + g.T) / 2, delta)


UNIT_SHEAR = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
