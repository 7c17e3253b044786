"""Finite windows of ordered spectral functions and the arsinh metrics.

A spectrum is a non-decreasing map Z -> R.  Only finitely many values are
ever stored, so a :class:`SpectrumWindow` records a contiguous block of
indices together with the interval ``[lower, upper]`` on which the window is
known to contain *every* eigenvalue.  Windows built from the full spectrum of
a matrix are complete (``lower=-inf``, ``upper=inf``); truncated spectra carry
finite bounds so that matching can ignore values near the cut.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# relative tolerance used to group numerically equal eigenvalues
MULTIPLICITY_RTOL = 1e-9


def ash(x):
    """Elementwise arsinh."""
    return np.arcsinh(x)


def same_eigenvalue(a: float, b: float, rtol: float = MULTIPLICITY_RTOL) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True, eq=False)
class SpectrumWindow:
    """Values ``u(index_lo), ..., u(index_hi)`` of a non-decreasing sequence."""

    index_lo: int
    values: np.ndarray
    lower: float = -math.inf
    upper: float = math.inf

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(vals)):
            raise ValueError("window values must be finite")
        if vals.size > 1 and np.any(np.diff(vals) < 0):
            raise ValueError("window values must be non-decreasing")
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "index_lo", int(self.index_lo))
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))

    @property
    def index_hi(self) -> int:
        return self.index_lo + len(self.values) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.index_lo, self.index_hi + 1)

    @property
    def complete(self) -> bool:
        return self.lower == -math.inf and self.upper == math.inf

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, j: int) -> bool:
        return self.index_lo <= j <= self.index_hi

    def __getitem__(self, j: int) -> float:
        if j not in self:
            raise IndexError(f"index {j} outside window {self.index_lo}..{self.index_hi}")
        return float(self.values[j - self.index_lo])

    def __eq__(self, other):
        if not isinstance(other, SpectrumWindow):
            return NotImplemented
        return (
            self.index_lo == other.index_lo
            and self.lower == other.lower
            and self.upper == other.upper
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.index_lo, self.values.tobytes(), self.lower, self.upper))

    def __repr__(self):
        return (
            f"SpectrumWindow(index_lo={self.index_lo}, index_hi={self.index_hi}, "
            f"values={self.values.tolist()!r})"
        )

    def restrict(self, lo: int, hi: int) -> "SpectrumWindow":
        """Sub-window on ``lo..hi`` (must lie inside the window)."""
        if lo not in self or hi not in self or hi < lo:
            raise IndexError(f"range {lo}..{hi} not inside {self.index_lo}..{self.index_hi}")
        start = lo - self.index_lo
        return SpectrumWindow(lo, self.values[start : start + hi - lo + 1], self.lower, self.upper)

    def to_dict(self) -> dict:
        d = {"index_lo": self.index_lo, "values": [float(x) for x in self.values]}
        if self.lower != -math.inf:
            d["lower"] = self.lower
        if self.upper != math.inf:
            d["upper"] = self.upper
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumWindow":
        unknown = set(d) - {"index_lo", "values", "lower", "upper"}
        if unknown:
            raise ValueError(f"unknown window keys: {sorted(unknown)}")
        if not isinstance(d.get("index_lo"), int) or isinstance(d.get("index_lo"), bool):
            raise ValueError("index_lo must be an integer")
        if not isinstance(d.get("values"), list):
            raise ValueError("values must be a list")
        return cls(
            d["index_lo"],
            np.array(d["values"], dtype=float),
            d.get("lower", -math.inf),
            d.get("upper", math.inf),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SpectrumWindow":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ConfDistance:
    """Minimising shift and distance in the shift quotient.

    ``distance == d_a(shift(u, shift), v)`` over the compared overlap; a
    distance of ``inf`` means no admissible shift had enough overlap.
    """

    shift: int | None
    distance: float


def canonical_window(eigs: Iterable[float], lower: float = -math.inf, upper: float = math.inf) -> SpectrumWindow:
    """Sort ``eigs`` and anchor index 0 at the smallest value ``>= 0``."""
    vals = np.sort(np.asarray(list(eigs) if not isinstance(eigs, np.ndarray) else eigs, dtype=float).reshape(-1))
    if vals.size == 0:
        raise ValueError("cannot build a window from an empty multiset")
    n_neg = int(np.count_nonzero(vals < 0))
    return SpectrumWindow(-n_neg, vals, lower, upper)


def shift(u: SpectrumWindow, k: int) -> SpectrumWindow:
    """Group action ``(u.k)(j) = u(j + k)``."""
    return SpectrumWindow(u.index_lo - int(k), u.values, u.lower, u.upper)


def d_a(u: SpectrumWindow, v: SpectrumWindow) -> float:
    """Sup of ``|arsinh u(j) - arsinh v(j)|`` over a shared index range."""
    if u.index_lo != v.index_lo or len(u) != len(v):
        raise ValueError(
            f"index ranges differ: {u.index_lo}..{u.index_hi} vs {v.index_lo}..{v.index_hi}"
        )
    if len(u) == 0:
        return 0.0
    return float(np.max(np.abs(ash(u.values) - ash(v.values))))


def _overlap_sup(au: np.ndarray, u_lo: int, av: np.ndarray, v_lo: int, k: int):
    """Compare ``u(j + k)`` with ``v(j)``; returns (sup, overlap length)."""
    # v index j pairs with u index j + k
    lo = max(v_lo, u_lo - k)
    hi = min(v_lo + len(av) - 1, u_lo + len(au) - 1 - k)
    if hi < lo:
        return math.inf, 0
    a = au[lo + k - u_lo : hi + k - u_lo + 1]
    b = av[lo - v_lo : hi - v_lo + 1]
    return float(np.max(np.abs(a - b))), hi - lo + 1


def quotient_distance(
    u: SpectrumWindow, v: SpectrumWindow, max_shift: int, min_overlap: int | None = None
) -> ConfDistance:
    """Minimise the overlap sup-distance between ``shift(u, k)`` and ``v``.

    Shifts range over ``|k| <= max_shift``; only shifts whose overlap has at
    least ``min_overlap`` indices (default: half the shorter window) count.
    Ties go to the smallest ``|k|``, then the smaller ``k``.
    """
    if max_shift < 0:
        raise ValueError("max_shift must be non-negative")
    if min_overlap is None:
        min_overlap = max(1, min(len(u), len(v)) // 2)
    au, av = ash(u.values), ash(v.values)
    best_k, best = None, math.inf
    for k in sorted(range(-max_shift, max_shift + 1), key=lambda k: (abs(k), k)):
        dist, n = _overlap_sup(au, u.index_lo, av, v.index_lo, k)
        if n >= min_overlap and dist < best:
            best_k, best = k, dist
    return ConfDistance(best_k, best)


def spectral_part(u: SpectrumWindow, interval: tuple[float, float]) -> np.ndarray:
    """Values of ``u`` inside the closed interval, with multiplicity."""
    a, b = interval
    if a > b:
        raise ValueError("interval must satisfy a <= b")
    lo = np.searchsorted(u.values, a, side="left")
    hi = np.searchsorted(u.values, b, side="right")
    return np.array(u.values[lo:hi])


def multiplicity_blocks(u: SpectrumWindow, rtol: float = MULTIPLICITY_RTOL) -> list[tuple[int, int]]:
    """Maximal index blocks of numerically equal values, as (first, last)."""
    blocks = []
    start = u.index_lo
    vals = u.values
    for i in range(1, len(vals)):
        if not same_eigenvalue(vals[i - 1], vals[i], rtol):
            blocks.append((start, u.index_lo + i - 1))
            start = u.index_lo + i
    if len(vals):
        blocks.append((start, u.index_hi))
    return blocks
