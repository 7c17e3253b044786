"""Aligning nearby spectrum windows by an integer shift.

Conventions: ``match_windows(u, v)`` returns the ``k`` with
``v(j) ~ u(j + k)``, i.e. ``v`` is close to ``shift(u, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrum import SpectrumWindow, ash, multiplicity_blocks


class MatchError(ValueError):
    pass


class NoMatch(MatchError):
    def __init__(self, msg="no shift brings the windows within eps"):
        super().__init__(msg)


class Ambiguous(MatchError):
    def __init__(self, k1: int, k2: int):
        self.shifts = (k1, k2)
        super().__init__(f"shifts {k1} and {k2} both qualify; eps exceeds the cover radius")


@dataclass(frozen=True)
class ShiftMatch:
    """``certified_sup`` is the arsinh sup-distance between ``u`` and
    ``shift(v, -shift)`` on ``matched_range`` (indices of ``u``)."""

    shift: int
    certified_sup: float
    matched_range: tuple[int, int]


def monotone_rearrange(pairs) -> dict[int, int]:
    """Replace a bijection by the increasing one with the same image.

    ``pairs`` holds ``(source, target)`` or ``(source, target, flag)``
    tuples; sources must form a contiguous block and targets be distinct.
    """
    src, tgt = [], []
    for p in pairs:
        src.append(int(p[0]))
        tgt.append(int(p[1]))
    if not src:
        return {}
    if len(set(src)) != len(src) or len(set(tgt)) != len(tgt):
        raise ValueError("pairs do not form a bijection")
    s_sorted = sorted(src)
    if s_sorted != list(range(s_sorted[0], s_sorted[0] + len(s_sorted))):
        raise ValueError("sources must form a contiguous block")
    return dict(zip(s_sorted, sorted(tgt)))


def _interior_mask(a: np.ndarray, lo: float, hi: float, eps: float) -> np.ndarray:
    return (a > lo + eps) & (a < hi - eps)


def _index_span(mask: np.ndarray, first: int):
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return None
    return first + int(idx[0]), first + int(idx[-1])


def match_windows(u: SpectrumWindow, v: SpectrumWindow, eps: float, max_shift: int | None = None) -> ShiftMatch:
    """Find the unique ``k`` with ``|arsinh v(j) - arsinh u(j + k)| < eps``.

    Every value lying more than ``eps`` (arsinh scale) inside the common
    completeness interval of both windows must find a partner; values in the
    edge band may be unpaired and are not certified.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if max_shift is None:
        max_shift = max(len(u), len(v))
    au, av = ash(u.values), ash(v.values)
    lo = max(ash(u.lower), ash(v.lower))
    hi = min(ash(u.upper), ash(v.upper))
    ru = _index_span(_interior_mask(au, lo, hi, eps), u.index_lo)
    rv = _index_span(_interior_mask(av, lo, hi, eps), v.index_lo)
    if ru is None and rv is None:
        raise NoMatch("no window value lies inside the guard band")

    # u index i pairs with v index i - k; required indices must have partners
    k_lo, k_hi = -max_shift, max_shift
    if ru is not None:
        k_lo = max(k_lo, ru[1] - v.index_hi)
        k_hi = min(k_hi, ru[0] - v.index_lo)
    if rv is not None:
        k_lo = max(k_lo, u.index_lo - rv[0])
        k_hi = min(k_hi, u.index_hi - rv[1])

    found = []
    for k in range(k_lo, k_hi + 1):
        spans = [s for s in (ru, None if rv is None else (rv[0] + k, rv[1] + k)) if s is not None]
        m_lo = max(min(s[0] for s in spans), u.index_lo, v.index_lo + k)
        m_hi = min(max(s[1] for s in spans), u.index_hi, v.index_hi + k)
        a = au[m_lo - u.index_lo : m_hi - u.index_lo + 1]
        b = av[m_lo - k - v.index_lo : m_hi - k - v.index_lo + 1]
        sup = float(np.max(np.abs(a - b)))
        if sup < eps:
            found.append(ShiftMatch(k, sup, (m_lo, m_hi)))
            if len(found) > 1:
                raise Ambiguous(found[0].shift, found[1].shift)
    if not found:
        raise NoMatch()
    return found[0]


def even_cover_radius(u: SpectrumWindow) -> float:
    """Half the smaller arsinh gap between the block at index 0 and its
    neighbouring blocks; ``eps`` below this makes matching shifts unique."""
    if 0 not in u:
        raise ValueError("window does not contain index 0")
    blocks = multiplicity_blocks(u)
    pos = next(i for i, (a, b) in enumerate(blocks) if a <= 0 <= b)
    if pos == 0 or pos == len(blocks) - 1:
        raise ValueError("window too small to see both neighbour blocks of index 0")
    a0, b0 = blocks[pos]
    x0 = ash(u[0])
    gap_up = ash(u[b0 + 1]) - x0
    gap_down = x0 - ash(u[a0 - 1])
    return float(min(gap_up, gap_down) / 2)


def cover_radius_or_inf(u: SpectrumWindow) -> float:
    """Like :func:`even_cover_radius` but tolerant of complete windows.

    A complete window has no unknown values beyond its ends, so a missing
    neighbour block imposes no constraint.
    """
    if u.complete:
        return math.inf
    return even_cover_radius(u)
