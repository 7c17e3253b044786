"""Lifting sampled spectra along a parameter path, and spectral flow.

The lift keeps a continuous enumeration ``lam_j(t_i) = W_i(j + S_i)`` where
``W_i`` is the canonical window at ``t_i`` and ``S_i = k_1 + ... + k_i``.
Each step shift ``k_i`` satisfies ``W_{i-1}(j) ~ W_i(j + k_i)`` within the
arsinh tolerance ``eps``.  The lift starts at the canonical enumeration, so
the flow is ``S_N``: the lifted enumeration at the end equals the canonical
one shifted by the flow.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .families import OperatorFamily, n_negative, sample_spectrum
from .growth import FamilyConstants, family_constants, safe_step
from .matching import MatchError, ShiftMatch, cover_radius_or_inf, match_windows
from .spectrum import SpectrumWindow, shift

log = logging.getLogger(__name__)

MAX_BISECTIONS = 40
STEP_CLAMP = (1e-6, 0.25)


class TrackingError(RuntimeError):
    """Raised when consecutive samples cannot be matched."""

    def __init__(self, msg: str, interval: tuple[float, float] | None = None):
        self.interval = interval
        super().__init__(msg)


@dataclass(frozen=True)
class TrackedPath:
    times: tuple[float, ...]
    windows: tuple[SpectrumWindow, ...]
    step_shifts: tuple[int, ...]
    certificates: tuple[float, ...]
    eps: float
    constants: FamilyConstants | None = field(default=None, compare=False)

    @property
    def cumulative_shift(self) -> int:
        return int(sum(self.step_shifts))

    @property
    def steps(self) -> int:
        return len(self.step_shifts)

    def offsets(self) -> np.ndarray:
        """``S_i`` for every sample (``S_0 = 0``)."""
        return np.concatenate([[0], np.cumsum(self.step_shifts, dtype=int)])

    def lifted(self, i: int) -> SpectrumWindow:
        """Lifted enumeration at sample ``i``: ``j -> W_i(j + S_i)``."""
        return shift(self.windows[i], int(self.offsets()[i]))

    def branches(self) -> dict[int, np.ndarray]:
        """Lifted label ``j`` -> values along the path (NaN where unseen)."""
        lifted = [self.lifted(i) for i in range(len(self.times))]
        lo = min(w.index_lo for w in lifted)
        hi = max(w.index_hi for w in lifted)
        out = {j: np.full(len(lifted), np.nan) for j in range(lo, hi + 1)}
        for i, w in enumerate(lifted):
            for j, x in zip(w.indices, w.values):
                out[int(j)][i] = x
        return out

    def rows(self):
        """``(t, j, lambda)`` rows of the lifted enumeration."""
        for i, t in enumerate(self.times):
            w = self.lifted(i)
            for j, x in zip(w.indices, w.values):
                yield float(t), int(j), float(x)

    def summary(self) -> dict:
        d = {
            "flow": spectral_flow(self),
            "steps": self.steps,
            "eps": self.eps,
            "interval": [self.times[0], self.times[-1]],
            "max_certificate": max(self.certificates) if self.certificates else 0.0,
            "step_shifts": list(self.step_shifts),
            "certificates": list(self.certificates),
        }
        if self.constants is not None:
            c = self.constants
            d["constants"] = {"alpha": c.alpha, "beta": c.beta, "C": c.C, "grid_points": c.grid_points}
        return d


def _step_match(prev: SpectrumWindow, cur: SpectrumWindow, eps: float) -> ShiftMatch:
    # k_i with prev(j) ~ cur(j + k_i), i.e. prev ~ shift(cur, k_i)
    return match_windows(cur, prev, eps)


def _check_radius(w: SpectrumWindow, eps: float, t: float):
    try:
        radius = cover_radius_or_inf(w)
    except ValueError as exc:
        raise TrackingError(f"sample t={t}: {exc}", (t, t)) from None
    if eps >= radius:
        raise TrackingError(f"sample t={t}: eps={eps} is not below the cover radius {radius}", (t, t))


def track_path(
    family: OperatorFamily,
    eps: float,
    controller: str = "adaptive",
    steps: int = 100,
    band: tuple[float, float] | None = None,
    constants: FamilyConstants | None = None,
    grid_points: int = 64,
) -> TrackedPath:
    """Sample ``family`` and lift its spectra continuously.

    ``controller="fixed"`` uses ``steps`` uniform steps and fails on the first
    unmatched interval.  ``controller="adaptive"`` steps by
    ``safe_step(C, eps)`` from the family constants and bisects a step that
    fails to match.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    t_lo, t_hi = family.interval
    length = t_hi - t_lo
    times = [t_lo]
    w0 = sample_spectrum(family, t_lo, band)
    _check_radius(w0, eps, t_lo)
    windows = [w0]
    shifts: list[int] = []
    certs: list[float] = []

    if controller == "fixed":
        if steps < 1:
            raise ValueError("steps must be positive")
        grid = np.linspace(t_lo, t_hi, steps + 1)
        for a, b in zip(grid[:-1], grid[1:]):
            w = sample_spectrum(family, float(b), band)
            try:
                m = _step_match(windows[-1], w, eps)
            except MatchError as exc:
                raise TrackingError(f"step [{a}, {b}]: {exc}", (float(a), float(b))) from None
            _check_radius(w, eps, float(b))
            times.append(float(b))
            windows.append(w)
            shifts.append(m.shift)
            certs.append(m.certified_sup)
        return TrackedPath(tuple(times), tuple(windows), tuple(shifts), tuple(certs), eps)

    if controller != "adaptive":
        raise ValueError(f"unknown controller {controller!r}")
    if constants is None:
        constants = family_constants(family, grid_points=grid_points)
    lo_clamp, hi_clamp = STEP_CLAMP[0] * length, STEP_CLAMP[1] * length
    base = safe_step(constants.C, eps) if constants.C > 0 else math.inf
    base = min(max(base, lo_clamp), hi_clamp)
    t = t_lo
    while t < t_hi:
        h = base
        for attempt in range(MAX_BISECTIONS + 1):
            nxt = t_hi if t + h >= t_hi - 1e-12 * length else t + h
            w = sample_spectrum(family, nxt, band)
            try:
                m = _step_match(windows[-1], w, eps)
                break
            except MatchError as exc:
                if attempt == MAX_BISECTIONS:
                    raise TrackingError(f"step [{t}, {nxt}]: {exc}", (t, nxt)) from None
                log.debug("bisecting step at t=%g: %s", t, exc)
                h /= 2
        _check_radius(w, eps, nxt)
        times.append(nxt)
        windows.append(w)
        shifts.append(m.shift)
        certs.append(m.certified_sup)
        t = nxt
    return TrackedPath(tuple(times), tuple(windows), tuple(shifts), tuple(certs), eps, constants)


def spectral_flow(path: TrackedPath) -> int:
    """The integer ``s`` with ``lifted(end) = shift(canonical(end), s)``."""
    s = path.cumulative_shift
    if path.lifted(len(path.times) - 1) != shift(path.windows[-1], s):
        raise AssertionError("lifted endpoint is not a shift of the canonical window")
    return s


def negative_index_flow_oracle(a_start, a_end, tol: float = 1e-10) -> int:
    """``n_neg(A_start) - n_neg(A_end)`` for invertible Hermitian endpoints."""
    return n_negative(a_start, tol) - n_negative(a_end, tol)
