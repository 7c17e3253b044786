"""Type-(A) family constants, the eigenvalue growth envelope, safe steps.

For a family ``A(t)`` on ``[t_lo, t_hi]`` with graph norm
``|u|_Z = |u| + |A(t_lo) u|``::

    alpha = min_t  inf_u (|u| + |A(t) u|) / |u|_Z
    beta  = max_t  sup_u |A'(t) u| / |u|_Z
    C     = beta / alpha

and every eigenvalue branch obeys
``|lam(t) - lam(t0)| <= (1 + |lam(t0)|) (exp(C |t - t0|) - 1)``.

The inner inf/sup are ratios of sums of norms, not singular values.  Writing
``s = <u, S u>`` and ``l = <u, L u>`` for unit ``u`` (``S``, ``L`` squares of
the relevant matrices) both become extremal problems over the joint numerical
range of ``(S, L)``, which is convex.  We bound the range from outside by
supporting lines, so the reported alpha is a lower bound and beta an upper
bound, up to eigensolver accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import OperatorFamily

C0 = math.sqrt(2.0)  # sup (1 + |t|) / sqrt(1 + t^2), attained at t = 1
C1 = 0.25
R = 2.0  # any R > 1 gives |x| / (1 + |x|) > 1/2 for |x| >= R
C2 = min(1.0 / (R + 1.0), 1.0 / (2.0 * C0))

DEFAULT_GRID = 64
DEFAULT_ANGLES = 65
_EDGE_SAMPLES = 9


@dataclass(frozen=True)
class FamilyConstants:
    alpha: float
    beta: float
    C: float
    interval: tuple[float, float]
    grid_points: int


def _outer_frontier(S: np.ndarray, L: np.ndarray, angles: int) -> np.ndarray:
    """Points on the outer polygon bounding the joint numerical range of
    ``(S, L)`` in the direction of small ``s`` and large ``l``.

    Returns an ``(m, 2)`` array of ``(s, l)`` samples along the polygon edges.
    """
    phis = np.linspace(0.0, math.pi / 2, angles)
    cos, sin = np.cos(phis), np.sin(phis)
    M = sin[:, None, None] * L[None] - cos[:, None, None] * S[None]
    # support values h(phi) = max <u, M(phi) u>
    h = np.linalg.eigvalsh(M)[:, -1]
    # consecutive supporting lines: -cos s + sin l = h
    a1, b1, h1 = -cos[:-1], sin[:-1], h[:-1]
    a2, b2, h2 = -cos[1:], sin[1:], h[1:]
    det = a1 * b2 - a2 * b1
    vs = (h1 * b2 - h2 * b1) / det
    vl = (a1 * h2 - a2 * h1) / det
    verts = np.stack([vs, vl], axis=1)
    if len(verts) == 1:
        return verts
    w = np.linspace(0.0, 1.0, _EDGE_SAMPLES)[None, :, None]
    pts = verts[:-1, None, :] * (1 - w) + verts[1:, None, :] * w
    return np.clip(pts.reshape(-1, 2), 0.0, None)


def _sq(a: np.ndarray) -> np.ndarray:
    s = a.conj().T @ a
    return (s + s.conj().T) / 2


def coercivity_at(a_t: np.ndarray, a_anchor: np.ndarray, angles: int = DEFAULT_ANGLES) -> float:
    """Lower bound of ``inf_u (|u| + |A u|) / (|u| + |A0 u|)``."""
    pts = _outer_frontier(_sq(a_t), _sq(a_anchor), angles)
    return float(np.min((1.0 + np.sqrt(pts[:, 0])) / (1.0 + np.sqrt(pts[:, 1]))))


def derivative_bound_at(d_t: np.ndarray, a_anchor: np.ndarray, angles: int = DEFAULT_ANGLES) -> float:
    """Upper bound of ``sup_u |A' u| / (|u| + |A0 u|)``."""
    if not np.any(d_t):
        return 0.0
    pts = _outer_frontier(_sq(a_anchor), _sq(d_t), angles)
    with np.errstate(divide="ignore"):
        ratio = (1.0 + np.sqrt(pts[:, 0])) / np.sqrt(pts[:, 1])
    return float(1.0 / np.min(ratio))


def family_constants(
    family: OperatorFamily,
    interval: tuple[float, float] | None = None,
    grid_points: int = DEFAULT_GRID,
    angles: int = DEFAULT_ANGLES,
) -> FamilyConstants:
    t_lo, t_hi = family.interval if interval is None else interval
    if not t_lo < t_hi:
        raise ValueError("degenerate interval")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    anchor = family(t_lo)
    alpha, beta = math.inf, 0.0
    for t in np.linspace(t_lo, t_hi, grid_points):
        alpha = min(alpha, coercivity_at(family(t), anchor, angles))
        beta = max(beta, derivative_bound_at(family.derivative(t), anchor, angles))
    if not alpha > 0:
        raise ValueError(f"coercivity estimate {alpha} is not positive")
    return FamilyConstants(alpha, beta, beta / alpha, (float(t_lo), float(t_hi)), grid_points)


def growth_envelope(lambda0: float, C: float, dt: float) -> float:
    """``(1 + |lambda0|) (exp(C dt) - 1)``."""
    return (1.0 + abs(lambda0)) * math.expm1(C * abs(dt))


def safe_step(C: float, eps: float) -> float:
    """Parameter step keeping every eigenvalue within ``eps`` in arsinh scale."""
    if not C > 0 or not eps > 0:
        raise ValueError("C and eps must be positive")
    return math.log1p(min(C1, eps * C2)) / C
