"""Parametrised Hermitian matrix families t -> A(t)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import as_hermitian, eigh, eigvalsh
from .spectrum import SpectrumWindow, canonical_window

__all__ = [
    "OperatorFamily",
    "linear_family",
    "constant_family",
    "concatenate",
    "sample_spectrum",
    "eigh",
    "eigvalsh",
]


def _fd_step(t: float) -> float:
    return 1e-6 * (1.0 + abs(t))


@dataclass(frozen=True)
class OperatorFamily:
    """A family ``A(t)``, ``t in [t_lo, t_hi]``, with derivative access.

    ``evaluator`` must be reentrant.  Without ``derivative`` a central
    difference with step ``h = 1e-6 (1 + |t|)`` is used (one-sided at the
    interval ends).
    """

    t_lo: float
    t_hi: float
    evaluator: Callable[[float], np.ndarray]
    derivative_fn: Callable[[float], np.ndarray] | None = None
    label: str = ""

    def __post_init__(self):
        if not self.t_lo < self.t_hi:
            raise ValueError("family interval must satisfy t_lo < t_hi")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.t_lo, self.t_hi)

    @property
    def dimension(self) -> int:
        return self(self.t_lo).shape[0]

    def _check(self, t: float):
        span = self.t_hi - self.t_lo
        if t < self.t_lo - 1e-12 * span or t > self.t_hi + 1e-12 * span:
            raise ValueError(f"t={t} outside family interval [{self.t_lo}, {self.t_hi}]")

    def __call__(self, t: float) -> np.ndarray:
        self._check(t)
        return as_hermitian(self.evaluator(min(max(t, self.t_lo), self.t_hi)))

    def derivative(self, t: float, h: float | None = None) -> np.ndarray:
        self._check(t)
        if self.derivative_fn is not None and h is None:
            return as_hermitian(self.derivative_fn(t))
        return self.finite_difference(t, h)

    def finite_difference(self, t: float, h: float | None = None) -> np.ndarray:
        h = _fd_step(t) if h is None else h
        lo, hi = max(self.t_lo, t - h), min(self.t_hi, t + h)
        d = (as_hermitian(self.evaluator(hi)) - as_hermitian(self.evaluator(lo))) / (hi - lo)
        return as_hermitian((d + d.conj().T) / 2)

    def restrict(self, a: float, b: float) -> "OperatorFamily":
        self._check(a)
        self._check(b)
        return OperatorFamily(a, b, self.evaluator, self.derivative_fn, self.label)

    def reversed(self) -> "OperatorFamily":
        lo, hi = self.t_lo, self.t_hi
        ev = self.evaluator
        dv = self.derivative_fn
        return OperatorFamily(
            lo,
            hi,
            lambda t: ev(lo + hi - t),
            None if dv is None else (lambda t: -np.asarray(dv(lo + hi - t))),
            f"reversed({self.label})" if self.label else "reversed",
        )

    def reparametrized(self, phi, phi_prime, s_lo: float = 0.0, s_hi: float = 1.0) -> "OperatorFamily":
        """Family ``s -> A(phi(s))`` on ``[s_lo, s_hi]``; ``phi`` maps into the interval."""
        ev, dv = self.evaluator, self.derivative_fn
        deriv = None
        if dv is not None:
            deriv = lambda s: phi_prime(s) * np.asarray(dv(phi(s)))  # noqa: E731
        return OperatorFamily(s_lo, s_hi, lambda s: ev(phi(s)), deriv, self.label)


def linear_family(a0, a1) -> OperatorFamily:
    """``t -> (1 - t) A0 + t A1`` on ``[0, 1]`` with exact derivative."""
    a0 = as_hermitian(a0)
    a1 = as_hermitian(a1)
    if a0.shape != a1.shape:
        raise ValueError(f"dimension mismatch: {a0.shape} vs {a1.shape}")
    diff = a1 - a0
    return OperatorFamily(0.0, 1.0, lambda t: (1.0 - t) * a0 + t * a1, lambda t: diff, "linear")


def constant_family(a, interval=(0.0, 1.0)) -> OperatorFamily:
    a = as_hermitian(a)
    zero = np.zeros_like(a)
    return OperatorFamily(interval[0], interval[1], lambda t: a, lambda t: zero, "constant")


def concatenate(first: OperatorFamily, second: OperatorFamily, atol: float = 1e-9) -> OperatorFamily:
    """Run ``first`` then ``second``; the end of one must meet the start of the other."""
    if not np.allclose(first(first.t_hi), second(second.t_lo), rtol=0, atol=atol):
        raise ValueError("families do not join: A_first(end) != A_second(start)")
    join = first.t_hi
    offset = second.t_lo - join
    f_ev, s_ev = first.evaluator, second.evaluator

    def ev(t):
        return f_ev(t) if t <= join else s_ev(t + offset)

    deriv = None
    if first.derivative_fn is not None and second.derivative_fn is not None:
        f_dv, s_dv = first.derivative_fn, second.derivative_fn
        deriv = lambda t: f_dv(t) if t <= join else s_dv(t + offset)  # noqa: E731
    return OperatorFamily(first.t_lo, join + (second.t_hi - second.t_lo), ev, deriv, "concat")


def sample_spectrum(family: OperatorFamily, t: float, band: tuple[float, float] | None = None) -> SpectrumWindow:
    """Canonical window of ``A(t)``.

    With ``band=(lo, hi)`` only eigenvalues inside the band are kept and the
    window is marked complete on that band only.
    """
    w = eigvalsh(family(t))
    if band is None:
        return canonical_window(w)
    lo, hi = band
    if not lo < 0 < hi:
        raise ValueError("band must contain 0 in its interior")
    keep = w[(w >= lo) & (w <= hi)]
    if keep.size == 0:
        raise ValueError(f"no eigenvalues of A({t}) inside band {band}")
    return canonical_window(keep, lower=lo, upper=hi)


def n_negative(a, tol: float = 1e-10) -> int:
    """Number of negative eigenvalues; refuses (near-)singular input."""
    w = eigvalsh(a)
    if np.any(np.abs(w) <= tol):
        raise ValueError("matrix has an eigenvalue within tolerance of zero")
    return int(np.count_nonzero(w < 0))


def random_hermitian(rng: np.random.Generator, n: int, complex_entries: bool = True, scale: float | None = None):
    """Gaussian Hermitian matrix with spectrum of order one."""
    x = rng.standard_normal((n, n))
    if complex_entries:
        x = x + 1j * rng.standard_normal((n, n))
    h = (x + x.conj().T) / 2
    return h * (1.0 / math.sqrt(n) if scale is None else scale)
