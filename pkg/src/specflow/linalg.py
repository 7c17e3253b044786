"""Dense Hermitian eigensolver.

Householder reduction to real symmetric tridiagonal form followed by the
implicit-shift QL iteration.  Complex Hermitian input is handled by complex
reflectors plus a diagonal phase change that makes the off-diagonal real.
"""

from __future__ import annotations

import math

import numpy as np

HERMITIAN_RTOL = 1e-12
_MAX_QL_SWEEPS = 60


def as_hermitian(a) -> np.ndarray:
    """Validate and return ``a`` as a float or complex square array."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.iscomplexobj(a):
        a = a.astype(complex)
        if not np.any(a.imag):
            a = a.real.copy()
    else:
        a = a.astype(float)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if a.size and np.max(np.abs(a - a.conj().T)) > HERMITIAN_RTOL * scale:
        raise ValueError("matrix is not Hermitian")
    return a


def _tridiagonalize(a: np.ndarray, want_vectors: bool):
    n = a.shape[0]
    a = a.copy()
    q = np.eye(n, dtype=a.dtype) if want_vectors else None
    off = np.zeros(n - 1, dtype=a.dtype) if n > 1 else np.zeros(0, dtype=a.dtype)
    for k in range(n - 2):
        x = a[k + 1 :, k].copy()
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            off[k] = 0.0
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * xnorm
        v = x
        v[0] -= alpha
        vn = np.linalg.norm(v)
        if vn == 0.0:
            off[k] = x[0]
            continue
        v /= vn
        sub = a[k + 1 :, k + 1 :]
        sub -= 2.0 * np.outer(v, v.conj() @ sub)
        sub -= 2.0 * np.outer(sub @ v, v.conj())
        a[k + 1 :, k + 1 :] = sub
        off[k] = alpha
        if want_vectors:
            qs = q[:, k + 1 :]
            q[:, k + 1 :] = qs - 2.0 * np.outer(qs @ v, v.conj())
    if n >= 2:
        off[n - 2] = a[n - 1, n - 2]
    diag = np.real(np.diagonal(a)).copy()
    # phase change: make the subdiagonal real and non-negative
    e = np.abs(off).astype(float)
    if np.iscomplexobj(off) or want_vectors:
        phases = np.ones(n, dtype=complex if np.iscomplexobj(a) else float)
        for k in range(n - 1):
            if e[k] != 0.0:
                phases[k + 1] = phases[k] * (off[k] / e[k])
            else:
                phases[k + 1] = phases[k]
        if want_vectors:
            q = q * phases[np.newaxis, :]
    return diag, e, q


def _tql(d: np.ndarray, sub: np.ndarray, z: np.ndarray | None):
    """Implicit QL on the symmetric tridiagonal (d, sub); rotates columns of z."""
    n = d.size
    d = [float(x) for x in d]
    e = [float(x) for x in sub] + [0.0]
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= 2.220446049250313e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_QL_SWEEPS:
                raise np.linalg.LinAlgError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    zi = z[:, i].copy()
                    z[:, i] = c * zi - s * z[:, i + 1]
                    z[:, i + 1] = s * zi + c * z[:, i + 1]
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(d)


def eigh(a):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Returns ``(w, v)`` with ``a @ v[:, i] = w[i] * v[:, i]``.
    """
    a = as_hermitian(a)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=a.dtype)
    d, e, q = _tridiagonalize(a, True)
    w = _tql(d, e, q)
    order = np.argsort(w, kind="stable")
    return w[order], q[:, order]


def eigvalsh(a) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    a = as_hermitian(a)
    if a.shape[0] == 0:
        return np.zeros(0)
    d, e, _ = _tridiagonalize(a, False)
    return np.sort(_tql(d, e, None))


def spectral_norm(a) -> float:
    """Largest singular value via the eigenvalues of ``a^H a``."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    w = eigvalsh(a.conj().T @ a)
    return math.sqrt(max(0.0, float(w[-1])))
