"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays. Everything here is sized for the
handful-of-qubits regime (side lengths up to ~64), so the eigensolver is a
cyclic Jacobi sweep compiled with numba rather than a LAPACK call.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numba
import numpy as np

from .errors import InvalidDims, NotHermitian

HERMITIAN_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise InvalidDims(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def hermiticity_residual(a: np.ndarray) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return float("inf")
    return float(np.max(np.abs(a - a.conj().T), initial=0.0))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_residual(a) <= tol


def kron(a, b) -> np.ndarray:
    """Kronecker product; the left factor is the more significant index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduce ``rho`` on the tensor factors listed in ``keep``.

    Kept factors come out in their original order regardless of the order in
    which ``keep`` lists them.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise InvalidDims(f"dimensions must be positive, got {dims}")
    side = int(np.prod(dims))
    if rho.shape != (side, side):
        raise InvalidDims(f"matrix of shape {rho.shape} does not match dims {dims}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise InvalidDims(f"keep indices {keep} out of range for {len(dims)} factors")

    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # contract traced factors pairwise, highest index first so axes stay valid
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + t.ndim // 2)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


@numba.njit(cache=True)
def _jacobi_eigvalsh(a, tol, max_sweeps):
    # Works in place on a copy. Each rotation first removes the phase of the
    # pivot, then applies a real Givens rotation that zeroes it.
    a = a.copy()
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += abs(a[i, j]) ** 2
        scale = 0.0
        for i in range(n):
            scale += abs(a[i, i]) ** 2
        if off <= tol * tol * max(scale, 1e-300) or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                ph = apq / mag
                # D = diag(.., 1 at p, conj(ph) at q, ..): A <- D^H A D
                for k in range(n):
                    a[k, q] = a[k, q] * np.conj(ph)
                for k in range(n):
                    a[q, k] = a[q, k] * ph
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    out = np.empty(n)
    for i in range(n):
        out[i] = a[i, i].real
    out.sort()
    return out


def hermitian_eigenvalues(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is symmetrized as ``(A + A^H) / 2`` after the Hermiticity check
    so round-off in the imaginary parts of the diagonal never leaks through.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidDims(f"eigenvalues need a square matrix, got {a.shape}")
    res = hermiticity_residual(a)
    if res > tol:
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3e})")
    h = np.ascontiguousarray(0.5 * (a + a.conj().T))
    return _jacobi_eigvalsh(h, 1e-15, 100)


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise InvalidDims(f"shape mismatch {a.shape} vs {b.shape}")
    ev = hermitian_eigenvalues(a - b)
    # fsum is exactly rounded, so swapping the arguments gives the same bits
    return 0.5 * math.fsum(np.abs(ev))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())
