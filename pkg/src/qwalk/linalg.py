"""Dense complex matrix kernel.

Determinants by LU with partial pivoting, eigenvalues by Householder
reduction to Hessenberg form followed by shifted QR iteration, and
polynomial coefficient recovery from samples on a circle.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InconsistentSamples, NonSquare, NoConvergence

logger = logging.getLogger(__name__)

__all__ = [
    "EigenResult",
    "as_matrix",
    "det",
    "lu_factor",
    "hessenberg",
    "eigenvalues",
    "cluster",
    "sample_points",
    "interpolate_poly",
    "poly_eval",
]

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-11
CLUSTER_TOL = 1e-8


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-d complex array (copying only when needed)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"matrix of shape {a.shape} is not square")


def lu_factor(m):
    """LU decomposition with partial pivoting, in place on a copy.

    Returns ``(lu, perm, sign)`` where ``lu`` packs the unit lower factor
    below the diagonal and the upper factor on and above it, ``perm`` is the
    row permutation and ``sign`` its parity (+1 or -1).
    """
    a = as_matrix(m).copy()
    _require_square(a)
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = a[k, k]
        if pivot == 0:
            continue
        a[k + 1:, k] /= pivot
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, perm, sign


def det(m) -> complex:
    """Determinant via LU with partial pivoting.

    Raises
    ------
    NonSquare
        If ``m`` is not square.
    """
    lu, _, sign = lu_factor(m)
    if lu.shape[0] == 0:
        return 1 + 0j
    return complex(sign * np.prod(np.diag(lu)))


def hessenberg(m) -> np.ndarray:
    """Upper Hessenberg matrix unitarily similar to ``m`` (Householder)."""
    h = as_matrix(m).copy()
    _require_square(h)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


@dataclass
class EigenResult:
    """All eigenvalues of a square matrix, with multiplicity.

    ``residual`` is the largest ``sigma_min(M - lambda I) / ||M||_2`` over the
    reported values; ``converged`` is False when it exceeds the requested
    tolerance.
    """

    values: np.ndarray
    residual: float
    converged: bool = True
    iterations: int = 0
    tol: float = DEFAULT_TOL

    def __len__(self):
        return len(self.values)

    def multiplicities(self, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
        return cluster(self.values, tol)


@njit(cache=True)
def _eig2(a, b, c, d):
    """Eigenvalues of ``[[a, b], [c, d]]`` without cancellation in the smaller root."""
    half_tr = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
    if abs(half_tr + disc) >= abs(half_tr - disc):
        l1 = half_tr + disc
    else:
        l1 = half_tr - disc
    if l1 != 0:
        l2 = (a * d - b * c) / l1
    else:
        l2 = 2.0 * half_tr - l1
    return l1, l2


@njit(cache=True)
def _qr_kernel(h, max_iter):
    """Shifted QR on an upper Hessenberg ``h`` (overwritten).

    Only the active unreduced block is transformed; the eigenvalues of a
    block-triangular matrix are those of its diagonal blocks, so the Schur
    form itself is never assembled.  Returns ``(eigs, count, iterations)``;
    ``count < n`` signals that the sweep budget ran out.
    """
    eps = 2.220446049250313e-16
    n = h.shape[0]
    eigs = np.zeros(n, dtype=np.complex128)
    ne = 0
    hnorm = 0.0
    for i in range(n):
        for j in range(n):
            if abs(h[i, j]) > hnorm:
                hnorm = abs(h[i, j])
    if hnorm == 0.0:
        hnorm = 1e-300
    cs = np.zeros(n, dtype=np.float64)
    ss = np.zeros(n, dtype=np.complex128)
    hi = n - 1
    iterations = 0
    stalled = 0
    while hi >= 0:
        if hi == 0:
            eigs[ne] = h[0, 0]
            ne += 1
            break
        lo = hi
        while lo > 0:
            scale = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if scale == 0.0:
                scale = hnorm
            if abs(h[lo, lo - 1]) <= eps * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs[ne] = h[hi, hi]
            ne += 1
            hi -= 1
            stalled = 0
            continue
        if lo == hi - 1:
            l1, l2 = _eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi])
            eigs[ne] = l1
            eigs[ne + 1] = l2
            ne += 2
            hi -= 2
            stalled = 0
            continue
        iterations += 1
        stalled += 1
        if iterations > max_iter:
            return eigs, ne, iterations
        d = h[hi, hi]
        if stalled % 10 == 0:
            # exceptional shift breaks symmetric stalls such as cyclic permutations
            shift = d + 0.75 * abs(h[hi, hi - 1]) * cmath.exp(1j * 0.37 * stalled)
        else:
            l1, l2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], d)
            shift = l1 if abs(l1 - d) <= abs(l2 - d) else l2
        for i in range(lo, hi + 1):
            h[i, i] -= shift
        # H - sI = QR by Givens rotations G_k = [[c, s], [-conj(s), c]]
        for k in range(lo, hi):
            a = h[k, k]
            b = h[k + 1, k]
            if b == 0:
                c = 1.0
                s = 0.0 + 0.0j
            elif a == 0:
                c = 0.0
                s = np.conj(b) / abs(b)
            else:
                r = math.hypot(abs(a), abs(b))
                c = abs(a) / r
                s = (a / abs(a)) * np.conj(b) / r
            cs[k] = c
            ss[k] = s
            for j in range(k, hi + 1):
                x = h[k, j]
                y = h[k + 1, j]
                h[k, j] = c * x + s * y
                h[k + 1, j] = -np.conj(s) * x + c * y
            h[k + 1, k] = 0.0
        # H <- RQ
        for k in range(lo, hi):
            c = cs[k]
            s = ss[k]
            top = min(k + 2, hi)
            for i in range(lo, top + 1):
                x = h[i, k]
                y = h[i, k + 1]
                h[i, k] = c * x + np.conj(s) * y
                h[i, k + 1] = -s * x + c * y
        for i in range(lo, hi + 1):
            h[i, i] += shift
    return eigs, ne, iterations


def eigenvalues(m, tol: float = DEFAULT_TOL, max_iter: int | None = None,
                check_residual: bool = True) -> EigenResult:
    """All eigenvalues of a square complex matrix with multiplicity.

    Parameters
    ----------
    m : array_like
        Square matrix, dimension at least 1.
    tol : float
        Backward-error tolerance relative to ``||M||_2`` used to set
        ``EigenResult.converged``.
    max_iter : int, optional
        Total QR sweeps allowed; defaults to ``100 * n``.
    check_residual : bool
        Compute ``sigma_min(M - lambda I)`` for every distinct value.

    Raises
    ------
    NonSquare
    NoConvergence
        When the sweep budget is exhausted.
    """
    a = as_matrix(m)
    _require_square(a)
    n = a.shape[0]
    if n == 0:
        raise ValueError("eigenvalues of an empty matrix are undefined")
    if max_iter is None:
        max_iter = 100 * n
    eigs, count, iterations = _qr_kernel(hessenberg(a), max_iter)
    if count < n:
        raise NoConvergence(
            f"QR iteration did not converge after {max_iter} sweeps "
            f"({count} of {n} eigenvalues found)"
        )
    values = eigs.copy()
    residual = 0.0
    if check_residual:
        residual = backward_error(a, values)
    converged = residual <= tol
    if not converged:
        logger.warning("eigenvalue residual %.3g exceeds tolerance %.3g", residual, tol)
    return EigenResult(values, residual, converged, iterations, tol)


def backward_error(m, values) -> float:
    """``max_k sigma_min(M - values[k] I) / ||M||_2``."""
    a = as_matrix(m)
    n = a.shape[0]
    norm = np.linalg.norm(a, 2)
    if norm == 0.0:
        return float(np.max(np.abs(values), initial=0.0))
    distinct = np.array([v for v, _ in cluster(values, 1e-12)], dtype=complex)
    stack = a[None, :, :] - distinct[:, None, None] * np.eye(n)[None, :, :]
    smin = np.linalg.svd(stack, compute_uv=False)[:, -1]
    return float(smin.max() / norm)


def cluster(values, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group values closer than ``tol`` (single linkage) into ``(mean, count)``.

    Output is sorted by real part, then imaginary part.
    """
    vals = sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))
    groups: list[list[complex]] = []
    for v in vals:
        for g in groups:
            if any(abs(v - w) <= tol for w in g):
                g.append(v)
                break
        else:
            groups.append([v])
    out = [(complex(np.mean(g)), len(g)) for g in groups]
    out.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return out


def sample_points(degree: int, radius: float = 0.5, extra: int = 0,
                  offset: float = 0.0) -> np.ndarray:
    """``degree + 1 + extra`` points ``radius * exp(2 pi i (j + offset) / N)``."""
    n = degree + 1 + extra
    j = np.arange(n)
    return radius * np.exp(2j * np.pi * (j + offset) / n)


def poly_eval(coeffs, t):
    """Evaluate ``sum_k coeffs[k] t^k`` (coefficients in increasing powers)."""
    return np.polynomial.polynomial.polyval(t, np.asarray(coeffs, dtype=complex))


def _as_circle(points: np.ndarray):
    """Return ``t0`` if ``points[j] == t0 * exp(2 pi i j / N)``, else None."""
    n = len(points)
    t0 = points[0]
    if t0 == 0:
        return None
    expected = t0 * np.exp(2j * np.pi * np.arange(n) / n)
    if np.allclose(points, expected, rtol=1e-13, atol=0.0):
        return t0
    return None


def interpolate_poly(evals, degree: int, tol: float = 1e-7) -> np.ndarray:
    """Coefficients ``c_0..c_degree`` of the polynomial through the samples.

    Samples on a circle ``t0 * exp(2 pi i j / N)`` are inverted by FFT;
    anything else falls back to least squares on the Vandermonde system.
    With more than ``degree + 1`` samples the fit is overdetermined and its
    residual is checked.

    Raises
    ------
    InconsistentSamples
        If the relative residual of the fit exceeds ``tol``, or there are
        fewer than ``degree + 1`` distinct points.
    """
    pts = np.array([complex(p) for p, _ in evals])
    vals = np.array([complex(v) for _, v in evals])
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if len(np.unique(np.round(pts, 14))) < degree + 1:
        raise InconsistentSamples(
            f"need at least {degree + 1} distinct sample points, got {len(pts)}"
        )
    t0 = _as_circle(pts)
    if t0 is not None:
        n = len(pts)
        full = np.fft.fft(vals) / n
        full = full / t0 ** np.arange(n)
        coeffs = full[:degree + 1]
    else:
        vander = pts[:, None] ** np.arange(degree + 1)[None, :]
        coeffs = np.linalg.lstsq(vander, vals, rcond=None)[0]
    scale = max(1.0, float(np.abs(vals).max(initial=0.0)))
    residual = float(np.abs(poly_eval(coeffs, pts) - vals).max(initial=0.0)) / scale
    if residual > tol:
        raise InconsistentSamples(
            f"samples are not consistent with a degree-{degree} polynomial "
            f"(relative residual {residual:.3g})"
        )
    return coeffs
