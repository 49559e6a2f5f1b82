"""Quaternionic matrices, the complex embedding psi, and right spectra.

A quaternionic matrix ``M = A + j B`` (complex simplex part ``A``, perplex
part ``B``) embeds into complex matrices of twice the size as

    psi(M) = [[A, -conj(B)],
              [B,  conj(A)]]

and ``psi`` is multiplicative.  The ``2n`` eigenvalues of ``psi(M)`` come in
conjugate pairs; each pair is one conjugacy class of right eigenvalues of
``M``, reported by its member with nonnegative imaginary part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import linalg
from .errors import NonSquare, PairingFailure
from .quat import Quaternion, class_rep

__all__ = [
    "QuaternionMatrix",
    "RightSpectrum",
    "psi",
    "conj_transpose",
    "is_unitary",
    "right_spectrum",
    "pair_conjugates",
    "spectra_distance",
]

DEFAULT_TOL = 1e-10


class QuaternionMatrix:
    """Dense ``rows x cols`` matrix of quaternions.

    Stored as a real array of shape ``(rows, cols, 4)`` holding the
    components ``x0..x3`` of every entry.
    """

    __slots__ = ("_c",)

    def __init__(self, components):
        c = np.array(components, dtype=float)
        if c.ndim != 3 or c.shape[2] != 4:
            raise ValueError(f"expected component array of shape (rows, cols, 4), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("quaternionic matrix has non-finite entries")
        c += 0.0  # drop negative zeros
        self._c = c

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence]) -> "QuaternionMatrix":
        data = [[Quaternion.coerce(x).components for x in row] for row in rows]
        if not data:
            return cls(np.zeros((0, 0, 4)))
        return cls(data)

    @classmethod
    def from_symplectic(cls, simplex, perplex) -> "QuaternionMatrix":
        a = np.asarray(simplex, dtype=complex)
        b = np.asarray(perplex, dtype=complex)
        if a.shape != b.shape:
            raise ValueError("simplex and perplex parts must have the same shape")
        return cls(np.stack([a.real, a.imag, b.real, -b.imag], axis=-1))

    @classmethod
    def from_complex(cls, m) -> "QuaternionMatrix":
        a = np.asarray(m, dtype=complex)
        return cls.from_symplectic(a, np.zeros_like(a))

    @classmethod
    def identity(cls, n: int) -> "QuaternionMatrix":
        c = np.zeros((n, n, 4))
        c[np.arange(n), np.arange(n), 0] = 1.0
        return cls(c)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuaternionMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def random(cls, rows: int, cols: int | None = None, rng=None) -> "QuaternionMatrix":
        rng = np.random.default_rng(rng)
        cols = rows if cols is None else cols
        return cls(rng.standard_normal((rows, cols, 4)))

    @property
    def components(self) -> np.ndarray:
        return self._c.copy()

    @property
    def shape(self) -> tuple[int, int]:
        return self._c.shape[:2]

    @property
    def simplex(self) -> np.ndarray:
        """Complex part ``A`` in ``M = A + j B``."""
        return self._c[..., 0] + 1j * self._c[..., 1]

    @property
    def perplex(self) -> np.ndarray:
        """Complex part ``B`` in ``M = A + j B``."""
        return self._c[..., 2] - 1j * self._c[..., 3]

    def __getitem__(self, idx) -> Quaternion:
        r, c = idx
        return Quaternion(*self._c[r, c])

    def __eq__(self, other):
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._c, other._c))

    __hash__ = None

    def allclose(self, other: "QuaternionMatrix", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(np.allclose(self._c, other._c, rtol=0.0, atol=atol))

    def __add__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        return QuaternionMatrix(self._c + other._c)

    def __sub__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        return QuaternionMatrix(self._c - other._c)

    def __neg__(self) -> "QuaternionMatrix":
        return QuaternionMatrix(-self._c)

    def __matmul__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = [self._c[..., t] for t in range(4)]
        b = [other._c[..., t] for t in range(4)]
        out = np.stack(
            [
                a[0] @ b[0] - a[1] @ b[1] - a[2] @ b[2] - a[3] @ b[3],
                a[0] @ b[1] + a[1] @ b[0] + a[2] @ b[3] - a[3] @ b[2],
                a[0] @ b[2] - a[1] @ b[3] + a[2] @ b[0] + a[3] @ b[1],
                a[0] @ b[3] + a[1] @ b[2] - a[2] @ b[1] + a[3] @ b[0],
            ],
            axis=-1,
        )
        return QuaternionMatrix(out)

    def scale_left(self, q) -> "QuaternionMatrix":
        """``q * M`` entrywise."""
        return QuaternionMatrix(_hamilton(np.array(Quaternion.coerce(q).components), self._c))

    def scale_right(self, q) -> "QuaternionMatrix":
        """``M * q`` entrywise."""
        return QuaternionMatrix(_hamilton(self._c, np.array(Quaternion.coerce(q).components)))

    def conj_transpose(self) -> "QuaternionMatrix":
        c = np.transpose(self._c, (1, 0, 2)).copy()
        c[..., 1:] *= -1.0
        return QuaternionMatrix(c)

    def __repr__(self):
        return f"QuaternionMatrix(shape={self.shape})"


def _hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcast Hamilton product over trailing component axes of length 4."""
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def psi(m: QuaternionMatrix) -> np.ndarray:
    """Complex ``2m x 2n`` image ``[[A, -conj(B)], [B, conj(A)]]``."""
    a = m.simplex
    b = m.perplex
    return np.block([[a, -b.conj()], [b, a.conj()]])


def conj_transpose(m: QuaternionMatrix) -> QuaternionMatrix:
    return m.conj_transpose()


def is_unitary(m: QuaternionMatrix, tol: float = 1e-11) -> bool:
    """True iff ``max |M* M - I| <= tol`` (one side suffices, psi is injective)."""
    return unitarity_defect(m) <= tol


def unitarity_defect(m: QuaternionMatrix) -> float:
    rows, cols = m.shape
    if rows != cols:
        raise NonSquare(f"matrix of shape {m.shape} is not square")
    prod = m.conj_transpose() @ m
    return float(np.abs(prod.components - QuaternionMatrix.identity(rows).components).max(initial=0.0))


@dataclass(frozen=True)
class RightSpectrum:
    """Multiset of conjugacy classes of right eigenvalues.

    Each class is stored as ``(representative, multiplicity)`` with
    ``representative.imag >= 0``.  For an ``n x n`` matrix the
    multiplicities add up to ``n``.
    """

    classes: tuple[tuple[complex, int], ...]

    @classmethod
    def from_values(cls, values: Iterable[complex], cluster_tol: float = linalg.CLUSTER_TOL) -> "RightSpectrum":
        """Fold one member of every conjugate pair (e.g. ``Spec(U+)``) into classes."""
        reps = [class_rep(v) for v in values]
        return cls(tuple(linalg.cluster(reps, cluster_tol)))

    @property
    def size(self) -> int:
        return sum(m for _, m in self.classes)

    def representatives(self) -> np.ndarray:
        """Every class representative repeated by multiplicity, sorted."""
        out = [r for r, m in self.classes for _ in range(m)]
        return np.array(sorted(out, key=lambda z: (z.real, z.imag)), dtype=complex)

    def distance(self, other: "RightSpectrum") -> float:
        return spectra_distance(self.representatives(), other.representatives())

    def agrees_with(self, other: "RightSpectrum", tol: float = 1e-8) -> bool:
        return self.distance(other) <= tol

    def as_dicts(self) -> list[dict]:
        return [
            {"re": float(r.real), "im": float(r.imag), "multiplicity": int(m)}
            for r, m in self.classes
        ]

    def __len__(self):
        return len(self.classes)


def spectra_distance(a, b) -> float:
    """Largest per-element distance under the optimal one-to-one matching.

    Infinite when the multisets have different sizes.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def pair_conjugates(values, pair_tol: float, snap_tol: float) -> list[complex]:
    """Match ``2n`` values into ``n`` conjugate pairs and return one per pair.

    Values with ``|Im| <= snap_tol`` are treated as real and paired with a
    neighbouring real value.  The others are matched upper against lower
    half plane, greedily by smallest ``|u - conj(l)|``.  The returned
    representative of each pair has ``Im >= 0``.

    Raises
    ------
    PairingFailure
        If the values cannot be matched within ``pair_tol``.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    is_real = np.abs(vals.imag) <= snap_tol
    reals = np.sort(vals[is_real].real)
    upper = vals[~is_real & (vals.imag > 0)]
    lower = vals[~is_real & (vals.imag < 0)]
    if len(reals) % 2:
        raise PairingFailure(f"odd number ({len(reals)}) of real eigenvalues")
    if len(upper) != len(lower):
        raise PairingFailure(
            f"{len(upper)} eigenvalues above the real axis but {len(lower)} below"
        )
    reps: list[complex] = []
    for a, b in zip(reals[0::2], reals[1::2]):
        if b - a > pair_tol:
            raise PairingFailure(f"real eigenvalues {a!r} and {b!r} do not pair")
        reps.append(complex(0.5 * (a + b), 0.0))
    if len(upper):
        cost = np.abs(upper[:, None] - lower.conj()[None, :])
        for _ in range(len(upper)):
            i, j = np.unravel_index(np.argmin(cost), cost.shape)
            if cost[i, j] > pair_tol:
                raise PairingFailure(
                    f"eigenvalue {upper[i]!r} has no conjugate partner within {pair_tol:.3g}"
                )
            reps.append(complex(0.5 * (upper[i] + lower[j].conj())))
            cost[i, :] = np.inf
            cost[:, j] = np.inf
    return reps


def right_spectrum(m: QuaternionMatrix, tol: float = DEFAULT_TOL,
                   check_residual: bool = True) -> RightSpectrum:
    """All right eigenvalue classes of a square quaternionic matrix.

    Eigenvalues of ``psi(M)`` are computed, matched into conjugate pairs
    and folded to representatives with ``Im >= 0``.

    Raises
    ------
    NonSquare
    PairingFailure
        If the ``2n`` values cannot be paired within ``10 * tol`` (relative
        to ``max(1, ||psi(M)||)``); this points at eigensolver inaccuracy.
    """
    rows, cols = m.shape
    if rows != cols:
        raise NonSquare(f"matrix of shape {m.shape} is not square")
    if rows == 0:
        return RightSpectrum(())
    p = psi(m)
    res = linalg.eigenvalues(p, check_residual=check_residual)
    scale = max(1.0, float(np.linalg.norm(p, 2)))
    reps = pair_conjugates(res.values, pair_tol=10 * tol * scale, snap_tol=tol * scale)
    return RightSpectrum(tuple(linalg.cluster(reps)))
