"""Reciprocals of the Ihara and second weighted zeta functions.

Each reciprocal is a polynomial in ``t`` of degree at most ``2m``.  It is
recovered from determinant values on a circle by an inverse DFT, once from
the ``2m x 2m`` arc-side determinant and once from the ``n x n``
vertex-side determinant, so that the two can be compared coefficient by
coefficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import InconsistentWeights
from .graph import Graph, arc_weights, build_A_D_T, build_B_J0, build_Bw, weights_from_W

__all__ = [
    "PolynomialReport",
    "ihara_edge",
    "ihara_vertex",
    "weighted_edge",
    "weighted_vertex",
    "max_discrepancy",
    "SAMPLE_RADIUS",
]

# Unit circle keeps the DFT well conditioned up to degree ~30 (Petersen);
# the quarter-step offset keeps t = +-1 off the grid for every sample count,
# which matters for trees where the vertex side divides by (1 - t^2).
SAMPLE_RADIUS = 1.0
SAMPLE_OFFSET = 0.25
EXTRA_SAMPLES = 3


@dataclass(frozen=True)
class PolynomialReport:
    """Coefficients (index = power of ``t``) of a zeta reciprocal."""

    coefficients: np.ndarray
    formula: str
    max_degree: int
    function: str = "ihara"

    def __call__(self, t):
        return linalg.poly_eval(self.coefficients, t)

    def to_dict(self) -> dict:
        return {
            "function": self.function,
            "formula": self.formula,
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _recover(fn: Callable[[complex], complex], degree: int) -> np.ndarray:
    pts = linalg.sample_points(degree, radius=SAMPLE_RADIUS, extra=EXTRA_SAMPLES,
                               offset=SAMPLE_OFFSET)
    samples = [(t, fn(t)) for t in pts]
    return linalg.interpolate_poly(samples, degree)


def ihara_edge(g: Graph) -> PolynomialReport:
    """``det(I_2m - t (B - J0))``."""
    b, j0 = build_B_J0(g)
    edge = b - j0
    eye = np.eye(g.num_arcs)
    coeffs = _recover(lambda t: linalg.det(eye - t * edge), g.num_arcs)
    return PolynomialReport(coeffs, "edge", g.num_arcs, "ihara")


def ihara_vertex(g: Graph) -> PolynomialReport:
    """``(1 - t^2)^(r-1) det(I_n - t A + t^2 (D - I_n))`` with ``r = m - n + 1``."""
    a, d, _ = build_A_D_T(g)
    eye = np.eye(g.n)
    power = g.betti - 1

    def fn(t):
        return (1 - t * t) ** power * linalg.det(eye - t * a + t * t * (d - eye))

    return PolynomialReport(_recover(fn, g.num_arcs), "vertex", g.num_arcs, "ihara")


def weighted_edge(g: Graph, weights) -> PolynomialReport:
    """``det(I_2m - t (B_w^T - J0))``; equals the Ihara reciprocal for ``w == 1``.

    Raises
    ------
    MissingWeight
    """
    bw = build_Bw(g, weights)
    _, j0 = build_B_J0(g)
    edge = bw.T - j0
    eye = np.eye(g.num_arcs)
    coeffs = _recover(lambda t: linalg.det(eye - t * edge), g.num_arcs)
    return PolynomialReport(coeffs, "edge", g.num_arcs, "weighted")


def _resolve_weights(g: Graph, w_matrix, weights, tol: float = 1e-12):
    if w_matrix is None and weights is None:
        raise ValueError("need a weighted matrix, arc weights, or both")
    if weights is not None:
        w = arc_weights(g, weights)
    if w_matrix is None:
        wm = np.zeros((g.n, g.n), dtype=complex)
        arcs = np.array(g.arcs)
        wm[arcs[:, 0], arcs[:, 1]] = w
        return wm, w
    wm = np.asarray(w_matrix, dtype=complex)
    from_matrix = weights_from_W(g, wm)
    off_arc = wm.copy()
    arcs = np.array(g.arcs)
    off_arc[arcs[:, 0], arcs[:, 1]] = 0.0
    if np.abs(off_arc).max(initial=0.0) > tol:
        raise InconsistentWeights("weighted matrix has nonzero entries outside the arcs of the graph")
    if weights is None:
        return wm, from_matrix
    gap = float(np.abs(from_matrix - w).max(initial=0.0))
    if gap > tol:
        raise InconsistentWeights(f"weighted matrix disagrees with arc weights by {gap:.3g}")
    return wm, w


def weighted_vertex(g: Graph, W=None, weights=None) -> PolynomialReport:
    """``(1 - t^2)^(m-n) det(I_n - t W^T + t^2 (D_w - I_n))``.

    ``D_w`` is diagonal with ``D_w[u, u] = sum of w(e) over arcs leaving u``.
    Either ``W`` or ``weights`` may be omitted; when both are given they must
    agree on every arc.

    Raises
    ------
    InconsistentWeights, MissingWeight
    """
    wm, _ = _resolve_weights(g, W, weights)
    dw = np.diag(wm.sum(axis=1))
    eye = np.eye(g.n)
    power = g.m - g.n

    # for trees the power is -1; the quotient is still a polynomial and is
    # interpolated from pointwise values rather than by dividing coefficients
    def fn(t):
        return (1 - t * t) ** power * linalg.det(eye - t * wm.T + t * t * (dw - eye))

    return PolynomialReport(_recover(fn, g.num_arcs), "vertex", g.num_arcs, "weighted")


def max_discrepancy(*reports: PolynomialReport) -> float:
    """Largest coefficientwise difference between any two reports."""
    worst = 0.0
    for i, a in enumerate(reports):
        for b in reports[i + 1:]:
            n = max(len(a.coefficients), len(b.coefficients))
            ca = np.zeros(n, dtype=complex)
            cb = np.zeros(n, dtype=complex)
            ca[:len(a.coefficients)] = a.coefficients
            cb[:len(b.coefficients)] = b.coefficients
            worst = max(worst, float(np.abs(ca - cb).max(initial=0.0)))
    return worst
