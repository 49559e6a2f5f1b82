"""Quaternionic transition matrices of Grover-type walks and their spectra.

For a coin ``q: arcs -> H`` the transition matrix is

    U[e, f] = q(e)       if t(f) = o(e) and f != e^-1
            = q(e) - 1   if f = e^-1
            = 0          otherwise.

When ``q(e) = alpha / d_o(e)`` the quaternionic conjugates of ``U`` that are
complex are ``U+`` and ``U- = conj(U+)``, obtained by replacing ``alpha``
with ``alpha+- = alpha_0 +- |Im alpha| i``.  The right spectrum of ``U`` is
then read off ``Spec(U+)``, or mapped from ``Spec(W+^T)`` with
``W+ = alpha+ T`` through ``lambda^2 - mu lambda + (alpha+ - 1) = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ConditionViolated, ParseError, TreeCancellationFailure
from .graph import Graph, build_A_D_T, build_B_J0, build_Bw
from .qlinalg import QuaternionMatrix, RightSpectrum, pair_conjugates
from .quat import Quaternion, class_rep, parse_quaternion

__all__ = [
    "CoinMap",
    "WalkMatrices",
    "UnitarityReport",
    "build_U",
    "check_unitary_conditions",
    "build_pm",
    "spectrum_via_mapping",
    "spectrum_direct",
    "grover_spectrum",
    "transition_spectrum",
    "charpoly_sides",
    "admissible_alpha",
    "perturbed_coin",
]

DEFAULT_TOL = 1e-10
TREE_TOL = 1e-8
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CoinMap:
    """Quaternion ``q(e)`` for every arc, in the graph's arc order."""

    q: tuple[Quaternion, ...]

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(Quaternion.coerce(x) for x in self.q))

    def __len__(self):
        return len(self.q)

    def __getitem__(self, e: int) -> Quaternion:
        return self.q[e]

    @classmethod
    def from_alpha(cls, g: Graph, alpha) -> "CoinMap":
        """``q(e) = alpha / d_o(e)``."""
        alpha = Quaternion.coerce(alpha)
        return cls(tuple(alpha / int(g.degrees[u]) for u, _ in g.arcs))

    @classmethod
    def grover(cls, g: Graph) -> "CoinMap":
        return cls.from_alpha(g, 2.0)

    @classmethod
    def from_mapping(cls, g: Graph, table) -> "CoinMap":
        missing = [arc for arc in g.arcs if arc not in table]
        if missing:
            raise ParseError(f"coin table has no entry for arc(s) {missing[:5]}")
        return cls(tuple(table[arc] for arc in g.arcs))

    @classmethod
    def parse_table(cls, g: Graph, text: str) -> "CoinMap":
        """Per-arc table, one ``u v a0 a1 a2 a3`` line per arc.

        ``u`` and ``v`` use the labels of the edge-list file.
        """
        index = {lab: i for i, lab in enumerate(g.labels)}
        table = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 6:
                raise ParseError(f"coin table line {lineno}: expected 'u v a0 a1 a2 a3', got {line!r}")
            u, v = parts[:2]
            if u not in index or v not in index:
                raise ParseError(f"coin table line {lineno}: unknown vertex in {u!r} {v!r}")
            arc = (index[u], index[v])
            if arc not in g.arc_index:
                raise ParseError(f"coin table line {lineno}: ({u}, {v}) is not an arc of the graph")
            if arc in table:
                raise ParseError(f"coin table line {lineno}: arc ({u}, {v}) listed twice")
            try:
                table[arc] = Quaternion(*(float(x) for x in parts[2:]))
            except ValueError as exc:
                raise ParseError(f"coin table line {lineno}: {exc}") from None
        return cls.from_mapping(g, table)

    def components(self) -> np.ndarray:
        return np.array([x.components for x in self.q])


def build_U(g: Graph, coin: CoinMap) -> QuaternionMatrix:
    """Quaternionic transition matrix in arc order."""
    if len(coin) != g.num_arcs:
        raise ValueError(f"coin has {len(coin)} values for {g.num_arcs} arcs")
    arcs = np.array(g.arcs)
    # U[e, f] nonzero iff t(f) == o(e)
    pattern = (arcs[None, :, 1] == arcs[:, None, 0]).astype(float)
    q = coin.components()
    comps = pattern[:, :, None] * q[:, None, :]
    idx = np.arange(g.num_arcs)
    comps[idx, idx ^ 1, 0] -= 1.0
    return QuaternionMatrix(comps)


@dataclass
class UnitarityReport:
    """Residuals of the unitarity equations for a coin.

    ``residuals`` maps each equation to its largest absolute residual.
    ``norm`` is ``|q(e)|^2 - 2 q0(e) / d`` over arcs.  ``pair_1`` and
    ``pair_i``, ``pair_j``, ``pair_k`` are the four components of
    ``d q(e) q(f)^* - q(e) - q(f)^*`` over ordered pairs of distinct arcs
    with a common origin.  ``q0_bound`` is the largest violation of
    ``0 <= q0(e) <= 2/d`` and ``constancy`` the largest ``|q(e) - q(f)|``
    over such pairs.  ``reduced_passed`` is the equivalent short form:
    ``norm`` holds and ``q`` is constant on the out-arcs of every vertex.
    """

    residuals: dict[str, float]
    q0_bound: float
    constancy: float
    tol: float
    passed: bool = field(init=False)
    reduced_passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = all(v <= self.tol for v in self.residuals.values()) and self.q0_bound <= self.tol
        self.reduced_passed = self.residuals["norm"] <= self.tol and self.constancy <= self.tol

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "reduced_passed": self.reduced_passed,
            "residuals": dict(self.residuals),
            "q0_bound": self.q0_bound,
            "constancy": self.constancy,
        }


def check_unitary_conditions(g: Graph, coin: CoinMap, tol: float = DEFAULT_TOL) -> UnitarityReport:
    """Evaluate the five scalar equations equivalent to unitarity of ``U``."""
    q = coin.components()
    d = g.degrees[[u for u, _ in g.arcs]].astype(float)
    eq1 = np.abs((q * q).sum(axis=1) - 2.0 * q[:, 0] / d)
    bound = np.maximum.reduce([-q[:, 0], q[:, 0] - 2.0 / d, np.zeros(len(d))])
    worst = {"norm": float(eq1.max(initial=0.0))}
    for name in ("pair_1", "pair_i", "pair_j", "pair_k"):
        worst[name] = 0.0
    constancy = 0.0
    for u in range(g.n):
        out = g.out_arcs(u)
        du = float(g.degrees[u])
        for e in out:
            for f in out:
                if e == f:
                    continue
                a0, a1, a2, a3 = q[e]
                b0, b1, b2, b3 = q[f]
                r = (
                    (a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3) * du - (a0 + b0),
                    (-a0 * b1 + a1 * b0 - a2 * b3 + a3 * b2) * du - (a1 - b1),
                    (-a0 * b2 + a2 * b0 - a3 * b1 + a1 * b3) * du - (a2 - b2),
                    (-a0 * b3 + a3 * b0 - a1 * b2 + a2 * b1) * du - (a3 - b3),
                )
                for name, val in zip(("pair_1", "pair_i", "pair_j", "pair_k"), r):
                    worst[name] = max(worst[name], abs(val))
                constancy = max(constancy, float(np.abs(q[e] - q[f]).max()))
    return UnitarityReport(worst, float(bound.max(initial=0.0)), constancy, tol)


@dataclass
class WalkMatrices:
    """``U`` together with its complex conjugates ``U+-`` and ``W+- = alpha+- T``."""

    graph: Graph
    U: QuaternionMatrix
    alpha: Quaternion
    alpha_plus: complex
    alpha_minus: complex
    U_plus: np.ndarray
    U_minus: np.ndarray
    W_plus: np.ndarray
    W_minus: np.ndarray


def _alpha_pm(alpha: Quaternion) -> tuple[complex, complex]:
    rep = class_rep(alpha)
    return rep, rep.conjugate()


def build_pm(g: Graph, coin: CoinMap, tol: float = DEFAULT_TOL) -> WalkMatrices:
    """Split ``U`` into its complex conjugates ``U+`` and ``U-``.

    Raises
    ------
    ConditionViolated
        If ``sum_{o(e)=u} q(e)`` differs between vertices, or a coin value
        differs from ``alpha / d_o(e)``, by more than ``tol``.
    """
    q = coin.components()
    sums = np.zeros((g.n, 4))
    for e, (u, _) in enumerate(g.arcs):
        sums[u] += q[e]
    alpha_vec = sums[0]
    for u in range(1, g.n):
        gap = float(np.abs(sums[u] - alpha_vec).max())
        if gap > tol:
            raise ConditionViolated(
                f"sum of coin values leaving vertex {g.labels[u]} differs from vertex "
                f"{g.labels[0]} by {gap:.3g}",
                vertex=u,
            )
    for e, (u, _) in enumerate(g.arcs):
        gap = float(np.abs(q[e] - alpha_vec / g.degrees[u]).max())
        if gap > tol:
            raise ConditionViolated(
                f"coin value on arc {g.arcs[e]} is not alpha/d at vertex {g.labels[u]} "
                f"(off by {gap:.3g})",
                vertex=u,
            )
    alpha = Quaternion(*alpha_vec)
    a_plus, a_minus = _alpha_pm(alpha)
    d_origin = g.degrees[[u for u, _ in g.arcs]].astype(float)
    _, j0 = build_B_J0(g)
    u_plus = build_Bw(g, a_plus / d_origin).T - j0
    u_minus = build_Bw(g, a_minus / d_origin).T - j0
    _, _, t = build_A_D_T(g)
    return WalkMatrices(
        graph=g,
        U=build_U(g, coin),
        alpha=alpha,
        alpha_plus=a_plus,
        alpha_minus=a_minus,
        U_plus=u_plus,
        U_minus=u_minus,
        W_plus=a_plus * t,
        W_minus=a_minus * t,
    )


def _quadratic_roots(mu: complex, c: complex) -> tuple[complex, complex]:
    """Roots of ``x^2 - mu x + c``.

    A discriminant at rounding level is set to zero: its square root would
    otherwise turn an ``eps`` error in ``mu`` into an ``sqrt(eps)`` split of
    a genuine double root.
    """
    disc = mu * mu - 4.0 * c
    if abs(disc) <= 64 * _EPS * max(abs(mu) ** 2, 4 * abs(c), 1.0):
        disc = 0.0
    s = np.sqrt(complex(disc))
    big = 0.5 * (mu + s) if abs(mu + s) >= abs(mu - s) else 0.5 * (mu - s)
    if big == 0:
        return 0j, 0j
    return complex(big), complex(c / big)


def _remove_nearest(values: list[complex], target: float, tol: float) -> None:
    dist = [abs(v - target) for v in values]
    k = int(np.argmin(dist)) if dist else -1
    if k < 0 or dist[k] > tol:
        raise TreeCancellationFailure(
            f"tree case: no mapped eigenvalue within {tol:.1g} of {target:+g}"
        )
    del values[k]


def _mapped_side(g: Graph, w: np.ndarray, alpha_c: complex, tol: float) -> list[complex]:
    mus = linalg.eigenvalues(w.T, check_residual=False).values
    out: list[complex] = []
    for mu in mus:
        out.extend(_quadratic_roots(complex(mu), alpha_c - 1.0))
    if g.is_tree:
        _remove_nearest(out, 1.0, TREE_TOL)
        _remove_nearest(out, -1.0, TREE_TOL)
    else:
        extra = g.m - g.n
        out.extend([1.0 + 0j] * extra + [-1.0 + 0j] * extra)
    return out


def spectrum_via_mapping(g: Graph, walk: WalkMatrices, tol: float = DEFAULT_TOL) -> RightSpectrum:
    """Right spectrum of ``U`` from the eigenvalues of ``W+^T`` and ``W-^T``.

    Every ``mu`` in ``Spec(W+^T)`` yields the two roots of
    ``lambda^2 - mu lambda + (alpha+ - 1)``; the remaining eigenvalues are
    ``+1`` and ``-1``, ``m - n`` of each per side.  For a tree one ``+1`` and
    one ``-1`` are removed from each side instead.

    Raises
    ------
    TreeCancellationFailure
    PairingFailure
    """
    plus = _mapped_side(g, walk.W_plus, walk.alpha_plus, tol)
    minus = _mapped_side(g, walk.W_minus, walk.alpha_minus, tol)
    reps = pair_conjugates(plus + minus, pair_tol=10 * tol, snap_tol=tol)
    return RightSpectrum(tuple(linalg.cluster(reps)))


def spectrum_direct(walk: WalkMatrices, tol: float = DEFAULT_TOL) -> RightSpectrum:
    """Right spectrum of ``U`` as the classes of ``Spec(U+)``."""
    res = linalg.eigenvalues(walk.U_plus, check_residual=False)
    return RightSpectrum.from_values(res.values)


def transition_spectrum(g: Graph) -> np.ndarray:
    """Eigenvalues of ``T``, real and sorted.

    Computed on the symmetric ``D^-1/2 A D^-1/2`` similar to ``T`` and
    clipped to ``[-1, 1]``.
    """
    a, d, _ = build_A_D_T(g)
    s = np.diag(np.diag(d) ** -0.5)
    sym = s @ a @ s
    vals = linalg.eigenvalues(sym, check_residual=False).values.real
    return np.sort(np.clip(vals, -1.0, 1.0))


def grover_values(g: Graph) -> list[complex]:
    """``Spec(U^Gro)``: ``l_T +- i sqrt(1 - l_T^2)`` plus ``m - n`` each of ``+-1``."""
    out: list[complex] = []
    for lt in transition_spectrum(g):
        r = 1.0 - lt * lt
        if r <= 64 * _EPS:
            r = 0.0
        im = math.sqrt(r)
        out.append(complex(lt, im))
        out.append(complex(lt, -im))
    if g.is_tree:
        _remove_nearest(out, 1.0, TREE_TOL)
        _remove_nearest(out, -1.0, TREE_TOL)
    else:
        extra = g.m - g.n
        out.extend([1.0 + 0j] * extra + [-1.0 + 0j] * extra)
    return out


def grover_spectrum(g: Graph, tol: float = DEFAULT_TOL) -> RightSpectrum:
    """Right spectrum of the Grover matrix from the spectrum of ``T``."""
    return RightSpectrum.from_values(grover_values(g))


def charpoly_sides(walk: WalkMatrices, lam: complex, sign: int = +1) -> tuple[complex, complex]:
    """Both sides of ``det(lam I - U+) = (lam^2 - 1)^(m-n) det((lam^2 + alpha+ - 1) I - lam W+^T)``.

    ``sign=-1`` evaluates the ``U-`` version.
    """
    g = walk.graph
    if sign > 0:
        u, w, a = walk.U_plus, walk.W_plus, walk.alpha_plus
    else:
        u, w, a = walk.U_minus, walk.W_minus, walk.alpha_minus
    lhs = linalg.det(lam * np.eye(g.num_arcs) - u)
    rhs = (lam * lam - 1) ** (g.m - g.n) * linalg.det(
        (lam * lam + a - 1) * np.eye(g.n) - lam * w.T
    )
    return lhs, rhs


def admissible_alpha(rng) -> Quaternion:
    """Random ``alpha`` with ``|alpha|^2 = 2 alpha_0``.

    ``alpha_0`` is uniform on ``(0, 2)`` and the pure part points in a
    uniformly random direction with length ``sqrt(2 alpha_0 - alpha_0^2)``.
    """
    rng = np.random.default_rng(rng)
    a0 = rng.uniform(0.0, 2.0)
    while a0 == 0.0:
        a0 = rng.uniform(0.0, 2.0)
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    length = math.sqrt(max(2.0 * a0 - a0 * a0, 0.0))
    return Quaternion(a0, *(length * direction))


def perturbed_coin(g: Graph, rng, min_violation: float = 1e-3) -> tuple[CoinMap, str]:
    """A coin that makes ``U`` non-unitary.

    Either ``|alpha|^2 - 2 alpha_0`` is pushed away from zero by at least
    ``min_violation``, or (on a vertex of degree >= 2) one outgoing arc gets a
    different admissible value than its siblings.  Returns the coin and the
    kind of violation (``"norm"`` or ``"constancy"``).
    """
    rng = np.random.default_rng(rng)
    branching = [u for u in range(g.n) if g.degrees[u] >= 2]
    if branching and rng.random() < 0.5:
        alpha = admissible_alpha(rng)
        other = admissible_alpha(rng)
        while max(abs(x - y) for x, y in zip(alpha.components, other.components)) < min_violation:
            other = admissible_alpha(rng)
        u = int(rng.choice(branching))
        e = g.out_arcs(u)[int(rng.integers(g.degrees[u]))]
        q = list(CoinMap.from_alpha(g, alpha).q)
        q[e] = other / int(g.degrees[u])
        return CoinMap(tuple(q)), "constancy"
    alpha = admissible_alpha(rng)
    a0 = alpha.x0
    delta = rng.uniform(min_violation, 0.1) * rng.choice([-1.0, 1.0])
    target = 2.0 * a0 - a0 * a0 + delta
    if target < 0:
        delta = -delta
        target = 2.0 * a0 - a0 * a0 + delta
    imag = np.array(alpha.components[1:])
    norm = np.linalg.norm(imag)
    imag = imag / norm * math.sqrt(target) if norm > 0 else np.array([math.sqrt(target), 0.0, 0.0])
    return CoinMap.from_alpha(g, Quaternion(a0, *imag)), "norm"
