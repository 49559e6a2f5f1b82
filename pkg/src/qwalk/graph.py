"""Simple connected graphs with canonical arc indexing.

Edge ``t = {u, v}`` with ``u < v`` contributes arc ``2t = (u, v)`` and arc
``2t + 1 = (v, u)``, so the inverse of an arc flips its lowest bit.  All
``2m x 2m`` matrices are laid out in this order.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import Disconnected, DuplicateEdge, InconsistentWeights, LoopEdge, MissingWeight, ParseError

__all__ = [
    "Graph",
    "load",
    "load_path",
    "complete",
    "star",
    "cycle",
    "path",
    "petersen",
    "build_B_J0",
    "build_A_D_T",
    "build_W",
    "build_Bw",
    "arc_weights",
    "weights_from_W",
]


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected undirected graph on vertices ``0..n-1``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] = ()
    arcs: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    arc_index: dict = field(init=False, repr=False, compare=False)
    degrees: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = []
        seen = set()
        for lineno, (u, v) in enumerate(self.edges, 1):
            u, v = int(u), int(v)
            if u == v:
                raise LoopEdge(f"edge {lineno}: loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {lineno}: vertex out of range 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"edge {lineno}: duplicate edge {key}")
            seen.add(key)
            edges.append(key)
        if not edges:
            raise ParseError("graph has no edges")
        object.__setattr__(self, "edges", tuple(edges))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.n)))
        arcs = []
        for u, v in edges:
            arcs.append((u, v))
            arcs.append((v, u))
        object.__setattr__(self, "arcs", tuple(arcs))
        object.__setattr__(self, "arc_index", {a: i for i, a in enumerate(arcs)})
        deg = np.zeros(self.n, dtype=int)
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        deg.flags.writeable = False
        object.__setattr__(self, "degrees", deg)
        _check_connected(self.n, edges, self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def num_arcs(self) -> int:
        return 2 * len(self.edges)

    @property
    def betti(self) -> int:
        """Cycle rank ``m - n + 1``."""
        return self.m - self.n + 1

    @property
    def is_tree(self) -> bool:
        return self.m == self.n - 1

    def origin(self, e: int) -> int:
        return self.arcs[e][0]

    def terminal(self, e: int) -> int:
        return self.arcs[e][1]

    @staticmethod
    def inverse(e: int) -> int:
        return e ^ 1

    def out_arcs(self, u: int) -> list[int]:
        return [e for e, (o, _) in enumerate(self.arcs) if o == u]

    def neighbors(self, u: int) -> list[int]:
        return [t for o, t in self.arcs if o == u]

    def to_text(self) -> str:
        return "".join(f"{self.labels[u]} {self.labels[v]}\n" for u, v in self.edges)


def _check_connected(n: int, edges, labels) -> None:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != n:
        rest = sorted(set(range(n)) - seen)
        names = ", ".join(labels[v] for v in rest[:10])
        raise Disconnected(
            f"graph is disconnected: vertices {{{names}{', ...' if len(rest) > 10 else ''}}} "
            f"are not reachable from vertex {labels[0]}"
        )


def _label_order(labels: list[str]) -> list[str]:
    try:
        return sorted(labels, key=int)
    except ValueError:
        return labels


def load(text: str) -> Graph:
    """Parse an edge list: one edge per line, two whitespace-separated labels.

    Lines starting with ``#`` and blank lines are ignored.  Labels are
    relabelled to ``0..n-1``: numerically when every label is an integer,
    otherwise in order of first appearance.  The original labels are kept
    in ``Graph.labels``.

    Raises
    ------
    ParseError, LoopEdge, DuplicateEdge, Disconnected
    """
    raw: list[tuple[int, str, str]] = []
    first_seen: list[str] = []
    known = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two vertex labels, got {line!r}")
        a, b = parts
        if a == b:
            raise LoopEdge(f"line {lineno}: loop at vertex {a}")
        raw.append((lineno, a, b))
        for lab in (a, b):
            if lab not in known:
                known.add(lab)
                first_seen.append(lab)
    if not raw:
        raise ParseError("edge list contains no edges")
    order = _label_order(first_seen)
    index = {lab: i for i, lab in enumerate(order)}
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, a, b in raw:
        u, v = index[a], index[b]
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"line {lineno}: edge {a} {b} duplicates line {seen[key]}")
        seen[key] = lineno
        edges.append(key)
    return Graph(len(order), tuple(edges), tuple(order))


def load_path(path) -> Graph:
    return load(Path(path).read_text())


def complete(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def star(n: int) -> Graph:
    """Star ``S_n``: leaves ``0..n-2`` joined to the centre ``n-1``."""
    return Graph(n, tuple((u, n - 1) for u in range(n - 1)))


def cycle(n: int) -> Graph:
    return Graph(n, tuple((u, (u + 1) % n) for u in range(n)))


def path(n: int) -> Graph:
    return Graph(n, tuple((u, u + 1) for u in range(n - 1)))


def petersen() -> Graph:
    outer = [(u, (u + 1) % 5) for u in range(5)]
    spokes = [(u, u + 5) for u in range(5)]
    inner = [(5 + u, 5 + (u + 2) % 5) for u in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def build_B_J0(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """``B[e, f] = 1`` iff ``t(e) == o(f)``; ``J0[e, f] = 1`` iff ``f == e^-1``."""
    arcs = np.array(g.arcs)
    b = (arcs[:, 1][:, None] == arcs[:, 0][None, :]).astype(float)
    j0 = np.zeros((g.num_arcs, g.num_arcs))
    idx = np.arange(g.num_arcs)
    j0[idx, idx ^ 1] = 1.0
    return b, j0


def build_A_D_T(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Adjacency, degree matrix and simple random walk ``T = D^-1 A``."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1.0
    deg = g.degrees.astype(float)
    return a, np.diag(deg), a / deg[:, None]


def build_W(g: Graph, alpha_c: complex) -> np.ndarray:
    """Weighted vertex matrix ``W[u, v] = alpha_c / d_u`` on arcs, i.e. ``alpha_c * T``."""
    _, _, t = build_A_D_T(g)
    return complex(alpha_c) * t


def arc_weights(g: Graph, weights) -> np.ndarray:
    """Weights as a length-``2m`` complex vector in arc order.

    ``weights`` is either a sequence indexed by arc number or a mapping from
    arc tuples ``(u, v)`` to values.

    Raises
    ------
    MissingWeight
        If some arc has no weight.
    """
    if isinstance(weights, Mapping):
        out = np.empty(g.num_arcs, dtype=complex)
        for e, arc in enumerate(g.arcs):
            if arc in weights:
                out[e] = weights[arc]
            elif e in weights:
                out[e] = weights[e]
            else:
                raise MissingWeight(f"no weight for arc {arc}")
        return out
    out = np.asarray(weights, dtype=complex).ravel()
    if out.size != g.num_arcs:
        raise MissingWeight(f"expected {g.num_arcs} arc weights, got {out.size}")
    return out


def weights_from_W(g: Graph, w_matrix) -> np.ndarray:
    """Arc weights ``w(u, v) = W[u, v]`` read off a weighted vertex matrix."""
    w = np.asarray(w_matrix, dtype=complex)
    if w.shape != (g.n, g.n):
        raise InconsistentWeights(f"weighted matrix must be {g.n}x{g.n}, got {w.shape}")
    arcs = np.array(g.arcs)
    return w[arcs[:, 0], arcs[:, 1]]


def build_Bw(g: Graph, weights) -> np.ndarray:
    """``B_w[e, f] = w(f)`` iff ``t(e) == o(f)``."""
    w = arc_weights(g, weights)
    b, _ = build_B_J0(g)
    return b * w[None, :]
