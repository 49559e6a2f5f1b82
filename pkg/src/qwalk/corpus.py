"""Built-in test corpus: every connected graph on 2..5 vertices, Petersen, C8.

The graphs ship as edge-list files in ``qwalk/corpus/``.  Setting
``QWALK_CORPUS_DIR`` points :func:`load_corpus` at another directory of
``*.txt`` edge lists.
"""

from __future__ import annotations

import itertools
import os
from pathlib import Path

from .graph import Graph, cycle, load_path, petersen

__all__ = ["connected_graphs", "builtin_graphs", "corpus_dir", "load_corpus", "write_corpus"]

ENV_VAR = "QWALK_CORPUS_DIR"
_BUILTIN = Path(__file__).with_name("corpus")


def _is_connected(n: int, edges) -> bool:
    adj = {u: set() for u in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        for v in adj[stack.pop()] - seen:
            seen.add(v)
            stack.append(v)
    return len(seen) == n


def connected_graphs(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Edge sets of all connected graphs on ``n`` vertices, one per isomorphism class.

    Each graph is given by its lexicographically smallest relabelling;
    brute force over all edge subsets and vertex permutations, fine for n <= 6.
    """
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    found = set()
    for mask in range(1, 1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len(edges) < n - 1 or not _is_connected(n, edges):
            continue
        canon = min(
            tuple(sorted((min(p[u], p[v]), max(p[u], p[v])) for u, v in edges))
            for p in perms
        )
        found.add(canon)
    return sorted(found, key=lambda es: (len(es), es))


def builtin_graphs() -> dict[str, Graph]:
    out: dict[str, Graph] = {}
    for n in range(2, 6):
        for k, edges in enumerate(connected_graphs(n)):
            out[f"n{n}_{k:02d}"] = Graph(n, edges)
    out["petersen"] = petersen()
    out["c8"] = cycle(8)
    return out


def write_corpus(directory) -> list[Path]:
    """(Re)generate the edge-list files of the built-in corpus."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, g in builtin_graphs().items():
        path = directory / f"{name}.txt"
        path.write_text(f"# {name}: n={g.n} m={g.m}\n" + g.to_text())
        written.append(path)
    return written


def corpus_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else _BUILTIN


def load_corpus(directory=None) -> list[tuple[str, Graph]]:
    """All ``*.txt`` edge lists in the corpus directory, sorted by name."""
    directory = Path(directory) if directory is not None else corpus_dir()
    files = sorted(directory.glob("*.txt"))
    if not files:
        raise FileNotFoundError(f"no *.txt edge lists in corpus directory {directory}")
    return [(p.stem, load_path(p)) for p in files]
