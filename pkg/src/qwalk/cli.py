"""Command-line front end: ``qwalk {spectrum,grover,zeta,verify}``.

Exit status is 0 on success, 1 when ``verify`` finds a failing invariant and
2 on any parse or validation error (the error class name is printed to
standard error).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import load_corpus
from .errors import ConditionViolated, QWalkError
from .graph import Graph, load_path
from .qlinalg import RightSpectrum, is_unitary, right_spectrum
from .quat import Quaternion
from .verify import DEFAULT_SEED, run_all
from .walk import (
    CoinMap,
    build_U,
    build_pm,
    check_unitary_conditions,
    grover_spectrum,
    spectrum_direct,
    spectrum_via_mapping,
    transition_spectrum,
)
from .zeta import ihara_edge, ihara_vertex, max_discrepancy, weighted_edge, weighted_vertex

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "grover", "zeta", "verify")
DEFAULT_CLI_TOL = 1e-10


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph_path: Path | None = None
    alpha: tuple[float, float, float, float] | None = None
    coin_table: Path | None = None
    tol: float = DEFAULT_CLI_TOL
    json: bool = False
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0.0 < self.tol < 1e-2:
            raise ValueError(f"tol must lie in (0, 1e-2), got {self.tol!r}")
        if self.alpha is not None and self.coin_table is not None:
            raise ValueError("--alpha and --coin-table are mutually exclusive")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _cplx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _cplx_text(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and str(z.imag).startswith("-")) else "+"
    return f"{_num(z.real)} {sign} {_num(abs(z.imag))}i"


def _classes_text(spec: RightSpectrum) -> list[str]:
    return [f"  {_cplx_text(r)}  x{m}" for r, m in spec.classes]


def _load_coin(g: Graph, cfg: RunConfig) -> CoinMap:
    if cfg.coin_table is not None:
        return CoinMap.parse_table(g, Path(cfg.coin_table).read_text())
    if cfg.alpha is not None:
        return CoinMap.from_alpha(g, Quaternion(*cfg.alpha))
    return CoinMap.grover(g)


def _spectrum(cfg: RunConfig) -> tuple[dict, list[str]]:
    g = load_path(cfg.graph_path)
    coin = _load_coin(g, cfg)
    report = check_unitary_conditions(g, coin, cfg.tol)
    residuals = dict(report.residuals)
    residuals["q0_bound"] = report.q0_bound
    residuals["constancy"] = report.constancy
    alpha_plus = None
    try:
        walk = build_pm(g, coin, cfg.tol)
    except ConditionViolated as exc:
        # no complex reduction exists; fall back to the embedding alone
        logger.info("coin has no complex reduction: %s", exc)
        walk = None
    if walk is not None:
        spec = spectrum_direct(walk, cfg.tol)
        via_psi = right_spectrum(walk.U, check_residual=False)
        mapped = spectrum_via_mapping(g, walk, cfg.tol)
        residuals["route_disagreement"] = max(spec.distance(via_psi), spec.distance(mapped))
        alpha_plus = walk.alpha_plus
        unitary = is_unitary(walk.U)
    else:
        u = build_U(g, coin)
        spec = right_spectrum(u)
        unitary = is_unitary(u)
    data = {
        "classes": spec.as_dicts(),
        "unitary": bool(unitary),
        "alpha_plus": None if alpha_plus is None else _cplx(alpha_plus),
        "residuals": {k: float(v) for k, v in residuals.items()},
        "unitarity_conditions_passed": bool(report.passed),
    }
    lines = [f"graph: n={g.n} m={g.m}", "right spectrum classes:"] + _classes_text(spec)
    lines.append(f"unitary: {'yes' if unitary else 'no'}")
    if alpha_plus is not None:
        lines.append(f"alpha_plus: {_cplx_text(alpha_plus)}")
    lines.append(f"unitarity conditions: {'pass' if report.passed else 'fail'}")
    lines += [f"  {k}: {_num(v)}" for k, v in data["residuals"].items()]
    return data, lines


def _grover(cfg: RunConfig) -> tuple[dict, list[str]]:
    g = load_path(cfg.graph_path)
    spec = grover_spectrum(g, cfg.tol)
    walk = build_pm(g, CoinMap.grover(g), cfg.tol)
    direct = spectrum_direct(walk, cfg.tol)
    spec_t = transition_spectrum(g)
    data = {
        "classes": spec.as_dicts(),
        "unitary": bool(is_unitary(walk.U)),
        "alpha_plus": _cplx(walk.alpha_plus),
        "transition_spectrum": [float(x) for x in spec_t],
        "residuals": {"route_disagreement": float(spec.distance(direct))},
    }
    lines = [f"graph: n={g.n} m={g.m}", "Grover right spectrum classes:"] + _classes_text(spec)
    lines.append("transition matrix spectrum:")
    lines += [f"  {_num(x)}" for x in spec_t]
    lines.append(f"route disagreement: {_num(data['residuals']['route_disagreement'])}")
    return data, lines


def _zeta(cfg: RunConfig) -> tuple[dict, list[str]]:
    g = load_path(cfg.graph_path)
    if cfg.alpha is None and cfg.coin_table is None:
        weights = np.ones(g.num_arcs, dtype=complex)
    else:
        walk = build_pm(g, _load_coin(g, cfg), cfg.tol)
        d_origin = g.degrees[[u for u, _ in g.arcs]].astype(float)
        weights = walk.alpha_plus / d_origin
    reports = [ihara_edge(g), ihara_vertex(g), weighted_edge(g, weights), weighted_vertex(g, weights=weights)]
    gap_ihara = max_discrepancy(reports[0], reports[1])
    gap_weighted = max_discrepancy(reports[2], reports[3])
    data = {
        "reports": [r.to_dict() for r in reports],
        "max_discrepancy": {"ihara": gap_ihara, "weighted": gap_weighted},
    }
    lines = [f"graph: n={g.n} m={g.m}"]
    for r in reports:
        lines.append(f"{r.function} ({r.formula} side), coefficients of t^0..t^{len(r.coefficients) - 1}:")
        lines += [f"  {_cplx_text(c)}" for c in r.coefficients]
    lines.append(f"max discrepancy ihara: {_num(gap_ihara)}")
    lines.append(f"max discrepancy weighted: {_num(gap_weighted)}")
    return data, lines


def _verify(cfg: RunConfig) -> tuple[dict, list[str], bool]:
    corpus = load_corpus()
    results = run_all(corpus, cfg.seed)
    ok = all(r.passed for r in results)
    data = {
        "passed": ok,
        "seed": cfg.seed,
        "graphs": len(corpus),
        "checks": [
            {"name": r.name, "passed": r.passed, "worst": r.worst, "limit": r.limit} for r in results
        ],
    }
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed on {len(corpus)} graphs")
    return data, lines, ok


def run(cfg: RunConfig, out=None) -> int:
    """Execute one command and write its report to ``out`` (default stdout)."""
    out = sys.stdout if out is None else out
    ok = True
    if cfg.command == "verify":
        data, lines, ok = _verify(cfg)
    else:
        if cfg.graph_path is None:
            raise ValueError(f"{cfg.command} requires --graph")
        handler = {"spectrum": _spectrum, "grover": _grover, "zeta": _zeta}[cfg.command]
        data, lines = handler(cfg)
    if cfg.json:
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def _tol(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1e-2:
        raise argparse.ArgumentTypeError(f"tol must lie in (0, 1e-2), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_tol, default=DEFAULT_CLI_TOL)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("-v", "--verbose", action="store_true")
    for name, help_text in (
        ("spectrum", "right spectrum of the quaternionic transition matrix"),
        ("grover", "right spectrum of the Grover walk and the spectrum of T"),
        ("zeta", "Ihara and weighted zeta reciprocals, edge and vertex side"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--graph", required=True, type=Path, metavar="PATH")
        if name != "grover":
            coin = p.add_mutually_exclusive_group()
            coin.add_argument("--alpha", nargs=4, type=float, metavar=("A0", "A1", "A2", "A3"))
            coin.add_argument("--coin-table", type=Path, metavar="PATH")
    sub.add_parser("verify", parents=[common], help="run the invariant suite on the graph corpus")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(
            command=args.command,
            graph_path=getattr(args, "graph", None),
            alpha=tuple(args.alpha) if getattr(args, "alpha", None) else None,
            coin_table=getattr(args, "coin_table", None),
            tol=args.tol,
            json=args.json,
            seed=args.seed,
        )
        return run(cfg)
    except (QWalkError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
