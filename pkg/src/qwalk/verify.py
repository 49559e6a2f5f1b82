"""Randomized invariant checks over the graph corpus, as run by ``qwalk verify``."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .graph import Graph, build_A_D_T, build_B_J0
from .qlinalg import (
    QuaternionMatrix,
    RightSpectrum,
    _hamilton,
    is_unitary,
    psi,
    right_spectrum,
    spectra_distance,
    unitarity_defect,
)
from .quat import Quaternion, class_rep, from_symplectic, q_inv, q_mul, symplectic
from .walk import (
    CoinMap,
    admissible_alpha,
    build_U,
    build_pm,
    charpoly_sides,
    check_unitary_conditions,
    grover_values,
    perturbed_coin,
    spectrum_direct,
    spectrum_via_mapping,
)
from .zeta import ihara_edge, ihara_vertex, weighted_edge, weighted_vertex

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20160101


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    limit: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name:<40s} worst={self.worst:.3e} limit={self.limit:.1e}{extra}"


def _random_quaternion(rng) -> Quaternion:
    return Quaternion(*rng.standard_normal(4))


def _result(name, worst, limit, detail="") -> CheckResult:
    return CheckResult(name, bool(worst <= limit), float(worst), limit, detail)


def check_quat(corpus, rng) -> list[CheckResult]:
    mult = conj = orbit = 0.0
    roundtrip_ok = True
    for _ in range(1000):
        x, y = _random_quaternion(rng), _random_quaternion(rng)
        mult = max(mult, abs(abs(q_mul(x, y)) - abs(x) * abs(y)) / (abs(x) * abs(y)))
        lhs = q_mul(x, y).conj()
        rhs = q_mul(y.conj(), x.conj())
        conj = max(conj, max(abs(a - b) for a, b in zip(lhs.components, rhs.components)))
        q = _random_quaternion(rng)
        orbit = max(orbit, abs(class_rep(q_mul(q_mul(q_inv(q), x), q)) - class_rep(x)))
        a, b = symplectic(x)
        roundtrip_ok &= from_symplectic(a, b) == x
    return [
        _result("quat: norm multiplicativity", mult, 1e-12),
        _result("quat: conjugation anti-automorphism", conj, 1e-14),
        _result("quat: class_rep constant on orbits", orbit, 1e-10),
        _result("quat: symplectic round-trip exact", 0.0 if roundtrip_ok else 1.0, 0.0),
    ]


def check_linalg(corpus, rng) -> list[CheckResult]:
    trace = prod = circle = 0.0
    for n in (1, 2, 5, 10, 20, 35, 50):
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        vals = linalg.eigenvalues(m).values
        norm = np.linalg.norm(m, 2)
        trace = max(trace, abs(vals.sum() - np.trace(m)) / norm)
        # well conditioned: unitary times a positive diagonal close to 1
        q, _ = np.linalg.qr(m)
        wc = q @ np.diag(rng.uniform(0.5, 1.5, n))
        vals = linalg.eigenvalues(wc).values
        d = linalg.det(wc)
        prod = max(prod, abs(np.prod(vals) - d) / abs(d))
        circle = max(circle, float(np.abs(np.abs(linalg.eigenvalues(q).values) - 1).max()))
    return [
        _result("linalg: eigenvalue sum equals trace", trace, 1e-10),
        _result("linalg: eigenvalue product equals det", prod, 1e-8),
        _result("linalg: unitary input on unit circle", circle, 1e-10),
    ]


def check_qlinalg(corpus, rng, samples: int = 200) -> list[CheckResult]:
    add = mul = ctrans = pairs = conj_inv = 0.0
    for k in range(samples):
        n = 1 + k % 6
        m = QuaternionMatrix.random(n, rng=rng)
        other = QuaternionMatrix.random(n, rng=rng)
        add = max(add, float(np.abs(psi(m + other) - (psi(m) + psi(other))).max()))
        mul = max(mul, float(np.abs(psi(m @ other) - psi(m) @ psi(other)).max()))
        ctrans = max(ctrans, float(np.abs(psi(m.conj_transpose()) - psi(m).conj().T).max()))
        vals = linalg.eigenvalues(psi(m)).values
        pairs = max(pairs, spectra_distance(vals, vals.conj()))
        q = _random_quaternion(rng)
        conj_m = m.scale_left(q_inv(q)).scale_right(q)
        conj_inv = max(conj_inv, right_spectrum(m).distance(right_spectrum(conj_m)))
    circle = 0.0
    for n in (1, 2, 4, 6):
        # QR of a random complex 2n x 2n in psi-image form gives a quaternionic unitary
        m = QuaternionMatrix.random(n, rng=rng)
        u = _quaternionic_unitary(m)
        spec = right_spectrum(u)
        circle = max(circle, max(abs(abs(r) - 1.0) for r, _ in spec.classes))
    return [
        _result("qlinalg: psi additive (exact)", add, 0.0),
        _result("qlinalg: psi multiplicative", mul, 1e-12),
        _result("qlinalg: psi(M*) = psi(M)^H", ctrans, 0.0),
        _result("qlinalg: conjugate-pair closure", pairs, 1e-9),
        _result("qlinalg: invariance under q^-1 M q", conj_inv, 1e-9),
        _result("qlinalg: unitary classes on unit circle", circle, 1e-10),
    ]


def _quaternionic_unitary(m: QuaternionMatrix) -> QuaternionMatrix:
    """Gram-Schmidt on the columns of ``m`` with quaternionic inner products."""
    n = m.shape[0]
    cols = [np.array(m.components[:, j, :]) for j in range(n)]
    done: list[np.ndarray] = []

    def inner(a, b):  # sum_i conj(a_i) b_i
        conj_a = a * np.array([1.0, -1.0, -1.0, -1.0])
        return _hamilton(conj_a, b).sum(axis=0)

    for v in cols:
        w = v.copy()
        for u in done:
            w = w - _hamilton(u, inner(u, w)[None, :])
        norm = np.sqrt(inner(w, w)[0])
        done.append(w / norm)
    return QuaternionMatrix(np.stack(done, axis=1))


def check_graph(corpus, rng) -> list[CheckResult]:
    involution = rowsum = stochastic = 0.0
    betti_ok = True
    for _, g in corpus:
        b, _ = build_B_J0(g)
        involution = max(involution, max(float(g.inverse(g.inverse(e)) != e) for e in range(g.num_arcs)))
        heads = np.array([g.degrees[g.terminal(e)] for e in range(g.num_arcs)])
        rowsum = max(rowsum, float(np.abs(b.sum(axis=1) - heads).max()))
        _, _, t = build_A_D_T(g)
        stochastic = max(stochastic, float(np.abs(t.sum(axis=1) - 1).max()))
        betti_ok &= g.betti >= 0 and ((g.betti == 0) == g.is_tree)
    return [
        _result("graph: arc involution", involution, 0.0),
        _result("graph: B row sums equal head degree", rowsum, 0.0),
        _result("graph: T row-stochastic", stochastic, 1e-14),
        _result("graph: Betti number >= 0, zero iff tree", 0.0 if betti_ok else 1.0, 0.0),
    ]


def check_zeta(corpus, rng, weight_maps: int = 10) -> list[CheckResult]:
    agree = const = real = 0.0
    degree_ok = True
    for _, g in corpus:
        reports = [ihara_edge(g), ihara_vertex(g)]
        agree = max(agree, float(np.abs(reports[0].coefficients - reports[1].coefficients).max()))
        for _ in range(weight_maps):
            w = rng.standard_normal(g.num_arcs) + 1j * rng.standard_normal(g.num_arcs)
            pair = [weighted_edge(g, w), weighted_vertex(g, weights=w)]
            agree = max(agree, float(np.abs(pair[0].coefficients - pair[1].coefficients).max()))
            reports.extend(pair)
        for r in reports:
            # recovery error scales with the largest coefficient
            scale = max(1.0, float(np.abs(r.coefficients).max()))
            const = max(const, abs(r.coefficients[0] - 1) / scale)
            degree_ok &= len(r.coefficients) <= g.num_arcs + 1
        if len(set(int(d) for d in g.degrees)) == 1:
            w = rng.uniform(0.1, 2.0, g.num_arcs)
            for r in (weighted_edge(g, w), weighted_vertex(g, weights=w)):
                real = max(real, float(np.abs(r.coefficients.imag).max()))
    return [
        _result("zeta: edge/vertex agreement", agree, 1e-8),
        _result("zeta: constant term 1 (relative)", const, 1e-10),
        _result("zeta: degree <= 2m", 0.0 if degree_ok else 1.0, 0.0),
        _result("zeta: real weights on regular graph give real coefficients", real, 1e-10),
    ]


def check_walk(corpus, rng, coins: int = 50, lambdas: int = 20) -> list[CheckResult]:
    triple = transfer = circle = charpoly = grover = 0.0
    constancy_fails = True
    for name, g in corpus:
        for _ in range(coins):
            coin = CoinMap.from_alpha(g, admissible_alpha(rng))
            walk = build_pm(g, coin)
            direct = spectrum_direct(walk)
            mapped = spectrum_via_mapping(g, walk)
            via_psi = right_spectrum(walk.U, check_residual=False)
            triple = max(triple, direct.distance(mapped), direct.distance(via_psi), mapped.distance(via_psi))
            if check_unitary_conditions(g, coin, 1e-11).passed:
                transfer = max(transfer, unitarity_defect(walk.U))
                circle = max(circle, max(abs(abs(r) - 1) for r, _ in direct.classes))
        coin = CoinMap.from_alpha(g, admissible_alpha(rng))
        walk = build_pm(g, coin)
        for lam in rng.standard_normal(lambdas) + 1j * rng.standard_normal(lambdas):
            for sign in (+1, -1):
                lhs, rhs = charpoly_sides(walk, complex(lam), sign)
                charpoly = max(charpoly, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
        gw = build_pm(g, CoinMap.grover(g))
        from_t = RightSpectrum.from_values(grover_values(g))
        grover = max(grover, spectrum_via_mapping(g, gw).distance(from_t))
        for _ in range(2):
            bad, kind = perturbed_coin(g, rng)
            if kind == "constancy":
                constancy_fails &= not is_unitary(build_U(g, bad), 1e-11)
    return [
        _result("walk: triple agreement of spectra", triple, 1e-8),
        _result("walk: admissible coins give unitary U", transfer, 1e-11),
        _result("walk: unitary spectra on unit circle", circle, 1e-9),
        _result("walk: characteristic polynomial identity", charpoly, 1e-8),
        _result("walk: alpha=2 reproduces Grover spectrum", grover, 1e-9),
        _result("walk: non-constant coins are not unitary", 0.0 if constancy_fails else 1.0, 0.0),
    ]


CHECKS: list[Callable] = [check_quat, check_linalg, check_qlinalg, check_graph, check_zeta, check_walk]


def run_all(corpus: list[tuple[str, Graph]], seed: int = DEFAULT_SEED) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    for check in CHECKS:
        logger.info("running %s", check.__name__)
        results.extend(check(corpus, rng))
    return results
