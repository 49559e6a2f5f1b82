import math

import numpy as np
import pytest

from conftest import K3_ALPHA, S4_ALPHA
from qwalk.errors import ConditionViolated, ParseError
from qwalk.graph import build_B_J0, complete, cycle, load, path
from qwalk.qlinalg import QuaternionMatrix, RightSpectrum, is_unitary, psi, right_spectrum, spectra_distance
from qwalk.quat import Quaternion, class_rep
from qwalk.walk import (
    CoinMap,
    admissible_alpha,
    build_pm,
    build_U,
    charpoly_sides,
    check_unitary_conditions,
    grover_spectrum,
    grover_values,
    perturbed_coin,
    spectrum_direct,
    spectrum_via_mapping,
    transition_spectrum,
)

# The reference K3 matrix lists arcs (0,1),(1,0),(1,2),(2,1),(2,0),(0,2);
# ours puts (0,2) before (2,0).  REFERENCE_TO_OURS[i] is our index of printed arc i.
REFERENCE_TO_OURS = [0, 1, 2, 3, 5, 4]
SQ7 = math.sqrt(7)


def reference_k3_U(a):
    h, h1 = a / 2, a / 2 - 1
    z = 0
    return QuaternionMatrix.from_entries([
        [z, h1, z, z, h, z],
        [h1, z, z, h, z, z],
        [h, z, z, h1, z, z],
        [z, z, h1, z, z, h],
        [z, z, h, z, z, h1],
        [z, h, z, z, h1, z],
    ])


def reference_s4_U(a):
    t, t1, a1 = a / 3, a / 3 - 1, a - 1
    z = 0
    return QuaternionMatrix.from_entries([
        [z, a1, z, z, z, z],
        [t1, z, t, z, t, z],
        [z, z, z, a1, z, z],
        [t, z, t1, z, t, z],
        [z, z, z, z, z, a1],
        [t, z, t, z, t1, z],
    ])


def permuted(m, perm):
    c = m.components
    return QuaternionMatrix(c[np.ix_(perm, perm)])


def numpy_classes(u):
    """Oracle: numpy eigenvalues of psi(U) folded to Im >= 0, each class listed twice."""
    return np.array([complex(v.real, abs(v.imag)) for v in np.linalg.eigvals(psi(u))])


def test_build_U_matches_reference_k3(k3):
    u = build_U(k3, CoinMap.from_alpha(k3, K3_ALPHA))
    assert permuted(u, REFERENCE_TO_OURS).allclose(reference_k3_U(K3_ALPHA), atol=1e-15)


def test_build_U_matches_reference_s4(s4):
    u = build_U(s4, CoinMap.from_alpha(s4, S4_ALPHA))
    assert u.allclose(reference_s4_U(S4_ALPHA), atol=1e-15)


def test_reference_grover_matrices(k3, s4):
    k3_gro = np.array([
        [0, 0, 0, 0, 1, 0], [0, 0, 0, 1, 0, 0], [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1], [0, 0, 1, 0, 0, 0], [0, 1, 0, 0, 0, 0],
    ])
    u = build_U(k3, CoinMap.grover(k3))
    assert np.array_equal(permuted(u, REFERENCE_TO_OURS).simplex, k3_gro)
    s4_gro = np.array([
        [0, 1, 0, 0, 0, 0], [-1 / 3, 0, 2 / 3, 0, 2 / 3, 0], [0, 0, 0, 1, 0, 0],
        [2 / 3, 0, -1 / 3, 0, 2 / 3, 0], [0, 0, 0, 0, 0, 1], [2 / 3, 0, 2 / 3, 0, -1 / 3, 0],
    ])
    u = build_U(s4, CoinMap.grover(s4))
    assert np.abs(u.simplex - s4_gro).max() <= 1e-15 and np.all(u.perplex == 0)


def test_zero_coin_gives_minus_J0(k3):
    _, j0 = build_B_J0(k3)
    u = build_U(k3, CoinMap(tuple(Quaternion() for _ in range(6))))
    assert u == QuaternionMatrix.from_complex(-j0)


@pytest.mark.parametrize("alpha", [K3_ALPHA, Quaternion(2)])
def test_unitarity_conditions_pass(k3, alpha):
    coin = CoinMap.from_alpha(k3, alpha)
    report = check_unitary_conditions(k3, coin)
    assert report.passed and report.reduced_passed
    assert is_unitary(build_U(k3, coin))


def test_unitarity_conditions_fail_on_non_constant_coin(k3):
    other = Quaternion(1, 0.5, -0.5, math.sqrt(2) / 2)  # also |a|^2 = 2 a0, different axis
    q = list(CoinMap.from_alpha(k3, K3_ALPHA).q)
    q[0] = other / 2
    coin = CoinMap(tuple(q))
    report = check_unitary_conditions(k3, coin)
    assert not report.passed and not report.reduced_passed
    assert max(report.residuals[k] for k in ("pair_i", "pair_j", "pair_k")) > 1e-3
    assert not is_unitary(build_U(k3, coin))


def test_unitarity_conditions_fail_on_norm(k3):
    coin = CoinMap.from_alpha(k3, Quaternion(1, 1, 0, 0.1))
    report = check_unitary_conditions(k3, coin)
    assert report.residuals["norm"] > 1e-3 and not report.passed
    assert not is_unitary(build_U(k3, coin))


def test_unitarity_equivalence_random(corpus):
    rng = np.random.default_rng(99)
    for _, g in corpus[::4]:
        for _ in range(5):
            coin = CoinMap.from_alpha(g, admissible_alpha(rng))
            assert check_unitary_conditions(g, coin, 1e-11).passed
            assert is_unitary(build_U(g, coin))
            bad, _ = perturbed_coin(g, rng)
            assert not check_unitary_conditions(g, bad, 1e-11).passed
            assert not is_unitary(build_U(g, bad))


def test_admissible_alpha_constraint():
    rng = np.random.default_rng(0)
    for _ in range(500):
        a = admissible_alpha(rng)
        assert 0 < a.x0 < 2
        assert abs(a.norm2() - 2 * a.x0) <= 1e-14


def test_build_pm_examples(k3, s4):
    walk = build_pm(k3, CoinMap.from_alpha(k3, K3_ALPHA))
    assert abs(walk.alpha_plus - (1 + 1j)) < 1e-15 and walk.alpha_minus == walk.alpha_plus.conjugate()
    assert np.array_equal(walk.U_minus, walk.U_plus.conj())
    walk = build_pm(s4, CoinMap.from_alpha(s4, S4_ALPHA))
    assert abs(walk.alpha_plus - complex(4 / 3, 2 * math.sqrt(2) / 3)) < 1e-15
    assert walk.alpha_plus == class_rep(walk.alpha)
    gro = build_pm(s4, CoinMap.grover(s4))
    assert np.array_equal(gro.U_plus, gro.U_minus)
    assert np.array_equal(gro.U_plus, build_U(s4, CoinMap.grover(s4)).simplex)


def test_U_plus_is_complex_image_of_U(corpus):
    # U+ = conj by a unit quaternion of U, so it must be a right-spectrum twin of U
    rng = np.random.default_rng(11)
    for _, g in corpus[::5]:
        walk = build_pm(g, CoinMap.from_alpha(g, admissible_alpha(rng)))
        oracle = numpy_classes(walk.U)
        direct = np.repeat(spectrum_direct(walk).representatives(), 2)
        assert spectra_distance(direct, oracle) <= 1e-9


def test_build_pm_condition_violated(k3):
    q = list(CoinMap.from_alpha(k3, K3_ALPHA).q)
    q[2] = q[2] * 1.1  # arc (1, 2): vertex 1 now sums to a different value
    with pytest.raises(ConditionViolated) as info:
        build_pm(k3, CoinMap(tuple(q)))
    assert info.value.vertex == 1
    # same sum at every vertex but unequal split between arcs
    q = list(CoinMap.grover(k3).q)
    for e in range(6):
        o = k3.arcs[e][0]
        first = k3.out_arcs(o)[0]
        q[e] = Quaternion(1.5) if e == first else Quaternion(0.5)
    with pytest.raises(ConditionViolated):
        build_pm(k3, CoinMap(tuple(q)))


K3_CLASSES = [
    (1, 1),
    (1j, 1),
    (complex((-1 + SQ7) / 4, (1 + SQ7) / 4), 2),
    (complex((-1 - SQ7) / 4, (SQ7 - 1) / 4), 2),
]
S4_CLASSES = [
    (complex(1 / math.sqrt(3), math.sqrt(2 / 3)), 2),
    (complex(-1 / math.sqrt(3), math.sqrt(2 / 3)), 2),
    (complex(1 / 3, 2 * math.sqrt(2) / 3), 1),
    (complex(-1 / 3, 2 * math.sqrt(2) / 3), 1),
]


def assert_classes(spec, expected, tol=1e-9):
    assert spec.size == sum(m for _, m in expected)
    assert spec.distance(RightSpectrum(tuple(expected))) <= tol
    assert sorted(m for _, m in spec.classes) == sorted(m for _, m in expected)


@pytest.mark.parametrize("which", ["k3", "s4"])
def test_example_spectra_all_routes(which, k3, s4):
    g, alpha, expected = {"k3": (k3, K3_ALPHA, K3_CLASSES), "s4": (s4, S4_ALPHA, S4_CLASSES)}[which]
    walk = build_pm(g, CoinMap.from_alpha(g, alpha))
    for spec in (spectrum_direct(walk), spectrum_via_mapping(g, walk), right_spectrum(walk.U)):
        assert_classes(spec, expected)


def test_grover_examples(k3, s4):
    assert_classes(grover_spectrum(k3), [(1, 2), (complex(-0.5, math.sqrt(3) / 2), 4)])
    assert_classes(grover_spectrum(s4), [(1, 1), (-1, 1), (1j, 4)])
    assert_classes(grover_spectrum(cycle(4)), [(1, 2), (-1, 2), (1j, 4)])


def test_grover_against_brute_force(corpus):
    for _, g in corpus:
        u = build_U(g, CoinMap.grover(g)).simplex.real
        brute = np.linalg.eigvals(u)
        assert np.abs(np.abs(brute) - 1).max() <= 1e-10
        from_t = np.array(grover_values(g))
        assert spectra_distance(from_t, brute) <= 1e-6  # defective +-1 blocks on trees limit numpy
        assert np.abs(np.abs(from_t) - 1).max() <= 1e-12


def test_transition_spectrum_examples(k3, s4):
    assert np.allclose(transition_spectrum(k3), [-0.5, -0.5, 1], atol=1e-14)
    assert np.allclose(transition_spectrum(s4), [-1, 0, 0, 1], atol=1e-14)


def test_grover_reduction_via_mapping(corpus):
    for _, g in corpus:
        walk = build_pm(g, CoinMap.grover(g))
        assert spectrum_via_mapping(g, walk).distance(grover_spectrum(g)) <= 1e-9


def test_charpoly_identity(corpus):
    rng = np.random.default_rng(5)
    for _, g in corpus:
        walk = build_pm(g, CoinMap.from_alpha(g, admissible_alpha(rng)))
        for lam in rng.standard_normal(5) + 1j * rng.standard_normal(5):
            for sign in (1, -1):
                lhs, rhs = charpoly_sides(walk, complex(lam), sign)
                assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs))


def test_single_edge_tree():
    g = path(2)
    walk = build_pm(g, CoinMap.from_alpha(g, K3_ALPHA))
    spec = spectrum_via_mapping(g, walk)
    assert spec.distance(spectrum_direct(walk)) <= 1e-12


def test_non_unitary_coin_still_agrees(k3):
    # the three routes do not need unitarity, only q(e) = alpha / d
    walk = build_pm(k3, CoinMap.from_alpha(k3, Quaternion(0.3, -2, 1, 0.5)))
    direct = spectrum_direct(walk)
    assert direct.distance(spectrum_via_mapping(k3, walk)) <= 1e-9
    assert direct.distance(right_spectrum(walk.U)) <= 1e-9


def test_coin_table_parsing():
    g = load("a b\nb c\nc a\n")
    lines = [f"{g.labels[u]} {g.labels[v]} 1 0.5 0.70710678118654752 -0.5" for u, v in g.arcs]
    coin = CoinMap.parse_table(g, "# header\n" + "\n".join(lines))
    assert all(q == Quaternion(1, 0.5, 0.70710678118654752, -0.5) for q in coin.q)
    with pytest.raises(ParseError, match="no entry"):
        CoinMap.parse_table(g, "\n".join(lines[:-1]))
    with pytest.raises(ParseError, match="twice"):
        CoinMap.parse_table(g, "\n".join(lines + lines[:1]))
    with pytest.raises(ParseError, match="unknown vertex"):
        CoinMap.parse_table(g, "a z 1 0 0 0")
    with pytest.raises(ParseError, match="expected"):
        CoinMap.parse_table(g, "a b 1 0 0")
    with pytest.raises(ParseError):
        CoinMap.parse_table(g, "a b 1 0 0 x")
    h = complete(4)
    with pytest.raises(ParseError, match="not an arc"):
        CoinMap.parse_table(load("0 1\n1 2\n2 3\n"), "0 2 1 0 0 0")
    assert len(CoinMap.grover(h)) == h.num_arcs
