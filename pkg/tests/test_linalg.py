import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from qwalk import linalg
from qwalk.errors import InconsistentSamples, NoConvergence, NonSquare


def matched_gap(a, b):
    """Oracle multiset distance: optimal assignment, independent of qwalk."""
    a, b = np.asarray(a), np.asarray(b)
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_det_examples():
    assert linalg.det(np.eye(4)) == 1
    assert abs(linalg.det(np.diag([2, 3j])) - 6j) < 1e-15
    # M = [[0, i], [j, 0]]: det(lambda I - psi(M)) = (lambda^2 - i)(lambda^2 + i), so at lambda = 0 it is 1
    psi_m = np.array([[0, 1j, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1j], [1, 0, 0, 0]])
    assert abs(linalg.det(-psi_m) - 1) < 1e-15


@pytest.mark.parametrize("n", [1, 2, 3, 7, 20])
def test_det_matches_numpy(rng, n):
    m = random_complex(rng, n)
    ref = np.linalg.det(m)
    assert abs(linalg.det(m) - ref) <= 1e-12 * abs(ref) * n


def test_det_singular_and_triangular():
    assert linalg.det(np.ones((3, 3))) == 0
    u = np.triu(np.arange(1, 10).reshape(3, 3)).astype(complex)
    assert linalg.det(u) == 1 * 5 * 9


def test_lu_reconstructs(rng):
    m = random_complex(rng, 6)
    lu, perm, sign = linalg.lu_factor(m)
    lower = np.tril(lu, -1) + np.eye(6)
    upper = np.triu(lu)
    assert np.allclose(lower @ upper, m[perm], atol=1e-13)
    assert np.abs(np.tril(lu, -1)).max() <= 1 + 1e-15  # partial pivoting bound
    assert sign in (1, -1)


def test_nonsquare_rejected():
    with pytest.raises(NonSquare):
        linalg.det(np.ones((2, 3)))
    with pytest.raises(NonSquare):
        linalg.eigenvalues(np.ones((3, 2)))


def test_hessenberg_is_similar(rng):
    m = random_complex(rng, 8)
    h = linalg.hessenberg(m)
    assert np.all(np.tril(h, -2) == 0)
    assert abs(np.trace(h) - np.trace(m)) < 1e-12
    assert matched_gap(np.linalg.eigvals(h), np.linalg.eigvals(m)) < 1e-10


def test_eigenvalue_examples():
    res = linalg.eigenvalues(np.diag([1, 1j]))
    assert matched_gap(res.values, [1, 1j]) < 1e-14
    t = np.full((3, 3), 0.5) - 0.5 * np.eye(3)
    assert matched_gap(linalg.eigenvalues(t).values, [1, -0.5, -0.5]) < 1e-12
    psi_ex1 = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    assert matched_gap(linalg.eigenvalues(psi_ex1).values, [1j, 1j, -1j, -1j]) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 25, 50])
def test_eigenvalues_match_numpy(rng, n):
    m = random_complex(rng, n)
    res = linalg.eigenvalues(m)
    assert len(res) == n and res.converged
    assert res.residual <= 1e-11
    norm = np.linalg.norm(m, 2)
    assert abs(res.values.sum() - np.trace(m)) <= 1e-10 * norm
    assert matched_gap(res.values, np.linalg.eigvals(m)) <= 1e-8 * norm


def test_eigenvalues_real_nonnormal_and_defective():
    jordan = np.array([[2.0, 1.0], [0.0, 2.0]])
    assert matched_gap(linalg.eigenvalues(jordan).values, [2, 2]) < 1e-7
    companion = np.array([[0, 0, 6], [1, 0, -11], [0, 1, 6]], dtype=float)  # roots 1, 2, 3
    assert matched_gap(linalg.eigenvalues(companion).values, [1, 2, 3]) < 1e-10
    perm = np.roll(np.eye(5), 1, axis=0)  # cyclic shift: 5th roots of unity
    roots = np.exp(2j * np.pi * np.arange(5) / 5)
    assert matched_gap(linalg.eigenvalues(perm).values, roots) < 1e-12


def test_unitary_spectrum_on_circle(rng):
    q, _ = np.linalg.qr(random_complex(rng, 30))
    vals = linalg.eigenvalues(q).values
    assert np.abs(np.abs(vals) - 1).max() <= 1e-10


def test_zero_matrix():
    res = linalg.eigenvalues(np.zeros((4, 4)))
    assert np.all(res.values == 0)


def test_no_convergence_reported():
    m = np.random.default_rng(1).standard_normal((12, 12))
    with pytest.raises(NoConvergence):
        linalg.eigenvalues(m, max_iter=1)


def test_cluster_counts():
    groups = linalg.cluster([1, 1 + 1e-10, 1j, -1, 1 - 1e-10])
    # sorted by real part: -1, 1j, then the cluster at 1
    assert [c for _, c in groups] == [1, 1, 3]
    assert abs(groups[2][0] - 1) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=12))
def test_interpolate_recovers_coefficients(coeffs):
    coeffs = np.array(coeffs)
    degree = len(coeffs) - 1
    pts = linalg.sample_points(degree, radius=1.0, extra=2, offset=0.25)
    got = linalg.interpolate_poly([(t, linalg.poly_eval(coeffs, t)) for t in pts], degree)
    assert np.abs(got - coeffs).max() <= 1e-12 * max(1.0, np.abs(coeffs).max()) * (degree + 1)


def test_interpolate_examples():
    pts = linalg.sample_points(2)
    got = linalg.interpolate_poly([(t, 1 - t * t) for t in pts], 2)
    assert np.allclose(got, [1, 0, -1], atol=1e-15)
    assert np.allclose(linalg.interpolate_poly([(0.3, 4.5)], 0), [4.5])
    # off-circle points use the least-squares path
    pts = np.array([0.1, 0.7, -0.4, 2.0])
    got = linalg.interpolate_poly([(t, 2 + 3 * t - t ** 3) for t in pts], 3)
    assert np.allclose(got, [2, 3, 0, -1], atol=1e-12)


def test_interpolate_rejects_inconsistent_samples():
    pts = linalg.sample_points(2, extra=3)
    with pytest.raises(InconsistentSamples):
        linalg.interpolate_poly([(t, t ** 5) for t in pts], 2)
    with pytest.raises(InconsistentSamples):
        linalg.interpolate_poly([(0.5, 1.0)], 3)
