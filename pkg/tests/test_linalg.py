import json

import mpmath
import numpy as np
import pytest

from antispec._jsonio import dumps
from antispec.errors import DimensionMismatch, InvalidMatrix, NotDiagonalizable
from antispec.linalg import (
    as_cvector,
    biorthogonalize,
    cluster_eigenvalues,
    eig_general,
    is_unitary,
    matrix_from_json,
    matrix_to_json,
    random_unitary,
    spectral_distance,
)
from conftest import random_complex


def charpoly_roots(h, dps=50):
    """Eigenvalues from the Faddeev-LeVerrier characteristic polynomial in high precision."""
    mpmath.mp.dps = dps
    n = h.shape[0]
    a = mpmath.matrix([[mpmath.mpc(complex(z)) for z in row] for row in h])
    coeffs = [mpmath.mpc(1)]
    m = mpmath.zeros(n, n)
    eye = mpmath.eye(n)
    for k in range(1, n + 1):
        m = a * m + coeffs[-1] * eye
        am = a * m
        c = -sum(am[i, i] for i in range(n)) / k
        coeffs.append(c)
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    return np.array([complex(r) for r in roots])


def test_eigenvalues_match_characteristic_polynomial_oracle(rng):
    for n in (2, 4, 7):
        h = random_complex(rng, (n, n))
        w, v = eig_general(h)
        assert spectral_distance(w, charpoly_roots(h)) < 1e-10
        assert np.allclose(np.linalg.norm(v, axis=0), 1.0)
        assert np.linalg.norm(h @ v - v * w) < 1e-12 * np.linalg.norm(h) * n


def test_eigenvalues_sorted_by_real_then_imag():
    h = np.diag([2.0, 1 + 1j, 1 - 1j, -3.0])
    w, _ = eig_general(h)
    assert np.allclose(w, [-3, 1 - 1j, 1 + 1j, 2])


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.array([[np.nan, 0], [0, 1]]), np.zeros((0, 0))])
def test_invalid_matrix_rejected(bad):
    with pytest.raises(InvalidMatrix):
        eig_general(bad)


def test_vector_dimension_checked():
    with pytest.raises(DimensionMismatch):
        as_cvector(np.ones(3), dim=4)


def test_biorthogonal_system_of_random_matrix(rng):
    h = random_complex(rng, (20, 20))
    bs = biorthogonalize(h)
    assert bs.duality_residual < 1e-10 and bs.identity_residual < 1e-10
    assert np.allclose(h.conj().T @ bs.left, bs.left * bs.left_eigenvalues)
    total = sum(bs.projector(i) for i in range(bs.dim))
    assert np.allclose(total, np.eye(20))
    assert bs.cond >= 1.0
    with pytest.raises(ValueError):
        bs.right[0, 0] = 1.0


def test_degenerate_cluster_of_non_normal_matrix(rng):
    s = random_complex(rng, (6, 6)) + 3 * np.eye(6)
    d = np.diag([1.0, 1.0, 1.0, 2.0, 2 + 1j, -1.0])
    h = s @ d @ np.linalg.inv(s)
    bs = biorthogonalize(h)
    sizes = sorted(c.size for c in bs.clusters)
    assert sizes == [1, 1, 1, 3]
    assert bs.duality_residual < 1e-8 and bs.identity_residual < 1e-8
    cluster = next(c for c in bs.clusters if c.size == 3)
    assert np.allclose(bs.right[:, cluster].conj().T @ bs.right[:, cluster], np.eye(3))


def test_jordan_block_not_diagonalizable():
    with pytest.raises(NotDiagonalizable):
        biorthogonalize(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_clusters_are_transitive():
    w = np.array([0.0, 0.6e-8, 1.2e-8, 1.0])
    groups = cluster_eigenvalues(w, 1e-8)
    assert [list(g) for g in groups] == [[0, 1, 2], [3]]


def test_spectral_distance_ignores_order():
    a = np.array([1 + 1j, 1 - 1j, 3])
    assert spectral_distance(a, a[::-1]) == 0.0
    assert spectral_distance(a, a[:2]) == np.inf


def test_random_unitary_is_seeded_and_unitary():
    u1, u2 = random_unitary(8, 3), random_unitary(8, 3)
    assert np.array_equal(u1, u2)
    assert is_unitary(u1)


def test_matrix_json_round_trip_is_bit_exact(rng):
    h = random_complex(rng, (5, 5)) / 7
    back = matrix_from_json(json.loads(dumps(matrix_to_json(h))))
    assert np.array_equal(back, h)


@pytest.mark.parametrize(
    "data", [{"dim": 2, "entries": [[1, 0]]}, {"entries": []}, {"dim": 1, "entries": [[1, 2, 3]]}]
)
def test_malformed_matrix_json(data):
    with pytest.raises(InvalidMatrix):
        matrix_from_json(data)
