"""Spectral kernel checks against numpy's LAPACK-backed routines."""

import numpy as np
import pytest

from nlv.errors import ValidationError
from nlv.linalg import (dagger, frobenius, givens_rotation, jacobi_eigh, kron,
                        operator_norm, power_iteration, psd_sqrt, random_unitary)
from nlv.rng import generator


def random_hermitian(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g + g.conj().T


def test_jacobi_matches_lapack_eigenvalues():
    rng = np.random.default_rng(11)
    for _ in range(50):
        dim = int(rng.integers(1, 13))
        h = random_hermitian(dim, rng)
        w, v = jacobi_eigh(h)
        assert np.allclose(np.sort(w), np.linalg.eigvalsh(h), atol=1e-10)
        assert np.allclose(v @ np.diag(w) @ dagger(v), h, atol=1e-10)
        assert np.allclose(dagger(v) @ v, np.eye(dim), atol=1e-12)


def test_jacobi_rejects_nonsquare():
    with pytest.raises(ValidationError):
        jacobi_eigh(np.ones((2, 3)))


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(5)
    for _ in range(30):
        dim = int(rng.integers(1, 9))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        p = g @ g.conj().T
        root = psd_sqrt(p)
        assert np.allclose(root @ root, p, atol=1e-8 * max(1.0, np.max(np.abs(p))))
        assert np.allclose(root, dagger(root), atol=1e-10)


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(ValidationError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_power_iteration_finds_top_eigenpair():
    rng = np.random.default_rng(7)
    for _ in range(30):
        dim = int(rng.integers(2, 10))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        p = g @ g.conj().T
        vec = power_iteration(p)
        top = np.linalg.eigvalsh(p)[-1]
        assert abs(np.real(np.vdot(vec, p @ vec)) - top) < 1e-6 * top


def test_power_iteration_zero_operator():
    vec = power_iteration(np.zeros((3, 3), dtype=complex))
    assert abs(np.linalg.norm(vec) - 1.0) < 1e-12


def test_operator_norm_matches_svd():
    rng = np.random.default_rng(3)
    for _ in range(30):
        dim = int(rng.integers(1, 9))
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        assert abs(operator_norm(g) - np.linalg.svd(g, compute_uv=False)[0]) < 1e-7


def test_random_unitary_is_unitary_and_seeded():
    u1 = random_unitary(6, generator(42))
    u2 = random_unitary(6, generator(42))
    assert np.array_equal(u1, u2)
    assert np.allclose(dagger(u1) @ u1, np.eye(6), atol=1e-12)


def test_givens_rotation_is_unitary():
    g = givens_rotation(4, 1, 3, 0.7, 1.9)
    assert np.allclose(dagger(g) @ g, np.eye(4), atol=1e-14)


def test_kron_mixed_product():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    assert np.allclose(kron(a, b) @ kron(u, v), kron(a @ u, b @ v), atol=1e-12)


def test_frobenius():
    assert frobenius(np.array([[3.0, 4.0]])) == pytest.approx(5.0)
