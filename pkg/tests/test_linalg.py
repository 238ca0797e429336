"""Contract tests for the dense Hermitian eigen-toolbox."""

from __future__ import annotations

import numpy as np
import pytest

from corrlift.linalg import (
    herm_eig,
    hermitian_part,
    numeric_rank,
    operator_norm,
    psd_project,
    require_hermitian,
    top_eigpair,
)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(a)


def test_require_hermitian_accepts_and_symmetrizes():
    a = np.array([[2.0, 1 + 1j], [1 - 1j, 3.0]])
    out = require_hermitian(a)
    assert np.array_equal(out, hermitian_part(a))


def test_require_hermitian_rejects_asymmetric():
    with pytest.raises(ValueError):
        require_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        require_hermitian(np.zeros((2, 3)))


def test_herm_eig_diagonal_example():
    dec = herm_eig(np.diag([3.0, 1.0]).astype(complex))
    assert np.allclose(dec.eigenvalues, [1.0, 3.0])
    # ascending order puts the eigenvector of 1 first
    assert abs(abs(dec.eigenvectors[1, 0]) - 1.0) < 1e-12
    assert abs(abs(dec.eigenvectors[0, 1]) - 1.0) < 1e-12


def test_herm_eig_swap_example():
    a = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    dec = herm_eig(a)
    assert np.allclose(dec.eigenvalues, [-1.0, 1.0])
    r = np.sqrt(0.5)
    assert np.allclose(np.abs(dec.eigenvectors), [[r, r], [r, r]], atol=1e-12)


def test_herm_eig_reconstruction_and_orthonormality():
    rng = np.random.default_rng(101)
    for _ in range(25):
        n = int(rng.integers(2, 13))
        a = random_hermitian(rng, n)
        dec = herm_eig(a)
        v = dec.eigenvectors
        assert np.linalg.norm(v.conj().T @ v - np.eye(n)) <= 1e-10
        err = np.linalg.norm(dec.reconstruct() - a)
        assert err <= 1e-9 * max(np.linalg.norm(a), 1e-30)


def test_herm_eig_deterministic_on_degenerate_spectrum():
    a = np.eye(3, dtype=complex)
    d1 = herm_eig(a)
    d2 = herm_eig(a.copy())
    assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
    assert np.array_equal(d1.eigenvectors, d2.eigenvectors)


def test_herm_eig_phase_convention():
    rng = np.random.default_rng(5)
    a = random_hermitian(rng, 6)
    dec = herm_eig(a)
    for i in range(6):
        col = dec.eigenvectors[:, i]
        pivot = col[int(np.argmax(np.abs(col)))]
        assert pivot.real > 0
        assert abs(pivot.imag) <= 1e-12 * abs(pivot)


def test_psd_project_clips_negative_eigenvalues():
    a = np.diag([2.0, -3.0]).astype(complex)
    p = psd_project(a)
    assert np.allclose(p, np.diag([2.0, 0.0]))


def test_psd_project_idempotent():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = random_hermitian(rng, 7)
        p = psd_project(a)
        again = psd_project(p)
        assert np.linalg.norm(again - p) <= 1e-10 * max(np.linalg.norm(p), 1.0)


def test_psd_project_is_metric_projection():
    # Variational inequality of a convex projection: for any PSD candidate X,
    # Re <A - P, X - P> <= 0.
    rng = np.random.default_rng(12)
    for _ in range(10):
        a = random_hermitian(rng, 5)
        p = psd_project(a)
        w = np.linalg.eigvalsh(p)
        assert w.min() >= -1e-12 * max(1.0, np.linalg.norm(p))
        for _ in range(5):
            b = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            x = b @ b.conj().T
            inner = np.real(np.trace((a - p).conj().T @ (x - p)))
            assert inner <= 1e-9 * np.linalg.norm(a - p) * np.linalg.norm(x - p) + 1e-12


def test_psd_project_nonexpansive():
    rng = np.random.default_rng(13)
    for _ in range(10):
        a = random_hermitian(rng, 6)
        b = random_hermitian(rng, 6)
        lhs = np.linalg.norm(psd_project(a) - psd_project(b))
        assert lhs <= np.linalg.norm(a - b) + 1e-12


def test_top_eigpair_residual_and_dominance():
    rng = np.random.default_rng(21)
    for _ in range(10):
        a = random_hermitian(rng, 8)
        lam, v = top_eigpair(a)
        fro = np.linalg.norm(a)
        assert np.linalg.norm(a @ v - lam * v) <= 1e-10 * fro
        w = np.linalg.eigvalsh(a)
        assert abs(abs(lam) - np.abs(w).max()) <= 1e-8 * fro


def test_top_eigpair_negative_dominant():
    lam, v = top_eigpair(np.diag([-5.0, 1.0, 2.0]).astype(complex))
    assert abs(lam + 5.0) < 1e-8
    assert abs(abs(v[0]) - 1.0) < 1e-6


def test_top_eigpair_zero_matrix():
    lam, v = top_eigpair(np.zeros((4, 4)))
    assert lam == 0.0
    assert np.linalg.norm(v) == 1.0


def test_numeric_rank_planted():
    rng = np.random.default_rng(31)
    for r in range(0, 5):
        b = rng.standard_normal((9, r)) + 1j * rng.standard_normal((9, r))
        c = rng.standard_normal((r, 9)) + 1j * rng.standard_normal((r, 9))
        a = b @ c if r else np.zeros((9, 9), dtype=complex)
        assert numeric_rank(a) == r


def test_numeric_rank_matches_gram_rank():
    rng = np.random.default_rng(32)
    for _ in range(15):
        n = int(rng.integers(2, 13))
        r = int(rng.integers(1, n + 1))
        b = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        c = rng.standard_normal((r, n)) + 1j * rng.standard_normal((r, n))
        s = b @ c
        assert numeric_rank(s) == numeric_rank(s.conj().T @ s)


def test_operator_norm_matches_dense_top_eigenvalue():
    rng = np.random.default_rng(41)
    for _ in range(8):
        n = int(rng.integers(3, 20))
        b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        g = b @ b.conj().T
        est = operator_norm(lambda v: g @ v, n)
        true = np.linalg.eigvalsh(g)[-1]
        assert abs(est - true) <= 0.05 * true


def test_operator_norm_deterministic():
    g = np.diag([4.0, 1.0]).astype(complex)
    a = operator_norm(lambda v: g @ v, 2)
    b = operator_norm(lambda v: g @ v, 2)
    assert a == b
