"""Dense Hermitian eigen-toolbox for the lifting solver and certificates.

Contents
--------
- hermitian_part / require_hermitian : symmetrization and validation helpers
- EigDecomposition, herm_eig         : full Hermitian eigendecomposition with a
                                       deterministic ordering and phase convention
- psd_project                        : Frobenius-nearest PSD matrix
- top_eigpair                        : power iteration for the dominant eigenpair
- numeric_rank                       : eigenvalue-threshold rank of a dense matrix
- operator_norm                      : power iteration on a matrix-free operator

All routines operate on dense ndarrays; matrices here stay small (N of order
tens), so no sparsity or blocking is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

ComplexMatrix = np.ndarray
HermitianMatrix = np.ndarray

DEFAULT_RANK_TOL = 1e-8


def hermitian_part(a: ComplexMatrix) -> HermitianMatrix:
    """Return (A + A^H) / 2."""
    a = np.asarray(a, dtype=complex)
    return 0.5 * (a + a.conj().T)


def require_hermitian(a: ComplexMatrix, tol: float = 1e-12) -> HermitianMatrix:
    """Validate that ``a`` is square and Hermitian, returning its exact
    Hermitian part.

    The deviation ``max|A - A^H|`` must not exceed ``tol`` relative to the
    largest entry magnitude (with a floor of 1 so the zero matrix passes).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    dev = float(np.abs(a - a.conj().T).max(initial=0.0))
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e}")
    return hermitian_part(a)


@dataclass
class EigDecomposition:
    """Eigenvalues (real, ascending) and matching unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(self.eigenvectors, dtype=complex)
        if self.eigenvectors.shape != (self.eigenvalues.size, self.eigenvalues.size):
            raise ValueError("eigenvector matrix shape does not match eigenvalue count")
        if np.any(np.diff(self.eigenvalues) < 0):
            raise ValueError("eigenvalues must be sorted ascending")

    def reconstruct(self) -> HermitianMatrix:
        """Rebuild V diag(w) V^H."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _canonical_column(v: np.ndarray) -> np.ndarray:
    # Rotate so the largest-magnitude entry is real and positive; this pins
    # the free global phase of each eigenvector.
    pivot = v[int(np.argmax(np.abs(v)))]
    mag = abs(pivot)
    if mag == 0.0:
        return v
    return v * (np.conj(pivot) / mag)


def herm_eig(a: HermitianMatrix) -> EigDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    The input is symmetrized first, eigenvalues come back ascending, and each
    eigenvector's phase is pinned by `_canonical_column`.  Exactly equal
    eigenvalues are ordered by lexicographic comparison of the canonical
    eigenvectors on (Re, Im) pairs, which makes the output deterministic even
    for degenerate spectra.
    """
    a = hermitian_part(a)
    w, v = np.linalg.eigh(a)
    cols = [_canonical_column(v[:, i]) for i in range(v.shape[1])]

    def sort_key(i: int):
        vec = cols[i]
        return (w[i],) + tuple(p for c in vec for p in (c.real, c.imag))

    order = sorted(range(w.size), key=sort_key)
    values = np.array([w[i] for i in order], dtype=float)
    vectors = np.column_stack([cols[i] for i in order]) if order else v
    return EigDecomposition(eigenvalues=values, eigenvectors=vectors)


def psd_project(a: HermitianMatrix) -> HermitianMatrix:
    """Frobenius-nearest positive semidefinite matrix.

    Clips negative eigenvalues to zero and rebuilds; the result is exactly
    Hermitian and the operation is idempotent and 1-Lipschitz in Frobenius
    norm.
    """
    dec = herm_eig(a)
    clipped = np.maximum(dec.eigenvalues, 0.0)
    v = dec.eigenvectors
    return hermitian_part((v * clipped) @ v.conj().T)


def top_eigpair(
    a: HermitianMatrix, tol: float = 1e-10, max_iter: int = 1000
) -> tuple[float, np.ndarray]:
    """Dominant (largest-magnitude) eigenpair of a Hermitian matrix.

    Subspace iteration with a 2-column block driven by A^2 (so a
    sign-balanced spectrum with lam_max close to -lam_min still converges),
    refined each step by a Rayleigh-Ritz solve of the projected 2x2 problem.
    Stops once ||A v - lam v|| <= tol * ||A||_F; raises if that never
    happens within ``max_iter`` steps.
    """
    a = hermitian_part(a)
    n = a.shape[0]
    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        e0 = np.zeros(n, dtype=complex)
        e0[0] = 1.0
        return 0.0, e0
    rng = np.random.default_rng(7)
    block = min(2, n)
    v = rng.standard_normal((n, block)) + 1j * rng.standard_normal((n, block))
    v, _ = np.linalg.qr(v)
    lam, vec, res = 0.0, v[:, 0], np.inf
    for _ in range(max_iter):
        # Ritz step on the current subspace picks the dominant-magnitude pair.
        av = a @ v
        small = v.conj().T @ av
        sw, sv = np.linalg.eigh(hermitian_part(small))
        pick = int(np.argmax(np.abs(sw)))
        lam = float(sw[pick])
        vec = _canonical_column(v @ sv[:, pick])
        res = float(np.linalg.norm(a @ vec - lam * vec))
        if res <= tol * fro:
            return lam, vec
        v, _ = np.linalg.qr(a @ av)  # advance the block by A^2
    raise RuntimeError(
        f"top_eigpair did not converge in {max_iter} iterations "
        f"(last residual {res:.3e}, bound {tol * fro:.3e})"
    )


def numeric_rank(a: ComplexMatrix, tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank of a dense matrix by eigenvalue thresholding of A^H A.

    Counts eigenvalues of the Gram matrix exceeding ``tol**2`` times its
    largest eigenvalue; the zero matrix has rank 0.  The Gram eigenvalues
    are obtained as squared singular values of A rather than by forming
    A^H A, which would push the analytically-zero eigenvalues up to the
    rounding floor of the squared scale.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    sing = np.linalg.svd(a, compute_uv=False)
    top = float(sing[0] ** 2) if sing.size else 0.0
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(sing**2 > (tol * tol) * top))


def operator_norm(
    apply_fn: Callable[[np.ndarray], np.ndarray], dim: int, iters: int = 100
) -> float:
    """Largest eigenvalue of a Hermitian PSD operator given matrix-free.

    ``apply_fn`` maps a complex vector of length ``dim`` to another; power
    iteration runs from a fixed seeded start for ``iters`` steps and returns
    the final Rayleigh quotient.
    """
    if dim <= 0:
        raise ValueError("operator dimension must be positive")
    rng = np.random.default_rng(0)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = np.asarray(apply_fn(v))
        lam = float(np.real(np.vdot(v, w)))
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            return 0.0
        v = w / nrm
    return lam
