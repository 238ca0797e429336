"""Correlation sensing operators: matrices, forward/adjoint maps, noise.

The lifted variable is X = x x* for the stacked pair x = (x1, x2) of length
n = l1 + l2.  Each correlation sample is a trace tr(A_{i,j,k} X) against a
0/1 matrix supported on one antidiagonal band of one block of X:

    a11_k = tr(A_{1,1,k} X)   band k of the top-left     l1 x l1 block
    a22_k = tr(A_{2,2,k} X)   band k of the bottom-right l2 x l2 block
    a12_k = tr(A_{1,2,k} X)   band k of the top-right    l1 x l2 block
    a21_k = tr(A_{2,1,k} X)   band k of the bottom-left  l2 x l1 block

(the sensing matrix itself lives in the transposed block, since the trace
pairs A against X transposed).  Stacking (a11, a22, a12, a21) gives the
4n-4 measurements; the reduced mode drops the mirrored a21 block for 3n-3.

The bands of each block tile it exactly, so the forward map is a single
gather of the n^2 entries of X plus segmented sums, and the adjoint is a
scatter — both O(n^2).  A dense trace reference (`forward_dense`) is kept
for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import ComplexMatrix, HermitianMatrix, hermitian_part
from .poly import Signal, as_signal, conj_time_reverse, correlate


def downshift(n: int) -> ComplexMatrix:
    """n x n matrix with ones on the first subdiagonal."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return np.eye(n, k=-1, dtype=complex)


def embedding(n: int, l: int) -> ComplexMatrix:
    """n x l embedding: identity block atop zeros.  Requires l <= n."""
    if l > n:
        raise ValueError(f"cannot embed length {l} into dimension {n}")
    if l < 1 or n < 1:
        raise ValueError("dimensions must be at least 1")
    return np.eye(n, l, dtype=complex)


def rect_shift(lj: int, li: int, k: int) -> ComplexMatrix:
    """The lj x li band matrix with ones where (column - row) = k - lj + 1.

    k runs over [0, li+lj-2]; each k selects one antidiagonal band, and the
    sweep over k tiles the whole rectangle.
    """
    if not 0 <= k <= li + lj - 2:
        raise ValueError(f"band index {k} outside [0, {li + lj - 2}]")
    return np.eye(lj, li, k=k - lj + 1, dtype=complex)


@dataclass
class Measurements:
    """Correlation data with labeled segments and a stacked view.

    a11/a22 have lengths 2*l1-1 and 2*l2-1; a12/a21 both l1+l2-1.  With
    `reduced` set, the stacked vector omits a21 (which carries no
    independent information) for 3n-3 entries instead of 4n-4.
    """

    a11: Signal
    a22: Signal
    a12: Signal
    a21: Signal
    reduced: bool = False

    def __post_init__(self) -> None:
        self.a11 = as_signal(self.a11)
        self.a22 = as_signal(self.a22)
        self.a12 = as_signal(self.a12)
        self.a21 = as_signal(self.a21)
        if self.a11.size % 2 == 0 or self.a22.size % 2 == 0:
            raise ValueError("autocorrelation segments must have odd length")
        cross = (self.a11.size + self.a22.size) // 2
        if self.a12.size != cross or self.a21.size != cross:
            raise ValueError("cross-correlation segments have inconsistent length")

    @property
    def l1(self) -> int:
        return (self.a11.size + 1) // 2

    @property
    def l2(self) -> int:
        return (self.a22.size + 1) // 2

    @property
    def stacked(self) -> np.ndarray:
        parts = [self.a11, self.a22, self.a12]
        if not self.reduced:
            parts.append(self.a21)
        return np.concatenate(parts)


@dataclass
class NoiseModel:
    """Per-component complex noise level and the seed that realizes it."""

    sigma: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise ValueError("sigma must be finite and nonnegative")


@dataclass
class SensingSet:
    """The indexed family A_{i,j,k} for a pair of lengths (l1, l2).

    `matrices` holds the dense n x n sensing matrices in stacked order
    (a11 bands, a22 bands, a12 bands, a21 bands).  Internal gather/scatter
    index tables make the forward and adjoint maps O(n^2).
    """

    l1: int
    l2: int
    n: int
    matrices: list = field(repr=False)
    _tr_flat: np.ndarray = field(repr=False, default=None)
    _tr_bounds: np.ndarray = field(repr=False, default=None)
    _adj_flat: np.ndarray = field(repr=False, default=None)
    _adj_lam: np.ndarray = field(repr=False, default=None)

    def __post_init__(self) -> None:
        if self.n != self.l1 + self.l2:
            raise ValueError("n must equal l1 + l2")
        if len(self.matrices) != 4 * self.n - 4:
            raise ValueError("sensing family must contain 4n-4 matrices")
        gather, scatter, lam_of, bounds = [], [], [], []
        offset = 0
        for m, a in enumerate(self.matrices):
            rows, cols = np.nonzero(a)
            bounds.append(offset)
            offset += rows.size
            gather.append(cols * self.n + rows)  # tr(A X) sums X[col, row]
            scatter.append(rows * self.n + cols)
            lam_of.append(np.full(rows.size, m))
        self._tr_flat = np.concatenate(gather)
        self._tr_bounds = np.asarray(bounds)
        self._adj_flat = np.concatenate(scatter)
        self._adj_lam = np.concatenate(lam_of)

    @property
    def segment_lengths(self) -> tuple[int, int, int, int]:
        return (2 * self.l1 - 1, 2 * self.l2 - 1, self.n - 1, self.n - 1)


def build_sensing(l1: int, l2: int) -> SensingSet:
    """Assemble all 4(l1+l2)-4 sensing matrices with their block placement."""
    if l1 < 1 or l2 < 1:
        raise ValueError("signal lengths must be at least 1")
    n = l1 + l2
    mats: list[np.ndarray] = []
    for k in range(2 * l1 - 1):  # a11: sensing block top-left
        a = np.zeros((n, n), dtype=complex)
        a[:l1, :l1] = rect_shift(l1, l1, k)
        mats.append(a)
    for k in range(2 * l2 - 1):  # a22: bottom-right
        a = np.zeros((n, n), dtype=complex)
        a[l1:, l1:] = rect_shift(l2, l2, k)
        mats.append(a)
    for k in range(n - 1):  # a12: sensing block bottom-left (pairs X's top-right)
        a = np.zeros((n, n), dtype=complex)
        a[l1:, :l1] = rect_shift(l2, l1, k)
        mats.append(a)
    for k in range(n - 1):  # a21: sensing block top-right
        a = np.zeros((n, n), dtype=complex)
        a[:l1, l1:] = rect_shift(l1, l2, k)
        mats.append(a)
    return SensingSet(l1=l1, l2=l2, n=n, matrices=mats)


def lift(x1: Signal, x2: Signal) -> HermitianMatrix:
    """Rank-one lifted matrix x x* of the stacked pair."""
    x = np.concatenate([as_signal(x1), as_signal(x2)])
    return np.outer(x, np.conj(x))


def forward_stacked(s: SensingSet, x_mat: ComplexMatrix) -> np.ndarray:
    """All 4n-4 traces tr(A_m X) as one vector (banded gather fast path)."""
    x_mat = np.asarray(x_mat, dtype=complex)
    if x_mat.shape != (s.n, s.n):
        raise ValueError(f"expected a {s.n} x {s.n} matrix, got {x_mat.shape}")
    return np.add.reduceat(x_mat.ravel()[s._tr_flat], s._tr_bounds)


def forward(s: SensingSet, x_mat: ComplexMatrix) -> Measurements:
    """Apply the measurement map and label the segments."""
    flat = forward_stacked(s, x_mat)
    n11, n22, nc, _ = s.segment_lengths
    return Measurements(
        a11=flat[:n11],
        a22=flat[n11 : n11 + n22],
        a12=flat[n11 + n22 : n11 + n22 + nc],
        a21=flat[n11 + n22 + nc :],
    )


def forward_dense(s: SensingSet, x_mat: ComplexMatrix) -> np.ndarray:
    """Reference forward map by dense traces; used to validate the fast path."""
    x_mat = np.asarray(x_mat, dtype=complex)
    return np.array([np.trace(a @ x_mat) for a in s.matrices])


def adjoint(s: SensingSet, lam) -> HermitianMatrix:
    """The Hermitian matrix sum_m (lam_m A_m + conj(lam_m) A_m^H).

    For a one-hot lam this is A_m + A_m^H; for arbitrary lam it pairs with
    the forward map through tr(adjoint(lam) X) = 2 Re sum_m lam_m tr(A_m X)
    on Hermitian X.
    """
    lam = np.asarray(lam, dtype=complex).ravel()
    if lam.size != 4 * s.n - 4:
        raise ValueError(f"expected {4 * s.n - 4} multipliers, got {lam.size}")
    m = np.zeros(s.n * s.n, dtype=complex)
    m[s._adj_flat] = lam[s._adj_lam]  # bands tile each block: pure scatter
    m = m.reshape(s.n, s.n)
    return m + m.conj().T


def hermitian_split(s: SensingSet) -> list:
    """Pairs (A_R, A_I) with tr(A_R X) = Re b_m and tr(A_I X) = Im b_m."""
    out = []
    for a in s.matrices:
        out.append((hermitian_part(a), (a - a.conj().T) / 2j))
    return out


def measure(x1: Signal, x2: Signal, reduced: bool = False) -> Measurements:
    """Correlation measurements straight from the signals (fast path)."""
    x1 = as_signal(x1)
    x2 = as_signal(x2)
    a12 = correlate(x1, x2)
    return Measurements(
        a11=correlate(x1, x1),
        a22=correlate(x2, x2),
        a12=a12,
        a21=conj_time_reverse(a12),
        reduced=reduced,
    )


def add_noise(m: Measurements, model: NoiseModel) -> Measurements:
    """Add circular complex Gaussian noise, mirroring a12's draw onto a21.

    Each component of a11, a22, a12 receives independent noise of variance
    sigma^2 (split evenly between real and imaginary parts); a21's noise is
    the conjugate time reversal of a12's, preserving the measurement
    symmetry exactly.
    """
    if model.sigma == 0.0:
        return Measurements(m.a11, m.a22, m.a12, m.a21, reduced=m.reduced)
    rng = np.random.default_rng(model.seed)
    scale = model.sigma / math.sqrt(2.0)

    def draw(size: int) -> np.ndarray:
        return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))

    n12 = draw(m.a12.size)
    return Measurements(
        a11=m.a11 + draw(m.a11.size),
        a22=m.a22 + draw(m.a22.size),
        a12=m.a12 + n12,
        a21=m.a21 + conj_time_reverse(n12),
        reduced=m.reduced,
    )


def rsnr(y: Measurements, model: NoiseModel) -> float:
    """Received SNR ||y||^2 / (M_b sigma^2) over the stacked components.

    M_b counts the noise-bearing entries of the stacked vector (4n-4, or
    3n-3 in reduced mode).  A zero sigma returns infinity.
    """
    if model.sigma == 0.0:
        return math.inf
    b = y.stacked
    return float(np.linalg.norm(b) ** 2 / (b.size * model.sigma**2))
