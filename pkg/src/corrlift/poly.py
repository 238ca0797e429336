"""Signal/polynomial algebra over coefficient vectors of z^{-k}.

A Signal is a 1-D complex ndarray (c_0, ..., c_{L-1}) representing
X(z) = sum_k c_k z^{-k}.  Working in w = z^{-1} turns every question here
into ordinary ascending-order polynomial algebra: convolution is coefficient
multiplication, conjugate time reversal is the involution X*, and the zeros
zeta_k of X are the reciprocals of the roots of the w-polynomial.

Contents
--------
- convolve, conj_time_reverse, correlate, involution : ring operations
- RootSet, roots, from_roots                         : root-domain codec
- poly_gcd                                           : numeric Euclid GCD
- is_self_reciprocal, is_self_inversive              : symmetry tests
- gsd                                                : greatest self-reciprocal divisor
- anti_solution                                      : solutions of X H* + X* H = 0
- random_self_reciprocal                             : test-signal generator
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

Signal = np.ndarray

DEFAULT_GCD_TOL = 1e-8
_TRIM_TOL = 1e-12


def as_signal(x) -> Signal:
    """Coerce to a 1-D complex coefficient vector of length >= 1."""
    arr = np.atleast_1d(np.asarray(x, dtype=complex))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"a signal must be a nonempty 1-D sequence, got shape {arr.shape}")
    return arr


def require_c00(x: Signal) -> Signal:
    """Reject signals whose first or last coefficient vanishes."""
    x = as_signal(x)
    if x[0] == 0 or x[-1] == 0:
        raise ValueError("signal must have nonzero first and last coefficients")
    return x


def convolve(x1: Signal, x2: Signal) -> Signal:
    """Full linear convolution; the coefficient product X1(z) X2(z)."""
    return np.convolve(as_signal(x1), as_signal(x2))


def conj_time_reverse(x: Signal) -> Signal:
    """Entries conj(x_{L-1-k}); the involution X* at ambient length L."""
    return np.conj(as_signal(x)[::-1])


def involution(x: Signal) -> Signal:
    """z-domain name for `conj_time_reverse` (X* at the vector's own length)."""
    return conj_time_reverse(x)


def correlate(x1: Signal, x2: Signal) -> Signal:
    """Cross-correlation x1 * conj-time-reversed x2, length L1 + L2 - 1."""
    return convolve(x1, conj_time_reverse(x2))


@dataclass(frozen=True)
class RootSet:
    """Root-domain form: X(z) = unit * z^{-origin_power} * prod_k (1 - zeta_k z^{-1}).

    `unit` is the first nonzero coefficient, `zeros` the multiset of finite
    nonzero zeros zeta_k (with multiplicity, sorted for determinism), and
    `origin_power` the number of leading zero coefficients.
    """

    unit: complex
    zeros: tuple = field(default_factory=tuple)
    origin_power: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "unit", complex(self.unit))
        object.__setattr__(
            self, "zeros", tuple(sorted((complex(z) for z in self.zeros), key=lambda z: (z.real, z.imag)))
        )
        if self.unit == 0:
            raise ValueError("unit coefficient must be nonzero")
        if self.origin_power < 0:
            raise ValueError("origin_power must be nonnegative")
        if any(z == 0 for z in self.zeros):
            raise ValueError("zeros must be nonzero; origin zeros are carried by origin_power")


def _trim_bounds(x: Signal, tol: float) -> tuple[int, int]:
    # Indices of the first/last coefficient considered nonzero at `tol`
    # relative to the largest magnitude.
    mags = np.abs(x)
    scale = float(mags.max())
    if scale == 0.0:
        raise ValueError("the zero signal has no root representation")
    keep = np.nonzero(mags > tol * scale)[0]
    return int(keep[0]), int(keep[-1])


def _aberth(coeffs: np.ndarray, max_iter: int = 200, update_tol: float = 1e-13) -> np.ndarray:
    """All roots of an ascending-order w-polynomial with c_0, c_m != 0.

    Aberth-Ehrlich simultaneous iteration: the starting points sit on a
    slightly perturbed circle whose radius is the geometric mean |c_0/c_m|^(1/m)
    of the root magnitudes, and each step applies the coupled Newton
    correction.  Stops when every update is below `update_tol` relative to
    the root magnitude; after the iteration cap the roots are accepted only
    if every relative residual is small (multiple roots stall their updates
    at the usual sqrt-eps cluster radius while their residuals stay tiny).
    """
    m = len(coeffs) - 1
    if m == 0:
        return np.zeros(0, dtype=complex)
    c = coeffs / np.abs(coeffs).max()
    dc = npoly.polyder(c)
    radius = float(np.abs(c[0] / c[m]) ** (1.0 / m))
    angles = 2.0 * np.pi * (np.arange(m) + 0.3127) / m + 0.6
    z = radius * np.exp(1j * angles)
    for _ in range(max_iter):
        p = npoly.polyval(z, c)
        dp = npoly.polyval(z, dc)
        # Newton correction with a guard against a vanishing derivative.
        dp = np.where(dp == 0, 1e-300, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - newton * inv.sum(axis=1)
        denom = np.where(denom == 0, 1e-300, denom)
        delta = newton / denom
        z = z - delta
        if np.all(np.abs(delta) <= update_tol * np.maximum(1.0, np.abs(z))):
            break
    res = np.abs(npoly.polyval(z, c)) / (
        np.abs(c).sum() * np.maximum(1.0, np.abs(z)) ** m
    )
    worst = float(res.max())
    if worst > 1e-10:
        raise RuntimeError(f"root finding did not converge: worst relative residual {worst:.3e}")
    return z


def roots(x: Signal, tol: float = _TRIM_TOL) -> RootSet:
    """Root-domain representation of a signal.

    Coefficients within `tol` (relative to the largest magnitude) of zero at
    either end are treated as exact zeros: leading ones become origin_power,
    trailing ones reduce the degree.  The returned zeros are the reciprocals
    of the roots of the trimmed w-polynomial, counted with multiplicity.
    """
    x = as_signal(x)
    first, last = _trim_bounds(x, tol)
    core = x[first : last + 1]
    w_roots = _aberth(core)
    return RootSet(unit=core[0], zeros=tuple(1.0 / w_roots), origin_power=first)


def from_roots(rs: RootSet) -> Signal:
    """Coefficients of unit * z^{-origin_power} * prod (1 - zeta_k z^{-1})."""
    if any(z == 0 for z in rs.zeros):
        raise ValueError("zeros at the origin are not representable; use origin_power")
    out = np.array([rs.unit], dtype=complex)
    for zeta in rs.zeros:
        out = np.convolve(out, np.array([1.0, -zeta], dtype=complex))
    if rs.origin_power:
        out = np.concatenate([np.zeros(rs.origin_power, dtype=complex), out])
    return out


def _polydiv(num: np.ndarray, den: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Ascending-order long division; den's last entry is its true leading
    # coefficient (callers trim first).
    q, r = npoly.polydiv(num, den)
    return np.atleast_1d(q.astype(complex)), np.atleast_1d(r.astype(complex))


def poly_gcd(x1: Signal, x2: Signal, tol: float = DEFAULT_GCD_TOL) -> Signal:
    """Numeric GCD by the Euclidean algorithm, monic in w.

    Remainders are declared zero once their norm drops below `tol` times the
    larger input norm; each remainder is also trimmed of leading-coefficient
    dust at the same scale before it becomes the next divisor (the pivoting
    that keeps the division stable).
    """
    a = as_signal(x1)
    b = as_signal(x2)
    scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    if scale == 0.0:
        raise ValueError("gcd of two zero signals is undefined")

    def trimmed(p: np.ndarray) -> np.ndarray:
        mags = np.abs(p)
        keep = np.nonzero(mags > tol * scale)[0]
        if keep.size == 0:
            return np.zeros(0, dtype=complex)
        return p[: keep[-1] + 1]

    a, b = trimmed(a), trimmed(b)
    if b.size > a.size:
        a, b = b, a
    while b.size:
        _, r = _polydiv(a, b)
        a, b = b, trimmed(r)
    if a.size == 0:
        raise ValueError("gcd of two (numerically) zero signals is undefined")
    return a / a[-1]


def is_self_reciprocal(x: Signal, tol: float = DEFAULT_GCD_TOL) -> bool:
    """Whether conj-time-reversal fixes the vector, within tol relative."""
    x = as_signal(x)
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        return True
    return float(np.linalg.norm(x - conj_time_reverse(x))) <= tol * nrm


def is_self_inversive(x: Signal, tol: float = DEFAULT_GCD_TOL) -> tuple[bool, float]:
    """Test whether X* = e^{i alpha} X for some phase, and return that phase.

    The candidate phase comes from the largest-magnitude coefficient and is
    then verified globally.  Returns (flag, alpha) with alpha in [0, 2 pi);
    a failed test reports alpha = 0.
    """
    x = as_signal(x)
    xc = conj_time_reverse(x)
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        return True, 0.0
    k = int(np.argmax(np.abs(x)))
    ratio = xc[k] / x[k]
    alpha = float(np.angle(ratio) % (2.0 * np.pi))
    if np.linalg.norm(xc - np.exp(1j * alpha) * x) <= tol * nrm:
        return True, alpha
    return False, 0.0


def _deconvolve(x: Signal, g: Signal, tol: float) -> Signal:
    q, r = _polydiv(as_signal(x), as_signal(g))
    scale = float(np.linalg.norm(x))
    if float(np.linalg.norm(r)) > tol * max(scale, 1e-300):
        raise ValueError("deconvolution left a non-negligible remainder")
    want = len(x) - len(g) + 1
    out = np.zeros(want, dtype=complex)
    out[: min(want, q.size)] = q[:want]
    return out


def gsd(x: Signal, tol: float = DEFAULT_GCD_TOL) -> tuple[Signal, Signal]:
    """Greatest self-reciprocal divisor g and co-factor r with g * r = x.

    g is gcd(X, X*) rescaled to be exactly canonical: a phase e^{i alpha/2}
    (alpha from the self-inversive test of the monic gcd) makes it
    self-reciprocal, and the sign is fixed by a nonnegative real part at the
    middle coefficient.  Verifies convolve(g, r) = x within tol relative.
    """
    x = require_c00(x)
    g0 = poly_gcd(x, involution(x), tol)
    flag, alpha = is_self_inversive(g0, max(tol, 1e-10))
    if not flag:
        raise RuntimeError("gcd with the involution is unexpectedly not self-inversive")
    g = np.exp(0.5j * alpha) * g0
    mid = (g.size - 1) // 2
    anchor = g[mid]
    if anchor.real < 0 or (anchor.real == 0 and anchor.imag < 0):
        g = -g
    r = _deconvolve(x, g, tol)
    err = float(np.linalg.norm(convolve(g, r) - x))
    if err > tol * float(np.linalg.norm(x)):
        raise RuntimeError(f"self-reciprocal factorization failed to reproduce the signal ({err:.3e})")
    return g, r


def anti_solution(x: Signal, s: Signal, tol: float = DEFAULT_GCD_TOL) -> Signal:
    """A vector H (same length as x) with X H* + X* H = 0.

    Writes x = g * r with g the greatest self-reciprocal divisor, embeds the
    given self-reciprocal s centrally into the length of g (symmetric zero
    padding, which keeps it self-reciprocal — an odd degree gap admits no
    solution), and returns H = i * convolve(r, embedded s).  The identity is
    verified before returning.
    """
    x = require_c00(x)
    s = as_signal(s)
    if not is_self_reciprocal(s, tol):
        raise ValueError("s must be self-reciprocal")
    g, r = gsd(x, tol)
    gap = g.size - s.size
    if gap < 0:
        raise ValueError("degree of s exceeds the degree of the greatest self-reciprocal divisor")
    if gap % 2:
        raise ValueError(
            "degree gap between s and the self-reciprocal divisor must be even; "
            "no centered embedding exists otherwise"
        )
    embedded = np.concatenate(
        [np.zeros(gap // 2, dtype=complex), s, np.zeros(gap // 2, dtype=complex)]
    )
    h = 1j * convolve(r, embedded)
    lhs = convolve(x, conj_time_reverse(h)) + convolve(conj_time_reverse(x), h)
    scale = float(np.linalg.norm(x)) * float(np.linalg.norm(h))
    if scale > 0 and float(np.linalg.norm(lhs)) > tol * scale:
        raise RuntimeError("constructed vector does not solve the anti-symmetry equation")
    return h


def random_self_reciprocal(degree: int, rng: np.random.Generator) -> Signal:
    """Random self-reciprocal coefficients of exact degree `degree`.

    Free complex draws in the lower half are mirrored conjugately into the
    upper half; an even degree gets a real middle coefficient.  The first
    coefficient is redrawn until it is safely nonzero so the degree is exact.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    n = degree + 1
    out = np.zeros(n, dtype=complex)
    for k in range(n // 2):
        out[k] = rng.standard_normal() + 1j * rng.standard_normal()
        out[degree - k] = np.conj(out[k])
    if n % 2:
        out[degree // 2] = rng.standard_normal()
    while abs(out[0]) < 0.1:
        if degree == 0:
            out[0] = rng.standard_normal()
        else:
            out[0] = rng.standard_normal() + 1j * rng.standard_normal()
            out[degree] = np.conj(out[0])
    return out
