"""Exact finite-n quantities for the unitary-trace characteristic function.

Everything here reduces to Fourier coefficients of exp(f) for a trigonometric
polynomial f: Toeplitz determinants give the averaged exponential of a linear
eigenvalue statistic, and the Fredholm form (a finite product of two Hankel
truncations behind a coordinate projection) gives the same characteristic
function by a determinant identity, which doubles as a cross-check and as the
carrier of the trace-norm diagnostics used by the certification suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import ApplicabilityError, ComplexMatrix, LogReal, fft, ln_gamma, lu_det
from .trigpoly import TrigPoly, XiVector, hilbert_transform, norms, poly_from_xi, a_functional

__all__ = [
    "SymbolCoeffs",
    "CharFnResult",
    "LaplacePair",
    "J1Diagnostics",
    "symbol_coeffs",
    "toeplitz_det",
    "char_fn",
    "laplace_transform",
    "laplace_pair",
    "hankel_truncation",
    "bo_det",
    "j1_diagnostics",
    "j1_envelope_check",
    "fcoeff_bound_check",
]

_GRID_START = 2 ** 10
_GRID_DOUBLINGS = 8
_GRID_CAP = _GRID_START * 2 ** _GRID_DOUBLINGS
_COEFF_STABLE_TOL = 1e-13
_BO_DET_TOL = 1e-12
_BO_MAX_DOUBLINGS = 6


@dataclass(frozen=True)
class SymbolCoeffs:
    """Fourier coefficients what_k, |k| <= J, of a symbol w = exp(f).

    ``coeffs[k + J]`` holds what_k.  ``tail_bound`` certifies
    sum_{|k| > J} |what_k| from the factorial decay of the coefficients.
    """

    J: int
    coeffs: tuple
    tail_bound: float

    def __post_init__(self) -> None:
        if len(self.coeffs) != 2 * self.J + 1:
            raise ValueError(f"need {2 * self.J + 1} coefficients, got {len(self.coeffs)}")

    def coeff(self, k: int) -> complex:
        if abs(k) > self.J:
            raise IndexError(f"|k| <= {self.J} required, got {k}")
        return self.coeffs[k + self.J]

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)


@dataclass(frozen=True)
class CharFnResult:
    """Characteristic-function value with provenance.

    ``residual`` records cross-method disagreement when both routes were
    evaluated (0.0 otherwise); ``truncation`` is the half-width or Fredholm
    truncation actually used.
    """

    value: complex
    method: str
    truncation: int
    residual: float = 0.0


@dataclass(frozen=True)
class LaplacePair:
    """Averaged exponential of a linear statistic next to its upper bound."""

    value: LogReal
    upper_bound: LogReal


@dataclass(frozen=True)
class J1Diagnostics:
    """Trace-norm diagnostics for the Fredholm form."""

    rho: float
    j1_norm_bound: LogReal
    fredholm_gap_bound: LogReal


def _coeffs_of_function(fvals_fn, J: int):
    """Fourier coefficients for |k| <= J of a grid-evaluable function.

    The grid starts at 2^10 points and doubles until every reported
    coefficient is stable to 1e-13, up to 8 doublings.
    """
    if J < 1:
        raise ValueError(f"half-width J must be >= 1, got {J}")
    if 2 * (J + 1) > _GRID_CAP:
        raise ValueError(
            f"J = {J} exceeds the {_GRID_CAP}-point grid capacity")
    M = _GRID_START
    while M < 2 * (J + 1):
        M *= 2
    k = np.arange(-J, J + 1)
    prev = None
    while True:
        theta = 2.0 * math.pi * np.arange(M) / M
        vals = fvals_fn(theta)
        c = fft(vals, "inverse")          # c[j] = (1/M) sum vals e^{-2pi i j ...}
        cur = c[k % M]
        if prev is not None and np.abs(cur - prev).max() < _COEFF_STABLE_TOL:
            return cur
        if M >= _GRID_CAP:
            raise RuntimeError(
                f"coefficients not stable to {_COEFF_STABLE_TOL} at the "
                f"{_GRID_CAP}-point grid cap")
        prev = cur
        M *= 2


def _tail_bound(abs_coeff_sum: float, J: int, m: int) -> float:
    """Certified bound on sum_{|k| > J} |what_k| for w = exp(f).

    With a = sum_{j != 0} |fhat_j| supported on |j| <= m, the coefficients of
    exp(f) beyond |k| = J need at least Q = ceil((J+1)/m) factors, giving
    tail <= 2m e^{2a} a^Q / Q!.
    """
    a = abs_coeff_sum
    if a == 0.0:
        return 0.0
    Q = math.ceil((J + 1) / m)
    ln_tail = math.log(2 * m) + 2.0 * a + Q * math.log(a) - ln_gamma(Q + 1)
    return math.exp(ln_tail) if ln_tail < 700 else math.inf


def symbol_coeffs(p: TrigPoly, J: int, scale: complex = 1.0) -> SymbolCoeffs:
    """Fourier coefficients of w = exp(scale * p) for |k| <= J."""
    scale = complex(scale)

    def w_on_grid(theta):
        acc = np.zeros_like(theta, dtype=complex)
        for k in range(1, p.m + 1):
            ghat = p.zeta[k - 1] / math.sqrt(2.0 * k)
            e = np.exp(1j * k * theta)
            acc += ghat * e + np.conj(ghat) * np.conj(e)
        return np.exp(scale * acc)

    cur = _coeffs_of_function(w_on_grid, J)
    a = abs(scale) * norms(p).sup_bounds(0)["coeff_sum"]
    return SymbolCoeffs(J, tuple(cur.tolist()), _tail_bound(a, J, max(p.m, 1)))


def toeplitz_det(w: SymbolCoeffs, n: int):
    """det of the n x n matrix with (i, j) entry what_{i-j}, in log form.

    Returns (LogReal magnitude, unit-modulus complex phase); phase is 0j for
    a singular matrix.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if w.J < n - 1:
        raise ValueError(f"need half-width J >= n-1 = {n - 1}, got {w.J}")
    c = w.coeff_array()
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return lu_det(c[(i - j) + w.J], log_form=True)


def char_fn(xi: XiVector, n: int, cross_check: bool = False) -> CharFnResult:
    """Characteristic-function value at xi for matrix size n.

    Evaluates the Toeplitz determinant of exp(i g); with ``cross_check`` the
    Fredholm route is also run and the disagreement recorded as ``residual``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    g = poly_from_xi(xi)
    J = max(n - 1, 1)
    w = symbol_coeffs(g, J, scale=1j)
    mag, phase = toeplitz_det(w, n)
    value = 0j if mag.is_zero() else phase * mag.to_real()
    residual = 0.0
    if cross_check:
        other = bo_det(xi, n)
        residual = abs(value - other.value)
    return CharFnResult(value=complex(value), method="toeplitz",
                        truncation=J, residual=residual)


def laplace_transform(f: TrigPoly, n: int) -> LogReal:
    """Averaged exponential of the eigenvalue sum of a real polynomial f.

    Equals the Toeplitz determinant of exp(f); the result is positive real,
    returned as a LogReal to survive large n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    J = max(n - 1, 1)
    w = symbol_coeffs(f, J, scale=1.0)
    mag, phase = toeplitz_det(w, n)
    if mag.is_zero() or phase.real <= 0:
        raise RuntimeError(f"expected a positive determinant, got phase {phase!r}")
    return mag


def laplace_pair(f: TrigPoly, n: int) -> LaplacePair:
    """The averaged exponential together with its exp(A(f)) upper bound.

    The mean coefficient of f vanishes by construction, so the bound's
    exponent reduces to the quadratic coefficient functional A(f).
    """
    a_val = a_functional(f, 1.0)
    return LaplacePair(value=laplace_transform(f, n),
                       upper_bound=LogReal.from_ln(float(a_val.real)))


def hankel_truncation(w: SymbolCoeffs, side: str, T: int) -> ComplexMatrix:
    """T x T Hankel truncation: entry (j, k), 1-based, is what_{j+k-1}
    (side 'plus') or what_{-(j+k-1)} (side 'minus')."""
    return ComplexMatrix.from_array(_hankel_array(w, side, T))


def _hankel_array(w: SymbolCoeffs, side: str, T: int) -> np.ndarray:
    if side not in ("plus", "minus"):
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if w.J < 2 * T - 1:
        raise ValueError(f"need half-width J >= 2T-1 = {2 * T - 1}, got {w.J}")
    c = w.coeff_array()
    j, k = np.meshgrid(np.arange(1, T + 1), np.arange(1, T + 1), indexing="ij")
    s = j + k - 1
    return c[(s if side == "plus" else -s) + w.J]


def _fredholm_det(xi: XiVector, n: int, T: int) -> complex:
    """det(I - K Q_n) at truncation T for the symbol exp(i g)."""
    g = poly_from_xi(xi)
    h = hilbert_transform(g).h
    J = 2 * T + 1
    # exp(i g) factors through the conjugate partner: the plus/minus Hankel
    # symbols are exp(+h) and exp(-h); the Toeplitz-route agreement test
    # guards the orientation (the swap conjugates the determinant)
    bp = symbol_coeffs(h, J, scale=1.0)
    bm = symbol_coeffs(h, J, scale=-1.0)
    K = _hankel_array(bp, "plus", T) @ _hankel_array(bm, "minus", T)
    # the projection kills the first n columns in this indexing; the
    # Toeplitz-route agreement test is the guard for the convention
    K[:, :n] = 0.0
    det = lu_det(np.eye(T, dtype=complex) - K)
    return complex(det)


def bo_det(xi: XiVector, n: int, T: int | None = None) -> CharFnResult:
    """Characteristic-function value via the Fredholm-determinant route.

    Starts at truncation T = n + 32 (or the caller's T >= n), doubling until
    the determinant moves by less than 1e-12; the Gaussian prefactor
    exp(-|xi|^2 / 2) multiplies the projected determinant.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if T is None:
        T = n + 32
    if T < n:
        raise ValueError(f"need T >= n, got T = {T}, n = {n}")
    det = _fredholm_det(xi, n, T)
    for _ in range(_BO_MAX_DOUBLINGS):
        T2 = 2 * T
        det2 = _fredholm_det(xi, n, T2)
        if abs(det2 - det) < _BO_DET_TOL:
            det, T = det2, T2
            break
        det, T = det2, T2
    else:
        raise RuntimeError(
            f"Fredholm determinant did not stabilize to {_BO_DET_TOL} within "
            f"{_BO_MAX_DOUBLINGS} doublings (last T = {T})")
    value = math.exp(-0.5 * xi.norm_sq()) * det
    return CharFnResult(value=complex(value), method="borodin_okounkov",
                        truncation=T, residual=0.0)


def j1_diagnostics(xi: XiVector, n: int) -> J1Diagnostics:
    """Trace-norm bound for the projected Fredholm kernel, plus the gap bound.

    Requires the small-coefficient regime N = n/m >= 4 rho with
    rho = sqrt((1 + log m)/2) * |xi|; inside it,
    j1 <= 4 m^2 e^{2 rho} rho^{2N} / ((15/16)^2 Gamma(N+1)^2) and
    |1 - det(I - K Q_n)| <= j1 e^{1 + j1}.
    """
    m = xi.m
    rho = math.sqrt((1.0 + math.log(m)) / 2.0) * xi.norm()
    N = n / m
    if N < 4.0 * rho:
        raise ApplicabilityError(
            f"N >= 4*rho (N = n/m = {N:.6g}, rho = {rho:.6g})")
    if rho == 0.0:
        zero = LogReal.zero()
        return J1Diagnostics(rho=0.0, j1_norm_bound=zero, fredholm_gap_bound=zero)
    ln_j1 = (math.log(4.0) + 2.0 * math.log(m) + 2.0 * rho
             + 2.0 * N * math.log(rho) - 2.0 * ln_gamma(N + 1.0)
             + 2.0 * math.log(16.0 / 15.0))
    j1_real = math.exp(ln_j1) if ln_j1 < 700 else math.inf
    ln_gap = ln_j1 + 1.0 + j1_real
    return J1Diagnostics(rho=rho,
                         j1_norm_bound=LogReal.from_ln(ln_j1),
                         fredholm_gap_bound=LogReal.from_ln(ln_gap))


def j1_envelope_check(xi: XiVector, n: int) -> float:
    """Log-margin of the envelope domination of the determinant gap:
    ln(j1 e^{1+j1}) - ln|1 - det(I - K Q_n)|, nonnegative when the trace-norm
    envelope really dominates.  Requires the j1_diagnostics regime."""
    jd = j1_diagnostics(xi, n)
    res = bo_det(xi, n)
    det = res.value * math.exp(0.5 * xi.norm_sq())
    gap = abs(1.0 - det)
    if gap == 0.0:
        return math.inf
    if jd.fredholm_gap_bound.is_zero():
        return 0.0 if gap == 0.0 else -math.inf
    return float(jd.fredholm_gap_bound.ln_mag - math.log(gap))


def fcoeff_bound_check(xi: XiVector, k_range) -> float:
    """Worst margin of the factorial coefficient-decay bound.

    For each k in k_range (all must satisfy k > 2 m rho) and both Hankel
    symbols exp(-h), exp(+h), checks
    |what_{+-k}| <= 2 e^{rho} rho^{ceil(k/m)} / ceil(k/m)!
    and returns the minimum of (bound - |coefficient|).
    """
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise ValueError("k_range must be non-empty")
    m = xi.m
    rho = math.sqrt((1.0 + math.log(m)) / 2.0) * xi.norm()
    if ks[0] <= 2.0 * m * rho:
        raise ApplicabilityError(
            f"k > 2*m*rho needed for all checked k (k = {ks[0]}, "
            f"2*m*rho = {2.0 * m * rho:.6g})")
    g = poly_from_xi(xi)
    h = hilbert_transform(g).h
    J = max(ks)
    margin = math.inf
    for scale in (-1.0, 1.0):
        w = symbol_coeffs(h, J, scale=scale)
        for k in ks:
            q = math.ceil(k / m)
            bound = 2.0 * math.exp(rho + q * math.log(rho) - ln_gamma(q + 1)) \
                if rho > 0 else 0.0
            for signed_k in (k, -k):
                margin = min(margin, bound - abs(w.coeff(signed_k)))
    return float(margin)
