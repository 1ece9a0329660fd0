"""Real trigonometric polynomials driven by a real coefficient vector.

A length-2m real vector xi defines the degree-m polynomial

    g(theta) = sum_{0 < |k| <= m} ghat_k e^{i k theta},
    ghat_k = zeta_k / sqrt(2k),  zeta_k = xi_{2k-1} - i xi_{2k}  (k >= 1),

with ghat_{-k} = conj(ghat_k), which keeps g real-valued and mean-zero.  The
module also builds the conjugate (Hilbert-transform) partner h, evaluates
analytic continuations and derivatives, and computes the closed-form norm and
sup-bound inventory used by the certification suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "XiVector",
    "TrigPoly",
    "HilbertPair",
    "NormReport",
    "poly_from_xi",
    "eval_analytic",
    "hilbert_transform",
    "a_functional",
    "norms",
    "grid_sup",
]


@dataclass(frozen=True)
class XiVector:
    """Real coefficient vector of length 2m, m >= 1."""

    m: int
    xi: tuple

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"degree m must be >= 1, got {self.m}")
        if len(self.xi) != 2 * self.m:
            raise ValueError(f"need 2m = {2 * self.m} coordinates, got {len(self.xi)}")
        object.__setattr__(self, "xi", tuple(float(x) for x in self.xi))

    @staticmethod
    def from_array(x) -> "XiVector":
        x = np.asarray(x, dtype=float).ravel()
        if x.size == 0 or x.size % 2:
            raise ValueError(f"coordinate count must be positive and even, got {x.size}")
        return XiVector(x.size // 2, tuple(x.tolist()))

    def norm_sq(self) -> float:
        return float(np.dot(self.xi, self.xi))

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())


@dataclass(frozen=True)
class TrigPoly:
    """Degree-m real trig polynomial stored by positive-frequency data.

    ``zeta[k-1]`` holds zeta_k for k = 1..m; negative frequencies are
    implied by zeta_{-k} = conj(zeta_k), so reality holds by construction.
    """

    m: int
    zeta: tuple

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError(f"degree must be >= 0, got {self.m}")
        if len(self.zeta) != self.m:
            raise ValueError(f"need {self.m} coefficients, got {len(self.zeta)}")
        object.__setattr__(self, "zeta", tuple(complex(z) for z in self.zeta))

    def zeta_array(self) -> np.ndarray:
        return np.asarray(self.zeta, dtype=complex)

    def fourier(self, k: int) -> complex:
        """Fourier coefficient at integer frequency k (0 outside the band)."""
        if k == 0 or abs(k) > self.m:
            return 0.0 + 0.0j
        z = self.zeta[abs(k) - 1]
        if k < 0:
            z = z.conjugate()
        return z / math.sqrt(2.0 * abs(k))

    def coeff_sq_sum(self) -> float:
        """sum_k |zeta_k|^2 (equals the squared norm of the source vector)."""
        z = self.zeta_array()
        return float(np.vdot(z, z).real)

    def rotate(self, phi: float) -> "TrigPoly":
        """Polynomial of theta -> value at theta + phi (zeta_k -> zeta_k e^{ik phi})."""
        k = np.arange(1, self.m + 1)
        return TrigPoly(self.m, tuple(self.zeta_array() * np.exp(1j * k * phi)))

    def xi_of(self) -> XiVector:
        """Exact round trip back to the real coefficient vector."""
        if self.m < 1:
            raise ValueError("degree-0 polynomial has no coefficient vector")
        out = []
        for z in self.zeta:
            out.extend((z.real, -z.imag))
        return XiVector(self.m, tuple(out))

    def values_on_grid(self, grid_size: int) -> np.ndarray:
        """Real values on the uniform grid theta_j = 2 pi j / grid_size."""
        theta = 2.0 * math.pi * np.arange(grid_size) / grid_size
        return eval_analytic(self, theta, 0).real


@dataclass(frozen=True)
class HilbertPair:
    """A polynomial together with its conjugate (Hilbert-transform) partner."""

    g: TrigPoly
    h: TrigPoly


def poly_from_xi(xi: XiVector) -> TrigPoly:
    """Build the real trig polynomial from its real coefficient vector."""
    if xi.m < 1:
        raise ValueError("degree m must be >= 1")
    x = np.asarray(xi.xi, dtype=float)
    zeta = x[0::2] - 1j * x[1::2]
    return TrigPoly(xi.m, tuple(zeta.tolist()))


def eval_analytic(p: TrigPoly, z, derivative_order: int = 0):
    """Evaluate p (or a derivative up to order 3) at complex argument z.

    The Fourier sum extends off the real axis as an entire function; on the
    real axis the order-0 value is real.  Accepts scalars or arrays.
    """
    if not 0 <= derivative_order <= 3:
        raise ValueError(f"derivative_order must be 0..3, got {derivative_order}")
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z, dtype=complex)
    for k in range(1, p.m + 1):
        ghat = p.zeta[k - 1] / math.sqrt(2.0 * k)
        ck = (1j * k) ** derivative_order
        out = out + (ghat * ck) * np.exp(1j * k * z)
        out = out + (np.conj(ghat) * np.conj(ck)) * np.exp(-1j * k * z)
    if out.ndim == 0:
        return complex(out)
    return out


def hilbert_transform(p: TrigPoly) -> HilbertPair:
    """Pair p with its conjugate partner h.

    h carries hhat_k = i * sgn(k) * ghat_k, i.e. zeta_k -> i zeta_k; this
    orientation makes the circle-average of g' h equal the squared norm of
    the source vector (checked by quadrature in the tests).
    """
    return HilbertPair(p, TrigPoly(p.m, tuple(1j * z for z in p.zeta)))


def a_functional(p: TrigPoly, scalar: complex = 1.0) -> complex:
    """Quadratic coefficient functional of scalar * p.

    Returns scalar^2 * sum_{k>=1} k fhat_k fhat_{-k}; since fhat_{-k} is the
    conjugate of fhat_k this equals scalar^2 * (sum_k |zeta_k|^2) / 2, and
    scalar = i gives minus half the squared source-vector norm.
    """
    total = 0.0 + 0.0j
    for k in range(1, p.m + 1):
        total += k * p.fourier(k) * p.fourier(-k)
    return complex(scalar) ** 2 * total


@dataclass(frozen=True)
class NormReport:
    """Closed-form norm inventory for one polynomial."""

    m: int
    h_half_sq: float
    _zeta_sq: tuple = field(repr=False)

    def l2_sq_of_derivative(self, order: int) -> float:
        """Squared circle-average L2 norm of the order-th derivative.

        Equals sum_k k^(2*order - 1) |zeta_k|^2 (order 0 gives the function
        itself).
        """
        if not 0 <= order <= 3:
            raise ValueError(f"order must be 0..3, got {order}")
        k = np.arange(1, self.m + 1, dtype=float)
        return float(np.sum(k ** (2 * order - 1) * np.asarray(self._zeta_sq)))

    def sup_bounds(self, order: int) -> dict:
        """Upper bounds for the sup norm of the order-th derivative.

        ``coeff_sum`` is the absolute Fourier coefficient sum
        sum_{k != 0} |k|^order |fhat_k|; ``closed_form`` is the
        Cauchy-Schwarz closed form: sqrt(2(1 + log m)) * ||zeta|| at order 0
        and C_d * (m(m+1))^{d/2} * ||zeta|| at order d >= 1 with
        C_1, C_2, C_3 = 1, 1/sqrt(2), 1/sqrt(3).
        """
        if not 0 <= order <= 3:
            raise ValueError(f"order must be 0..3, got {order}")
        zsq = np.asarray(self._zeta_sq)
        zabs = np.sqrt(zsq)
        k = np.arange(1, self.m + 1, dtype=float)
        coeff_sum = float(np.sum(2.0 * k ** order * zabs / np.sqrt(2.0 * k)))
        znorm = math.sqrt(float(zsq.sum()))
        if order == 0:
            closed = math.sqrt(2.0 * (1.0 + math.log(self.m))) * znorm
        else:
            c_d = (1.0, 1.0 / math.sqrt(2.0), 1.0 / math.sqrt(3.0))[order - 1]
            closed = c_d * (self.m * (self.m + 1.0)) ** (order / 2.0) * znorm
        return {"coeff_sum": coeff_sum, "closed_form": closed}


def norms(p: TrigPoly) -> NormReport:
    """Closed-form norms of p: half-integer Sobolev square plus accessors."""
    zsq = tuple(abs(z) ** 2 for z in p.zeta)
    return NormReport(p.m, float(sum(zsq)), zsq)


def grid_sup(p: TrigPoly, order: int = 0, grid_size: int = 4096,
             newton_steps: int = 3) -> float:
    """Max of |p^{(order)}| over the circle: dense grid plus Newton polish.

    Newton refinement (available for order <= 1, where the needed higher
    derivatives stay within the order cap) iterates on the stationarity
    condition p^{(order+1)} = 0 from the grid argmax.
    """
    theta = 2.0 * math.pi * np.arange(grid_size) / grid_size
    vals = np.abs(eval_analytic(p, theta, order))
    best = float(vals.max())
    if order > 1:
        return best
    t = float(theta[int(vals.argmax())])
    for _ in range(newton_steps):
        d1 = eval_analytic(p, t, order + 1).real
        d2 = eval_analytic(p, t, order + 2).real
        if abs(d2) < 1e-14:
            break
        t -= d1 / d2
    return max(best, float(abs(eval_analytic(p, t, order))))
