"""Signed log-domain scalars and the numeric kernels built on them.

Quantities produced by this package routinely live far outside double range
(log10 magnitudes near -2000 appear in normal use), so scalar bookkeeping is
done with (sign, ln|x|) pairs.  The module also houses the shared numeric
utilities everything else is built on: log-gamma, power-of-two FFTs, complex
determinants in log form, and composite Gauss-Legendre quadrature with a
panel-doubling error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ApplicabilityError",
    "LogReal",
    "ComplexMatrix",
    "logreal_arith",
    "ln_gamma",
    "fft",
    "lu_det",
    "quad_gl",
]

#: Opposite-sign addition whose log-magnitudes agree more closely than this
#: collapses to exact zero: the residual carries no representational meaning.
CANCELLATION_EPS = 1e-13

#: Near-integer tolerance for exponents reaching pow_real through floats.
_INT_EPS = 1e-9

_LN10 = math.log(10.0)


class ApplicabilityError(ValueError):
    """Raised when a stated hypothesis of a bound or identity is violated.

    Carries the violated hypothesis as text so callers (and the command-line
    driver) can name exactly which precondition failed.
    """

    def __init__(self, hypothesis: str, message: str | None = None):
        self.hypothesis = hypothesis
        super().__init__(message or f"hypothesis violated: {hypothesis}")


@dataclass(frozen=True)
class LogReal:
    """A signed real number stored as (sign, ln|x|).

    ``sign`` is -1, 0, or +1; ``ln_mag`` is the natural log of the absolute
    value and carries no meaning when ``sign == 0``.  Values with ln_mag up
    to +-1e6 combine without overflow.
    """

    sign: int
    ln_mag: float = 0.0

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0, or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "ln_mag", 0.0)
        elif not math.isfinite(self.ln_mag):
            raise ValueError(f"ln_mag must be finite, got {self.ln_mag!r}")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_real(x: float) -> "LogReal":
        x = float(x)
        if x == 0.0:
            return LogReal(0)
        if not math.isfinite(x):
            raise ValueError(f"cannot represent non-finite value {x!r}")
        return LogReal(1 if x > 0 else -1, math.log(abs(x)))

    @staticmethod
    def from_ln(ln_mag: float, sign: int = 1) -> "LogReal":
        if sign == 0:
            return LogReal(0)
        return LogReal(sign, float(ln_mag))

    @staticmethod
    def zero() -> "LogReal":
        return LogReal(0)

    @staticmethod
    def one() -> "LogReal":
        return LogReal(1, 0.0)

    # -- conversions --------------------------------------------------------

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        # math.exp raises on overflow instead of returning inf
        mag = math.inf if self.ln_mag > 709.78 else math.exp(self.ln_mag)
        return mag if self.sign > 0 else -mag

    def log10(self) -> float:
        """log10 of the magnitude (-inf for zero)."""
        return -math.inf if self.sign == 0 else self.ln_mag / _LN10

    def is_zero(self) -> bool:
        return self.sign == 0

    # -- operator sugar over logreal_arith ----------------------------------

    def __mul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "div")

    def __rtruediv__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(other, self, "div")

    def __add__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "sub")

    def __rsub__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(other, self, "sub")

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, float)):
            return NotImplemented
        return logreal_arith(self, LogReal.from_real(exponent), "pow_real")

    def __neg__(self):
        return LogReal(-self.sign, self.ln_mag)

    def __abs__(self):
        return LogReal(abs(self.sign), self.ln_mag)

    def __lt__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "compare") < 0

    def __le__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "compare") <= 0

    def __gt__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "compare") > 0

    def __ge__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else logreal_arith(self, other, "compare") >= 0


def _coerce(x) -> LogReal | None:
    if isinstance(x, LogReal):
        return x
    if isinstance(x, (int, float)):
        return LogReal.from_real(float(x))
    return None


def _add_signed(a: LogReal, b: LogReal) -> LogReal:
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    if a.sign == b.sign:
        return LogReal(a.sign, float(np.logaddexp(a.ln_mag, b.ln_mag)))
    # opposite signs: the larger magnitude wins
    d = a.ln_mag - b.ln_mag
    if abs(d) < CANCELLATION_EPS:
        return LogReal.zero()
    big, small_gap = (a, d) if d > 0 else (b, -d)
    # ln(e^big - e^small) = big + ln(1 - e^-(big-small))
    return LogReal(big.sign, big.ln_mag + math.log(-math.expm1(-small_gap)))


def logreal_arith(a: LogReal, b: LogReal, op: str):
    """Combine two signed log-domain scalars.

    ``op`` is one of ``mul``, ``div``, ``add``, ``sub``, ``pow_real``,
    ``compare``.  ``compare`` returns -1/0/+1 ordering; the rest return a
    LogReal.  Addition and subtraction run through log-sum-exp, so operands
    with ln_mag up to +-1e6 never overflow.  For ``pow_real`` the exponent
    is the real value of ``b``; a negative base requires it to be integral.
    """
    if op == "mul":
        if a.sign == 0 or b.sign == 0:
            return LogReal.zero()
        return LogReal(a.sign * b.sign, a.ln_mag + b.ln_mag)

    if op == "div":
        if b.sign == 0:
            raise ZeroDivisionError("LogReal division by zero-sign value")
        if a.sign == 0:
            return LogReal.zero()
        return LogReal(a.sign * b.sign, a.ln_mag - b.ln_mag)

    if op == "add":
        return _add_signed(a, b)

    if op == "sub":
        return _add_signed(a, LogReal(-b.sign, b.ln_mag))

    if op == "pow_real":
        p = b.to_real()
        p_int = round(p)
        is_integral = abs(p - p_int) <= _INT_EPS * max(1.0, abs(p))
        if a.sign == 0:
            if p <= 0:
                raise ZeroDivisionError("zero base with non-positive exponent")
            return LogReal.zero()
        if a.sign < 0:
            if not is_integral:
                raise ValueError(
                    "negative base requires an integer exponent, got "
                    f"{p!r}")
            sign = 1 if int(p_int) % 2 == 0 else -1
            return LogReal(sign, a.ln_mag * p)
        return LogReal(1, a.ln_mag * p)

    if op == "compare":
        if a.sign != b.sign:
            return -1 if a.sign < b.sign else 1
        if a.sign == 0:
            return 0
        if a.ln_mag == b.ln_mag:
            return 0
        bigger_a = a.ln_mag > b.ln_mag
        if a.sign > 0:
            return 1 if bigger_a else -1
        return -1 if bigger_a else 1

    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex matrix stored row-major as a flat tuple of entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}")

    @staticmethod
    def from_array(a: np.ndarray) -> "ComplexMatrix":
        a = np.asarray(a, dtype=complex)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {a.shape}")
        return ComplexMatrix(a.shape[0], a.shape[1], tuple(a.ravel().tolist()))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=complex).reshape(self.rows, self.cols)


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function, x > 0 only."""
    if not (isinstance(x, (int, float)) and x > 0):
        raise ValueError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def fft(values, direction: str = "forward") -> np.ndarray:
    """DFT of a power-of-two-length complex sequence.

    ``forward`` is the plain DFT sum; ``inverse`` carries the 1/G factor, so
    the two compose to the identity.
    """
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d sequence, got shape {v.shape}")
    g = v.size
    if g == 0 or (g & (g - 1)) != 0:
        raise ValueError(f"length must be a power of two, got {g}")
    if direction == "forward":
        return np.fft.fft(v)
    if direction == "inverse":
        return np.fft.ifft(v)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def lu_det(matrix, log_form: bool = False):
    """Determinant of a square complex matrix via pivoted elimination.

    With ``log_form=True`` returns ``(LogReal magnitude, phase)`` where phase
    is a unit-modulus complex number (0j for a singular matrix); this keeps
    determinants representable for truncation sizes up to ~1024 where the
    plain value would over- or underflow.
    """
    if isinstance(matrix, ComplexMatrix):
        a = matrix.as_array()
    else:
        a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    phase, ln_mag = np.linalg.slogdet(a)
    if phase == 0:
        return (LogReal.zero(), 0j) if log_form else 0j
    if log_form:
        return LogReal(1, float(ln_mag)), complex(phase)
    return complex(phase) * math.exp(float(ln_mag))


def quad_gl(f, a: float, b: float, panels: int = 8, order: int = 16):
    """Composite Gauss-Legendre quadrature on [a, b].

    Returns ``(value, error_estimate)``: the value on 2*panels panels and the
    absolute difference against the single-resolution result, so the estimate
    bounds the observed change under one panel doubling.  Raises on any
    non-finite sample.
    """
    if not (a < b):
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    if panels < 1 or order < 1:
        raise ValueError("panels and order must be positive")
    coarse = _gl_fixed(f, a, b, panels, order)
    fine = _gl_fixed(f, a, b, 2 * panels, order)
    return fine, float(abs(fine - coarse))


def _gl_fixed(f, a: float, b: float, panels: int, order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        for x, w in zip(nodes, weights):
            y = f(mid + half * x)
            if not np.all(np.isfinite(y)):
                raise ValueError(f"non-finite sample {y!r} at x={mid + half * x!r}")
            total = total + (w * half) * y
    return total
