"""Haar-unitary sampling and statistical verification of trace statistics.

Sampling is QR-with-phase-fix on complex Ginibre matrices (no eigensolver
anywhere: distributional checks run through traces, and pointwise identities
run through explicit angle configurations).  The module covers the rescaled
trace vector, the Gaussian moment-matching sweep, the diffusion-generator and
gradient-matrix identities with their closed-form error terms, deterministic
per-replica trace streams, and small Monte Carlo drivers for averaged
exponentials of linear eigenvalue statistics and for box-tail probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import ApplicabilityError, fft

__all__ = [
    "TraceSample",
    "Configuration",
    "MomentSpec",
    "MomentCheck",
    "DsReport",
    "SteinReport",
    "McEstimate",
    "sample_haar",
    "haar_batch",
    "trace_vector",
    "collect_traces",
    "gaussian_moment",
    "multi_indices",
    "ds_verify",
    "generator_residual",
    "gamma_identities",
    "stein_terms",
    "sample_traces",
    "traces_to_csv",
    "fourier_coefficients",
    "exp_linear_stat_mc",
    "ld_tail_check",
]

_UNITARITY_TOL = 1e-10
_DRIFT_TOL = 1e-8
_MIN_ANGLE_GAP = 1e-9
_DEFAULT_CHUNK = 20000


@dataclass(frozen=True)
class TraceSample:
    """Rescaled power traces of one unitary: traces[k-1] = sqrt(2/k) Tr U^k."""

    n: int
    m: int
    traces: tuple

    def __post_init__(self) -> None:
        if len(self.traces) != self.m:
            raise ValueError(f"need {self.m} traces, got {len(self.traces)}")
        object.__setattr__(self, "traces", tuple(complex(t) for t in self.traces))

    def x(self) -> np.ndarray:
        """Real coordinate vector: x[2k-2] = Re traces[k-1], x[2k-1] = Im."""
        out = np.empty(2 * self.m)
        for k in range(1, self.m + 1):
            out[2 * k - 2] = self.traces[k - 1].real
            out[2 * k - 1] = self.traces[k - 1].imag
        return out


@dataclass(frozen=True)
class Configuration:
    """n distinct angles on the circle (minimum circular gap 1e-9)."""

    n: int
    theta: tuple

    def __post_init__(self) -> None:
        if self.n < 1 or len(self.theta) != self.n:
            raise ValueError(f"need {self.n} angles, got {len(self.theta)}")
        th = np.mod(np.asarray(self.theta, dtype=float), 2.0 * math.pi)
        object.__setattr__(self, "theta", tuple(th.tolist()))
        if self.n > 1:
            s = np.sort(th)
            gaps = np.diff(s, append=s[0] + 2.0 * math.pi)
            if gaps.min() <= _MIN_ANGLE_GAP:
                raise ValueError(
                    f"angles too close: min circular gap {gaps.min():.3e} "
                    f"<= {_MIN_ANGLE_GAP}")

    def array(self) -> np.ndarray:
        return np.asarray(self.theta, dtype=float)


@dataclass(frozen=True)
class MomentSpec:
    """A pair of exponent multi-indices for one mixed trace moment."""

    a: tuple
    b: tuple

    def __post_init__(self) -> None:
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have equal length")
        for t in (self.a, self.b):
            if any(int(v) != v or v < 0 for v in t):
                raise ValueError(f"exponents must be nonnegative integers, got {t}")
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))

    @property
    def m(self) -> int:
        return len(self.a)

    def weight_a(self) -> int:
        return sum(k * ak for k, ak in enumerate(self.a, start=1))

    def weight_b(self) -> int:
        return sum(k * bk for k, bk in enumerate(self.b, start=1))


def sample_haar(n: int, stream: np.random.Generator) -> np.ndarray:
    """One Haar-distributed n x n unitary via phase-fixed QR."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return haar_batch(n, 1, stream)[0]


def haar_batch(n: int, batch: int, stream: np.random.Generator) -> np.ndarray:
    """Batch of Haar unitaries: QR of complex Ginibre, with the triangular
    factor's diagonal phases divided out so the law is exactly uniform.

    Each matrix consumes a contiguous block of the stream, so splitting a
    run into batches of any size reproduces the same unitaries."""
    z = stream.standard_normal((batch, 2, n, n))
    g = (z[:, 0] + 1j * z[:, 1]) / math.sqrt(2.0)
    q, r = np.linalg.qr(g)
    d = np.einsum("bii->bi", r)
    return q * (d / np.abs(d))[:, None, :]


def trace_vector(U: np.ndarray, m: int) -> TraceSample:
    """Rescaled power traces of U up to degree m, with a unitarity-drift gate.

    Powers come from repeated dense multiplication; the final power is
    checked for cumulative drift ||(U^m)* (U^m) - I||_max < 1e-8.
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"U must be square, got shape {U.shape}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    n = U.shape[0]
    traces = []
    P = U
    for k in range(1, m + 1):
        if k > 1:
            P = P @ U
        traces.append(math.sqrt(2.0 / k) * complex(np.trace(P)))
    drift = float(np.abs(P.conj().T @ P - np.eye(n)).max())
    if drift > _DRIFT_TOL:
        raise RuntimeError(f"unitarity drift {drift:.3e} exceeds {_DRIFT_TOL} at power {m}")
    return TraceSample(n=n, m=m, traces=tuple(traces))


def _traces_batch(U: np.ndarray, kmax: int) -> np.ndarray:
    """out[k-1, b] = Tr U_b^k (unrescaled), k = 1..kmax."""
    batch = U.shape[0]
    out = np.empty((kmax, batch), dtype=complex)
    P = U
    out[0] = np.einsum("bii->b", P)
    for k in range(2, kmax + 1):
        P = P @ U
        out[k - 1] = np.einsum("bii->b", P)
    return out


def collect_traces(n: int, kmax: int, reps: int, seed: int,
                   chunk: int = _DEFAULT_CHUNK) -> np.ndarray:
    """Unrescaled traces Tr U^k, k = 1..kmax, over reps Haar draws.

    Deterministic given (n, kmax, reps, seed): one sequential stream,
    chunked only for memory.
    """
    rng = np.random.default_rng(seed)
    parts = []
    done = 0
    while done < reps:
        b = min(chunk, reps - done)
        parts.append(_traces_batch(haar_batch(n, b, rng), kmax))
        done += b
    if not parts:
        return np.empty((kmax, 0), dtype=complex)
    return np.concatenate(parts, axis=1)


def gaussian_moment(spec: MomentSpec) -> float:
    """Closed-form Gaussian value: prod_k [a_k = b_k] a_k! 2^a_k."""
    val = 1.0
    for ak, bk in zip(spec.a, spec.b):
        if ak != bk:
            return 0.0
        val *= math.factorial(ak) * 2.0 ** ak
    return val


def multi_indices(m: int, max_weight: int) -> list:
    """All m-tuples a of nonnegative integers with sum k*a_k <= max_weight."""
    out = []

    def rec(pos: int, left: int, cur: list) -> None:
        if pos == m:
            out.append(tuple(cur))
            return
        k = pos + 1
        for a in range(left // k + 1):
            cur.append(a)
            rec(pos + 1, left - k * a, cur)
            cur.pop()

    rec(0, max_weight, [])
    return out


@dataclass(frozen=True)
class MomentCheck:
    spec: MomentSpec
    empirical: complex
    exact: float
    standard_error: float
    passed: bool


@dataclass(frozen=True)
class DsReport:
    n: int
    m: int
    max_weight: int
    reps: int
    seed: int
    out_of_theorem: bool
    checks: tuple
    n_failed: int
    worst_deviation: float


def ds_verify(n: int, m: int, max_weight: int, reps: int, seed: int) -> DsReport:
    """Moment-matching sweep: every mixed trace moment of weight <= max_weight
    against its Gaussian closed form, gated at 5 standard errors.

    Weights beyond n leave the matching regime; such runs are flagged
    ``out_of_theorem`` rather than rejected.
    """
    if reps < 1000:
        raise ValueError(f"reps >= 1000 required, got {reps}")
    t = collect_traces(n, m, reps, seed)
    tr = {k: math.sqrt(2.0 / k) * t[k - 1] for k in range(1, m + 1)}
    # power tables: pows[k][j] = tr_k ** j
    pows = {}
    for k in range(1, m + 1):
        top = max_weight // k
        pk = np.ones((top + 1, reps), dtype=complex)
        for j in range(1, top + 1):
            pk[j] = pk[j - 1] * tr[k]
        pows[k] = pk
    idx = multi_indices(m, max_weight)
    checks = []
    worst = 0.0
    n_failed = 0
    for a in idx:
        prod_a = np.ones(reps, dtype=complex)
        for k in range(1, m + 1):
            if a[k - 1]:
                prod_a = prod_a * pows[k][a[k - 1]]
        for b in idx:
            val = prod_a
            for k in range(1, m + 1):
                if b[k - 1]:
                    val = val * np.conj(pows[k][b[k - 1]])
            emp = complex(val.mean())
            spec = MomentSpec(a, b)
            exact = gaussian_moment(spec)
            se = float(np.abs(val - emp).std(ddof=1) / math.sqrt(reps))
            dev = abs(emp - exact)
            passed = dev <= 5.0 * se
            if not passed:
                n_failed += 1
            worst = max(worst, dev / max(se, 1e-15))
            checks.append(MomentCheck(spec, emp, exact, se, passed))
    return DsReport(n=n, m=m, max_weight=max_weight, reps=reps, seed=seed,
                    out_of_theorem=max_weight > n, checks=tuple(checks),
                    n_failed=n_failed, worst_deviation=worst)


def _drift(theta: np.ndarray) -> np.ndarray:
    """Gradient of the log-repulsion potential: -sum_i cot((theta_j - theta_i)/2)."""
    d = theta[:, None] - theta[None, :]
    np.fill_diagonal(d, np.nan)
    with np.errstate(invalid="ignore"):
        c = 1.0 / np.tan(d / 2.0)
    np.fill_diagonal(c, 0.0)
    return -c.sum(axis=1)


def _traces_rescaled(theta: np.ndarray, kmax: int) -> dict:
    return {k: math.sqrt(2.0 / k) * complex(np.exp(1j * k * theta).sum())
            for k in range(1, kmax + 1)}


def _zeta_gen(tr: dict, k: int) -> complex:
    """Generator correction sqrt(k/2) sum_{l<k} sqrt(l(k-l)) T_l T_{k-l}."""
    return math.sqrt(k / 2.0) * sum(
        math.sqrt(l * (k - l)) * tr[l] * tr[k - l] for l in range(1, k))


def generator_residual(config: Configuration, k: int) -> float:
    """Residual of the diffusion-generator identity on rescaled traces.

    Applies L = -Laplacian + drift . grad to T_k directly and compares with
    n k T_k + zeta_gen_k; the return value is |LHS - RHS|, which is zero up
    to rounding for every configuration.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    theta = config.array()
    n = config.n
    f = math.sqrt(2.0 / k) * np.exp(1j * k * theta)
    lap = (-k * k) * f.sum()
    grad = 1j * k * f
    lhs = -lap + np.dot(_drift(theta), grad)
    tr = _traces_rescaled(theta, k)
    rhs = n * k * tr[k] + _zeta_gen(tr, k)
    return float(abs(lhs - rhs))


def _gamma_from_gradients(theta: np.ndarray, m: int) -> np.ndarray:
    g = np.zeros((2 * m, theta.size))
    for k in range(1, m + 1):
        g[2 * k - 2] = -math.sqrt(2 * k) * np.sin(k * theta)
        g[2 * k - 1] = math.sqrt(2 * k) * np.cos(k * theta)
    return g @ g.T


def _gamma_closed(theta: np.ndarray, m: int) -> np.ndarray:
    n = theta.size
    c = {p: float(np.cos(p * theta).sum()) for p in range(0, 2 * m + 1)}
    s = {p: float(np.sin(p * theta).sum()) for p in range(0, 2 * m + 1)}
    g = np.zeros((2 * m, 2 * m))
    for k in range(1, m + 1):
        g[2 * k - 2, 2 * k - 2] = k * (n - c[2 * k])
        g[2 * k - 1, 2 * k - 1] = k * (n + c[2 * k])
        g[2 * k - 2, 2 * k - 1] = g[2 * k - 1, 2 * k - 2] = -k * s[2 * k]
        for l in range(k + 1, m + 1):
            r = math.sqrt(k * l)
            g[2 * k - 2, 2 * l - 2] = g[2 * l - 2, 2 * k - 2] = r * (c[l - k] - c[l + k])
            g[2 * k - 1, 2 * l - 1] = g[2 * l - 1, 2 * k - 1] = r * (c[l - k] + c[l + k])
            g[2 * k - 2, 2 * l - 1] = g[2 * l - 1, 2 * k - 2] = -r * (s[k + l] - s[l - k])
            g[2 * k - 1, 2 * l - 2] = g[2 * l - 2, 2 * k - 1] = -r * (s[k + l] + s[l - k])
    return g


def gamma_identities(config: Configuration, m: int) -> float:
    """Max residual between the gradient-product matrix of the trace
    coordinates and its closed forms in lower-order traces."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    theta = config.array()
    return float(np.abs(_gamma_from_gradients(theta, m) - _gamma_closed(theta, m)).max())


@dataclass(frozen=True)
class SteinReport:
    n: int
    m: int
    reps: int
    closed_A: float
    closed_B: float
    mc_A: float
    mc_B: float
    se_A: float
    se_B: float
    pass_A: bool
    pass_B: bool


def stein_terms(n: int, m: int, reps: int, seed: int) -> SteinReport:
    """Exchangeable-pair error terms: closed forms next to Monte Carlo.

    closed_A should match E|K^-1 zeta_gen|^2 and closed_B should match
    E||I - K^-1 Gamma||_F^2; each comparison is gated at 5 standard errors.
    """
    if m > n / 2:
        raise ApplicabilityError(f"m <= n/2 (m = {m}, n = {n})")
    t = collect_traces(n, 2 * m, reps, seed)
    tr = {k: math.sqrt(2.0 / k) * t[k - 1] for k in range(1, m + 1)}
    # E |K^-1 zeta_gen|^2
    tot_a = np.zeros(reps)
    for k in range(2, m + 1):
        zg = math.sqrt(k / 2.0) * sum(
            math.sqrt(l * (k - l)) * tr[l] * tr[k - l] for l in range(1, k))
        tot_a += np.abs(zg) ** 2 / (n * k) ** 2
    # E ||I - K^-1 Gamma||_F^2 from the certified closed forms
    c = {p: t[p - 1].real for p in range(1, 2 * m + 1)}
    s = {p: t[p - 1].imag for p in range(1, 2 * m + 1)}
    fro = np.zeros(reps)
    for k in range(1, m + 1):
        fro += 2.0 * (c[2 * k] / n) ** 2 + 2.0 * (s[2 * k] / n) ** 2
        for l in range(k + 1, m + 1):
            r = math.sqrt(k * l)
            for e in (r * (c[l - k] - c[l + k]), r * (c[l - k] + c[l + k]),
                      -r * (s[k + l] - s[l - k]), -r * (s[k + l] + s[l - k])):
                fro += (e / (n * k)) ** 2 + (e / (n * l)) ** 2
    closed_a = (2.0 * m + 5.0) * m * (m - 1.0) / (9.0 * n ** 2)
    closed_b = (8.0 * m + 7.0) * (m + 1.0) * m / (6.0 * n ** 2)
    mc_a = float(tot_a.mean())
    mc_b = float(fro.mean())
    se_a = float(tot_a.std(ddof=1) / math.sqrt(reps))
    se_b = float(fro.std(ddof=1) / math.sqrt(reps))
    return SteinReport(
        n=n, m=m, reps=reps, closed_A=closed_a, closed_B=closed_b,
        mc_A=mc_a, mc_B=mc_b, se_A=se_a, se_B=se_b,
        pass_A=abs(mc_a - closed_a) <= 5.0 * se_a,
        pass_B=abs(mc_b - closed_b) <= 5.0 * se_b)


def sample_traces(n: int, m: int, reps: int, seed: int) -> list:
    """Deterministic per-replica trace samples.

    Replica r draws from an independent stream keyed by (seed, r), so the
    output is identical no matter how the work is scheduled; ordering is by
    replica index.
    """
    if reps < 0:
        raise ValueError(f"reps must be >= 0, got {reps}")
    out = []
    for r in range(reps):
        rng = np.random.default_rng([seed, r])
        out.append(trace_vector(sample_haar(n, rng), m))
    return out


def traces_to_csv(samples) -> str:
    """CSV rows ``rep,k,re_Tk,im_Tk``, one per (replica, degree)."""
    lines = ["rep,k,re_Tk,im_Tk"]
    for rep, ts in enumerate(samples):
        for k in range(1, ts.m + 1):
            z = ts.traces[k - 1]
            lines.append(f"{rep},{k},{z.real:.17g},{z.imag:.17g}")
    return "\n".join(lines) + "\n"


def fourier_coefficients(phi_fn, grid: int = 8192, tol: float = 1e-12):
    """Nonnegative-frequency Fourier coefficients of a real periodic function.

    Returns (phi_hat, tail): phi_hat[k] for k = 0..K where K is the last
    frequency with |coefficient| above tol, and the summed magnitude of the
    discarded grid coefficients.  Raises if the coefficients have not decayed
    below tol well inside the grid band.
    """
    theta = 2.0 * math.pi * np.arange(grid) / grid
    vals = np.asarray(phi_fn(theta))
    if np.iscomplexobj(vals) and np.abs(vals.imag).max() > 1e-12:
        raise ValueError("function must be real-valued on the grid")
    c = fft(vals.astype(complex), "inverse")
    half = grid // 2
    mags = np.abs(c[:half])
    above = np.nonzero(mags > tol)[0]
    K = int(above.max()) if above.size else 0
    if K >= half - 16:
        raise RuntimeError(
            f"coefficients not resolved: |c_{K}| > {tol} near the grid band edge")
    tail = float(mags[K + 1:].sum())
    return c[:K + 1].copy(), tail


@dataclass(frozen=True)
class McEstimate:
    mean: float
    se: float
    reps: int


def exp_linear_stat_mc(n: int, phi_hat, reps: int, seed: int,
                       chunk: int = _DEFAULT_CHUNK) -> McEstimate:
    """Monte Carlo estimate of the averaged exponential of sum_j phi(angle_j).

    The statistic is assembled from traces:
    sum_j phi = n phi_hat[0] + sum_{k>=1} 2 Re(phi_hat[k] Tr U^k), so no
    eigensolver is involved.  phi must be real-valued (phi_hat[0] real,
    negative frequencies implied by conjugation).
    """
    phi_hat = np.asarray(phi_hat, dtype=complex)
    kmax = phi_hat.size - 1
    stat = np.full(reps, n * phi_hat[0].real)
    if kmax >= 1:
        t = collect_traces(n, kmax, reps, seed, chunk)
        stat = stat + 2.0 * np.einsum("k,kb->b", phi_hat[1:], t).real
    vals = np.exp(stat)
    return McEstimate(mean=float(vals.mean()),
                      se=float(vals.std(ddof=1) / math.sqrt(reps)),
                      reps=reps)


def ld_tail_check(n: int, m: int, levels, reps: int, seed: int) -> list:
    """Empirical box-tail probabilities P[max_k |X_k| > L/2 scale] against the
    4m exp(-L^2/8) bound, one-sided at 5 standard errors."""
    t = collect_traces(n, m, reps, seed)
    x = np.empty((2 * m, t.shape[1]))
    for k in range(1, m + 1):
        sc = math.sqrt(2.0 / k)
        x[2 * k - 2] = sc * t[k - 1].real
        x[2 * k - 1] = sc * t[k - 1].imag
    mx = np.abs(x).max(axis=0)
    out = []
    for L in levels:
        hits = mx > L / 2.0
        p = float(hits.mean())
        se = float(hits.std(ddof=1) / math.sqrt(reps))
        bound = 4.0 * m * math.exp(-L * L / 8.0)
        out.append({"L": float(L), "empirical": p, "se": se, "bound": bound,
                    "passed": p - 5.0 * se <= bound})
    return out
