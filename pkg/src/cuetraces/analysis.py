"""Verification drivers for the analytic machinery behind the bound chain.

This module checks, numerically and with explicit signed margins: the
difference-quotient kernel built from a conjugate pair and its closed
quadratic-form decomposition in power traces; the border and matrix-norm
estimates for that decomposition; the per-regime envelopes on the
characteristic function together with the Gaussian-tail, box-tail, and
tilted-average comparisons; the level-set measure estimate; a handful of
stand-alone inequalities (hyperbolic bound, n-gon product maximum, averaged
exponential bound); the direct radial quadrature of the squared L2 distance
for one trace; and the double-integral normalization of the kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import ApplicabilityError, LogReal, ln_gamma
from .trigpoly import HilbertPair, TrigPoly, XiVector, hilbert_transform, norms, poly_from_xi
from .spectral import char_fn, j1_diagnostics
from . import bounds as _bounds
from . import montecarlo as _mc

__all__ = [
    "QuadraticFormData",
    "QuadResult",
    "h_kernel",
    "qf_identity_residual",
    "b_border_checks",
    "gaussian_tail_margins",
    "tail_inequality_suite",
    "levelset_check",
    "misc_lemma_suite",
    "delta2_numeric_m1",
    "devinatz_check",
]

_DIAG_SWITCH = 1e-7


def _poly_eval(p: TrigPoly, z, order: int = 0):
    """Vectorized band-limited evaluation (analytic in z, derivatives 0..3)."""
    z = np.asarray(z, dtype=complex)
    tot = np.zeros(z.shape, dtype=complex)
    for k in range(1, p.m + 1):
        c = p.fourier(k)
        tot += c * (1j * k) ** order * np.exp(1j * k * z)
        tot += np.conj(c) * (-1j * k) ** order * np.exp(-1j * k * z)
    return tot


def h_kernel(pair: HilbertPair, theta, x):
    """Squared difference quotient of the conjugate function on the circle,
    ((h(theta) - h(x)) / (2 sin((theta-x)/2)))^2, continued across the
    diagonal by its limit h'(theta)^2."""
    th = np.asarray(theta, dtype=float)
    xx = np.asarray(x, dtype=float)
    th, xx = np.broadcast_arrays(th, xx)
    den = 2.0 * np.sin((th - xx) / 2.0)
    near = np.abs(den) < _DIAG_SWITCH
    num = (_poly_eval(pair.h, th) - _poly_eval(pair.h, xx)).real
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (num / den) ** 2
    if near.any():
        mid = (th + xx) / 2.0
        dh = _poly_eval(pair.h, np.where(near, mid, 0.0), order=1).real
        out = np.where(near, dh ** 2, out)
    if out.ndim == 0:
        return float(out)
    return out


def _zeta_signed(zeta: np.ndarray, j: int) -> complex:
    m = zeta.size
    if 1 <= j <= m:
        return complex(zeta[j - 1])
    if -m <= j <= -1:
        return complex(np.conj(zeta[-j - 1]))
    return 0.0j


@dataclass(frozen=True)
class QuadraticFormData:
    """Coefficient matrices of the closed trace expansion of the summed kernel.

    A covers indices 1..2m-1 (A[p-1, q-1]); B covers -(m-1)..m-1 including
    the zero-index border row/column (B[p+m-1, q+m-1]).
    """

    m: int
    A: np.ndarray
    B: np.ndarray

    @staticmethod
    def from_xi(xi: XiVector) -> "QuadraticFormData":
        m = xi.m
        zeta = poly_from_xi(xi).zeta_array()
        A = np.zeros((2 * m - 1, 2 * m - 1), dtype=complex)
        for p in range(1, 2 * m):
            for q in range(1, 2 * m):
                s = 0.0j
                for ell in range(1, m + 1):
                    r = p + q - ell
                    if not 1 <= r <= m:
                        continue
                    w = zeta[ell - 1] * zeta[r - 1] / math.sqrt(ell * r)
                    for k in range(1, ell + 1):
                        c = int(1 <= p - k + 1 <= r) + int(1 <= q - k + 1 <= r)
                        if c:
                            s += c * w
                A[p - 1, q - 1] = s
        B = np.zeros((2 * m - 1, 2 * m - 1), dtype=complex)
        for p in range(-(m - 1), m):
            for q in range(-(m - 1), m):
                s = 0.0j
                for ell in range(1, m + 1):
                    r = ell - p - q
                    if not 1 <= r <= m:
                        continue
                    w = zeta[ell - 1] * _zeta_signed(zeta, p + q - ell) / math.sqrt(ell * r)
                    for k in range(1, ell + 1):
                        c = int(1 <= k - p <= r) + int(1 <= k - q <= r)
                        if c:
                            s += c * w
                B[p + m - 1, q + m - 1] = s
        return QuadraticFormData(m=m, A=A, B=B)

    def a_entry(self, p: int, q: int) -> complex:
        if 1 <= p <= 2 * self.m - 1 and 1 <= q <= 2 * self.m - 1:
            return complex(self.A[p - 1, q - 1])
        return 0.0j

    def b_entry(self, p: int, q: int) -> complex:
        if abs(p) <= self.m - 1 and abs(q) <= self.m - 1:
            return complex(self.B[p + self.m - 1, q + self.m - 1])
        return 0.0j

    def evaluate(self, traces: dict) -> float:
        """(1/2) Re of the two trace quadratic forms; traces[p] = sum e^{ip theta},
        negative p by conjugation, traces[0] = n."""
        m = self.m
        qa = sum(self.A[p - 1, q - 1] * traces[p] * traces[q]
                 for p in range(1, 2 * m) for q in range(1, 2 * m))
        qb = sum(self.B[p + m - 1, q + m - 1] * traces[p] * traces[q]
                 for p in range(-(m - 1), m) for q in range(-(m - 1), m))
        return 0.5 * (qa + qb).real


def _traces_of_config(theta: np.ndarray, kmax: int, n: int) -> dict:
    t = {0: complex(n)}
    for k in range(1, kmax + 1):
        t[k] = complex(np.exp(1j * k * theta).sum())
        t[-k] = np.conj(t[k])
    return t


def qf_identity_residual(config: _mc.Configuration, xi: XiVector) -> float:
    """Absolute difference between the summed kernel over a configuration and
    its closed trace quadratic form (a deterministic identity)."""
    pair = hilbert_transform(poly_from_xi(xi))
    theta = config.array()
    direct = float(h_kernel(pair, theta[:, None], theta[None, :]).sum())
    data = QuadraticFormData.from_xi(xi)
    closed = data.evaluate(_traces_of_config(theta, 2 * xi.m - 1, config.n))
    return abs(direct - closed)


def b_border_checks(xi: XiVector) -> dict:
    """Exactness of the zero-index entry and signed margins of the border-sum
    and row-sum-norm inequalities for the trace quadratic form."""
    m = xi.m
    ns2 = xi.norm_sq()
    zeta = poly_from_xi(xi).zeta_array()
    data = QuadraticFormData.from_xi(xi)
    b00_error = abs(data.b_entry(0, 0) - 2.0 * ns2)
    bp0_closed_error = 0.0
    border = 0.0
    for p in range(1, m):
        closed = 2.0 * sum(
            math.sqrt((ell - p) / ell) * zeta[ell - 1] * np.conj(zeta[ell - p - 1])
            for ell in range(p + 1, m + 1))
        bp0_closed_error = max(bp0_closed_error, abs(data.b_entry(p, 0) - closed))
        border += p * abs(data.b_entry(p, 0) + np.conj(data.b_entry(-p, 0))) ** 2
    border_bound = (4.0 / 3.0) * m ** 3 * ns2 ** 2
    rows_a = np.abs(data.A).sum(axis=1)
    rowsum_a = float(rows_a.max())
    if m > 1:
        nz = [j for j in range(-(m - 1), m) if j != 0]
        rowsum_b = max(
            sum(abs(data.b_entry(p, q)) for q in nz) for p in nz)
    else:
        rowsum_b = 0.0
    rowsum_bound = math.sqrt(2.0 * m * (m + 1) * (1.0 + math.log(m))) * ns2
    return {
        "m": m,
        "b00_error": float(b00_error),
        "bp0_closed_error": float(bp0_closed_error),
        "border_value": float(border),
        "border_bound": float(border_bound),
        "border_margin": float(border_bound - border),
        "rowsum_A": rowsum_a,
        "rowsum_B": float(rowsum_b),
        "rowsum_bound": float(rowsum_bound),
        "rowsum_margin": float(min(rowsum_bound - rowsum_a, rowsum_bound - rowsum_b)),
    }


def gaussian_tail_margins(m: int, lambda_grid=None) -> dict:
    """Exact Gaussian mass outside a radius-Lambda ball in 2m dimensions next
    to the printed closed-form comparison value; margin = exact - printed,
    on a grid with Lambda^2 >= 2m."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if lambda_grid is None:
        lambda_grid = [math.sqrt(2.0 * m * t) for t in (1.0, 1.2, 1.5, 2.0, 3.0, 5.0)]
    entries = []
    min_margin = math.inf
    for lam in lambda_grid:
        l2 = lam * lam
        if l2 <= m:
            raise ValueError(f"Lambda^2 = {l2:.3g} must exceed m = {m}")
        exact = math.pi ** m * math.exp(-l2) * sum(l2 ** k / math.factorial(k)
                                                   for k in range(m))
        printed = (math.pi ** m / math.factorial(m)) * math.exp(-l2) / (l2 - m)
        margin = exact - printed
        min_margin = min(min_margin, margin)
        entries.append({"lambda": float(lam), "exact": exact, "printed": printed,
                        "margin": margin})
    return {"m": m, "grid": entries, "min_margin": float(min_margin)}


def _abs_f(xi_arr: np.ndarray, n: int) -> complex:
    return char_fn(XiVector.from_array(xi_arr), n).value


def _ln_or_floor(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


# squared quantities measured below this log level are double-precision
# round-off, not signal; a bound living below the same level can be neither
# certified nor refuted by the measurement
_LN_MEASUREMENT_FLOOR = 2.0 * math.log(1e-12)


def _regime_entry(norm: float, value: float, ln_bound: float,
                  vacuous_at: float = 1.0, admissible: bool = True) -> dict:
    ln_value = _ln_or_floor(value)
    if ln_value == -math.inf:
        margin = 0.0 if ln_bound == -math.inf else math.inf
    else:
        margin = ln_bound - ln_value
    measurable = not (ln_bound < _LN_MEASUREMENT_FLOOR
                      and ln_value < _LN_MEASUREMENT_FLOOR)
    return {"norm": float(norm), "ln_value": ln_value, "ln_bound": ln_bound,
            "log_margin": margin, "vacuous": bool(ln_bound > math.log(vacuous_at)),
            "measurable": measurable, "admissible": bool(admissible)}


def _collect(entries) -> dict:
    margins = [e["log_margin"] for e in entries
               if not e["vacuous"] and e["measurable"]]
    return {
        "entries": entries,
        "min_margin": float(min(margins)) if margins else math.inf,
        "vacuous_count": sum(e["vacuous"] for e in entries),
        "unmeasurable_count": sum(not e["measurable"] for e in entries),
    }


def _est2_phi(g: TrigPoly, h: TrigPoly, t: float):
    def phi(theta):
        z = theta + 1j * t * _poly_eval(h, theta).real
        return -2.0 * _poly_eval(g, z).imag
    return phi


def tail_inequality_suite(n: int, m: int, xi_samples=None,
                          reps: int = 10000, seed: int = 0) -> dict:
    """Signed log-margins of the characteristic-function envelopes in each
    norm regime, plus the Gaussian-tail comparison, the two tilted-average
    checks (one-sided Monte Carlo at small size), and box-tail frequencies.

    Bounds above 1 (above 4 for the squared-difference envelope) are flagged
    vacuous and tracked separately from the minimum margin.
    """
    if n > 64:
        raise ApplicabilityError("n <= 64 (exact characteristic function)")
    cl = _bounds.constants(m)
    br = _bounds.theta(n, m)
    N = n / m
    lam1, lam2 = br.lambda1.to_real(), br.lambda2.to_real()
    if br.lambda3 is not None:
        e3 = min(br.lambda3.to_real(), 1e3)
    else:
        e3 = min(4.0 * lam2, 1e3)
    e3 = max(e3, lam2)
    if xi_samples is None:
        rng = np.random.default_rng(7)
        xi_samples = [XiVector.from_array(v / np.linalg.norm(v))
                      for v in rng.standard_normal((4, 2 * m))]
    dirs = []
    for s in xi_samples:
        v = np.asarray(s.xi if isinstance(s, XiVector) else s, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise ValueError("zero direction in xi_samples")
        dirs.append(v / nv)

    ga, bd2, bd1, had, tb1 = [], [], [], [], []
    ln2766 = math.log(cl.c8) - math.log(4.0) - 2.0 * math.log(16.0 / 15.0)
    ga_admissible = N >= 4.0 * m
    had_admissible = N >= 4.0 * m
    ln_bd2 = cl.c9 - cl.c2 * N ** 2 / (math.sqrt(m + 1.0) * cl.L ** 0.75)
    ln_bd1 = cl.c9 - cl.c1 * N ** 2 / cl.L
    ln_tb1_c = n * (math.log(4.0 * math.pi * math.e * (1.0 + 1.0 / math.sqrt(3.0)))
                    + math.log(n))
    ln_had_c = (math.log(cl.ups3) + 0.5 * N * math.log(3.0)
                + 2.0 * n * math.log(cl.c15) + 0.25 * N * math.log(N))
    for u in dirs:
        for frac in (0.25, 0.6, 0.95):
            r = frac * lam1
            if r <= 0.0:
                continue
            x = r * u
            F = _abs_f(x, n)
            diff_sq = abs(F - math.exp(-r * r / 2.0)) ** 2
            jd = j1_diagnostics(XiVector.from_array(x), n)
            ln_env = 2.0 * ln2766 + 2.0 * jd.j1_norm_bound.ln_mag - r * r
            if jd.j1_norm_bound.is_zero():
                ln_env = -math.inf
            ga.append(_regime_entry(r, diff_sq, ln_env, vacuous_at=4.0,
                                    admissible=ga_admissible))
        for frac in (0.05, 0.5, 0.95):
            r = lam1 + frac * (lam2 - lam1)
            bd2.append(_regime_entry(r, abs(_abs_f(r * u, n)), ln_bd2))
        for frac in (0.0, 0.5, 1.0):
            r = lam2 + frac * (e3 - lam2)
            bd1.append(_regime_entry(r, abs(_abs_f(r * u, n)), ln_bd1))
        for r in sorted({e3, min(4.0 * e3, 1e3), 1e3}):
            fsq = abs(_abs_f(r * u, n)) ** 2
            had.append(_regime_entry(
                r, fsq, ln_had_c - 0.5 * N * math.log(r), admissible=had_admissible))
            tb1.append(_regime_entry(
                r, fsq, ln_tb1_c - (n / (m + 1.0)) * math.log(r)))

    gtail = gaussian_tail_margins(m)

    # one-sided tilted-average comparisons at small matrix size
    n_mc = min(n, 16)
    N_mc = n_mc / m
    xi1 = XiVector.from_array(dirs[0])
    g = poly_from_xi(xi1)
    pair = hilbert_transform(g)
    nu = cl.c0 * N_mc / (math.sqrt(m + 1.0) * cl.L ** 0.25)  # at norm 1
    phi = _est2_phi(pair.g, pair.h, nu / n_mc)
    phi_hat, _tail = _mc.fourier_coefficients(phi, grid=8192, tol=1e-13)
    est = _mc.exp_linear_stat_mc(n_mc, phi_hat, reps, seed)
    rate = 1.0 - cl.c10 - 4.0 * cl.c11 * cl.c0 * cl.L ** 0.75 / (N_mc * math.sqrt(m + 1.0))
    est2_bound = math.exp(-2.0 * nu * rate)
    est2_rec = {"n": n_mc, "nu": nu, "mean": est.mean, "se": est.se,
                "bound": est2_bound,
                "passed": est.mean - 5.0 * est.se <= est2_bound}

    data = QuadraticFormData.from_xi(xi1)
    t = _mc.collect_traces(n_mc, 2 * m - 1, reps, seed + 1)
    tr = {0: np.full(reps, complex(n_mc))}
    for k in range(1, 2 * m):
        tr[k] = t[k - 1]
        tr[-k] = np.conj(t[k - 1])
    qa = np.zeros(reps, dtype=complex)
    for p in range(1, 2 * m):
        for q in range(1, 2 * m):
            a = data.A[p - 1, q - 1]
            if a != 0.0:
                qa += a * tr[p] * tr[q]
    for p in range(-(m - 1), m):
        for q in range(-(m - 1), m):
            b = data.B[p + m - 1, q + m - 1]
            if b != 0.0:
                qa += b * tr[p] * tr[q]
    sum_h = 0.5 * qa.real
    vals = np.exp((nu / n_mc) ** 2 * sum_h)
    qf_bound = math.exp(2.0 * cl.c9 + cl.c0 ** 2 * N_mc ** 2 * (1.0 + cl.eps0)
                        / ((m + 1.0) * math.sqrt(cl.L)))
    qf_mean = float(vals.mean())
    qf_se = float(vals.std(ddof=1) / math.sqrt(reps))
    qf_rec = {"n": n_mc, "nu": nu, "mean": qf_mean, "se": qf_se, "bound": qf_bound,
              "passed": qf_mean - 5.0 * qf_se <= qf_bound}

    ld = _mc.ld_tail_check(16, 3, (4.0, 6.0), reps, seed + 2)

    regimes = {"ga": _collect(ga), "bd2": _collect(bd2), "bd1": _collect(bd1),
               "had": _collect(had), "tb1": _collect(tb1)}
    mins = [r["min_margin"] for r in regimes.values()] + [gtail["min_margin"]]
    return {
        "n": n, "m": m, "N": N,
        "lambda1": lam1, "lambda2": lam2,
        "lambda3": br.lambda3.to_real() if br.lambda3 is not None else None,
        "regimes": regimes,
        "gaussian_tail": gtail,
        "est2_mc": est2_rec,
        "qf_mc": qf_rec,
        "ld_tails": ld,
        "min_margin": float(min(mins)),
        "vacuous_count": int(sum(r["vacuous_count"] for r in regimes.values())),
        "unmeasurable_count": int(sum(r["unmeasurable_count"]
                                      for r in regimes.values())),
        "mc_passed": bool(est2_rec["passed"] and qf_rec["passed"]
                          and all(e["passed"] for e in ld)),
    }


def levelset_check(f: TrigPoly, lambda_grid) -> dict:
    """Margins of the small-level-set measure estimate: normalized measure of
    {|f| <= lambda} on a 2^18 grid with Richardson refinement, against
    2e (lambda / (sqrt(2) ||f||_2))^(1/(2m))."""
    if all(z == 0 for z in f.zeta):
        raise ValueError("zero polynomial")
    m = f.m
    l2 = math.sqrt(norms(f).l2_sq_of_derivative(0))
    coarse_g, fine_g = 2 ** 17, 2 ** 18
    vals = {}
    for g in (coarse_g, fine_g):
        vals[g] = np.abs(f.values_on_grid(g))
    entries = []
    min_margin = math.inf
    for lam in lambda_grid:
        lam = float(lam)
        if lam <= 0.0:
            raise ValueError(f"lambda must be positive, got {lam}")
        mc = float((vals[coarse_g] <= lam).mean())
        mf = float((vals[fine_g] <= lam).mean())
        measure = 2.0 * mf - mc
        bound = 2.0 * math.e * (lam / (math.sqrt(2.0) * l2)) ** (1.0 / (2.0 * m))
        margin = bound - measure
        min_margin = min(min_margin, margin)
        entries.append({"lambda": lam, "measure": measure, "bound": bound,
                        "margin": margin, "vacuous": bound > 1.0})
    return {"m": m, "l2_norm": l2, "grid": entries,
            "min_margin": float(min_margin)}


def _ngon_log_product(n: int, theta: np.ndarray) -> float:
    d = theta[:, None] - theta[None, :]
    iu = np.triu_indices(n, k=1)
    return float(2.0 * np.log(np.abs(2.0 * np.sin(d[iu] / 2.0))).sum())


def misc_lemma_suite(seed: int = 0, reps: int = 20000) -> dict:
    """Stand-alone inequality checks: the hyperbolic comparison on a grid,
    the n-gon maximum of the pairwise-distance product, and a Monte Carlo
    spot check of the averaged-exponential bound."""
    # (x/y)^2 - log(1 + sinh(x)^2/y^2) >= 0 on y in (0,1], x in [0,20]
    ys = np.logspace(-6.0, 0.0, 61)
    xs = np.linspace(0.0, 20.0, 201)
    min_margin = math.inf
    argmin = (None, None)
    for y in ys:
        for x in xs:
            if x == 0.0:
                margin = 0.0
            else:
                ln_s = 2.0 * (x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)) \
                    - 2.0 * math.log(y)
                margin = (x / y) ** 2 - np.logaddexp(0.0, ln_s)
            if margin < min_margin:
                min_margin, argmin = margin, (float(x), float(y))
    unibound = {"min_margin": float(min_margin), "argmin_x": argmin[0],
                "argmin_y": argmin[1]}

    # regular n-gon maximizes the pairwise product, value n^n
    rng = np.random.default_rng(seed)
    max_rel = 0.0
    all_below = True
    min_drop = math.inf
    for n in range(2, 31):
        theta = 2.0 * math.pi * np.arange(n) / n
        ln_peak = _ngon_log_product(n, theta)
        max_rel = max(max_rel, abs(ln_peak - n * math.log(n)) / (n * math.log(n)))
        for _ in range(200 // 29 + 1):
            pert = theta + rng.normal(scale=0.1 / n, size=n)
            drop = ln_peak - _ngon_log_product(n, pert)
            all_below &= drop > 0.0
            min_drop = min(min_drop, drop)
    vandermonde = {"max_rel_error": float(max_rel), "n_max": 30,
                   "perturbed_all_smaller": bool(all_below),
                   "min_log_drop": float(min_drop)}

    # averaged exponential of a negative statistic vs (e^n/sqrt(2 pi n)) mean^n
    n5 = 8
    phi_hat = np.array([-1.0 + 0.0j, 0.5 + 0.0j])  # phi = -(1 - cos theta)
    est = _mc.exp_linear_stat_mc(n5, phi_hat, reps, seed)
    grid = 2.0 * math.pi * np.arange(4096) / 4096
    mean_val = float(np.exp(-(1.0 - np.cos(grid))).mean())
    rhs = math.exp(n5) / math.sqrt(2.0 * math.pi * n5) * mean_val ** n5
    term5 = {"n": n5, "mean": est.mean, "se": est.se, "bound": rhs,
             "passed": est.mean - 5.0 * est.se <= rhs}

    return {"unibound": unibound, "vandermonde": vandermonde, "term5": term5,
            "passed": bool(min_margin >= -1e-12 and all_below
                           and max_rel < 1e-9 and term5["passed"])}


@dataclass(frozen=True)
class QuadResult:
    """Radial quadrature output: value with a nonnegative error estimate,
    split into panel-refinement and extrapolated-tail parts."""

    value: float
    error_estimate: float
    truncation_radius: float
    panel_error: float = 0.0
    tail_error: float = 0.0

    def __post_init__(self) -> None:
        if self.error_estimate < 0.0:
            raise ValueError("error_estimate must be >= 0")


_GL_ORDER = 16
_R_CAP = 1e3
_TAIL_TARGET = 1e-16


def _charfn_m1_batch(rs: np.ndarray, n: int, grid: int = 8192) -> np.ndarray:
    """|F| for one trace at the given radial points: Toeplitz determinants of
    the unimodular symbol exp(i sqrt(2) r cos theta), coefficients by FFT."""
    theta = 2.0 * math.pi * np.arange(grid) / grid
    out = np.empty(rs.size, dtype=complex)
    chunk = 500
    offsets = np.arange(n)[:, None] - np.arange(n)[None, :]
    for lo in range(0, rs.size, chunk):
        sub = rs[lo:lo + chunk]
        vals = np.exp(1j * math.sqrt(2.0) * sub[:, None] * np.cos(theta)[None, :])
        c = np.fft.ifft(vals, axis=1)
        mats = c[:, offsets % grid]
        sign, ln = np.linalg.slogdet(mats)
        out[lo:lo + sub.size] = sign * np.exp(ln)
    return out


def _m1_integral(n: int, R: float, panels_core: int, panels_tail: int,
                 grid: int = 8192) -> float:
    """2 pi * integral_0^R |F(r) - exp(-r^2/2)|^2 r dr via per-panel GL."""
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    edges = [np.linspace(0.0, min(8.0, R), panels_core + 1)]
    if R > 8.0:
        edges.append(np.geomspace(8.0, R, panels_tail + 1))
    nodes, wts = [], []
    for e in edges:
        a, b = e[:-1], e[1:]
        nodes.append(((a + b)[:, None] / 2.0 + (b - a)[:, None] / 2.0 * x).ravel())
        wts.append(((b - a)[:, None] / 2.0 * w).ravel())
    rs = np.concatenate(nodes)
    ws = np.concatenate(wts)
    F = _charfn_m1_batch(rs, n, grid)
    integrand = np.abs(F - np.exp(-rs ** 2 / 2.0)) ** 2 * rs
    return float(2.0 * math.pi * (ws * integrand).sum())


def delta2_numeric_m1(n: int) -> QuadResult:
    """Direct radial quadrature of the squared L2 distance between the
    one-trace characteristic function and its Gaussian limit.

    The radius is capped at 10^3; the decay exponent of |F|^2 is fitted
    empirically and a fitted power-law tail beyond the cap goes into the
    error estimate.  Decay too slow for a finite tail raises instead.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > 64:
        raise ApplicabilityError("n <= 64 (exact characteristic function)")
    # Gaussian component of the tail: 2 pi int_R^inf e^{-r^2} r dr = pi e^{-R^2}
    r_gauss = math.sqrt(math.log(math.pi / _TAIL_TARGET))
    # empirical decay of |F|^2
    fit_r = np.geomspace(50.0, _R_CAP, 9)
    fit_f = np.abs(_charfn_m1_batch(fit_r, n)) ** 2
    fit_f = np.maximum(fit_f, 1e-280)
    slope, intercept = np.polyfit(np.log(fit_r), np.log(fit_f), 1)
    beta = -float(slope)
    # the fit window's subleading 1/r^2 corrections bias the slope by a few
    # parts in 10^3, so an exactly-critical exponent (log-divergent integral)
    # can fit fractionally above 2; the next convergent case sits near 3
    if beta <= 2.01:
        raise RuntimeError(
            f"tail bound not achievable within R <= 10^3: fitted |F|^2 decay "
            f"exponent {beta:.3f} <= 2 at n = {n}")
    amp = math.exp(float(intercept))

    def tail_of(R: float) -> float:
        return 2.0 * math.pi * amp * R ** (2.0 - beta) / (beta - 2.0)

    R = min(_R_CAP, max(r_gauss, 10.0))
    while R < _R_CAP and tail_of(R) >= _TAIL_TARGET:
        R = min(_R_CAP, R * 2.0)
    tail_err = tail_of(R) + math.pi * math.exp(-R * R)

    coarse = _m1_integral(n, R, panels_core=48, panels_tail=256)
    fine = _m1_integral(n, R, panels_core=96, panels_tail=512)
    val_sq = max(fine, 0.0)
    value = math.sqrt(val_sq)
    # propagate to the square root: d sqrt(s) = ds / (2 sqrt(s))
    panel_err_sq = abs(fine - coarse)
    denom = 2.0 * value if value > 0.0 else 1.0
    panel_error = panel_err_sq / denom
    tail_error = tail_err / denom
    return QuadResult(value=value, error_estimate=panel_error + tail_error,
                      truncation_radius=float(R), panel_error=panel_error,
                      tail_error=tail_error)


def devinatz_check(xi: XiVector) -> float:
    """Residual of the double-integral normalization: the kernel averaged over
    the torus equals the squared norm of the coefficient vector."""
    if xi.m > 8:
        raise ApplicabilityError("m <= 8 (tensor quadrature size)")
    ns2 = xi.norm_sq()
    if ns2 == 0.0:
        return 0.0
    pair = hilbert_transform(poly_from_xi(xi))
    q = 40 * xi.m + 40
    x, w = np.polynomial.legendre.leggauss(q)
    nodes = (x + 1.0) * math.pi
    wts = w * math.pi
    H = h_kernel(pair, nodes[:, None], nodes[None, :])
    val = float(wts @ H @ wts) / (2.0 * math.pi) ** 2
    return abs(val - ns2)
