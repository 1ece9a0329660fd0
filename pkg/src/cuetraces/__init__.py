"""Explicit distance bounds between the trace vector of a Haar-random
unitary matrix and a standard Gaussian vector, with numerical certification.

The package evaluates the full bound chain in log-domain arithmetic
(`bounds`), computes the exact finite-size characteristic function two
independent ways (`spectral` on top of `numerics` and `trigpoly`), samples
traces and verifies the distributional identities by Monte Carlo
(`montecarlo`), and checks the supporting analytic inequalities with signed
margins (`analysis`).  The `cuetraces` console script exposes all of it.
"""

from .numerics import ApplicabilityError, ComplexMatrix, LogReal
from .trigpoly import HilbertPair, NormReport, TrigPoly, XiVector, \
    a_functional, eval_analytic, grid_sup, hilbert_transform, norms, \
    poly_from_xi
from .spectral import CharFnResult, J1Diagnostics, LaplacePair, SymbolCoeffs, \
    bo_det, char_fn, fcoeff_bound_check, j1_diagnostics, j1_envelope_check, \
    laplace_pair, laplace_transform, symbol_coeffs, toeplitz_det
from .bounds import BoundReport, ConstantsLedger, ThetaBreakdown, \
    TvAlphaResult, TvUniformResult, certify_inequalities, constants, \
    delta_chain, eps_alpha, eps_uniform, gamma_slack, gamma_table_certify, \
    n_alpha, table_cM, theta, theta_crossing, tv_alpha, tv_theorem, \
    tv_uniform, w2_bound
from .montecarlo import Configuration, DsReport, McEstimate, MomentSpec, \
    SteinReport, TraceSample, collect_traces, ds_verify, exp_linear_stat_mc, \
    fourier_coefficients, gamma_identities, gaussian_moment, \
    generator_residual, haar_batch, ld_tail_check, sample_haar, \
    sample_traces, stein_terms, trace_vector, traces_to_csv
from .analysis import QuadResult, QuadraticFormData, b_border_checks, \
    delta2_numeric_m1, devinatz_check, gaussian_tail_margins, h_kernel, \
    levelset_check, misc_lemma_suite, qf_identity_residual, \
    tail_inequality_suite

__version__ = "0.1.0"

__all__ = [
    "ApplicabilityError", "ComplexMatrix", "LogReal",
    "HilbertPair", "NormReport", "TrigPoly", "XiVector", "a_functional",
    "eval_analytic", "grid_sup", "hilbert_transform", "norms", "poly_from_xi",
    "CharFnResult", "J1Diagnostics", "LaplacePair", "SymbolCoeffs", "bo_det",
    "char_fn", "fcoeff_bound_check", "j1_diagnostics", "j1_envelope_check",
    "laplace_pair", "laplace_transform", "symbol_coeffs", "toeplitz_det",
    "BoundReport", "ConstantsLedger", "ThetaBreakdown", "TvAlphaResult",
    "TvUniformResult", "certify_inequalities", "constants", "delta_chain",
    "eps_alpha", "eps_uniform", "gamma_slack", "gamma_table_certify",
    "n_alpha", "table_cM", "theta", "theta_crossing", "tv_alpha",
    "tv_theorem", "tv_uniform", "w2_bound",
    "Configuration", "DsReport", "McEstimate", "MomentSpec", "SteinReport",
    "TraceSample", "collect_traces", "ds_verify", "exp_linear_stat_mc",
    "fourier_coefficients", "gamma_identities", "gaussian_moment",
    "generator_residual", "haar_batch", "ld_tail_check", "sample_haar",
    "sample_traces", "stein_terms", "trace_vector", "traces_to_csv",
    "QuadResult", "QuadraticFormData", "b_border_checks", "delta2_numeric_m1",
    "devinatz_check", "gaussian_tail_margins", "h_kernel", "levelset_check",
    "misc_lemma_suite", "qf_identity_residual", "tail_inequality_suite",
]
