"""Kernel identities, tail-regime certification, level sets, and the radial
distance quadrature, checked against Bessel values, incomplete-gamma
oracles, and arcsin closed forms."""

import math

import numpy as np
import pytest
from scipy.special import gammaincc, jv

from cuetraces import analysis
from cuetraces import montecarlo as mc
from cuetraces.numerics import ApplicabilityError
from cuetraces.trigpoly import (
    TrigPoly,
    XiVector,
    hilbert_transform,
    poly_from_xi,
)


def _rand_xi(rng, m, max_norm=2.0, min_norm=0.2):
    v = rng.normal(size=2 * m)
    v *= rng.uniform(min_norm, max_norm) / np.linalg.norm(v)
    return XiVector.from_array(v)


def _rand_config(rng, n):
    return mc.Configuration(n, tuple(np.sort(rng.uniform(0, 2 * np.pi, n))))


# ---------------------------------------------------------------------------
# kernel and quadratic form


def test_h_kernel_formula_and_diagonal_limit():
    rng = np.random.default_rng(40)
    pair = hilbert_transform(poly_from_xi(_rand_xi(rng, 3)))
    from cuetraces.trigpoly import eval_analytic

    th, x = 1.2, 2.9
    hv = eval_analytic(pair.h, th).real - eval_analytic(pair.h, x).real
    expect = (hv / (2.0 * math.sin((th - x) / 2.0))) ** 2
    assert analysis.h_kernel(pair, th, x) == pytest.approx(expect, rel=1e-13)
    # symmetric in its arguments
    assert analysis.h_kernel(pair, x, th) == pytest.approx(expect, rel=1e-13)
    # diagonal continuation: derivative squared
    dh = eval_analytic(pair.h, th, 1).real
    assert analysis.h_kernel(pair, th, th) == pytest.approx(dh * dh, rel=1e-12)
    # continuity across the switch
    eps = 1e-9
    assert analysis.h_kernel(pair, th, th + eps) == pytest.approx(dh * dh, rel=1e-5)


def test_qf_identity_random_configurations():
    rng = np.random.default_rng(41)
    for _ in range(15):
        n = int(rng.integers(3, 25))
        m = int(rng.integers(1, 6))
        cfg = _rand_config(rng, n)
        xi = _rand_xi(rng, m)
        scale = max(1.0, n * n * xi.norm_sq())
        assert analysis.qf_identity_residual(cfg, xi) < 1e-12 * scale


def test_qf_single_frequency_closed_form():
    # m = 1: double kernel sum equals Re(zeta^2 T1^2) + |zeta|^2 n^2
    rng = np.random.default_rng(42)
    n = 6
    cfg = _rand_config(rng, n)
    xi = XiVector.from_array([0.7, -0.4])
    zeta = 0.7 + 0.4j  # embedding conjugates the second coordinate
    t1 = complex(np.exp(1j * cfg.array()).sum())
    expect = (zeta ** 2 * t1 ** 2).real + abs(zeta) ** 2 * n * n
    pair = hilbert_transform(poly_from_xi(xi))
    th = cfg.array()
    direct = float(analysis.h_kernel(pair, th[:, None], th[None, :]).sum())
    assert direct == pytest.approx(expect, rel=1e-12)


def test_qf_data_entries_and_border():
    rng = np.random.default_rng(43)
    xi = _rand_xi(rng, 4)
    data = analysis.QuadraticFormData.from_xi(xi)
    assert data.b_entry(0, 0) == pytest.approx(2.0 * xi.norm_sq(), rel=1e-13)
    rep = analysis.b_border_checks(xi)
    assert rep["b00_error"] < 1e-13
    assert rep["bp0_closed_error"] < 1e-13
    assert rep["border_margin"] >= -1e-12
    assert rep["rowsum_margin"] >= -1e-12


def test_border_rowsum_tight_at_single_frequency():
    # m = 1 attains the row-sum bound with equality
    xi = XiVector.from_array([1.1, 0.6])
    rep = analysis.b_border_checks(xi)
    assert rep["rowsum_A"] == pytest.approx(rep["rowsum_bound"], rel=1e-13)
    assert abs(rep["rowsum_margin"]) < 1e-12


# ---------------------------------------------------------------------------
# Gaussian tail and level sets


def test_gaussian_tail_exact_matches_incomplete_gamma():
    for m in (1, 2, 4):
        rep = analysis.gaussian_tail_margins(m)
        for entry in rep["grid"]:
            lam2 = entry["lambda"] ** 2
            oracle = math.pi ** m * float(gammaincc(m, lam2))
            assert entry["exact"] == pytest.approx(oracle, rel=1e-12)
            assert entry["margin"] >= 0.0


def test_gaussian_tail_rejects_radius_inside_bulk():
    with pytest.raises(ValueError):
        analysis.gaussian_tail_margins(3, [1.0])


def test_levelset_cosine_closed_form():
    cosp = TrigPoly(m=1, zeta=(1.0 / math.sqrt(2.0),))
    lam = 0.1
    rep = analysis.levelset_check(cosp, [lam])
    entry = rep["grid"][0]
    # measure of {|cos| <= lam} is (2/pi) asin(lam)
    assert entry["measure"] == pytest.approx(2.0 / math.pi * math.asin(lam), abs=1e-4)
    l2 = 1.0 / math.sqrt(2.0)
    assert entry["bound"] == pytest.approx(
        2.0 * math.e * math.sqrt(lam / (math.sqrt(2.0) * l2)), rel=1e-12)
    assert entry["margin"] >= 0.0


def test_levelset_random_polynomials():
    rng = np.random.default_rng(44)
    for _ in range(10):
        m = int(rng.integers(1, 6))
        f = poly_from_xi(_rand_xi(rng, m, 3.0))
        l2 = math.sqrt(sum(abs(z) ** 2 / k for k, z in enumerate(f.zeta, 1)))
        lams = math.sqrt(2.0) * l2 * np.logspace(-3.0, 0.0, 4)
        rep = analysis.levelset_check(f, lams)
        assert rep["min_margin"] >= -1e-12


# ---------------------------------------------------------------------------
# stand-alone lemmas


def test_misc_lemma_suite_passes():
    rep = analysis.misc_lemma_suite(seed=3, reps=8000)
    assert rep["passed"]
    assert rep["unibound"]["min_margin"] >= 0.0
    assert rep["vandermonde"]["max_rel_error"] < 1e-9
    assert rep["vandermonde"]["perturbed_all_smaller"]
    assert rep["term5"]["mean"] < rep["term5"]["bound"]


# ---------------------------------------------------------------------------
# tail-regime suite


def test_tail_suite_structure_and_margins():
    rep = analysis.tail_inequality_suite(48, 3, reps=4000, seed=1)
    assert rep["min_margin"] >= -1e-12
    assert rep["mc_passed"]
    assert set(rep["regimes"]) == {"ga", "bd2", "bd1", "had", "tb1"}
    for blk in rep["regimes"].values():
        for e in blk["entries"]:
            assert {"norm", "ln_value", "ln_bound", "log_margin", "vacuous",
                    "measurable", "admissible"} <= set(e)


def test_tail_suite_size_cap():
    with pytest.raises(ApplicabilityError, match="n <= 64"):
        analysis.tail_inequality_suite(65, 3)


def test_tail_suite_flags_inadmissible_regime():
    # N = 8 < 4m = 12: the polynomial-decay bound hypothesis fails but the
    # entries are still evaluated and flagged
    rep = analysis.tail_inequality_suite(24, 3, reps=2000, seed=2)
    inadm = [e for blk in rep["regimes"].values()
             for e in blk["entries"] if not e["admissible"]]
    assert inadm


# ---------------------------------------------------------------------------
# radial quadrature for the squared distance (single frequency)


def test_charfn_m1_batch_bessel_families():
    rs = np.array([0.4, 1.1, 2.7, 6.0])
    x = math.sqrt(2.0) * rs
    f1 = analysis._charfn_m1_batch(rs, 1)
    np.testing.assert_allclose(f1.real, jv(0, x), atol=1e-12)
    f2 = analysis._charfn_m1_batch(rs, 2)
    np.testing.assert_allclose(f2.real, jv(0, x) ** 2 + jv(1, x) ** 2, atol=1e-12)
    np.testing.assert_allclose(f2.imag, 0.0, atol=1e-12)


def test_delta2_refuses_divergent_sizes():
    for n in (1, 2):
        with pytest.raises(RuntimeError, match="decay exponent"):
            analysis.delta2_numeric_m1(n)
    with pytest.raises(ApplicabilityError):
        analysis.delta2_numeric_m1(65)


def test_delta2_pin_and_decrease():
    q3 = analysis.delta2_numeric_m1(3)
    assert q3.value == pytest.approx(0.2095909, abs=2e-6)
    assert q3.panel_error < 1e-8
    q5 = analysis.delta2_numeric_m1(5)
    q6 = analysis.delta2_numeric_m1(6)
    assert q3.value > q5.value > q6.value
    assert q6.value == pytest.approx(9.554972e-4, rel=1e-5)
    assert q5.error_estimate < 1e-8 and q6.error_estimate < 1e-8


def test_quad_result_rejects_negative_error():
    with pytest.raises(ValueError):
        analysis.QuadResult(value=1.0, error_estimate=-1e-3,
                            truncation_radius=10.0)


def test_devinatz_kernel_integral():
    rng = np.random.default_rng(45)
    for m in (1, 2, 3):
        xi = _rand_xi(rng, m)
        assert analysis.devinatz_check(xi) < 1e-10
    with pytest.raises(ApplicabilityError):
        analysis.devinatz_check(_rand_xi(rng, 9))
