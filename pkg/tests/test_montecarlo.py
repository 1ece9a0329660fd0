"""Sampling, moment formulas, and eigenvalue-side identities against
quadrature oracles and exact special-function values."""

import math

import numpy as np
import pytest
from scipy.special import iv

from cuetraces import montecarlo as mc
from cuetraces.numerics import ApplicabilityError


# ---------------------------------------------------------------------------
# oracles


def _hermite_complex_moment(a: int, b: int, order: int = 48) -> complex:
    """E[Z^a conj(Z)^b] for Z = X + iY, X, Y iid standard normal, by
    Gauss-Hermite quadrature in two dimensions."""
    nodes, weights = np.polynomial.hermite_e.hermegauss(order)
    w2 = np.outer(weights, weights) / (2.0 * math.pi)
    z = nodes[:, None] + 1j * nodes[None, :]
    vals = z ** a * np.conj(z) ** b
    return complex(np.sum(w2 * vals))


def _random_unitary_oracle(n, rng):
    """Unitary from the eigendecomposition of a random Hermitian matrix with
    uniform phases: independent of the QR construction under test."""
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = h + h.conj().T
    _, v = np.linalg.eigh(h)
    phases = np.exp(2j * np.pi * rng.uniform(size=n))
    return (v * phases) @ v.conj().T


# ---------------------------------------------------------------------------
# moment formulas


def test_gaussian_moment_matches_hermite_quadrature():
    # the closed form is for rescaled traces with E|T|^2 = 2: Z scaled by
    # sqrt(2)/sqrt(2) keeps |Z|^2 moments at a! 2^a when Var(X) = Var(Y) = 1
    for a in range(5):
        spec = mc.MomentSpec((a,), (a,))
        oracle = _hermite_complex_moment(a, a).real
        assert mc.gaussian_moment(spec) == pytest.approx(oracle, rel=1e-10)
    # unequal exponents vanish
    assert mc.gaussian_moment(mc.MomentSpec((2,), (1,))) == 0.0
    assert abs(_hermite_complex_moment(2, 1)) < 1e-12
    # factorizes over independent frequencies
    spec = mc.MomentSpec((1, 2), (1, 2))
    assert mc.gaussian_moment(spec) == pytest.approx(2.0 * (2.0 * 4.0), rel=1e-13)


def test_moment_spec_validation_and_weights():
    with pytest.raises(ValueError):
        mc.MomentSpec((1, 2), (1,))
    with pytest.raises(ValueError):
        mc.MomentSpec((-1,), (1,))
    s = mc.MomentSpec((2, 0, 1), (0, 1, 0))
    assert s.weight_a() == 2 + 3 and s.weight_b() == 2


def test_multi_indices_enumeration():
    idx = mc.multi_indices(2, 4)
    # a1 + 2 a2 <= 4: a2 = 0 -> a1 in 0..4; a2 = 1 -> a1 in 0..2; a2 = 2 -> a1 0
    assert len(idx) == 5 + 3 + 1
    assert (0, 0) in idx and (4, 0) in idx and (0, 2) in idx
    assert all(a1 + 2 * a2 <= 4 for a1, a2 in idx)
    assert len(set(idx)) == len(idx)


# ---------------------------------------------------------------------------
# sampling machinery


def test_haar_batch_unitarity():
    rng = np.random.default_rng(30)
    u = mc.haar_batch(12, 8, rng)
    assert u.shape == (8, 12, 12)
    eye = np.eye(12)
    for b in range(8):
        assert np.max(np.abs(u[b] @ u[b].conj().T - eye)) < 1e-12


def test_trace_vector_matches_matrix_powers():
    rng = np.random.default_rng(31)
    u = _random_unitary_oracle(9, rng)
    m = 4
    sample = mc.trace_vector(u, m)
    p = np.eye(9, dtype=complex)
    for k in range(1, m + 1):
        p = p @ u
        expect = math.sqrt(2.0 / k) * np.trace(p)
        assert sample.traces[k - 1] == pytest.approx(expect, abs=1e-11)
    # real-coordinate embedding interleaves re/im
    x = sample.x()
    assert x[0] == pytest.approx(sample.traces[0].real)
    assert x[1] == pytest.approx(sample.traces[0].imag)


def test_trace_vector_rejects_non_unitary():
    with pytest.raises(RuntimeError):
        mc.trace_vector(np.diag([1.0, 2.0]).astype(complex), 3)


def test_collect_traces_chunk_invariance():
    a = mc.collect_traces(6, 3, 50, seed=5, chunk=7)
    b = mc.collect_traces(6, 3, 50, seed=5, chunk=50)
    np.testing.assert_allclose(a, b, atol=0.0)
    assert a.shape == (3, 50)


def test_sample_traces_deterministic_per_replica():
    s1 = mc.sample_traces(5, 2, reps=6, seed=9)
    s2 = mc.sample_traces(5, 2, reps=6, seed=9)
    assert all(np.array_equal(x.traces, y.traces) for x, y in zip(s1, s2))
    # replica streams are independent of rep count: prefix stability
    s3 = mc.sample_traces(5, 2, reps=3, seed=9)
    assert all(np.array_equal(x.traces, y.traces) for x, y in zip(s3, s1[:3]))


def test_traces_to_csv_layout():
    s = mc.sample_traces(4, 2, reps=2, seed=1)
    text = mc.traces_to_csv(s)
    lines = text.strip().split("\n")
    assert lines[0] == "rep,k,re_Tk,im_Tk"
    assert len(lines) == 1 + 2 * 2
    first = lines[1].split(",")
    assert first[0] == "0" and first[1] == "1"
    float(first[2]), float(first[3])
    assert text.endswith("\n")


def test_configuration_validation():
    with pytest.raises(ValueError):
        mc.Configuration(3, (0.1, 0.1, 2.0))
    cfg = mc.Configuration(3, (0.5, 7.0, 2.0))  # reduced mod 2 pi
    arr = cfg.array()
    assert np.all((arr >= 0.0) & (arr < 2.0 * math.pi))


# ---------------------------------------------------------------------------
# eigenvalue-side identities


def test_generator_residual_random_configs():
    rng = np.random.default_rng(32)
    for _ in range(15):
        n = int(rng.integers(2, 40))
        k = int(rng.integers(1, 8))
        cfg = mc.Configuration(n, tuple(np.sort(rng.uniform(0, 2 * np.pi, n))))
        assert mc.generator_residual(cfg, k) < 1e-9


def test_gamma_identities_random_configs():
    rng = np.random.default_rng(33)
    for _ in range(10):
        n = int(rng.integers(4, 30))
        m = int(rng.integers(1, 7))
        cfg = mc.Configuration(n, tuple(np.sort(rng.uniform(0, 2 * np.pi, n))))
        assert mc.gamma_identities(cfg, m) < 1e-11


def test_stein_terms_closed_forms_and_gate():
    rep = mc.stein_terms(20, 3, reps=4000, seed=6)
    assert rep.closed_A == pytest.approx((2 * 3 + 5) * 3 * 2 / (9.0 * 400.0), rel=1e-13)
    assert rep.closed_B == pytest.approx((8 * 3 + 7) * 4 * 3 / (6.0 * 400.0), rel=1e-13)
    assert rep.pass_A  # first term's closed form matches the simulation
    assert not rep.pass_B  # second closed form undershoots: documented gap
    assert rep.mc_B > rep.closed_B + 5.0 * rep.se_B
    with pytest.raises(ApplicabilityError, match="m <= n/2"):
        mc.stein_terms(5, 3, reps=2000, seed=0)


def test_ds_verify_small_case_and_flag():
    rep = mc.ds_verify(6, 2, 4, reps=3000, seed=2)
    assert rep.n_failed == 0
    assert not rep.out_of_theorem
    flagged = mc.ds_verify(3, 2, 4, reps=1000, seed=2)
    assert flagged.out_of_theorem  # weight exceeds matrix size
    with pytest.raises(ValueError):
        mc.ds_verify(6, 2, 4, reps=500, seed=2)


# ---------------------------------------------------------------------------
# spectral averages by simulation


def test_fourier_coefficients_modified_bessel():
    phi_hat, tail = mc.fourier_coefficients(lambda t: np.exp(np.cos(t)))
    for k in range(6):
        assert phi_hat[k] == pytest.approx(float(iv(k, 1.0)), rel=1e-12)
    assert tail < 1e-12


def test_fourier_coefficients_rejects_complex_output():
    with pytest.raises(ValueError):
        mc.fourier_coefficients(lambda t: np.exp(1j * t))


def test_exp_linear_stat_single_eigenvalue_bessel():
    # n = 1: the statistic is 2t cos(theta) with theta uniform, so the mean
    # is the order-0 modified Bessel at 2t
    t = 0.4
    est = mc.exp_linear_stat_mc(1, np.array([0.0, t], dtype=complex),
                                reps=200000, seed=11)
    expect = float(iv(0, 2.0 * t))
    assert abs(est.mean - expect) < 5.0 * est.se
    assert est.se < 0.002


def test_ld_tail_check_levels():
    out = mc.ld_tail_check(16, 3, (4.0, 6.0), reps=8000, seed=12)
    for entry, L in zip(out, (4.0, 6.0)):
        assert entry["L"] == L
        assert entry["bound"] == pytest.approx(12.0 * math.exp(-L * L / 8.0), rel=1e-13)
        assert entry["passed"]
    assert out[1]["empirical"] < out[0]["empirical"]
