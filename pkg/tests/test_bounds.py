"""Constants ledger, distance-bound chain, and printed-table certification:
pinned values frozen from the first verified run plus structural gates."""

import math
import time

import numpy as np
import pytest

from cuetraces.bounds import (
    CM_PRINTED,
    GAMMA_PRINTED,
    certify_inequalities,
    constants,
    delta_chain,
    eps_uniform,
    gamma_slack,
    gamma_table_certify,
    n_alpha,
    table_cM,
    theta,
    theta_crossing,
    threshold_N,
    tv_alpha,
    tv_theorem,
    tv_uniform,
    w2_bound,
)
from cuetraces.numerics import ApplicabilityError


def test_constants_gate_below_three():
    for m in (0, 1, 2):
        with pytest.raises(ApplicabilityError, match="m >= 3"):
            constants(m)


def test_constants_pinned_values():
    cl = constants(3)
    assert cl.eps0 == pytest.approx(0.0406759, abs=2e-7)
    assert cl.c0 == pytest.approx(math.sqrt(1.0 / (6.0 * math.sqrt(2.0))), rel=1e-15)
    assert cl.c9 == pytest.approx(538.0 / 243.0, rel=1e-15)
    big = constants(10000)
    assert big.c1 == pytest.approx(0.049505, abs=2e-6)
    assert big.c2 == pytest.approx(0.1170436, abs=2e-7)


def test_constants_limits_documented_gap():
    # the c1 limit stays ~18% below its stated asymptote at m = 10^4 while
    # c2 lands within 2%; both pinned so any drift is flagged
    big = constants(10000)
    assert abs(big.c1 / 0.0605114 - 1.0) == pytest.approx(0.1819, abs=2e-3)
    assert abs(big.c2 / 0.119 - 1.0) < 0.02


def test_theta_crossing_pin():
    assert theta_crossing(3) == 631


def test_theta_breakdown_shape():
    br = theta(3000, 3)
    assert br.N == pytest.approx(1000.0)
    assert br.theta.log10() == pytest.approx(-2028.379866, abs=1e-5)
    assert br.lambda1.to_real() < br.lambda2.to_real()
    assert br.theta1_applicable


def test_delta_chain_pins_n3000_m3():
    rep = delta_chain(3000, 3)
    assert rep.delta2_bound.log10() == pytest.approx(-2022.6201272, abs=1e-6)
    assert rep.delta1_bound.log10() == pytest.approx(-2015.4622672, abs=1e-6)
    assert rep.delta1_refined.log10() == pytest.approx(-2015.7638624, abs=1e-6)
    assert rep.delta2_condition_met
    assert rep.applicability["m_ge_3"] and rep.applicability["N_gt_4m"]


def test_tv_theorem_pin():
    val = tv_theorem(1911, 3)
    assert val.log10() == pytest.approx(-1155.2121808, abs=1e-6)


def test_tv_uniform_pins():
    res = tv_uniform(4322)
    assert res.m_max == 5
    assert res.bound.log10() == pytest.approx(-367.8615, abs=1e-3)
    assert eps_uniform(4322) == pytest.approx(0.7108444, abs=1e-6)
    assert eps_uniform(4322) <= 0.711
    with pytest.raises(ApplicabilityError):
        tv_uniform(4321)


def test_eps_uniform_monotone_cap():
    ns = np.unique(np.geomspace(4322, 1_000_000, 40).astype(int))
    vals = [eps_uniform(int(n)) for n in ns]
    assert max(vals) <= 0.711
    assert vals[-1] < vals[0]


def test_w2_pin_and_gate():
    assert w2_bound(100, 4) == pytest.approx(0.1414214, abs=1e-6)
    with pytest.raises(ApplicabilityError):
        w2_bound(7, 4)


def test_table_cm_within_half_percent():
    t0 = time.time()
    computed = table_cM()
    worst = max(abs(computed[M] / CM_PRINTED[M] - 1.0) for M in CM_PRINTED)
    assert worst < 0.005
    assert worst == pytest.approx(0.0010475, abs=1e-5)
    assert time.time() - t0 < 1.0


def test_gamma_table_certifies_and_negative_control():
    assert gamma_table_certify() == pytest.approx(0.00028608, abs=1e-7)
    assert gamma_table_certify() > 0.0
    # replacing the printed gamma at m = 3 with 1.0 must break the criterion
    assert gamma_slack(3, 1.0) < 0.0


def test_threshold_matches_crossing():
    # the printed-table dominance threshold and the computed crossing are
    # distinct objects but must land in the same neighbourhood
    thr = threshold_N(3)
    assert thr == pytest.approx(636.381, abs=1e-2)
    nx = theta_crossing(3)
    assert abs(thr - nx) < 10.0


def test_alpha_bound_pins():
    assert n_alpha(0.3) == 35422
    res = tv_alpha(40000, 0.3)
    assert res.bound.log10() == pytest.approx(-2974.4117645, abs=1e-4)
    assert res.eps_n == pytest.approx(0.4438483, abs=1e-6)
    with pytest.raises(ApplicabilityError):
        tv_alpha(35421, 0.3)


def test_certify_inequalities_structure():
    rep = certify_inequalities()
    assert rep["upsilon1"]["min_margin"] > 0.0
    # the second comparison genuinely fails on a mid-range band: documented
    assert rep["upsilon2"]["min_margin"] < 0.0
    assert 446 <= rep["upsilon2"]["argmin_m"] <= 1042
    assert rep["theta_tail_domination"]["max_tail_ratio"] <= 25e-5
    assert rep["theta0_envelope"]["min_margin"] > 0.0
    assert rep["theta1_envelope"]["min_margin"] > 0.0
    assert rep["theta2_envelope_quadratic"]["min_margin"] > 0.0
    assert rep["theta2_envelope_threehalves"]["min_margin"] > 0.0
    assert rep["lambda12_ordering"]["min_margin"] > 0.0
    assert rep["lambda23_ordering"]["min_log_margin"] > 0.0


def test_theta_curve_speed_and_monotonicity():
    t0 = time.time()
    m = 3
    logs = []
    for N in range(10, 2001):
        br = theta(N * m, m)
        # the total is only defined past the N > 4m hypothesis
        assert (br.theta is None) == (N <= 4 * m)
        if br.theta is not None:
            logs.append(br.theta.log10())
    assert time.time() - t0 < 5.0
    tail = logs[100:]
    assert all(b < a for a, b in zip(tail, tail[1:]))


def test_delta_chain_refined_improves():
    for n, m in ((2000, 3), (5000, 4), (12000, 5)):
        rep = delta_chain(n, m)
        assert rep.delta1_refined.log10() <= rep.delta1_bound.log10()
