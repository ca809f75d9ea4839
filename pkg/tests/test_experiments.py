"""Monte Carlo harness tests.

Statistical assertions use fixed seeds, so they are deterministic; bands
were chosen with generous margins relative to the Monte Carlo noise at
the configured replicate counts.
"""

import json
import math

import numpy as np
import pytest

from stripfront import (Frontier, kernel, normal_cdf, ks_distance,
                        plan_sequences, run_clt, run_gap_rate, run_sandwich,
                        run_weight_sum, sample_sandwich, strip_maxima)
from stripfront.estimator import standardization_factor
from stripfront.experiments import bracket_fail_bound, interior_window
from stripfront.rng import UniformStream, derive, stream_u01
from stripfront.sim import sandwich_counts

EPAN = kernel("epanechnikov")
CONST1 = Frontier.constant(1.0)
PLAN = plan_sequences(1.0, 0.9, 0.5)


# -- normal cdf -------------------------------------------------------------


def test_normal_cdf_at_zero():
    assert normal_cdf(0.0) == 0.5


def test_normal_cdf_symmetry():
    for z in np.linspace(-6.0, 6.0, 121):
        assert abs(normal_cdf(-z) - (1.0 - normal_cdf(z))) <= 1e-12


def test_normal_cdf_at_975_quantile():
    assert abs(normal_cdf(1.959964) - 0.975) <= 1e-6


def test_normal_cdf_far_tail():
    assert normal_cdf(-8.0) < 1e-14


def test_normal_cdf_against_simpson_quadrature():
    # independent oracle: Simpson integration of the density from 0 to z
    def simpson_phi(z, steps=4000):
        ts = np.linspace(0.0, z, steps + 1)
        dens = np.exp(-ts * ts / 2.0) / math.sqrt(2.0 * math.pi)
        w = np.ones(steps + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return 0.5 + float(np.dot(w, dens)) * (z / steps) / 3.0

    for z in (-3.0, -1.0, -0.31, 0.5, 1.644854, 2.5):
        assert abs(normal_cdf(z) - simpson_phi(z)) <= 1e-9


# -- KS distance ------------------------------------------------------------


def test_ks_single_sample_at_median():
    assert ks_distance([0.0], normal_cdf) == 0.5


def test_ks_permutation_invariant():
    stream = UniformStream(3)
    sample = [stream.uniform() * 4 - 2 for _ in range(500)]
    d1 = ks_distance(sample, normal_cdf)
    d2 = ks_distance(list(reversed(sample)), normal_cdf)
    d3 = ks_distance(sorted(sample), normal_cdf)
    assert d1 == d2 == d3
    assert 0.0 <= d1 <= 1.0


def test_ks_on_exact_draws_is_small():
    # sample drawn exactly from the target law: distance below the 99%
    # Kolmogorov quantile 1.63/sqrt(N)
    us = [stream_u01(55, i) for i in range(10000)]
    d = ks_distance(us, lambda v: min(max(v, 0.0), 1.0))
    assert d < 1.63 / math.sqrt(10000)


def test_ks_rejects_empty():
    with pytest.raises(ValueError):
        ks_distance([], normal_cdf)


# -- weight-sum experiment ----------------------------------------------


def test_weight_sum_gap_shrinks_along_grid():
    sums = run_weight_sum(EPAN, PLAN, [10**4, 10**6], 0.5)
    gap4 = abs(sums[0][1] - 1.0)
    gap6 = abs(sums[1][1] - 1.0)
    assert gap6 < gap4


def test_weight_sum_reaches_limit_on_gentler_plan():
    # with k = n^0.7 the n/(n-k) factor is close to 1 at desk scale
    plan = plan_sequences(1.0, 0.7, 0.45)
    assert plan.valid
    sums = run_weight_sum(EPAN, plan, [10**4, 10**6], 0.5)
    assert abs(sums[-1][1] - 1.0) < 0.05


def test_weight_sum_zero_far_from_support():
    sums = run_weight_sum(EPAN, PLAN, [100, 1000], 10.0)
    assert all(s == 0.0 for _, s in sums)


def test_weight_sum_requires_valid_plan():
    bad = plan_sequences(1.0, 0.5, 0.5)
    with pytest.raises(ValueError):
        run_weight_sum(EPAN, bad, [100], 0.5)


def test_weight_sum_matches_closed_identity():
    for n, s in run_weight_sum(EPAN, PLAN, [500, 5000], 0.37):
        k, h = PLAN.k_for(n), PLAN.h_for(n)
        centers = (np.arange(k) + 0.5) / k
        kh = EPAN.evaluate_array((0.37 - centers) / h) / h
        expect = n / (n - k) * float(np.mean(kh))
        assert s == pytest.approx(expect, rel=1e-12)


# -- CLT experiment -----------------------------------------------------


def test_clt_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        run_clt(CONST1, EPAN, PLAN, [1000], 0, 0.5, 1)
    with pytest.raises(ValueError):
        run_clt(CONST1, EPAN, PLAN, [], 10, 0.5, 1)
    bad_plan = plan_sequences(1.0, 0.5, 0.5)
    with pytest.raises(ValueError):
        run_clt(CONST1, EPAN, bad_plan, [1000], 10, 0.5, 1)


def test_clt_rejects_x_outside_window():
    lo, hi = interior_window(PLAN.k_for(1000), PLAN.h_for(1000), 1.0)
    with pytest.raises(ValueError):
        run_clt(CONST1, EPAN, PLAN, [1000], 10, lo / 2, 1)
    with pytest.raises(ValueError):
        run_clt(CONST1, EPAN, PLAN, [1000], 10, 1.0, 1)


def test_clt_report_shape_and_sigma():
    rep = run_clt(CONST1, EPAN, PLAN, [400, 900], 25, 0.5, 99)
    assert rep.n_grid == [400, 900]
    for cell in rep.cells:
        assert cell.standardized_errors.shape == (25,)
        assert 0.0 <= cell.ks_distance <= 1.0
        assert cell.sigma_theory == pytest.approx(math.sqrt(0.6), abs=1e-12)
        assert cell.sd is not None and cell.sd > 0.0


def test_clt_deterministic_and_thread_invariant():
    a = run_clt(CONST1, EPAN, PLAN, [400], 30, 0.5, 7, threads=1)
    b = run_clt(CONST1, EPAN, PLAN, [400], 30, 0.5, 7, threads=4)
    c = run_clt(CONST1, EPAN, PLAN, [400], 30, 0.5, 7, threads=0)
    assert np.array_equal(a.cells[0].standardized_errors,
                          b.cells[0].standardized_errors)
    assert np.array_equal(a.cells[0].standardized_errors,
                          c.cells[0].standardized_errors)


def test_clt_single_replicate_reports_null_sd():
    rep = run_clt(CONST1, EPAN, PLAN, [400], 1, 0.5, 7)
    cell = rep.cells[0]
    assert cell.sd is None
    assert cell.sd_reason == "needs >= 2 replicates"
    # the JSON form must stay NaN-free
    payload = rep.to_dict()
    assert json.dumps(payload, allow_nan=False)


def test_clt_errors_match_manual_recomputation():
    # one replicate recomputed through the public sampling + estimator API
    from stripfront import estimate, EstimatorParams, sample_uniform
    n = 400
    k, h = PLAN.k_for(n), PLAN.h_for(n)
    rep = run_clt(CONST1, EPAN, PLAN, [n], 3, 0.5, 11)
    params = EstimatorParams(n=n, k=k, h=h, kernel=EPAN)
    for r in range(3):
        pts = sample_uniform(CONST1, n, derive(11, n, r))
        fhat = estimate(params, strip_maxima(pts, k), 0.5)
        expect = standardization_factor(n, k, h) * (fhat - 1.0)
        assert rep.cells[0].standardized_errors[r] == pytest.approx(
            expect, rel=1e-12)


# -- sandwich experiment --------------------------------------------------


def test_sandwich_orderings_hold_pathwise():
    rep = run_sandwich(CONST1, EPAN, 500, 269, 0.0447, 0.2, 200, 0.5, 13)
    assert rep.chain_violations == 0
    assert rep.bracket_violations == 0
    assert rep.ordering_violations == 0
    assert rep.mean_estimator_gap >= 0.0
    assert rep.bound_check_applicable  # n gamma^2 = 20
    assert rep.bracket_fail_rate <= rep.bracket_fail_bound + 3.0 * math.sqrt(
        max(rep.bracket_fail_rate * (1 - rep.bracket_fail_rate), 1e-12) / 200)


def test_sandwich_bound_value():
    rep = run_sandwich(CONST1, EPAN, 10**4, 3981, 0.01, 0.05, 2, 0.5, 1)
    assert rep.bracket_fail_bound == pytest.approx(2.0 * math.exp(-3.125),
                                                   rel=1e-12)
    assert bracket_fail_bound(10**4, 0.05) == pytest.approx(0.0879, abs=5e-5)


def test_sandwich_vacuous_bound_still_reports():
    rep = run_sandwich(CONST1, EPAN, 500, 269, 0.0447, 0.01, 20, 0.5, 3)
    assert rep.bracket_fail_bound == pytest.approx(
        2.0 * math.exp(-500 * 1e-4 / 8.0), rel=1e-12)
    assert not rep.bound_check_applicable
    payload = rep.to_dict()
    assert payload["ordering_violations"] == rep.ordering_violations


def test_sandwich_rejects_bad_gamma():
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            run_sandwich(CONST1, EPAN, 500, 269, 0.0447, bad, 5, 0.5, 1)


def test_sandwich_bracket_rate_matches_count_event():
    rep = run_sandwich(CONST1, EPAN, 300, 30, 0.1, 0.3, 100, 0.5, 21)
    fails = sum(
        1 for r in range(100)
        if not sample_sandwich(CONST1, 300, 0.3, derive(21, 300, r)).bracketing_holds)
    assert rep.bracket_fail_count == fails
    assert rep.bracket_fail_rate == pytest.approx(fails / 100.0)


# -- gap-rate experiment --------------------------------------------------


def test_gap_rate_report_basics():
    rep = run_gap_rate(CONST1, PLAN, "fixed", [500, 1000], 50, 5, gamma=0.1)
    assert rep.n_grid == [500, 1000]
    assert not rep.low_replicates_warning
    for cell in rep.cells:
        assert cell.mean_u_gap >= 0.0
        assert cell.ratio == pytest.approx(
            cell.mean_u_gap * cell.n / (cell.k * cell.gamma), rel=1e-12)
        assert cell.gamma == 0.1


def test_gap_rate_inv_sqrt_k_policy():
    rep = run_gap_rate(CONST1, PLAN, "inv-sqrt-k", [500, 1000], 20, 5)
    for cell in rep.cells:
        assert cell.gamma == pytest.approx(1.0 / math.sqrt(cell.k), rel=1e-12)


def test_gap_rate_single_replicate_warns():
    rep = run_gap_rate(CONST1, PLAN, "fixed", [500], 1, 5, gamma=0.1)
    assert rep.low_replicates_warning


def test_gap_rate_validates_inputs():
    with pytest.raises(ValueError):
        run_gap_rate(CONST1, PLAN, "nope", [500], 5, 1, gamma=0.1)
    with pytest.raises(ValueError):
        run_gap_rate(CONST1, PLAN, "fixed", [500], 5, 1)  # missing gamma
    with pytest.raises(ValueError):
        run_gap_rate(CONST1, PLAN, "fixed", [1000, 500], 5, 1, gamma=0.1)
    shallow = plan_sequences(0.2, 0.8, 0.3)  # a(1+alpha) = 0.96 < 1
    with pytest.raises(ValueError):
        run_gap_rate(CONST1, shallow, "fixed", [500, 1000], 5, 1, gamma=0.1)


def test_gap_rate_matches_materialised_sandwich():
    # the fused internal path must agree with the public triple + reducer
    rep = run_gap_rate(CONST1, PLAN, "fixed", [600], 1, 77, gamma=0.2)
    seed_r = derive(77, 600, 0)
    k = PLAN.k_for(600)
    triple = sample_sandwich(CONST1, 600, 0.2, seed_r)
    u_low = strip_maxima(triple.lower, k).u
    u_up = strip_maxima(triple.upper, k).u
    assert rep.cells[0].mean_u_gap == pytest.approx(
        float(np.mean(u_up - u_low)), rel=1e-12)
    assert triple.counts == sandwich_counts(600, 0.2, seed_r)


def test_scaled_estimator_gap_shrinks_along_grid():
    # with gamma = k^(-1/2) the scaled envelope gap is of order sqrt(h),
    # so it must fall visibly between n = 1e4 and n = 1e5
    scaled = []
    for n in (10**4, 10**5):
        k, h = PLAN.k_for(n), PLAN.h_for(n)
        g = 1.0 / math.sqrt(k)
        rep = run_sandwich(CONST1, EPAN, n, k, h, g, 120, 0.5, 2024)
        assert rep.ordering_violations == 0
        scaled.append(standardization_factor(n, k, h) * rep.mean_estimator_gap)
    assert scaled[1] < scaled[0]
