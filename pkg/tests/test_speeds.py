import numpy as np
import pytest

import frontlab as fl
from frontlab.errors import BracketFailureError, HypothesisViolationError

from conftest import raised_cosine_mgf_closed


def dense_scan_speed(d, r, k, lam_max=10.0, step=1e-3, radius=1.0):
    """Independent oracle: brute-force scan of the candidate speed."""
    lams = np.arange(step, lam_max + step / 2, step)
    m = np.array([raised_cosine_mgf_closed(l, radius) for l in lams])
    return float(((d * (m - 1.0) + r * k) / lams).min())


def test_candidate_speed_example(unit_kernel):
    pr = fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel)
    got = fl.candidate_speed(pr, 1.0)
    expected = (raised_cosine_mgf_closed(1.0) - 1.0 + 1.0) / 1.0
    assert got == pytest.approx(expected, rel=1e-10)
    assert got == pytest.approx(1.0671, abs=1e-4)


def test_candidate_speed_rejects_nonpositive_rate(unit_kernel):
    pr = fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel)
    with pytest.raises(ValueError):
        fl.candidate_speed(pr, 0.0)
    with pytest.raises(ValueError):
        fl.candidate_speed(pr, -1.0)


def test_candidate_speed_vanishes_without_growth(unit_kernel):
    # k = 0: the symmetric tilted mass is 1 + O(lam^2), so the speed ~ lam.
    pr = fl.SpeedProblem(d=1.0, r=1.0, k=0.0, kernel=unit_kernel)
    assert fl.candidate_speed(pr, 1e-4) <= 1e-3


def test_candidate_speed_increasing_in_k(unit_kernel):
    lo = fl.SpeedProblem(d=1.0, r=1.0, k=0.5, kernel=unit_kernel)
    hi = fl.SpeedProblem(d=1.0, r=1.0, k=1.5, kernel=unit_kernel)
    for lam in (0.5, 1.0, 3.0):
        assert fl.candidate_speed(hi, lam) > fl.candidate_speed(lo, lam)


def test_min_speed_benchmark_value(unit_kernel):
    res = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel))
    assert res.attained
    assert res.speed == pytest.approx(0.582, abs=5e-4)
    assert res.rate == pytest.approx(2.90, abs=0.02)
    assert res.bracket[0] < res.rate < res.bracket[1]
    assert res.speed == pytest.approx(dense_scan_speed(1.0, 1.0, 1.0), abs=1e-4)


def test_min_speed_local_minimality_postcondition(unit_kernel):
    pr = fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel)
    res = fl.min_speed(pr)
    delta = 1e-5 * res.rate
    assert fl.candidate_speed(pr, res.rate + delta) >= res.speed - 1e-10
    assert fl.candidate_speed(pr, res.rate - delta) >= res.speed - 1e-10
    assert res.speed == pytest.approx(fl.candidate_speed(pr, res.rate), abs=0.0)


def test_min_speed_zero_carrying_level(unit_kernel):
    res = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=0.0, kernel=unit_kernel))
    assert res.speed == 0.0
    assert res.rate is None
    assert not res.attained


def test_min_speed_monotone_in_k(unit_kernel):
    r1 = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel))
    r2 = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=2.0, kernel=unit_kernel))
    assert r2.speed >= r1.speed


def test_min_speed_candidate_grows_past_minimizer(unit_kernel):
    res = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel))
    pr = fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=unit_kernel)
    assert fl.candidate_speed(pr, 4.0 * res.rate) > res.speed


def test_min_speed_tiny_k_goes_to_zero(unit_kernel):
    # minimizer falls below the starting rate; the bracket must walk left
    res = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=1e-9, kernel=unit_kernel))
    assert res.attained
    assert 0.0 < res.speed < 1e-4


def test_min_speed_bracket_failure(unit_kernel):
    pr = fl.SpeedProblem(d=1e-12, r=1.0, k=1e30, kernel=unit_kernel)
    with pytest.raises(BracketFailureError):
        fl.min_speed(pr)


def test_min_speed_dilated_kernel_matches_scan():
    # dilating the raised cosine is just a larger support radius
    for sigma in (0.5, 2.0):
        kernel = fl.raised_cosine(sigma)
        res = fl.min_speed(fl.SpeedProblem(d=1.0, r=1.0, k=1.0, kernel=kernel))
        scan = dense_scan_speed(1.0, 1.0, 1.0, lam_max=20.0 / sigma, radius=sigma)
        assert res.speed == pytest.approx(scan, abs=1e-4)


def test_system_speeds_symmetric_case(unit_kernel):
    params = fl.Params(d1=1.0, d2=1.0, r1=1.0, r2=1.0, a=0.5, b=2.0, s=0.0)
    sp = fl.system_speeds(params, unit_kernel, unit_kernel)
    # b - 1 = 1, so predator and prey problems coincide
    assert sp.s_star == pytest.approx(0.582, abs=5e-4)
    assert sp.s_lower_star == pytest.approx(sp.s_star, rel=1e-10)
    assert sp.s_underline == pytest.approx(sp.s_star, rel=1e-10)


def test_system_speeds_requires_b_above_one(unit_kernel):
    params = fl.Params(d1=1.0, d2=1.0, r1=1.0, r2=1.0, a=0.5, b=1.0, s=0.0)
    with pytest.raises(HypothesisViolationError) as err:
        fl.system_speeds(params, unit_kernel, unit_kernel)
    assert "H1" in str(err.value)


def test_system_speeds_predator_slows_to_zero(unit_kernel):
    params = fl.Params(d1=1.0, d2=1.0, r1=1.0, r2=1.0, a=0.5, b=1.0 + 1e-9, s=0.0)
    sp = fl.system_speeds(params, unit_kernel, unit_kernel)
    assert sp.s_lower_star < 1e-4
    assert sp.s_underline <= sp.s_star


def test_benchmark_speeds(bench_speeds):
    assert bench_speeds.s_star == pytest.approx(0.3901927818, abs=1e-6)
    assert bench_speeds.s_lower_star == pytest.approx(0.2368281359, abs=1e-6)
    assert bench_speeds.s_underline == bench_speeds.s_lower_star
