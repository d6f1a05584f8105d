import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frontlab as fl
from frontlab.errors import InvalidKernelError, ResolutionError

from conftest import raised_cosine_mgf_closed


def test_raised_cosine_peak_and_support(unit_kernel):
    assert unit_kernel.evaluate(0.0) == pytest.approx(1.0, abs=1e-15)
    assert unit_kernel.evaluate(2.0) == 0.0
    assert unit_kernel.evaluate(-2.0) == 0.0
    # closed form at the half-way point: 0.5*(1 + cos(pi/2)) = 0.5
    assert unit_kernel.evaluate(0.5) == pytest.approx(0.5, abs=1e-15)


def test_validation_report_raised_cosine(unit_kernel):
    rep = unit_kernel.validate()
    assert rep.ok
    assert rep.symmetry_error <= 1e-12
    assert rep.min_density >= 0.0
    assert rep.mass_error <= 1e-10
    assert rep.support_leak == 0.0
    assert rep.edge_slope_jump <= 1e-6


def test_validation_report_smooth_bump():
    rep = fl.smooth_bump(2.0).validate()
    assert rep.ok, rep.failures


def test_mgf_unit_mass_at_zero(unit_kernel):
    assert unit_kernel.mgf(0.0) == pytest.approx(1.0, abs=1e-12)
    assert fl.smooth_bump(1.5).mgf(0.0) == pytest.approx(1.0, abs=1e-10)


def test_mgf_matches_closed_form(unit_kernel):
    got = unit_kernel.mgf(1.0)
    assert got == pytest.approx(raised_cosine_mgf_closed(1.0), rel=1e-10)
    assert got == pytest.approx(1.0671, abs=1e-4)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(lam=st.floats(min_value=-5.0, max_value=5.0))
def test_mgf_even_and_at_least_one(lam):
    kernel = fl.raised_cosine(1.0)
    m = kernel.mgf(lam)
    assert m >= 1.0 - 1e-12
    assert m == pytest.approx(kernel.mgf(-lam), rel=1e-10)


def test_mgf_convexity_sampled(unit_kernel):
    lams = np.linspace(-5.0, 5.0, 41)
    vals = np.array([unit_kernel.mgf(l) for l in lams])
    second = vals[:-2] - 2.0 * vals[1:-1] + vals[2:]
    assert second.min() >= -1e-9


@pytest.mark.parametrize("make", [
    lambda: fl.raised_cosine(0.7),
    lambda: fl.smooth_bump(1.3),
    lambda: fl.tabulated(*_rc_table()),
])
def test_mgf_at_least_one_all_families(make):
    kernel = make()
    for lam in (-5.0, -1.5, 0.0, 0.8, 3.0, 5.0):
        assert kernel.mgf(lam) >= 1.0 - 1e-12


def test_discretize_halfwidth_and_mass(unit_kernel):
    st_ = unit_kernel.discretize(0.125)
    assert st_.halfwidth == 8
    assert st_.weights.size == 17
    assert st_.weights.sum() * st_.dx == pytest.approx(1.0, abs=1e-15)
    assert np.all(st_.weights >= 0.0)
    assert np.allclose(st_.weights, st_.weights[::-1], atol=0.0)


def test_discretize_rejects_coarse_spacing(unit_kernel):
    with pytest.raises(ResolutionError):
        unit_kernel.discretize(0.5)
    with pytest.raises(ResolutionError):
        unit_kernel.discretize(0.25)  # above the R/8 floor
    with pytest.raises(ResolutionError):
        unit_kernel.discretize(-0.1)


def test_discretize_constant_field_reproduction(unit_kernel):
    st_ = unit_kernel.discretize(1.0 / 16.0)
    ones = np.ones(200)
    out = fl.nonlocal_apply(st_, ones)
    h = st_.halfwidth
    assert np.max(np.abs(out[h:-h])) <= 1e-12


def _rc_table(n=401, radius=1.0, scale=1.0):
    x = np.linspace(-radius, radius, n)
    d = (1.0 + np.cos(np.pi * x / radius)) / (2.0 * radius) * scale
    return x, d


def test_tabulated_renormalizes_small_drift():
    x, d = _rc_table(scale=1.005)
    k = fl.tabulated(x, d)
    rep = k.validate()
    assert rep.mass_error <= 1e-8
    assert rep.ok, rep.failures
    # piecewise-linear interpolation of the raised cosine stays close to it
    assert k.evaluate(0.5) == pytest.approx(0.5, abs=1e-4)


def test_tabulated_rejects_large_drift():
    x, d = _rc_table(scale=1.02)
    with pytest.raises(InvalidKernelError):
        fl.tabulated(x, d)


def test_tabulated_rejects_unsorted():
    x, d = _rc_table()
    x2 = x.copy()
    x2[10], x2[11] = x2[11], x2[10]
    with pytest.raises(InvalidKernelError):
        fl.tabulated(x2, d)


def test_tabulated_rejects_asymmetric():
    x, d = _rc_table()
    d2 = d.copy()
    d2[50] += 1e-3
    with pytest.raises(InvalidKernelError):
        fl.tabulated(x, d2)


def test_tabulated_mgf_even_and_normalized():
    x, d = _rc_table()
    k = fl.tabulated(x, d)
    assert k.mgf(0.0) == pytest.approx(1.0, abs=1e-13)
    assert k.mgf(1.3) == pytest.approx(k.mgf(-1.3), rel=1e-12)
    assert k.mgf(1.3) >= 1.0


def test_load_tabulated_file(tmp_path):
    x, d = _rc_table(n=201)
    path = tmp_path / "kernel.txt"
    lines = ["# sampled dispersal kernel", "# x density"]
    lines += [f"{xi} {di}" for xi, di in zip(x, d)]
    path.write_text("\n".join(lines))
    k = fl.load_tabulated(path)
    assert k.support_radius == pytest.approx(1.0)
    assert k.validate().ok
