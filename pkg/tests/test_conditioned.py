import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from slitbm.conditioned import (
    FreeKernel,
    conditioned_density,
    conditioned_density_doob,
    free_density,
    killed_density_2d,
    killed_density_2d_grid,
    r_zD,
    survival_2d,
)
from slitbm.errors import ConsistencyError, DomainError
from slitbm.slit import hit_place_density, hit_place_density_axis, joint_density_axis, level_hit_cdf, level_hit_density


def polar_rule(center, n=40, scale=3.0):
    """Gauss nodes and weights over the upper half-plane in polar coordinates around ``center``."""
    g, gw = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (g + 1)
    r = scale * u / (1 - u)
    dr = 0.5 * gw * scale / (1 - u) ** 2
    th = 0.5 * math.pi * (g + 1)
    dth = 0.5 * math.pi * gw
    pts, wts = [], []
    for ri, dri in zip(r, dr):
        for ti, dti in zip(th, dth):
            pts.append((center[0] + ri * math.cos(ti), center[1] + ri * math.sin(ti)))
            wts.append(ri * dri * dti)
    return pts, np.array(wts)


def test_free_density():
    assert free_density(1.0, (0.3, 0.2), (0.3, 0.2)) == pytest.approx(1 / (4 * math.pi), rel=1e-15)
    assert free_density(1.0, (0, 0), (1, 0)) == pytest.approx(math.exp(-0.25) / (4 * math.pi), rel=1e-15)
    f = lambda r: 2 * math.pi * r * free_density(1.0, (0, 0), (r, 0))  # noqa: E731
    assert integrate.quad(f, 0, np.inf)[0] == pytest.approx(1.0, abs=1e-10)
    k = FreeKernel()
    assert k(1.0, (0, 0), (1, 0)) == free_density(1.0, (0, 0), (1, 0)) and k.dimension == 2


def test_r_zd_value_and_bounds():
    w = (0.0, 0.5)
    # oracle: direct scipy quadrature of g_2(s) p(1 - s, (-1, 0), w)
    d2 = 1.0 + 0.25
    f = lambda s: level_hit_density(2.0, s) * math.exp(-d2 / (4 * (1 - s))) / (4 * math.pi * (1 - s))  # noqa: E731
    oracle = integrate.quad(f, 0, 1, epsabs=1e-15, epsrel=1e-12)[0]
    val = r_zD(1.0, 1.0, -1.0, w)
    assert val == pytest.approx(oracle, rel=1e-8)
    assert val == pytest.approx(0.01131128, abs=1e-8)
    # at most P(tau <= 1) times the largest value of the kernel over time
    assert 0 < val < level_hit_cdf(2.0, 1.0) / (math.pi * math.e * d2)
    assert r_zD(1e-3, 1.0, -1.0, w) < 1e-100


def test_r_zd_monotone_far_from_tip():
    vals = [r_zD(t, 1.0, -1.0, (0.0, 3.0)) for t in (0.2, 0.5, 1.0, 1.5, 2.0, 3.0)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_conditioned_small_time():
    t, w = 0.01, (1.05, 0.02)
    lead = free_density(t, (1, 0), w) * hit_place_density(w, -1.0) / hit_place_density_axis(1.0, -1.0)
    assert conditioned_density(t, 1.0, -1.0, w) == pytest.approx(lead, rel=1e-12)


def test_conditioned_vanishes_late():
    assert abs(conditioned_density(400.0, 1.0, -1.0, (0.5, 0.5), check=False)) < 1e-3


def test_two_term_kernel_goes_negative_behind_tip():
    raw = conditioned_density(1.0, 1.0, -0.2, (-3.0, 0.2), check=False)
    assert raw == pytest.approx(-0.0016664214841986607, rel=1e-6)
    with pytest.raises(ConsistencyError):
        conditioned_density(1.0, 1.0, -0.2, (-3.0, 0.2))


def test_two_term_kernel_disintegrates():
    # int h(y, z) p_z(t, y, w) dz = p^D(t, (y, 0), w) holds for the two-term kernel
    t, y, w = 1.0, 1.0, (0.5, 0.5)
    f = lambda u: 2 * u * float(hit_place_density_axis(y, -u * u)) * conditioned_density(  # noqa: E731
        t, y, -u * u, w, check=False)
    total = integrate.quad(f, 0, 1, epsabs=1e-12, epsrel=1e-9)[0] + integrate.quad(
        f, 1, np.inf, epsabs=1e-12, epsrel=1e-9)[0]
    assert total == pytest.approx(killed_density_2d(t, (y, 0.0), w), rel=1e-6)


def test_two_term_kernel_mass_exceeds_one():
    # its mass over D is E[h(B_t, z)]/h(y, z) - P(tau_{y-z} <= t); frozen from a polar quadrature
    pts, wts = polar_rule((-1.0, 0.0), n=60)
    lead = np.array([free_density(1.0, (1.0, 0.0), p) * hit_place_density(p, -1.0) for p in pts])
    mass = 2 * np.dot(lead, wts) / hit_place_density_axis(1.0, -1.0) - level_hit_cdf(2.0, 1.0)
    assert mass == pytest.approx(1.019927193193155, abs=1e-5)


def test_doob_kernel_mass_is_conditional_survival():
    # exit at z fixes the time law g_{y-z}, so the mass is P(tau_2 > 1) = erf(1)
    pts, wts = polar_rule((-1.0, 0.0), n=40)
    k = killed_density_2d_grid(1.0, 1.0, pts)
    h = np.array([hit_place_density(p, -1.0) for p in pts])
    mass = 2 * np.dot(k * h, wts) / hit_place_density_axis(1.0, -1.0)
    assert 0.0 <= mass <= 1.0
    assert mass == pytest.approx(math.erf(1.0), abs=1e-3)


def test_doob_kernel_positive():
    for w in [(0.5, 0.5), (-3.0, 0.2), (2.0, -1.0)]:
        assert conditioned_density_doob(1.0, 1.0, -0.2, w) >= 0


def test_killed_density():
    val = killed_density_2d(1.0, (1.0, 0.0), (0.5, 0.5))
    assert val == pytest.approx(float(killed_density_2d_grid(1.0, 1.0, [(0.5, 0.5)])[0]), rel=1e-7)
    assert val == pytest.approx(0.0511317731, abs=1e-9)
    assert val < free_density(1.0, (1.0, 0.0), (0.5, 0.5))
    # a short time with start = w leaves the free kernel untouched
    assert killed_density_2d(0.01, (1.0, 0.0), (1.0, 0.0)) == pytest.approx(free_density(0.01, (1, 0), (1, 0)), rel=1e-6)


@pytest.mark.slow
def test_killed_density_off_axis_start():
    # the VAR1T general-start route from just above the axis reproduces the axis route
    near = killed_density_2d(1.0, (1.0, 1e-7), (0.5, 0.5))
    assert near == pytest.approx(killed_density_2d(1.0, (1.0, 0.0), (0.5, 0.5)), rel=1e-5)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(-3.0, 3.0), st.floats(0.1, 3.0))
def test_killed_below_free(t, w1, w2):
    w = (w1, w2)
    k = float(killed_density_2d_grid(t, 1.0, [w])[0])
    assert 0.0 <= k <= free_density(t, (1.0, 0.0), w) * (1 + 1e-9)


def test_survival_axis():
    f = lambda z, s: joint_density_axis(1.0, s, z)  # noqa: E731
    hit = integrate.dblquad(f, 0, 1, -np.inf, 0, epsabs=1e-12, epsrel=1e-10)[0]
    assert survival_2d(1.0, (1.0, 0.0)) == pytest.approx(1 - hit, abs=1e-9)
    assert survival_2d(1.0, (1.0, 0.0)) == pytest.approx(0.8005791318751906, abs=1e-10)
    assert survival_2d(1e-6, (1.0, 0.0)) == pytest.approx(1.0, abs=1e-12)
    vals = [survival_2d(t, (1.0, 0.0)) for t in (0.1, 0.5, 1.0, 2.0, 5.0)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_survival_off_axis():
    assert survival_2d(1.0, (1.0, 1e-6)) == pytest.approx(0.8005791318751906, abs=1e-6)
    s = survival_2d(1.0, (0.0, 1.0))
    assert 0 < s < 1


def test_domain_errors():
    with pytest.raises(DomainError):
        r_zD(1.0, 1.0, 0.5, (0, 1))
    with pytest.raises(DomainError):
        killed_density_2d(1.0, (-1.0, 0.0), (0.5, 0.5))
    with pytest.raises(DomainError):
        conditioned_density(1.0, 1.0, -1.0, (-2.0, 0.0))
