import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from slitbm.errors import DomainError
from slitbm.quadrature import fourier_at, integrate_semiinf, laplace_at
from slitbm.stable import (
    RelParams,
    rel_cauchy_density,
    rel_cauchy_fourier,
    rel_potential,
    subordinator_density,
    tilted_subordinator_density,
)


def _mass(f):
    return integrate.quad(f, 0, 1, epsrel=1e-12)[0] + integrate.quad(f, 1, np.inf, epsrel=1e-12)[0]


def test_subordinator():
    assert subordinator_density(1.0, 1.0) == pytest.approx(math.exp(-0.25) / math.sqrt(4 * math.pi), rel=1e-14)
    assert _mass(lambda u: subordinator_density(1.0, u)) == pytest.approx(1.0, abs=1e-9)
    assert laplace_at(lambda u: float(subordinator_density(1.0, u)), 1.0) == pytest.approx(math.exp(-1), rel=1e-10)


def test_tilted():
    assert _mass(lambda u: tilted_subordinator_density(1.0, 1.0, u)) == pytest.approx(1.0, abs=1e-9)
    assert tilted_subordinator_density(1.0, 1.0, 1.0) == pytest.approx(float(subordinator_density(1.0, 1.0)), rel=1e-14)
    val = laplace_at(lambda u: float(tilted_subordinator_density(1.0, 1.0, u)), 3.0)
    assert val == pytest.approx(math.exp(-1), rel=1e-10)


def test_tilted_large_mt_finite():
    assert math.isfinite(tilted_subordinator_density(50.0, 40.0, 0.4))


def test_rel_cauchy_values():
    p = RelParams(1, 1.0, 1.0)
    # rho = t = 1 at x = 0: e K_1(1) / pi
    exact = math.e * special.k1(1.0) / math.pi
    assert rel_cauchy_density(p, (0.0,)) == pytest.approx(exact, rel=1e-12)
    assert rel_cauchy_density(p, (0.0,)) == pytest.approx(0.5208038, abs=1e-7)


def test_rel_cauchy_mass_and_fourier():
    p = RelParams(1, 1.0, 1.0)
    f = lambda x: rel_cauchy_density(p, (x,))  # noqa: E731
    assert 2 * integrate_semiinf(f, 0.0) == pytest.approx(1.0, abs=1e-8)
    assert fourier_at(f, 1.0, even=True) == pytest.approx(math.exp(1 - math.sqrt(2)), abs=1e-8)
    assert rel_cauchy_fourier(1.0, 1.0, 1.0) == pytest.approx(0.6608598014, abs=1e-10)


def test_rel_cauchy_subordination():
    # density equals int heat_kernel(u, x) * tilted subordinator(u) du
    p = RelParams(1, 1.3, 0.8)
    x = 0.6
    f = lambda u: math.exp(-x * x / (4 * u)) / math.sqrt(4 * math.pi * u) * float(  # noqa: E731
        tilted_subordinator_density(1.3, 0.8, u))
    assert _mass(f) == pytest.approx(rel_cauchy_density(p, (x,)), rel=1e-9)


def test_rel_cauchy_2d_mass():
    p = RelParams(2, 1.0, 1.0)
    f = lambda r: 2 * math.pi * r * rel_cauchy_density(p, (r, 0.0))  # noqa: E731
    assert _mass(f) == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.floats(-3.0, 3.0), st.integers(1, 3))
def test_scaling(m, t, x, d):
    pt = (x,) + (0.0,) * (d - 1)
    lhs = rel_cauchy_density(RelParams(d, m, t), pt)
    rhs = m**d * rel_cauchy_density(RelParams(d, 1.0, m * t), tuple(m * c for c in pt))
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_potential():
    assert rel_potential(2, 1.0, 1.0, 1.0) == pytest.approx(math.exp(-1) / (2 * math.pi), rel=1e-10)
    assert rel_potential(2, 1.0, 1.0, 2.0) == pytest.approx(math.exp(-2) / (4 * math.pi), rel=1e-10)
    rs = [0.2, 0.5, 1.0, 2.0, 4.0]
    vals = [rel_potential(3, 1.0, 1.0, r) for r in rs]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_domain():
    with pytest.raises(DomainError):
        RelParams(4, 1.0, 1.0)
    with pytest.raises(DomainError):
        rel_potential(1, 1.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        subordinator_density(1.0, 0.0)
