import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slitbm.errors import DivergenceError, DomainError
from slitbm.quadrature import (
    Endpoint,
    QuadSpec,
    fourier_at,
    integrate_finite,
    integrate_real_line,
    integrate_semiinf,
    laplace_at,
)
from slitbm.slit import level_hit_density


def test_constant():
    assert integrate_finite(lambda u: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_inverse_sqrt_endpoint():
    val = integrate_finite(lambda u: 1.0 / math.sqrt(u) if u > 0 else 0.0, 0.0, 1.0, endpoint=Endpoint.SQRT_LEFT)
    assert val == pytest.approx(2.0, abs=1e-12)


def test_gaussian_piece():
    # 1.196288... = sqrt(pi/2) erf(sqrt 2); the 5-digit value is rounded
    val = integrate_finite(lambda u: math.exp(-u * u / 2), 0.0, 2.0)
    assert val == pytest.approx(math.sqrt(math.pi / 2) * math.erf(math.sqrt(2.0)), abs=1e-12)
    assert val == pytest.approx(1.19629, abs=5e-6)


def test_log_endpoints():
    assert integrate_finite(lambda u: math.log(u), 0.0, 1.0, endpoint=Endpoint.LOG_LEFT) == pytest.approx(-1.0, abs=1e-10)
    assert integrate_finite(lambda u: math.log(1 - u), 0.0, 1.0, endpoint=Endpoint.LOG_RIGHT) == pytest.approx(-1.0, abs=1e-10)


def test_sqrt_both():
    val = integrate_finite(lambda u: 1 / math.sqrt(u * (1 - u)), 0.0, 1.0, endpoint=Endpoint.SQRT_BOTH)
    assert val == pytest.approx(math.pi, abs=1e-10)


@pytest.mark.parametrize(
    "f, endpoint, target",
    [
        (lambda u: math.exp(-u), Endpoint.NONE, 1.0),
        (lambda u: u * math.exp(-u * u / 2), Endpoint.NONE, 1.0),
        (lambda u: math.exp(-u) / math.sqrt(u), Endpoint.SQRT_LEFT, math.sqrt(math.pi)),
    ],
)
def test_semiinf(f, endpoint, target):
    assert integrate_semiinf(f, 0.0, endpoint=endpoint) == pytest.approx(target, rel=1e-10)


def test_algebraic_tail():
    assert integrate_semiinf(lambda u: 1.0 / (1 + u) ** 2, 0.0) == pytest.approx(1.0, rel=1e-8)


def test_divergent():
    with pytest.raises(DivergenceError):
        integrate_semiinf(lambda u: 1.0 + u, 0.0)


def test_bad_interval():
    with pytest.raises(DomainError):
        integrate_finite(lambda u: 1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        QuadSpec(rel_tol=1e-10, tail_cut=1e-3)


def test_laplace():
    assert laplace_at(lambda s: math.exp(-s), 1.0) == pytest.approx(0.5, rel=1e-12)
    val = laplace_at(lambda s: float(level_hit_density(1.0, s)), 1.0)
    assert val == pytest.approx(math.exp(-1.0), rel=1e-10)


def test_laplace_concentrating():
    # narrow bump near 0 has transform close to its mass
    eps = 1e-3
    val = laplace_at(lambda s: math.exp(-s / eps) / eps, 2.0)
    assert val == pytest.approx(1.0 / (1.0 + 2.0 * eps), rel=1e-9)


def test_fourier():
    f = lambda x: 0.5 * math.exp(-abs(x))  # noqa: E731
    assert fourier_at(f, 1.0, even=True) == pytest.approx(0.5, abs=1e-9)
    assert fourier_at(f, 0.0, even=True) == pytest.approx(1.0, abs=1e-10)
    full = fourier_at(f, 1.0)
    assert full.real == pytest.approx(0.5, abs=1e-9) and abs(full.imag) < 1e-9


def test_real_line():
    val = integrate_real_line(lambda x: math.exp(-(x - 1) ** 2), center=1.0)
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(-3.0, 3.0), st.floats(0.01, 5.0))
def test_linearity_and_additivity(c, a, w):
    f = lambda u: math.sin(u) + u * u  # noqa: E731
    b = a + w
    m = a + w / 3
    whole = integrate_finite(f, a, b)
    assert integrate_finite(lambda u: c * f(u), a, b) == pytest.approx(c * whole, rel=1e-10, abs=1e-12)
    assert integrate_finite(f, a, m) + integrate_finite(f, m, b) == pytest.approx(whole, rel=1e-10, abs=1e-12)
