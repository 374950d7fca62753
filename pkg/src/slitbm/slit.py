"""Hitting distributions of planar Brownian motion on the slit (-inf, 0] x {0}.

``D`` is the complement of the closed negative half-axis and ``tau_D`` the first
time ``(B, W)`` hits it. Place densities do not depend on the time
normalization. Time-dependent objects are tagged:

* axis formulas (joint density from ``(x, 0)``, level-hitting density,
  coordinate hitting densities, ``psi_kernel``) use VAR2T, ``E B(t)^2 = 2t``;
* the general-start family (``joint_laplace_general``,
  ``joint_density_general``, ``conditional_gauge``) uses VAR1T with killing
  rate ``lam^2/2``.

A VAR2T expectation ``E exp(-theta tau)`` equals the VAR1T one with
``lam = sqrt(theta)`` (VAR2T time is half the VAR1T time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .conventions import VAR1T, VAR2T, tagged
from .errors import DomainError
from .quadrature import Endpoint, QuadSpec, integrate_finite, integrate_semiinf
from .stable import RelParams, rel_cauchy_density

__all__ = [
    "Point",
    "HitSample",
    "as_point",
    "in_domain",
    "hit_place_density_axis",
    "hit_place_cdf_axis",
    "hit_place_density",
    "hit_place_density_sweep",
    "hit_place_density_interval",
    "hit_place_density_general",
    "joint_density_axis",
    "level_hit_density",
    "level_hit_cdf",
    "coordinate_hit_joint_density",
    "joint_laplace_general",
    "joint_density_general",
    "conditional_gauge",
    "psi_kernel",
    "psi_kernel_relativistic",
    "PSI_ALT_CONSTANT",
    "gauge_mass_axis",
    "gauge_mass_offaxis",
    "stable_poisson_halfspace",
    "sample_hit_place_exact",
    "sample_hit_axis",
]

_SPEC = QuadSpec(abs_tol=1e-300, rel_tol=1e-13, max_depth=200, tail_cut=1e-14)
_SQRT_PI = math.sqrt(math.pi)

# alternative constant for the relativistic convolution form of psi_kernel;
# the mass identity int psi(v, y) dv = exp(-|y|) forces 1 instead
PSI_ALT_CONSTANT = 1.0 / math.sqrt(2.0)


class Point(NamedTuple):
    x: float
    y: float

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass
class HitSample:
    """Hitting times ``s`` and hitting places ``z`` (arrays of equal length)."""

    s: np.ndarray
    z: np.ndarray

    def __len__(self):
        return len(self.z)


def as_point(p) -> Point:
    x, y = p
    return Point(float(x), float(y))


def in_domain(p) -> bool:
    x, y = as_point(p)
    return not (x <= 0.0 and y == 0.0)


def _require_domain(p) -> Point:
    p = as_point(p)
    if not in_domain(p):
        raise DomainError(f"{tuple(p)} lies on the slit")
    return p


def _sqrt_parts(p: Point):
    """``(|p| + x, |p| - x)`` without cancellation."""
    r = p.norm
    if p.x >= 0:
        plus = r + p.x
        minus = p.y * p.y / plus if plus > 0 else 0.0
    else:
        minus = r - p.x
        plus = p.y * p.y / minus
    return plus, minus


def _root_plus_over_dist2(p: Point, z):
    """``sqrt(|p| + x) / ((x - z)^2 + y^2)`` free of underflow for tiny ``y``.

    Infinite when ``p`` sits on the slit at ``z`` to machine precision.
    """
    h = np.hypot(p.x - z, p.y)
    with np.errstate(divide="ignore", invalid="ignore"):
        if p.x >= 0:
            a = math.sqrt(p.norm + p.x) / h
        else:
            a = (abs(p.y) / h) / math.sqrt(p.norm - p.x)
        return np.where(h > 0, a / h, np.inf)


def _scalar(out):
    return out[()] if np.ndim(out) == 0 else out


# --- place densities -------------------------------------------------------


@tagged("h1")
def hit_place_density_axis(x, z):
    """Density of ``B(tau_D)`` from ``(x, 0)``: ``(1/pi) sqrt(x/-z) / (x - z)``."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(x <= 0) or np.any(z >= 0):
        raise DomainError("need x > 0 > z")
    return _scalar(np.sqrt(x / -z) / (math.pi * (x - z)))


def hit_place_cdf_axis(x, z0):
    """``P^{(x,0)}(B(tau_D) > -z0) = (2/pi) arctan(sqrt(z0/x))``."""
    x = np.asarray(x, dtype=float)
    z0 = np.asarray(z0, dtype=float)
    if np.any(x <= 0) or np.any(z0 < 0):
        raise DomainError("need x > 0 and z0 >= 0")
    return _scalar(2.0 / math.pi * np.arctan(np.sqrt(z0 / x)))


@tagged("h3")
def hit_place_density(w, z):
    """Density of ``B(tau_D)`` from ``w = (x, y)`` in ``D``.

    ``2^(-1/2)/pi sqrt((|w| + x)/-z) (|w| - z) / ((x - z)^2 + y^2)``.
    """
    w = _require_domain(w)
    z = np.asarray(z, dtype=float)
    if np.any(z >= 0):
        raise DomainError("z must be negative")
    r = w.norm
    out = _root_plus_over_dist2(w, z) * np.sqrt(1.0 / -z) * (r - z) / (math.sqrt(2.0) * math.pi)
    return _scalar(out)


@tagged("h2")
def hit_place_density_sweep(w, z: float, spec: QuadSpec = _SPEC) -> float:
    """Density of ``B(tau_D)`` by sweeping through the horizontal axis.

    The path first reaches the axis with the Cauchy law of scale ``|y|``; from a
    positive point ``(v, 0)`` it then exits with ``hit_place_density_axis``.
    """
    w = _require_domain(w)
    if not z < 0:
        raise DomainError("z must be negative")
    x, y = w.x, abs(w.y)
    if y == 0.0:
        return float(hit_place_density_axis(x, z))

    r2 = x * x + y * y

    def f(psi):
        # Cauchy angle measured from v = 0: v = x + y tan(phi0 + psi) = t r^2 / (y + x t)
        # past psi = pi/2 (x > 0) both t and den are negative
        t = math.tan(psi)
        den = y + x * t
        if den == 0.0:
            return 0.0
        v = t * r2 / den
        if not v > 0.0:
            return 0.0
        return math.sqrt(v / -z) / (math.pi * (v - z))

    top = math.atan2(y, -x)  # angle at which v reaches +inf
    total = integrate_finite(f, 0.0, top, spec, endpoint=Endpoint.SQRT_BOTH)
    return total / math.pi + y / ((x - z) ** 2 + y * y) / math.pi


@tagged("two-ray-slit")
def hit_place_density_interval(x, z):
    """Exit density from ``(x, 0)``, ``|x| < 1``, for the two-ray slit ``|z| >= 1``.

    ``(1/pi) sqrt((1 - x^2)/(z^2 - 1)) / |x - z|``, a probability density on
    ``|z| > 1`` (it is the Cauchy-process exit law of the interval).
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(x) >= 1) or np.any(np.abs(z) <= 1):
        raise DomainError("need |x| < 1 < |z|")
    return _scalar(np.sqrt((1.0 - x * x) / (z * z - 1.0)) / (math.pi * np.abs(x - z)))


@tagged("h-general")
def hit_place_density_general(zstart, w):
    """``h(z, w) = (1/(sqrt2 pi)) (|z| + z1)^(1/2)/sqrt|w| (|z| + |w|)/((z1 - w)^2 + z2^2)``."""
    p = _require_domain(zstart)
    w = np.asarray(w, dtype=float)
    if np.any(w >= 0):
        raise DomainError("w must be negative")
    aw = -w
    out = _root_plus_over_dist2(p, w) * np.sqrt(1.0 / aw) * (p.norm + aw)
    return _scalar(out / (math.sqrt(2.0) * math.pi))


# --- time/place laws from the positive axis ---------------------------------


@tagged("GBTD", VAR2T)
def level_hit_density(a, s):
    """First hitting time density of level ``a`` away: ``a s^(-3/2) e^(-a^2/4s) / (2 sqrt pi)``."""
    a = np.asarray(a, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(a <= 0) or np.any(s <= 0):
        raise DomainError("need a > 0 and s > 0")
    return _scalar(a * s**-1.5 * np.exp(-a * a / (4.0 * s)) / (2.0 * _SQRT_PI))


def level_hit_cdf(a, s):
    """``P(tau_a <= s) = erfc(a / (2 sqrt s))`` (VAR2T)."""
    from scipy.special import erfc

    a = np.asarray(a, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(a <= 0) or np.any(s < 0):
        raise DomainError("need a > 0 and s >= 0")
    with np.errstate(divide="ignore"):
        return _scalar(erfc(a / (2.0 * np.sqrt(s))))


@tagged("bttd", VAR2T)
def joint_density_axis(x, s, z):
    """Joint density of ``(tau_D, B(tau_D))`` from ``(x, 0)``."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(x <= 0) or np.any(s <= 0) or np.any(z >= 0):
        raise DomainError("need x > 0, s > 0, z < 0")
    out = np.sqrt(x / -z) / math.pi * s**-1.5 * np.exp(-((x - z) ** 2) / (4.0 * s)) / (2.0 * _SQRT_PI)
    return _scalar(out)


@tagged("btt/bss", VAR2T)
def coordinate_hit_joint_density(start, s, w, which: str = "vertical-hit"):
    """Joint density of a coordinate hitting time and the other coordinate.

    ``vertical-hit``: ``(tau, B(tau))`` where ``tau`` is the first zero of ``W``;
    ``horizontal-hit``: ``(sigma, W(sigma))`` for the first zero of ``B``.
    """
    x, y = as_point(start)
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any(s <= 0):
        raise DomainError("s must be positive")
    if which == "vertical-hit":
        if y == 0.0:
            raise DomainError("start lies on the target line y = 0")
        lead, d2 = abs(y), (x - w) ** 2 + y * y
    elif which == "horizontal-hit":
        if x == 0.0:
            raise DomainError("start lies on the target line x = 0")
        lead, d2 = abs(x), x * x + (y - w) ** 2
    else:
        raise DomainError(f"unknown target {which!r}")
    return _scalar(lead / s * np.exp(-d2 / (4.0 * s)) / (4.0 * math.pi * s))


# --- general starting point (VAR1T) -----------------------------------------


def _gauge_terms(zstart, w):
    p = _require_domain(zstart)
    if not w < 0:
        raise DomainError("w must be negative")
    plus, minus = _sqrt_parts(p)
    big_p = p.norm - w
    q = math.sqrt(-2.0 * w * minus)
    dist2 = (p.x - w) ** 2 + p.y * p.y  # = P^2 - Q^2
    return p, plus, big_p, q, dist2


def _gauge_integral(big_p, q, dist2, lam, spec=_SPEC):
    """``int_0^inf t e^(-P sqrt(t^2+lam^2)) / sqrt(t^2+lam^2) cosh(Q t) dt``.

    With ``r = sqrt(t^2 + lam^2)`` this is ``int_lam^inf e^(-P r) cosh(Q sqrt(r^2-lam^2)) dr``.
    """
    if q == 0.0:
        return math.exp(-big_p * lam) / big_p
    decay = dist2 / (big_p + q)  # P - Q without cancellation

    def f(v):
        # split cosh so that large Q * root never overflows
        root = math.sqrt(v * (v + 2.0 * lam))
        return 0.5 * (math.exp(q * root - big_p * v) + math.exp(-q * root - big_p * v))

    return math.exp(-big_p * lam) * integrate_semiinf(f, 0.0, spec, scale=1.0 / decay)


@tagged("taudbtaud", VAR1T)
def joint_laplace_general(zstart, lam: float, w: float) -> float:
    """``E^z[exp(-lam^2 tau_D / 2); B(tau_D) in dw] / dw`` for ``z`` in ``D``."""
    if lam < 0:
        raise DomainError("lam must be >= 0")
    p, plus, big_p, q, dist2 = _gauge_terms(zstart, w)
    pref = math.sqrt(plus / -w) / (math.sqrt(2.0) * math.pi)
    return pref * _gauge_integral(big_p, q, dist2, lam)


@tagged("conditional-gauge", VAR1T)
def conditional_gauge(zstart, w: float, lam: float) -> float:
    """``E^z[exp(-lam^2 tau_D / 2) | B(tau_D) = w]``."""
    if lam < 0:
        raise DomainError("lam must be >= 0")
    p, plus, big_p, q, dist2 = _gauge_terms(zstart, w)
    return dist2 / big_p * _gauge_integral(big_p, q, dist2, lam)


@tagged("taudbtaud-density", VAR1T)
def joint_density_general(zstart, s: float, w: float) -> float:
    """Joint density of ``(tau_D, B(tau_D))`` from ``z`` in ``D``.

    The inner ``int t e^(-t^2 s/2) cosh(Q t) dt`` is multiplied by
    ``e^(-P^2/2s)`` after completing the square, so only the bounded factor
    ``e^(-(P^2 - Q^2)/2s)`` is ever exponentiated.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    p, plus, big_p, q, dist2 = _gauge_terms(zstart, w)
    a = 0.5 * s
    c = q / s  # center of the shifted Gaussians
    width = 40.0 / math.sqrt(a)

    def f(t):
        return 0.5 * t * (math.exp(-a * (t - c) ** 2) + math.exp(-a * (t + c) ** 2))

    inner = integrate_finite(f, 0.0, c + width, _SPEC, points=[c] if c > 0 else None)
    pref = math.sqrt(plus) / (2.0 * math.pi**1.5 * math.sqrt(-w * s))
    return pref * math.exp(-dist2 / (2.0 * s)) * inner


# --- gauge mass off the axis through psi (VAR2T) -----------------------------


@tagged("Psi", VAR2T)
def psi_kernel(v: float, y: float) -> float:
    """``int_0^inf e^(-s) g^tau_{(v, y)}(s, 0) ds``: 1-potential of the first zero of ``W``.

    Direct quadrature of the defining time integral, after ``s = (r/2) e^u``
    with ``r = sqrt(v^2 + y^2)``.
    """
    if y == 0.0:
        raise DomainError("y must be nonzero")
    ay = abs(y)
    r = math.hypot(v, ay)

    def f(u):
        # s^-2 ds = (2/r) e^-u du ; exponent -s - r^2/4s = -r cosh u
        return math.exp(-r * (math.cosh(u) - 1.0) - u)

    u_hi = 1.0
    while r * (math.cosh(u_hi) - 1.0) + u_hi < 50.0:
        u_hi *= 1.5
    u_lo = -1.0
    while r * (math.cosh(u_lo) - 1.0) + u_lo < 50.0:
        u_lo *= 1.5
    integral = integrate_finite(f, u_lo, u_hi, _SPEC, points=[0.0])
    return ay / (4.0 * math.pi) * (2.0 / r) * math.exp(-r) * integral


def psi_kernel_relativistic(v: float, y: float, constant: float = 1.0) -> float:
    """``constant * e^(-|y|) p~_{|y|}(v)`` with the relativistic Cauchy density (m = 1).

    ``constant = 1`` reproduces ``psi_kernel``; ``PSI_ALT_CONSTANT`` is the
    alternative value, kept for comparison.
    """
    if y == 0.0:
        raise DomainError("y must be nonzero")
    ay = abs(y)
    return constant * math.exp(-ay) * rel_cauchy_density(RelParams(1, 1.0, ay), v)


@tagged("rel-Poisson-1", VAR2T)
def gauge_mass_axis(x, w, theta: float = 1.0):
    """``E^{(x,0)}[e^(-theta tau_D); B(tau_D) in dw]/dw = h(x, w) e^(-sqrt(theta)(x - w))``."""
    return hit_place_density_axis(x, w) * np.exp(-math.sqrt(theta) * (np.asarray(x) - np.asarray(w)))


@tagged("fgauge", VAR2T)
def gauge_mass_offaxis(w, wtarget: float) -> float:
    """``E^{(x,y)}[e^(-tau_D); B(tau_D) in dw]/dw`` for ``y != 0`` via ``psi_kernel``.

    ``int_0^inf psi(x - z, y) h(z, w) e^(-(z - w)) dz + psi(x - w, y)``.
    """
    x, y = as_point(w)
    if y == 0.0:
        raise DomainError("start must be off the axis")
    if not wtarget < 0:
        raise DomainError("target must be negative")
    ay = abs(y)

    def f(z):
        return psi_kernel(x - z, ay) * float(gauge_mass_axis(z, wtarget))

    spec = QuadSpec(abs_tol=1e-14, rel_tol=1e-10, max_depth=200, tail_cut=1e-11)
    knots = sorted({0.0} | {max(0.0, x + k * ay) for k in (-6, -1, 0, 1, 6)})
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        total += integrate_finite(f, lo, hi, spec, endpoint=Endpoint.SQRT_LEFT if lo == 0.0 else Endpoint.NONE)
    total += integrate_semiinf(f, knots[-1], spec, scale=max(ay, 1.0))
    return total + psi_kernel(x - wtarget, ay)


# --- d-dimensional half-space kernel ------------------------------------------


@tagged("dp")
def stable_poisson_halfspace(d: int, alpha: float, x, u) -> float:
    """alpha-stable Poisson kernel of the half-space ``{x1 > 0}`` in R^d.

    ``Gamma(d/2) sin(pi alpha/2) / pi^(1+d/2) (x1/-u1)^(alpha/2) / |x - u|^d``.
    """
    if not 0 < alpha < 2:
        raise DomainError("alpha must lie in (0, 2)")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if x.shape != (d,) or u.shape != (d,):
        raise DomainError("x and u must have length d")
    if not (x[0] > 0 > u[0]):
        raise DomainError("need x1 > 0 > u1")
    c = math.gamma(0.5 * d) * math.sin(0.5 * math.pi * alpha) / math.pi ** (1.0 + 0.5 * d)
    return c * (x[0] / -u[0]) ** (0.5 * alpha) / float(np.linalg.norm(x - u)) ** d


# --- exact samplers --------------------------------------------------------------


def sample_hit_place_exact(w, rng: np.random.Generator, size=None):
    """Exact draws of ``B(tau_D)`` from ``w`` in ``D``.

    ``sqrt(w)`` lies in the right half-plane, where Brownian motion exits on the
    imaginary axis at a Cauchy point ``i V`` (location ``Im sqrt(w)``, scale
    ``Re sqrt(w)``); squaring maps the exit back to ``-V^2``.
    """
    w = _require_domain(w)
    plus, minus = _sqrt_parts(w)
    scale = math.sqrt(0.5 * plus)
    loc = math.copysign(math.sqrt(0.5 * minus), w.y) if w.y != 0 else 0.0
    u = rng.random(size)
    v = loc + scale * np.tan(math.pi * (u - 0.5))
    return _scalar(-(v * v))


def sample_hit_axis(x: float, rng: np.random.Generator, size: int = 1) -> HitSample:
    """Exact draws of ``(tau_D, B(tau_D))`` from ``(x, 0)`` (VAR2T).

    Place from the arctan law, then the hitting time of level ``x - z`` as
    ``(x - z)^2 / (2 N^2)``.
    """
    if not x > 0:
        raise DomainError("x must be positive")
    u = rng.random(size)
    z = -x * np.tan(0.5 * math.pi * u) ** 2
    n = rng.standard_normal(size)
    s = (x - z) ** 2 / (2.0 * n * n)
    return HitSample(s=np.asarray(s), z=np.asarray(z))
