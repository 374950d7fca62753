"""1/2-stable subordinator and relativistic Cauchy process (alpha = 1).

The subordinator here has Laplace transform ``E exp(-lam S_t) = exp(-t sqrt(lam))``
and the Brownian motion it time-changes has heat kernel
``exp(-|x|^2/4u)/(4 pi u)^(d/2)`` (the VAR2T normalization).
"""

from __future__ import annotations

import math

import numpy as np

from .conventions import VAR2T, tagged
from .errors import DomainError
from .specfun import bessel_k, bessel_k_scaled

__all__ = [
    "RelParams",
    "subordinator_density",
    "tilted_subordinator_density",
    "rel_cauchy_density",
    "rel_cauchy_fourier",
    "rel_potential",
    "heat_kernel",
]

_SQRT_4PI = math.sqrt(4.0 * math.pi)


class RelParams:
    """Dimension, mass and time of a relativistic Cauchy transition density."""

    __slots__ = ("d", "m", "t")

    def __init__(self, d: int = 1, m: float = 1.0, t: float = 1.0):
        if int(d) != d or not 1 <= d <= 3:
            raise DomainError("dimension d must be 1, 2 or 3")
        if not (m > 0 and t > 0 and math.isfinite(m) and math.isfinite(t)):
            raise DomainError("m and t must be finite and positive")
        self.d, self.m, self.t = int(d), float(m), float(t)

    def __repr__(self):
        return f"RelParams(d={self.d}, m={self.m}, t={self.t})"


def heat_kernel(u, x, d: int = 1):
    """VAR2T Gaussian kernel ``exp(-|x|^2/4u)/(4 pi u)^(d/2)``; ``x`` is ``|x|``."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    return np.exp(-x * x / (4.0 * u)) / (4.0 * math.pi * u) ** (d / 2.0)


@tagged("theta_1", VAR2T)
def subordinator_density(t, u):
    """Density ``t/sqrt(4 pi) u^(-3/2) exp(-t^2/4u)`` of the 1/2-stable subordinator."""
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(t <= 0) or np.any(u <= 0):
        raise DomainError("subordinator density needs t > 0 and u > 0")
    out = t / _SQRT_4PI * u**-1.5 * np.exp(-t * t / (4.0 * u))
    return out[()] if out.ndim == 0 else out


@tagged("talpha", VAR2T)
def tilted_subordinator_density(m, t, u):
    """Exponentially tilted subordinator density ``e^(mt) theta_t(u) e^(-m^2 u)``."""
    m = np.asarray(m, dtype=float)
    if np.any(m <= 0):
        raise DomainError("m must be positive")
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(t <= 0) or np.any(u <= 0):
        raise DomainError("tilted subordinator density needs t > 0 and u > 0")
    # combine exponents; e^(mt) alone overflows for large m t
    expo = m * t - t * t / (4.0 * u) - m * m * u
    out = t / _SQRT_4PI * u**-1.5 * np.exp(expo)
    return out[()] if out.ndim == 0 else out


def _norm(x, d):
    a = np.asarray(x, dtype=float)
    if d == 1 and a.ndim == 0:
        return abs(float(a))
    if a.shape != (d,):
        raise DomainError(f"point of shape {a.shape} given for d={d}")
    return float(np.linalg.norm(a))


@tagged("Cauchyrel", VAR2T)
def rel_cauchy_density(p: RelParams, x) -> float:
    """Relativistic Cauchy transition density on R^d.

    ``2 (m/2pi)^((d+1)/2) t e^(mt) K_{(d+1)/2}(m rho) / rho^((d+1)/2)`` with
    ``rho = sqrt(|x|^2 + t^2)``.
    """
    d, m, t = p.d, p.m, p.t
    r = _norm(x, d)
    nu = 0.5 * (d + 1)

    rho = math.hypot(r, t)
    # e^(mt) K(m rho) = e^(m(t - rho)) * [e^(m rho) K(m rho)]
    return (
        2.0 * (m / (2.0 * math.pi)) ** nu * t
        * math.exp(m * (t - rho)) * bessel_k_scaled(nu, m * rho) / rho**nu
    )


def rel_cauchy_fourier(xi, m: float, t: float):
    """Characteristic function ``e^(mt) exp(-t sqrt(|xi|^2 + m^2))`` (alpha = 1)."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(m * t - t * np.sqrt(xi * xi + m * m))


@tagged("m-potential", VAR2T)
def rel_potential(d: int, alpha: float, m: float, r: float) -> float:
    """m-potential ``U^m_m(x) = int_0^inf e^(-mt) p^m_t(x) dt`` at ``|x| = r``.

    ``2^(1-(d+alpha)/2) / (Gamma(alpha/2) pi^(d/2)) m^((d-alpha)/(2 alpha))
    K_{(d-alpha)/2}(m^(1/alpha) r) / r^((d-alpha)/2)``.
    """
    if not 0 < alpha < 2:
        raise DomainError("alpha must lie in (0, 2)")
    if not m > 0:
        raise DomainError("m must be positive")
    if not r > 0:
        raise DomainError("r must be positive")
    if d < alpha:
        raise DomainError("need d >= alpha for a finite potential")
    nu = 0.5 * (d - alpha)
    c = 2.0 ** (1.0 - 0.5 * (d + alpha)) / (math.gamma(0.5 * alpha) * math.pi ** (0.5 * d))
    return c * m ** (nu / alpha) * bessel_k(nu, m ** (1.0 / alpha) * r) / r**nu
