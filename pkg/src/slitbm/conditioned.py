"""Killed and exit-conditioned transition densities of the slit domain (VAR2T).

``killed_density_2d`` subtracts from the free kernel the paths that reached the
slit first (strong Markov at ``tau_D``). ``conditioned_density`` is the two-term
closed form (free kernel ratio minus ``r_zD``), ``conditioned_density_doob`` the Doob transform
``p^D(t, y, w) h(w, z) / h(y, z)``; both disintegrate to ``killed_density_2d``
when integrated against ``h(y, z) dz``.

Off-axis starts use the VAR1T joint law of ``(tau_D, B(tau_D))`` rescaled to
VAR2T by ``f2(s) = 2 f1(2s)``.
"""

from __future__ import annotations

import math

import numpy as np

from .conventions import VAR2T, tagged, var1t_to_var2t_density
from .errors import ConsistencyError, DomainError
from .quadrature import QuadSpec, integrate_finite, integrate_semiinf
from .slit import (
    as_point,
    hit_place_density,
    hit_place_density_axis,
    in_domain,
    joint_density_axis,
    joint_density_general,
    level_hit_cdf,
    level_hit_density,
)

__all__ = [
    "FreeKernel",
    "free_density",
    "r_zD",
    "conditioned_density",
    "conditioned_density_doob",
    "killed_density_2d",
    "killed_density_2d_grid",
    "survival_2d",
]

_SPEC = QuadSpec(abs_tol=1e-14, rel_tol=1e-9, max_depth=200, tail_cut=1e-10)


class FreeKernel:
    """Planar Gaussian kernel ``e^(-|u-v|^2/4t)/(4 pi t)``."""

    convention = VAR2T
    dimension = 2

    def __call__(self, t, u, v):
        return free_density(t, u, v)


@tagged("p", VAR2T)
def free_density(t, u, v):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("t must be positive")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d2 = np.sum((u - v) ** 2, axis=-1)
    out = np.exp(-d2 / (4.0 * t)) / (4.0 * math.pi * t)
    return out[()] if np.ndim(out) == 0 else out


@tagged("rzD", VAR2T)
def r_zD(t: float, y: float, z: float, w) -> float:
    """``int_0^t g_{y-z}(s) p(t - s, (z, 0), w) ds``."""
    if not (t > 0 and y > 0 > z):
        raise DomainError("need t > 0 and y > 0 > z")
    w = as_point(w)
    a = y - z
    d2 = (w.x - z) ** 2 + w.y * w.y

    def f(s):
        r = t - s
        if s <= 0.0 or r <= 0.0:
            return 0.0
        return float(level_hit_density(a, s)) * math.exp(-d2 / (4.0 * r)) / (4.0 * math.pi * r)

    return integrate_finite(f, 0.0, t, _SPEC)


@tagged("pzD", VAR2T)
def conditioned_density(t: float, y: float, z: float, w, tol: float = 1e-9, check: bool = True) -> float:
    """``p(t, (y,0), w) h(w, z) / h(y, z) - r_zD(t, y, z, w)``.

    With ``check`` the value is validated: below ``-tol`` relative to the first
    term raises ``ConsistencyError``, small negative round-off is clipped to 0.
    The kernel does go negative behind the slit tip (``w1 < z``), so
    ``check=False`` returns the raw signed value for integral identities.
    """
    w = as_point(w)
    if not in_domain(w):
        raise DomainError("w lies on the slit")
    lead = float(free_density(t, (y, 0.0), w)) * float(hit_place_density(w, z)) / float(
        hit_place_density_axis(y, z)
    )
    val = lead - r_zD(t, y, z, w)
    if not check:
        return val
    if val < -tol * max(lead, 1e-300):
        raise ConsistencyError(f"conditioned density is negative ({val:.3e}) at t={t}, w={tuple(w)}")
    return max(val, 0.0)


def conditioned_density_doob(t: float, y: float, z: float, w) -> float:
    """Doob transform ``p^D(t, (y,0), w) h(w, z) / h(y, z)`` of the killed kernel."""
    w = as_point(w)
    return killed_density_2d(t, (y, 0.0), w) * float(hit_place_density(w, z)) / float(
        hit_place_density_axis(y, z)
    )


def _joint_hit(start):
    """VAR2T joint density ``(s, z) -> J(s, z)`` of ``(tau_D, B(tau_D))`` from ``start``."""
    x, yy = start
    if yy == 0.0:
        return lambda s, z: float(joint_density_axis(x, s, z))
    f1 = lambda s, z: joint_density_general(start, s, z)  # noqa: E731
    return var1t_to_var2t_density(f1)


@tagged("kD", VAR2T)
def killed_density_2d(t: float, start, w) -> float:
    """``p(t, start, w) - int_0^t int_{-inf}^0 J(s, z) p(t - s, (z, 0), w) dz ds``."""
    if not t > 0:
        raise DomainError("t must be positive")
    start, w = as_point(start), as_point(w)
    if not (in_domain(start) and in_domain(w)):
        raise DomainError("start and w must lie in D")
    joint = _joint_hit(start)
    peak = math.sqrt(-w.x) if w.x < 0 else 0.0

    def inner(s):
        r = t - s
        if s <= 0.0 or r <= 0.0:
            return 0.0
        width = math.sqrt(r)

        def f(u):
            # z = -u^2 absorbs the 1/sqrt(-z) factor of J
            z = -u * u
            if u == 0.0:
                return 0.0
            d2 = (w.x - z) ** 2 + w.y * w.y
            return 2.0 * u * joint(s, z) * math.exp(-d2 / (4.0 * r)) / (4.0 * math.pi * r)

        knots = sorted({0.0} | {k for k in (peak - 4 * width, peak, peak + 4 * width) if k > 0})
        val = sum(integrate_finite(f, lo, hi, _SPEC) for lo, hi in zip(knots[:-1], knots[1:]))
        return val + integrate_semiinf(f, knots[-1], _SPEC, scale=max(width, 1.0))

    hit_part = integrate_finite(inner, 0.0, t, _SPEC)
    free = float(free_density(t, start, w))
    return max(free - hit_part, 0.0)


def killed_density_2d_grid(t: float, x: float, w, n_time: int = 64, n_place: int = 96):
    """Vectorized, lower-accuracy ``killed_density_2d`` from the axis point ``(x, 0)``.

    Fixed Gauss rules in ``s`` (mapped ``s = t v^2``) and ``z = -x u^2/(1-u)^2``;
    meant for cubature-based checks where ``w`` runs over many points.
    """
    if not (t > 0 and x > 0):
        raise DomainError("need t > 0 and x > 0")
    w = np.atleast_2d(np.asarray(w, dtype=float))
    gv, wv = np.polynomial.legendre.leggauss(n_time)
    v = 0.5 * (gv + 1.0)
    s = t * v * v
    ds = 0.5 * wv * 2.0 * t * v
    gu, wu = np.polynomial.legendre.leggauss(n_place)
    u = 0.5 * (gu + 1.0)
    z = -x * (u / (1.0 - u)) ** 2
    dz = 0.5 * wu * 2.0 * x * u / (1.0 - u) ** 3
    S, Z = np.meshgrid(s, z, indexing="ij")
    weights = np.outer(ds, dz) * joint_density_axis(x, S, Z)
    r = t - S
    out = np.empty(len(w))
    for k, (w1, w2) in enumerate(w):
        d2 = (w1 - Z) ** 2 + w2 * w2
        kern = np.exp(-d2 / (4.0 * r)) / (4.0 * math.pi * r)
        out[k] = max(float(free_density(t, (x, 0.0), (w1, w2))) - float(np.sum(weights * kern)), 0.0)
    return out


@tagged("pkilled", VAR2T)
def survival_2d(t: float, start) -> float:
    """``P^start(tau_D > t)``.

    From the axis: ``1 - int h(x, z) P(tau_{x-z} <= t) dz``; off the axis the
    VAR1T joint density is integrated over ``(0, 2t)``.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    start = as_point(start)
    if not in_domain(start):
        raise DomainError("start lies on the slit")
    if start.y == 0.0:
        x = start.x

        def f(u):
            # z = -x u^2
            if u == 0.0:
                return 0.0
            z = -x * u * u
            return 2.0 * x * u * float(hit_place_density_axis(x, z)) * float(level_hit_cdf(x - z, t))

        return 1.0 - integrate_semiinf(f, 0.0, _SPEC)

    def in_time(z):
        return integrate_finite(lambda s: joint_density_general(start, s, z) if s > 0 else 0.0,
                                0.0, 2.0 * t, _SPEC)

    def f(u):
        if u == 0.0:
            return 0.0
        return 2.0 * u * in_time(-u * u)

    return 1.0 - integrate_semiinf(f, 0.0, QuadSpec(1e-12, 1e-7, 100, 1e-8))
