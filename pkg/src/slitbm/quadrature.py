"""Adaptive 1-D quadrature used as the numerical oracle layer.

Finite intervals are handled by QUADPACK (``scipy.integrate.quad``) behind a
tolerance contract. Semi-infinite integrals are summed over geometrically
growing panels until the running tail drops below ``QuadSpec.tail_cut`` of the
total, which suits the exponentially (or algebraically) decaying integrands that
appear throughout the package. Endpoint singularities of square-root and
logarithmic type are removed by a variable change selected with ``Endpoint``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from scipy import integrate

from .errors import DivergenceError, DomainError, ToleranceError

__all__ = [
    "QuadSpec",
    "DEFAULT_SPEC",
    "Endpoint",
    "integrate_finite",
    "integrate_semiinf",
    "integrate_real_line",
    "laplace_at",
    "fourier_at",
]

RealFunc = Callable[[float], float]


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_depth: int = 60
    tail_cut: float = 1e-11

    def __post_init__(self):
        if not (0 < self.abs_tol < 1 and 0 < self.rel_tol < 1):
            raise DomainError("abs_tol and rel_tol must lie in (0, 1)")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")
        if not (0 < self.tail_cut <= self.rel_tol):
            raise DomainError("tail_cut must lie in (0, rel_tol]")

    def tighter(self, factor: float = 10.0) -> "QuadSpec":
        return QuadSpec(
            abs_tol=self.abs_tol / factor,
            rel_tol=self.rel_tol / factor,
            max_depth=self.max_depth,
            tail_cut=self.tail_cut / factor,
        )


DEFAULT_SPEC = QuadSpec()


class Endpoint(Enum):
    """Built-in variable changes for integrable endpoint singularities."""

    NONE = "none"
    SQRT_LEFT = "sqrt_left"  # (u - a)^(-1/2) at a: u = a + v^2
    SQRT_RIGHT = "sqrt_right"  # (b - u)^(-1/2) at b: u = b - v^2
    SQRT_BOTH = "sqrt_both"
    LOG_LEFT = "log_left"  # log(u - a) at a: u = a + e^(-v)
    LOG_RIGHT = "log_right"  # log(b - u) at b: u = b - e^(-v)


def _quad(f, a, b, spec, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info, *rest = integrate.quad(
            f,
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_depth,
            full_output=1,
            **kw,
        )
    ier = rest[0] if rest and isinstance(rest[0], int) else 0
    if not math.isfinite(val):
        raise DivergenceError(f"non-finite integral on [{a}, {b}]")
    bound = spec.abs_tol + spec.rel_tol * abs(val)
    # QUADPACK flags roundoff (ier=2) even when the result is at machine precision
    if ier != 0 and err > bound and not (ier == 2 and err <= 100 * bound):
        raise ToleranceError(f"quadrature on [{a}, {b}] failed (ier={ier})", val, err)
    return val, err


def integrate_finite(
    f: RealFunc,
    a: float,
    b: float,
    spec: QuadSpec = DEFAULT_SPEC,
    endpoint: Endpoint = Endpoint.NONE,
    points=None,
) -> float:
    """Integrate ``f`` over ``[a, b]``.

    ``endpoint`` selects a variable change that removes an integrable
    square-root or logarithmic singularity; ``points`` lists interior break
    points (kinks or integrable singularities) for the plain rule.
    """
    if not a <= b:
        raise DomainError(f"integrate_finite needs a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    if endpoint is Endpoint.NONE:
        kw = {}
        if points is not None:
            pts = [p for p in points if a < p < b]
            if pts:
                kw["points"] = pts
        return _quad(f, a, b, spec, **kw)[0]
    if endpoint is Endpoint.SQRT_LEFT:
        w = math.sqrt(b - a)
        return _quad(lambda v: 2.0 * v * f(a + v * v), 0.0, w, spec)[0]
    if endpoint is Endpoint.SQRT_RIGHT:
        w = math.sqrt(b - a)
        return _quad(lambda v: 2.0 * v * f(b - v * v), 0.0, w, spec)[0]
    if endpoint is Endpoint.SQRT_BOTH:
        m = 0.5 * (a + b)
        return integrate_finite(f, a, m, spec, Endpoint.SQRT_LEFT) + integrate_finite(
            f, m, b, spec, Endpoint.SQRT_RIGHT
        )
    if endpoint in (Endpoint.LOG_LEFT, Endpoint.LOG_RIGHT):
        v0 = -math.log(b - a)
        end, sign = (a, 1.0) if endpoint is Endpoint.LOG_LEFT else (b, -1.0)

        def g(v):
            e = math.exp(-v)
            u = end + sign * e
            # once u rounds onto the endpoint the remaining mass is below e * |log e|
            return 0.0 if u == end else f(u) * e

        return integrate_semiinf(g, v0, spec)
    raise DomainError(f"unknown endpoint handling {endpoint!r}")


def integrate_semiinf(
    f: RealFunc,
    a: float,
    spec: QuadSpec = DEFAULT_SPEC,
    scale: float | None = None,
    endpoint: Endpoint = Endpoint.NONE,
    max_panels: int = 200,
) -> float:
    """Integrate ``f`` over ``[a, inf)``.

    Panels ``[a + (2^k - 1) h, a + (2^(k+1) - 1) h]`` are added until the latest
    panel is below ``tail_cut`` of the running total for two consecutive panels;
    the remaining panels are then added as a geometric series.
    ``scale`` is the decay-length hint ``h``; by default it is 1. A sequence of
    panels that stops shrinking raises ``DivergenceError``.
    """
    h = 1.0 if scale is None else float(scale)
    if not h > 0:
        raise DomainError("scale must be positive")
    first = endpoint if endpoint in (Endpoint.SQRT_LEFT, Endpoint.LOG_LEFT) else Endpoint.NONE
    total = integrate_finite(f, a, a + h, spec, first)
    lo, width = a + h, 2.0 * h
    prev = abs(total)
    quiet = 0
    growing = 0
    for _ in range(max_panels):
        piece = _quad(f, lo, lo + width, spec)[0]
        total += piece
        ap = abs(piece)
        if ap <= spec.tail_cut * abs(total) or (ap == 0.0 and total == 0.0):
            quiet += 1
            if quiet >= 2:
                # geometric extrapolation of the remaining panels (algebraic tails)
                r = ap / prev if prev > 0 else 0.0
                if 0.0 < r < 0.95:
                    total += piece * r / (1.0 - r)
                return total
        else:
            quiet = 0
        growing = growing + 1 if ap >= prev and ap > 0 else 0
        if growing >= 8 or not math.isfinite(total):
            raise DivergenceError("integrand does not decay on [a, inf)")
        prev = ap
        lo += width
        width *= 2.0
        if not math.isfinite(lo + width):
            break
    raise DivergenceError("semi-infinite integral did not settle within max_panels")


def integrate_real_line(f: RealFunc, spec: QuadSpec = DEFAULT_SPEC, center: float = 0.0,
                        scale: float | None = None) -> float:
    """Integrate ``f`` over the whole line, split at ``center``."""
    right = integrate_semiinf(f, center, spec, scale)
    left = integrate_semiinf(lambda u: f(2.0 * center - u), center, spec, scale)
    return left + right


def laplace_at(f: RealFunc, theta: float, spec: QuadSpec = DEFAULT_SPEC,
               endpoint: Endpoint = Endpoint.NONE) -> float:
    """Laplace transform ``int_0^inf exp(-theta s) f(s) ds`` of a density on (0, inf)."""
    if not theta > 0:
        raise DomainError("theta must be positive")
    return integrate_semiinf(
        lambda s: math.exp(-theta * s) * f(s) if s > 0 else 0.0,
        0.0,
        spec,
        scale=min(1.0, 1.0 / theta),
        endpoint=endpoint,
    )


def fourier_at(f: RealFunc, xi: float, spec: QuadSpec = DEFAULT_SPEC, even: bool = False):
    """Fourier transform ``int exp(i xi x) f(x) dx``.

    For ``even=True`` the real value ``2 int_0^inf cos(xi x) f(x) dx`` is
    returned. Oscillatory tails are left to QUADPACK's Fourier-integral rule
    (QAWF) rather than accelerated here.
    """
    if xi == 0.0:
        if even:
            return 2.0 * integrate_semiinf(f, 0.0, spec)
        return complex(integrate_real_line(f, spec), 0.0)

    def half(g, weight):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(g, 0.0, math.inf, weight=weight, wvar=abs(xi),
                                      epsabs=spec.abs_tol, limlst=200)
        if err > 100 * (spec.abs_tol + spec.rel_tol * abs(val)):
            raise ToleranceError("Fourier quadrature failed", val, err)
        return val

    if even:
        return 2.0 * half(f, "cos")
    fr = lambda x: f(x)  # noqa: E731
    fl = lambda x: f(-x)  # noqa: E731
    re = half(fr, "cos") + half(fl, "cos")
    im = half(fr, "sin") - half(fl, "sin")
    im = im if xi > 0 else -im
    return complex(re, im)

