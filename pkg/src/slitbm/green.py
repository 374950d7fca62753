"""Resolvent (lambda-Green) functions of the slit domain and the half-plane.

The slit-domain objects live under VAR1T with killing rate ``lam^2/2``:
``green_lambda_axis``, ``green_lambda_offaxis``, ``green_lambda_general``,
``killed_density_axis`` and ``killed_density_offaxis``. The logarithmic
(``lam = 0``) Green functions are normalized so that on the positive axis they
reduce to the Green function of the Cauchy process killed off ``(0, inf)``.

``potential_lambda`` keeps its stated constant; it is not a resolvent density
of either normalization (``K_1(r)/r`` is not integrable in the plane) and is
exposed for comparison only. ``heat_potential`` is the one used downstream.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .conventions import VAR1T, VAR2T, Convention, tagged
from .errors import DomainError, SingularityError
from .quadrature import Endpoint, QuadSpec, integrate_finite, integrate_semiinf
from .slit import as_point, hit_place_density

__all__ = [
    "GreenQuery",
    "potential_lambda",
    "heat_potential",
    "green_halfplane_lambda",
    "green_lambda_axis",
    "green_lambda_axis_vec",
    "poisson_kernel_lambda",
    "green_lambda_offaxis",
    "green_lambda_general",
    "killed_density_axis",
    "killed_density_offaxis",
    "cauchy_halfline_green",
    "green_log_axis",
    "green_log_from_vertical",
    "greenfact",
    "gauge_mass_integral",
    "GFD2_HALF_CONSTANT",
    "GFD2_CONSTANT",
]

_SPEC = QuadSpec(abs_tol=1e-15, rel_tol=1e-11, max_depth=200, tail_cut=1e-12)

# half prefactor sometimes quoted for the axis log-Green integral, and the value
# forced by the Cauchy kernel |x2|/pi times the half-line Green (2/pi) ln(...)
GFD2_HALF_CONSTANT = 1.0 / math.pi**2
GFD2_CONSTANT = 2.0 / math.pi**2

_GL_X, _GL_W = np.polynomial.legendre.leggauss(200)


class GreenQuery:
    """Arguments of a pointwise Green evaluation."""

    __slots__ = ("lam", "p", "q", "convention")

    def __init__(self, lam: float, p, q, convention: Convention = VAR1T):
        if not lam >= 0:
            raise DomainError("lam must be >= 0")
        self.lam = float(lam)
        self.p, self.q = as_point(p), as_point(q)
        if self.p == self.q:
            raise SingularityError("Green functions are singular at p = q")
        self.convention = Convention(convention)

    def __repr__(self):
        return f"GreenQuery(lam={self.lam}, p={tuple(self.p)}, q={tuple(self.q)}, {self.convention.value})"


# --- whole-plane and half-plane potentials -----------------------------------


@tagged("pot")
def potential_lambda(lam: float, r: float) -> float:
    """Closed-form lambda-potential ``(1/(sqrt2 pi)) (sqrt(lam)/r) K_1(sqrt(lam) r)``."""
    if not (lam > 0 and r > 0):
        raise DomainError("lam and r must be positive")
    from .specfun import bessel_k

    s = math.sqrt(lam)
    return s / r * bessel_k(1, s * r) / (math.sqrt(2.0) * math.pi)


@tagged("heat-potential", VAR2T)
def heat_potential(rate: float, r, convention: Convention = VAR2T):
    """Resolvent density ``int_0^inf e^(-rate t) p_t(r) dt`` of planar Brownian motion.

    VAR2T: ``K_0(sqrt(rate) r)/(2 pi)``; VAR1T: ``K_0(sqrt(2 rate) r)/pi``.
    """
    if not rate > 0:
        raise DomainError("rate must be positive")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise SingularityError("resolvent density is singular at r = 0")
    if Convention(convention) is VAR2T:
        out = special.k0(math.sqrt(rate) * r) / (2.0 * math.pi)
    else:
        out = special.k0(math.sqrt(2.0 * rate) * r) / math.pi
    return out[()] if out.ndim == 0 else out


@tagged("halfplane-green")
def green_halfplane_lambda(rate: float, p, q, convention: Convention = VAR2T) -> float:
    """Resolvent density of Brownian motion killed on leaving ``{x2 > 0}`` (or ``{x2 < 0}``).

    ``U(|p - q|) - U(|p - q*|)`` with ``q* = (q1, -q2)`` and ``U = heat_potential``.
    Points on opposite sides give 0.
    """
    p, q = as_point(p), as_point(q)
    if p == q:
        raise SingularityError("p = q")
    if p.y * q.y <= 0:
        return 0.0
    d = math.hypot(p.x - q.x, p.y - q.y)
    dstar = math.hypot(p.x - q.x, p.y + q.y)
    return float(heat_potential(rate, d, convention) - heat_potential(rate, dstar, convention))


# --- slit domain, lam^2/2 killing (VAR1T) --------------------------------------


def _axis_theta_max(lam, gap, total):
    theta = math.acosh(total / gap)
    if lam > 0:
        # beyond this the integrand is below e^-50 of its value at 0
        theta = min(theta, math.acosh(1.0 + 50.0 / (lam * gap)))
    return theta


@tagged("lGreen2", VAR1T)
def green_lambda_axis(lam: float, x: float, y: float) -> float:
    """``G_D(x, y) = (1/pi) int_{|x-y|}^{x+y} e^(-lam u) / sqrt(u^2 - |x-y|^2) du``.

    With ``u = |x - y| cosh(theta)`` the integrand is smooth.
    """
    if not (lam >= 0 and x > 0 and y > 0):
        raise DomainError("need lam >= 0 and x, y > 0")
    gap = abs(x - y)
    if gap == 0.0:
        raise SingularityError("G_D is log-singular at x = y")
    if lam == 0:
        return math.acosh((x + y) / gap) / math.pi
    top = _axis_theta_max(lam, gap, x + y)
    val = integrate_finite(lambda th: math.exp(-lam * gap * math.cosh(th)), 0.0, top, _SPEC)
    return val / math.pi


def green_lambda_axis_vec(lam: float, x, y):
    """Vectorized ``green_lambda_axis`` by a 200-node Gauss-Legendre rule in ``theta``."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    gap = np.abs(x - y)
    if np.any(gap == 0) or np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("need x, y > 0 and x != y")
    top = np.arccosh((x + y) / gap)
    if lam > 0:
        top = np.minimum(top, np.arccosh(1.0 + 50.0 / (lam * gap)))
    half = 0.5 * top
    th = half[..., None] * (_GL_X + 1.0)
    vals = np.exp(-lam * gap[..., None] * np.cosh(th)) @ _GL_W
    return half * vals / math.pi


def poisson_kernel_lambda(lam: float, p, w):
    """``E^p[e^(-lam^2 T/2); W_T-exit at (w, 0)]/dw``, ``T`` the first zero of ``W`` (VAR1T).

    ``lam |x2| K_1(lam d) / (pi d)`` with ``d = |p - (w, 0)|``; Cauchy at ``lam = 0``.
    """
    x1, x2 = as_point(p)
    a = abs(x2)
    w = np.asarray(w, dtype=float)
    d = np.hypot(x1 - w, a)
    if lam == 0:
        out = a / (math.pi * d * d)
    else:
        out = lam * a * special.k1e(lam * d) * np.exp(-lam * d) / (math.pi * d)
    return out[()] if out.ndim == 0 else out


def _offaxis_knots(x1, a, y):
    knots = {0.0, y} | {x1 + k * a for k in (-8, -2, -0.5, 0, 0.5, 2, 8)}
    return sorted(k for k in knots if k >= 0.0)


@tagged("lGreen1", VAR1T)
def green_lambda_offaxis(lam: float, p, y: float) -> float:
    """``G_D(p, (y, 0))`` for ``p`` off the axis and ``y > 0``.

    The path first meets the horizontal axis (Poisson kernel with killing);
    only hits on the positive half contribute, through ``green_lambda_axis``.
    """
    x1, x2 = as_point(p)
    if x2 == 0.0:
        raise DomainError("p must be off the axis")
    if not (lam > 0 and y > 0):
        raise DomainError("need lam > 0 and y > 0")
    a = abs(x2)

    def f(w):
        if w == y:
            return 0.0
        # fixed Gauss rule for the inner integral; it matches the adaptive one to ~1e-11
        return float(poisson_kernel_lambda(lam, (x1, a), w)) * float(green_lambda_axis_vec(lam, w, y))

    knots = _offaxis_knots(x1, a, y)
    total = sum(integrate_finite(f, lo, hi, _SPEC) for lo, hi in zip(knots[:-1], knots[1:]))
    return total + integrate_semiinf(f, knots[-1], _SPEC, scale=max(a, 1.0 / lam))


@tagged("lGreen0", VAR1T)
def green_lambda_general(lam: float, p, q, n_outer: int = 256) -> float:
    """``G_D(p, q)`` for ``p`` and ``q`` both off the axis.

    Half-plane part (points on the same side) plus the contribution of paths that
    reach the positive axis first: ``int P(p, w) G_D((w, 0), q) dw``. Both
    axis integrals use fixed Gauss rules in the Cauchy angle (about 1e-8 relative).
    """
    p, q = as_point(p), as_point(q)
    if p.y == 0.0 or q.y == 0.0:
        raise DomainError("p and q must be off the axis")
    if not lam > 0:
        raise DomainError("lam must be positive")
    direct = green_halfplane_lambda(0.5 * lam * lam, p, q, VAR1T) if p.y * q.y > 0 else 0.0
    if abs(p.y) > abs(q.y):
        # sweep from the point nearer the axis: G_D((w, 0), far point) is smooth in w,
        # while near the axis it has a log peak the outer rule would miss
        p, q = q, p
    # first axis hit of p at w = p1 + |p2| tan(phi): P(p, w) dw = lam d K_1(lam d)/pi dphi
    a = abs(p.y)
    lo = math.atan(-p.x / a)
    g, gw = np.polynomial.legendre.leggauss(n_outer)
    phi = lo + 0.5 * (0.5 * math.pi - lo) * (g + 1.0)
    dphi = 0.5 * (0.5 * math.pi - lo) * gw
    d = a / np.cos(phi)
    w = p.x + a * np.tan(phi)
    weight = lam * d * special.k1e(lam * d) * np.exp(-lam * d) / math.pi * dphi
    through_axis = 0.0
    for wi, c in zip(w, weight):
        if c > 0.0 and wi > 0.0:
            through_axis += c * _green_offaxis_fast(lam, q.x, q.y, wi)
    return direct + through_axis


@tagged("tkilled1", VAR1T)
def killed_density_axis(t, x, y):
    """Transition density of the killed process between axis points ``x, y > 0``.

    ``e^(-(x-y)^2/2t) / (sqrt2 (pi t)^(3/2)) int_0^{2 sqrt(xy)} e^(-u^2/2t) du``; the
    inner integral is ``sqrt(pi t/2) erf(sqrt(2 x y / t))``.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(t <= 0) or np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("need t, x, y > 0")
    inner = np.sqrt(0.5 * math.pi * t) * special.erf(np.sqrt(2.0 * x * y / t))
    out = np.exp(-((x - y) ** 2) / (2.0 * t)) / (math.sqrt(2.0) * (math.pi * t) ** 1.5) * inner
    return out[()] if out.ndim == 0 else out


def _vertical_hit_var1t(s, a, d2):
    """``(a/s) e^(-d^2/2s)/(2 pi s)``: time-place density of the first zero of ``W``."""
    return a / s * math.exp(-d2 / (2.0 * s)) / (2.0 * math.pi * s)


@tagged("tkilled1-offaxis", VAR1T)
def killed_density_offaxis(t: float, p, y: float) -> float:
    """Killed density from ``p`` (off the axis) to the axis point ``(y, 0)``.

    ``int_0^inf int_0^t p_D(t - s; w, y) g(s, w) ds dw`` with ``g`` the first-zero
    density of ``W`` from ``p``.
    """
    x1, x2 = as_point(p)
    if x2 == 0.0:
        raise DomainError("p must be off the axis")
    if not (t > 0 and y > 0):
        raise DomainError("need t > 0 and y > 0")
    a = abs(x2)
    spec = QuadSpec(abs_tol=1e-14, rel_tol=1e-9, max_depth=200, tail_cut=1e-10)

    def in_w(s):
        if s <= 0.0 or s >= t:
            return 0.0
        r = t - s
        width = math.sqrt(r)

        def f(w):
            return float(killed_density_axis(r, w, y)) * _vertical_hit_var1t(s, a, (x1 - w) ** 2 + a * a)

        knots = sorted({0.0} | {k for k in (y - 8 * width, y, y + 8 * width, x1) if k > 0})
        val = sum(integrate_finite(f, lo, hi, spec) for lo, hi in zip(knots[:-1], knots[1:]))
        return val + integrate_semiinf(f, knots[-1], spec, scale=max(width, math.sqrt(s)))

    return integrate_finite(in_w, 0.0, t, spec, endpoint=Endpoint.SQRT_RIGHT)


# --- logarithmic Green functions (lam = 0) ------------------------------------


@tagged("Cauchy-halfline-green")
def cauchy_halfline_green(v, y):
    """``(2/pi) ln((sqrt v + sqrt y)/sqrt|v - y|)``."""
    v = np.asarray(v, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(v <= 0) or np.any(y <= 0):
        raise DomainError("need v, y > 0")
    if np.any(v == y):
        raise SingularityError("log-singular at v = y")
    out = 2.0 / math.pi * np.log((np.sqrt(v) + np.sqrt(y)) / np.sqrt(np.abs(v - y)))
    return out[()] if out.ndim == 0 else out


@tagged("GfD2")
def green_log_axis(y: float, p, prefactor: float = GFD2_CONSTANT) -> float:
    """``G_D((y, 0), p) = c int_0^inf |x2|/(x2^2 + (x1 - z)^2) ln((sqrt z + sqrt y)/sqrt|z - y|) dz``.

    ``c = GFD2_CONSTANT``; ``GFD2_HALF_CONSTANT`` is half of it and
    can be passed for comparison. Split at ``z = y`` with a log change of variables
    on both sides. On the positive axis the value is ``cauchy_halfline_green``.
    """
    x1, x2 = as_point(p)
    if not y > 0:
        raise DomainError("y must be positive")
    if x2 == 0.0:
        if x1 <= 0:
            return 0.0
        return prefactor / GFD2_CONSTANT * float(cauchy_halfline_green(x1, y))
    a = abs(x2)

    def f(z):
        if z <= 0.0 or z == y:
            return 0.0
        return a / (a * a + (x1 - z) ** 2) * math.log((math.sqrt(z) + math.sqrt(y)) / math.sqrt(abs(z - y)))

    # log change of variables next to z = y, plain rule across the Cauchy bump
    knots = {0.0, y, 2.0 * y} | {x1 + k * a for k in (-20, -2, 0, 2, 20)}
    knots = sorted(k for k in knots if k >= 0.0)
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        end = Endpoint.LOG_RIGHT if hi == y else Endpoint.LOG_LEFT if lo == y else Endpoint.NONE
        total += integrate_finite(f, lo, hi, _SPEC, endpoint=end)
    total += integrate_semiinf(f, knots[-1], _SPEC, scale=max(y, a))
    return prefactor * total


@tagged("Greenfact")
def greenfact(p, y: float) -> float:
    """``E^p[G(V, y); V > 0]`` with ``V`` the first axis hit and ``G = cauchy_halfline_green``.

    The hit is parametrized by its Cauchy angle, ``V = x1 + |x2| tan(phi)``, so
    the harmonic measure becomes ``dphi / pi`` on ``(phi_0, pi/2)``.
    """
    x1, x2 = as_point(p)
    if not y > 0:
        raise DomainError("y must be positive")
    if x2 == 0.0:
        if x1 <= 0:
            raise DomainError("p lies on the slit")
        return float(cauchy_halfline_green(x1, y))
    a = abs(x2)
    lo = math.atan(-x1 / a)
    hit = math.atan((y - x1) / a)  # angle where V = y (log singularity)

    def f(phi):
        v = x1 + a * math.tan(phi)
        if v <= 0.0 or v == y:
            return 0.0
        return float(cauchy_halfline_green(v, y))

    total = integrate_finite(f, lo, hit, _SPEC, endpoint=Endpoint.LOG_RIGHT)
    total += integrate_finite(f, hit, 0.5 * math.pi, _SPEC, endpoint=Endpoint.LOG_LEFT)
    return total / math.pi


@tagged("GfD1")
def green_log_from_vertical(y: float, p) -> float:
    """``G_D((0, y), p)`` by sweeping out the log potential.

    ``(1/2pi) int_{-inf}^0 ln(|(z, 0) - p|^2 / |(0, y) - p|^2) h((0, y), z) dz``
    with ``h`` the exit density of the slit domain.
    """
    x1, x2 = as_point(p)
    if not y > 0:
        raise DomainError("y must be positive")
    if x1 <= 0 and x2 == 0.0:
        return 0.0
    d0 = x1 * x1 + (x2 - y) ** 2
    if d0 == 0.0:
        raise SingularityError("p coincides with the pole (0, y)")
    start = (0.0, y)

    def f(u):
        # z = -u^2 removes the 1/sqrt(-z) endpoint behaviour
        z = -u * u
        return math.log(((z - x1) ** 2 + x2 * x2) / d0) * float(hit_place_density(start, z)) * 2.0 * u

    # a pole of the log sits at u = sqrt(-x1) when p is close to the slit
    knots = [0.0]
    if x1 < 0:
        knots.append(math.sqrt(-x1))
    total = 0.0
    for lo, hi in zip(knots, knots[1:]):
        total += integrate_finite(f, lo, hi, _SPEC)
    total += integrate_semiinf(f, knots[-1], _SPEC, scale=max(1.0, math.sqrt(y)))
    return total / (2.0 * math.pi)


# --- gauge mass identity --------------------------------------------------------


def gauge_mass_integral(y: float, z: float, lam: float, n_radial: int = 48, n_angle: int = 48) -> float:
    """``(lam^2/2) int_D G_D((y, 0), p) h(p, z) dp`` by product Gauss rules.

    Polar coordinates around ``(y, 0)`` cancel the log singularity of ``G_D``;
    the radius is mapped by ``rho = R u/(1 - u)``. Accuracy is of order 1e-4,
    enough for the identity check it serves.
    """
    if not (y > 0 > z and lam > 0):
        raise DomainError("need y > 0 > z and lam > 0")
    ur, wr = np.polynomial.legendre.leggauss(n_radial)
    ua, wa = np.polynomial.legendre.leggauss(n_angle)
    scale = 1.0 / lam
    u = 0.5 * (ur + 1.0)
    rho = scale * u / (1.0 - u)
    drho = 0.5 * wr * scale / (1.0 - u) ** 2
    # upper half only; the integrand is even in x2
    phi = 0.5 * math.pi * (ua + 1.0)
    dphi = 0.5 * math.pi * wa
    total = 0.0
    for r, dr in zip(rho, drho):
        for ph, dp in zip(phi, dphi):
            x1 = y + r * math.cos(ph)
            x2 = r * math.sin(ph)
            if x2 <= 0.0:
                continue
            g = _green_offaxis_fast(lam, x1, x2, y)
            total += g * float(hit_place_density((x1, x2), z)) * r * dr * dp
    return 0.5 * lam * lam * 2.0 * total


def _green_offaxis_fast(lam, x1, x2, y, n=400):
    """Lower-accuracy ``green_lambda_offaxis`` on a fixed mapped Gauss rule."""
    a = abs(x2)
    # Cauchy-angle map w = x1 + a tan(phi) concentrates nodes on the Poisson bump
    lo = math.atan(-x1 / a)
    hit = math.atan((y - x1) / a)
    out = 0.0
    for left, right in ((lo, hit), (hit, 0.5 * math.pi)):
        g, gw = np.polynomial.legendre.leggauss(n // 2)
        # cluster nodes towards the log singularity at ``hit``
        t = 0.5 * (g + 1.0)
        if left == lo:
            s = 1.0 - (1.0 - t) ** 2
            ds = 2.0 * (1.0 - t)
        else:
            s = t * t
            ds = 2.0 * t
        ang = left + (right - left) * s
        jac = (right - left) * ds * 0.5 * gw
        w = x1 + a * np.tan(ang)
        keep = (w > 0) & (w != y) & (ang < 0.5 * math.pi)
        w, ang, jac = w[keep], ang[keep], jac[keep]
        dw = a / np.cos(ang) ** 2
        pk = poisson_kernel_lambda(lam, (x1, a), w)
        out += float(np.sum(pk * green_lambda_axis_vec(lam, w, y) * dw * jac))
    return out
