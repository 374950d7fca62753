"""Modified Bessel functions of the first and third kind (Macdonald functions).

``bessel_k`` evaluates the Macdonald integral

    K_nu(z) = 2^(-nu-1) z^nu int_0^inf exp(-t - z^2/(4t)) t^(-nu-1) dt

after the change of variables ``t = (z/2) e^u``, which turns it into
``int_0^inf exp(-z cosh u) cosh(nu u) du``; the integrand is then smooth and
doubly-exponentially decaying. The series for ``I_nu``, the reflection formula
``pi/(2 sin nu pi) (I_{-nu} - I_nu)``, the half-integer finite sum and the
``int_1^inf`` representation are kept as independent evaluators for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .conventions import tagged
from .errors import DomainError, RangeError
from .quadrature import QuadSpec, integrate_finite

__all__ = [
    "BesselOrder",
    "bessel_i",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k_half",
    "bessel_k_reflection",
    "bessel_k_poisson",
]

MAX_ORDER = 50.0
_SPEC = QuadSpec(abs_tol=1e-300, rel_tol=1e-13, max_depth=200, tail_cut=1e-14)


@dataclass(frozen=True)
class BesselOrder:
    nu: float

    def __post_init__(self):
        if not abs(self.nu) < MAX_ORDER:
            raise RangeError(f"|nu| must be below {MAX_ORDER}")

    @property
    def is_half_integer(self) -> bool:
        return (2.0 * self.nu) % 2.0 == 1.0

    @property
    def is_integer(self) -> bool:
        return float(self.nu).is_integer()


@tagged("I_definition")
def bessel_i(nu: float, z: float) -> float:
    """Power series for ``I_nu(z)``, ``z >= 0``.

    Negative integer orders are reflected to ``|nu|``. Summation stops once a
    term falls below ``1e-17`` of the partial sum.
    """
    BesselOrder(nu)
    if z < 0:
        raise DomainError("bessel_i needs z >= 0")
    if float(nu).is_integer() and nu < 0:
        nu = -nu
    if z == 0:
        if nu == 0:
            return 1.0
        if nu > 0:
            return 0.0
        raise RangeError("I_nu(0) is unbounded for negative non-integer nu")
    if z > 700.0:
        raise RangeError("bessel_i series limited to z <= 700")
    half = 0.5 * z
    q = half * half
    g0 = nu + 1.0
    term = 0.0 if (g0 <= 0 and g0.is_integer()) else 1.0 / math.gamma(g0)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if k > q and abs(term) <= 1e-17 * abs(total):
            break
        if k > 5000:
            raise RangeError("bessel_i series did not converge")
    # (z/2)^nu in logs: z/2 itself underflows for the smallest subnormal z
    log_pref = nu * (math.log(z) - math.log(2.0))
    if log_pref > 709.0:
        raise RangeError("I_nu(z) overflows")
    return math.exp(log_pref) * total


def _k_cosh_integral(nu: float, z: float) -> float:
    """``exp(z) * int_0^inf exp(-z cosh u) cosh(nu u) du``."""
    nu = abs(nu)

    def log_env(u):
        return -z * (math.cosh(u) - 1.0) + nu * u

    peak = math.asinh(nu / z)
    # truncate once the envelope is e^-45 below its peak
    floor = log_env(peak) - 45.0
    u_max = max(1.0, 2.0 * peak)
    while log_env(u_max) > floor:
        u_max *= 1.5

    def f(u):
        e = -z * (math.cosh(u) - 1.0)
        return 0.5 * (math.exp(e + nu * u) + math.exp(e - nu * u))

    return integrate_finite(f, 0.0, u_max, _SPEC, points=[peak] if peak > 0 else None)


@tagged("Macdonald")
def bessel_k(nu: float, z: float) -> float:
    """Macdonald function ``K_nu(z)`` for real order and ``z > 0``."""
    BesselOrder(nu)
    if not z > 0:
        raise DomainError("bessel_k needs z > 0")
    if z > 700.0:
        return 0.0 if z > 745.0 else bessel_k_scaled(nu, z) * math.exp(-z)
    return _k_cosh_integral(nu, z) * math.exp(-z)


def bessel_k_scaled(nu: float, z: float) -> float:
    """``exp(z) K_nu(z)``; finite for large ``z``."""
    BesselOrder(nu)
    if not z > 0:
        raise DomainError("bessel_k needs z > 0")
    return _k_cosh_integral(nu, z)


@tagged("Kn12")
def bessel_k_half(n: int, z: float) -> float:
    """Finite-sum closed form of ``K_{n+1/2}(z)``."""
    if int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    if not z > 0:
        raise DomainError("bessel_k_half needs z > 0")
    n = int(n)
    s = sum(
        math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k) * (2.0 * z) ** k)
        for k in range(n + 1)
    )
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * s


@tagged("K_definition1")
def bessel_k_reflection(nu: float, z: float) -> float:
    """``pi/(2 sin nu pi) (I_{-nu}(z) - I_nu(z))``; non-integer ``nu`` only.

    Loses accuracy to cancellation near integer orders and for large ``z``.
    """
    if float(nu).is_integer():
        raise DomainError("reflection formula undefined at integer order")
    return math.pi / (2.0 * math.sin(nu * math.pi)) * (bessel_i(-nu, z) - bessel_i(nu, z))


@tagged("Macdonald0")
def bessel_k_poisson(nu: float, z: float) -> float:
    """``(z/2)^nu Gamma(1/2)/Gamma(nu+1/2) int_1^inf exp(-zt)(t^2-1)^(nu-1/2) dt``.

    Requires ``nu > -1/2``. Evaluated with ``t = cosh v``, which removes the
    endpoint singularity at ``t = 1``.
    """
    if not nu > -0.5:
        raise DomainError("representation needs nu > -1/2")
    if not z > 0:
        raise DomainError("bessel_k_poisson needs z > 0")
    p = 2.0 * nu

    def f(v):
        sh = math.sinh(v)
        if sh == 0.0:
            return 1.0 if p == 0 else 0.0
        return math.exp(-z * (math.cosh(v) - 1.0) + p * math.log(sh))

    def log_f(v):
        return -z * (math.cosh(v) - 1.0) + p * math.log(math.sinh(v))

    peak = math.acosh((p + math.sqrt(p * p + 4.0 * z * z)) / (2.0 * z)) if p > 0 else 0.0
    floor = (log_f(peak) if p > 0 else 0.0) - 45.0
    v_max = max(1.0, 2.0 * peak)
    while log_f(v_max) > floor:
        v_max *= 1.5
    integral = integrate_finite(f, 0.0, v_max, _SPEC, points=[peak] if peak > 0 else None)
    log_pref = nu * math.log(0.5 * z) + math.lgamma(0.5) - math.lgamma(nu + 0.5) - z
    return math.exp(log_pref) * integral
