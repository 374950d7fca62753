"""Drifted slit hitting, hyperbolic exit laws and the exponential functional.

Everything here is VAR2T: ``B`` has ``E B(t)^2 = 2t`` and the drifted process is
``B(t) - 2 mu t``. Under this normalization the first time ``B - 2 mu t`` falls
by ``a`` has density ``g_a(s) e^(mu a - mu^2 s)``, and ``E exp(2 B(s)) = e^(4s)``.

The vertical coordinate of hyperbolic Brownian motion is ``X = y exp(B - 2 mu t)``.
Its exit from the plane minus the segment ``{0} x [0, a]`` maps, through the
logarithm, to the flat slit problem started from ``(ln(y/a), 0)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from .conventions import VAR2T, tagged
from .errors import DivergenceError, DomainError
from .slit import hit_place_density_axis, level_hit_density

__all__ = [
    "DriftParams",
    "drift_joint_density",
    "drift_level_density",
    "hyp_exit_joint",
    "hyp_exit_place",
    "exp_functional_mean",
    "martingale_constant",
    "sample_exp_functional",
    "DependenceReport",
    "dependence_report",
    "conjecture_probe",
    "calibration_probe",
]


@dataclass(frozen=True)
class DriftParams:
    mu: float
    y: float
    a: float | None = None

    def __post_init__(self):
        if not (self.mu > 0 and self.y > 0):
            raise DomainError("mu and y must be positive")
        if self.a is not None and not 0 < self.a < self.y:
            raise DomainError("need 0 < a < y")


@tagged("bttd10", VAR2T)
def drift_joint_density(mu: float, y: float, s, z):
    """Joint density of ``(tau_D, B(tau_D) - 2 mu tau_D)`` from ``(y, 0)``.

    ``h(y, z) g_{y-z}(s) e^(mu (y - z)) e^(-mu^2 s)``.
    """
    if mu < 0:
        raise DomainError("mu must be >= 0")
    s = np.asarray(s, dtype=float)
    z = np.asarray(z, dtype=float)
    a = y - z
    out = hit_place_density_axis(y, z) * level_hit_density(a, s) * np.exp(mu * a - mu * mu * s)
    return out[()] if np.ndim(out) == 0 else out


@tagged("g-mu", VAR2T)
def drift_level_density(mu: float, a: float, s):
    """Density of the first time ``B - 2 mu t`` falls by ``a``: ``g_a(s) e^(mu a - mu^2 s)``."""
    if mu < 0:
        raise DomainError("mu must be >= 0")
    s = np.asarray(s, dtype=float)
    out = level_hit_density(a, s) * np.exp(mu * a - mu * mu * s)
    return out[()] if np.ndim(out) == 0 else out


def _check_hyp(a, y, z):
    if not (0 < a < y):
        raise DomainError("need 0 < a < y")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(z >= a):
        raise DomainError("need 0 < z < a")
    return z


@tagged("jdensityhip", VAR2T)
def hyp_exit_joint(mu: float, a: float, y: float, s, z, drift_factor: float = 2.0):
    """Joint density of ``(X(tau), tau)`` for the exit from ``H_a``.

    ``z^-1 h(ln(y/a), ln(z/a)) g^{c mu}_{ln(y/z)}(s)`` with ``c = drift_factor``.
    The default takes ``c = 2``; ``c = 1`` is the time law of the drift
    ``B - 2 mu t`` itself. The place marginal is the same for every ``c``.
    """
    z = _check_hyp(a, y, z)
    s = np.asarray(s, dtype=float)
    place = hit_place_density_axis(math.log(y / a), np.log(z / a)) / z
    out = place * drift_level_density(drift_factor * mu, np.log(y / z), s)
    return out[()] if np.ndim(out) == 0 else out


@tagged("hyp-place")
def hyp_exit_place(a: float, y: float, z):
    """``(1/(pi z)) sqrt(ln(y/a)/ln(a/z)) / ln(y/z)`` on ``0 < z < a``; free of ``mu``."""
    z = _check_hyp(a, y, z)
    out = np.sqrt(math.log(y / a) / np.log(a / z)) / (math.pi * z * np.log(y / z))
    return out[()] if np.ndim(out) == 0 else out


@tagged("EA", VAR2T)
def exp_functional_mean(mu: float, y: float, t: float = math.inf) -> float:
    """``E A_y(t)`` with ``A_y(t) = y^2 int_0^t exp(2(B(s) - 2 mu s)) ds``.

    ``y^2 (1 - e^(4(1-mu) t)) / (4(mu - 1))``; ``y^2 t`` at ``mu = 1``.
    """
    if not (mu > 0 and y > 0 and t >= 0):
        raise DomainError("need mu > 0, y > 0, t >= 0")
    if math.isinf(t):
        if mu <= 1:
            raise DivergenceError("E A(inf) is infinite for mu <= 1")
        return y * y / (4.0 * (mu - 1.0))
    if mu == 1:
        return y * y * t
    return y * y * -math.expm1(4.0 * (1.0 - mu) * t) / (4.0 * (mu - 1.0))


def martingale_constant(mu: float) -> float:
    """``c`` with ``A_y(t) + c X_t^2`` a martingale: ``E A_1(inf) = 1/(4(mu - 1))``."""
    if not mu > 1:
        raise DivergenceError("needs mu > 1")
    return 1.0 / (4.0 * (mu - 1.0))


def truncation_horizon(mu: float, tail: float = 1e-4) -> float:
    """Time after which the remaining mean of ``A(inf)`` is a fraction ``tail`` of it."""
    if not mu > 1:
        raise DivergenceError("needs mu > 1")
    return math.log(tail) / (4.0 * (1.0 - mu))


def sample_exp_functional(mu: float, y: float, rng: np.random.Generator, paths: int = 10_000,
                          horizon: float | None = None, step: float = 0.005, tail: float = 1e-4,
                          block: int = 8192):
    """Draws of ``(A_y(T), X_T)`` by trapezoid sums over an exact Gaussian walk.

    ``horizon=None`` truncates ``A_y(inf)`` at ``truncation_horizon(mu, tail)``.
    Returns two arrays of length ``paths``.
    """
    if not (mu > 0 and y > 0 and step > 0):
        raise DomainError("need mu, y, step > 0")
    T = truncation_horizon(mu, tail) if horizon is None else float(horizon)
    n_steps = max(1, int(math.ceil(T / step)))
    dt = T / n_steps
    A = np.empty(paths)
    X = np.empty(paths)
    for lo in range(0, paths, block):
        n = min(block, paths - lo)
        expo = np.zeros(n)  # B(s) - 2 mu s
        prev = np.ones(n)
        acc = np.zeros(n)
        for _ in range(n_steps):
            expo += math.sqrt(2.0 * dt) * rng.standard_normal(n) - 2.0 * mu * dt
            cur = np.exp(2.0 * expo)
            acc += 0.5 * dt * (prev + cur)
            prev = cur
        A[lo:lo + n] = y * y * acc
        X[lo:lo + n] = y * np.exp(expo)
    return A, X


@dataclass
class DependenceReport:
    n: int
    pearson: float
    pearson_ci: tuple
    spearman: float
    spearman_ci: tuple
    null_halfwidth: float
    chi2: float
    chi2_df: int
    chi2_pvalue: float
    meta: dict

    def within_null(self) -> bool:
        """Both correlations inside ``+-1.96/sqrt(n-1)`` and the 4x4 test not rejected at 5%."""
        return (
            abs(self.pearson) <= self.null_halfwidth
            and abs(self.spearman) <= self.null_halfwidth
            and self.chi2_pvalue > 0.05
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=float)


def dependence_report(u, v, rng: np.random.Generator, n_boot: int = 200, meta: dict | None = None):
    """Pearson and Spearman correlation with bootstrap 95% intervals, plus a quartile chi-square."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = u.size
    if n < 16 or v.size != n:
        raise DomainError("need two samples of equal length >= 16")
    pear = float(np.corrcoef(u, v)[0, 1])
    spear = float(stats.spearmanr(u, v).statistic)
    bp, bs = np.empty(n_boot), np.empty(n_boot)
    for b in range(n_boot):
        idx = rng.integers(0, n, n)
        bp[b] = np.corrcoef(u[idx], v[idx])[0, 1]
        bs[b] = stats.spearmanr(u[idx], v[idx]).statistic
    qu = np.searchsorted(np.quantile(u, [0.25, 0.5, 0.75]), u, side="right")
    qv = np.searchsorted(np.quantile(v, [0.25, 0.5, 0.75]), v, side="right")
    table = np.zeros((4, 4))
    np.add.at(table, (qu, qv), 1)
    chi2, pval, df, _ = stats.chi2_contingency(table)
    return DependenceReport(
        n=n,
        pearson=pear,
        pearson_ci=tuple(np.quantile(bp, [0.025, 0.975]).tolist()),
        spearman=spear,
        spearman_ci=tuple(np.quantile(bs, [0.025, 0.975]).tolist()),
        null_halfwidth=1.959963984540054 / math.sqrt(n - 1),
        chi2=float(chi2),
        chi2_df=int(df),
        chi2_pvalue=float(pval),
        meta=dict(meta or {}),
    )


def _crossing(flat, w, db, dw, dt, u):
    """Hit flag and crossing point of one step of ``(ln(X/a), W)`` under E B^2 = 2t."""
    prod = w * (w + dw)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        bridge = np.exp(-prod / dt)  # 2 w0 w1 / (sigma2 dt) with sigma2 = 2
        denom = np.abs(w) + np.abs(w + dw)
        frac = np.where(denom > 0, np.abs(w) / denom, 0.0)
    fc = flat + frac * db
    return ((prod < 0) | ((prod > 0) & (u < bridge))) & (fc <= 0), fc


def _probe_block(mu, y, a, n, T, step, rng, exit_horizon=50.0, eps=0.01):
    n_steps = max(1, int(math.ceil(T / step)))
    dt = T / n_steps
    sd = math.sqrt(2.0 * dt)
    flat = np.full(n, math.log(y / a))  # ln(X/a)
    w = np.zeros(n)
    prev = np.ones(n)
    acc = np.zeros(n)
    exit_place = np.full(n, np.nan)
    alive = np.ones(n, dtype=bool)
    for _ in range(n_steps):
        db = sd * rng.standard_normal(n) - 2.0 * mu * dt
        dw = sd * rng.standard_normal(n)
        hit, fc = _crossing(flat, w, db, dw, dt, rng.random(n))
        hit &= alive
        exit_place[hit] = a * np.exp(fc[hit])
        alive &= ~hit
        f1 = flat + db
        cur = np.exp(2.0 * (f1 - math.log(y / a)))
        acc += 0.5 * dt * (prev + cur)
        prev = cur
        flat, w = f1, w + dw
    # A is frozen from here on; only the exit is followed, with steps that grow with the distance
    ids = np.flatnonzero(alive)
    flat, w, t = flat[ids], w[ids], np.full(ids.size, T)
    while ids.size:
        d = np.where(flat > 0, np.hypot(flat, w), np.abs(w))
        h = np.minimum(np.maximum(step, 0.5 * eps * d * d), exit_horizon - t)
        db = np.sqrt(2.0 * h) * rng.standard_normal(ids.size) - 2.0 * mu * h
        dw = np.sqrt(2.0 * h) * rng.standard_normal(ids.size)
        hit, fc = _crossing(flat, w, db, dw, h, rng.random(ids.size))
        exit_place[ids[hit]] = a * np.exp(fc[hit])
        t = t + h
        keep = ~hit & (t < exit_horizon * (1.0 - 1e-12))
        ids, flat, w, t = ids[keep], (flat + db)[keep], (w + dw)[keep], t[keep]
    return y * y * acc, exit_place


def conjecture_probe(mu: float, y: float, paths: int, seed: int, a: float | None = None,
                     step: float = 0.005, tail: float = 1e-4, n_boot: int = 200,
                     block: int = 8192, exit_horizon: float = 50.0) -> DependenceReport:
    """Dependence statistics between ``A_y(inf)`` (truncated) and ``X`` at the exit from ``H_a``.

    Both are read off one simulated path of ``(ln(X/a), W)`` started at
    ``(ln(y/a), 0)``. ``A`` is summed up to the truncation horizon; the exit is
    followed further, up to ``exit_horizon``. Paths that have not exited by then
    are dropped and counted in ``meta['not_exited']``. A report only; no verdict.
    """
    if not mu > 1:
        raise DomainError("mu must exceed 1")
    a = y / math.e if a is None else a
    DriftParams(mu, y, a)
    T = truncation_horizon(mu, tail)
    A, Xe = [], []
    for k, lo in enumerate(range(0, paths, block)):
        n = min(block, paths - lo)
        rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
        ak, xk = _probe_block(mu, y, a, n, T, step, rng, exit_horizon)
        A.append(ak)
        Xe.append(xk)
    A = np.concatenate(A)
    Xe = np.concatenate(Xe)
    ok = ~np.isnan(Xe)
    meta = {"mu": mu, "y": y, "a": a, "paths": paths, "seed": seed, "step": step,
            "horizon": T, "exit_horizon": exit_horizon, "not_exited": int(np.sum(~ok)), "convention": VAR2T.value}
    boot = np.random.default_rng(np.random.SeedSequence([seed, 2**32]))
    return dependence_report(A[ok], Xe[ok], boot, n_boot=n_boot, meta=meta)


def calibration_probe(paths: int, seed: int, n_boot: int = 200) -> DependenceReport:
    """The same statistics on independent synthetic inputs (lognormal and uniform)."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    u = rng.lognormal(size=paths)
    v = rng.random(paths)
    boot = np.random.default_rng(np.random.SeedSequence([seed, 2]))
    return dependence_report(u, v, boot, n_boot=n_boot, meta={"calibration": True, "seed": seed})
