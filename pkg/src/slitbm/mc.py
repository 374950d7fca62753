"""Monte Carlo oracle for the slit domain.

Paths of ``(B, W)`` are advanced by Euler steps over blocks of paths; block ``k``
draws from ``SeedSequence([seed, k])``, so the output does not depend on how
blocks are spread over worker processes. A zero of ``W`` inside a step is
detected by a sign change or, for endpoints of equal sign, by the Brownian
bridge crossing probability ``exp(-2 w0 w1 / (sigma2 dt))``. At a crossing the
horizontal coordinate is interpolated linearly; the path is absorbed iff it is
``<= 0`` there.

Steps grow with the distance ``d`` to the slit, ``dt = max(step, eps d^2/sigma2)``.
Within ``10 sqrt(sigma2 step)`` of the tip the floor is lowered to
``TIP_FLOOR * step`` so that the step keeps scaling with the distance to the tip.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError
from .slit import HitSample, as_point, in_domain, sample_hit_place_exact

__all__ = [
    "MCConfig",
    "MCEstimate",
    "HitRecords",
    "simulate_hits",
    "complete_places",
    "estimate_survival",
    "estimate_gauge",
    "estimate_window_density",
    "estimate_occupation",
    "ks_statistic",
    "wilson_interval",
    "block_streams",
    "worker_count",
]

WORKERS_ENV = "SLITBM_WORKERS"
TIP_FLOOR = 1e-6  # smallest step near the tip, relative to ``step``


@dataclass(frozen=True)
class MCConfig:
    paths: int = 100_000
    step: float = 1e-4
    horizon: float = 50.0
    seed: int = 0
    sigma2: float = 2.0
    drift_mu: float = 0.0
    eps: float = 0.01
    block: int = 4096
    workers: int | None = None

    def __post_init__(self):
        if self.paths < 1:
            raise DomainError("paths must be >= 1")
        if not (self.step > 0 and self.horizon > 0 and self.step <= self.horizon):
            raise DomainError("need 0 < step <= horizon")
        if self.sigma2 not in (1.0, 2.0):
            raise DomainError("sigma2 must be 1 or 2")
        if self.drift_mu < 0:
            raise DomainError("drift_mu must be >= 0")
        if not 0 < self.eps < 1:
            raise DomainError("eps must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")


@dataclass
class MCEstimate:
    value: float
    std_error: float
    n: int
    ci95: tuple
    seed: int | None = None

    def within(self, target: float, k: float = 3.0) -> bool:
        """``|value - target| <= k * std_error``."""
        return abs(self.value - target) <= k * self.std_error

    def to_dict(self):
        return asdict(self)


@dataclass
class HitRecords:
    """Per-path outcome; censored paths have ``nan`` time and place."""

    time: np.ndarray
    place: np.ndarray
    censored: np.ndarray
    horizon: float
    occupation: np.ndarray | None = field(default=None, repr=False)
    last: np.ndarray | None = field(default=None, repr=False)  # (n, 2) position at the horizon, nan if hit

    @property
    def n(self) -> int:
        return len(self.time)

    @property
    def hits(self) -> HitSample:
        keep = ~self.censored
        return HitSample(s=self.time[keep], z=self.place[keep])

    def __iter__(self):
        h = self.hits
        for s, z in zip(h.s, h.z):
            yield HitSample(s=float(s), z=float(z))

    def write_csv(self, fh, meta: dict | None = None, precision: int = 9):
        for key, val in (meta or {}).items():
            fh.write(f"# {key}: {val}\n")
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["path_id", "hit_time", "hit_place", "censored"])
        fmt = f"{{:.{precision}g}}"
        for i, (s, z, c) in enumerate(zip(self.time, self.place, self.censored)):
            out.writerow([i, fmt.format(s), fmt.format(z), int(c)])


def worker_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def block_streams(seed: int, n_blocks: int):
    """One independent generator per block: ``SeedSequence([seed, k])``."""
    return [np.random.default_rng(np.random.SeedSequence([seed, k])) for k in range(n_blocks)]


def _distance_to_slit(x, w):
    return np.where(x > 0, np.hypot(x, w), np.abs(w))


def _distance_to_cell(x, w, cell):
    (x0, x1), (w0, w1) = cell
    dx = np.maximum(np.maximum(x0 - x, x - x1), 0.0)
    dw = np.maximum(np.maximum(w0 - w, w - w1), 0.0)
    return np.hypot(dx, dw)


def _run_block(args):
    cfg, start, k, n, cell, rate = args
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, k]))
    sig = math.sqrt(cfg.sigma2)
    tip = 10.0 * math.sqrt(cfg.sigma2 * cfg.step)
    drift = 2.0 * cfg.drift_mu
    x = np.full(n, start[0])
    w = np.full(n, start[1])
    t = np.zeros(n)
    ids = np.arange(n)
    time = np.full(n, np.nan)
    place = np.full(n, np.nan)
    censored = np.zeros(n, dtype=bool)
    last = np.full((n, 2), np.nan)
    occ = np.zeros(n) if cell is not None else None
    while ids.size:
        d = _distance_to_slit(x, w)
        if cell is not None:
            d = np.minimum(d, _distance_to_cell(x, w, cell))
        dt = np.maximum(cfg.step, cfg.eps * d * d / cfg.sigma2)
        r = np.hypot(x, w)
        # near the tip the floor would blur the hit place on the scale of one step
        dt = np.where(r < tip, np.maximum(cfg.eps * r * r / cfg.sigma2, cfg.step * TIP_FLOOR), dt)
        dt = np.minimum(dt, cfg.horizon - t)
        root = np.sqrt(dt)
        dx = sig * root * rng.standard_normal(ids.size) - drift * dt
        dw = sig * root * rng.standard_normal(ids.size)
        u = rng.random(ids.size)
        if occ is not None:
            (a0, a1), (b0, b1) = cell
            inside = (x >= a0) & (x <= a1) & (w >= b0) & (w <= b1)
            occ[ids] += np.where(inside, np.exp(-rate * t) * dt, 0.0)
        x1 = x + dx
        w1 = w + dw
        prod = w * w1
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            p_bridge = np.exp(-2.0 * prod / (cfg.sigma2 * dt))
            denom = np.abs(w) + np.abs(w1)
            frac = np.where(denom > 0, np.abs(w) / denom, 0.0)
        cross = (prod <= 0) | (u < p_bridge)
        xc = x + frac * dx
        hit = cross & (xc <= 0)
        if hit.any():
            hi = ids[hit]
            time[hi] = t[hit] + frac[hit] * dt[hit]
            place[hi] = xc[hit]
        t = t + dt
        done = hit | (t >= cfg.horizon * (1.0 - 1e-12))
        cut = done & ~hit
        censored[ids[cut]] = True
        last[ids[cut], 0] = x1[cut]
        last[ids[cut], 1] = w1[cut]
        keep = ~done
        ids, x, w, t = ids[keep], x1[keep], w1[keep], t[keep]
    return time, place, censored, occ, last


def _blocks(cfg):
    full, rest = divmod(cfg.paths, cfg.block)
    sizes = [cfg.block] * full + ([rest] if rest else [])
    return sizes


def _simulate(cfg: MCConfig, start, cell=None, rate=0.0) -> HitRecords:
    start = as_point(start)
    if not in_domain(start):
        raise DomainError("start lies on the slit")
    jobs = [(cfg, tuple(start), k, n, cell, rate) for k, n in enumerate(_blocks(cfg))]
    nw = min(worker_count(cfg.workers), len(jobs))
    if nw > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            parts = list(pool.map(_run_block, jobs))
    else:
        parts = [_run_block(j) for j in jobs]
    time = np.concatenate([p[0] for p in parts])
    place = np.concatenate([p[1] for p in parts])
    cens = np.concatenate([p[2] for p in parts])
    occ = np.concatenate([p[3] for p in parts]) if cell is not None else None
    last = np.concatenate([p[4] for p in parts])
    return HitRecords(time, place, cens, cfg.horizon, occ, last)


def simulate_hits(cfg: MCConfig, start) -> HitRecords:
    """Simulate ``cfg.paths`` paths from ``start`` until they hit the slit or the horizon."""
    return _simulate(cfg, start)


def complete_places(records: HitRecords, seed: int = 0) -> np.ndarray:
    """Hit places of every path, censored ones finished by the exact sampler.

    By the strong Markov property a path cut at the horizon hits the slit where a
    fresh path from its last position would, so the result is a sample of the full
    place marginal rather than of the place given ``tau_D < horizon``.
    """
    out = records.place.copy()
    idx = np.flatnonzero(records.censored)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 2**32 + 1]))
    for i in idx:
        out[i] = sample_hit_place_exact(tuple(records.last[i]), rng)
    return out


def wilson_interval(k: int, n: int, z: float = 1.959963984540054):
    p = k / n
    den = 1.0 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, mid - half)
    hi = 1.0 if k == n else min(1.0, mid + half)
    return (lo, hi)


def estimate_survival(cfg: MCConfig, start, t: float, records: HitRecords | None = None) -> MCEstimate:
    """Fraction of paths not absorbed by time ``t`` (Wilson interval)."""
    if not 0 < t <= cfg.horizon:
        raise DomainError("need 0 < t <= horizon")
    rec = records if records is not None else simulate_hits(cfg, start)
    alive = int(np.sum(rec.censored | (rec.time > t)))
    n = rec.n
    p = alive / n
    return MCEstimate(p, math.sqrt(max(p * (1 - p), 1.0 / n) / n), n, wilson_interval(alive, n), cfg.seed)


def _mean_estimate(vals, seed):
    n = len(vals)
    m = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(n))
    return MCEstimate(m, se, n, (m - 1.959963984540054 * se, m + 1.959963984540054 * se), seed)


def estimate_gauge(cfg: MCConfig, start, theta: float = 1.0, records: HitRecords | None = None) -> MCEstimate:
    """``E exp(-theta tau_D)``; censored paths contribute at most ``exp(-theta horizon)``, taken as 0."""
    rec = records if records is not None else simulate_hits(cfg, start)
    vals = np.where(rec.censored, 0.0, np.exp(-theta * np.nan_to_num(rec.time, nan=0.0)))
    return _mean_estimate(vals, cfg.seed)


def estimate_window_density(records: HitRecords, lo: float, hi: float, theta: float = 0.0,
                            seed: int | None = None) -> MCEstimate:
    """``E[exp(-theta tau_D); B(tau_D) in (lo, hi)] / (hi - lo)``."""
    if not lo < hi <= 0:
        raise DomainError("need lo < hi <= 0")
    ok = ~records.censored & (records.place > lo) & (records.place < hi)
    vals = np.where(ok, np.exp(-theta * np.nan_to_num(records.time, nan=0.0)), 0.0) / (hi - lo)
    return _mean_estimate(vals, seed)


def estimate_occupation(cfg: MCConfig, start, cell, rate: float) -> MCEstimate:
    """``E int_0^tau_D exp(-rate t) 1{(B, W) in cell} dt / area(cell)``.

    ``cell = ((x_lo, x_hi), (y_lo, y_hi))``; steps are held at ``cfg.step`` inside
    the cell. With ``sigma2 = 1`` and ``rate = lam^2/2`` this estimates the cell
    average of ``G_D``.
    """
    (a0, a1), (b0, b1) = cell
    if not (a0 < a1 and b0 < b1 and rate > 0):
        raise DomainError("cell must be a nondegenerate rectangle and rate > 0")
    rec = _simulate(cfg, start, cell=cell, rate=rate)
    return _mean_estimate(rec.occupation / ((a1 - a0) * (b1 - b0)), cfg.seed)


def ks_statistic(sample, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the empirical CDF and ``cdf``."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n == 0:
        raise DomainError("sample must be nonempty")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
