"""Command-line front end: ``slitbm {eval,table,mc,verify,probe}``.

Targets of ``eval`` and ``table`` are every tagged evaluator in the package,
addressed by formula id or by function name. Parameters are passed as
``--name value``; points are written ``1,0``; in ``table`` a parameter written
``lo:hi:n`` runs over ``n`` equally spaced values.
"""

from __future__ import annotations

import argparse
import inspect
import io
import itertools
import json
import sys

import numpy as np

from . import __version__, conditioned, green, hyperbolic, slit, specfun, stable
from .conventions import Convention
from .errors import ToleranceError
from .mc import (
    MCConfig,
    estimate_gauge,
    estimate_survival,
    estimate_window_density,
    simulate_hits,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _collect_targets():
    table = {}
    for mod in (slit, green, conditioned, hyperbolic, specfun, stable):
        for name in getattr(mod, "__all__", ()):
            func = getattr(mod, name)
            if callable(func) and hasattr(func, "formula"):
                table[name] = func
                table.setdefault(func.formula, func)
    table["heat_potential"] = green.heat_potential
    return table


TARGETS = _collect_targets()


def _rel_cauchy(d: int, m: float, t: float, x) -> float:
    return stable.rel_cauchy_density(stable.RelParams(d, m, t), x if isinstance(x, tuple) else (x,))


_rel_cauchy.formula = stable.rel_cauchy_density.formula
_rel_cauchy.convention = stable.rel_cauchy_density.convention
TARGETS["rel_cauchy_density"] = TARGETS["Cauchyrel"] = _rel_cauchy


def _parse_scalar(text: str, kind):
    if "," in text:
        return tuple(float(v) for v in text.split(","))
    if kind is str:
        return text
    try:
        val = float(text)
    except ValueError:
        return text
    if kind is int and val.is_integer():
        return int(val)
    return val


def _param_kinds(func):
    kinds = {}
    for name, par in inspect.signature(func).parameters.items():
        ann = par.annotation
        kinds[name] = {"int": int, "str": str, int: int, str: str}.get(ann, float)
    return kinds


def _split_pairs(extra):
    pairs = {}
    it = iter(extra)
    for key in it:
        if not key.startswith("--"):
            raise UsageError(f"expected --name, got {key!r}")
        if "=" in key:
            name, value = key[2:].split("=", 1)
            pairs[name.replace("-", "_")] = value
            continue
        try:
            pairs[key[2:].replace("-", "_")] = next(it)
        except StopIteration:
            raise UsageError(f"missing value for {key}") from None
    return pairs


def _resolve(target: str):
    func = TARGETS.get(target)
    if func is None:
        raise UsageError(f"unknown target {target!r}; see `slitbm eval --list`")
    return func


def _check_params(func, given):
    sig = inspect.signature(func)
    unknown = set(given) - set(sig.parameters)
    if unknown:
        raise UsageError(f"unknown parameter(s) {sorted(unknown)} for {func.__name__}")
    missing = [n for n, p in sig.parameters.items() if p.default is inspect.Parameter.empty and n not in given]
    if missing:
        raise UsageError(f"missing parameter(s) {missing} for {func.__name__}")


def _convention(func, params) -> str:
    if "convention" in params:
        return Convention(params["convention"]).value
    return func.convention.value


def _fmt(v, precision):
    return f"{float(v):.{precision}g}"


def _evaluate(func, params):
    try:
        return float(func(**params))
    except ToleranceError as exc:
        print(f"# warning: {exc}", file=sys.stderr)
        return float(exc.estimate)


def cmd_eval(ns, extra, out):
    if ns.list:
        for name in sorted(TARGETS):
            f = TARGETS[name]
            out.write(f"{name}\t{f.formula}\t{f.convention.value}\t{inspect.signature(f)}\n")
        return EXIT_OK
    if ns.target is None:
        raise UsageError("eval needs a target")
    func = _resolve(ns.target)
    kinds = _param_kinds(func)
    raw = _split_pairs(extra)
    _check_params(func, raw)
    params = {k: _parse_scalar(v, kinds[k]) for k, v in raw.items()}
    value = _evaluate(func, params)
    conv = _convention(func, params)
    if ns.output == "json":
        rec = {"target": ns.target, "formula": func.formula, "convention": conv, "params": params,
               "value": float(_fmt(value, ns.precision)), "version": __version__}
        out.write(json.dumps(rec) + "\n")
    else:
        args = " ".join(f"{k}={raw[k]}" for k in raw)
        out.write(f"# formula={func.formula} convention={conv} target={ns.target} {args}\n")
        out.write(_fmt(value, ns.precision) + "\n")
    return EXIT_OK


def _grid(text):
    lo, hi, n = text.split(":")
    n = int(n)
    if n < 1:
        raise UsageError("grid size must be >= 1")
    return np.linspace(float(lo), float(hi), n).tolist()


def cmd_table(ns, extra, out):
    func = _resolve(ns.target)
    kinds = _param_kinds(func)
    raw = _split_pairs(extra)
    _check_params(func, raw)
    axes = {}
    for k, v in raw.items():
        if v.count(":") == 2:
            axes[k] = _grid(v)
        else:
            axes[k] = [_parse_scalar(v, kinds[k])]
    names = list(axes)
    out.write(f"# slitbm {__version__}\n# target: {ns.target}\n# formula: {func.formula}\n")
    for k in names:
        out.write(f"# {k}: {raw[k]}\n")
    out.write(",".join(names + ["value", "convention"]) + "\n")
    for combo in itertools.product(*(axes[k] for k in names)):
        params = dict(zip(names, combo))
        try:
            value = _fmt(_evaluate(func, params), ns.precision)
        except (ValueError, ArithmeticError):
            value = "nan"
        cells = [
            ";".join(_fmt(c, ns.precision) for c in v) if isinstance(v, tuple) else
            (_fmt(v, ns.precision) if isinstance(v, (int, float)) else str(v))
            for v in combo
        ]
        out.write(",".join(cells + [value, _convention(func, params)]) + "\n")
    return EXIT_OK


def _mc_config(ns):
    return MCConfig(paths=ns.paths, step=ns.step, horizon=ns.horizon, seed=ns.seed, sigma2=ns.sigma2,
                    drift_mu=ns.drift_mu, eps=ns.eps, workers=ns.workers)


def cmd_mc(ns, extra, out):
    if extra:
        raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
    cfg = _mc_config(ns)
    start = _parse_scalar(ns.start, float)
    if not isinstance(start, tuple) or len(start) != 2:
        raise UsageError("--start must be a point such as 1,0")
    meta = {"slitbm": __version__, "experiment": ns.experiment, "start": ns.start,
            "convention": "VAR2T" if cfg.sigma2 == 2.0 else "VAR1T", **_cfg_dict(cfg)}
    rec = simulate_hits(cfg, start)
    if ns.experiment == "hits":
        rec.write_csv(out, meta=meta, precision=ns.precision)
        return EXIT_OK
    if ns.experiment == "survival":
        est = estimate_survival(cfg, start, ns.t, records=rec)
        meta["t"] = ns.t
    elif ns.experiment == "gauge":
        est = estimate_gauge(cfg, start, ns.theta, records=rec)
        meta["theta"] = ns.theta
    else:
        lo, hi = (float(v) for v in ns.window.split(","))
        est = estimate_window_density(rec, lo, hi, ns.theta, seed=cfg.seed)
        meta.update(window=ns.window, theta=ns.theta)
    meta["censored"] = int(np.sum(rec.censored))
    if ns.output == "json":
        out.write(json.dumps({"meta": meta, "estimate": est.to_dict()}, default=float) + "\n")
    else:
        for k, v in meta.items():
            out.write(f"# {k}: {v}\n")
        out.write("value,std_error,n,ci_low,ci_high\n")
        p = ns.precision
        out.write(f"{_fmt(est.value, p)},{_fmt(est.std_error, p)},{est.n},"
                  f"{_fmt(est.ci95[0], p)},{_fmt(est.ci95[1], p)}\n")
    return EXIT_OK


def _cfg_dict(cfg):
    return {k: getattr(cfg, k) for k in ("paths", "step", "horizon", "seed", "sigma2", "drift_mu", "eps")}


def cmd_verify(ns, extra, out):
    from .suites import SUITES, run_suite

    if extra:
        raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
    names = list(SUITES) if ns.suite == "all" else [ns.suite]
    ok = True
    for name in names:
        ok &= run_suite(name, ns.tol, out, seed=ns.seed, paths=ns.paths)
    out.write(f"# overall: {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_probe(ns, extra, out):
    if extra:
        raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
    if ns.calibrate:
        rep = hyperbolic.calibration_probe(ns.paths, ns.seed, n_boot=ns.boot)
    else:
        if not ns.mu > 1:
            raise UsageError("--mu must exceed 1")
        rep = hyperbolic.conjecture_probe(ns.mu, ns.y, ns.paths, ns.seed, a=ns.a, step=ns.step, n_boot=ns.boot)
    rep.meta["slitbm"] = __version__
    out.write(rep.to_json() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slitbm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"slitbm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--precision", type=int, default=9, help="significant digits (default 9)")
        if output:
            p.add_argument("--output", choices=("csv", "json"), default="csv")

    p = sub.add_parser("eval", help="evaluate one formula at one point")
    p.add_argument("target", nargs="?")
    p.add_argument("--list", action="store_true", help="list targets and exit")
    common(p)
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("table", help="tabulate a formula over a grid (lo:hi:n)")
    p.add_argument("target")
    common(p, output=False)
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("mc", help="Monte Carlo experiments")
    p.add_argument("experiment", choices=("hits", "survival", "gauge", "window"))
    p.add_argument("--start", default="1,0")
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--horizon", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma2", type=float, default=2.0, choices=(1.0, 2.0))
    p.add_argument("--drift-mu", type=float, default=0.0)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--t", type=float, default=1.0, help="time for `survival`")
    p.add_argument("--theta", type=float, default=1.0, help="killing rate for `gauge` and `window`")
    p.add_argument("--window", default="-1.1,-0.9", help="place window lo,hi for `window`")
    common(p)
    p.set_defaults(run=cmd_mc)

    p = sub.add_parser("verify", help="run an invariant suite; exit 0 iff all checks pass")
    p.add_argument("--suite", default="kernels")
    p.add_argument("--tol", type=float, default=None, help="override the tolerance of deterministic checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int, default=20_000, help="paths for Monte Carlo checks")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("probe", help="dependence report for the exponential functional and the exit place")
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--y", type=float, default=1.0)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=0.005)
    p.add_argument("--boot", type=int, default=200)
    p.add_argument("--calibrate", action="store_true", help="run on independent synthetic inputs")
    p.set_defaults(run=cmd_probe)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        ns, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if ns.command not in ("eval", "table") and extra:
        parser.print_usage(sys.stderr)
        print(f"slitbm: error: unrecognized arguments: {' '.join(extra)}", file=sys.stderr)
        return EXIT_USAGE
    if ns.command == "verify":
        from .suites import SUITES

        if ns.suite != "all" and ns.suite not in SUITES:
            print(f"slitbm: error: unknown suite {ns.suite!r}; choose from {', '.join(SUITES)}, all",
                  file=sys.stderr)
            return EXIT_USAGE
    try:
        return ns.run(ns, extra, out)
    except UsageError as exc:
        print(f"slitbm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"slitbm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


def capture(argv) -> tuple[int, str]:
    """Run the CLI in-process and return ``(exit code, stdout text)``."""
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    main()
