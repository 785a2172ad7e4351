"""Command-line experiment runner.

``supou <experiment> --config cfg.json [--seed N] [--threads N] [--out DIR] [--dump-paths]``

Every run writes ``results.csv`` and ``manifest.json`` into the output
directory, plus ``plot_<experiment>_<order>.csv`` files where a series per
order makes sense.  Exit codes: 0 success, 2 invalid config, 3 a declared
tolerance (or quadrature cross-check) failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import platform
import sys
import time
from pathlib import Path
from typing import Any, Callable, Literal, Sequence

import numpy as np
import scipy
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import __version__, kernels
from .analytics import (
    QuadratureError,
    SupouSpec,
    asymptotic_constant_D,
    clt_norming,
    covariance_many,
    cumulant_report,
    exact_cumulants,
    lstar_limit,
    partial_sum_variance_exact,
    theoretical_tau,
)
from .estimate import (
    exact_moment_curve,
    fit_scaling,
    fit_scaling_ensemble,
    intermittency_check,
    k_statistics,
    normality_diagnostics,
)
from .marginals import make_family
from .simulate import replicate

EXPERIMENTS = ("cumulants", "covariance", "scaling", "clt", "constants", "simulate")
EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 2, 3

_COMMON = {"experiment", "family", "params", "lambda", "H", "k_max", "infinite", "master_seed", "output", "tolerance"}
ALLOWED_KEYS = {
    "cumulants": _COMMON | {"orders", "grid", "k_max_per_n"},
    "covariance": _COMMON | {"grid", "variance"},
    "scaling": _COMMON | {"orders", "grid", "k_max_per_n", "replications", "use_exact_moments", "dump_paths"},
    "clt": _COMMON | {"n", "replications", "bootstrap", "dump_paths"},
    "constants": _COMMON | {"orders", "hurst_values", "quadrature"},
    "simulate": _COMMON | {"n", "orders", "replications", "dump_paths"},
}
TOLERANCE_KEYS = {
    "cumulants": {"ratio_rtol", "monotone"},
    "covariance": {"lstar_atol", "slow_variation_atol", "variance_rtol"},
    "scaling": {"tau_atol", "verdict"},
    "clt": {"skewness_abs", "excess_kurtosis_abs", "ks"},
    "constants": {"d2_atol", "quadrature_rtol"},
    "simulate": {"z_max"},
}


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 2)."""


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, strict=False)

    experiment: Literal["cumulants", "covariance", "scaling", "clt", "constants", "simulate"] | None = None
    family: str = "gamma"
    params: dict[str, float] = Field(default_factory=dict)
    lam: float = Field(1.0, alias="lambda")
    H: float = 0.75
    k_max: int = 1000
    infinite: bool = True
    grid: list[int] | None = None
    orders: list[int] | None = None
    k_max_per_n: int | None = None
    replications: int | None = None
    n: int | None = None
    hurst_values: list[float] | None = None
    quadrature: bool = True
    variance: bool = True
    bootstrap: int = 500
    master_seed: int = Field(0, ge=0, lt=2**64)
    output: str | None = None
    dump_paths: bool = False
    use_exact_moments: bool = True
    tolerance: dict[str, Any] = Field(default_factory=dict)

    def echo(self, experiment: str) -> dict:
        """Config as a dict that re-validates for ``experiment`` (round trip)."""
        full = self.model_dump(by_alias=True, exclude_none=True)
        full["experiment"] = experiment
        return {k: v for k, v in full.items() if k in ALLOWED_KEYS[experiment]}


def load_config(path, experiment: str) -> ExperimentConfig:
    """Parse and validate a JSON config for ``experiment``; raises ConfigError."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    return parse_config(raw, experiment)


def parse_config(raw: Any, experiment: str) -> ExperimentConfig:
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment: {experiment}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - ALLOWED_KEYS[experiment])
    if unknown:
        raise ConfigError(f"unknown key for {experiment}: {', '.join(unknown)}")
    if raw.get("experiment", experiment) != experiment:
        raise ConfigError(f"config is for experiment {raw['experiment']!r}, not {experiment!r}")
    tol = raw.get("tolerance", {})
    if not isinstance(tol, dict):
        raise ConfigError("tolerance must be an object")
    bad = sorted(set(tol) - TOLERANCE_KEYS[experiment])
    if bad:
        raise ConfigError(f"unknown tolerance key for {experiment}: {', '.join(bad)}")
    try:
        cfg = ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        where = ".".join(str(p) for p in err["loc"])
        raise ConfigError(f"{where}: {err['msg']}") from None
    return cfg


def build_spec(cfg: ExperimentConfig) -> SupouSpec:
    # SupouSpec owns the range checks, so its messages become the reasons
    try:
        fam = make_family(cfg.family, **cfg.params)
        return SupouSpec(fam, lam=cfg.lam, hurst=cfg.H, k_max=cfg.k_max, infinite=cfg.infinite)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def _require(cfg: ExperimentConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"missing key: {name}")


def _int_grid(cfg: ExperimentConfig) -> list[int]:
    grid = cfg.grid or []
    if not grid or any(g < 1 for g in grid):
        raise ConfigError("grid must be a non-empty list of integers >= 1")
    return sorted({int(g) for g in grid})


# -- results -----------------------------------------------------------------


class Result:
    """Tabular output of one experiment plus manifest extras."""

    def __init__(self, columns: Sequence[str]):
        self.columns = tuple(columns)
        self.rows: list[dict] = []
        self.extra: dict = {}
        self.tail: dict = {}
        self.plots: dict[str, list[dict]] = {}
        self.failures: list[str] = []
        self.paths = None

    def add(self, **row) -> None:
        self.rows.append(row)

    def check(self, ok: bool, reason: str) -> None:
        if not ok:
            self.failures.append(reason)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, columns: Sequence[str], rows: Sequence[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])


PLOT_COLUMNS = ("n", "value", "stderr", "theory_value")


def emit_plotdata(experiment: str, series: dict[str, list[dict]], out_dir) -> list[Path]:
    """One CSV per (experiment, order) with columns n, value, stderr, theory_value.

    An order with no points still gets a header-only file, as does an
    experiment with no series at all.
    """
    out = Path(out_dir)
    written = []
    if not series:
        series = {"": []}
    for key in sorted(series):
        name = f"plot_{experiment}_{key}.csv" if key else f"plot_{experiment}.csv"
        rows = sorted(series[key], key=lambda r: r["n"])
        write_csv(out / name, PLOT_COLUMNS, rows)
        written.append(out / name)
    return written


# -- experiments ---------------------------------------------------------------


def _cumulants(cfg: ExperimentConfig, spec: SupouSpec, threads: int) -> Result:
    _require(cfg, "orders")
    grid = _int_grid(cfg)
    orders = sorted(set(cfg.orders))
    if any(not 2 <= m <= 16 for m in orders):
        raise ConfigError("orders must lie in 2..16")
    rep = cumulant_report(spec, orders, grid, cfg.k_max_per_n, threads=threads)
    res = Result(("m", "n", "k_max", "exact", "asymptotic", "ratio", "tail_bound"))
    for row in rep.rows():
        res.add(**row)
    for i, m in enumerate(rep.orders):
        res.plots[f"m{m}"] = [
            {"n": n, "value": rep.ratio[i, j], "stderr": rep.tail_bound[i, j] * rep.ratio[i, j], "theory_value": 1.0}
            for j, n in enumerate(rep.grid)
        ]
    res.tail = {"max_tail_bound": float(rep.tail_bound.max()), "k_max": list(rep.k_max)}
    tol = cfg.tolerance
    for i, m in enumerate(rep.orders):
        r = rep.ratio[i]
        if tol.get("monotone"):
            d = np.diff(r)
            res.check(bool(np.all(d > 0) or np.all(d < 0)), f"ratio for m={m} is not monotone in n")
        if "ratio_rtol" in tol:
            res.check(abs(r[-1] - 1.0) <= float(tol["ratio_rtol"]),
                      f"ratio for m={m} at n={rep.grid[-1]} is {r[-1]:.6g}, outside 1 +- {tol['ratio_rtol']}")
    return res


def _covariance(cfg: ExperimentConfig, spec: SupouSpec, threads: int) -> Result:
    grid = _int_grid(cfg)
    t = np.array(grid, dtype=float)
    r, tail = covariance_many(t, spec)
    lim = lstar_limit(spec)
    lstar = r * t**spec.decay
    l2, _ = covariance_many(2.0 * t, spec)
    lstar2 = l2 * (2.0 * t) ** spec.decay
    res = Result(("t", "R", "R_tail", "Lstar", "Lstar_limit", "Lstar_over_limit", "Lstar_2t_over_t",
                  "variance_exact", "variance_ratio"))
    h = spec.hurst
    for i, n in enumerate(grid):
        var, ratio = math.nan, math.nan
        if cfg.variance:
            var = partial_sum_variance_exact(spec, n).value
            ratio = var / (lstar[i] * float(n) ** (2 * h) / (h * (2 * h - 1)))
        res.add(t=n, R=r[i], R_tail=tail[i], Lstar=lstar[i], Lstar_limit=lim, Lstar_over_limit=lstar[i] / lim,
                Lstar_2t_over_t=lstar2[i] / lstar[i], variance_exact=var, variance_ratio=ratio)
    res.plots["R"] = [{"n": n, "value": r[i], "stderr": tail[i], "theory_value": lim * n**-spec.decay}
                      for i, n in enumerate(grid)]
    res.tail = {"max_relative_tail": float(np.max(tail / r))}
    tol = cfg.tolerance
    for row in res.rows:
        if "lstar_atol" in tol:
            res.check(abs(row["Lstar"] - lim) <= float(tol["lstar_atol"]), f"L*({row['t']}) off its limit")
        if "slow_variation_atol" in tol:
            res.check(abs(row["Lstar_2t_over_t"] - 1) <= float(tol["slow_variation_atol"]),
                      f"L*(2t)/L*(t) at t={row['t']} off 1")
        if "variance_rtol" in tol and cfg.variance:
            res.check(abs(row["variance_ratio"] - 1) <= float(tol["variance_rtol"]),
                      f"variance ratio at n={row['t']} off 1")
    return res


def _scaling(cfg: ExperimentConfig, spec: SupouSpec, threads: int) -> Result:
    _require(cfg, "orders")
    grid = _int_grid(cfg)
    qs = sorted(set(cfg.orders))
    if len(qs) < 1 or any(q < 1 for q in qs):
        raise ConfigError("orders must be positive integers")
    fits = []
    try:
        if cfg.use_exact_moments:
            if any(q % 2 for q in qs):
                raise ConfigError("exact moment curves need even orders")
            for q in qs:
                fits.append(fit_scaling(grid, exact_moment_curve(spec, q, grid, cfg.k_max_per_n), q))
        else:
            _require(cfg, "replications")
            ens = replicate(spec, grid[-1], cfg.replications, cfg.master_seed, horizons=grid,
                            threads=threads, keep_paths=cfg.dump_paths)
            for q in qs:
                fits.append(fit_scaling_ensemble(grid, ens.partial_sums, q))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    res = Result(("q", "n", "log_n", "log_moment", "moment", "moment_se"))
    for f in fits:
        for row in f.rows():
            res.add(**row)
        theory = theoretical_tau(int(f.q), spec.hurst) if spec.infinite and f.q % 2 == 0 else f.q / 2.0
        res.plots[f"q{int(f.q)}"] = [
            {"n": n, "value": f.log_moment[j],
             "stderr": (f.moment_se[j] / math.exp(f.log_moment[j])) if f.moment_se else 0.0,
             "theory_value": f.log_moment[0] + theory * (f.log_n[j] - f.log_n[0])}
            for j, n in enumerate(f.n)
        ]
    res.extra["fits"] = [f.to_dict() for f in fits]
    verdict = None
    if len(fits) >= 2:
        verdict = intermittency_check(fits[0], fits[-1])
        res.extra["verdict"] = verdict.to_dict()
    tol = cfg.tolerance
    for f in fits:
        atol = (tol.get("tau_atol") or {}).get(str(int(f.q)))
        if atol is not None:
            target = theoretical_tau(int(f.q), spec.hurst) if spec.infinite else f.q / 2.0
            res.check(abs(f.slope - target) <= float(atol),
                      f"tau({int(f.q)}) = {f.slope:.6g}, outside {target:g} +- {atol}")
    if "verdict" in tol:
        got = verdict.verdict if verdict else None
        res.check(got == tol["verdict"], f"verdict {got!r}, expected {tol['verdict']!r}")
    if not cfg.use_exact_moments:
        res.paths = ens.paths
    return res


def _clt(cfg: ExperimentConfig, spec: SupouSpec, threads: int) -> Result:
    _require(cfg, "n", "replications")
    if spec.infinite:
        raise ConfigError("clt needs a finite superposition (infinite: false)")
    comps = spec.components()
    norm = clt_norming([(c.family.variance(), c.lam) for c in comps], cfg.n)
    ens = replicate(spec, cfg.n, cfg.replications, cfg.master_seed, threads=threads, keep_paths=cfg.dump_paths)
    try:
        rep = normality_diagnostics(ens.terminal, loc=0.0, scale=norm.c_exact * math.sqrt(cfg.n),
                                    bootstrap=cfg.bootstrap, seed=cfg.master_seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cols = ["n", "K", "replications", "c_paper", "c_exact", "skewness", "excess_kurtosis", "ks_distance",
            "ks_critical"]
    row = dict(n=cfg.n, K=spec.k_max, replications=cfg.replications, c_paper=norm.c_paper, c_exact=norm.c_exact,
               skewness=rep.skewness, excess_kurtosis=rep.excess_kurtosis, ks_distance=rep.ks_distance,
               ks_critical=rep.ks_critical)
    for name, (lo, hi) in rep.ci.items():
        cols += [f"{name}_lo", f"{name}_hi"]
        row[f"{name}_lo"], row[f"{name}_hi"] = lo, hi
    res = Result(cols)
    res.add(**row)
    res.paths = ens.paths
    tol = cfg.tolerance
    if "skewness_abs" in tol:
        res.check(abs(rep.skewness) < float(tol["skewness_abs"]), f"|skewness| = {abs(rep.skewness):.4g}")
    if "excess_kurtosis_abs" in tol:
        res.check(abs(rep.excess_kurtosis) < float(tol["excess_kurtosis_abs"]),
                  f"|excess kurtosis| = {abs(rep.excess_kurtosis):.4g}")
    if tol.get("ks"):
        res.check(rep.ks_pass, f"KS distance {rep.ks_distance:.4g} >= critical {rep.ks_critical:.4g}")
    return res


def _constants(cfg: ExperimentConfig, spec: SupouSpec, threads: int) -> Result:
    orders = sorted(set(cfg.orders or [2]))
    hs = cfg.hurst_values or [spec.hurst]
    if any(not 0.5 < h < 1 for h in hs):
        raise ConfigError("hurst out of (0.5,1)")
    if any(not 2 <= m <= 16 for m in orders):
        raise ConfigError("orders must lie in 2..16")
    rtol = cfg.tolerance.get("quadrature_rtol")
    res = Result(("m", "H", "D", "D_I", "D_II", "quad_value", "quad_error", "target"))
    for m in orders:
        for h in hs:
            d = asymptotic_constant_D(m, h, spec.family, check=cfg.quadrature,
                                      rtol=None if rtol is None else float(rtol))
            target = 1.0 / (h * (2 * h - 1)) if m == 2 else math.nan
            res.add(m=m, H=h, D=d.value, D_I=d.part_I, D_II=d.part_II, quad_value=d.quad_value,
                    quad_error=d.quad_error, target=target)
            if m == 2 and "d2_atol" in cfg.tolerance:
                for label, v in (("closed form", d.value), ("quadrature", d.quad_value)):
                    if not math.isnan(v):
                        res.check(abs(v - target) < float(cfg.tolerance["d2_atol"]),
                                  f"D_2 ({label}) at H={h} off 1/(H(2H-1))")
    return res


def _simulate(cfg: ExperimentConfig, spec: SupouSpec, threads: int) -> Result:
    _require(cfg, "n", "replications")
    orders = sorted(set(cfg.orders or [2, 3, 4]))
    if any(not 1 <= m <= 4 for m in orders):
        raise ConfigError("k-statistics are available for orders 1..4")
    ens = replicate(spec, cfg.n, cfg.replications, cfg.master_seed, threads=threads, keep_paths=cfg.dump_paths)
    exact = exact_cumulants(spec, [m for m in orders if m >= 2] or [2], cfg.n)
    res = Result(("m", "n", "replications", "k_stat", "se", "exact", "z"))
    for m in orders:
        try:
            est = k_statistics(ens.terminal, m)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        # the ensemble is centred analytically, so its first cumulant is zero
        ref = exact[m].truncated if m >= 2 else 0.0
        z = (est.value - ref) / est.se if est.se > 0 else math.inf
        res.add(m=m, n=cfg.n, replications=cfg.replications, k_stat=est.value, se=est.se, exact=ref, z=z)
        res.plots[f"m{m}"] = [{"n": cfg.n, "value": est.value, "stderr": est.se, "theory_value": ref}]
        zmax = (cfg.tolerance.get("z_max") or {}).get(str(m))
        if zmax is not None:
            res.check(abs(z) <= float(zmax), f"k-statistic of order {m} is {z:.3g} SE from exact")
    tails = {str(m): exact[m].tail_bound for m in orders if m >= 2}
    res.tail = {"truncation_relative_tail": tails, "exact_innovations": ens.exact}
    res.paths = ens.paths
    return res


RUNNERS: dict[str, Callable[[ExperimentConfig, SupouSpec, int], Result]] = {
    "cumulants": _cumulants,
    "covariance": _covariance,
    "scaling": _scaling,
    "clt": _clt,
    "constants": _constants,
    "simulate": _simulate,
}


def _dump_paths(path, paths) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("replication_id", "i", "X_i", "S_i_centered"))
        for p in paths:
            for i, (x, s) in enumerate(zip(p.values, p.centered_partial_sums), start=1):
                w.writerow((p.replication_id, i, repr(float(x)), repr(float(s))))


def _versions() -> dict:
    return {
        "supou": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _write_manifest(out: Path, manifest: dict) -> None:
    text = json.dumps(manifest, indent=2, sort_keys=True, allow_nan=True, default=_fmt) + "\n"
    (out / "manifest.json").write_text(text, encoding="utf-8")


def run(
    experiment: str,
    config_path,
    seed: int | None = None,
    threads: int = 1,
    out_dir=None,
    dump_paths: bool = False,
) -> int:
    """Run one experiment end to end and return the exit code."""
    start = time.perf_counter()
    manifest: dict = {
        "experiment": experiment,
        "versions": _versions(),
        "backend": kernels.BACKEND,
        "threads": threads,
        "status": "error",
        "reason": None,
    }
    out = Path(out_dir) if out_dir else None
    code = EXIT_INVALID
    try:
        cfg = load_config(config_path, experiment)
        if seed is not None:
            if not 0 <= seed < 2**64:
                raise ConfigError("seed must be a 64-bit unsigned integer")
            cfg = cfg.model_copy(update={"master_seed": seed})
        if dump_paths:
            cfg = cfg.model_copy(update={"dump_paths": True})
        if threads < 1:
            raise ConfigError("threads must be >= 1")
        out = out or Path(cfg.output or f"supou_{experiment}")
        manifest["config"] = cfg.echo(experiment)
        manifest["master_seed"] = cfg.master_seed
        spec = build_spec(cfg)
        if cfg.dump_paths and experiment not in ("scaling", "clt", "simulate"):
            raise ConfigError(f"dump_paths is not available for {experiment}")
        out.mkdir(parents=True, exist_ok=True)
        res = RUNNERS[experiment](cfg, spec, threads)
        write_csv(out / "results.csv", res.columns, res.rows)
        if res.plots:
            emit_plotdata(experiment, res.plots, out)
        if cfg.dump_paths and res.paths:
            _dump_paths(out / "paths.csv", res.paths)
        manifest["tail_diagnostics"] = res.tail
        manifest.update(res.extra)
        manifest["rows"] = len(res.rows)
        if res.failures:
            manifest["status"] = "tolerance_failed"
            manifest["reason"] = "; ".join(res.failures)
            code = EXIT_TOLERANCE
        else:
            manifest["status"] = "ok"
            code = EXIT_OK
    except ConfigError as exc:
        manifest["status"] = "invalid"
        manifest["reason"] = str(exc)
        code = EXIT_INVALID
    except QuadratureError as exc:
        manifest["status"] = "tolerance_failed"
        manifest["reason"] = str(exc)
        code = EXIT_TOLERANCE
    manifest["wall_time_s"] = time.perf_counter() - start
    out = out or Path(f"supou_{experiment}")
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(out, manifest)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supou", description="Run a supOU experiment from a JSON config.")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", required=True, help="path to the JSON experiment config")
    p.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--dump-paths", action="store_true", help="also write every simulated path")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    code = run(args.experiment, args.config, args.seed, args.threads, args.out, args.dump_paths)
    out = Path(args.out) if args.out else None
    status = {EXIT_OK: "ok", EXIT_INVALID: "invalid config", EXIT_TOLERANCE: "tolerance failed"}[code]
    print(f"supou {args.experiment}: {status}" + (f" (see {out / 'manifest.json'})" if out else ""))
    return code


if __name__ == "__main__":
    sys.exit(main())
