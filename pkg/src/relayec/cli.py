"""Experiment runner: deterministic sweeps, frontier traces and a solver
benchmark, emitted as CSV or JSON tables.

Subcommands map onto the standard experiment set (fig2 .. fig8, bench);
every run is reproducible from its config and seed, and repeated runs
write byte-identical files.  Wall-clock timing therefore never goes into
output files; the bench subcommand prints its timing table to stdout and
stores only the deterministic part.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path
from statistics import mean, stdev
from typing import Optional, Sequence

import numpy as np

from .capacity import ec_point
from .channel import Geometry, sample_channels
from .link import PowerAllocation, RelayMode, SystemParams
from .solver import SolveMethod, pareto_epsilon_constraint, pareto_weighted, solve_approx, solve_exact

EPS_GRID = (1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2)
PR_GRID_POINTS = 200
FIG2_DA = (0.1, 0.5, 0.8)
FIG3_OMEGA = (0.1, 0.3, 0.5)
FIG5_OMEGA = (0.01, 0.05, 0.10)
FIG6_OMEGA = (0.01, 0.05, 0.10)
FIG7_DA = (0.3, 0.5, 0.7)
FIG8_SCENARIOS = ((0.5, 0.01), (0.2, 0.01), (0.2, 0.10), (0.5, 0.10))
BENCH_EPS = (1e-8, 1e-5, 1e-2)
BENCH_OMEGA = (0.01, 0.05, 0.10)
W_GRID = tuple(np.linspace(0.0, 1.0, 21))
THETA_GRID = tuple(np.logspace(-4.0, -1.0, 10))

SWEEP_COLUMNS = [
    "sweep_param", "sweep_value", "mode", "method",
    "m", "p_tot", "alpha", "d_a", "omega",
    "eps_a", "eps_b", "theta_a", "theta_b", "gamma_t_a", "gamma_t_b", "w",
    "samples", "seed", "hd_rate_blocklength",
    "p_r", "p_node", "r_ea", "r_eb", "weighted_sum",
    "silenced", "degenerate", "iterations", "objective_evals",
]
PARETO_COLUMNS = [
    "d_a", "omega", "method", "parameter",
    "p_r", "r_ea", "r_eb", "samples", "seed",
]
BENCH_FILE_COLUMNS = [
    "mode", "param_name", "param_value", "samples", "seed", "repeats",
    "p_r_exact", "p_r_approx", "wsum_exact", "wsum_approx",
    "evals_exact", "evals_approx",
]


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Scenario constants plus run controls for one experiment."""

    m: int = 100
    p_tot: float = 1000.0
    alpha: float = 4.0
    d_a: float = 0.5
    omega: float = 0.1
    eps_a: float = 1e-4
    eps_b: float = 1e-4
    theta_a: float = 1e-3
    theta_b: float = 1e-3
    gamma_t_a: float = 1.0
    gamma_t_b: float = 1.0
    w: float = 0.5
    hd_rate_blocklength: str = "m/2"
    mode: str = "hd"
    samples: int = 1000
    seed: int = 7
    method: str = "approx"
    sweep_param: str = ""
    sweep_values: tuple = ()
    out: str = ""
    format: str = "csv"

    def __post_init__(self):
        if self.mode not in ("hd", "fd"):
            raise ConfigError(f"mode must be 'hd' or 'fd', got {self.mode!r}")
        if self.method not in ("exact", "approx", "equal"):
            raise ConfigError(f"method must be exact|approx|equal, got {self.method!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv|json, got {self.format!r}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        if self.sweep_values and list(self.sweep_values) != sorted(self.sweep_values):
            raise ConfigError("sweep_values must be sorted ascending")

    def relay_mode(self) -> RelayMode:
        return RelayMode(self.mode)

    def system_params(self) -> SystemParams:
        try:
            return SystemParams(
                m=self.m,
                p_tot=self.p_tot,
                omega=self.omega,
                eps_a=self.eps_a,
                eps_b=self.eps_b,
                theta_a=self.theta_a,
                theta_b=self.theta_b,
                geom=Geometry(d_a=self.d_a, alpha=self.alpha),
                gamma_t_a=self.gamma_t_a,
                gamma_t_b=self.gamma_t_b,
                w=self.w,
                hd_rate_blocklength=self.hd_rate_blocklength,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "sweep_values":
                v = ",".join(repr(float(x)) for x in v)
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        return cls(**_parse_kv(text))


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _parse_kv(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value)
    return out


def _coerce(key: str, value: str):
    kind = _FIELD_TYPES[key]
    try:
        if key == "sweep_values":
            if not value:
                return ()
            return tuple(float(x) for x in value.split(","))
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        return value
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return _parse_kv(text)


# ---------------------------------------------------------------------------
# table emission

def _si12(x: float) -> str:
    return format(float(x), ".12g")


def emit_table(rows: Sequence[dict], fmt: str, path, columns: Optional[Sequence[str]] = None) -> None:
    """Write rows as CSV or JSON with a stable column order.

    Floats carry 12 significant digits; identical inputs produce byte
    identical files.  Refuses empty row sets before touching the path.
    """
    if not rows:
        raise ValueError("refusing to emit an empty table")
    cols = list(columns) if columns is not None else list(rows[0].keys())
    for i, row in enumerate(rows):
        missing = [c for c in cols if c not in row]
        if missing:
            raise ValueError(f"row {i} is missing columns {missing}")
    path = Path(path)
    if fmt == "csv":
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(_cell_csv(row[c]) for c in cols))
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        data = [{c: _cell_json(row[c]) for c in cols} for row in rows]
        path.write_text(json.dumps(data, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _cell_csv(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return _si12(v)
    return str(v)


def _cell_json(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return float(_si12(v))
    return v


# ---------------------------------------------------------------------------
# sweep engine

def _scenario_echo(cfg: ExperimentConfig) -> dict:
    return {
        "mode": cfg.mode,
        "method": cfg.method,
        "m": cfg.m,
        "p_tot": cfg.p_tot,
        "alpha": cfg.alpha,
        "d_a": cfg.d_a,
        "omega": cfg.omega,
        "eps_a": cfg.eps_a,
        "eps_b": cfg.eps_b,
        "theta_a": cfg.theta_a,
        "theta_b": cfg.theta_b,
        "gamma_t_a": cfg.gamma_t_a,
        "gamma_t_b": cfg.gamma_t_b,
        "w": cfg.w,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "hd_rate_blocklength": cfg.hd_rate_blocklength,
    }


def _apply_sweep_value(cfg: ExperimentConfig, value: float) -> ExperimentConfig:
    p = cfg.sweep_param
    if p == "p_r":
        return cfg
    if p == "eps":
        return replace(cfg, eps_a=value, eps_b=value)
    if p == "theta":
        return replace(cfg, theta_a=value, theta_b=value)
    if p == "w":
        return replace(cfg, w=value)
    if p == "omega":
        return replace(cfg, omega=value)
    if p == "d_a":
        return replace(cfg, d_a=value)
    raise ConfigError(f"unknown sweep parameter {cfg.sweep_param!r}")


def run_sweep(config: ExperimentConfig) -> list[dict]:
    """One row per grid point of the configured sweep axis.

    For a ``p_r`` sweep the capacities are evaluated at the fixed
    allocation; for every other axis the allocation is solved per point
    with the configured method (``equal`` takes the third/third/third
    split without solving).  Rows come out in grid order and are fully
    deterministic under a fixed seed.
    """
    if not config.sweep_param:
        raise ConfigError("config has no sweep axis")
    if not config.sweep_values:
        raise ConfigError("sweep grid is empty")
    mode = config.relay_mode()
    rows = []
    sample_cache: dict[float, object] = {}
    for value in config.sweep_values:
        cfg = _apply_sweep_value(config, float(value))
        params = cfg.system_params()
        key = cfg.d_a
        if key not in sample_cache:
            sample_cache[key] = sample_channels(params.geom, cfg.samples, cfg.seed)
        samples = sample_cache[key]

        silenced = ""
        degenerate = False
        iterations = 0
        evals = 0
        if config.sweep_param == "p_r":
            alloc = PowerAllocation.from_relay_power(float(value), params.p_tot)
            ec = ec_point(mode, samples, params, alloc)
            method = "fixed"
        elif cfg.method == "equal":
            alloc = PowerAllocation.equal_split(params.p_tot)
            ec = ec_point(mode, samples, params, alloc)
            method = "equal"
        else:
            solver = solve_exact if cfg.method == "exact" else solve_approx
            report = solver(mode, samples, params)
            alloc, ec = report.alloc, report.ec
            silenced = report.silenced or ""
            degenerate = report.degenerate
            iterations = report.iterations
            evals = report.objective_evals
            method = cfg.method

        row = _scenario_echo(cfg)
        row.update(
            sweep_param=config.sweep_param,
            sweep_value=float(value),
            method=method,
            p_r=alloc.p_r,
            p_node=alloc.p_node,
            r_ea=ec.r_ea,
            r_eb=ec.r_eb,
            weighted_sum=ec.weighted_sum(params.w),
            silenced=silenced,
            degenerate=degenerate,
            iterations=iterations,
            objective_evals=evals,
        )
        rows.append({c: row[c] for c in SWEEP_COLUMNS})
    return rows


def run_bench(config: ExperimentConfig, repeats: int) -> list[dict]:
    """Timing comparison of the exact and approximate solvers.

    One row per benchmark cell (error-probability grid in HD, residual
    self-interference grid in FD) with mean and standard deviation of the
    wall time over ``repeats`` runs, the exact/approx time ratio, and the
    solved outputs, which do not vary across repeats.
    """
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    mode = config.relay_mode()
    if mode is RelayMode.HD:
        cells = [("eps", e) for e in BENCH_EPS]
    else:
        cells = [("omega", o) for o in BENCH_OMEGA]
    rows = []
    for param_name, value in cells:
        cfg = replace(config, sweep_param=param_name)
        cfg = _apply_sweep_value(cfg, value)
        params = cfg.system_params()
        samples = sample_channels(params.geom, cfg.samples, cfg.seed)

        t_exact, t_approx = [], []
        rep_e = rep_a = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            rep_e = solve_exact(mode, samples, params)
            t_exact.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            rep_a = solve_approx(mode, samples, params)
            t_approx.append(time.perf_counter() - t0)

        mean_e = mean(t_exact)
        mean_a = mean(t_approx)
        rows.append({
            "mode": cfg.mode,
            "param_name": param_name,
            "param_value": float(value),
            "samples": cfg.samples,
            "seed": cfg.seed,
            "repeats": repeats,
            "p_r_exact": rep_e.alloc.p_r,
            "p_r_approx": rep_a.alloc.p_r,
            "wsum_exact": rep_e.ec.weighted_sum(params.w),
            "wsum_approx": rep_a.ec.weighted_sum(params.w),
            "evals_exact": rep_e.objective_evals,
            "evals_approx": rep_a.objective_evals,
            "mean_ms_exact": 1e3 * mean_e,
            "std_ms_exact": 1e3 * (stdev(t_exact) if repeats > 1 else 0.0),
            "mean_ms_approx": 1e3 * mean_a,
            "std_ms_approx": 1e3 * (stdev(t_approx) if repeats > 1 else 0.0),
            "time_ratio": mean_e / mean_a,
        })
    return rows


# ---------------------------------------------------------------------------
# figure subcommands

def _pr_grid(cfg: ExperimentConfig) -> tuple:
    if cfg.sweep_param == "p_r" and cfg.sweep_values:
        return cfg.sweep_values
    return tuple(np.linspace(1.0, cfg.p_tot - 1.0, PR_GRID_POINTS))


def fig2_rows(cfg: ExperimentConfig) -> list[dict]:
    """HD capacity of both nodes versus relay power, one curve per relay
    placement."""
    base = replace(cfg, mode="hd", sweep_param="p_r", sweep_values=_pr_grid(cfg))
    rows = []
    for d_a in FIG2_DA:
        rows.extend(run_sweep(replace(base, d_a=d_a)))
    return rows


def fig3_rows(cfg: ExperimentConfig) -> list[dict]:
    """FD capacity versus relay power, one curve per self-interference level."""
    base = replace(cfg, mode="fd", sweep_param="p_r", sweep_values=_pr_grid(cfg))
    rows = []
    for omega in FIG3_OMEGA:
        rows.extend(run_sweep(replace(base, omega=omega)))
    return rows


def fig4_rows(cfg: ExperimentConfig) -> list[dict]:
    """HD weighted capacity versus error probability for the three
    allocation strategies."""
    base = replace(cfg, mode="hd", sweep_param="eps", sweep_values=EPS_GRID)
    rows = []
    for method in ("exact", "approx", "equal"):
        rows.extend(run_sweep(replace(base, method=method)))
    return rows


def fig5_rows(cfg: ExperimentConfig) -> list[dict]:
    """FD weighted capacity versus error probability, per self-interference
    level and allocation strategy."""
    base = replace(cfg, mode="fd", sweep_param="eps", sweep_values=EPS_GRID)
    rows = []
    for omega in FIG5_OMEGA:
        for method in ("exact", "approx", "equal"):
            rows.extend(run_sweep(replace(base, omega=omega, method=method)))
    return rows


def fig6_rows(cfg: ExperimentConfig) -> list[dict]:
    """Weighted capacity versus QoS exponent, HD against FD at several
    self-interference levels."""
    base = replace(cfg, sweep_param="theta", sweep_values=THETA_GRID)
    rows = list(run_sweep(replace(base, mode="hd")))
    for omega in FIG6_OMEGA:
        rows.extend(run_sweep(replace(base, mode="fd", omega=omega)))
    return rows


def fig7_rows(cfg: ExperimentConfig) -> list[dict]:
    """Weighted capacity versus priority weight, per relay placement, HD
    and FD."""
    base = replace(cfg, sweep_param="w", sweep_values=W_GRID)
    rows = []
    for d_a in FIG7_DA:
        rows.extend(run_sweep(replace(base, mode="hd", d_a=d_a)))
        rows.extend(run_sweep(replace(base, mode="fd", d_a=d_a)))
    return rows


def fig8_rows(cfg: ExperimentConfig) -> list[dict]:
    """FD capacity frontiers by the weighted-sum and floor-constraint
    methods, per (placement, self-interference) scenario.

    Both traces run on the exact estimator objectives regardless of the
    configured method, so the comparison isolates the scalarization; the
    floor grid reuses the weighted frontier's node-B capacities so the two
    traces sample the same frontier locations.
    """
    method = SolveMethod.EXACT
    rows = []
    for d_a, omega in FIG8_SCENARIOS:
        sub = replace(cfg, mode="fd", d_a=d_a, omega=omega)
        params = sub.system_params()
        samples = sample_channels(params.geom, sub.samples, sub.seed)
        weighted = pareto_weighted(RelayMode.FD, samples, params, W_GRID, method=method)
        for w, point in zip(weighted.parameter_grid, weighted.points):
            rows.append(_pareto_row(sub, "weighted", w, point))
        mu_grid = tuple(sorted({p.r_eb for p in weighted.points}))
        constrained = pareto_epsilon_constraint(RelayMode.FD, samples, params, mu_grid)
        for mu, point in zip(constrained.parameter_grid, constrained.points):
            rows.append(_pareto_row(sub, "epsilon", mu, point))
    return rows


def _pareto_row(cfg: ExperimentConfig, method: str, parameter: float, point) -> dict:
    return {
        "d_a": cfg.d_a,
        "omega": cfg.omega,
        "method": method,
        "parameter": float(parameter),
        "p_r": point.alloc.p_r,
        "r_ea": point.r_ea,
        "r_eb": point.r_eb,
        "samples": cfg.samples,
        "seed": cfg.seed,
    }


# ---------------------------------------------------------------------------
# entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=str, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--mode", choices=("hd", "fd"), default=None)
    common.add_argument("--omega", type=float, default=None)
    common.add_argument("--w", type=float, default=None)
    common.add_argument("--d-a", dest="d_a", type=float, default=None)
    common.add_argument("--out", type=str, default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--method", choices=("exact", "approx"), default=None)
    common.add_argument(
        "--paper-defaults", action="store_true",
        help="reset the scenario to the reference parameter set "
        "(m=100, P_tot=1000, alpha=4, eps=1e-4, theta=1e-3, d_a=0.5, gamma_t=1)",
    )

    parser = _Parser(prog="relayec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=fn.__doc__)
        if name == "bench":
            p.add_argument("--repeats", type=int, default=100)
    return parser


_SCENARIO_KEYS = (
    "m", "p_tot", "alpha", "d_a", "omega", "eps_a", "eps_b",
    "theta_a", "theta_b", "gamma_t_a", "gamma_t_b", "w", "hd_rate_blocklength",
)


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(load_config(args.config))
    if args.paper_defaults:
        defaults = ExperimentConfig()
        for key in _SCENARIO_KEYS:
            values[key] = getattr(defaults, key)
    for key in ("seed", "samples", "mode", "omega", "w", "d_a", "out", "format", "method"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _default_fig3(cfg: ExperimentConfig, args) -> ExperimentConfig:
    if args.d_a is None and not (args.config and "d_a" in load_config(args.config)):
        cfg = replace(cfg, d_a=0.1)
    return cfg


def _cmd_fig2(cfg, args): return fig2_rows(cfg), SWEEP_COLUMNS
def _cmd_fig3(cfg, args): return fig3_rows(_default_fig3(cfg, args)), SWEEP_COLUMNS
def _cmd_fig4(cfg, args): return fig4_rows(cfg), SWEEP_COLUMNS
def _cmd_fig5(cfg, args): return fig5_rows(cfg), SWEEP_COLUMNS
def _cmd_fig6(cfg, args): return fig6_rows(cfg), SWEEP_COLUMNS
def _cmd_fig7(cfg, args): return fig7_rows(cfg), SWEEP_COLUMNS
def _cmd_fig8(cfg, args): return fig8_rows(cfg), PARETO_COLUMNS


def _cmd_bench(cfg, args):
    rows = []
    for mode in ("hd", "fd"):
        rows.extend(run_bench(replace(cfg, mode=mode), args.repeats))
    print(f"{'mode':<5} {'param':<6} {'value':>8} {'exact ms':>12} {'approx ms':>12} {'ratio':>7}")
    for r in rows:
        print(
            f"{r['mode']:<5} {r['param_name']:<6} {r['param_value']:>8g} "
            f"{r['mean_ms_exact']:>8.2f}±{r['std_ms_exact']:<5.2f} "
            f"{r['mean_ms_approx']:>8.2f}±{r['std_ms_approx']:<5.2f} "
            f"{r['time_ratio']:>7.2f}"
        )
    file_rows = [{c: r[c] for c in BENCH_FILE_COLUMNS} for r in rows]
    return file_rows, BENCH_FILE_COLUMNS


_COMMANDS = {
    "fig2": _cmd_fig2,
    "fig3": _cmd_fig3,
    "fig4": _cmd_fig4,
    "fig5": _cmd_fig5,
    "fig6": _cmd_fig6,
    "fig7": _cmd_fig7,
    "fig8": _cmd_fig8,
    "bench": _cmd_bench,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve_config(args)
        rows, columns = _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"relayec: config error: {exc}", file=sys.stderr)
        return 1
    out = cfg.out or f"{args.command}.{cfg.format}"
    try:
        emit_table(rows, cfg.format, out, columns)
    except OSError as exc:
        print(f"relayec: cannot write {out}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(rows)} rows to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
