"""Scalar power-allocation solvers over the relay-power axis.

All optimization here is one-dimensional: pick the relay power p_r in
(0, p_tot), the node power follows from the budget.  The exact solver
minimizes the Monte-Carlo weighted objective, which is unimodal in p_r
(concave in HD, single-peaked in FD), by golden-section search.  The
approximate solver minimizes the cheap min-max surrogate instead, but
only between the two closed-form single-node optima: outside that
interval the surrogate develops spurious minima (worst-sample artifacts
and a funnel where every SNR collapses to zero yet the blocklength term
keeps the rate positive), so the search is deliberately local around the
closed-form warm start.  Frontier tracing runs either solver across a
weight grid, or maximizes one node's capacity under a floor on the other.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .capacity import (
    EcPoint,
    ec_point,
    effective_capacity,
    surrogate_objective_fn,
    weighted_objective_fn,
)
from .channel import ChannelSamples
from .link import (
    PowerAllocation,
    RelayMode,
    SystemParams,
    optimal_relay_power_fd,
    optimal_relay_power_hd,
    sinr_fd,
    snr_hd,
)

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
GROWTH = 1.0 + INVPHI
MAX_ITER = 500

DOMINANCE_TOL = 1e-6


class SolveMethod(enum.Enum):
    EXACT = "exact"
    APPROXIMATE = "approx"
    EPSILON_CONSTRAINT = "epsilon"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one allocation solve."""

    alloc: PowerAllocation
    ec: EcPoint
    method: SolveMethod
    silenced: Optional[str]
    iterations: int
    objective_evals: int
    wall_time: float
    degenerate: bool = False


@dataclass(frozen=True)
class ParetoFrontier:
    """Non-dominated capacity pairs traced over a scalarization grid.

    ``parameter_grid`` holds the weight or floor value behind each
    surviving point, index-aligned with ``points``; floors that were
    infeasible are listed separately.
    """

    points: tuple[EcPoint, ...]
    method: SolveMethod
    parameter_grid: tuple[float, ...]
    infeasible: tuple[float, ...] = ()


@dataclass
class _SearchResult:
    x: float
    fx: float
    iterations: int
    evals: int
    probes: list[tuple[float, float]]


def _line_search(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    x0: Optional[float],
    grad_tol: Optional[float],
) -> _SearchResult:
    probes: list[tuple[float, float]] = []

    def ff(x: float) -> float:
        v = f(x)
        probes.append((x, v))
        return v

    iters = 0
    a, b = lo, hi

    if x0 is not None:
        # Bracket a maximum around the start point by geometric expansion.
        step = max(tol, 1e-2 * (hi - lo))
        xm = min(max(x0, lo), hi)
        a = max(lo, xm - step)
        b = min(hi, xm + step)
        fa, fm, fb = ff(a), ff(xm), ff(b)
        while not (fm >= fa and fm >= fb):
            iters += 1
            if iters >= MAX_ITER or (a <= lo and b >= hi):
                a, b = lo, hi
                break
            step *= GROWTH
            if fa >= fb:
                b, fb = xm, fm
                xm, fm = a, fa
                a = max(lo, xm - step)
                fa = ff(a)
            else:
                a, fa = xm, fm
                xm, fm = b, fb
                b = min(hi, xm + step)
                fb = ff(b)

    # Golden-section shrink of [a, b].
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    if b - a > tol:
        fc, fd = ff(c), ff(d)
        while iters < MAX_ITER:
            iters += 1
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - INVPHI * (b - a)
                fc = ff(c)
            else:
                a, c, fc = c, d, fd
                d = a + INVPHI * (b - a)
                fd = ff(d)
            if b - a <= tol:
                if grad_tol is None or c == d:
                    break
                slope = abs(fc - fd) / abs(c - d)
                if slope <= grad_tol:
                    break

    x = 0.5 * (a + b)
    fx = ff(x)
    return _SearchResult(x=x, fx=fx, iterations=max(iters, 1), evals=len(probes), probes=probes)


def maximize_unimodal(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    x0: Optional[float] = None,
    grad_tol: Optional[float] = None,
    full_output: bool = False,
):
    """Golden-section maximization of a unimodal scalar function.

    Shrinks a bracket on [lo, hi] until its width drops below ``tol`` and
    returns the midpoint with its value.  An optional start point ``x0``
    first brackets the maximum by geometric expansion around it, which
    costs fewer evaluations when the start is good and, for a function
    with several local maxima, keeps the search in the start point's
    basin.  ``grad_tol``, when given, additionally requires the last
    two-point slope estimate to fall below it before stopping.

    With ``full_output`` the return value is
    (argmax, max, iterations, evaluations, probes).
    """
    if lo >= hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    res = _line_search(f, lo, hi, tol, x0, grad_tol)
    if full_output:
        return res.x, res.fx, res.iterations, res.evals, res.probes
    return res.x, res.fx


def _has_interior_valley(probes: Sequence[tuple[float, float]]) -> bool:
    """True when the probe set shows a fall-then-rise pattern, which a
    single-peaked function cannot produce."""
    pts = sorted(probes)
    xs = np.array([p[0] for p in pts])
    fs = np.array([p[1] for p in pts])
    keep = np.concatenate(([True], np.diff(xs) > 0))
    fs = fs[keep]
    if fs.size < 3:
        return False
    d = np.diff(fs)
    scale = float(np.max(np.abs(fs))) or 1.0
    signs = np.sign(d[np.abs(d) > 1e-12 * scale])
    falls_then_rises = np.flatnonzero((signs[:-1] < 0) & (signs[1:] > 0))
    return falls_then_rises.size > 0


def warm_start_relay_power(
    mode: RelayMode, samples: ChannelSamples, params: SystemParams
) -> float:
    """Priority-weighted blend of the closed-form single-node optima,
    evaluated at the sample-mean gains."""
    ha, hb = samples.mean_gains()
    if mode is RelayMode.HD:
        p_a = optimal_relay_power_hd(ha, hb, params.p_tot, "A")
        p_b = optimal_relay_power_hd(ha, hb, params.p_tot, "B")
    else:
        p_a = optimal_relay_power_fd(ha, hb, params.p_tot, params.omega, "A")
        p_b = optimal_relay_power_fd(ha, hb, params.p_tot, params.omega, "B")
    return params.w * p_a + (1.0 - params.w) * p_b


def _single_node_optima(
    mode: RelayMode, samples: ChannelSamples, params: SystemParams
) -> tuple[float, float]:
    ha, hb = samples.mean_gains()
    if mode is RelayMode.HD:
        return (
            optimal_relay_power_hd(ha, hb, params.p_tot, "A"),
            optimal_relay_power_hd(ha, hb, params.p_tot, "B"),
        )
    return (
        optimal_relay_power_fd(ha, hb, params.p_tot, params.omega, "A"),
        optimal_relay_power_fd(ha, hb, params.p_tot, params.omega, "B"),
    )


def line_search_tolerance(params: SystemParams) -> float:
    # The objectives are flat near their optimum; tighter tolerances only
    # burn evaluations.
    return 1e-6 * params.p_tot


def solve_exact(
    mode: RelayMode,
    samples: ChannelSamples,
    params: SystemParams,
    x0: Optional[float] = None,
    apply_policy: bool = True,
) -> SolveReport:
    """Minimize the exact Monte-Carlo weighted objective over relay power.

    The search runs over the whole open budget interval, warm started at
    the closed-form blend.  Single-peakedness of the objective is verified
    on the probe trail afterwards; a violation (possible in FD, where
    per-node capacities are single-peaked but their weighted sum is not
    proven to be) triggers a 1024-point grid scan with local refinement.
    """
    t0 = time.perf_counter()
    tol = line_search_tolerance(params)
    evals = 0
    j_fn = weighted_objective_fn(mode, samples, params)

    def objective(p_r: float) -> float:
        nonlocal evals
        evals += 1
        return -j_fn(p_r)

    start = warm_start_relay_power(mode, samples, params) if x0 is None else x0
    res = _line_search(objective, 0.0, params.p_tot, tol, start, grad_tol=0.1)
    x, iterations = res.x, res.iterations

    if _has_interior_valley(res.probes):
        grid = np.linspace(0.0, params.p_tot, 1024)
        values = [objective(g) for g in grid]
        k = int(np.argmax(values))
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, grid.size - 1)]
        refine = _line_search(objective, lo, hi, tol, None, grad_tol=0.1)
        x = refine.x
        iterations += refine.iterations + 1

    alloc = PowerAllocation.from_relay_power(x, params.p_tot)
    report = SolveReport(
        alloc=alloc,
        ec=ec_point(mode, samples, params, alloc),
        method=SolveMethod.EXACT,
        silenced=None,
        iterations=iterations,
        objective_evals=evals,
        wall_time=0.0,
    )
    if apply_policy:
        report = apply_threshold_policy(report, mode, samples, params)
    return replace(report, wall_time=time.perf_counter() - t0)


def solve_approx(
    mode: RelayMode,
    samples: ChannelSamples,
    params: SystemParams,
    x0: Optional[float] = None,
    apply_policy: bool = True,
) -> SolveReport:
    """Minimize the min-max surrogate over relay power.

    The surrogate is searched only on the interval spanned by the two
    closed-form single-node optima: a priority-weighted compromise between
    single-peaked per-node objectives lies between their maximizers, and
    beyond them the surrogate's worst-sample structure turns multimodal
    (see module docstring).  The reported capacities are re-evaluated with
    the exact estimators at the returned allocation.
    """
    t0 = time.perf_counter()
    tol = line_search_tolerance(params)
    evals = 0
    tau_fn = surrogate_objective_fn(mode, samples, params)

    def objective(p_r: float) -> float:
        nonlocal evals
        evals += 1
        return -tau_fn(p_r)

    p_a, p_b = _single_node_optima(mode, samples, params)
    lo, hi = min(p_a, p_b), max(p_a, p_b)
    # The closed-form optima already localize the search, so the default is
    # a plain golden section over their span; an explicit start point adds
    # bracket expansion around it (clipped into the span).
    start = None if x0 is None else min(max(x0, lo), hi)

    if hi - lo <= tol:
        x = 0.5 * (lo + hi) if start is None else start
        objective(x)
        iterations = 1
    else:
        res = _line_search(objective, lo, hi, tol, start, grad_tol=0.1)
        x, iterations = res.x, res.iterations

    alloc = PowerAllocation.from_relay_power(x, params.p_tot)
    report = SolveReport(
        alloc=alloc,
        ec=ec_point(mode, samples, params, alloc),
        method=SolveMethod.APPROXIMATE,
        silenced=None,
        iterations=iterations,
        objective_evals=evals,
        wall_time=0.0,
    )
    if apply_policy:
        report = apply_threshold_policy(report, mode, samples, params)
    return replace(report, wall_time=time.perf_counter() - t0)


def _mean_gain_snr(
    mode: RelayMode, samples: ChannelSamples, params: SystemParams,
    alloc: PowerAllocation, node: str,
) -> float:
    ha, hb = samples.mean_gains()
    if mode is RelayMode.HD:
        return float(snr_hd(alloc, ha, hb, node))
    return float(sinr_fd(alloc, params.omega, ha, hb, node))


def apply_threshold_policy(
    report: SolveReport,
    mode: RelayMode,
    samples: ChannelSamples,
    params: SystemParams,
) -> SolveReport:
    """Silence a node whose operating SNR falls below its threshold.

    SNRs are evaluated at the sample-mean gains, matching the closed
    forms.  When one node falls below its threshold its stream is dropped
    (capacity reported as zero), and the relay power is reset to the other
    node's closed-form optimum; node powers still follow the budget.  When
    both nodes fall below, the solution is returned unchanged with the
    degenerate flag set, which keeps sweeps comparable instead of
    transmitting nothing.
    """
    g_a = _mean_gain_snr(mode, samples, params, report.alloc, "A")
    g_b = _mean_gain_snr(mode, samples, params, report.alloc, "B")
    below_a = g_a <= params.gamma_t_a
    below_b = g_b <= params.gamma_t_b
    if below_a and below_b:
        return replace(report, degenerate=True)
    if not (below_a or below_b):
        return report

    ha, hb = samples.mean_gains()
    keep = "B" if below_a else "A"
    if mode is RelayMode.HD:
        p_r = optimal_relay_power_hd(ha, hb, params.p_tot, keep)
    else:
        p_r = optimal_relay_power_fd(ha, hb, params.p_tot, params.omega, keep)
    alloc = PowerAllocation.from_relay_power(p_r, params.p_tot)
    kept_ec = effective_capacity(mode, samples, params, alloc, keep)
    if keep == "B":
        ec = EcPoint(r_ea=0.0, r_eb=kept_ec, alloc=alloc)
        silenced = "A"
    else:
        ec = EcPoint(r_ea=kept_ec, r_eb=0.0, alloc=alloc)
        silenced = "B"
    return replace(report, alloc=alloc, ec=ec, silenced=silenced)


def _dominance_mask(points: Sequence[EcPoint], tol: float) -> list[bool]:
    return [
        not any(q.r_ea >= p.r_ea + tol and q.r_eb >= p.r_eb + tol for q in points)
        for p in points
    ]


def filter_dominated(points: Sequence[EcPoint], tol: float = DOMINANCE_TOL) -> tuple[EcPoint, ...]:
    """Drop every point that another point beats on both capacities by
    more than ``tol``."""
    mask = _dominance_mask(points, tol)
    return tuple(p for p, keep in zip(points, mask) if keep)


def pareto_weighted(
    mode: RelayMode,
    samples: ChannelSamples,
    params: SystemParams,
    w_grid: Sequence[float],
    method: SolveMethod = SolveMethod.APPROXIMATE,
) -> ParetoFrontier:
    """Trace the capacity frontier by sweeping the priority weight."""
    if len(w_grid) == 0:
        raise ValueError("w_grid must not be empty")
    solver = solve_exact if method is SolveMethod.EXACT else solve_approx
    points = []
    for w in w_grid:
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"weights must lie in [0, 1], got {w}")
        report = solver(mode, samples, params.with_(w=w))
        points.append(report.ec)
    mask = _dominance_mask(points, DOMINANCE_TOL)
    return ParetoFrontier(
        points=tuple(p for p, keep in zip(points, mask) if keep),
        method=method,
        parameter_grid=tuple(float(w) for w, keep in zip(w_grid, mask) if keep),
    )


def _bisect_crossing(
    f: Callable[[float], float],
    x_bad: float,
    x_good: float,
    tol: float,
) -> float:
    """Root of f between a point where f < 0 and one where f >= 0.

    Returns an abscissa on the feasible (f >= 0) side of the crossing.
    """
    while abs(x_good - x_bad) > tol:
        mid = 0.5 * (x_bad + x_good)
        if f(mid) >= 0.0:
            x_good = mid
        else:
            x_bad = mid
    return x_good


def pareto_epsilon_constraint(
    mode: RelayMode,
    samples: ChannelSamples,
    params: SystemParams,
    mu_grid: Sequence[float],
) -> ParetoFrontier:
    """Trace the frontier by maximizing node A's capacity under a floor on
    node B's.

    Node B's capacity is single-peaked in relay power, so each feasible
    floor cuts out one interval; its ends are located by bisection from
    the peak outwards and node A's capacity is then maximized inside.
    Floors above the attainable maximum are skipped and reported.
    """
    if len(mu_grid) == 0:
        raise ValueError("mu_grid must not be empty")
    tol = line_search_tolerance(params)

    def r_eb(p_r: float) -> float:
        alloc = PowerAllocation.from_relay_power(p_r, params.p_tot)
        return effective_capacity(mode, samples, params, alloc, "B")

    def r_ea(p_r: float) -> float:
        alloc = PowerAllocation.from_relay_power(p_r, params.p_tot)
        return effective_capacity(mode, samples, params, alloc, "A")

    x_peak, eb_peak = maximize_unimodal(
        r_eb, 0.0, params.p_tot, tol,
        x0=warm_start_relay_power(mode, samples, params.with_(w=0.0)),
    )

    points = []
    feasible_mu = []
    infeasible = []
    for mu in mu_grid:
        if mu > eb_peak:
            infeasible.append(float(mu))
            continue
        if r_eb(0.0) >= mu:
            left = 0.0
        else:
            left = _bisect_crossing(lambda x: r_eb(x) - mu, 0.0, x_peak, tol)
        if r_eb(params.p_tot) >= mu:
            right = params.p_tot
        else:
            right = _bisect_crossing(lambda x: r_eb(x) - mu, params.p_tot, x_peak, tol)
        if right - left <= tol:
            x = x_peak
        else:
            x, _ = maximize_unimodal(r_ea, left, right, tol)
        alloc = PowerAllocation.from_relay_power(x, params.p_tot)
        points.append(ec_point(mode, samples, params, alloc))
        feasible_mu.append(float(mu))

    mask = _dominance_mask(points, DOMINANCE_TOL)
    return ParetoFrontier(
        points=tuple(p for p, keep in zip(points, mask) if keep),
        method=SolveMethod.EPSILON_CONSTRAINT,
        parameter_grid=tuple(m for m, keep in zip(feasible_mu, mask) if keep),
        infeasible=tuple(infeasible),
    )
