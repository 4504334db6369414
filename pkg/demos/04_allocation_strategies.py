"""Exact, approximate, and equal power allocation head to head.

The exact solver maximizes the Monte-Carlo weighted capacity directly.
The approximate solver minimizes a cheap worst-sample surrogate between
the two closed-form single-node optima, touching the expensive estimator
only once for its report.  Equal allocation gives each node and the relay
a third of the budget.
"""

import time

from relayec import (
    PowerAllocation,
    RelayMode,
    SystemParams,
    ec_point,
    sample_channels,
    solve_approx,
    solve_exact,
)

p0 = SystemParams.reference()
samples = sample_channels(p0.geom, 1000, seed=7)

print("HD, sweep over packet error probability (d_a = 0.5, w = 0.5)")
print(f"  {'eps':>7} {'exact':>8} {'approx':>8} {'equal':>8} {'gap':>7} {'evals e/a':>10}")
for eps in (1e-8, 1e-6, 1e-4, 1e-2):
    p = p0.with_(eps_a=eps, eps_b=eps)
    exact = solve_exact(RelayMode.HD, samples, p)
    approx = solve_approx(RelayMode.HD, samples, p)
    equal = ec_point(RelayMode.HD, samples, p, PowerAllocation.equal_split(p.p_tot))
    we, wa = exact.ec.weighted_sum(p.w), approx.ec.weighted_sum(p.w)
    print(
        f"  {eps:7.0e} {we:8.4f} {wa:8.4f} {equal.weighted_sum(p.w):8.4f}"
        f" {100 * (we - wa) / we:6.2f}% {exact.objective_evals:5d}/{approx.objective_evals}"
    )

print("\nFD, sweep over residual self-interference (d_a = 0.5, w = 0.5)")
for omega in (0.01, 0.05, 0.10):
    p = p0.with_(omega=omega)
    exact = solve_exact(RelayMode.FD, samples, p)
    approx = solve_approx(RelayMode.FD, samples, p)
    equal = ec_point(RelayMode.FD, samples, p, PowerAllocation.equal_split(p.p_tot))
    we, wa = exact.ec.weighted_sum(p.w), approx.ec.weighted_sum(p.w)
    print(
        f"  omega={omega:4.2f} exact {we:7.4f} @ p_r={exact.alloc.p_r:5.1f}"
        f" | approx {wa:7.4f} @ p_r={approx.alloc.p_r:5.1f}"
        f" | equal {equal.weighted_sum(p.w):7.4f}"
    )

print("\nwall time over 50 repeats (the surrogate's reason to exist)")
for mode in RelayMode:
    t0 = time.perf_counter()
    for _ in range(50):
        solve_exact(mode, samples, p0)
    te = time.perf_counter() - t0
    t0 = time.perf_counter()
    for _ in range(50):
        solve_approx(mode, samples, p0)
    ta = time.perf_counter() - t0
    print(f"  {mode.value}: exact {20 * te:.1f} ms, approx {20 * ta:.1f} ms, ratio {te / ta:.2f}")
