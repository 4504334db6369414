"""When is a full-duplex relay worth it?

FD finishes an exchange in one slot instead of two, so with perfect
self-interference cancellation it roughly doubles the weighted capacity.
Residual leakage eats the advantage, and strict delay requirements
(large QoS exponents) amplify the damage.
"""

import numpy as np

from relayec import RelayMode, SystemParams, sample_channels, solve_exact

p0 = SystemParams.reference()
samples = sample_channels(p0.geom, 1000, seed=7)

print("weighted capacity vs QoS exponent theta (d_a = 0.5, w = 0.5)")
print(f"  {'theta':>8} {'HD':>8} {'FD@0.01':>9} {'FD@0.05':>9} {'FD@0.1':>9}")
for theta in np.logspace(-4, -1, 7):
    p = p0.with_(theta_a=float(theta), theta_b=float(theta))
    hd = solve_exact(RelayMode.HD, samples, p).ec.weighted_sum(p.w)
    row = f"  {theta:8.1e} {hd:8.3f}"
    for omega in (0.01, 0.05, 0.1):
        fd = solve_exact(RelayMode.FD, samples, p.with_(omega=omega)).ec.weighted_sum(p.w)
        row += f"{fd:9.3f}"
    print(row)

p = p0.with_(omega=0.01)
hd = solve_exact(RelayMode.HD, samples, p).ec.weighted_sum(p.w)
fd = solve_exact(RelayMode.FD, samples, p).ec.weighted_sum(p.w)
print(f"\nat omega = 0.01, theta = 1e-3 the FD/HD ratio is {fd / hd:.2f}")

print("\nweighted capacity vs priority weight w, HD vs FD at omega = 0.1")
print(f"  {'w':>5}" + "".join(f"{f'{m} d_a={d}':>14}" for d in (0.3, 0.5, 0.7) for m in ("hd", "fd")))
sample_sets = {d: sample_channels(SystemParams.reference(d_a=d).geom, 1000, 7) for d in (0.3, 0.5, 0.7)}
for w in np.linspace(0.0, 1.0, 5):
    row = f"  {w:5.2f}"
    for d_a in (0.3, 0.5, 0.7):
        p = SystemParams.reference(d_a=d_a, w=float(w))
        for mode in RelayMode:
            row += f"{solve_exact(mode, sample_sets[d_a], p).ec.weighted_sum(float(w)):14.3f}"
    print(row)
print("  midpoint placement is weight-insensitive; off-center placement is not")
