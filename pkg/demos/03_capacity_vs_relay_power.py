"""Effective capacity as a function of the relay's power share.

Sweeps the relay power across the budget P_R + 2P = P_tot and prints the
capacity of node A, showing the single interior peak, how the peak moves
toward more relay power as the relay drifts away from node A (half
duplex), and how residual self interference reshapes the curve (full
duplex).
"""

import numpy as np

from relayec import (
    PowerAllocation,
    RelayMode,
    SystemParams,
    effective_capacity,
    optimal_relay_power_hd,
    sample_channels,
)

P_TOT = 1000.0
GRID = np.linspace(50.0, 950.0, 10)


def curve(mode, params, samples, node="A"):
    return [
        effective_capacity(mode, samples, params, PowerAllocation.from_relay_power(float(x), P_TOT), node)
        for x in GRID
    ]


print("HD: capacity of node A vs relay power, one column per placement")
hd_curves = {}
for d_a in (0.1, 0.5, 0.8):
    p = SystemParams.reference(d_a=d_a)
    s = sample_channels(p.geom, 1000, seed=7)
    hd_curves[d_a] = curve(RelayMode.HD, p, s)
print("   p_r " + "".join(f"{f'd_a={d}':>10}" for d in hd_curves))
for i, x in enumerate(GRID):
    print(f"  {x:5.0f}" + "".join(f"{hd_curves[d][i]:10.3f}" for d in hd_curves))
for d_a, vals in hd_curves.items():
    print(f"  peak near p_r = {GRID[int(np.argmax(vals))]:4.0f} W for d_a = {d_a}")
print("  the peak wants more relay power as the relay leaves node A")

print("\nclosed-form check at the sample-mean gains (d_a = 0.5):")
p = SystemParams.reference()
s = sample_channels(p.geom, 1000, seed=7)
ha, hb = s.mean_gains()
print(f"  optimal_relay_power_hd -> {optimal_relay_power_hd(ha, hb, P_TOT, 'A'):.1f} W")

print("\nFD: capacity of node A vs relay power at d_a = 0.1, per interference level")
fd_curves = {}
p = SystemParams.reference(d_a=0.1)
s = sample_channels(p.geom, 1000, seed=7)
for omega in (0.1, 0.3, 0.5):
    fd_curves[omega] = curve(RelayMode.FD, p.with_(omega=omega), s)
print("   p_r " + "".join(f"{f'omega={o}':>12}" for o in fd_curves))
for i, x in enumerate(GRID):
    print(f"  {x:5.0f}" + "".join(f"{fd_curves[o][i]:12.3f}" for o in fd_curves))
print("  every curve keeps a single maximum; stronger leakage flattens and lowers it")
