"""Achievable rates for short packets.

Shannon capacity is only reachable with unbounded blocklength; a packet of
m channel uses decoded at error probability eps pays a dispersion penalty
proportional to Qinv(eps) / sqrt(m).  This script tabulates the penalty
and shows the low-SNR dip where the formula goes negative.
"""

import numpy as np

from relayec import fbl_rate, inverse_q

snrs_db = np.array([-5.0, 0.0, 5.0, 10.0, 20.0, 30.0])
snrs = 10.0 ** (snrs_db / 10.0)

print("inverse Gaussian tail at common error targets")
for eps in (1e-2, 1e-4, 1e-6, 1e-8):
    print(f"  eps = {eps:g}: Qinv = {inverse_q(eps):.4f}")

print("\nrate [bits/c.u.] vs SNR, eps = 1e-4")
header = "  SNR dB " + "".join(f"{f'm={m}':>12}" for m in (50, 100, 500, 100000))
print(header)
for db, g in zip(snrs_db, snrs):
    row = f"  {db:6.1f} "
    for m in (50, 100, 500, 100000):
        row += f"{fbl_rate(float(g), m, 1e-4):12.4f}"
    print(row + f"   (Shannon {np.log2(1 + g):.4f})")

print("\nthe dispersion dip: tiny SNR can be worse than zero SNR")
for g in (0.0, 0.05, 0.2, 1.0, 3.0):
    print(f"  gamma = {g:4.2f}: rate = {fbl_rate(g, 50, 1e-4):+.4f}")
