"""Per-sample SNR/SINR models of the two-way relay and their closed-form
relay-power maximizers.

Both nodes transmit with the same power P and the relay with P_R, under
the total budget P_R + 2P = P_tot.  In half-duplex (HD) operation the
exchange occupies two slots and each receiver sees noise only.  In
full-duplex (FD) operation everything happens in one slot and the nodes
and relay leak a fraction of their own transmission into their receivers;
``omega`` is the mean residual self-interference power coefficient left
after cancellation.  Noise power is normalized to one throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

from .channel import Geometry

NODES = ("A", "B")


class RelayMode(enum.Enum):
    HD = "hd"
    FD = "fd"


@dataclass(frozen=True)
class SystemParams:
    """All scenario constants of one experiment."""

    m: int
    p_tot: float
    omega: float
    eps_a: float
    eps_b: float
    theta_a: float
    theta_b: float
    geom: Geometry
    gamma_t_a: float
    gamma_t_b: float
    w: float
    # Blocklength handed to the rate formula in HD mode: each hop occupies
    # half the frame, so the default is "m/2"; set "m" to rate the full frame.
    hd_rate_blocklength: str = "m/2"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        if self.p_tot <= 0.0:
            raise ValueError(f"p_tot must be positive, got {self.p_tot}")
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        for name in ("eps_a", "eps_b"):
            v = getattr(self, name)
            if not 0.0 < v <= 0.5:
                raise ValueError(f"{name} must lie in (0, 0.5], got {v}")
        for name in ("theta_a", "theta_b"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.gamma_t_a < 0.0 or self.gamma_t_b < 0.0:
            raise ValueError("SNR thresholds must be >= 0")
        if not 0.0 <= self.w <= 1.0:
            raise ValueError(f"w must lie in [0, 1], got {self.w}")
        if self.hd_rate_blocklength not in ("m", "m/2"):
            raise ValueError("hd_rate_blocklength must be 'm' or 'm/2'")

    def eps_for(self, node: str) -> float:
        return self.eps_a if node == "A" else self.eps_b

    def theta_for(self, node: str) -> float:
        return self.theta_a if node == "A" else self.theta_b

    def gamma_t_for(self, node: str) -> float:
        return self.gamma_t_a if node == "A" else self.gamma_t_b

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @classmethod
    def reference(cls, **overrides) -> "SystemParams":
        """The reference scenario used by the experiment suite.

        m=100 channel uses, P_tot=1000 W, path-loss exponent 4, error
        probability 1e-4 and QoS exponent 1e-3 at both nodes, relay at the
        midpoint, SNR thresholds 1, equal priority.
        """
        geom_kw = {}
        for k in ("d_a", "alpha"):
            if k in overrides:
                geom_kw[k] = overrides.pop(k)
        geom = overrides.pop("geom", None) or Geometry(
            d_a=geom_kw.get("d_a", 0.5), alpha=geom_kw.get("alpha", 4.0)
        )
        base = dict(
            m=100,
            p_tot=1000.0,
            omega=0.1,
            eps_a=1e-4,
            eps_b=1e-4,
            theta_a=1e-3,
            theta_b=1e-3,
            geom=geom,
            gamma_t_a=1.0,
            gamma_t_b=1.0,
            w=0.5,
        )
        base.update(overrides)
        return cls(**base)


@dataclass(frozen=True)
class PowerAllocation:
    """Split of the total budget: relay power p_r, per-node power p_node."""

    p_r: float
    p_node: float

    def __post_init__(self):
        if self.p_r < 0.0 or self.p_node < 0.0:
            raise ValueError(
                f"powers must be non-negative, got p_r={self.p_r}, p_node={self.p_node}"
            )

    @property
    def p_tot(self) -> float:
        return self.p_r + 2.0 * self.p_node

    @classmethod
    def from_relay_power(cls, p_r: float, p_tot: float) -> "PowerAllocation":
        if not 0.0 <= p_r <= p_tot:
            raise ValueError(f"p_r must lie in [0, p_tot], got {p_r} of {p_tot}")
        return cls(p_r=p_r, p_node=(p_tot - p_r) / 2.0)

    @classmethod
    def equal_split(cls, p_tot: float) -> "PowerAllocation":
        """Baseline third/third/third split between the relay and both nodes."""
        return cls(p_r=p_tot / 3.0, p_node=p_tot / 3.0)


def _oriented(h_a, h_b, node: str):
    """Gains seen from the given receiving node; node B swaps the roles."""
    if node == "A":
        return h_a, h_b
    if node == "B":
        return h_b, h_a
    raise ValueError(f"node must be 'A' or 'B', got {node!r}")


def _snr_hd_raw(p_r: float, p: float, hr, ho):
    # Parenthesization matches the omega=0 reduction of _sinr_fd_raw exactly,
    # keeping the HD/FD cross-check bit-identical.
    return p * p_r * hr * ho / (p_r * hr + (p * hr + p * ho + 1.0))


def _sinr_fd_raw(p_r: float, p: float, omega: float, hr, ho):
    leak_r = p_r * omega + 1.0
    den = p_r * hr * leak_r + (p * omega + 1.0) * (p * hr + p * ho + leak_r)
    return p * p_r * hr * ho / den


def snr_hd(alloc: PowerAllocation, h_a, h_b, node: str = "A"):
    """Post-combining SNR at one node of the HD two-way relay.

    Vectorized over the gain arguments.  Zero when either the relay or the
    nodes get no power, since the amplified signal carries a factor of each.
    """
    hr, ho = _oriented(h_a, h_b, node)
    return _snr_hd_raw(alloc.p_r, alloc.p_node, hr, ho)


def sinr_fd(alloc: PowerAllocation, omega: float, h_a, h_b, node: str = "A"):
    """Post-combining SINR at one node of the FD two-way relay.

    Residual self-interference enters twice: re-amplified by the relay
    (quadratic in p_r) and locally at the receiving node.  With omega = 0
    this reduces exactly to :func:`snr_hd`.
    """
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    hr, ho = _oriented(h_a, h_b, node)
    return _sinr_fd_raw(alloc.p_r, alloc.p_node, omega, hr, ho)


def _check_gains(h_a: float, h_b: float) -> None:
    if h_a <= 0.0 or h_b <= 0.0:
        raise ValueError(f"gains must be positive, got H_A={h_a}, H_B={h_b}")


def optimal_relay_power_hd(h_a: float, h_b: float, p_tot: float, node: str = "A") -> float:
    """Relay power maximizing the HD SNR of one node, in closed form.

    Solving the stationarity condition gives a quadratic whose admissible
    root is evaluated here in a conjugate form that has no singularity at
    H_A == H_B (where the maximizer degenerates to p_tot / 2):

        p_r* = K p_tot / (K + sqrt(2 K (H_r p_tot + 1))),
        K = (H_A + H_B) p_tot + 2,

    with H_r the receiving node's own gain.  The result always lies
    strictly inside (0, p_tot).
    """
    _check_gains(h_a, h_b)
    hr, _ = _oriented(h_a, h_b, node)
    k = (h_a + h_b) * p_tot + 2.0
    return k * p_tot / (k + math.sqrt(2.0 * k * (hr * p_tot + 1.0)))


def optimal_relay_power_fd(
    h_a: float, h_b: float, p_tot: float, omega: float, node: str = "A"
) -> float:
    """Relay power maximizing the FD SINR of one node, in closed form.

    The stationarity condition is again quadratic; the admissible root in
    conjugate form is

        p_r* = G K p_tot / (G K + 2 sqrt(G K (H_r p_tot + 1)(omega p_tot + 1))),
        G = omega p_tot + 2,  K = (H_A + H_B) p_tot + 2.

    At omega = 0 this collapses to the HD expression exactly, and the
    leading-coefficient sign change of the quadratic (possible for
    H_A < H_B at large omega) cancels out of this form altogether.
    """
    _check_gains(h_a, h_b)
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega}")
    hr, _ = _oriented(h_a, h_b, node)
    g = omega * p_tot + 2.0
    k = (h_a + h_b) * p_tot + 2.0
    gk = g * k
    disc = gk * 4.0 * (hr * p_tot + 1.0) * (omega * p_tot + 1.0)
    return gk * p_tot / (gk + math.sqrt(disc))


def threshold_roots_hd(
    h_a: float, h_b: float, p_tot: float, gamma_t: float, node: str = "A"
) -> Optional[tuple[float, float]]:
    """The two relay powers at which the HD SNR crosses ``gamma_t``.

    The SNR is concave in relay power with a single peak, so the level set
    gamma = gamma_t is either empty (peak below the threshold, returns
    None) or a pair p1 <= p2 bracketing the maximizer.  Solved directly
    from the quadratic

        H_A H_B p_r^2 + (gamma_t (H_r - H_o) - H_A H_B p_tot) p_r
            + gamma_t K = 0,    K = (H_A + H_B) p_tot + 2,

    using the cancellation-free two-branch formula.
    """
    _check_gains(h_a, h_b)
    if gamma_t <= 0.0:
        raise ValueError(f"gamma_t must be positive, got {gamma_t}")
    p_star = optimal_relay_power_hd(h_a, h_b, p_tot, node)
    peak = snr_hd(PowerAllocation.from_relay_power(p_star, p_tot), h_a, h_b, node)
    if peak < gamma_t:
        return None
    hr, ho = _oriented(h_a, h_b, node)
    hh = h_a * h_b
    k = (h_a + h_b) * p_tot + 2.0
    b = gamma_t * (hr - ho) - hh * p_tot
    c = gamma_t * k
    # Crossings exist inside (0, p_tot), hence both roots are positive and
    # b < 0; the discriminant is clamped against rounding at the tangent case.
    disc = max(b * b - 4.0 * hh * c, 0.0)
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q / hh
    r2 = c / q
    return (r1, r2) if r1 <= r2 else (r2, r1)
