import csv
import math

import numpy as np
import pytest

from relayec import (
    ChannelSamples,
    Geometry,
    PowerAllocation,
    RelayMode,
    SystemParams,
    ec_point,
    effective_capacity,
    fbl_rate,
    per_sample_rates,
    sample_channels,
    save_csv,
    surrogate_objective,
    weighted_objective_exact,
)

# frozen independently (bisection on the Gaussian tail at 40 digits)
QINV = {1e-4: 3.7190164854556805644, 1e-2: 2.3263478740408408034}
LOG2E = math.log2(math.e)


def reference_samples(n=1000, seed=7, d_a=0.5):
    return sample_channels(Geometry(d_a=d_a, alpha=4.0), n, seed)


def closed_form_ec(rate, m, theta, eps, c):
    """Single-rate effective capacity, written independently."""
    return -math.log(math.exp(-rate * c * theta) * (1.0 - eps) + eps) / (m * theta)


class TestEffectiveCapacity:
    def test_zero_relay_power_collapses_to_constant_rate(self):
        p = SystemParams.reference()
        s = reference_samples(200)
        alloc = PowerAllocation.from_relay_power(0.0, p.p_tot)
        r0 = fbl_rate(0.0, p.m / 2.0, p.eps_a)
        want = closed_form_ec(r0, p.m, p.theta_a, p.eps_a, p.m / 2.0)
        got = effective_capacity(RelayMode.HD, s, p, alloc, "A")
        assert got == pytest.approx(want, rel=1e-12)

    def test_half_eps_drops_dispersion(self):
        # at eps = 0.5 the rates are pure capacity plus blocklength bonus;
        # recompute the estimator from those rates by hand
        p = SystemParams.reference(eps_a=0.5, eps_b=0.5)
        s = reference_samples(300)
        alloc = PowerAllocation.from_relay_power(400.0, p.p_tot)
        from relayec import snr_hd

        g = snr_hd(alloc, s.h_a, s.h_b, "A")
        m_cu = p.m / 2.0
        rates = np.log2(1.0 + g) + math.log2(m_cu) / m_cu
        c_theta = (p.m / 2.0) * p.theta_a
        mean_term = np.mean(np.exp(-rates * c_theta) * 0.5 + 0.5)
        want = -math.log(mean_term) / (p.m * p.theta_a)
        got = effective_capacity(RelayMode.HD, s, p, alloc, "A")
        assert got == pytest.approx(want, rel=1e-10)

    def test_matches_straight_line_oracle_over_csv(self, tmp_path):
        # export the samples, then recompute the HD estimator from the CSV
        # with plain python floats and the frozen inverse-Q constant
        p = SystemParams.reference()
        s = reference_samples(1000, seed=7)
        path = tmp_path / "samples.csv"
        save_csv(s, path)

        with path.open() as fh:
            reader = csv.DictReader(fh)
            rows = [(float(r["h_a"]), float(r["h_b"])) for r in reader]

        p_r, p_tot, m = p.p_tot / 3.0, p.p_tot, p.m
        pn = (p_tot - p_r) / 2.0
        m_cu = m / 2.0
        qinv = QINV[1e-4]
        acc = []
        for h_a, h_b in rows:
            gamma = pn * p_r * h_a * h_b / (p_r * h_a + pn * h_a + pn * h_b + 1.0)
            rate = (
                math.log2(1.0 + gamma)
                - math.sqrt(gamma * (gamma + 2.0) / (m_cu * (gamma + 1.0) ** 2))
                * qinv * LOG2E
                + math.log2(m_cu) / m_cu
            )
            acc.append(math.exp(-rate * (m / 2.0) * p.theta_a) * (1.0 - p.eps_a) + p.eps_a)
        oracle = -math.log(math.fsum(acc) / len(acc)) / (m * p.theta_a)

        alloc = PowerAllocation.from_relay_power(p_r, p_tot)
        got = effective_capacity(RelayMode.HD, s, p, alloc, "A")
        assert got == pytest.approx(oracle, rel=1e-12)

    def test_monotone_in_omega(self):
        p = SystemParams.reference()
        s = reference_samples(500)
        alloc = PowerAllocation.from_relay_power(400.0, p.p_tot)
        vals = [
            effective_capacity(RelayMode.FD, s, p.with_(omega=om), alloc, "A")
            for om in (0.0, 0.01, 0.05, 0.1, 0.3, 0.5)
        ]
        assert all(x >= y for x, y in zip(vals, vals[1:]))

    def test_monotone_in_theta(self):
        p = SystemParams.reference()
        s = reference_samples(500)
        alloc = PowerAllocation.from_relay_power(400.0, p.p_tot)
        for mode in RelayMode:
            vals = [
                effective_capacity(mode, s, p.with_(theta_a=th, theta_b=th), alloc, "A")
                for th in np.logspace(-5, -0.5, 12)
            ]
            assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))

    def test_small_theta_limit_is_mean_rate(self):
        p = SystemParams.reference(theta_a=1e-8, theta_b=1e-8)
        s = reference_samples(500)
        alloc = PowerAllocation.from_relay_power(400.0, p.p_tot)
        for mode, c_over_m in ((RelayMode.HD, 0.5), (RelayMode.FD, 1.0)):
            rates = per_sample_rates(mode, s, p, alloc, "A")
            got = effective_capacity(mode, s, p, alloc, "A")
            assert abs(got - c_over_m * rates.mean()) < 1e-3

    def test_upper_bound_by_best_sample(self):
        p = SystemParams.reference()
        s = reference_samples(500)
        for mode, c_over_m in ((RelayMode.HD, 0.5), (RelayMode.FD, 1.0)):
            for p_r in (100.0, 500.0, 900.0):
                alloc = PowerAllocation.from_relay_power(p_r, p.p_tot)
                rates = per_sample_rates(mode, s, p, alloc, "A")
                margin = -math.log1p(-p.eps_a) / (p.m * p.theta_a)
                got = effective_capacity(mode, s, p, alloc, "A")
                assert got <= c_over_m * rates.max() + margin + 1e-12

    def test_single_descent_from_peak_in_relay_power(self):
        # exactly one +/- slope flip: one interior peak.  (Tiny dips hug the
        # budget edges where all SNRs collapse and the dispersion term bends
        # the rate model; they never add a second descent.)
        p = SystemParams.reference()
        s = reference_samples(300)
        grid = np.linspace(0.0, p.p_tot, 512)
        for mode, omegas in ((RelayMode.HD, (0.0,)), (RelayMode.FD, (0.01, 0.1, 0.5))):
            for om in omegas:
                q = p.with_(omega=om)
                vals = np.array(
                    [
                        effective_capacity(
                            mode, s, q, PowerAllocation.from_relay_power(float(x), q.p_tot), "A"
                        )
                        for x in grid
                    ]
                )
                d = np.diff(vals)
                signs = np.sign(d[np.abs(d) > 1e-13 * max(1.0, float(np.max(np.abs(vals))))])
                down = int(np.sum((signs[:-1] > 0) & (signs[1:] < 0)))
                assert down == 1, (mode, om)
                assert 0 < int(np.argmax(vals)) < grid.size - 1

    def test_hd_rate_blocklength_switch(self):
        s = reference_samples(200)
        alloc = PowerAllocation.from_relay_power(400.0, 1000.0)
        half = SystemParams.reference()
        full = SystemParams.reference(hd_rate_blocklength="m")
        r_half = per_sample_rates(RelayMode.HD, s, half, alloc, "A")
        r_full = per_sample_rates(RelayMode.HD, s, full, alloc, "A")
        assert not np.allclose(r_half, r_full)
        # larger blocklength means a smaller dispersion penalty
        assert np.all(r_full >= r_half)
        # the switch must not touch FD
        assert np.array_equal(
            per_sample_rates(RelayMode.FD, s, half, alloc, "A"),
            per_sample_rates(RelayMode.FD, s, full, alloc, "A"),
        )

    def test_empty_sample_set_unconstructible(self):
        with pytest.raises(ValueError):
            ChannelSamples(h_a=np.array([]), h_b=np.array([]))


class TestWeightedObjective:
    def test_pure_node_weights(self):
        s = reference_samples(300)
        alloc = PowerAllocation.from_relay_power(350.0, 1000.0)
        for mode in RelayMode:
            p1 = SystemParams.reference(w=1.0)
            assert weighted_objective_exact(mode, s, p1, alloc) == -effective_capacity(
                mode, s, p1, alloc, "A"
            )
            p0 = SystemParams.reference(w=0.0)
            assert weighted_objective_exact(mode, s, p0, alloc) == -effective_capacity(
                mode, s, p0, alloc, "B"
            )

    def test_identity_with_capacities(self):
        s = reference_samples(400)
        for mode in RelayMode:
            for w in (0.0, 0.3, 0.5, 0.9, 1.0):
                p = SystemParams.reference(w=w)
                for p_r in (50.0, 400.0, 950.0):
                    alloc = PowerAllocation.from_relay_power(p_r, p.p_tot)
                    j = weighted_objective_exact(mode, s, p, alloc)
                    ea = effective_capacity(mode, s, p, alloc, "A")
                    eb = effective_capacity(mode, s, p, alloc, "B")
                    assert abs(j + w * ea + (1.0 - w) * eb) <= 1e-12


class TestSurrogateObjective:
    def test_single_sample(self):
        p = SystemParams.reference(w=0.3)
        s = ChannelSamples(h_a=np.array([2.0]), h_b=np.array([5.0]))
        alloc = PowerAllocation.from_relay_power(400.0, p.p_tot)
        r_a = per_sample_rates(RelayMode.HD, s, p, alloc, "A")[0]
        r_b = per_sample_rates(RelayMode.HD, s, p, alloc, "B")[0]
        want = -(0.3 / 2.0) * r_a - (0.7 / 2.0) * r_b
        assert surrogate_objective(RelayMode.HD, s, p, alloc) == pytest.approx(want, rel=1e-12)

    def test_zero_relay_power_single_node(self):
        p = SystemParams.reference(w=1.0)
        s = reference_samples(200)
        alloc = PowerAllocation.from_relay_power(0.0, p.p_tot)
        r0 = fbl_rate(0.0, p.m / 2.0, p.eps_a)
        assert surrogate_objective(RelayMode.HD, s, p, alloc) == pytest.approx(-0.5 * r0, rel=1e-12)

    def test_matches_loop_oracle(self):
        p = SystemParams.reference(w=0.4)
        s = reference_samples(1000)
        for mode in RelayMode:
            alloc = PowerAllocation.from_relay_power(420.0, p.p_tot)
            r_a = per_sample_rates(mode, s, p, alloc, "A")
            r_b = per_sample_rates(mode, s, p, alloc, "B")
            best = max(
                -(p.w / 2.0) * ra - ((1.0 - p.w) / 2.0) * rb for ra, rb in zip(r_a, r_b)
            )
            assert surrogate_objective(mode, s, p, alloc) == pytest.approx(best, rel=1e-12)


class TestEcPoint:
    def test_weighted_sum(self):
        p = SystemParams.reference()
        s = reference_samples(100)
        pt = ec_point(RelayMode.HD, s, p, PowerAllocation.from_relay_power(300.0, p.p_tot))
        assert pt.weighted_sum(1.0) == pt.r_ea
        assert pt.weighted_sum(0.0) == pt.r_eb
        assert pt.weighted_sum(0.5) == pytest.approx(0.5 * (pt.r_ea + pt.r_eb))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            from relayec import EcPoint

            EcPoint(r_ea=float("nan"), r_eb=1.0, alloc=PowerAllocation(1.0, 1.0))
