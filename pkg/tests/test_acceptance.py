"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest -s tests/test_acceptance.py -v`` to see one PASS/FAIL
line per criterion.
"""

import dataclasses
import math
from contextlib import contextmanager

import numpy as np

from goalsim import (
    BackhaulConfig,
    MehConfig,
    OracleConfig,
    RadioConfig,
    ScenarioConfig,
    SyntheticOracleParams,
    ber_margin,
    invert_power,
    run_campaign,
    uplink_delay,
)
from goalsim.compute import draw_betas
from goalsim.radio import draw_channels


@contextmanager
def criterion(label):
    try:
        yield
    except Exception:
        print(f"\n[ACCEPTANCE] {label}: FAIL")
        raise
    print(f"\n[ACCEPTANCE] {label}: PASS")


def with_ber(config, ber):
    return dataclasses.replace(
        config, radio=dataclasses.replace(config.radio, ber_target=ber))


def test_criterion_1_ber_margin_values():
    with criterion("1 BER-margin values"):
        assert abs(ber_margin(1e-3, 6.0).phi - 0.283109) <= 1e-6
        assert abs(ber_margin(1e-4, 6.0).phi - 0.197345) <= 1e-6
        assert abs(ber_margin(1e-3, 1.0).phi - 0.197345) <= 1e-6


def test_criterion_2_device_energy_reduction():
    with criterion("2 analytic 23% device-energy reduction"):
        analytic = math.log(5e-4) / math.log(5e-5)
        assert abs(analytic - 0.767463) <= 1e-4
        assert abs((1.0 - analytic) - 0.2325) <= 1e-3

        # analytically: fixed target, low-SE branch, no clamping
        radio3 = RadioConfig(ber_target=1e-3)
        radio4 = RadioConfig(ber_target=1e-4)
        h, target = 1e-9, 5e-3
        p3, c3 = invert_power(radio3, h, target)
        p4, c4 = invert_power(radio4, h, target)
        assert not c3 and not c4
        assert abs(p3 / p4 - analytic) <= 1e-4

        # and by campaign: same draws at both BERs, restricted to trials
        # that are exact-meet, unclamped, low-branch at both BERs
        base = ScenarioConfig(trials=10_000)
        _, t3 = run_campaign(with_ber(base, 1e-3), return_trials=True)
        _, t4 = run_campaign(with_ber(base, 1e-4), return_trials=True)
        feasible = (~t3.best_effort) & (~t4.best_effort) \
            & (~t3.branch_ambiguous) & (~t4.branch_ambiguous)
        se_req = base.radio.n_bits / (
            base.radio.bandwidth * np.where(feasible, t3.target_uplink_delay, 1.0))
        mask = feasible & (se_req < 4.0)
        assert mask.sum() > 1000
        measured = t3.e_device[mask].mean() / t4.e_device[mask].mean()
        assert abs(measured - analytic) <= 0.005


def test_criterion_3_effectiveness_plateau():
    with criterion("3 effectiveness plateau across the reliability decade"):
        base = ScenarioConfig(trials=100_000)
        s3 = run_campaign(with_ber(base, 1e-3))
        s4 = run_campaign(with_ber(base, 1e-4))
        assert abs(s3.effectiveness - s4.effectiveness) < 0.01
        # device energy of goal-met requests drops by >= 15% when the BER
        # requirement is relaxed by a decade
        drop = 1.0 - s3.mean_device_energy_goal_met / s4.mean_device_energy_goal_met
        assert drop >= 0.15


def test_criterion_4_mec_energy_ordering():
    with criterion("4 MEC-side energy ordering of ensemble vs standalone"):
        # energy model in isolation at 1e6 draws: two MEHs at beta_max=1/2
        # consume half of one MEH at beta_max=1
        rng = np.random.default_rng(1001)
        half, full = MehConfig(beta_max=0.5), MehConfig(beta_max=1.0)

        def mean_e(meh, n):
            f = meh.alpha * draw_betas(rng, meh, n) * meh.f_max
            return (meh.kappa * f * f * meh.workload_cycles).mean()

        ratio = 2.0 * mean_e(half, 1_000_000) / mean_e(full, 1_000_000)
        assert abs(ratio / 0.5 - 1.0) <= 0.02

        # full campaigns, rtt = 0 and a relaxed deadline so cooperation is
        # always feasible
        relaxed = ScenarioConfig(goal=dataclasses.replace(
            ScenarioConfig().goal, d_max=10.0), trials=100_000)
        ens_half = dataclasses.replace(relaxed, mode="ensemble",
                                       primary=MehConfig(beta_max=0.5),
                                       helper=MehConfig(beta_max=0.5))
        sta_full = dataclasses.replace(relaxed, mode="standalone",
                                       primary=MehConfig(beta_max=1.0))
        r = run_campaign(ens_half).mean_mec_energy / \
            run_campaign(sta_full).mean_mec_energy
        assert abs(r / 0.5 - 1.0) <= 0.10

        # ensemble at quarter availability vs the deterministic standalone
        # benchmark: ratio 2*(0.25^2/3) = 1/24
        ens_quarter = dataclasses.replace(relaxed, mode="ensemble",
                                          primary=MehConfig(beta_max=0.25),
                                          helper=MehConfig(beta_max=0.25))
        sta_det = dataclasses.replace(relaxed, mode="standalone",
                                      primary=MehConfig(beta_max=1.0,
                                                        beta_deterministic=True))
        r = run_campaign(ens_quarter).mean_mec_energy / \
            run_campaign(sta_det).mean_mec_energy
        assert abs(r * 24.0 - 1.0) <= 0.15


def test_criterion_5_backhaul_sensitivity():
    with criterion("5 backhaul sensitivity of the ensemble"):
        base = ScenarioConfig(trials=100_000, mode="ensemble")
        d_max = base.goal.d_max
        stats = []
        for rtt in (0.0, 0.25 * d_max, 0.75 * d_max):
            cfg = dataclasses.replace(
                base, backhaul=BackhaulConfig(rtt=rtt, helper_present=True))
            stats.append(run_campaign(cfg))
        effs = [s.effectiveness for s in stats]
        assert effs[0] >= effs[1] >= effs[2]
        assert stats[2].cooperative_rate <= 0.5 * stats[0].cooperative_rate


def test_criterion_6_property_suites():
    with criterion("6a power inversion round trip"):
        rng = np.random.default_rng(2024)
        radio = RadioConfig()
        checked = 0
        while checked < 10_000:
            h = 10.0 ** rng.uniform(-12, -6)
            se_req = rng.uniform(0.05, 3.4) if rng.uniform() < 0.5 \
                else rng.uniform(4.6, 20.0)
            target = radio.n_bits / (radio.bandwidth * se_req)
            p, clamped = invert_power(radio, h, target)
            if clamped:
                continue
            realized = uplink_delay(radio, h, p).delay
            assert abs(realized - target) <= 1e-9 * target
            checked += 1

    with criterion("6b exact-meet plans land on the deadline"):
        cfg = ScenarioConfig(trials=20_000)
        _, table = run_campaign(cfg, return_trials=True)
        exact = (~table.best_effort) & (~table.branch_ambiguous)
        assert exact.sum() > 5000
        err = np.abs(table.d_tot[exact] - cfg.goal.d_max) / cfg.goal.d_max
        assert err.max() < 1e-9
        # ambiguous-branch trials may only land early, never late
        early = (~table.best_effort) & table.branch_ambiguous
        assert np.all(table.d_tot[early] <= cfg.goal.d_max * (1 + 1e-9))

    with criterion("6c goal event is the outage conjunction on every trial"):
        cfg = ScenarioConfig(trials=20_000, mode="ensemble",
                             backhaul=BackhaulConfig(rtt=0.02))
        _, table = run_campaign(cfg, return_trials=True)
        assert np.array_equal(table.goal_met,
                              ~table.delay_outage & ~table.inference_outage)

    with criterion("6d sampling moments (fading mean, beta second moment)"):
        _, _, fading, _ = draw_channels(np.random.default_rng(55),
                                        RadioConfig(), 1_000_000)
        assert abs(fading.mean() - 1.0) <= 0.005
        for beta_max in (1.0, 0.5):
            betas = draw_betas(np.random.default_rng(56),
                               MehConfig(beta_max=beta_max), 1_000_000)
            expected = beta_max ** 2 / 3.0
            assert abs((betas ** 2).mean() / expected - 1.0) <= 0.01

    with criterion("6e bit-identical campaign stats across worker counts"):
        cfg = ScenarioConfig(trials=20_000, mode="ensemble", seed=99)
        ref = run_campaign(cfg, workers=1)
        assert run_campaign(cfg, workers=4) == ref
        assert run_campaign(cfg, workers=9) == ref


def test_criterion_7_degenerate_oracle_equivalence():
    with criterion("7 degenerate campaign equals the closed-form joint"):
        cfg = ScenarioConfig(
            radio=RadioConfig(fading="none", fixed_distance=50.0),
            primary=MehConfig(beta_deterministic=True),
            helper=MehConfig(beta_deterministic=True),
            backhaul=BackhaulConfig(rtt=0.0),
            oracle=OracleConfig(synthetic=SyntheticOracleParams(
                a_p_clean=0.9, a_h_clean=0.9, joint_clean=0.85, tie_gain=0.5)),
            mode="ensemble",
            trials=100_000,
            seed=4,
        )
        stats = run_campaign(cfg)
        closed_form = 0.85 + 0.5 * (0.9 - 0.85 + 0.9 - 0.85)
        stderr = math.sqrt(closed_form * (1 - closed_form) / cfg.trials)
        assert abs(stats.effectiveness - closed_form) <= 4 * stderr
        assert stats.cooperative_rate == 1.0
