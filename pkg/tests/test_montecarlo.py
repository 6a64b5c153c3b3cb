import dataclasses
import math

import numpy as np
import pytest

from goalsim import (
    BackhaulConfig,
    ConfigError,
    MehConfig,
    RadioConfig,
    ScenarioConfig,
    SweepSpec,
    SyntheticOracleParams,
    OracleConfig,
    run_campaign,
    run_sweep,
)
from goalsim.montecarlo import binomial_ci95, derive_sweep_seed


def degenerate_config(**oracle_kwargs):
    """Fixed channel, deterministic availability: no randomness but the oracle."""
    return ScenarioConfig(
        radio=RadioConfig(fading="none", fixed_distance=50.0),
        primary=MehConfig(beta_deterministic=True),
        helper=MehConfig(beta_deterministic=True),
        backhaul=BackhaulConfig(rtt=0.0),
        oracle=OracleConfig(synthetic=SyntheticOracleParams(**oracle_kwargs)),
        trials=2000,
        seed=3,
    )


def test_perfect_degenerate_campaign_hits_one():
    cfg = degenerate_config(a_p_clean=1.0, a_h_clean=1.0, joint_clean=1.0)
    stats = run_campaign(cfg)
    assert stats.effectiveness == 1.0
    assert stats.effectiveness_ci95 == (1.0, 1.0)
    assert stats.delay_outage_rate == 0.0


def test_guaranteed_delay_outage_gives_zero():
    # beta pinned at a level where compute alone exceeds the deadline
    cfg = dataclasses.replace(
        degenerate_config(a_p_clean=1.0, a_h_clean=1.0, joint_clean=1.0),
        primary=MehConfig(beta_deterministic=True, beta_max=0.3),
        helper=None,
        backhaul=BackhaulConfig(helper_present=False),
    )
    stats = run_campaign(cfg)
    assert stats.effectiveness == 0.0
    assert stats.delay_outage_rate == 1.0
    assert stats.best_effort_rate == 1.0


def test_bernoulli_effectiveness_band():
    # always-feasible plan, oracle below its knee: effectiveness ~ 0.9
    cfg = degenerate_config(a_p_clean=0.9, a_h_clean=0.9, joint_clean=0.85)
    cfg = dataclasses.replace(cfg, trials=100_000)
    stats = run_campaign(cfg)
    assert abs(stats.effectiveness - 0.9) < 0.003


def test_cooperative_closed_form_effectiveness():
    cfg = dataclasses.replace(
        degenerate_config(a_p_clean=0.9, a_h_clean=0.9, joint_clean=0.85,
                          tie_gain=0.5),
        mode="ensemble", trials=100_000)
    stats = run_campaign(cfg)
    p = 0.90  # joint + tie_gain * disagreement mass
    assert abs(stats.effectiveness - p) < 4 * math.sqrt(p * (1 - p) / cfg.trials)
    assert stats.cooperative_rate == 1.0


def test_bit_identical_across_worker_counts():
    cfg = ScenarioConfig(trials=5000, mode="ensemble", seed=77)
    ref = run_campaign(cfg, workers=1)
    for workers in (2, 3, 7):
        assert run_campaign(cfg, workers=workers) == ref


def test_identical_for_same_seed_and_config():
    cfg = ScenarioConfig(trials=3000, seed=5)
    assert run_campaign(cfg) == run_campaign(cfg)
    other = dataclasses.replace(cfg, seed=6)
    assert run_campaign(other) != run_campaign(cfg)


def test_invalid_config_rejected_before_running():
    cfg = dataclasses.replace(ScenarioConfig(), trials=0)
    with pytest.raises(ConfigError):
        run_campaign(cfg)


def test_stats_invariants():
    stats, table = run_campaign(ScenarioConfig(trials=20_000, mode="ensemble",
                                               backhaul=BackhaulConfig(rtt=0.02)),
                                return_trials=True)
    rates = [stats.effectiveness, stats.delay_outage_rate,
             stats.inference_outage_rate, stats.best_effort_rate,
             stats.cooperative_rate, stats.energy_cap_rate,
             stats.branch_ambiguous_rate]
    assert all(0.0 <= r <= 1.0 for r in rates)
    lo, hi = stats.effectiveness_ci95
    assert lo <= stats.effectiveness <= hi
    # conjunction bound on the goal probability
    assert stats.effectiveness <= 1.0 - max(
        0.0, stats.delay_outage_rate + stats.inference_outage_rate - 1.0)
    # per-trial conjunction identity
    assert np.array_equal(table.goal_met,
                          ~table.delay_outage & ~table.inference_outage)
    assert np.all(np.isfinite(table.e_device))


def test_common_random_numbers_across_sweep_points():
    base = ScenarioConfig(trials=2000, mode="ensemble")
    sweep = SweepSpec(parameter="backhaul.rtt", values=(0.0, 0.025, 0.075),
                      modes=("ensemble",))
    tables = []
    for value in sweep.values:
        cfg = dataclasses.replace(
            base, backhaul=BackhaulConfig(rtt=value, helper_present=True))
        _, table = run_campaign(cfg, return_trials=True)
        tables.append(table)
    for other in tables[1:]:
        assert np.array_equal(tables[0].h, other.h)
        assert np.array_equal(tables[0].distance, other.distance)
        assert np.array_equal(tables[0].beta_p, other.beta_p)
        assert np.array_equal(tables[0].beta_h, other.beta_h)


def test_sweep_rows_and_seeding():
    base = ScenarioConfig(trials=500)
    sweep = SweepSpec(parameter="radio.ber_target",
                      values=(1e-4, 3e-4, 1e-3, 3e-3, 1e-2),
                      modes=("standalone", "ensemble"))
    rows = run_sweep(base, sweep)
    assert len(rows) == 10
    assert [r.value for r in rows[:2]] == [1e-4, 1e-4]
    assert {r.mode for r in rows} == {"standalone", "ensemble"}
    # repeat is identical
    again = run_sweep(base, sweep)
    assert rows == again


def test_sweep_rejects_unknown_path():
    with pytest.raises(ValueError, match="unresolvable"):
        run_sweep(ScenarioConfig(trials=10),
                  SweepSpec(parameter="radio.nope", values=(1.0,)))


def test_sweep_without_crn_decorrelates():
    base = ScenarioConfig(trials=500)
    sweep = SweepSpec(parameter="radio.ber_target", values=(1e-3,),
                      modes=("standalone",))
    crn_row = run_sweep(base, sweep)[0]
    free_row = run_sweep(base, sweep, crn=False)[0]
    assert crn_row.stats != free_row.stats
    assert derive_sweep_seed(1, 0, 0) != derive_sweep_seed(1, 1, 0)


def test_multi_device_split():
    # K devices statically split bandwidth and CPU share; effectiveness drops
    one = run_campaign(ScenarioConfig(trials=5000))
    four = run_campaign(ScenarioConfig(trials=5000, num_devices=4))
    assert four.effectiveness < one.effectiveness


def test_binomial_ci_methods():
    lo, hi = binomial_ci95(900, 1000, "normal")
    assert lo < 0.9 < hi
    lo_cp, hi_cp = binomial_ci95(900, 1000, "clopper-pearson")
    assert lo_cp < 0.9 < hi_cp
    assert binomial_ci95(0, 100, "clopper-pearson")[0] == 0.0
    assert binomial_ci95(100, 100, "clopper-pearson")[1] == 1.0
    with pytest.raises(ValueError):
        binomial_ci95(1, 10, "bootstrap")
