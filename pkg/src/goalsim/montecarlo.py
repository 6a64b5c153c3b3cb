"""Campaign engine: reproducible trials, effectiveness estimation, sweeps.

Randomness is split into independent per-dimension streams (channel,
availability per MEH, oracle), each seeded by hashing (campaign seed,
dimension tag) through numpy's SeedSequence. Trial i consumes draw i of
each stream, so results depend only on (seed, config): neither worker
count nor execution order can change a single bit of the output, and a
swept parameter that does not affect sampling leaves every draw unchanged
(common random numbers across sweep points).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy import stats as _scipy_stats

from .compute import cpu_draw_from_beta, draw_betas
from .config import ConfigError, load_config  # noqa: F401  (re-exported for callers)
from .inference import EmpiricalOracle, SyntheticOracle, load_score_tables
from .policy import PlanMode, evaluate_trial, plan_ensemble, plan_standalone
from .policy import _evaluate_core
from .radio import draw_channels
from .types import ScenarioConfig, Violation, validate

_DIM_CHANNEL = 101
_DIM_BETA_PRIMARY = 102
_DIM_BETA_HELPER = 103
_DIM_ORACLE = 104


@dataclass(frozen=True)
class CampaignStats:
    """Aggregates of one campaign; energies are per request, in joules."""

    trials: int
    mode: str
    effectiveness: float
    effectiveness_ci95: tuple[float, float]
    mean_device_energy: float
    mean_device_energy_goal_met: float   # NaN when no trial met the goal
    mean_mec_energy: float
    delay_outage_rate: float
    inference_outage_rate: float
    best_effort_rate: float
    cooperative_rate: float
    energy_cap_rate: float
    branch_ambiguous_rate: float


@dataclass(frozen=True)
class TrialTable:
    """Per-trial arrays of a campaign, index-aligned with the trial count."""

    d_u: np.ndarray
    d_c: np.ndarray
    d_tot: np.ndarray
    e_device: np.ndarray
    e_meh_p: np.ndarray
    e_meh_h: np.ndarray
    theta_agg: np.ndarray
    goal_met: np.ndarray
    delay_outage: np.ndarray
    inference_outage: np.ndarray
    best_effort: np.ndarray
    cooperative: np.ndarray
    energy_capped: np.ndarray
    branch_ambiguous: np.ndarray
    p_tx: np.ndarray
    target_uplink_delay: np.ndarray
    distance: np.ndarray
    fading: np.ndarray
    h: np.ndarray
    beta_p: np.ndarray
    beta_h: Optional[np.ndarray]


@dataclass(frozen=True)
class SweepSpec:
    """One swept config parameter crossed with one or more planning modes."""

    parameter: str
    values: tuple[float, ...]
    modes: tuple[str, ...] = ("standalone",)


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    mode: str
    stats: CampaignStats


def dimension_stream(seed: int, tag: int) -> np.random.Generator:
    """Independent generator for one sampling dimension of a campaign."""
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, tag)))


def binomial_ci95(successes: int, n: int,
                  method: str = "normal") -> tuple[float, float]:
    """95% CI for a Bernoulli mean: normal approximation by default,
    exact Clopper-Pearson behind the flag (useful at small n)."""
    p = successes / n
    if method == "normal":
        half = 1.96 * math.sqrt(p * (1.0 - p) / n)
        return max(0.0, p - half), min(1.0, p + half)
    if method == "clopper-pearson":
        lo = 0.0 if successes == 0 else float(
            _scipy_stats.beta.ppf(0.025, successes, n - successes + 1))
        hi = 1.0 if successes == n else float(
            _scipy_stats.beta.ppf(0.975, successes + 1, n - successes))
        return lo, hi
    raise ValueError(f"unknown CI method {method!r}")


def _effective_config(config: ScenarioConfig) -> ScenarioConfig:
    """Apply the static K-device split: bandwidth B/K and CPU share alpha/K."""
    k = config.num_devices
    if k == 1:
        return config
    radio = replace(config.radio, bandwidth=config.radio.bandwidth / k)
    primary = replace(config.primary, alpha=config.primary.alpha / k)
    helper = None if config.helper is None else replace(
        config.helper, alpha=config.helper.alpha / k)
    return replace(config, radio=radio, primary=primary, helper=helper)


def build_oracle(config: ScenarioConfig):
    if config.oracle.kind == "empirical":
        table_p, table_h = load_score_tables(config.oracle.manifest)
        return EmpiricalOracle(table_p, table_h)
    return SyntheticOracle(config.oracle.synthetic)


def run_campaign(config: ScenarioConfig, *, workers: int = 1,
                 return_trials: bool = False,
                 ci_method: str = "normal"):
    """Run config.trials independent trials and aggregate.

    Returns CampaignStats, or (CampaignStats, TrialTable) when
    ``return_trials`` is set. Bit-identical for a fixed (seed, config)
    whatever ``workers`` is: draws are made upfront per dimension and
    reduced in trial order.
    """
    violations = validate(config)
    if violations:
        raise ConfigError(violations)
    oracle = build_oracle(config)
    cfg = _effective_config(config)
    radio, primary, helper = cfg.radio, cfg.primary, cfg.helper
    backhaul, goal = cfg.backhaul, cfg.goal
    ensemble = cfg.mode == "ensemble"
    n = cfg.trials

    distance, _, fading, h_arr = draw_channels(
        dimension_stream(cfg.seed, _DIM_CHANNEL), radio, n)
    beta_p = draw_betas(dimension_stream(cfg.seed, _DIM_BETA_PRIMARY), primary, n)
    beta_h = None
    if helper is not None:
        beta_h = draw_betas(dimension_stream(cfg.seed, _DIM_BETA_HELPER), helper, n)
    oracle_u = dimension_stream(cfg.seed, _DIM_ORACLE).uniform(size=(n, 2))

    d_u = np.empty(n)
    d_c = np.empty(n)
    d_tot = np.empty(n)
    e_device = np.empty(n)
    e_meh_p = np.empty(n)
    e_meh_h = np.empty(n)
    theta_agg = np.empty(n, dtype=np.int8)
    goal_met = np.empty(n, dtype=bool)
    delay_outage = np.empty(n, dtype=bool)
    inference_outage = np.empty(n, dtype=bool)
    best_effort = np.empty(n, dtype=bool)
    cooperative = np.empty(n, dtype=bool)
    energy_capped = np.empty(n, dtype=bool)
    branch_ambiguous = np.empty(n, dtype=bool)
    p_tx = np.empty(n)
    target = np.empty(n)

    workloads = (primary.workload_cycles,
                 helper.workload_cycles if helper is not None else 0.0)

    def run_range(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            draw_p = cpu_draw_from_beta(primary, float(beta_p[i]))
            draw_h = None
            if beta_h is not None:
                draw_h = cpu_draw_from_beta(helper, float(beta_h[i]))
            if ensemble:
                plan = plan_ensemble(radio, float(h_arr[i]), draw_p, draw_h,
                                     workloads, backhaul, goal)
            else:
                plan = plan_standalone(radio, float(h_arr[i]), draw_p,
                                       primary.workload_cycles, goal)
            outcome = oracle.sample_from_uniforms(
                float(oracle_u[i, 0]), float(oracle_u[i, 1]),
                radio.ber_target, plan.mode)
            t = _evaluate_core(plan, radio, primary, helper, float(h_arr[i]),
                               draw_p, draw_h, backhaul, goal, outcome)
            d_u[i] = t.d_u
            d_c[i] = t.d_c
            d_tot[i] = t.d_tot
            e_device[i] = t.e_device
            e_meh_p[i] = t.e_meh_p
            e_meh_h[i] = t.e_meh_h
            theta_agg[i] = t.outcome.theta_agg
            goal_met[i] = t.goal_met
            delay_outage[i] = t.delay_outage
            inference_outage[i] = t.inference_outage
            best_effort[i] = t.best_effort
            cooperative[i] = t.mode is PlanMode.COOPERATIVE
            energy_capped[i] = t.energy_capped
            branch_ambiguous[i] = t.branch_ambiguous
            p_tx[i] = plan.p_tx
            target[i] = plan.target_uplink_delay

    if workers <= 1:
        run_range(0, n)
    else:
        bounds = np.linspace(0, n, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda k: run_range(bounds[k], bounds[k + 1]),
                          range(workers)))

    met = int(goal_met.sum())
    stats = CampaignStats(
        trials=n,
        mode=cfg.mode,
        effectiveness=met / n,
        effectiveness_ci95=binomial_ci95(met, n, ci_method),
        mean_device_energy=float(e_device.mean()),
        mean_device_energy_goal_met=(
            float(e_device[goal_met].mean()) if met else float("nan")),
        mean_mec_energy=float((e_meh_p + e_meh_h).mean()),
        delay_outage_rate=float(delay_outage.mean()),
        inference_outage_rate=float(inference_outage.mean()),
        best_effort_rate=float(best_effort.mean()),
        cooperative_rate=float(cooperative.mean()),
        energy_cap_rate=float(energy_capped.mean()),
        branch_ambiguous_rate=float(branch_ambiguous.mean()),
    )
    if not return_trials:
        return stats
    table = TrialTable(d_u=d_u, d_c=d_c, d_tot=d_tot, e_device=e_device,
                       e_meh_p=e_meh_p, e_meh_h=e_meh_h, theta_agg=theta_agg,
                       goal_met=goal_met, delay_outage=delay_outage,
                       inference_outage=inference_outage,
                       best_effort=best_effort, cooperative=cooperative,
                       energy_capped=energy_capped,
                       branch_ambiguous=branch_ambiguous, p_tx=p_tx,
                       target_uplink_delay=target, distance=distance,
                       fading=fading, h=h_arr, beta_p=beta_p, beta_h=beta_h)
    return stats, table


def derive_sweep_seed(master_seed: int, value_index: int, mode_index: int) -> int:
    """Decorrelated per-(value, mode) campaign seed for non-CRN sweeps."""
    ss = np.random.SeedSequence(entropy=(master_seed, value_index, mode_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_sweep(base_config: ScenarioConfig, sweep: SweepSpec, *,
              workers: int = 1, crn: bool = True) -> list[SweepRow]:
    """One campaign per (value, mode), in sweep order.

    With ``crn`` (the default) every campaign reuses the base seed, so
    draws are common across sweep points wherever the swept parameter does
    not affect sampling; disable it to decorrelate points instead.
    """
    from .config import resolve_parameter, set_parameter

    if not sweep.values:
        raise ValueError("sweep value list is empty")
    for mode in sweep.modes:
        if mode not in ("standalone", "ensemble"):
            raise ValueError(f"unknown sweep mode {mode!r}")
    resolve_parameter(base_config, sweep.parameter)  # fail before any run

    rows: list[SweepRow] = []
    for vi, value in enumerate(sweep.values):
        for mi, mode in enumerate(sweep.modes):
            cfg = set_parameter(base_config, sweep.parameter, value)
            cfg = replace(cfg, mode=mode)
            if not crn:
                cfg = replace(cfg, seed=derive_sweep_seed(base_config.seed, vi, mi))
            stats = run_campaign(cfg, workers=workers)
            rows.append(SweepRow(parameter=sweep.parameter, value=value,
                                 mode=mode, stats=stats))
    return rows
