"""Central controller: per-trial execution planning and evaluation.

For a standalone request the uplink power is chosen to exactly meet the
deadline after subtracting the compute time; if that is impossible (no
compute budget left, or the inverted power clamps at p_max) the device
falls back to best effort at maximum power.

For an ensemble request, cooperation runs on both MEHs iff the minimum
uplink delay plus the two-branch compute delay fits the deadline; otherwise
the request runs standalone at the MEH with the smaller effective compute
delay, counting the backhaul round trip against the helper.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .compute import (
    ComputePlanInput,
    compute_delay_ensemble,
    compute_delay_standalone,
    meh_energy,
)
from .inference import InferenceOutcome
from .radio import invert_power, uplink_delay
from .types import (
    DEADLINE_REL_EPS,
    BackhaulConfig,
    CpuDraw,
    GoalSpec,
    INFINITE,
    MehConfig,
    PlanMode,
    RadioConfig,
)

#: Device transmit time is charged for at most this many deadlines per
#: trial, so that unbounded deep-fade delays cannot poison energy means;
#: capped trials are flagged.
ENERGY_CAP_DEADLINES = 10.0


@dataclass(frozen=True)
class ExecutionPlan:
    """The controller's decision for one request."""

    mode: PlanMode
    p_tx: float                  # W
    best_effort: bool            # True forces p_tx == p_max
    target_uplink_delay: float   # s; 0 when no uplink budget remains
    executes_primary: bool
    executes_helper: bool


@dataclass(frozen=True)
class TrialOutcome:
    """Everything observed in one Monte Carlo trial."""

    d_u: float
    d_c: float
    d_tot: float
    e_device: float      # J, capped (see ENERGY_CAP_DEADLINES)
    e_meh_p: float       # J; 0 unless the primary executed
    e_meh_h: float       # J; 0 unless the helper executed
    outcome: InferenceOutcome
    goal_met: bool
    delay_outage: bool
    inference_outage: bool
    best_effort: bool
    mode: PlanMode
    energy_capped: bool
    branch_ambiguous: bool


def _plan_single(radio: RadioConfig, h: float, exec_delay: float,
                 goal: GoalSpec, mode: PlanMode,
                 executes_primary: bool, executes_helper: bool) -> ExecutionPlan:
    target = max(0.0, goal.d_max - exec_delay) if exec_delay != INFINITE else 0.0
    if target > 0.0:
        p, clamped = invert_power(radio, h, target)
        if not clamped:
            return ExecutionPlan(mode=mode, p_tx=p, best_effort=False,
                                 target_uplink_delay=target,
                                 executes_primary=executes_primary,
                                 executes_helper=executes_helper)
    return ExecutionPlan(mode=mode, p_tx=radio.p_max, best_effort=True,
                         target_uplink_delay=target,
                         executes_primary=executes_primary,
                         executes_helper=executes_helper)


def plan_standalone(radio: RadioConfig, h: float, cpu_draw: CpuDraw,
                    workload: float, goal: GoalSpec) -> ExecutionPlan:
    """Plan a request served by the primary MEH alone."""
    exec_delay = compute_delay_standalone(cpu_draw, workload)
    return _plan_single(radio, h, exec_delay, goal, PlanMode.STANDALONE_PRIMARY,
                        executes_primary=True, executes_helper=False)


def plan_ensemble(radio: RadioConfig, h: float, primary_draw: CpuDraw,
                  helper_draw: Optional[CpuDraw],
                  workloads: tuple[float, float], backhaul: BackhaulConfig,
                  goal: GoalSpec) -> ExecutionPlan:
    """Plan a request with a helper available: cooperate when feasible,
    else run standalone at the fastest MEH (ties go to the primary)."""
    if helper_draw is None:
        raise ValueError("ensemble planning requires a helper draw")
    w_p, w_h = workloads
    d_u_min = uplink_delay(radio, h, radio.p_max).delay
    d_c_ens = compute_delay_ensemble(ComputePlanInput(
        primary_draw=primary_draw, helper_draw=helper_draw,
        backhaul_rtt=backhaul.rtt, workload_primary=w_p, workload_helper=w_h))
    if d_u_min + d_c_ens <= goal.d_max:
        target = goal.d_max - d_c_ens
        p, clamped = invert_power(radio, h, target)
        # The feasibility check already ran at p_max; a clamp here can only
        # be a branch-boundary rounding artifact, handled as best effort.
        return ExecutionPlan(mode=PlanMode.COOPERATIVE,
                             p_tx=radio.p_max if clamped else p,
                             best_effort=clamped,
                             target_uplink_delay=target,
                             executes_primary=True, executes_helper=True)
    d_eff_p = compute_delay_standalone(primary_draw, w_p)
    d_eff_h = compute_delay_standalone(helper_draw, w_h)
    if d_eff_h != INFINITE:
        d_eff_h += backhaul.rtt
    if d_eff_p <= d_eff_h:
        return _plan_single(radio, h, d_eff_p, goal, PlanMode.STANDALONE_PRIMARY,
                            executes_primary=True, executes_helper=False)
    return _plan_single(radio, h, d_eff_h, goal, PlanMode.STANDALONE_HELPER,
                        executes_primary=False, executes_helper=True)


def _evaluate_core(plan: ExecutionPlan, radio: RadioConfig, primary: MehConfig,
                   helper: Optional[MehConfig], h: float,
                   primary_draw: CpuDraw, helper_draw: Optional[CpuDraw],
                   backhaul: BackhaulConfig, goal: GoalSpec,
                   outcome: InferenceOutcome) -> TrialOutcome:
    ul = uplink_delay(radio, h, plan.p_tx)
    d_u = ul.delay

    if plan.mode is PlanMode.COOPERATIVE:
        d_c = compute_delay_ensemble(ComputePlanInput(
            primary_draw=primary_draw, helper_draw=helper_draw,
            backhaul_rtt=backhaul.rtt,
            workload_primary=primary.workload_cycles,
            workload_helper=helper.workload_cycles))
    elif plan.mode is PlanMode.STANDALONE_PRIMARY:
        d_c = compute_delay_standalone(primary_draw, primary.workload_cycles)
    else:
        d_c = compute_delay_standalone(helper_draw, helper.workload_cycles)
        if d_c != INFINITE:
            d_c += backhaul.rtt

    d_tot = d_u + d_c
    delay_outage = not d_tot <= goal.d_max * (1.0 + DEADLINE_REL_EPS)

    cap = ENERGY_CAP_DEADLINES * goal.d_max
    energy_capped = d_u > cap
    e_device = plan.p_tx * min(d_u, cap)

    e_meh_p = meh_energy(primary, primary_draw, primary.workload_cycles) \
        if plan.executes_primary else 0.0
    e_meh_h = meh_energy(helper, helper_draw, helper.workload_cycles) \
        if plan.executes_helper else 0.0

    inference_outage = outcome.theta_agg == 0
    goal_met = not delay_outage and not inference_outage
    return TrialOutcome(d_u=d_u, d_c=d_c, d_tot=d_tot, e_device=e_device,
                        e_meh_p=e_meh_p, e_meh_h=e_meh_h, outcome=outcome,
                        goal_met=goal_met, delay_outage=delay_outage,
                        inference_outage=inference_outage,
                        best_effort=plan.best_effort, mode=plan.mode,
                        energy_capped=energy_capped,
                        branch_ambiguous=ul.branch_ambiguous)


def evaluate_trial(plan: ExecutionPlan, radio: RadioConfig, primary: MehConfig,
                   helper: Optional[MehConfig], h: float,
                   primary_draw: CpuDraw, helper_draw: Optional[CpuDraw],
                   backhaul: BackhaulConfig, goal: GoalSpec, oracle,
                   rng: np.random.Generator) -> TrialOutcome:
    """Realize delays, energies, and inference values for a planned trial.

    The goal is met iff the effective inference value is 1 and the total
    delay fits the deadline; delay and inference outages are recorded
    independently. MEH energy is charged for every executed inference,
    deadline met or not.
    """
    outcome = oracle.sample(rng, radio.ber_target, plan.mode)
    return _evaluate_core(plan, radio, primary, helper, h, primary_draw,
                          helper_draw, backhaul, goal, outcome)
