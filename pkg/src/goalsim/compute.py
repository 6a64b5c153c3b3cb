"""MEH-side compute model: availability sampling, delays, CPU energy.

The CPU rate actually granted to a device is f = alpha * beta * f_max,
where beta is the availability fraction left over by exogenous
higher-priority load. Executing J cycles at rate f costs kappa * f^2 * J
joules (dynamic CPU energy, quadratic in the clock).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .types import INFINITE, CpuDraw, MehConfig


@dataclass(frozen=True)
class ComputePlanInput:
    """Inputs of the two-branch ensemble compute-delay expression."""

    primary_draw: CpuDraw
    helper_draw: Optional[CpuDraw]
    backhaul_rtt: float        # s
    workload_primary: float    # cycles
    workload_helper: float     # cycles


def cpu_draw_from_beta(meh: MehConfig, beta: float) -> CpuDraw:
    return CpuDraw(beta=beta, f=meh.alpha * beta * meh.f_max)


def draw_betas(rng: np.random.Generator, meh: MehConfig, n: int) -> np.ndarray:
    """Vectorized availability draws: beta_max when deterministic, else
    uniform on [0, beta_max]."""
    if meh.beta_deterministic:
        return np.full(n, meh.beta_max)
    return rng.uniform(0.0, meh.beta_max, size=n)


def sample_beta(rng: np.random.Generator, meh: MehConfig) -> CpuDraw:
    """Draw one availability realization and the allocated CPU rate."""
    beta = float(draw_betas(rng, meh, 1)[0])
    return cpu_draw_from_beta(meh, beta)


def compute_delay_standalone(draw: CpuDraw, workload: float) -> float:
    """Inference compute delay workload / f; INFINITE when f == 0."""
    if workload < 1:
        raise ValueError(f"workload must be >= 1 cycle, got {workload}")
    if draw.f == 0.0:
        return INFINITE
    return workload / draw.f


def compute_delay_ensemble(inp: ComputePlanInput) -> float:
    """Two-branch compute delay: max of the local branch and the forwarded
    branch shifted by the backhaul round trip."""
    if inp.helper_draw is None:
        raise ValueError("ensemble compute delay requires a helper draw")
    d_primary = compute_delay_standalone(inp.primary_draw, inp.workload_primary)
    d_helper = compute_delay_standalone(inp.helper_draw, inp.workload_helper)
    if d_helper == INFINITE:
        return INFINITE
    return max(d_primary, d_helper + inp.backhaul_rtt)


def meh_energy(meh: MehConfig, draw: CpuDraw, workload: float) -> float:
    """CPU energy kappa * f^2 * J for one executed inference; 0 when f == 0."""
    if draw.f == 0.0:
        return 0.0
    return meh.kappa * draw.f * draw.f * workload
