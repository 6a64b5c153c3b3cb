"""Shared domain types, unit conventions, and config validation.

Everything is strict SI internally: W, Hz, s, J, bits, cycles. Human units
(dBm, MHz, ms, GHz) exist only in the external config file and are converted
once at parse time (see :mod:`goalsim.config`).

Unreachable delays and energies (CPU availability drawn as zero, zero
received power) are represented by the ``INFINITE`` sentinel, i.e. IEEE
+inf: it is distinct from every finite value and arithmetic on it
saturates (``INFINITE + x == INFINITE``, ``max(INFINITE, x) == INFINITE``).
Code never forms ``0 * INFINITE``; the zero cases are branched explicitly.

All types are immutable after construction and safe to share read-only
across concurrent trial workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

INFINITE = math.inf

#: Relative slack used when comparing a realized total delay against the
#: deadline, so that exact-meet plans (delay reconstructed from an inverted
#: power) are not pushed into outage by the last ulp of the round trip.
DEADLINE_REL_EPS = 1e-9


class PlanMode(Enum):
    """How one inference request is executed."""

    STANDALONE_PRIMARY = "standalone_primary"
    STANDALONE_HELPER = "standalone_helper"
    COOPERATIVE = "cooperative"


@dataclass(frozen=True)
class RadioConfig:
    """Link-budget inputs for the device uplink."""

    carrier_freq: float = 3.5e9          # Hz
    bandwidth: float = 10e6              # Hz, uplink bandwidth of this device
    noise_psd: float = 10 ** (-20.4)     # W/Hz (-174 dBm/Hz)
    p_max: float = 0.1                   # W (20 dBm)
    n_bits: int = 24576                  # bits per uploaded pattern (32x32x3 bytes)
    ber_target: float = 1e-3
    cell_radius: float = 150.0           # m
    min_distance: float = 10.0           # m, keeps path loss out of the near field
    # Path loss in dB: a + b*log10(d_m) + c*log10(f_GHz).
    # Defaults are the urban-microcell line-of-sight triple.
    pathloss_a: float = 32.4
    pathloss_b: float = 21.0
    pathloss_c: float = 20.0
    fading: str = "rayleigh"             # "rayleigh" | "none" (unit power gain)
    fixed_distance: Optional[float] = None  # m; overrides disk sampling when set


@dataclass(frozen=True)
class ChannelDraw:
    """One sampled uplink channel realization.

    ``h`` is the linear power gain 10^(-pathloss_db/10) * fading_power_gain.
    """

    distance: float            # m
    pathloss_db: float         # dB
    fading_power_gain: float   # dimensionless, Exp(1) under Rayleigh fading
    h: float                   # dimensionless linear power gain


@dataclass(frozen=True)
class MehConfig:
    """One MEC host: CPU capacity, allocation, availability law, workload."""

    f_max: float = 4.5e9             # cycles/s
    kappa: float = 1e-27             # J*s^2/cycles^3, effective switched capacitance
    alpha: float = 1.0               # CPU fraction allocated to this device
    beta_max: float = 1.0            # upper bound of the availability fraction
    beta_deterministic: bool = False  # True: beta == beta_max every trial
    workload_cycles: float = 2e8     # cycles per inference request


@dataclass(frozen=True)
class CpuDraw:
    """Sampled availability and the resulting allocated CPU rate."""

    beta: float   # in [0, beta_max]
    f: float      # cycles/s, equal to alpha * beta * f_max


@dataclass(frozen=True)
class GoalSpec:
    """Goal requirement: the end-to-end deadline."""

    d_max: float = 0.1  # s


@dataclass(frozen=True)
class BackhaulConfig:
    """Wired link between primary and helper MEH."""

    rtt: float = 0.0            # s, fixed round-trip time
    helper_present: bool = True


@dataclass(frozen=True)
class SyntheticOracleParams:
    """Parameters of the synthetic two-classifier correctness model.

    Clean marginal accuracies and the joint both-correct probability define
    a 2x2 joint law; ``tie_gain`` is the probability that aggregation wins
    when the two classifiers disagree. Accuracy degrades linearly in
    log10(BER) between ``ber_knee`` and ``ber_floor``, from the clean value
    down to ``chance_level``. Setting ``ber_knee == ber_floor`` turns the
    degradation into a step (effectively BER-independent below the knee).
    """

    a_p_clean: float = 0.88
    a_h_clean: float = 0.88
    joint_clean: float = 0.82
    tie_gain: float = 0.5
    ber_knee: float = 1e-3
    ber_floor: float = 1e-1
    chance_level: float = 0.1


@dataclass(frozen=True)
class OracleConfig:
    """Selects the inference oracle backing a campaign."""

    kind: str = "synthetic"      # "synthetic" | "empirical"
    synthetic: SyntheticOracleParams = field(default_factory=SyntheticOracleParams)
    manifest: Optional[str] = None  # score-table manifest path (empirical only)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full scenario: topology, goal, oracle, campaign controls."""

    radio: RadioConfig = field(default_factory=RadioConfig)
    primary: MehConfig = field(default_factory=MehConfig)
    helper: Optional[MehConfig] = field(default_factory=MehConfig)
    backhaul: BackhaulConfig = field(default_factory=BackhaulConfig)
    goal: GoalSpec = field(default_factory=GoalSpec)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    mode: str = "standalone"     # "standalone" | "ensemble"
    num_devices: int = 1         # K; bandwidth and alpha are split evenly
    trials: int = 100_000
    seed: int = 1


@dataclass(frozen=True)
class Violation:
    """One invariant violation: a config field path plus a message."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _check_meh(prefix: str, meh: MehConfig, out: list[Violation]) -> None:
    if not meh.f_max > 0:
        out.append(Violation(f"{prefix}.f_max", "must be > 0"))
    if not meh.kappa > 0:
        out.append(Violation(f"{prefix}.kappa", "must be > 0"))
    if not 0 < meh.alpha <= 1:
        out.append(Violation(f"{prefix}.alpha", "must be in (0, 1]"))
    if not 0 < meh.beta_max <= 1:
        out.append(Violation(f"{prefix}.beta_max", "must be in (0, 1]"))
    if not meh.workload_cycles >= 1:
        out.append(Violation(f"{prefix}.workload_cycles", "must be >= 1"))


def _check_oracle(oracle: OracleConfig, out: list[Violation]) -> None:
    if oracle.kind not in ("synthetic", "empirical"):
        out.append(Violation("oracle.kind", "must be 'synthetic' or 'empirical'"))
        return
    if oracle.kind == "empirical":
        if not oracle.manifest:
            out.append(Violation("oracle.manifest", "required for the empirical oracle"))
        return
    p = oracle.synthetic
    if not 0 <= p.a_p_clean <= 1:
        out.append(Violation("oracle.a_p_clean", "must be in [0, 1]"))
    if not 0 <= p.a_h_clean <= 1:
        out.append(Violation("oracle.a_h_clean", "must be in [0, 1]"))
    lo = max(0.0, p.a_p_clean + p.a_h_clean - 1.0)
    hi = min(p.a_p_clean, p.a_h_clean)
    if not lo <= p.joint_clean <= hi:
        out.append(Violation(
            "oracle.joint_clean",
            f"must lie in the Frechet interval [{lo:.6g}, {hi:.6g}]"))
    if not 0 <= p.tie_gain <= 1:
        out.append(Violation("oracle.tie_gain", "must be in [0, 1]"))
    if not p.ber_knee > 0:
        out.append(Violation("oracle.ber_knee", "must be > 0"))
    # Equality switches degradation off below the knee (step model).
    if not p.ber_knee <= p.ber_floor:
        out.append(Violation("oracle.ber_knee", "must be <= ber_floor"))
    if not 0 < p.chance_level < 1:
        out.append(Violation("oracle.chance_level", "must be in (0, 1)"))


def validate(config: ScenarioConfig) -> list[Violation]:
    """Check every invariant; return all violations (empty list = valid).

    Pure: the same config always yields the same list, and violations are
    data, not exceptions.
    """
    out: list[Violation] = []
    r = config.radio
    if not r.carrier_freq > 0:
        out.append(Violation("radio.carrier_freq", "must be > 0"))
    if not r.bandwidth > 0:
        out.append(Violation("radio.bandwidth", "must be > 0"))
    if not r.noise_psd > 0:
        out.append(Violation("radio.noise_psd", "must be > 0"))
    if not r.p_max > 0:
        out.append(Violation("radio.p_max", "must be > 0"))
    if not (isinstance(r.n_bits, int) and r.n_bits >= 1):
        out.append(Violation("radio.n_bits", "must be an integer >= 1"))
    if not 0 < r.ber_target <= 0.1:
        out.append(Violation("radio.ber_target", "must be in (0, 0.1]"))
    if not 0 < r.min_distance < r.cell_radius:
        out.append(Violation("radio.min_distance", "must satisfy 0 < min_distance < cell_radius"))
    if r.fading not in ("rayleigh", "none"):
        out.append(Violation("radio.fading", "must be 'rayleigh' or 'none'"))
    if r.fixed_distance is not None and not (
            r.min_distance <= r.fixed_distance <= r.cell_radius):
        out.append(Violation("radio.fixed_distance", "must lie in [min_distance, cell_radius]"))

    _check_meh("primary", config.primary, out)
    if config.helper is not None:
        _check_meh("helper", config.helper, out)

    if not config.backhaul.rtt >= 0:
        out.append(Violation("backhaul.rtt", "must be >= 0"))
    if config.backhaul.helper_present and config.helper is None:
        out.append(Violation("backhaul.helper_present", "helper config missing"))

    if not config.goal.d_max > 0:
        out.append(Violation("goal.d_max", "must be > 0"))

    if config.mode not in ("standalone", "ensemble"):
        out.append(Violation("mode", "must be 'standalone' or 'ensemble'"))
    elif config.mode == "ensemble" and (
            config.helper is None or not config.backhaul.helper_present):
        out.append(Violation("mode", "ensemble mode requires a present helper MEH"))

    if not config.num_devices >= 1:
        out.append(Violation("num_devices", "must be >= 1"))
    if not config.trials >= 1:
        out.append(Violation("trials", "must be >= 1"))
    if not (isinstance(config.seed, int) and 0 <= config.seed < 2 ** 64):
        out.append(Violation("seed", "must be a 64-bit unsigned integer"))

    _check_oracle(config.oracle, out)
    return out
