"""Monte Carlo simulator of goal-oriented edge inference over a
MEC-assisted wireless network: stochastic channels, stochastic MEH
availability, finite backhaul RTT, standalone and ensemble execution."""

from .config import (
    ConfigError,
    default_config,
    load_config,
    parse_config,
    save_config,
    serialize_config,
)
from .inference import (
    EmpiricalOracle,
    InferenceOutcome,
    ScoreTable,
    ScoreTableError,
    SyntheticOracle,
    degrade_accuracy,
    empirical_sample,
    load_score_tables,
    synthetic_sample,
)
from .montecarlo import (
    CampaignStats,
    SweepRow,
    SweepSpec,
    TrialTable,
    run_campaign,
    run_sweep,
)
from .policy import (
    ExecutionPlan,
    TrialOutcome,
    evaluate_trial,
    plan_ensemble,
    plan_standalone,
)
from .radio import (
    BerMargin,
    Branch,
    UplinkResult,
    ber_margin,
    invert_power,
    pathloss_db,
    sample_channel,
    uplink_delay,
)
from .compute import (
    ComputePlanInput,
    compute_delay_ensemble,
    compute_delay_standalone,
    meh_energy,
    sample_beta,
)
from .types import (
    BackhaulConfig,
    ChannelDraw,
    CpuDraw,
    GoalSpec,
    INFINITE,
    MehConfig,
    OracleConfig,
    PlanMode,
    RadioConfig,
    ScenarioConfig,
    SyntheticOracleParams,
    Violation,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BackhaulConfig", "BerMargin", "Branch", "CampaignStats", "ChannelDraw",
    "ComputePlanInput", "ConfigError", "CpuDraw", "EmpiricalOracle",
    "ExecutionPlan", "GoalSpec", "INFINITE", "InferenceOutcome", "MehConfig",
    "OracleConfig", "PlanMode", "RadioConfig", "ScenarioConfig", "ScoreTable",
    "ScoreTableError", "SweepRow", "SweepSpec", "SyntheticOracle",
    "SyntheticOracleParams", "TrialOutcome", "TrialTable", "UplinkResult",
    "Violation", "ber_margin", "compute_delay_ensemble",
    "compute_delay_standalone", "default_config", "degrade_accuracy",
    "empirical_sample", "evaluate_trial", "invert_power", "load_config",
    "load_score_tables", "meh_energy", "parse_config", "pathloss_db",
    "plan_ensemble", "plan_standalone", "run_campaign", "run_sweep",
    "sample_beta", "sample_channel", "save_config", "serialize_config",
    "synthetic_sample", "uplink_delay", "validate",
]
