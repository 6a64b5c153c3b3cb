"""Config file ingestion: JSON with human units, converted once to SI.

Each numeric field is addressed by a suffixed key naming its unit, e.g.
``p_max_dbm`` or ``p_max_w``; exactly one variant may be present. Unknown
keys are a validation error (catches typos). Serialization always emits the
canonical SI variant, so parse -> serialize -> parse is the identity on
every field.
"""

from __future__ import annotations

import json
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Callable, Optional

from .types import (
    BackhaulConfig,
    GoalSpec,
    MehConfig,
    OracleConfig,
    RadioConfig,
    ScenarioConfig,
    SyntheticOracleParams,
    Violation,
    validate,
)


class ConfigError(Exception):
    """Raised when a config cannot be parsed or fails validation."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


def _identity(x: float) -> float:
    return float(x)


def _dbm_to_w(x: float) -> float:
    return 10.0 ** (float(x) / 10.0) / 1e3


def _mhz_to_hz(x: float) -> float:
    return float(x) * 1e6


def _ghz_to_hz(x: float) -> float:
    return float(x) * 1e9


def _ms_to_s(x: float) -> float:
    return float(x) / 1e3


# field -> {key: converter}; the first key listed is the canonical SI form
# used by serialize_config.
_RADIO_KEYS: dict[str, dict[str, Callable[[float], float]]] = {
    "carrier_freq": {"carrier_freq_hz": _identity, "carrier_freq_ghz": _ghz_to_hz},
    "bandwidth": {"bandwidth_hz": _identity, "bandwidth_mhz": _mhz_to_hz},
    "noise_psd": {"noise_psd_w_per_hz": _identity, "noise_psd_dbm_per_hz": _dbm_to_w},
    "p_max": {"p_max_w": _identity, "p_max_dbm": _dbm_to_w},
    "ber_target": {"ber_target": _identity},
    "cell_radius": {"cell_radius_m": _identity},
    "min_distance": {"min_distance_m": _identity},
    "pathloss_a": {"pathloss_a": _identity},
    "pathloss_b": {"pathloss_b": _identity},
    "pathloss_c": {"pathloss_c": _identity},
}

_MEH_KEYS: dict[str, dict[str, Callable[[float], float]]] = {
    "f_max": {"f_max_hz": _identity, "f_max_ghz": _ghz_to_hz},
    "kappa": {"kappa": _identity},
    "alpha": {"alpha": _identity},
    "beta_max": {"beta_max": _identity},
    "workload_cycles": {"workload_cycles": _identity},
}

_BACKHAUL_KEYS: dict[str, dict[str, Callable[[float], float]]] = {
    "rtt": {"rtt_s": _identity, "rtt_ms": _ms_to_s},
}

_GOAL_KEYS: dict[str, dict[str, Callable[[float], float]]] = {
    "d_max": {"d_max_s": _identity, "d_max_ms": _ms_to_s},
}

_SYNTH_FIELDS = (
    "a_p_clean", "a_h_clean", "joint_clean", "tie_gain",
    "ber_knee", "ber_floor", "chance_level",
)


def _take_numeric(section: str, data: dict, variants: dict[str, dict],
                  out: dict[str, float], violations: list[Violation]) -> set[str]:
    """Pull unit-suffixed numeric fields out of one config section."""
    consumed: set[str] = set()
    for field_name, keys in variants.items():
        present = [k for k in keys if k in data]
        consumed.update(present)
        if len(present) > 1:
            violations.append(Violation(
                f"{section}.{field_name}",
                f"given more than once ({', '.join(sorted(present))})"))
            continue
        if present:
            key = present[0]
            value = data[key]
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                violations.append(Violation(f"{section}.{key}", "must be a number"))
                continue
            out[field_name] = keys[key](value)
    return consumed


def _check_unknown(section: str, data: dict, consumed: set[str],
                   violations: list[Violation]) -> None:
    for key in data:
        if key not in consumed:
            violations.append(Violation(f"{section}.{key}", "unknown key"))


def _parse_radio(data: dict, violations: list[Violation]) -> RadioConfig:
    kwargs: dict[str, Any] = {}
    consumed = _take_numeric("radio", data, _RADIO_KEYS, kwargs, violations)
    if "n_bits" in data:
        consumed.add("n_bits")
        if isinstance(data["n_bits"], int) and not isinstance(data["n_bits"], bool):
            kwargs["n_bits"] = data["n_bits"]
        else:
            violations.append(Violation("radio.n_bits", "must be an integer"))
    if "fading" in data:
        consumed.add("fading")
        kwargs["fading"] = data["fading"]
    if "fixed_distance_m" in data:
        consumed.add("fixed_distance_m")
        v = data["fixed_distance_m"]
        kwargs["fixed_distance"] = None if v is None else float(v)
    _check_unknown("radio", data, consumed, violations)
    return RadioConfig(**kwargs)


def _parse_meh(section: str, data: dict, violations: list[Violation]) -> MehConfig:
    kwargs: dict[str, Any] = {}
    consumed = _take_numeric(section, data, _MEH_KEYS, kwargs, violations)
    if "beta_deterministic" in data:
        consumed.add("beta_deterministic")
        if isinstance(data["beta_deterministic"], bool):
            kwargs["beta_deterministic"] = data["beta_deterministic"]
        else:
            violations.append(Violation(f"{section}.beta_deterministic", "must be a boolean"))
    _check_unknown(section, data, consumed, violations)
    return MehConfig(**kwargs)


def _parse_backhaul(data: dict, violations: list[Violation]) -> BackhaulConfig:
    kwargs: dict[str, Any] = {}
    consumed = _take_numeric("backhaul", data, _BACKHAUL_KEYS, kwargs, violations)
    if "helper_present" in data:
        consumed.add("helper_present")
        if isinstance(data["helper_present"], bool):
            kwargs["helper_present"] = data["helper_present"]
        else:
            violations.append(Violation("backhaul.helper_present", "must be a boolean"))
    _check_unknown("backhaul", data, consumed, violations)
    return BackhaulConfig(**kwargs)


def _parse_goal(data: dict, violations: list[Violation]) -> GoalSpec:
    kwargs: dict[str, float] = {}
    consumed = _take_numeric("goal", data, _GOAL_KEYS, kwargs, violations)
    _check_unknown("goal", data, consumed, violations)
    return GoalSpec(**kwargs)


def _parse_oracle(data: dict, violations: list[Violation]) -> OracleConfig:
    consumed = {"kind"}
    kind = data.get("kind", "synthetic")
    synth_kwargs: dict[str, float] = {}
    manifest: Optional[str] = None
    if kind == "empirical":
        consumed.add("manifest")
        manifest = data.get("manifest")
        if manifest is not None and not isinstance(manifest, str):
            violations.append(Violation("oracle.manifest", "must be a string path"))
            manifest = None
    else:
        for name in _SYNTH_FIELDS:
            if name in data:
                consumed.add(name)
                value = data[name]
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    violations.append(Violation(f"oracle.{name}", "must be a number"))
                else:
                    synth_kwargs[name] = float(value)
    _check_unknown("oracle", data, consumed, violations)
    return OracleConfig(kind=kind, synthetic=SyntheticOracleParams(**synth_kwargs),
                        manifest=manifest)


_TOP_SECTIONS = ("radio", "primary", "helper", "backhaul", "goal", "oracle")
_TOP_SCALARS = ("mode", "num_devices", "trials", "seed")


def parse_config(data: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a parsed JSON document.

    Raises ConfigError on structural problems (unknown keys, wrong types,
    duplicate unit variants). Invariant checks are a separate step; see
    load_config.
    """
    violations: list[Violation] = []
    if not isinstance(data, dict):
        raise ConfigError([Violation("<root>", "config must be a JSON object")])

    for key in data:
        if key not in _TOP_SECTIONS and key not in _TOP_SCALARS:
            violations.append(Violation(key, "unknown key"))

    def section(name: str) -> dict:
        value = data.get(name, {})
        if value is None:
            return {}
        if not isinstance(value, dict):
            violations.append(Violation(name, "must be an object"))
            return {}
        return value

    radio = _parse_radio(section("radio"), violations)
    primary = _parse_meh("primary", section("primary"), violations)
    helper: Optional[MehConfig]
    if "helper" in data and data["helper"] is None:
        helper = None
    else:
        helper = _parse_meh("helper", section("helper"), violations)
    backhaul = _parse_backhaul(section("backhaul"), violations)
    goal = _parse_goal(section("goal"), violations)
    oracle = _parse_oracle(section("oracle"), violations)

    kwargs: dict[str, Any] = {}
    for name in _TOP_SCALARS:
        if name in data:
            kwargs[name] = data[name]
    for name in ("num_devices", "trials", "seed"):
        if name in kwargs and not (isinstance(kwargs[name], int)
                                   and not isinstance(kwargs[name], bool)):
            violations.append(Violation(name, "must be an integer"))
            del kwargs[name]

    if violations:
        raise ConfigError(violations)
    return ScenarioConfig(radio=radio, primary=primary, helper=helper,
                          backhaul=backhaul, goal=goal, oracle=oracle, **kwargs)


def serialize_config(config: ScenarioConfig) -> dict:
    """Emit the canonical SI-unit JSON document for a config."""
    radio = config.radio

    def meh_doc(meh: MehConfig) -> dict:
        return {
            "f_max_hz": meh.f_max,
            "kappa": meh.kappa,
            "alpha": meh.alpha,
            "beta_max": meh.beta_max,
            "beta_deterministic": meh.beta_deterministic,
            "workload_cycles": meh.workload_cycles,
        }

    oracle: dict[str, Any] = {"kind": config.oracle.kind}
    if config.oracle.kind == "empirical":
        oracle["manifest"] = config.oracle.manifest
    else:
        for name in _SYNTH_FIELDS:
            oracle[name] = getattr(config.oracle.synthetic, name)

    return {
        "radio": {
            "carrier_freq_hz": radio.carrier_freq,
            "bandwidth_hz": radio.bandwidth,
            "noise_psd_w_per_hz": radio.noise_psd,
            "p_max_w": radio.p_max,
            "n_bits": radio.n_bits,
            "ber_target": radio.ber_target,
            "cell_radius_m": radio.cell_radius,
            "min_distance_m": radio.min_distance,
            "pathloss_a": radio.pathloss_a,
            "pathloss_b": radio.pathloss_b,
            "pathloss_c": radio.pathloss_c,
            "fading": radio.fading,
            "fixed_distance_m": radio.fixed_distance,
        },
        "primary": meh_doc(config.primary),
        "helper": None if config.helper is None else meh_doc(config.helper),
        "backhaul": {
            "rtt_s": config.backhaul.rtt,
            "helper_present": config.backhaul.helper_present,
        },
        "goal": {"d_max_s": config.goal.d_max},
        "oracle": oracle,
        "mode": config.mode,
        "num_devices": config.num_devices,
        "trials": config.trials,
        "seed": config.seed,
    }


def load_config(path: str | Path) -> ScenarioConfig:
    """Read, parse, and validate a config file.

    Raises FileNotFoundError if the path is missing and ConfigError (with
    the full violation list) if parsing or validation fails.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([Violation("<file>", f"invalid JSON: {exc}")]) from exc
    config = parse_config(data)
    violations = validate(config)
    if violations:
        raise ConfigError(violations)
    return config


def save_config(config: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(serialize_config(config), indent=2) + "\n")


def default_config() -> ScenarioConfig:
    """The evaluation defaults: 150 m cell at 3.5 GHz, two 4.5 GHz MEHs."""
    return ScenarioConfig()


def with_overrides(config: ScenarioConfig, **kwargs: Any) -> ScenarioConfig:
    """Replace top-level scalar fields (mode, trials, seed, ...)."""
    return replace(config, **kwargs)


def resolve_parameter(config: ScenarioConfig, path: str) -> Any:
    """Read a dotted parameter path, e.g. ``radio.ber_target``.

    The ``meh.`` prefix aliases the same field on both hosts (read from the
    primary), so one sweep can move e.g. ``meh.beta_max`` jointly.
    """
    if path.startswith("meh."):
        path = "primary." + path[len("meh."):]
    obj: Any = config
    for part in path.split("."):
        if not hasattr(obj, "__dataclass_fields__") or part not in {
                f.name for f in fields(obj)}:
            raise ValueError(f"unresolvable parameter path: {path!r}")
        obj = getattr(obj, part)
        if obj is None:
            raise ValueError(f"parameter path {path!r} crosses an absent section")
    return obj


def set_parameter(config: ScenarioConfig, path: str, value: Any) -> ScenarioConfig:
    """Return a copy of the config with the dotted path set to ``value``.

    The new value is cast to the type of the current one (so sweeping an
    integer field with float sweep values stays well-typed). A ``meh.``
    path writes the field on the primary and, when present, the helper.
    """
    if path.startswith("meh."):
        field_name = path[len("meh."):]
        updated = set_parameter(config, "primary." + field_name, value)
        if updated.helper is not None:
            updated = set_parameter(updated, "helper." + field_name, value)
        return updated
    current = resolve_parameter(config, path)
    if isinstance(current, bool):
        value = bool(value)
    elif isinstance(current, int):
        value = int(value)
    elif isinstance(current, float):
        value = float(value)

    parts = path.split(".")

    def rebuild(obj: Any, idx: int) -> Any:
        if idx == len(parts) - 1:
            return replace(obj, **{parts[idx]: value})
        child = getattr(obj, parts[idx])
        return replace(obj, **{parts[idx]: rebuild(child, idx + 1)})

    return rebuild(config, 0)
