"""Inference oracles: per-trial correctness of the deployed classifiers.

Two oracle families produce the binary inference values (theta_p, theta_h)
and the aggregated value theta_agg for a trial:

* the synthetic oracle samples a parametric 2x2 joint law whose marginals
  degrade with BER (linear in log10 between a knee and a floor);
* the empirical oracle replays recorded per-sample class scores of two real
  classifiers, evaluated on the same corrupted input realization at each
  BER grid point, aggregating by score sum and argmax.

In cooperative mode theta_agg aggregates both classifiers; in either
standalone mode it is the executing classifier's value.

Score file set format (shared with external tooling): a JSON manifest

    {
      "format": "goalsim-scores-v1",
      "classifiers": ["primary", "helper"],
      "ber_grid": [0.0, 1e-4, 1e-3, 1e-2, 1e-1],
      "clean_ber": 0.0,
      "entries": [
        {"classifier": "primary", "ber": 0.0, "file": "primary_clean.csv"},
        ...
      ]
    }

plus one CSV per (classifier, grid point) with header
``sample_id,true_label,s0,...,s{C-1}``, rows sorted by sample_id, identical
sample_id sets across all files, and score rows summing to 1 within 1e-5.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .types import PlanMode, SyntheticOracleParams


class ScoreTableError(ValueError):
    """Malformed score files or manifest."""


@dataclass(frozen=True)
class InferenceOutcome:
    """Binary inference values for one trial.

    The value of a MEH that did not execute is None; theta_agg follows the
    execution mode (aggregate when cooperative, the executing MEH's value
    otherwise).
    """

    theta_p: Optional[int]
    theta_h: Optional[int]
    theta_agg: int


@dataclass(frozen=True)
class ScoreTable:
    """Recorded class scores of one classifier across a BER grid."""

    classifier_id: str
    ber_grid: tuple[float, ...]          # sorted ascending; may include 0.0 = clean
    scores: np.ndarray                   # (grid, samples, classes)
    true_labels: np.ndarray              # (samples,), int
    sample_ids: np.ndarray               # (samples,), int

    @property
    def n_samples(self) -> int:
        return self.scores.shape[1]

    @property
    def n_classes(self) -> int:
        return self.scores.shape[2]


def degrade_accuracy(a_clean: float, ber: float,
                     params: SyntheticOracleParams) -> float:
    """Accuracy after channel-induced corruption at the given BER.

    Flat at a_clean up to ber_knee, linear in log10(ber) down to
    chance_level at ber_floor, flat at chance_level beyond. A knee equal to
    the floor degenerates to a step.
    """
    if not 0.0 < ber <= 0.1:
        raise ValueError(f"ber must be in (0, 0.1], got {ber}")
    if ber <= params.ber_knee:
        return a_clean
    if ber >= params.ber_floor:
        return params.chance_level
    span = math.log10(params.ber_floor) - math.log10(params.ber_knee)
    frac = (math.log10(ber) - math.log10(params.ber_knee)) / span
    return a_clean + frac * (params.chance_level - a_clean)


def degraded_joint(params: SyntheticOracleParams,
                   ber: float) -> tuple[float, float, float, bool]:
    """Degraded marginals and joint both-correct probability at a BER.

    The joint is scaled by the degrade factor of the weaker marginal, then
    clamped into the Frechet interval; the returned flag says whether the
    clamp was needed.
    """
    a_p = degrade_accuracy(params.a_p_clean, ber, params)
    a_h = degrade_accuracy(params.a_h_clean, ber, params)
    factor_p = a_p / params.a_p_clean if params.a_p_clean > 0 else 1.0
    factor_h = a_h / params.a_h_clean if params.a_h_clean > 0 else 1.0
    joint = params.joint_clean * min(factor_p, factor_h)
    lo = max(0.0, a_p + a_h - 1.0)
    hi = min(a_p, a_h)
    clamped = not lo <= joint <= hi
    joint = min(max(joint, lo), hi)
    return a_p, a_h, joint, clamped


def _outcome_for_mode(theta_p: int, theta_h: int, theta_agg: int,
                      mode: PlanMode) -> InferenceOutcome:
    if mode is PlanMode.COOPERATIVE:
        return InferenceOutcome(theta_p, theta_h, theta_agg)
    if mode is PlanMode.STANDALONE_PRIMARY:
        return InferenceOutcome(theta_p, None, theta_p)
    return InferenceOutcome(None, theta_h, theta_h)


class SyntheticOracle:
    """Parametric stand-in for a pair of trained classifiers."""

    def __init__(self, params: SyntheticOracleParams):
        self.params = params

    def sample_from_uniforms(self, u1: float, u2: float, ber: float,
                             mode: PlanMode) -> InferenceOutcome:
        """Deterministic sampling from two U(0,1) variates.

        u1 addresses the 2x2 joint in fixed cell order (11, 10, 01, 00), so
        theta_p keeps the same threshold across modes; u2 resolves
        disagreement ties with probability tie_gain.
        """
        a_p, a_h, joint, _ = degraded_joint(self.params, ber)
        if u1 < joint:
            theta_p, theta_h = 1, 1
        elif u1 < a_p:
            theta_p, theta_h = 1, 0
        elif u1 < a_p + a_h - joint:
            theta_p, theta_h = 0, 1
        else:
            theta_p, theta_h = 0, 0
        if theta_p == theta_h:
            theta_agg = theta_p
        else:
            theta_agg = 1 if u2 < self.params.tie_gain else 0
        return _outcome_for_mode(theta_p, theta_h, theta_agg, mode)

    def sample(self, rng: np.random.Generator, ber: float,
               mode: PlanMode) -> InferenceOutcome:
        return self.sample_from_uniforms(rng.uniform(), rng.uniform(), ber, mode)

    def effective_accuracy(self, ber: float, mode: PlanMode) -> float:
        """Closed-form P(theta_agg = 1) for consistency checks."""
        a_p, a_h, joint, _ = degraded_joint(self.params, ber)
        if mode is PlanMode.STANDALONE_PRIMARY:
            return a_p
        if mode is PlanMode.STANDALONE_HELPER:
            return a_h
        return joint + self.params.tie_gain * (a_p + a_h - 2.0 * joint)


def synthetic_sample(rng: np.random.Generator, params: SyntheticOracleParams,
                     ber: float,
                     mode: PlanMode = PlanMode.COOPERATIVE) -> InferenceOutcome:
    """Draw one (theta_p, theta_h, theta_agg) from the synthetic joint."""
    return SyntheticOracle(params).sample(rng, ber, mode)


def nearest_grid_index(grid: tuple[float, ...], ber: float) -> int:
    """Nearest grid point in log10 distance.

    The clean entry (ber 0) is matched only by an exact zero query, unless
    it is the only entry; a tie between two positive points resolves to the
    smaller one. No interpolation: per-sample scores are not smooth in BER.
    """
    positive = [(i, b) for i, b in enumerate(grid) if b > 0]
    if ber <= 0 or not positive:
        for i, b in enumerate(grid):
            if b == 0:
                return i
        if not positive:
            raise ScoreTableError("score grid has no usable entries")
        ber = positive[0][1] if ber <= 0 else ber
    best_i, best_d = positive[0][0], abs(math.log10(positive[0][1]) - math.log10(ber))
    for i, b in positive[1:]:
        d = abs(math.log10(b) - math.log10(ber))
        if d < best_d:
            best_i, best_d = i, d
    return best_i


class EmpiricalOracle:
    """Replays recorded scores of two classifiers over a shared BER grid."""

    def __init__(self, table_p: ScoreTable, table_h: ScoreTable):
        if table_p.ber_grid != table_h.ber_grid:
            raise ScoreTableError("classifier BER grids differ")
        if table_p.scores.shape != table_h.scores.shape:
            raise ScoreTableError("classifier score shapes differ")
        if not np.array_equal(table_p.sample_ids, table_h.sample_ids):
            raise ScoreTableError("classifier sample_id sets differ")
        self.table_p = table_p
        self.table_h = table_h
        truth = table_p.true_labels
        # np.argmax breaks ties toward the lowest class index, which is the
        # aggregation tie-break rule.
        self._correct_p = np.argmax(table_p.scores, axis=2) == truth
        self._correct_h = np.argmax(table_h.scores, axis=2) == truth
        self._correct_sum = np.argmax(table_p.scores + table_h.scores, axis=2) == truth

    @property
    def ber_grid(self) -> tuple[float, ...]:
        return self.table_p.ber_grid

    def sample_from_uniforms(self, u1: float, u2: float, ber: float,
                             mode: PlanMode) -> InferenceOutcome:
        g = nearest_grid_index(self.ber_grid, ber)
        n = self.table_p.n_samples
        idx = min(int(u1 * n), n - 1)
        theta_p = int(self._correct_p[g, idx])
        theta_h = int(self._correct_h[g, idx])
        theta_agg = int(self._correct_sum[g, idx])
        return _outcome_for_mode(theta_p, theta_h, theta_agg, mode)

    def sample(self, rng: np.random.Generator, ber: float,
               mode: PlanMode) -> InferenceOutcome:
        return self.sample_from_uniforms(rng.uniform(), 0.0, ber, mode)

    def effective_accuracy(self, ber: float, mode: PlanMode) -> float:
        """Exact accuracy over the whole table at the matched grid point
        (the enumeration view of sampling)."""
        g = nearest_grid_index(self.ber_grid, ber)
        if mode is PlanMode.STANDALONE_PRIMARY:
            return float(self._correct_p[g].mean())
        if mode is PlanMode.STANDALONE_HELPER:
            return float(self._correct_h[g].mean())
        return float(self._correct_sum[g].mean())


def empirical_sample(rng: np.random.Generator,
                     tables: tuple[ScoreTable, ScoreTable], ber: float,
                     mode: PlanMode = PlanMode.COOPERATIVE) -> InferenceOutcome:
    """Draw one uniformly-chosen sample and score it at the nearest BER."""
    return EmpiricalOracle(tables[0], tables[1]).sample(rng, ber, mode)


def _read_score_csv(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ScoreTableError(f"{path}: empty score file") from None
        n_classes = len(header) - 2
        if (n_classes < 2 or header[:2] != ["sample_id", "true_label"]
                or header[2:] != [f"s{i}" for i in range(n_classes)]):
            raise ScoreTableError(f"{path}: bad header {header!r}")
        ids, labels, rows = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != n_classes + 2:
                raise ScoreTableError(f"{path}:{lineno}: expected {n_classes + 2} fields")
            try:
                ids.append(int(row[0]))
                labels.append(int(row[1]))
                rows.append([float(x) for x in row[2:]])
            except ValueError as exc:
                raise ScoreTableError(f"{path}:{lineno}: {exc}") from None
    ids_arr = np.asarray(ids, dtype=np.int64)
    labels_arr = np.asarray(labels, dtype=np.int64)
    scores = np.asarray(rows, dtype=np.float64)
    if np.any(np.diff(ids_arr) <= 0):
        raise ScoreTableError(f"{path}: sample_id not strictly increasing")
    if np.any((labels_arr < 0) | (labels_arr >= n_classes)):
        raise ScoreTableError(f"{path}: true_label outside [0, {n_classes})")
    sums = scores.sum(axis=1)
    bad = np.abs(sums - 1.0) > 1e-5
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ScoreTableError(
            f"{path}: score row for sample {ids_arr[i]} sums to {sums[i]!r}")
    return ids_arr, labels_arr, scores


def load_score_tables(manifest_path: str | Path) -> tuple[ScoreTable, ScoreTable]:
    """Load and cross-validate the two classifiers' score tables."""
    manifest_path = Path(manifest_path)
    try:
        doc = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise ScoreTableError(f"{manifest_path}: invalid JSON: {exc}") from exc
    classifiers = doc.get("classifiers")
    if not isinstance(classifiers, list) or len(classifiers) != 2:
        raise ScoreTableError(f"{manifest_path}: expected exactly two classifiers")
    grid_raw = doc.get("ber_grid")
    if not isinstance(grid_raw, list) or not grid_raw:
        raise ScoreTableError(f"{manifest_path}: missing ber_grid")
    grid = tuple(sorted(float(b) for b in grid_raw))
    if len(set(grid)) != len(grid):
        raise ScoreTableError(f"{manifest_path}: duplicate ber_grid entries")
    if any(b < 0 for b in grid):
        raise ScoreTableError(f"{manifest_path}: negative BER in grid")
    clean = doc.get("clean_ber")
    if clean is not None and float(clean) not in grid:
        raise ScoreTableError(f"{manifest_path}: clean_ber not in ber_grid")

    files: dict[tuple[str, float], Path] = {}
    for entry in doc.get("entries", []):
        cid, ber = entry.get("classifier"), float(entry.get("ber"))
        if cid not in classifiers:
            raise ScoreTableError(f"{manifest_path}: entry for unknown classifier {cid!r}")
        if ber not in grid:
            raise ScoreTableError(f"{manifest_path}: entry BER {ber!r} not in grid")
        key = (cid, ber)
        if key in files:
            raise ScoreTableError(f"{manifest_path}: duplicate entry for {key}")
        files[key] = manifest_path.parent / entry["file"]

    tables = []
    ref_ids: Optional[np.ndarray] = None
    ref_labels: Optional[np.ndarray] = None
    for cid in classifiers:
        per_grid = []
        for ber in grid:
            key = (cid, ber)
            if key not in files:
                raise ScoreTableError(f"{manifest_path}: no file for {key}")
            ids, labels, scores = _read_score_csv(files[key])
            if ref_ids is None:
                ref_ids, ref_labels = ids, labels
            else:
                if not np.array_equal(ids, ref_ids):
                    raise ScoreTableError(f"{files[key]}: sample_id set differs")
                if not np.array_equal(labels, ref_labels):
                    raise ScoreTableError(f"{files[key]}: true labels differ")
            per_grid.append(scores)
        stacked = np.stack(per_grid, axis=0)
        if stacked.shape[2] < 2:
            raise ScoreTableError(f"{manifest_path}: fewer than two classes")
        tables.append(ScoreTable(classifier_id=str(cid), ber_grid=grid,
                                 scores=stacked, true_labels=ref_labels,
                                 sample_ids=ref_ids))
    if tables[0].scores.shape != tables[1].scores.shape:
        raise ScoreTableError(f"{manifest_path}: classifier table shapes differ")
    return tables[0], tables[1]
