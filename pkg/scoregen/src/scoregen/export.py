"""Score-table export in the simulator's empirical-oracle format.

Layout written under the output directory:

    manifest.json
    <classifier>_ber<value>.csv   one per (classifier, grid point)

CSV header is ``sample_id,true_label,s0,...,s{C-1}``; rows are sorted by
sample_id, identical across all files, with scores at 10 significant
digits (rows sum to 1 within 1e-5 after the float64 renormalization in
scoring).
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np

from .corrupt import corruption_stream, flip_bits
from .train import ScoregenConfig, SmallCnn, score_images

logger = logging.getLogger(__name__)

MANIFEST_FORMAT = "goalsim-scores-v1"


def write_score_csv(path: Path, labels: np.ndarray, scores: np.ndarray) -> None:
    n_classes = scores.shape[1]
    header = "sample_id,true_label," + ",".join(f"s{i}" for i in range(n_classes))
    lines = [header]
    for sid, (label, row) in enumerate(zip(labels, scores)):
        lines.append(f"{sid},{label}," + ",".join(f"{v:.10g}" for v in row))
    path.write_text("\n".join(lines) + "\n")


def corrupt_and_score(classifiers: tuple[SmallCnn, SmallCnn],
                      test_images: np.ndarray, test_labels: np.ndarray,
                      config: ScoregenConfig) -> Path:
    """Write one score CSV per (classifier, grid BER) plus the manifest.

    Each grid point corrupts the test bytes once; both classifiers score
    that same realization. The clean entry (BER 0) scores the raw images.
    Returns the manifest path.
    """
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = tuple(sorted(config.ber_grid))
    entries = []
    for g, ber in enumerate(grid):
        corrupted = flip_bits(test_images, ber,
                              corruption_stream(config.corrupt_seed, g))
        for cid, model in zip(config.classifier_ids, classifiers):
            scores = score_images(model, corrupted)
            name = f"{cid}_ber{ber:g}.csv"
            write_score_csv(out_dir / name, test_labels, scores)
            acc = float((scores.argmax(axis=1) == test_labels).mean())
            logger.info("ber=%g %s accuracy %.4f -> %s", ber, cid, acc, name)
            entries.append({"classifier": cid, "ber": ber, "file": name})
    manifest = {
        "format": MANIFEST_FORMAT,
        "classifiers": list(config.classifier_ids),
        "ber_grid": list(grid),
        "clean_ber": 0.0,
        "entries": entries,
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path
