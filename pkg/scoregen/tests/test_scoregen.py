import csv
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from scoregen import (
    ScoregenConfig,
    accuracy,
    flip_bits,
    load_dataset,
    split_halves,
    synthetic_dataset,
    train_one,
)
from scoregen.corrupt import corruption_stream


def load_csv(path):
    rows = list(csv.reader(open(path)))
    ids = np.array([int(r[0]) for r in rows[1:]])
    labels = np.array([int(r[1]) for r in rows[1:]])
    scores = np.array([[float(x) for x in r[2:]] for r in rows[1:]])
    return ids, labels, scores


def table_accuracy(path):
    _, labels, scores = load_csv(path)
    return (scores.argmax(axis=1) == labels).mean()


def grid_file(artifacts, classifier, ber):
    doc = json.loads(artifacts.manifest.read_text())
    for entry in doc["entries"]:
        if entry["classifier"] == classifier and entry["ber"] == ber:
            return artifacts.manifest.parent / entry["file"]
    raise KeyError((classifier, ber))


def test_clean_accuracy_meets_threshold(artifacts):
    ds = artifacts.dataset
    for cid, model in zip(artifacts.config.classifier_ids, artifacts.models):
        acc = accuracy(model, ds.test_images, ds.test_labels)
        print(f"{cid} clean test accuracy {acc:.4f}")
        assert acc >= 0.70


def test_score_rows_sum_to_one(artifacts):
    doc = json.loads(artifacts.manifest.read_text())
    assert len(doc["entries"]) == len(doc["ber_grid"]) * 2
    for entry in doc["entries"]:
        _, _, scores = load_csv(artifacts.manifest.parent / entry["file"])
        assert np.abs(scores.sum(axis=1) - 1.0).max() <= 1e-5


def test_ensemble_not_worse_than_best_individual(artifacts):
    _, labels, sp = load_csv(grid_file(artifacts, "primary", 0.0))
    _, _, sh = load_csv(grid_file(artifacts, "helper", 0.0))
    acc_p = (sp.argmax(1) == labels).mean()
    acc_h = (sh.argmax(1) == labels).mean()
    acc_ens = ((sp + sh).argmax(1) == labels).mean()
    print(f"clean: primary {acc_p:.4f} helper {acc_h:.4f} ensemble {acc_ens:.4f}")
    assert acc_ens >= max(acc_p, acc_h) - 0.005


def test_accuracy_non_increasing_into_heavy_corruption(artifacts):
    for cid in artifacts.config.classifier_ids:
        mild = table_accuracy(grid_file(artifacts, cid, 1e-3))
        heavy = table_accuracy(grid_file(artifacts, cid, 1e-1))
        print(f"{cid}: acc(1e-3)={mild:.4f} acc(1e-1)={heavy:.4f}")
        assert heavy <= mild


def test_clean_entry_matches_uncorrupted_scores(artifacts):
    from scoregen import score_images
    _, _, written = load_csv(grid_file(artifacts, "primary", 0.0))
    recomputed = score_images(artifacts.models[0], artifacts.dataset.test_images)
    assert np.abs(written - recomputed).max() <= 1e-9


def test_manifest_loads_and_campaign_completes(artifacts, tmp_path):
    # end-to-end through the simulator's external interfaces only: the
    # score-file format, the config file, and the CLI
    scenario = {
        "oracle": {"kind": "empirical", "manifest": str(artifacts.manifest)},
        "mode": "ensemble",
        "trials": 5000,
        "seed": 17,
    }
    cfg = tmp_path / "scenario.json"
    cfg.write_text(json.dumps(scenario))
    out = tmp_path / "out.csv"
    exe = shutil.which("goalsim")
    cmd = [exe] if exe else [sys.executable, "-m", "goalsim.cli"]
    proc = subprocess.run(cmd + ["run", "--config", str(cfg), "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    header, row = out.read_text().strip().split("\n")
    eff = float(row.split(",")[header.split(",").index("effectiveness")])
    print(f"empirical-oracle campaign effectiveness {eff:.4f}")
    assert 0.0 < eff <= 1.0


def test_split_halves_disjoint_exhaustive_and_seeded():
    a, b = split_halves(1000, split_seed=5)
    assert len(a) == len(b) == 500
    assert len(np.intersect1d(a, b)) == 0
    assert np.array_equal(np.sort(np.concatenate([a, b])), np.arange(1000))
    a2, b2 = split_halves(1000, split_seed=5)
    assert np.array_equal(a, a2) and np.array_equal(b, b2)
    a3, _ = split_halves(1000, split_seed=6)
    assert not np.array_equal(a, a3)


def test_untrained_model_is_near_chance():
    ds = synthetic_dataset(200, 500, seed=3)
    model = train_one(ds.train_images, ds.train_labels, epochs=0,
                      batch_size=64, lr=1e-3, seed=0, tag="untrained")
    acc = accuracy(model, ds.test_images, ds.test_labels)
    print(f"untrained accuracy {acc:.4f}")
    assert acc <= 0.25


def test_bit_flip_semantics():
    rng = corruption_stream(1, 0)
    images = synthetic_dataset(8, 1, seed=0).train_images
    assert np.array_equal(flip_bits(images, 0.0, rng), images)
    flipped = flip_bits(images, 0.1, corruption_stream(1, 1))
    frac = np.unpackbits(flipped ^ images).mean()
    assert abs(frac - 0.1) < 0.01
    # same stream, same realization
    again = flip_bits(images, 0.1, corruption_stream(1, 1))
    assert np.array_equal(flipped, again)
    with pytest.raises(ValueError):
        flip_bits(images.astype(np.int16), 0.1, rng)


def test_dataset_selectors():
    ds = load_dataset("synthetic", n_train=100, n_test=50, seed=1)
    assert ds.train_images.shape == (100, 32, 32, 3)
    assert ds.train_images.dtype == np.uint8
    assert set(ds.train_labels) == set(range(10))
    with pytest.raises(ValueError):
        load_dataset("mnist", n_train=10, n_test=10, seed=1)


def test_cifar10_unavailable_fails_clearly(tmp_path):
    with pytest.raises(RuntimeError, match="CIFAR-10 unavailable"):
        load_dataset("cifar10", n_train=10, n_test=10, seed=1,
                     data_dir=str(tmp_path / "nonexistent"))


def test_grid_requires_clean_entry():
    with pytest.raises(ValueError, match="clean"):
        ScoregenConfig(ber_grid=(1e-3, 1e-1))
