"""Datasets for the classifier pair, as raw uint8 images.

Two selectors:

* ``synthetic`` — a locally generated CIFAR-shaped set (32x32x3 uint8,
  10 classes). Each class is an oriented sinusoidal grating (orientation
  and spatial frequency encode the class) with per-image random phase,
  contrast, brightness, channel gains, and pixel noise. Color is random
  per image, so the class signal lives in texture, which bit-flip
  corruption genuinely destroys.
* ``cifar10`` — the standard 60k-image set via torchvision; requires the
  files to be present locally (or a reachable mirror) and fails with a
  clear message otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

IMAGE_SHAPE = (32, 32, 3)
N_CLASSES = 10


@dataclass(frozen=True)
class Dataset:
    train_images: np.ndarray   # (n, 32, 32, 3) uint8
    train_labels: np.ndarray   # (n,) int64
    test_images: np.ndarray
    test_labels: np.ndarray


def _grating_images(rng: np.random.Generator, labels: np.ndarray) -> np.ndarray:
    n = len(labels)
    yy, xx = np.meshgrid(np.arange(32), np.arange(32), indexing="ij")
    angles = np.pi * labels / N_CLASSES                       # 18 deg per class
    freqs = 2.0 + (labels % 5)                                # cycles per image
    phase = rng.uniform(0.0, 2.0 * np.pi, size=n)
    contrast = rng.uniform(0.15, 0.40, size=n)
    base = rng.uniform(0.35, 0.55, size=n)

    images = np.empty((n, 32, 32, 3), dtype=np.uint8)
    for i in range(n):
        axis = (np.cos(angles[i]) * xx + np.sin(angles[i]) * yy) / 32.0
        grating = np.sin(2.0 * np.pi * freqs[i] * axis + phase[i])
        gains = rng.uniform(0.6, 1.0, size=3)
        pix = base[i] + contrast[i] * grating[..., None] * gains
        pix = pix + rng.normal(0.0, 0.12, size=(32, 32, 3))
        images[i] = np.clip(pix * 255.0, 0, 255).astype(np.uint8)
    return images


def synthetic_dataset(n_train: int, n_test: int, seed: int) -> Dataset:
    """Balanced class-stratified draw of grating images."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, 77)))
    train_labels = np.arange(n_train) % N_CLASSES
    test_labels = np.arange(n_test) % N_CLASSES
    rng.shuffle(train_labels)
    rng.shuffle(test_labels)
    return Dataset(
        train_images=_grating_images(rng, train_labels),
        train_labels=train_labels.astype(np.int64),
        test_images=_grating_images(rng, test_labels),
        test_labels=test_labels.astype(np.int64),
    )


def cifar10_dataset(data_dir: str) -> Dataset:
    try:
        from torchvision.datasets import CIFAR10
        train = CIFAR10(data_dir, train=True, download=True)
        test = CIFAR10(data_dir, train=False, download=True)
    except Exception as exc:
        raise RuntimeError(
            f"CIFAR-10 unavailable at {data_dir!r} and not downloadable "
            f"({exc}); use --dataset synthetic or provide the files") from exc
    return Dataset(
        train_images=np.asarray(train.data, dtype=np.uint8),
        train_labels=np.asarray(train.targets, dtype=np.int64),
        test_images=np.asarray(test.data, dtype=np.uint8),
        test_labels=np.asarray(test.targets, dtype=np.int64),
    )


def load_dataset(name: str, *, n_train: int, n_test: int, seed: int,
                 data_dir: str = "./data") -> Dataset:
    if name == "synthetic":
        return synthetic_dataset(n_train, n_test, seed)
    if name == "cifar10":
        return cifar10_dataset(data_dir)
    raise ValueError(f"unknown dataset {name!r}")


def split_halves(n: int, split_seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint, exhaustive halves of range(n), deterministic in the seed."""
    perm = np.random.default_rng(split_seed).permutation(n)
    return np.sort(perm[: n // 2]), np.sort(perm[n // 2:])
