"""Training of the two-classifier pair on disjoint dataset halves."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from .datasets import Dataset, N_CLASSES, load_dataset, split_halves

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoregenConfig:
    dataset: str = "synthetic"
    data_dir: str = "./data"
    n_train: int = 8000            # synthetic only; cifar10 uses the full set
    n_test: int = 2000
    dataset_seed: int = 7
    split_seed: int = 1
    train_seed: int = 2
    corrupt_seed: int = 3
    epochs: int = 6
    batch_size: int = 64
    lr: float = 1.5e-3
    ber_grid: tuple[float, ...] = (0.0, 1e-4, 1e-3, 1e-2, 1e-1)
    out_dir: str = "./scores"
    classifier_ids: tuple[str, str] = ("primary", "helper")

    def __post_init__(self):
        if 0.0 not in self.ber_grid:
            raise ValueError("ber_grid must include the clean entry 0.0")
        if any(b < 0 for b in self.ber_grid):
            raise ValueError("ber_grid entries must be >= 0")


class SmallCnn(nn.Module):
    """Desk-scale CNN for 32x32x3 inputs."""

    def __init__(self, n_classes: int = N_CLASSES):
        super().__init__()
        self.features = nn.Sequential(
            nn.Conv2d(3, 32, 3, padding=1), nn.ReLU(), nn.MaxPool2d(2),
            nn.Conv2d(32, 64, 3, padding=1), nn.ReLU(), nn.MaxPool2d(2),
            nn.Conv2d(64, 64, 3, padding=1), nn.ReLU(), nn.MaxPool2d(2),
        )
        self.classifier = nn.Sequential(
            nn.Flatten(), nn.Linear(64 * 4 * 4, 128), nn.ReLU(),
            nn.Linear(128, n_classes),
        )

    def forward(self, x):
        return self.classifier(self.features(x))


def _to_tensor(images: np.ndarray) -> torch.Tensor:
    # raw bytes -> float in [0, 1], NCHW
    return torch.from_numpy(images.astype(np.float32) / 255.0).permute(0, 3, 1, 2)


def train_one(images: np.ndarray, labels: np.ndarray, *, epochs: int,
              batch_size: int, lr: float, seed: int, tag: str) -> SmallCnn:
    torch.manual_seed(seed)
    model = SmallCnn()
    if epochs == 0:
        return model.eval()
    x = _to_tensor(images)
    y = torch.from_numpy(labels)
    opt = torch.optim.Adam(model.parameters(), lr=lr)
    loss_fn = nn.CrossEntropyLoss()
    order_rng = np.random.default_rng(seed)
    model.train()
    for epoch in range(epochs):
        perm = torch.from_numpy(order_rng.permutation(len(x)))
        total = 0.0
        for lo in range(0, len(x), batch_size):
            idx = perm[lo: lo + batch_size]
            opt.zero_grad()
            loss = loss_fn(model(x[idx]), y[idx])
            loss.backward()
            opt.step()
            total += float(loss.detach()) * len(idx)
        logger.info("%s epoch %d/%d loss %.4f", tag, epoch + 1, epochs,
                    total / len(x))
    return model.eval()


@torch.no_grad()
def score_images(model: SmallCnn, images: np.ndarray,
                 batch_size: int = 512) -> np.ndarray:
    """Softmax class scores, renormalized in float64 so rows sum to 1."""
    model.eval()
    x = _to_tensor(images)
    chunks = []
    for lo in range(0, len(x), batch_size):
        logits = model(x[lo: lo + batch_size]).double()
        chunks.append(torch.softmax(logits, dim=1).numpy())
    scores = np.concatenate(chunks, axis=0)
    return scores / scores.sum(axis=1, keepdims=True)


def accuracy(model: SmallCnn, images: np.ndarray, labels: np.ndarray) -> float:
    return float((score_images(model, images).argmax(axis=1) == labels).mean())


def train_pair(config: ScoregenConfig,
               dataset: Dataset | None = None) -> tuple[SmallCnn, SmallCnn, Dataset]:
    """Train one classifier per disjoint training half.

    The halves partition the whole training set (seeded permutation); each
    model sees only its half, which is what buys ensemble diversity.
    """
    if dataset is None:
        dataset = load_dataset(config.dataset, n_train=config.n_train,
                               n_test=config.n_test, seed=config.dataset_seed,
                               data_dir=config.data_dir)
    idx_a, idx_b = split_halves(len(dataset.train_images), config.split_seed)
    models = []
    for k, idx in enumerate((idx_a, idx_b)):
        tag = config.classifier_ids[k]
        logger.info("training %s on %d samples", tag, len(idx))
        models.append(train_one(
            dataset.train_images[idx], dataset.train_labels[idx],
            epochs=config.epochs, batch_size=config.batch_size, lr=config.lr,
            seed=config.train_seed + k, tag=tag))
    return models[0], models[1], dataset
