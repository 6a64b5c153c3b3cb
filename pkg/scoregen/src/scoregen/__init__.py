"""Offline tooling: trains a diverse classifier pair on disjoint dataset
halves, corrupts test images with i.i.d. bit flips per BER grid point, and
exports score tables consumed by the simulator's empirical oracle."""

from .corrupt import flip_bits
from .datasets import Dataset, load_dataset, split_halves, synthetic_dataset
from .export import corrupt_and_score, write_score_csv
from .train import ScoregenConfig, SmallCnn, accuracy, score_images, train_one, train_pair

__version__ = "0.1.0"

__all__ = [
    "Dataset", "ScoregenConfig", "SmallCnn", "accuracy", "corrupt_and_score",
    "flip_bits", "load_dataset", "score_images", "split_halves",
    "synthetic_dataset", "train_one", "train_pair", "write_score_csv",
]
