"""scoregen CLI: train the pair, corrupt, score, export."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from .datasets import load_dataset
from .export import corrupt_and_score
from .train import ScoregenConfig, accuracy, train_pair


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoregen",
        description="Train two classifiers on disjoint dataset halves and "
                    "export per-BER score tables for the simulator's "
                    "empirical oracle.")
    parser.add_argument("--dataset", default="synthetic",
                        choices=["synthetic", "cifar10"])
    parser.add_argument("--data-dir", default="./data",
                        help="cifar10 location (must exist; no network)")
    parser.add_argument("--out", default="./scores", help="output directory")
    parser.add_argument("--n-train", type=int, default=8000,
                        help="synthetic training-set size (split in half)")
    parser.add_argument("--n-test", type=int, default=2000)
    parser.add_argument("--epochs", type=int, default=6)
    parser.add_argument("--batch-size", type=int, default=128)
    parser.add_argument("--lr", type=float, default=1e-3)
    parser.add_argument("--ber-grid", default="0,1e-4,1e-3,1e-2,1e-1",
                        help="comma list; must include the clean entry 0")
    parser.add_argument("--dataset-seed", type=int, default=7)
    parser.add_argument("--split-seed", type=int, default=1)
    parser.add_argument("--train-seed", type=int, default=2)
    parser.add_argument("--corrupt-seed", type=int, default=3)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = ScoregenConfig(
            dataset=args.dataset, data_dir=args.data_dir,
            n_train=args.n_train, n_test=args.n_test,
            dataset_seed=args.dataset_seed, split_seed=args.split_seed,
            train_seed=args.train_seed, corrupt_seed=args.corrupt_seed,
            epochs=args.epochs, batch_size=args.batch_size, lr=args.lr,
            ber_grid=tuple(float(v) for v in args.ber_grid.split(",")),
            out_dir=args.out)
        dataset = load_dataset(config.dataset, n_train=config.n_train,
                               n_test=config.n_test, seed=config.dataset_seed,
                               data_dir=config.data_dir)
        model_a, model_b, dataset = train_pair(config, dataset)
        for cid, model in zip(config.classifier_ids, (model_a, model_b)):
            acc = accuracy(model, dataset.test_images, dataset.test_labels)
            print(f"{cid}: clean test accuracy {acc:.4f}")
        manifest = corrupt_and_score((model_a, model_b), dataset.test_images,
                                     dataset.test_labels, config)
        print(f"wrote {manifest}")
        return 0
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
