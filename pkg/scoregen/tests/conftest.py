import logging

import pytest

from scoregen import ScoregenConfig, corrupt_and_score, train_pair

logging.basicConfig(level=logging.INFO, format="%(message)s")

# Desk-scale settings shared by the whole session: two halves of 3000
# samples, 5 epochs each, 1500 test samples, full BER grid.
DESK_CONFIG = dict(n_train=6000, n_test=1500, epochs=5)


class Artifacts:
    def __init__(self, config, models, dataset, manifest):
        self.config = config
        self.models = models
        self.dataset = dataset
        self.manifest = manifest


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    out = tmp_path_factory.mktemp("scores")
    config = ScoregenConfig(out_dir=str(out), **DESK_CONFIG)
    model_a, model_b, dataset = train_pair(config)
    manifest = corrupt_and_score((model_a, model_b), dataset.test_images,
                                 dataset.test_labels, config)
    return Artifacts(config, (model_a, model_b), dataset, manifest)
