import numpy as np
import pytest

from uclso.dataset import MultiLabelDataset, ToyConfig, generate_toy


@pytest.fixture
def tiny_ds():
    features = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    labels = np.array([[1, 0], [1, 1], [0, 1], [0, 0]])
    return MultiLabelDataset(features, labels, ("x0", "x1"), ("a", "b"))


@pytest.fixture
def two_blob_features():
    rng = np.random.default_rng(42)
    a = rng.normal((0, 0), 0.5, (50, 2))
    b = rng.normal((10, 10), 0.5, (50, 2))
    return np.vstack([a, b])


def fig1_toy_config(seed: int = 11) -> ToyConfig:
    """Two labels with imbalance ratios near 22 and 13: a majority core,
    a far majority blob, one overlapping minority blob per label, plus a
    few minority stragglers inside the core."""
    return ToyConfig(
        points_per_blob=(560, 300, 50, 90),
        blob_centers=((0.0, 0.0), (5.0, 5.0), (3.5, 0.0), (0.0, 3.5)),
        blob_spreads=(1.2, 1.2, 0.9, 0.9),
        minority_rules=({2: 0.8, 0: 0.008}, {3: 0.75, 0: 0.008}),
        seed=seed,
    )


@pytest.fixture
def fig1_toy():
    return generate_toy(fig1_toy_config())


def random_toy_config(rng: np.random.Generator) -> ToyConfig:
    n_blobs = int(rng.integers(2, 5))
    centers = tuple(tuple(rng.uniform(-10, 10, 2)) for _ in range(n_blobs))
    counts = tuple(int(rng.integers(20, 120)) for _ in range(n_blobs))
    spreads = tuple(float(rng.uniform(0.3, 1.5)) for _ in range(n_blobs))
    q = int(rng.integers(1, 4))
    rules = []
    for _ in range(q):
        chosen = rng.choice(n_blobs, size=int(rng.integers(1, n_blobs + 1)), replace=False)
        rules.append({int(b): float(rng.uniform(0.05, 0.95)) for b in chosen})
    return ToyConfig(counts, centers, spreads, tuple(rules), seed=int(rng.integers(1 << 30)))
