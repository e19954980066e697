"""Multi-label dataset container, summary statistics, label filtering,
cross-validation fold planning and synthetic toy-data generation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DatasetError(ValueError):
    """Raised when a dataset violates its structural contract."""


@dataclass(frozen=True)
class MultiLabelDataset:
    """Dense feature matrix plus a binary label matrix.

    features : (n, d) float array
    labels : (n, q) int array with entries in {0, 1}
    feature_names / label_names : column names, no duplicates
    feature_type : "numeric" or "nominal" (source attribute flavour,
        recorded at load time; one-hot encoded columns are numeric either way)
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    label_names: tuple[str, ...]
    feature_type: str = "numeric"

    def __post_init__(self):
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "label_names", tuple(self.label_names))
        if features.ndim != 2 or labels.ndim != 2:
            raise DatasetError("features and labels must be 2-d matrices")
        n, d = features.shape
        n2, q = labels.shape
        if n < 1 or d < 1 or q < 1:
            raise DatasetError("need at least one row, feature and label")
        if n != n2:
            raise DatasetError(f"row count mismatch: {n} features vs {n2} labels")
        if not np.isin(labels, (0, 1)).all():
            raise DatasetError("labels must contain only 0 or 1")
        if len(self.feature_names) != d:
            raise DatasetError("feature_names length does not match feature columns")
        if len(self.label_names) != q:
            raise DatasetError("label_names length does not match label columns")
        if len(set(self.feature_names)) != d:
            raise DatasetError("duplicate feature names")
        if len(set(self.label_names)) != q:
            raise DatasetError("duplicate label names")
        features.setflags(write=False)
        labels.setflags(write=False)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def q(self) -> int:
        return self.labels.shape[1]

    def subset(self, rows) -> "MultiLabelDataset":
        """New dataset restricted to the given row indices (order kept)."""
        rows = np.asarray(rows, dtype=int)
        return MultiLabelDataset(
            self.features[rows].copy(),
            self.labels[rows].copy(),
            self.feature_names,
            self.label_names,
            self.feature_type,
        )


@dataclass(frozen=True)
class DatasetStats:
    instances: int
    inputs: int
    labels: int
    cardinality: float
    density: float
    distinct_labelsets: int
    proportion_distinct: float
    ir_min: float
    ir_max: float
    ir_avg: float
    # labels whose IR is undefined (one class empty); excluded from min/max/avg
    ir_undefined_labels: tuple[str, ...] = ()


@dataclass(frozen=True)
class FoldPlan:
    repetitions: int
    folds_per_rep: int
    assignments: tuple  # per repetition, a tuple of index arrays
    seed: int

    def train_test(self, rep: int, fold: int) -> tuple[np.ndarray, np.ndarray]:
        """Train/test row indices for one cross-validation cell."""
        folds = self.assignments[rep]
        test = folds[fold]
        train = np.concatenate([f for i, f in enumerate(folds) if i != fold])
        return np.sort(train), np.sort(test)


@dataclass(frozen=True)
class ToyConfig:
    """Gaussian-blob generator config.

    minority_rules gives, per label, a mapping from blob index to the
    fraction of that blob's points marked relevant. Blobs absent from a
    mapping contribute no relevant points for that label.
    """

    points_per_blob: tuple[int, ...]
    blob_centers: tuple[tuple[float, ...], ...]
    blob_spreads: tuple[float, ...]
    minority_rules: tuple[dict, ...]
    seed: int = 0

    def __post_init__(self):
        centers = tuple(tuple(float(v) for v in c) for c in self.blob_centers)
        object.__setattr__(self, "blob_centers", centers)
        n_blobs = len(centers)
        if n_blobs < 2:
            raise DatasetError("need at least 2 blobs")
        counts = self.points_per_blob
        if isinstance(counts, int):
            counts = (counts,) * n_blobs
        counts = tuple(int(c) for c in counts)
        object.__setattr__(self, "points_per_blob", counts)
        spreads = self.blob_spreads
        if isinstance(spreads, (int, float)):
            spreads = (float(spreads),) * n_blobs
        spreads = tuple(float(s) for s in spreads)
        object.__setattr__(self, "blob_spreads", spreads)
        if len(counts) != n_blobs or len(spreads) != n_blobs:
            raise DatasetError("per-blob settings must match the number of blobs")
        if any(c < 1 for c in counts):
            raise DatasetError("points_per_blob must be positive")
        if any(s <= 0 for s in spreads):
            raise DatasetError("blob spreads must be positive")
        rules = tuple(
            {int(b): float(f) for b, f in rule.items()} for rule in self.minority_rules
        )
        object.__setattr__(self, "minority_rules", rules)
        if not rules:
            raise DatasetError("need at least one label rule")
        for rule in rules:
            for b, f in rule.items():
                if not 0 <= b < n_blobs:
                    raise DatasetError(f"minority rule references unknown blob {b}")
                if not 0.0 < f < 1.0:
                    raise DatasetError(f"minority fraction {f} not in (0, 1)")


def compute_stats(ds: MultiLabelDataset) -> DatasetStats:
    """Summary statistics: cardinality, density, distinct labelsets and
    per-label imbalance ratios (majority count over minority count)."""
    n, q = ds.n, ds.q
    cardinality = float(ds.labels.sum()) / n
    density = cardinality / q
    distinct = len({tuple(row) for row in ds.labels})
    irs = []
    undefined = []
    for k in range(q):
        pos = int(ds.labels[:, k].sum())
        neg = n - pos
        if pos == 0 or neg == 0:
            undefined.append(ds.label_names[k])
            continue
        irs.append(max(pos, neg) / min(pos, neg))
    if irs:
        ir_min, ir_max, ir_avg = min(irs), max(irs), float(np.mean(irs))
    else:
        ir_min = ir_max = ir_avg = float("nan")
    return DatasetStats(
        instances=n,
        inputs=ds.d,
        labels=q,
        cardinality=cardinality,
        density=density,
        distinct_labelsets=distinct,
        proportion_distinct=distinct / n,
        ir_min=ir_min,
        ir_max=ir_max,
        ir_avg=ir_avg,
        ir_undefined_labels=tuple(undefined),
    )


def label_imbalance_ratio(labels_col: np.ndarray) -> float:
    """IR of one binary label column; inf when one class is empty."""
    pos = int(labels_col.sum())
    neg = len(labels_col) - pos
    if min(pos, neg) == 0:
        return float("inf")
    return max(pos, neg) / min(pos, neg)


def filter_labels(
    ds: MultiLabelDataset, max_ir: float = 50.0, min_pos: int = 20
) -> tuple[MultiLabelDataset, list[tuple[str, str, float]]]:
    """Drop labels that are too imbalanced or have too few positives.

    Returns the filtered dataset and a report of (label, reason, value)
    for each dropped label. The feature matrix is unchanged.
    """
    keep = []
    report = []
    for k in range(ds.q):
        col = ds.labels[:, k]
        pos = int(col.sum())
        if pos < min_pos:
            report.append((ds.label_names[k], "min_pos", float(pos)))
            continue
        ir = label_imbalance_ratio(col)
        if ir >= max_ir:
            report.append((ds.label_names[k], "max_ir", ir))
            continue
        keep.append(k)
    if not keep:
        raise DatasetError("all labels dropped by filtering; dataset unusable")
    filtered = MultiLabelDataset(
        ds.features,
        ds.labels[:, keep].copy(),
        ds.feature_names,
        tuple(ds.label_names[k] for k in keep),
        ds.feature_type,
    )
    return filtered, report


def make_fold_plan(n: int, reps: int, folds: int, seed: int) -> FoldPlan:
    """Shuffled fold partitions, one independent shuffle per repetition.

    Fold sizes differ by at most 1; regenerating with the same seed yields
    identical assignments.
    """
    if folds < 2:
        raise DatasetError("need at least 2 folds")
    if n < folds:
        raise DatasetError(f"cannot split {n} rows into {folds} folds")
    rng = np.random.default_rng(seed)
    assignments = []
    for _ in range(reps):
        perm = rng.permutation(n)
        parts = tuple(np.sort(p) for p in np.array_split(perm, folds))
        assignments.append(parts)
    return FoldPlan(reps, folds, tuple(assignments), seed)


def generate_toy(cfg: ToyConfig) -> MultiLabelDataset:
    """Gaussian blobs with per-blob, per-label relevance fractions."""
    rng = np.random.default_rng(cfg.seed)
    dim = len(cfg.blob_centers[0])
    blocks = []
    blob_of_row = []
    for b, (count, center, spread) in enumerate(
        zip(cfg.points_per_blob, cfg.blob_centers, cfg.blob_spreads)
    ):
        blocks.append(np.asarray(center) + spread * rng.standard_normal((count, dim)))
        blob_of_row.extend([b] * count)
    features = np.vstack(blocks)
    blob_of_row = np.asarray(blob_of_row)
    n = features.shape[0]
    q = len(cfg.minority_rules)
    labels = np.zeros((n, q), dtype=int)
    for l, rule in enumerate(cfg.minority_rules):
        for b, frac in sorted(rule.items()):
            mask = blob_of_row == b
            labels[mask, l] = (rng.random(mask.sum()) < frac).astype(int)
    return MultiLabelDataset(
        features,
        labels,
        tuple(f"x{j}" for j in range(dim)),
        tuple(f"label_{l}" for l in range(q)),
    )


def scale_min_max(ds: MultiLabelDataset) -> MultiLabelDataset:
    """Optional per-column min-max scaling; constant columns map to 0."""
    lo = ds.features.min(axis=0)
    hi = ds.features.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    scaled = (ds.features - lo) / span
    return MultiLabelDataset(
        scaled, ds.labels.copy(), ds.feature_names, ds.label_names, ds.feature_type
    )
