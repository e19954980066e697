"""Label-based evaluation metrics: per-label F1, rank-based AUC with
midrank tie handling, and macro averaging over defined labels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def confusion(y_true: np.ndarray, y_pred: np.ndarray) -> ConfusionCounts:
    y_true = np.asarray(y_true).astype(int)
    y_pred = np.asarray(y_pred).astype(int)
    if y_true.shape != y_pred.shape:
        raise MetricError("shape mismatch between truth and prediction")
    return ConfusionCounts(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        fp=int(((y_true == 0) & (y_pred == 1)).sum()),
        tn=int(((y_true == 0) & (y_pred == 0)).sum()),
        fn=int(((y_true == 1) & (y_pred == 0)).sum()),
    )


def f1_label(c: ConfusionCounts) -> float:
    """F1 = 2tp / (2tp + fp + fn); 0 by convention when the denominator
    vanishes (no positives anywhere)."""
    denom = 2 * c.tp + c.fp + c.fn
    if denom == 0:
        return 0.0
    return 2 * c.tp / denom


def auc_label(scores: np.ndarray, truth: np.ndarray) -> float:
    """Mann-Whitney AUC: P(score+ > score-) + 0.5 * P(score+ = score-),
    computed from midranks. Undefined when truth is single-class."""
    scores = np.asarray(scores, dtype=float)
    truth = np.asarray(truth).astype(int)
    if scores.shape != truth.shape:
        raise MetricError("shape mismatch between scores and truth")
    n_pos = int((truth == 1).sum())
    n_neg = int((truth == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise MetricError("AUC undefined: truth contains a single class")
    ranks = rankdata(scores, method="average")
    pos_rank_sum = float(ranks[truth == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def macro_average(per_label: np.ndarray, defined: np.ndarray | None = None) -> float:
    """Arithmetic mean over the labels whose metric is defined."""
    per_label = np.asarray(per_label, dtype=float)
    if defined is None:
        defined = np.ones(per_label.shape, dtype=bool)
    defined = np.asarray(defined, dtype=bool)
    if not defined.any():
        raise MetricError("macro average over zero defined labels")
    return float(per_label[defined].mean())
