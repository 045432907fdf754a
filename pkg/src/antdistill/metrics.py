"""Classification metrics: confusion matrix, per-class precision/recall/F1,
and micro-averaged one-vs-rest ROC-AUC / average precision.

Zero denominators never produce NaN: the metric is reported as 0 and the
class is flagged undefined, so exported CSVs stay numeric. Curve sweeps
process tied scores as a single threshold group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLabels,
    EmptyMatrix,
    IndexOutOfRange,
    InvalidShape,
    LengthMismatch,
)
from .numerics import as_distribution


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[i, j] = number of samples with true class i predicted as j."""

    counts: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion(predictions, labels, n_classes: int) -> ConfusionMatrix:
    pred = np.asarray(predictions, dtype=np.int64)
    true = np.asarray(labels, dtype=np.int64)
    if pred.shape != true.shape or pred.ndim != 1:
        raise LengthMismatch(f"{pred.shape} predictions vs {true.shape} labels")
    if n_classes < 2:
        raise InvalidShape("need at least 2 classes")
    if pred.size and (pred.min() < 0 or pred.max() >= n_classes
                      or true.min() < 0 or true.max() >= n_classes):
        raise IndexOutOfRange(f"class index outside [0, {n_classes})")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (true, pred), 1)
    return ConfusionMatrix(counts)


@dataclass(frozen=True)
class ClassReport:
    precision: np.ndarray  # per class
    recall: np.ndarray
    f1: np.ndarray
    undefined: np.ndarray  # bool per class: some denominator was zero
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    micro_precision: float
    micro_recall: float
    micro_f1: float


def _safe_div(num: float, den: float) -> tuple[float, bool]:
    return (num / den, False) if den > 0 else (0.0, True)


def class_report(cm: ConfusionMatrix) -> ClassReport:
    """One-vs-rest per-class metrics plus macro and micro averages."""
    if cm.total == 0:
        raise EmptyMatrix("confusion matrix has no samples")
    c = cm.n_classes
    counts = cm.counts
    tp = np.diag(counts).astype(np.float64)
    fp = counts.sum(axis=0) - tp
    fn = counts.sum(axis=1) - tp

    precision = np.zeros(c)
    recall = np.zeros(c)
    f1 = np.zeros(c)
    undefined = np.zeros(c, dtype=bool)
    for k in range(c):
        precision[k], u1 = _safe_div(tp[k], tp[k] + fp[k])
        recall[k], u2 = _safe_div(tp[k], tp[k] + fn[k])
        f1[k], u3 = _safe_div(2 * precision[k] * recall[k], precision[k] + recall[k])
        undefined[k] = u1 or u2 or u3

    accuracy = float(tp.sum() / cm.total)
    micro_p, _ = _safe_div(tp.sum(), tp.sum() + fp.sum())
    micro_r, _ = _safe_div(tp.sum(), tp.sum() + fn.sum())
    micro_f1, _ = _safe_div(2 * micro_p * micro_r, micro_p + micro_r)
    return ClassReport(
        precision=precision,
        recall=recall,
        f1=f1,
        undefined=undefined,
        accuracy=accuracy,
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        micro_precision=float(micro_p),
        micro_recall=float(micro_r),
        micro_f1=float(micro_f1),
    )


# ---------------------------------------------------------------------------
# ranking curves (micro-averaged one-vs-rest)
# ---------------------------------------------------------------------------


def _flatten_ovr(probabilities, labels):
    """All (sample, class) pairs as binary (score, is-true-class) instances."""
    p = np.asarray(probabilities, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if p.ndim != 2 or p.shape[0] != y.shape[0]:
        raise LengthMismatch(f"{p.shape} probabilities vs {y.shape} labels")
    if p.shape[0] < 2:
        raise InvalidShape("need at least 2 samples")
    for row in p:
        as_distribution(row)
    if y.min() < 0 or y.max() >= p.shape[1]:
        raise IndexOutOfRange(f"label outside [0, {p.shape[1]})")
    scores = p.ravel()
    hits = np.zeros(p.shape, dtype=bool)
    hits[np.arange(y.size), y] = True
    hits = hits.ravel()
    n_pos = int(hits.sum())
    n_neg = hits.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("flattened labels are single-class")
    return scores, hits, n_pos, n_neg


def _threshold_groups(scores, hits):
    """Cumulative TP/FP after each tie group of the descending score sweep."""
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    h = hits[order]
    boundary = np.flatnonzero(np.diff(s) != 0)
    ends = np.append(boundary, s.size - 1)
    cum_tp = np.cumsum(h)[ends]
    cum_fp = np.cumsum(~h)[ends]
    return cum_tp.astype(np.float64), cum_fp.astype(np.float64)


@dataclass(frozen=True)
class RocCurve:
    auc: float
    fpr: np.ndarray
    tpr: np.ndarray


@dataclass(frozen=True)
class PrCurve:
    average_precision: float
    recall: np.ndarray
    precision: np.ndarray


def roc_auc_binary(scores, hits) -> RocCurve:
    """Trapezoidal ROC area for one binary ranking problem."""
    scores = np.asarray(scores, dtype=np.float64)
    hits = np.asarray(hits, dtype=bool)
    if scores.shape != hits.shape or scores.ndim != 1:
        raise LengthMismatch(f"{scores.shape} scores vs {hits.shape} labels")
    n_pos = int(hits.sum())
    n_neg = hits.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("labels are single-class")
    cum_tp, cum_fp = _threshold_groups(scores, hits)
    tpr = np.concatenate(([0.0], cum_tp / n_pos))
    fpr = np.concatenate(([0.0], cum_fp / n_neg))
    auc = float(np.trapezoid(tpr, fpr))
    return RocCurve(auc, fpr, tpr)


def pr_average_precision_binary(scores, hits) -> PrCurve:
    """Step-wise AP = sum (R_k - R_{k-1}) * P_k over the descending sweep."""
    scores = np.asarray(scores, dtype=np.float64)
    hits = np.asarray(hits, dtype=bool)
    if scores.shape != hits.shape or scores.ndim != 1:
        raise LengthMismatch(f"{scores.shape} scores vs {hits.shape} labels")
    n_pos = int(hits.sum())
    if n_pos == 0 or n_pos == hits.size:
        raise DegenerateLabels("labels are single-class")
    cum_tp, cum_fp = _threshold_groups(scores, hits)
    recall = cum_tp / n_pos
    precision = cum_tp / (cum_tp + cum_fp)
    deltas = np.diff(np.concatenate(([0.0], recall)))
    ap = float((deltas * precision).sum())
    return PrCurve(ap, recall, precision)


def roc_auc_micro(probabilities, labels) -> RocCurve:
    """Micro-averaged one-vs-rest ROC: flatten every (sample, class) pair."""
    scores, hits, _, _ = _flatten_ovr(probabilities, labels)
    return roc_auc_binary(scores, hits)


def pr_average_precision_micro(probabilities, labels) -> PrCurve:
    """Micro-averaged one-vs-rest average precision."""
    scores, hits, _, _ = _flatten_ovr(probabilities, labels)
    return pr_average_precision_binary(scores, hits)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def report_csv(report: ClassReport) -> str:
    """Wide CSV: one row per class plus macro and micro rows."""
    lines = ["name,precision,recall,f1,undefined"]
    for k in range(report.precision.size):
        lines.append(
            f"class_{k},{report.precision[k]!r},{report.recall[k]!r},"
            f"{report.f1[k]!r},{int(report.undefined[k])}"
        )
    lines.append(
        f"macro,{report.macro_precision!r},{report.macro_recall!r},{report.macro_f1!r},0"
    )
    lines.append(
        f"micro,{report.micro_precision!r},{report.micro_recall!r},{report.micro_f1!r},0"
    )
    return "\n".join(lines) + "\n"


def summary_csv(report: ClassReport, roc: RocCurve | None = None,
                pr: PrCurve | None = None) -> str:
    """Key-value CSV with accuracy and, when available, AUC / AP."""
    lines = ["key,value", f"accuracy,{report.accuracy!r}"]
    if roc is not None:
        lines.append(f"auc_micro,{roc.auc!r}")
    if pr is not None:
        lines.append(f"ap_micro,{pr.average_precision!r}")
    return "\n".join(lines) + "\n"
