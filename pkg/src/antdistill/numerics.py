"""Numerically stable probability kernels.

All functions are pure and operate on plain 1-D float64 vectors. Logit
vectors may be any finite reals; probability vectors must lie in [0, 1]
and sum to 1 (validated to 1e-6). Logs inside KL and cross-entropy are
floored at EPS so exactly-zero probabilities from extreme logits stay
finite.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidDistribution,
    InvalidShape,
    LengthMismatch,
    NonFiniteInput,
    NonPositiveTemperature,
)

EPS = 1e-12
_DIST_TOL = 1e-6


def as_logits(values) -> np.ndarray:
    """Validate and return a finite 1-D logit vector of length >= 2."""
    z = np.asarray(values, dtype=np.float64)
    if z.ndim != 1 or z.shape[0] < 2:
        raise InvalidShape(f"logits must be a 1-D vector of length >= 2, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise NonFiniteInput("logits contain NaN or Inf")
    return z


def as_distribution(values) -> np.ndarray:
    """Validate and return a 1-D probability vector (tolerance 1e-6)."""
    p = np.asarray(values, dtype=np.float64)
    if p.ndim != 1 or p.shape[0] < 2:
        raise InvalidShape(f"distribution must be a 1-D vector of length >= 2, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidDistribution("distribution contains NaN or Inf")
    if np.any(p < -_DIST_TOL) or np.any(p > 1.0 + _DIST_TOL):
        raise InvalidDistribution("distribution entries outside [0, 1]")
    if abs(float(p.sum()) - 1.0) > _DIST_TOL:
        raise InvalidDistribution(f"distribution sums to {p.sum()!r}, not 1")
    return p


def _check_temperature(temperature: float) -> float:
    t = float(temperature)
    if not t > 0.0:  # also rejects NaN
        raise NonPositiveTemperature(f"temperature must be > 0, got {temperature!r}")
    return t


def stable_softmax(logits, temperature: float = 1.0) -> np.ndarray:
    """softmax(logits / temperature) via max-subtraction.

    Larger temperatures flatten the distribution; the argmax never moves.
    """
    z = as_logits(logits)
    t = _check_temperature(temperature)
    s = z / t
    e = np.exp(s - s.max())
    return e / e.sum()


def log_softmax(logits, temperature: float = 1.0) -> np.ndarray:
    """Elementwise log of stable_softmax, via log-sum-exp (no overflow)."""
    z = as_logits(logits)
    t = _check_temperature(temperature)
    s = z / t
    shifted = s - s.max()
    return shifted - np.log(np.exp(shifted).sum())


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum(p * ln(p/q)), terms with p=0 drop out."""
    p = as_distribution(p)
    q = as_distribution(q)
    if p.shape != q.shape:
        raise LengthMismatch(f"length {p.shape[0]} vs {q.shape[0]}")
    terms = np.where(p > 0.0, p * (np.log(np.maximum(p, EPS)) - np.log(np.maximum(q, EPS))), 0.0)
    return float(terms.sum())


def cross_entropy(target, predicted) -> float:
    """-sum(target * ln(predicted)); target is a distribution or a class index."""
    q = as_distribution(predicted)
    if isinstance(target, (int, np.integer)):
        c = int(target)
        if c < 0 or c >= q.shape[0]:
            raise IndexOutOfRange(f"class {c} out of range for {q.shape[0]} classes")
        return float(-np.log(max(q[c], EPS)))
    p = as_distribution(target)
    if p.shape != q.shape:
        raise LengthMismatch(f"length {p.shape[0]} vs {q.shape[0]}")
    return float(-(p * np.log(np.maximum(q, EPS))).sum())


def normalized_entropy(p) -> float:
    """Shannon entropy scaled to [0, 1]: 0 for one-hot, 1 for uniform."""
    p = as_distribution(p)
    h = float(-np.where(p > 0.0, p * np.log(np.maximum(p, EPS)), 0.0).sum())
    return min(1.0, max(0.0, h / np.log(p.shape[0])))
