"""Knowledge-distillation loss with analytic gradients, plus the
teacher-to-student training loop.

The per-sample loss blends hard-label cross-entropy with a
temperature-scaled KL term between teacher and student distributions:

    total = (1 - w) * ce + w * T^2 * kl

with per-sample (T, w) supplied by a temperature policy. The teacher is
frozen throughout; gradients flow only into the student.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import numerics, tinynet
from .errors import LengthMismatch
from .temperature import (
    RuleBasedPolicy,
    TemperaturePolicy,
    apply_policy,
    compute_context,
    policy_descriptor,
)


@dataclass(frozen=True)
class KdConfig:
    policy: TemperaturePolicy
    t_base: float = 0.5  # distillation weight for non-rule policies
    train: tinynet.TrainConfig = field(default_factory=tinynet.TrainConfig)

    def __post_init__(self):
        if not 0.0 <= self.t_base <= 1.0:
            raise ValueError(f"t_base must lie in [0, 1], got {self.t_base!r}")


@dataclass(frozen=True)
class LossBreakdown:
    ce_term: float
    kl_term: float
    temperature_used: float
    distill_weight_used: float
    total: float


def kd_loss(student_logits, teacher_logits, true_class: int, temperature: float,
            weight: float) -> LossBreakdown:
    """Loss breakdown for one sample; teacher logits are constants."""
    s = numerics.as_logits(student_logits)
    t = numerics.as_logits(teacher_logits)
    if s.shape != t.shape:
        raise LengthMismatch(f"student has {s.shape[0]} logits, teacher {t.shape[0]}")
    ce = numerics.cross_entropy(int(true_class), numerics.stable_softmax(s, 1.0))
    kl = numerics.kl_divergence(
        numerics.stable_softmax(t, temperature), numerics.stable_softmax(s, temperature)
    )
    total = (1.0 - weight) * ce + weight * temperature**2 * kl
    return LossBreakdown(ce, kl, float(temperature), float(weight), total)


def kd_loss_grad(student_logits, teacher_logits, true_class: int, temperature: float,
                 weight: float) -> np.ndarray:
    """d(total)/d(student_logits) = (1-w)(p1 - y) + w*T*(p_s - p_t)."""
    s = numerics.as_logits(student_logits)
    t = numerics.as_logits(teacher_logits)
    if s.shape != t.shape:
        raise LengthMismatch(f"student has {s.shape[0]} logits, teacher {t.shape[0]}")
    numerics._check_temperature(temperature)
    p1 = numerics.stable_softmax(s, 1.0)
    onehot = np.zeros(s.shape[0])
    onehot[int(true_class)] = 1.0
    ps = numerics.stable_softmax(s, temperature)
    pt = numerics.stable_softmax(t, temperature)
    return (1.0 - weight) * (p1 - onehot) + (weight * temperature) * (ps - pt)


@dataclass
class DistillReport:
    seed: int
    policy: dict
    t_base: float
    train_loss: list[float]
    val_accuracy: list[float]
    temp_mean: list[float]  # per epoch, over the train split
    temp_min: list[float]
    temp_max: list[float]
    final_val_accuracy: float

    def run_temp_stats(self):
        """(mean, min, max) of realized temperatures over the whole run."""
        return (
            float(np.mean(self.temp_mean)),
            float(np.min(self.temp_min)),
            float(np.max(self.temp_max)),
        )

    def to_json(self) -> str:
        payload = {
            "seed": self.seed,
            "policy": self.policy,
            "t_base": self.t_base,
            "train_loss": self.train_loss,
            "val_accuracy": self.val_accuracy,
            "temp_mean": self.temp_mean,
            "temp_min": self.temp_min,
            "temp_max": self.temp_max,
            "final_val_accuracy": self.final_val_accuracy,
        }
        return json.dumps(payload, sort_keys=True, indent=2)


def distill_train(teacher: tinynet.MlpModel, student: tinynet.MlpModel,
                  dataset: tinynet.SyntheticDataset, cfg: KdConfig):
    """Distill a frozen teacher into the student; returns (student, report).

    Each sample gets its own (temperature, weight) from the policy, so a
    single batch can mix soft and hard targets. The teacher never sees
    gradients, which makes its logits, the contexts, and the policy
    outputs constant across epochs; they are precomputed once.
    """
    teacher_logits = tinynet.forward_batch(teacher, dataset.features)
    n = dataset.n_samples
    temps = np.empty(n)
    weights = np.empty(n)
    for i in range(n):
        c = compute_context(
            teacher_logits[i],
            float(dataset.noise_level[i]),
            float(dataset.class_complexity[dataset.labels[i]]),
        )
        out = apply_policy(cfg.policy, c, base_weight=cfg.t_base)
        temps[i] = out.temperature
        weights[i] = out.distill_weight

    labels = dataset.labels
    n_classes = student.n_classes

    def sample_loss(logits, i):
        breakdown = kd_loss(logits, teacher_logits[i], int(labels[i]), temps[i], weights[i])
        grad = kd_loss_grad(logits, teacher_logits[i], int(labels[i]), temps[i], weights[i])
        return breakdown.total, grad

    trained, history, temp_stats = tinynet.sgd_fit(
        student, dataset, cfg.train, sample_loss, per_sample_stat=lambda i: temps[i]
    )
    report = DistillReport(
        seed=cfg.train.seed,
        policy=policy_descriptor(cfg.policy),
        t_base=cfg.t_base,
        train_loss=history.train_loss,
        val_accuracy=history.val_accuracy,
        temp_mean=[s[0] for s in temp_stats],
        temp_min=[s[1] for s in temp_stats],
        temp_max=[s[2] for s in temp_stats],
        final_val_accuracy=history.val_accuracy[-1],
    )
    return trained, report
