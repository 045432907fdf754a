"""Per-sample temperature and distillation-weight policies.

Three interchangeable policies map sample context (noise level, teacher
confidence, class complexity, prediction uncertainty) to the softmax
temperature T and the distillation weight w used by the loss:

  constant            fixed T, weight taken from the run config
  uncertainty_linear  T = 1 + scale * uncertainty
  rule_based          threshold rules: raise T on noisy/low-confidence
                      samples, lower it on clean/confident ones, raise
                      the weight on complex classes

The rule steps are additive and clamped to [min_temperature,
max_temperature] / [0, max_weight], so outputs are always bounded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import InvalidPolicyParameters


def _check_unit(name: str, value: float) -> float:
    v = float(value)
    if not 0.0 <= v <= 1.0:
        raise InvalidPolicyParameters(f"{name} must lie in [0, 1], got {value!r}")
    return v


@dataclass(frozen=True)
class ContextFeatures:
    """All fields live in [0, 1]; uncertainty is 0 iff the teacher is one-hot."""

    noise_level: float
    teacher_confidence: float
    disease_complexity: float
    uncertainty: float

    def __post_init__(self):
        for name in ("noise_level", "teacher_confidence", "disease_complexity", "uncertainty"):
            _check_unit(name, getattr(self, name))


@dataclass(frozen=True)
class PolicyOutput:
    temperature: float
    distill_weight: float


@dataclass(frozen=True)
class ConstantPolicy:
    temperature: float = 2.0

    def __post_init__(self):
        if not self.temperature > 0.0:
            raise InvalidPolicyParameters(f"temperature must be > 0, got {self.temperature!r}")


@dataclass(frozen=True)
class UncertaintyLinearPolicy:
    """T = 1 + scale * uncertainty; scale 0 disables the adjustment."""

    scale: float = 2.0

    def __post_init__(self):
        if not self.scale >= 0.0:
            raise InvalidPolicyParameters(f"scale must be >= 0, got {self.scale!r}")


@dataclass(frozen=True)
class RuleBasedPolicy:
    base_temperature: float = 2.0
    raise_step: float = 2.0
    lower_step: float = 1.0
    min_temperature: float = 1.0
    max_temperature: float = 8.0
    noise_threshold: float = 0.5
    confidence_threshold: float = 0.7
    complexity_threshold: float = 0.6
    base_weight: float = 0.5
    weight_step: float = 0.2
    max_weight: float = 0.9

    def __post_init__(self):
        if not 0.0 < self.min_temperature <= self.base_temperature <= self.max_temperature:
            raise InvalidPolicyParameters(
                "need 0 < min_temperature <= base_temperature <= max_temperature"
            )
        if self.raise_step < 0 or self.lower_step < 0 or self.weight_step < 0:
            raise InvalidPolicyParameters("rule steps must be >= 0")
        for name in ("noise_threshold", "confidence_threshold", "complexity_threshold"):
            _check_unit(name, getattr(self, name))
        if not 0.0 <= self.base_weight <= self.max_weight <= 1.0:
            raise InvalidPolicyParameters("need 0 <= base_weight <= max_weight <= 1")


TemperaturePolicy = ConstantPolicy | UncertaintyLinearPolicy | RuleBasedPolicy


def compute_context(teacher_logits, sample_noise: float, sample_class_complexity: float
                    ) -> ContextFeatures:
    """Context from the teacher's unscaled prediction plus sample metadata."""
    probs = numerics.stable_softmax(teacher_logits, 1.0)
    return ContextFeatures(
        noise_level=float(sample_noise),
        teacher_confidence=float(probs.max()),
        disease_complexity=float(sample_class_complexity),
        uncertainty=numerics.normalized_entropy(probs),
    )


def apply_policy(policy: TemperaturePolicy, ctx: ContextFeatures,
                 base_weight: float = 0.5) -> PolicyOutput:
    """Evaluate a policy on one sample's context.

    base_weight is the run-level distillation weight; it is what the
    constant and uncertainty_linear policies emit, while the rule_based
    policy manages its own weight (rule 3).
    """
    _check_unit("base_weight", base_weight)
    if isinstance(policy, ConstantPolicy):
        return PolicyOutput(policy.temperature, base_weight)
    if isinstance(policy, UncertaintyLinearPolicy):
        return PolicyOutput(1.0 + policy.scale * ctx.uncertainty, base_weight)
    if isinstance(policy, RuleBasedPolicy):
        t = policy.base_temperature
        noisy = ctx.noise_level >= policy.noise_threshold
        confident = ctx.teacher_confidence > policy.confidence_threshold
        if noisy and not confident:
            t = min(policy.max_temperature, policy.base_temperature + policy.raise_step)
        elif not noisy and confident:
            t = max(policy.min_temperature, policy.base_temperature - policy.lower_step)
        w = policy.base_weight
        if ctx.disease_complexity >= policy.complexity_threshold:
            w = min(policy.max_weight, policy.base_weight + policy.weight_step)
        return PolicyOutput(t, w)
    raise InvalidPolicyParameters(f"unknown policy type {type(policy).__name__}")


def policy_descriptor(policy: TemperaturePolicy) -> dict:
    """JSON-friendly name + parameters, used in run reports."""
    if isinstance(policy, ConstantPolicy):
        return {"variant": "constant", "temperature": policy.temperature}
    if isinstance(policy, UncertaintyLinearPolicy):
        return {"variant": "uncertainty_linear", "scale": policy.scale}
    if isinstance(policy, RuleBasedPolicy):
        d = {"variant": "rule_based"}
        for f in RuleBasedPolicy.__dataclass_fields__:
            d[f] = getattr(policy, f)
        return d
    raise InvalidPolicyParameters(f"unknown policy type {type(policy).__name__}")
