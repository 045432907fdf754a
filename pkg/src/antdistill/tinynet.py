"""Small trainable MLP classifiers and synthetic datasets.

The MLP is rectifier-hidden / identity-output, trained with plain
mini-batch SGD. Datasets are Gaussian class clusters whose center
spacing shrinks linearly with a per-class complexity knob, with three
noise corruptions (gaussian / salt_pepper / uniform) applied on top.

Every stochastic operation takes an explicit seed and draws from a
fresh numpy Generator, so all artifacts are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .errors import (
    EmptySplit,
    InvalidShape,
    LevelOutOfRange,
    NonFiniteLoss,
    ParseError,
    ShapeMismatch,
    UnknownNoiseKind,
)

SPLITS = ("train", "val", "test")
# fraction of each class routed to train/val/test
SPLIT_FRACTIONS = (0.7, 0.1, 0.2)

NOISE_KINDS = ("gaussian", "salt_pepper", "uniform")

# cluster center distance from origin at complexity 0, in units of the
# within-cluster std (1.0); complexity 1 collapses all centers to the origin
CENTER_RADIUS = 5.0


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------


@dataclass
class MlpModel:
    """Fully-connected net; weights[k] has shape (dims[k+1], dims[k])."""

    layer_dims: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def copy(self) -> "MlpModel":
        return MlpModel(
            list(self.layer_dims),
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def n_classes(self) -> int:
        return self.layer_dims[-1]


def init_mlp(layer_dims, seed: int) -> MlpModel:
    """Uniform(-s, s) weights with s = sqrt(6 / (fan_in + fan_out)), zero biases."""
    dims = [int(d) for d in layer_dims]
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise InvalidShape(f"layer_dims must be >= 2 positive sizes, got {layer_dims}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        s = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-s, s, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpModel(dims, weights, biases)


def _forward_batch(model: MlpModel, x: np.ndarray):
    """Returns (logits, pre-activations per layer, inputs per layer)."""
    if x.ndim != 2 or x.shape[1] != model.input_dim:
        raise ShapeMismatch(f"expected (n, {model.input_dim}) features, got {x.shape}")
    acts = [x]
    pres = []
    a = x
    last = len(model.weights) - 1
    for k, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w.T + b
        pres.append(z)
        a = z if k == last else np.maximum(z, 0.0)
        acts.append(a)
    return a, pres, acts


def forward(model: MlpModel, x) -> np.ndarray:
    """Logits for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.input_dim:
        raise ShapeMismatch(f"expected {model.input_dim} features, got shape {x.shape}")
    logits, _, _ = _forward_batch(model, x[None, :])
    return logits[0]


def forward_batch(model: MlpModel, x) -> np.ndarray:
    """Logits for an (n, input_dim) feature matrix."""
    x = np.asarray(x, dtype=np.float64)
    logits, _, _ = _forward_batch(model, x)
    return logits


def _backward(model: MlpModel, pres, acts, dlogits):
    """Reverse-mode gradients given d(loss)/d(logits) per row."""
    grads_w = [None] * len(model.weights)
    grads_b = [None] * len(model.weights)
    delta = dlogits
    for k in range(len(model.weights) - 1, -1, -1):
        grads_w[k] = delta.T @ acts[k]
        grads_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ model.weights[k]) * (pres[k - 1] > 0.0)
    return grads_w, grads_b


def loss_gradients(model: MlpModel, batch, sample_loss):
    """Gradients of the mean batch loss w.r.t. every weight and bias.

    sample_loss(logits_row, row_index) must return (loss, dloss/dlogits);
    the gradient it returns is treated as exact.
    """
    x = np.asarray(batch, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ShapeMismatch(f"batch must be a nonempty 2-D matrix, got shape {x.shape}")
    logits, pres, acts = _forward_batch(model, x)
    dlogits = np.empty_like(logits)
    total = 0.0
    for i in range(x.shape[0]):
        loss, g = sample_loss(logits[i], i)
        total += loss
        dlogits[i] = g
    if not np.isfinite(total):
        raise NonFiniteLoss(f"batch loss is {total!r}")
    dlogits /= x.shape[0]
    gw, gb = _backward(model, pres, acts, dlogits)
    return total / x.shape[0], gw, gb


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


@dataclass
class SyntheticDataset:
    features: np.ndarray  # (n, d) float64
    labels: np.ndarray  # (n,) int64
    noise_level: np.ndarray  # (n,) float64 in [0, 1]
    class_complexity: np.ndarray  # (c,) float64 in [0, 1]
    split: np.ndarray  # (n,) str, one of SPLITS

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return self.class_complexity.shape[0]

    def indices(self, split: str) -> np.ndarray:
        if split not in SPLITS:
            raise EmptySplit(f"unknown split {split!r}")
        idx = np.flatnonzero(self.split == split)
        if idx.size == 0:
            raise EmptySplit(f"split {split!r} is empty")
        return idx

    def copy(self) -> "SyntheticDataset":
        return SyntheticDataset(
            self.features.copy(),
            self.labels.copy(),
            self.noise_level.copy(),
            self.class_complexity.copy(),
            self.split.copy(),
        )


def generate_synthetic(n_samples, n_classes, input_dim, complexity, seed: int) -> SyntheticDataset:
    """Gaussian clusters, one per class, stratified 70/10/20 splits.

    complexity may be a scalar or a length-C sequence; a class's center
    sits at distance CENTER_RADIUS * (1 - complexity) from the origin,
    so complexity 0 gives well-separated clusters and 1 collapses them.
    """
    n_samples, n_classes, input_dim = int(n_samples), int(n_classes), int(input_dim)
    comp = np.asarray(complexity, dtype=np.float64)
    if comp.ndim == 0:
        comp = np.full(n_classes, float(comp))
    if comp.shape != (n_classes,):
        raise InvalidShape(f"complexity must be scalar or length {n_classes}, got {comp.shape}")
    if np.any(comp < 0) or np.any(comp > 1):
        raise InvalidShape("complexity entries must lie in [0, 1]")
    if n_samples < 10 * n_classes:
        raise InvalidShape(f"need at least {10 * n_classes} samples for {n_classes} classes")
    if input_dim < 2:
        raise InvalidShape("input_dim must be >= 2")

    rng = np.random.default_rng(seed)
    if n_classes <= input_dim:
        # orthonormal directions so complexity-0 clusters are separable by construction
        q, _ = np.linalg.qr(rng.normal(size=(input_dim, input_dim)))
        dirs = q[:n_classes]
    else:
        dirs = rng.normal(size=(n_classes, input_dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    centers = dirs * (CENTER_RADIUS * (1.0 - comp))[:, None]

    counts = np.full(n_classes, n_samples // n_classes)
    counts[: n_samples % n_classes] += 1
    labels = np.repeat(np.arange(n_classes, dtype=np.int64), counts)
    features = centers[labels] + rng.normal(size=(n_samples, input_dim))

    split = np.empty(n_samples, dtype="<U5")
    for c in range(n_classes):
        idx = np.flatnonzero(labels == c)
        idx = idx[rng.permutation(idx.size)]
        n_val = max(1, round(SPLIT_FRACTIONS[1] * idx.size))
        n_test = max(1, round(SPLIT_FRACTIONS[2] * idx.size))
        n_train = idx.size - n_val - n_test
        if n_train < 1:
            raise InvalidShape(f"class {c} too small to stratify into three splits")
        split[idx[:n_train]] = "train"
        split[idx[n_train : n_train + n_val]] = "val"
        split[idx[n_train + n_val :]] = "test"

    return SyntheticDataset(features, labels, np.zeros(n_samples), comp, split)


def inject_noise(dataset: SyntheticDataset, kind: str, level: float, seed: int,
                 fraction: float = 1.0) -> SyntheticDataset:
    """Corrupt features; labels and split membership stay untouched.

    gaussian     adds N(0, (level * per-feature std)^2)
    salt_pepper  replaces a fraction `level` of entries with the
                 per-feature min or max, fair coin
    uniform      adds U(-level * range, +level * range) per feature

    fraction < 1 corrupts only that share of samples, stratified per
    split, so mixed clean/noisy experiments keep noisy samples in every
    split. Affected samples get noise_level = level.
    """
    if kind not in NOISE_KINDS:
        raise UnknownNoiseKind(f"kind must be one of {NOISE_KINDS}, got {kind!r}")
    level = float(level)
    if not 0.0 <= level <= 1.0:
        raise LevelOutOfRange(f"level must lie in [0, 1], got {level}")
    if not 0.0 <= fraction <= 1.0:
        raise LevelOutOfRange(f"fraction must lie in [0, 1], got {fraction}")

    out = dataset.copy()
    rng = np.random.default_rng(seed)
    if fraction >= 1.0:
        affected = np.arange(out.n_samples)
    else:
        parts = []
        for name in SPLITS:
            idx = np.flatnonzero(out.split == name)
            take = round(fraction * idx.size)
            parts.append(idx[rng.permutation(idx.size)][:take])
        affected = np.concatenate(parts)
    if affected.size == 0 or level == 0.0:
        return out

    clean = dataset.features
    lo = clean.min(axis=0)
    hi = clean.max(axis=0)
    sub = out.features[affected]
    if kind == "gaussian":
        sub = sub + rng.normal(size=sub.shape) * (level * clean.std(axis=0))
    elif kind == "salt_pepper":
        mask = rng.random(sub.shape) < level
        pepper_or_salt = np.where(rng.random(sub.shape) < 0.5, lo, hi)
        sub = np.where(mask, pepper_or_salt, sub)
    else:  # uniform
        sub = sub + rng.uniform(-1.0, 1.0, size=sub.shape) * (level * (hi - lo))
    out.features[affected] = sub
    out.noise_level[affected] = level
    return out


# ---------------------------------------------------------------------------
# training
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    batch_size: int = 32
    learning_rate: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1 or not self.learning_rate >= 0.0:
            raise InvalidShape("epochs/batch_size must be >= 1 and learning_rate >= 0")


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_accuracy: list[float] = field(default_factory=list)


def accuracy(model: MlpModel, features, labels) -> float:
    logits = forward_batch(model, features)
    return float(np.mean(np.argmax(logits, axis=1) == labels))


def sgd_fit(model: MlpModel, dataset: SyntheticDataset, cfg: TrainConfig, sample_loss,
            per_sample_stat=None):
    """Shared SGD loop over the train split; returns (model, history, stats).

    sample_loss(logits_row, dataset_index) -> (loss, dloss/dlogits).
    The caller's model is left untouched; training runs on a copy.
    per_sample_stat, when given, maps a dataset index to a float that is
    aggregated per epoch (used to log realized distillation temperatures).
    """
    train_idx = dataset.indices("train")
    val_idx = dataset.indices("val")
    model = model.copy()
    rng = np.random.default_rng(cfg.seed)
    history = TrainHistory()
    stats = []
    for _ in range(cfg.epochs):
        order = train_idx[rng.permutation(train_idx.size)]
        loss_sum = 0.0
        for start in range(0, order.size, cfg.batch_size):
            batch_idx = order[start : start + cfg.batch_size]
            x = dataset.features[batch_idx]
            logits, pres, acts = _forward_batch(model, x)
            dlogits = np.empty_like(logits)
            for j, gi in enumerate(batch_idx):
                loss, g = sample_loss(logits[j], int(gi))
                loss_sum += loss
                dlogits[j] = g
            if not np.isfinite(loss_sum):
                raise NonFiniteLoss(f"training loss became {loss_sum!r}")
            dlogits /= batch_idx.size
            gw, gb = _backward(model, pres, acts, dlogits)
            for k in range(len(model.weights)):
                model.weights[k] -= cfg.learning_rate * gw[k]
                model.biases[k] -= cfg.learning_rate * gb[k]
        history.train_loss.append(loss_sum / order.size)
        history.val_accuracy.append(
            accuracy(model, dataset.features[val_idx], dataset.labels[val_idx])
        )
        if per_sample_stat is not None:
            vals = np.array([per_sample_stat(int(i)) for i in train_idx])
            stats.append((float(vals.mean()), float(vals.min()), float(vals.max())))
    return model, history, stats


def train_supervised(model: MlpModel, dataset: SyntheticDataset, cfg: TrainConfig):
    """Cross-entropy SGD on the train split; returns (model, history)."""
    labels = dataset.labels
    n_classes = model.n_classes

    def sample_loss(logits, i):
        p = numerics.stable_softmax(logits, 1.0)
        onehot = np.zeros(n_classes)
        onehot[labels[i]] = 1.0
        return numerics.cross_entropy(int(labels[i]), p), p - onehot

    trained, history, _ = sgd_fit(model, dataset, cfg, sample_loss)
    return trained, history


# ---------------------------------------------------------------------------
# dataset file format
# ---------------------------------------------------------------------------


def save_dataset(dataset: SyntheticDataset, path) -> None:
    """Columnar text file: complexity comment, header, one row per sample.

    Floats are written with repr() so the round-trip is bit-exact.
    """
    d = dataset.n_features
    lines = ["# class_complexity=" + ",".join(repr(float(c)) for c in dataset.class_complexity)]
    lines.append("split,label,noise_level," + ",".join(f"f{j}" for j in range(d)))
    for i in range(dataset.n_samples):
        row = [dataset.split[i], str(int(dataset.labels[i])), repr(float(dataset.noise_level[i]))]
        row.extend(repr(float(v)) for v in dataset.features[i])
        lines.append(",".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_dataset(path) -> SyntheticDataset:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if len(lines) < 3 or not lines[0].startswith("# class_complexity="):
        raise ParseError(f"{path}: missing class_complexity comment or data rows")
    try:
        comp = np.array([float(v) for v in lines[0].split("=", 1)[1].split(",")])
        header = lines[1].split(",")
        d = len(header) - 3
        if header != ["split", "label", "noise_level"] + [f"f{j}" for j in range(d)]:
            raise ValueError("bad header")
        splits, labels, noise, feats = [], [], [], []
        for ln in lines[2:]:
            if not ln:
                continue
            cells = ln.split(",")
            if len(cells) != d + 3 or cells[0] not in SPLITS:
                raise ValueError(f"bad row {ln!r}")
            splits.append(cells[0])
            labels.append(int(cells[1]))
            noise.append(float(cells[2]))
            feats.append([float(v) for v in cells[3:]])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    labels_arr = np.array(labels, dtype=np.int64)
    if labels_arr.min() < 0 or labels_arr.max() >= comp.shape[0]:
        raise ParseError(f"{path}: label outside [0, {comp.shape[0]})")
    return SyntheticDataset(
        np.array(feats), labels_arr, np.array(noise), comp, np.array(splits, dtype="<U5")
    )
