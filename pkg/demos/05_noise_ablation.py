"""Noise-type ablation: the same context-aware student under gaussian,
salt-and-pepper, and uniform corruption versus the clean dataset.

Clean data should come out on top; the noise kinds reorder below it
depending on how much structure each one destroys.
"""

from antdistill import TrainConfig, generate_synthetic, init_mlp, inject_noise, train_supervised
from antdistill.distill import KdConfig, distill_train
from antdistill.temperature import RuleBasedPolicy
from antdistill.tinynet import accuracy

seed = 1
clean = generate_synthetic(600, 4, 8, 0.4, seed)
cfg = TrainConfig(epochs=30, seed=seed)
teacher = init_mlp([8, 32, 32, 4], seed=seed + 1)
teacher, _ = train_supervised(teacher, clean, cfg)
student0 = init_mlp([8, 16, 16, 4], seed=seed + 2)

print(f"{'condition':<16} {'test accuracy':>13}")
for tag in ("clean", "gaussian", "salt_pepper", "uniform"):
    ds = clean if tag == "clean" else inject_noise(clean, tag, 0.5, seed=seed + 50)
    student, _ = distill_train(teacher, student0, ds, KdConfig(RuleBasedPolicy(), 0.5, cfg))
    test = ds.indices("test")
    acc = accuracy(student, ds.features[test], ds.labels[test])
    print(f"{tag:<16} {acc:>13.3f}")
