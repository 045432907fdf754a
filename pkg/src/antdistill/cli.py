"""Command-line experiment harness.

Subcommands:
  gen-data        write a synthetic dataset file from a [data] section
  select          run one selection strategy (aco/random/grid/pso) on a pool
  distill         teacher -> student distillation, optionally as an
                  ablation grid (--ablation table10 | table11)
  evaluate        classification metrics from predictions/labels files
  repro-examples  recompute the built-in worked examples and verify them

Every command is deterministic given its config file; reruns produce
byte-identical outputs. Each run directory receives a copy of the config
next to its reports.
"""

from __future__ import annotations

import argparse
import math
import shutil
import sys
from pathlib import Path

import numpy as np

from . import metrics, selection, tinynet
from .config import RunConfig, build_policy, load_config
from .distill import KdConfig, distill_train
from .errors import ConfigParseError, ParseError, VerificationFailed
from .selection import AcoConfig, PsoConfig
from .temperature import (
    ConstantPolicy,
    ContextFeatures,
    RuleBasedPolicy,
    UncertaintyLinearPolicy,
    apply_policy,
)


def _derived_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _prepare_out(cfg: RunConfig | None, override: str | None) -> Path:
    if override:
        out = Path(override)
    elif cfg is not None and cfg.has("out"):
        out = cfg.resolve(cfg.get("out", "dir"))
    else:
        raise ConfigParseError("no output directory: pass --out or add an [out] section")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _copy_config(cfg: RunConfig, out: Path) -> None:
    shutil.copyfile(cfg.path, out / "config.ini")


def _build_dataset(cfg: RunConfig) -> tuple[tinynet.SyntheticDataset, tinynet.SyntheticDataset]:
    """Returns (clean, experiment) datasets from the [data] section."""
    samples = cfg.get("data", "samples")
    classes = cfg.get("data", "classes")
    dim = cfg.get("data", "dim")
    complexity = cfg.get("data", "complexity", default=[0.0])
    seed = cfg.get("data", "seed", default=0)
    comp = complexity if len(complexity) > 1 else complexity[0]
    clean = tinynet.generate_synthetic(samples, classes, dim, comp, seed)
    kind = cfg.get("data", "noise_kind", default="none")
    if kind == "none":
        return clean, clean
    level = cfg.get("data", "noise_level", default=0.0)
    fraction = cfg.get("data", "noise_fraction", default=1.0)
    noisy = tinynet.inject_noise(clean, kind, level, _derived_seed(seed, 101), fraction)
    return clean, noisy


# ---------------------------------------------------------------------------
# gen-data
# ---------------------------------------------------------------------------


def cmd_gen_data(args) -> int:
    cfg = load_config(args.config)
    out = _prepare_out(cfg, args.out)
    _copy_config(cfg, out)
    _, dataset = _build_dataset(cfg)
    tinynet.save_dataset(dataset, out / "dataset.csv")
    counts = {s: dataset.indices(s).size for s in tinynet.SPLITS}
    print(
        f"wrote {out / 'dataset.csv'}: n={dataset.n_samples} classes={dataset.n_classes} "
        f"train={counts['train']} val={counts['val']} test={counts['test']} "
        f"mean_noise={dataset.noise_level.mean():.6f}"
    )
    return 0


# ---------------------------------------------------------------------------
# select
# ---------------------------------------------------------------------------


def cmd_select(args) -> int:
    cfg = load_config(args.config)
    strategy = args.strategy
    section = cfg.section(strategy)
    pool_path = cfg.resolve(cfg.get(strategy, "pool"))
    pool = selection.load_pool(pool_path)
    if any(c.profile is not None for c in pool.candidates):
        _, dataset = _build_dataset(cfg)
        pool.dataset = dataset

    if strategy == "aco":
        aco_cfg = AcoConfig(
            alpha=section.get("alpha", 1.0),
            beta=section.get("beta", 2.0),
            rho=section.get("rho", 0.1),
            q0=section.get("q0", 0.0),
            n_ants=section.get("n_ants", 5),
            n_iterations=section.get("n_iterations", 15),
            seed=section.get("seed", 0),
        )
        report = selection.run_aco(
            pool,
            aco_cfg,
            pair_mode=section.get("pair_mode", False),
            init_pheromone=section.get("init_pheromone"),
            init_heuristic=section.get("init_heuristic"),
        )
    elif strategy == "random":
        report = selection.run_random(
            pool, n_picks=section.get("n_picks", 1), seed=section.get("seed", 0)
        )
    elif strategy == "grid":
        report = selection.run_grid(pool, pair_mode=section.get("pair_mode", False))
    else:
        pso_cfg = PsoConfig(
            n_particles=section.get("n_particles", 8),
            n_iterations=section.get("n_iterations", 30),
            inertia=section.get("inertia", 0.7),
            c1=section.get("c1", 1.5),
            c2=section.get("c2", 1.5),
            seed=section.get("seed", 0),
        )
        report = selection.run_pso(pool, pso_cfg)

    out = _prepare_out(cfg, args.out)
    _copy_config(cfg, out)
    (out / "report.json").write_text(report.to_json() + "\n")
    (out / "report.csv").write_text(selection.CSV_HEADER + "\n" + report.csv_row() + "\n")
    print(
        f"{strategy}: best={report.best_name} score={report.best_score:.6f} "
        f"unique_evaluations={report.unique_evaluations} "
        f"total_selections={report.total_selections}"
    )
    return 0


# ---------------------------------------------------------------------------
# distill
# ---------------------------------------------------------------------------


def _test_metrics(model: tinynet.MlpModel, dataset: tinynet.SyntheticDataset):
    idx = dataset.indices("test")
    logits = tinynet.forward_batch(model, dataset.features[idx])
    shifted = logits - logits.max(axis=1, keepdims=True)
    probs = np.exp(shifted)
    probs /= probs.sum(axis=1, keepdims=True)
    preds = np.argmax(logits, axis=1)
    labels = dataset.labels[idx]
    cm = metrics.confusion(preds, labels, dataset.n_classes)
    rep = metrics.class_report(cm)
    roc = metrics.roc_auc_micro(probs, labels)
    pr = metrics.pr_average_precision_micro(probs, labels)
    return rep, roc, pr


def _train_teacher(cfg: RunConfig, clean: tinynet.SyntheticDataset):
    kd_seed = cfg.get("kd", "seed", default=0)
    hidden = cfg.get("kd", "teacher_hidden", default=[32, 32])
    train_cfg = _train_config(cfg)
    teacher = tinynet.init_mlp(
        [clean.n_features, *hidden, clean.n_classes], seed=_derived_seed(kd_seed, 1)
    )
    teacher, _ = tinynet.train_supervised(teacher, clean, train_cfg)
    return teacher


def _train_config(cfg: RunConfig) -> tinynet.TrainConfig:
    return tinynet.TrainConfig(
        epochs=cfg.get("kd", "epochs", default=30),
        batch_size=cfg.get("kd", "batch_size", default=32),
        learning_rate=cfg.get("kd", "learning_rate", default=0.05),
        seed=cfg.get("kd", "seed", default=0),
    )


def _student_init(cfg: RunConfig, dataset: tinynet.SyntheticDataset) -> tinynet.MlpModel:
    kd_seed = cfg.get("kd", "seed", default=0)
    hidden = cfg.get("kd", "student_hidden", default=[16, 16])
    return tinynet.init_mlp(
        [dataset.n_features, *hidden, dataset.n_classes], seed=_derived_seed(kd_seed, 2)
    )


def _context_policy(cfg: RunConfig):
    """Policy for the context-aware arm: the configured one unless it is
    constant, in which case the rule-based defaults stand in."""
    policy = build_policy(cfg.section("policy")) if cfg.has("policy") else RuleBasedPolicy()
    if isinstance(policy, ConstantPolicy):
        policy = RuleBasedPolicy()
    return policy


def _metrics_row(tag: str, rep: metrics.ClassReport) -> str:
    return (
        f"{tag},{rep.accuracy!r},{rep.macro_f1!r},{rep.macro_recall!r},{rep.macro_precision!r}"
    )


ABLATION_HEADER = "approach,accuracy,macro_f1,macro_recall,macro_precision"


def cmd_distill(args) -> int:
    cfg = load_config(args.config)
    out = _prepare_out(cfg, args.out)
    _copy_config(cfg, out)
    clean, experiment = _build_dataset(cfg)
    teacher = _train_teacher(cfg, clean)
    train_cfg = _train_config(cfg)
    t_base = cfg.get("kd", "t_base", default=0.5)

    if args.ablation == "table10":
        student = _student_init(cfg, experiment)
        rows = []
        rep, _, _ = _test_metrics(teacher, experiment)
        rows.append(_metrics_row("teacher", rep))
        supervised, _ = tinynet.train_supervised(student, experiment, train_cfg)
        rep, _, _ = _test_metrics(supervised, experiment)
        rows.append(_metrics_row("student_supervised", rep))
        const_policy = (
            build_policy(cfg.section("policy"))
            if cfg.has("policy") and cfg.get("policy", "variant") == "constant"
            else ConstantPolicy(2.0)
        )
        const_student, _ = distill_train(
            teacher, student, experiment, KdConfig(const_policy, t_base, train_cfg)
        )
        rep, _, _ = _test_metrics(const_student, experiment)
        rows.append(_metrics_row("student_constant_temp", rep))
        ctx_student, _ = distill_train(
            teacher, student, experiment, KdConfig(_context_policy(cfg), t_base, train_cfg)
        )
        rep, _, _ = _test_metrics(ctx_student, experiment)
        rows.append(_metrics_row("student_context_aware", rep))
        (out / "ablation.csv").write_text(ABLATION_HEADER + "\n" + "\n".join(rows) + "\n")
        print(f"wrote {out / 'ablation.csv'} (4 rows)")
        return 0

    if args.ablation == "table11":
        level = cfg.get("data", "noise_level", default=0.5)
        seed = cfg.get("data", "seed", default=0)
        rows = []
        for tag in ("gaussian", "salt_pepper", "uniform", "clean"):
            if tag == "clean":
                variant = clean
            else:
                variant = tinynet.inject_noise(clean, tag, level, _derived_seed(seed, 102))
            student = _student_init(cfg, variant)
            trained, _ = distill_train(
                teacher, student, variant, KdConfig(_context_policy(cfg), t_base, train_cfg)
            )
            rep, _, _ = _test_metrics(trained, variant)
            rows.append(_metrics_row(tag, rep))
        (out / "ablation.csv").write_text(ABLATION_HEADER + "\n" + "\n".join(rows) + "\n")
        print(f"wrote {out / 'ablation.csv'} (4 rows)")
        return 0

    policy = build_policy(cfg.section("policy")) if cfg.has("policy") else RuleBasedPolicy()
    student = _student_init(cfg, experiment)
    trained, report = distill_train(
        teacher, student, experiment, KdConfig(policy, t_base, train_cfg)
    )
    rep, roc, pr = _test_metrics(trained, experiment)
    (out / "distill_report.json").write_text(report.to_json() + "\n")
    (out / "metrics.csv").write_text(metrics.report_csv(rep))
    (out / "summary.csv").write_text(metrics.summary_csv(rep, roc, pr))
    print(
        f"distilled student: test_accuracy={rep.accuracy:.6f} "
        f"val_accuracy={report.final_val_accuracy:.6f}"
    )
    return 0


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------


def _read_csv_table(path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path) as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise ParseError(f"{path}: empty file")
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


def cmd_evaluate(args) -> int:
    header_p, rows_p = _read_csv_table(args.predictions)
    header_l, rows_l = _read_csv_table(args.labels)
    if header_l != ["label"]:
        raise ParseError(f"{args.labels}: expected header 'label', got {header_l}")
    want_probs = header_p[:1] == ["pred"] and len(header_p) > 1
    if header_p != ["pred"] and not (
        want_probs and header_p[1:] == [f"p{j}" for j in range(len(header_p) - 1)]
    ):
        raise ParseError(f"{args.predictions}: expected header 'pred[,p0,p1,...]', got {header_p}")
    try:
        preds = np.array([int(r[0]) for r in rows_p], dtype=np.int64)
        labels = np.array([int(r[0]) for r in rows_l], dtype=np.int64)
        probs = (
            np.array([[float(v) for v in r[1:]] for r in rows_p]) if want_probs else None
        )
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad cell value: {exc}") from exc

    n_classes = (
        probs.shape[1] if probs is not None else int(max(preds.max(), labels.max())) + 1
    )
    cm = metrics.confusion(preds, labels, n_classes)
    rep = metrics.class_report(cm)
    roc = pr = None
    if probs is not None:
        roc = metrics.roc_auc_micro(probs, labels)
        pr = metrics.pr_average_precision_micro(probs, labels)
    else:
        print("warning: no probability columns, skipping AUC/AP")

    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.csv").write_text(metrics.report_csv(rep))
    (out / "summary.csv").write_text(metrics.summary_csv(rep, roc, pr))
    print(f"accuracy={rep.accuracy:.6f} samples={cm.total}")
    return 0


# ---------------------------------------------------------------------------
# repro-examples
# ---------------------------------------------------------------------------


def _fmt(values) -> str:
    if isinstance(values, (list, tuple, np.ndarray)):
        return "[" + ", ".join(f"{v:.6f}" for v in np.atleast_1d(values)) + "]"
    return f"{values:.6f}"


def run_example_checks(tamper: bool = False) -> list[tuple[str, bool, str]]:
    """Recompute each built-in worked example; returns (name, ok, detail)."""
    checks = []

    state = selection.PheromoneState(np.array([2.0, 1.0, 4.0]), np.array([3.0, 5.0, 2.0]))
    probs = selection.selection_probabilities(state, 1.0, 2.0)
    if tamper:
        probs = probs + 0.05
    checks.append(("selection probabilities", probs, [0.305, 0.424, 0.271], 1e-3))

    updated = selection.update_pheromones(state, [(1, 0.8), (0, 0.9), (1, 0.7)], rho=0.1)
    checks.append(("pheromone update", updated.pheromone, [2.7, 2.4, 3.6], 1e-9))

    ctx = ContextFeatures(0.0, 0.5, 0.0, 0.3)
    temp = apply_policy(UncertaintyLinearPolicy(scale=2.0), ctx).temperature
    checks.append(("adaptive temperature", temp, 1.6, 0.0))

    from .numerics import stable_softmax

    z = [2.0, 0.5, -1.0]
    p2 = stable_softmax(z, 2.0)
    oracle2 = np.array([math.exp(v / 2.0) for v in z])
    oracle2 /= oracle2.sum()
    checks.append(("softmax T=2 vs rounded print", p2, [0.61, 0.27, 0.12], 0.03))
    checks.append(("softmax T=2 vs exp oracle", p2, oracle2, 1e-4))
    p16 = stable_softmax(z, 1.6)
    oracle16 = np.array([math.exp(v / 1.6) for v in z])
    oracle16 /= oracle16.sum()
    checks.append(("softmax T=1.6 vs rounded print", p16, [0.65, 0.23, 0.12], 0.03))
    checks.append(("softmax T=1.6 vs exp oracle", p16, oracle16, 1e-4))

    results = []
    for name, computed, reference, tol in checks:
        comp = np.atleast_1d(np.asarray(computed, dtype=np.float64))
        ref = np.atleast_1d(np.asarray(reference, dtype=np.float64))
        if tol == 0.0:
            ok = bool(np.all(comp == ref))
        else:
            ok = bool(np.all(np.abs(comp - ref) <= tol))
        detail = f"computed={_fmt(computed)} reference={_fmt(reference)} tol={tol:g}"
        results.append((name, ok, detail))
    return results


def cmd_repro_examples(args) -> int:
    results = run_example_checks(tamper=args.tamper)
    lines = []
    for name, ok, detail in results:
        lines.append(f"{'PASS' if ok else 'FAIL'}  {name:<32} {detail}")
    n_ok = sum(ok for _, ok, _ in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "repro_examples.txt").write_text(text)
    if n_ok != len(results):
        raise VerificationFailed(f"{len(results) - n_ok} worked-example checks deviated")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antdistill",
        description="Reproducible model-selection and distillation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="write a synthetic dataset file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (overrides [out] dir)")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("select", help="run a model-selection strategy")
    p.add_argument("--config", required=True)
    p.add_argument("--strategy", required=True, choices=["aco", "random", "grid", "pso"])
    p.add_argument("--out", help="output directory (overrides [out] dir)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("distill", help="teacher -> student distillation run")
    p.add_argument("--config", required=True)
    p.add_argument("--ablation", choices=["table10", "table11"])
    p.add_argument("--out", help="output directory (overrides [out] dir)")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("evaluate", help="metrics from predictions/labels files")
    p.add_argument("--predictions", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", help="output directory (default: current)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("repro-examples", help="verify built-in worked examples")
    p.add_argument("--out", help="also write repro_examples.txt here")
    p.add_argument("--tamper", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_repro_examples)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())
