"""Candidate-model selection: ant colony optimization plus random,
grid/exhaustive, and particle-swarm baselines.

Every strategy runs against a CandidatePool whose entries are either
fixed-score stubs (for deterministic optimizer tests) or tiny-MLP
hyper-profiles evaluated by actually training on a dataset. Evaluations
are cached per run: re-selecting a candidate is free, and reports count
both total selections and unique evaluation units so strategies can be
compared on evaluation budget.

Counting rule: a unique evaluation unit is a candidate id (single-model
mode) or an ordered pair (pair mode). The one-time cheap proxy pass that
seeds the ACO heuristic vector counts toward unique evaluations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import distill, tinynet
from .errors import (
    AllZeroWeights,
    EmptyRun,
    InsufficientEvaluated,
    InvalidRho,
    InvalidShape,
    ParseError,
    PoolTooSmall,
)
from .temperature import ConstantPolicy

# pair score favors the student side: teacher quality matters, the
# student's achievable accuracy matters more
PAIR_STUDENT_SHARE = 0.7

# proxy pass budget for seeding the heuristic vector
PROXY_SUBSAMPLE = 0.1
PROXY_EPOCHS = 3


# ---------------------------------------------------------------------------
# candidates and pools
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MlpProfile:
    hidden_dims: tuple[int, ...]
    learning_rate: float = 0.05
    epochs: int = 10


@dataclass
class Candidate:
    cid: int
    name: str
    stub_score: float | None = None
    profile: MlpProfile | None = None

    def __post_init__(self):
        if (self.stub_score is None) == (self.profile is None):
            raise InvalidShape(f"candidate {self.name!r} needs exactly one of stub_score/profile")
        if self.stub_score is not None and not 0.0 <= self.stub_score <= 1.0:
            raise InvalidShape(f"stub_score must lie in [0, 1], got {self.stub_score}")


@dataclass
class CandidatePool:
    candidates: list[Candidate]
    dataset: tinynet.SyntheticDataset | None = None

    def __len__(self) -> int:
        return len(self.candidates)

    def __post_init__(self):
        if any(c.profile is not None for c in self.candidates) and self.dataset is None:
            raise InvalidShape("pool with MLP profiles needs a dataset")


def stub_pool(scores) -> CandidatePool:
    return CandidatePool(
        [Candidate(i, f"stub-{i}", stub_score=float(s)) for i, s in enumerate(scores)]
    )


def load_pool(path, dataset=None) -> CandidatePool:
    """Pool definition file: JSON list of {name, stub_score | hidden_dims+lr+epochs}."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    entries = raw.get("candidates") if isinstance(raw, dict) else raw
    if not isinstance(entries, list):
        raise ParseError(f"{path}: expected a list of candidates")
    candidates = []
    for i, e in enumerate(entries):
        name = e.get("name", f"candidate-{i}")
        if "stub_score" in e:
            candidates.append(Candidate(i, name, stub_score=float(e["stub_score"])))
        else:
            try:
                profile = MlpProfile(
                    tuple(int(h) for h in e["hidden_dims"]),
                    float(e.get("learning_rate", 0.05)),
                    int(e.get("epochs", 10)),
                )
            except KeyError as exc:
                raise ParseError(f"{path}: candidate {name!r} missing {exc}") from exc
            candidates.append(Candidate(i, name, profile=profile))
    return CandidatePool(candidates, dataset)


class _EvalContext:
    """Per-run evaluation cache and budget counters."""

    def __init__(self, pool: CandidatePool, run_seed: int):
        self.pool = pool
        self.run_seed = run_seed
        self.single_cache: dict[int, float] = {}
        self.pair_cache: dict[tuple[int, int], float] = {}
        self.proxy_cache: dict[int, float] = {}
        self.total_selections = 0

    @property
    def unique_evaluations(self) -> int:
        proxied_only = set(self.proxy_cache) - set(self.single_cache)
        return len(proxied_only) + len(self.single_cache) + len(self.pair_cache)

    def _seed_for(self, cid: int, proxy: bool = False) -> int:
        ss = np.random.SeedSequence([self.run_seed, cid, int(proxy)])
        return int(ss.generate_state(1)[0])

    def _train_profile(self, cand: Candidate, subsample: float, epochs: int | None) -> float:
        ds = self.pool.dataset
        profile = cand.profile
        seed = self._seed_for(cand.cid, proxy=epochs is not None)
        model = tinynet.init_mlp(
            [ds.n_features, *profile.hidden_dims, ds.n_classes], seed=seed
        )
        work = ds
        if subsample < 1.0:
            # keep only a seeded slice of the train split; val split untouched
            work = ds.copy()
            rng = np.random.default_rng(seed)
            train_idx = work.indices("train")
            keep = max(1, round(subsample * train_idx.size))
            dropped = train_idx[rng.permutation(train_idx.size)][keep:]
            work.split[dropped] = "test"
        cfg = tinynet.TrainConfig(
            epochs=epochs if epochs is not None else profile.epochs,
            learning_rate=profile.learning_rate,
            seed=seed,
        )
        trained, history = tinynet.train_supervised(model, work, cfg)
        return history.val_accuracy[-1]

    def evaluate(self, cid: int) -> float:
        if cid not in self.single_cache:
            cand = self.pool.candidates[cid]
            if cand.stub_score is not None:
                score = cand.stub_score
            else:
                score = self._train_profile(cand, subsample=1.0, epochs=None)
            self.single_cache[cid] = score
        return self.single_cache[cid]

    def proxy_evaluate(self, cid: int) -> float:
        if cid not in self.proxy_cache:
            cand = self.pool.candidates[cid]
            if cand.stub_score is not None:
                score = cand.stub_score
            else:
                score = self._train_profile(cand, PROXY_SUBSAMPLE, PROXY_EPOCHS)
            self.proxy_cache[cid] = score
        return self.proxy_cache[cid]

    def evaluate_pair(self, teacher_id: int, student_id: int) -> float:
        key = (teacher_id, student_id)
        if key not in self.pair_cache:
            t = self.pool.candidates[teacher_id]
            s = self.pool.candidates[student_id]
            if t.stub_score is not None and s.stub_score is not None:
                score = PAIR_STUDENT_SHARE * s.stub_score + (1 - PAIR_STUDENT_SHARE) * t.stub_score
            else:
                score = self._distill_pair(t, s)
            self.pair_cache[key] = score
        return self.pair_cache[key]

    def _distill_pair(self, t: Candidate, s: Candidate) -> float:
        ds = self.pool.dataset
        seed = int(np.random.SeedSequence([self.run_seed, t.cid, s.cid, 2]).generate_state(1)[0])
        teacher = tinynet.init_mlp([ds.n_features, *t.profile.hidden_dims, ds.n_classes], seed)
        teacher, _ = tinynet.train_supervised(
            teacher, ds,
            tinynet.TrainConfig(epochs=t.profile.epochs, learning_rate=t.profile.learning_rate,
                                seed=seed),
        )
        student = tinynet.init_mlp([ds.n_features, *s.profile.hidden_dims, ds.n_classes], seed + 1)
        _, report = distill.distill_train(
            teacher, student, ds,
            distill.KdConfig(
                ConstantPolicy(2.0), t_base=0.5,
                train=tinynet.TrainConfig(epochs=s.profile.epochs,
                                          learning_rate=s.profile.learning_rate, seed=seed),
            ),
        )
        return report.final_val_accuracy


# ---------------------------------------------------------------------------
# ant colony machinery
# ---------------------------------------------------------------------------


@dataclass
class PheromoneState:
    pheromone: np.ndarray
    heuristic: np.ndarray

    def __post_init__(self):
        self.pheromone = np.asarray(self.pheromone, dtype=np.float64)
        self.heuristic = np.asarray(self.heuristic, dtype=np.float64)
        if self.pheromone.shape != self.heuristic.shape or self.pheromone.ndim != 1:
            raise InvalidShape("pheromone and heuristic must be 1-D vectors of equal length")
        if np.any(self.pheromone <= 0):
            raise InvalidShape("pheromone entries must stay > 0")
        if np.any(self.heuristic < 0):
            raise InvalidShape("heuristic entries must be >= 0")


@dataclass(frozen=True)
class AcoConfig:
    alpha: float = 1.0  # pheromone exponent
    beta: float = 2.0  # heuristic exponent
    rho: float = 0.1  # evaporation rate
    q0: float = 0.0  # probability of greedy exploitation; 0 = pure roulette
    n_ants: int = 5
    n_iterations: int = 15
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise InvalidRho(f"rho must lie in [0, 1), got {self.rho!r}")
        if not 0.0 <= self.q0 <= 1.0:
            raise InvalidShape(f"q0 must lie in [0, 1], got {self.q0!r}")
        if self.alpha < 0 or self.beta < 0:
            raise InvalidShape("alpha and beta must be >= 0")
        if self.n_ants < 1 or self.n_iterations < 1:
            raise EmptyRun("n_ants and n_iterations must be >= 1")


def _preference_weights(state: PheromoneState, alpha: float, beta: float) -> np.ndarray:
    w = state.pheromone**alpha * state.heuristic**beta
    if not np.any(w > 0):
        raise AllZeroWeights("every pheromone^alpha * heuristic^beta weight is zero")
    return w


def selection_probabilities(state: PheromoneState, alpha: float, beta: float) -> np.ndarray:
    """P_m = pheromone^alpha * heuristic^beta, normalized over candidates."""
    w = _preference_weights(state, alpha, beta)
    return w / w.sum()


def ant_select(state: PheromoneState, cfg: AcoConfig, rng: np.random.Generator) -> int:
    """One ant's pick: greedy argmax with probability q0, else roulette wheel."""
    w = _preference_weights(state, cfg.alpha, cfg.beta)
    if cfg.q0 > 0.0 and rng.random() < cfg.q0:
        return int(np.argmax(w))
    p = w / w.sum()
    return int(np.searchsorted(np.cumsum(p), rng.random(), side="right").clip(0, p.size - 1))


def update_pheromones(state: PheromoneState, selections, rho: float) -> PheromoneState:
    """phi <- (1 - rho) * phi + sum of selected candidates' performances."""
    if not 0.0 <= rho < 1.0:
        raise InvalidRho(f"rho must lie in [0, 1), got {rho!r}")
    phi = (1.0 - rho) * state.pheromone
    for cid, performance in selections:
        if not 0.0 <= performance <= 1.0:
            raise InvalidShape(f"performance must lie in [0, 1], got {performance!r}")
        phi[cid] += performance
    return PheromoneState(phi, state.heuristic.copy())


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class SelectionReport:
    strategy: str
    seed: int
    pool_size: int
    pair_mode: bool
    best_id: object  # candidate id, or [teacher_id, student_id] in pair mode
    best_name: str
    best_score: float
    teacher_id: int | None
    student_id: int | None
    unique_evaluations: int
    total_selections: int
    evaluated: dict  # str(id or pair) -> score
    history: list = field(default_factory=list)
    final_pheromone: list | None = None

    def to_json(self) -> str:
        payload = dict(self.__dict__)
        return json.dumps(payload, sort_keys=True, indent=2)

    def csv_row(self) -> str:
        return (
            f"{self.strategy},{self.seed},{self.best_score!r},"
            f"{self.unique_evaluations},{self.total_selections}"
        )


CSV_HEADER = "strategy,seed,best_score,unique_evaluations,total_selections"


def _top_two_by_score(scores: dict[int, float]):
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    teacher = ranked[0][0] if ranked else None
    student = ranked[1][0] if len(ranked) > 1 else None
    return teacher, student


def extract_teacher_student(report: SelectionReport) -> tuple[int, int]:
    """Top two candidates by final pheromone, ties by score then index.

    Reports without a pheromone vector (random/grid/pso) rank by score
    alone, which needs at least two evaluated candidates.
    """
    scores = {int(k): v for k, v in report.evaluated.items() if "," not in str(k)}
    if report.final_pheromone is not None:
        phi = np.asarray(report.final_pheromone)
        if phi.size < 2:
            raise InsufficientEvaluated("need at least 2 candidates")
        order = sorted(range(phi.size), key=lambda i: (-phi[i], -scores.get(i, -np.inf), i))
        return order[0], order[1]
    if len(scores) < 2:
        raise InsufficientEvaluated("need at least 2 evaluated candidates")
    teacher, student = _top_two_by_score(scores)
    return teacher, student


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------


def _pair_ids(m: int):
    return [(i, j) for i in range(m) for j in range(m) if i != j]


def run_aco(pool: CandidatePool, cfg: AcoConfig, pair_mode: bool = False,
            init_pheromone=None, init_heuristic=None) -> SelectionReport:
    """Algorithm: pheromones start at one, the heuristic comes from a cheap
    proxy pass, each iteration every ant roulette-selects and evaluates a
    candidate, then a single evaporate+deposit update is applied.

    init_pheromone / init_heuristic override the all-ones start and the
    proxy pass (skipping its evaluations); used to replay worked examples
    from a known mid-run state.
    """
    m = len(pool)
    if m < 2:
        raise PoolTooSmall(f"need >= 2 candidates, got {m}")

    ctx = _EvalContext(pool, cfg.seed)
    rng = np.random.default_rng(cfg.seed)

    if pair_mode:
        units = _pair_ids(m)
        evaluate = lambda u: ctx.evaluate_pair(*units[u])
    else:
        units = list(range(m))
        evaluate = lambda u: ctx.evaluate(u)

    if init_heuristic is not None:
        heuristic = np.asarray(init_heuristic, dtype=np.float64)
    else:
        proxy = np.array([ctx.proxy_evaluate(i) for i in range(m)])
        if pair_mode:
            heuristic = np.array([(proxy[i] + proxy[j]) / 2.0 for i, j in units])
        else:
            heuristic = proxy
    pheromone = (
        np.asarray(init_pheromone, dtype=np.float64)
        if init_pheromone is not None
        else np.ones(len(units))
    )
    if pheromone.shape != (len(units),) or heuristic.shape != (len(units),):
        raise InvalidShape(f"init vectors must have length {len(units)}")

    state = PheromoneState(pheromone, heuristic)
    best_unit, best_score = None, -1.0
    history = []
    for _ in range(cfg.n_iterations):
        probs = selection_probabilities(state, cfg.alpha, cfg.beta)
        selections = []
        for _ant in range(cfg.n_ants):
            u = ant_select(state, cfg, rng)
            score = evaluate(u)
            ctx.total_selections += 1
            selections.append((u, score))
            if score > best_score:
                best_unit, best_score = u, score
        state = update_pheromones(state, selections, cfg.rho)
        history.append(
            {
                "probabilities": probs.tolist(),
                "chosen": [int(u) for u, _ in selections],
                "pheromone": state.pheromone.tolist(),
            }
        )

    if pair_mode:
        teacher_id, student_id = units[best_unit]
        best_id = [teacher_id, student_id]
        best_name = (
            f"{pool.candidates[teacher_id].name}->{pool.candidates[student_id].name}"
        )
        evaluated = {f"{i},{j}": s for (i, j), s in ctx.pair_cache.items()}
    else:
        # teacher/student = top two by final pheromone
        order = sorted(
            range(m),
            key=lambda i: (-state.pheromone[i], -ctx.single_cache.get(i, -np.inf), i),
        )
        teacher_id, student_id = order[0], order[1]
        best_id = int(best_unit)
        best_name = pool.candidates[best_unit].name
        evaluated = {str(i): s for i, s in ctx.single_cache.items()}

    return SelectionReport(
        strategy="aco",
        seed=cfg.seed,
        pool_size=m,
        pair_mode=pair_mode,
        best_id=best_id,
        best_name=best_name,
        best_score=best_score,
        teacher_id=teacher_id,
        student_id=student_id,
        unique_evaluations=ctx.unique_evaluations,
        total_selections=ctx.total_selections,
        evaluated=evaluated,
        history=history,
        final_pheromone=state.pheromone.tolist() if not pair_mode else None,
    )


def run_random(pool: CandidatePool, n_picks: int = 1, seed: int = 0) -> SelectionReport:
    """Uniform sample of n_picks distinct candidates; no learning."""
    m = len(pool)
    if m < 2:
        raise PoolTooSmall(f"need >= 2 candidates, got {m}")
    if n_picks < 1:
        raise EmptyRun("n_picks must be >= 1")
    ctx = _EvalContext(pool, seed)
    rng = np.random.default_rng(seed)
    picks = rng.choice(m, size=min(n_picks, m), replace=False)
    for cid in picks:
        ctx.evaluate(int(cid))
        ctx.total_selections += 1
    teacher_id, student_id = _top_two_by_score(ctx.single_cache)
    best = teacher_id
    return SelectionReport(
        strategy="random",
        seed=seed,
        pool_size=m,
        pair_mode=False,
        best_id=best,
        best_name=pool.candidates[best].name,
        best_score=ctx.single_cache[best],
        teacher_id=teacher_id,
        student_id=student_id,
        unique_evaluations=ctx.unique_evaluations,
        total_selections=ctx.total_selections,
        evaluated={str(i): s for i, s in ctx.single_cache.items()},
    )


def run_grid(pool: CandidatePool, pair_mode: bool = False, seed: int = 0) -> SelectionReport:
    """Exhaustive sweep: every candidate, or every ordered pair."""
    m = len(pool)
    if m < 2:
        raise PoolTooSmall(f"need >= 2 candidates, got {m}")
    ctx = _EvalContext(pool, seed)
    if pair_mode:
        scored = {}
        for i, j in _pair_ids(m):
            scored[(i, j)] = ctx.evaluate_pair(i, j)
            ctx.total_selections += 1
        (ti, si), best_score = min(scored.items(), key=lambda kv: (-kv[1], kv[0]))
        best_id = [ti, si]
        best_name = f"{pool.candidates[ti].name}->{pool.candidates[si].name}"
        teacher_id, student_id = ti, si
        evaluated = {f"{i},{j}": s for (i, j), s in scored.items()}
    else:
        for cid in range(m):
            ctx.evaluate(cid)
            ctx.total_selections += 1
        teacher_id, student_id = _top_two_by_score(ctx.single_cache)
        best_id = teacher_id
        best_name = pool.candidates[teacher_id].name
        best_score = ctx.single_cache[teacher_id]
        evaluated = {str(i): s for i, s in ctx.single_cache.items()}
    return SelectionReport(
        strategy="grid",
        seed=seed,
        pool_size=m,
        pair_mode=pair_mode,
        best_id=best_id,
        best_name=best_name,
        best_score=best_score,
        teacher_id=teacher_id,
        student_id=student_id,
        unique_evaluations=ctx.unique_evaluations,
        total_selections=ctx.total_selections,
        evaluated=evaluated,
    )


@dataclass(frozen=True)
class PsoConfig:
    n_particles: int = 8
    n_iterations: int = 30
    inertia: float = 0.7
    c1: float = 1.5  # pull toward the particle's own best
    c2: float = 1.5  # pull toward the swarm best
    seed: int = 0

    def __post_init__(self):
        if self.n_particles < 1 or self.n_iterations < 0:
            raise EmptyRun("n_particles must be >= 1 and n_iterations >= 0")


def run_pso(pool: CandidatePool, cfg: PsoConfig) -> SelectionReport:
    """Particles move on the continuous index line [0, M-1]; positions are
    clamped and rounded to candidate ids for evaluation."""
    m = len(pool)
    if m < 2:
        raise PoolTooSmall(f"need >= 2 candidates, got {m}")
    ctx = _EvalContext(pool, cfg.seed)
    rng = np.random.default_rng(cfg.seed)

    x = rng.uniform(0.0, m - 1.0, cfg.n_particles)
    v = np.zeros(cfg.n_particles)

    def score_at(positions):
        out = np.empty(positions.size)
        for k, pos in enumerate(positions):
            cid = int(np.clip(round(pos), 0, m - 1))
            out[k] = ctx.evaluate(cid)
            ctx.total_selections += 1
        return out

    pbest_x = x.copy()
    pbest_y = score_at(x)
    g = int(np.argmax(pbest_y))
    gbest_x, gbest_y = pbest_x[g], pbest_y[g]
    history = [{"gbest": float(gbest_y)}]

    for _ in range(cfg.n_iterations):
        r1 = rng.random(cfg.n_particles)
        r2 = rng.random(cfg.n_particles)
        v = cfg.inertia * v + cfg.c1 * r1 * (pbest_x - x) + cfg.c2 * r2 * (gbest_x - x)
        x = np.clip(x + v, 0.0, m - 1.0)
        y = score_at(x)
        improved = y > pbest_y
        pbest_x[improved] = x[improved]
        pbest_y[improved] = y[improved]
        g = int(np.argmax(pbest_y))
        if pbest_y[g] > gbest_y:
            gbest_x, gbest_y = pbest_x[g], pbest_y[g]
        history.append({"gbest": float(gbest_y)})

    teacher_id, student_id = _top_two_by_score(ctx.single_cache)
    best_id = int(np.clip(round(gbest_x), 0, m - 1))
    return SelectionReport(
        strategy="pso",
        seed=cfg.seed,
        pool_size=m,
        pair_mode=False,
        best_id=best_id,
        best_name=pool.candidates[best_id].name,
        best_score=float(gbest_y),
        teacher_id=teacher_id,
        student_id=student_id,
        unique_evaluations=ctx.unique_evaluations,
        total_selections=ctx.total_selections,
        evaluated={str(i): s for i, s in ctx.single_cache.items()},
        history=history,
    )
