"""Ant-colony selection over a stub candidate pool.

Shows the probability formula on a known pheromone/heuristic state, one
pheromone update, and a full run converging on the dominant candidate.
"""

import numpy as np

from antdistill import (
    AcoConfig,
    PheromoneState,
    run_aco,
    selection_probabilities,
    stub_pool,
    update_pheromones,
)

state = PheromoneState(pheromone=[2.0, 1.0, 4.0], heuristic=[3.0, 5.0, 2.0])
probs = selection_probabilities(state, alpha=1.0, beta=2.0)
print("pheromone:", state.pheromone, " heuristic:", state.heuristic)
print("selection probabilities (alpha=1, beta=2):", np.round(probs, 3))
print("model 2 is the most attractive pick at {:.1f}%".format(100 * probs[1]))

new = update_pheromones(state, [(1, 0.8), (0, 0.9), (1, 0.7)], rho=0.1)
print("\nafter three ants deposit (model2: 0.8, model1: 0.9, model2: 0.7), rho=0.1:")
print("updated pheromone:", np.round(new.pheromone, 6))

print("\nfull run on a 16-stub pool with one dominant candidate (0.95):")
scores = list(np.round(np.linspace(0.3, 0.8, 15), 3)) + [0.95]
pool = stub_pool(scores)
report = run_aco(pool, AcoConfig(n_ants=5, n_iterations=15, seed=0))
print(f"  best candidate: {report.best_name} (score {report.best_score})")
print(f"  teacher/student by pheromone: {report.teacher_id}, {report.student_id}")
print(f"  unique evaluations: {report.unique_evaluations}  "
      f"total selections: {report.total_selections}")
phi = np.array(report.final_pheromone)
print(f"  final pheromone, top 3: {np.argsort(-phi)[:3].tolist()}")
