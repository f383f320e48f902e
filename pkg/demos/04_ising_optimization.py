"""
Ising encodings, annealing, and QAOA
====================================

Classical optimization problems become spin models; the ground state
is then chased two ways, by slow adiabatic evolution and by a shallow
variational circuit.
"""

import numpy as np

from qsimlab.ising import (
    IsingModel,
    anneal,
    brute_force_ground,
    linear_schedule,
    partition_to_ising,
    qaoa_optimize,
    subset_sum_to_ising,
)

# --- encodings --------------------------------------------------------
model = subset_sum_to_ising(7, (-5, -3, 1, 4, 9))
energy, states = brute_force_ground(model)
print("subset-sum m=7 over {-5,-3,1,4,9}: ground energy", energy)
for bits in states:
    chosen = [v for v, z in zip((-5, -3, 1, 4, 9), bits) if z]
    print("  selection", bits, "->", chosen, "sums to", sum(chosen))

# no subset reaches 13, so the minimum stays positive
energy, _ = brute_force_ground(subset_sum_to_ising(13, (-3, 2, 8, 4, 20)))
print("subset-sum m=13 over {-3,2,8,4,20}: ground energy", energy, "(no solution)")

values = (1, 2, 3, 4, 6, 10)
energy, states = brute_force_ground(partition_to_ising(values))
print("\npartition of", values, "- ground splits:")
for bits in states[: len(states) // 2]:
    left = [v for v, z in zip(values, bits) if z]
    right = [v for v, z in zip(values, bits) if not z]
    print("  ", left, "|", right)

# --- annealing --------------------------------------------------------
pair = IsingModel([0.5, 0.25], [[0.0, 0.75], [0.0, 0.0]])
print("\nannealing a gapped 2-spin model:")
print("  tau   p_success  min_gap")
for tau in (0.25, 1.0, 4.0, 16.0):
    res = anneal(pair, linear_schedule(tau))
    print(f"  {tau:5.2f}  {res.p_success:.5f}    {res.min_gap:.5f}")

# --- QAOA ---------------------------------------------------------------
gen = np.random.default_rng(11)
params, best_e, trace = qaoa_optimize(pair, p=2, budget=400, rng=gen)
ground, _ = brute_force_ground(pair)
print("\nQAOA p=2 on the same model: best", round(best_e, 6),
      "vs ground", ground)
marks = [0, 50, 100, 200, len(trace) - 1]
print("best-so-far trace:", [round(trace[i], 4) for i in marks])
