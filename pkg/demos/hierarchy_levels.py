"""
How much entanglement does the optimal decomposition need?

Level k of the hierarchy only allows products of fully entangled pieces on at
most k qubits.  Level 1 is product states, level n is the exact problem.  The
printout shows where each value stops improving.
"""
from magicrom import build_levels, level_robustness

for mode, n in (("H", 6), ("T", 6)):
    levels = build_levels(n, mode)
    print(f"{mode}-mode, n = {n}")
    for k in range(1, n + 1):
        d = level_robustness(mode, n, k, levels)
        shown = f"{d.value:.6f}" if d.feasible else "infeasible"
        print(f"  k = {k}: {shown}")
