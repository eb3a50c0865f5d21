"""
Checking the symmetry reduction against brute force.

For two qubits the 60 stabiliser states are built as dense 4x4 matrices and
the robustness LP is solved over all of them in the 16-dimensional Pauli
basis.  The symmetry-reduced LP uses four vertices in three dimensions and
must give the same number.
"""
from magicrom import build_polytope, solve_l1
from magicrom.oracle import all_stabiliser_states, dense_project, dense_rom, magic_state

states = all_stabiliser_states(2)
print(f"{len(states)} two-qubit stabiliser states")
for mode in "HT":
    dense = dense_rom(magic_state(mode, 2), states)
    reduced = solve_l1(build_polytope(2, mode)).value
    print(f"{mode}: dense {dense:.9f}, reduced {reduced:.9f}")

print("\nprojection of the first state:", states[0].generators, dense_project(states[0], "H").round(6))
