"""
Robustness of |H> on one qubit, end to end.

The symmetry of |H> collapses the six single-qubit stabiliser states onto a
line segment: each state is described by the integer vector (1, B_1), where
B_1 counts its X-type stabiliser elements with sign.  |+> and |-> are the
two endpoints; |0>, |1>, |+i>, |-i> all land at the midpoint (1, 0).
"""
from magicrom import build_polytope, solve_l1, split_decomposition, st_norm
from magicrom.polytope import connected_projections

points = sorted({v.coords.coeffs for v in connected_projections(1, "H")})
print("projected stabiliser states:", points)

P = build_polytope(1, "H")
print("vertices after the extreme-point filter:", [v.coords.coeffs for v in P.vertices])

d = solve_l1(P)
print(f"\nrobustness value {d.value:.6f} (sqrt 2 = {2 ** 0.5:.6f})")
for coef, _, coords in d.terms:
    print(f"  {coef:+.6f} x {coords}")

s = split_decomposition(d)
print(f"\nsplit into (1+R) sigma+ - R sigma- with R = {s.R:.6f}")
print("  sigma+ =", [(round(w, 6), c) for w, _, c in s.plus])
print("  sigma- =", [(round(w, 6), c) for w, _, c in s.minus])
print(f"\nlower bound from the st-norm: {st_norm('H', 1):.6f}")
