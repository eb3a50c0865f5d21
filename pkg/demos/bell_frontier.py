"""
The Bell-level bound at large n.

Its vertex count grows only quadratically, so every solve is fast.  The
script also runs an exact rational rank test on whether the target lies in
the affine span of the vertices; that decides LP feasibility independently of
floating point.
"""
import time

from magicrom import approx_robustness, approx_vertices
from magicrom.hierarchy import in_affine_span

for mode in "HT":
    for n in (10, 20, 24, 25, 26, 27, 30):
        t0 = time.perf_counter()
        d = approx_robustness(mode, n)
        dt = time.perf_counter() - t0
        span = in_affine_span(approx_vertices(mode, n), mode, n)
        value = f"{d.value:.6g}" if d.feasible else "infeasible"
        print(f"{mode}{n:<3} vertices={len(approx_vertices(mode, n)):<4} value={value:<12} "
              f"in_span={span} {dt * 1000:.0f} ms")
