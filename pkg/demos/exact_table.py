"""
Exact robustness for small tensor powers, next to its two bounds.

For each n the full projected polytope is built (cached under
$MAGICROM_CACHE or ~/.cache/magicrom), then compared with the st-norm lower
bound and the Bell-level upper bound.  Pass a larger top n as the first
argument; n = 7 takes about half a minute on one core.
"""
import sys

from magicrom import approx_robustness, build_levels, solve_l1, st_norm
from magicrom.polytope import default_cache_dir

top = int(sys.argv[1]) if len(sys.argv) > 1 else 6
print(f"{'mode':>4} {'n':>2} {'vertices':>8} {'st-norm':>10} {'exact':>10} {'bell':>10} {'exact^(1/n)':>11}")
for mode in "HT":
    levels = build_levels(top, mode, cache_dir=default_cache_dir())
    for n in range(1, top + 1):
        exact = solve_l1(levels[n]).value
        bell = approx_robustness(mode, n).value
        print(f"{mode:>4} {n:>2} {len(levels[n].vertices):>8} {st_norm(mode, n):>10.5f} {exact:>10.5f} "
              f"{bell:>10.5f} {exact ** (1 / n):>11.5f}")
