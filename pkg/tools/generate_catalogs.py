"""Regenerate the bundled graph catalogs in src/magicrom/data.

Usage: python tools/generate_catalogs.py [max_n]

Each level is built by vertex extension from the levels below it.  With
pynauty installed n=9 takes a few minutes; without it expect much longer.
"""
import sys
import time
from pathlib import Path

from magicrom.graphs import (
    BRUTE_FORCE_MAX,
    enumerate_representatives,
    extend_catalog,
    write_catalog,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "magicrom" / "data"


def main(max_n: int = 9) -> None:
    connected = {n: enumerate_representatives(n) for n in range(1, BRUTE_FORCE_MAX + 1)}
    for n in range(BRUTE_FORCE_MAX + 1, max_n + 1):
        t0 = time.time()
        reps = extend_catalog(n, connected)
        connected[n] = tuple(reps)
        path = DATA / f"graphs_n{n}.txt"
        write_catalog(path, reps, comment=f"connected graphs on {n} vertices, one per orbit under\n"
                                          "local complementation and relabelling (generated by vertex extension)")
        print(f"n={n}: {len(reps)} representatives in {time.time() - t0:.1f}s -> {path.name}", flush=True)


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 9)
