"""
Command-line front end.

    magicrom vertices --mode T --qubits 3
    magicrom exact --mode H --qubits 6 --out results/
    magicrom approx --mode T --qubits 10 --level bell
    magicrom verify --quick
    magicrom fit results/results.csv

Exit codes: 0 ok, 2 configuration or catalog gap, 3 I/O, 4 internal
inconsistency.  An infeasible approximation is a result, not an error.
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from .enumerator import MAX_QUBITS
from .graphs import CatalogError
from .hierarchy import approx_robustness, level_robustness
from .l1 import (
    Decomposition,
    Infeasible,
    robustness_conversion,
    solve_l1,
    st_norm,
    write_decomposition,
)
from .polytope import CacheError, build_levels, default_cache_dir

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_INTERNAL = 0, 2, 3, 4
CSV_FIELDS = ("mode", "n", "method", "value", "value_reg", "lower_bound", "feasible", "seconds")

log = logging.getLogger("magicrom")


class ConfigError(ValueError):
    pass


def _cache_dir(args):
    if args.no_cache:
        return None
    return Path(args.cache) if args.cache else default_cache_dir()


def _fmt(x: float) -> str:
    return "" if x is None or not math.isfinite(x) else f"{x:.10f}"


def csv_row(d: Decomposition, seconds: float | None = None) -> dict:
    ok = d.feasible and math.isfinite(d.value)
    return {
        "mode": d.mode,
        "n": d.n,
        "method": d.method,
        "value": _fmt(d.value) if ok else "",
        "value_reg": _fmt(d.value ** (1 / d.n)) if ok else "",
        "lower_bound": _fmt(st_norm(d.mode, d.n)),
        "feasible": "true" if d.feasible else "false",
        "seconds": "" if seconds is None else f"{seconds:.3f}",
    }


def format_csv(rows, header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    if header:
        w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def append_csv(path: Path, row: dict) -> None:
    new = not path.exists() or path.stat().st_size == 0
    with path.open("a") as fh:
        fh.write(format_csv([row], header=new))


def _report(d: Decomposition, seconds: float, args) -> None:
    row = csv_row(d, seconds if args.timings else None)
    if args.csv:
        sys.stdout.write(format_csv([row]))
    else:
        lb = st_norm(d.mode, d.n)
        if d.feasible:
            print(f"{d.mode}{d.n} {d.method}: value={d.value:.6f} value_reg={d.value ** (1 / d.n):.6f} "
                  f"R={robustness_conversion(d.value):.6f} lower_bound={lb:.6f} residual={d.residual:.1e} "
                  f"terms={len(d.terms)}")
        else:
            print(f"{d.mode}{d.n} {d.method}: feasible=false lower_bound={lb:.6f}")
        if args.timings:
            print(f"seconds={seconds:.3f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_decomposition(d, out / f"decomposition_{d.mode}{d.n}_{d.method}.jsonl")
        append_csv(out / "results.csv", row)


def _check_qubits(n: int, limit: int = MAX_QUBITS) -> None:
    if not 1 <= n <= limit:
        raise ConfigError(f"--qubits must be in 1..{limit}, got {n}")


def _check_catalog(args) -> None:
    if args.catalog and not Path(args.catalog).is_file():
        raise ConfigError(f"catalog file {args.catalog} does not exist")


def cmd_vertices(args) -> int:
    _check_qubits(args.qubits)
    _check_catalog(args)
    levels = build_levels(args.qubits, args.mode, catalog=args.catalog, cache_dir=_cache_dir(args), jobs=args.jobs)
    P = levels[args.qubits]
    print(f"connected={P.connected_count} products={P.product_count} vertices={len(P.vertices)}")
    return EXIT_OK


def cmd_exact(args) -> int:
    _check_qubits(args.qubits)
    _check_catalog(args)
    t0 = time.perf_counter()
    levels = build_levels(args.qubits, args.mode, catalog=args.catalog, cache_dir=_cache_dir(args), jobs=args.jobs)
    try:
        d = solve_l1(levels[args.qubits])
    except Infeasible as exc:
        print(f"error: {exc}; the full polytope must contain the target, so generation is broken", file=sys.stderr)
        return EXIT_INTERNAL
    _report(d, time.perf_counter() - t0, args)
    return EXIT_OK


def cmd_approx(args) -> int:
    _check_catalog(args)
    t0 = time.perf_counter()
    if args.level == "bell":
        _check_qubits(args.qubits, limit=10**4)
        d = approx_robustness(args.mode, args.qubits)
    else:
        try:
            k = int(args.level)
        except ValueError:
            raise ConfigError(f"--level must be 'bell' or an integer, got {args.level!r}") from None
        _check_qubits(args.qubits, limit=10**4)
        if not 1 <= k <= args.qubits:
            raise ConfigError(f"--level must be in 1..{args.qubits}")
        _check_qubits(k)
        levels = build_levels(k, args.mode, catalog=args.catalog, cache_dir=_cache_dir(args), jobs=args.jobs)
        d = level_robustness(args.mode, args.qubits, k, levels)
    _report(d, time.perf_counter() - t0, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .oracle import run_verification

    cache = None if args.no_cache else (Path(args.cache) if args.cache else None)
    checks = run_verification(quick=args.quick, cache_dir=cache)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print("FAIL" if failed else "PASS")
    return EXIT_INTERNAL if failed else EXIT_OK


def fit_growth(ns, values) -> tuple[float, float]:
    """Least-squares ``value ~ a * c^n`` on log scale; returns ``(a, c)``."""
    ns = np.asarray(ns, dtype=float)
    logs = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(ns, logs, 1)
    return float(np.exp(intercept)), float(np.exp(slope))


def cmd_fit(args) -> int:
    groups: dict[tuple, list] = {}
    for path in args.files:
        with open(path, newline="") as fh:
            for r in csv.DictReader(fh):
                if r.get("feasible") == "true" and r.get("value"):
                    groups.setdefault((r["mode"], r["method"]), []).append((int(r["n"]), float(r["value"])))
    if not groups:
        raise ConfigError("no feasible rows to fit")
    for (mode, method), pts in sorted(groups.items()):
        pts = sorted({p for p in pts if p[0] >= args.min_qubits})
        if len(pts) < 2:
            print(f"{mode} {method}: need at least two points, have {len(pts)}")
            continue
        a, c = fit_growth(*zip(*pts))
        print(f"{mode} {method}: value ~ {a:.4f} * {c:.4f}^n over n={pts[0][0]}..{pts[-1][0]} (informational)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magicrom", description="Robustness of magic for |H> and |T> tensor powers.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, build=True):
        sp.add_argument("--mode", choices=("H", "T"), required=True)
        sp.add_argument("--qubits", "-n", type=int, required=True)
        if build:
            sp.add_argument("--catalog", help="graph catalog file (n=<int>; edges=[(a,b),...] per line)")
            sp.add_argument("--jobs", type=int, default=1, help="worker processes for vertex generation")
        sp.add_argument("--cache", help="vertex cache directory (default: $MAGICROM_CACHE or ~/.cache/magicrom)")
        sp.add_argument("--no-cache", action="store_true", help="neither read nor write the vertex cache")

    def output(sp):
        sp.add_argument("--out", help="directory for the decomposition file and results.csv")
        sp.add_argument("--csv", action="store_true", help="print a CSV row instead of the summary")
        sp.add_argument("--timings", action="store_true", help="fill the seconds column")

    sp = sub.add_parser("vertices", help="build and cache the projected vertex set")
    common(sp)
    sp.set_defaults(func=cmd_vertices)

    sp = sub.add_parser("exact", help="exact robustness over the full projected polytope")
    common(sp)
    output(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("approx", help="upper bound from the Bell level or level k of the hierarchy")
    common(sp)
    sp.add_argument("--level", default="bell", help="'bell' or an integer k")
    output(sp)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("verify", help="dense oracle checks for n <= 3")
    sp.add_argument("--quick", action="store_true", help="n <= 2 only")
    sp.add_argument("--cache", help="also re-derive every cached vertex set in this directory")
    sp.add_argument("--no-cache", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("fit", help="informational exponential fit of values in results CSV files")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--min-qubits", type=int, default=1)
    sp.set_defaults(func=cmd_fit)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CacheError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
