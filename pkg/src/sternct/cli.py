"""Command-line front end.

    sternct nu --n 3
    sternct omega --n 300 --method gf --json
    sternct omega --n 10000 --method gf --out w10000.txt --threads 4
    sternct ualpha --alpha 2 --n 2
    sternct verify --max-n 20 --suites oracle,series
    sternct cache warm --n 10000

Exit codes: 0 success, 1 verification/computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence

__all__ = ["main", "RunReport", "UsageError", "DEFINITION_CUTOFF", "default_method"]

log = logging.getLogger("sternct")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# rows of 2^27 terms and beyond do not fit a desk machine's memory
DEFINITION_CUTOFF = 26
TRANSFER_ADVISORY = 2000


class UsageError(Exception):
    """Bad arguments or a method bound was violated (exit 2)."""


@dataclass
class RunReport:
    target: str
    n: int
    method: str
    digits: int
    value: str
    elapsed_ms: float
    cache_hits: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    def human(self) -> str:
        return (f"{self.target}({self.n}) = {self.value}\n"
                f"  method {self.method}, {self.digits} digits, "
                f"{self.elapsed_ms:.1f} ms, cache hits {self.cache_hits}")


def default_method(n: int) -> str:
    if n <= 20:
        return "definition"
    if n <= 300:
        return "transfer"
    return "gf"


def _check_definition(n: int, force: bool) -> None:
    if n > DEFINITION_CUTOFF and not force:
        raise UsageError(f"definition method is limited to n <= {DEFINITION_CUTOFF} "
                         f"(pass --force to override)")


def _cache(args):
    from .cache import CacheDir, default_cache_dir
    return CacheDir(default_cache_dir(args.cache_dir), enabled=not args.no_cache)


def _emit(args, report: RunReport) -> None:
    if args.out:
        Path(args.out).write_text(report.value + "\n")
    if args.json:
        print(report.to_json())
    elif args.verbose:
        print(report.human())
    elif not args.out:
        print(report.value)


# -- commands ------------------------------------------------------------------

def cmd_nu(args) -> int:
    from .nu import nu_fast
    from .stern import nu_def

    n = args.n
    if n < 0:
        raise UsageError("n must be nonnegative")
    method = args.method or "gf"
    t0 = time.perf_counter()
    if method == "gf":
        value = nu_fast(n)
    else:
        _check_definition(n, args.force)
        value = nu_def(n)
    s = str(value)
    _emit(args, RunReport("nu", n, method, len(s), s, (time.perf_counter() - t0) * 1e3))
    return EXIT_OK


def cmd_omega(args) -> int:
    from .stern import omega_def

    n = args.n
    if n < 0:
        raise UsageError("n must be nonnegative")
    method = args.method or default_method(n)
    hits = 0
    t0 = time.perf_counter()
    if method == "definition":
        _check_definition(n, args.force)
        value = omega_def(n)
    elif method == "transfer":
        from .transfer import omega_transfer
        if n < 2:
            raise UsageError("transfer method needs n >= 2")
        if n > TRANSFER_ADVISORY:
            log.warning("transfer at n=%d is slow; gf is the intended method", n)
        value = omega_transfer(n, prune=args.prune, n_seed=args.n_seed)
    else:
        from .gf import _resolve_split, omega_gf
        if n < 2:
            raise UsageError("gf method needs n >= 2")
        try:
            m, seed = _resolve_split(n, args.n_seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        cache = _cache(args)
        kwargs = {}
        if args.source == "holonomic":
            kwargs = dict(rec_u=cache.rec_u(), rec_v=cache.rec_v())
        table = cache.table(seed, m)
        value = omega_gf(n, source=args.source, n_seed=seed, threads=args.threads,
                         backend=args.backend, table=table, **kwargs)
        hits = cache.hits
    s = str(value)
    _emit(args, RunReport("omega", n, method, len(s), s,
                          (time.perf_counter() - t0) * 1e3, hits))
    return EXIT_OK


def _parse_alpha(text: str) -> List[int]:
    try:
        alpha = [int(p) for p in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad --alpha {text!r}") from exc
    if not alpha or any(a < 0 for a in alpha) or not any(alpha):
        raise UsageError("alpha must be a nonempty list of nonnegative integers, not all zero")
    return alpha


def cmd_ualpha(args) -> int:
    from .stern import u_alpha_def

    alpha = _parse_alpha(args.alpha)
    if args.n < 0:
        raise UsageError("n must be nonnegative")
    _check_definition(args.n, args.force)
    t0 = time.perf_counter()
    value = u_alpha_def(alpha, args.n)
    s = str(value)
    _emit(args, RunReport("ualpha", args.n, "definition", len(s), s,
                          (time.perf_counter() - t0) * 1e3))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suites

    names = [s.strip() for s in args.suites.split(",") if s.strip()]
    for s in names:
        if s != "all" and s not in SUITES:
            raise UsageError(f"unknown suite {s!r} (choose from {', '.join(SUITES)}, all)")
    failed = None
    count = 0
    width = 28
    print(f"{'suite':<8} {'case':<{width}} result")
    for check in run_suites(names, args.max_n, args.order):
        count += 1
        status = "PASS" if check.ok else "FAIL"
        print(f"{check.suite:<8} {check.case:<{width}} {status}"
              + (f"  {check.detail}" if args.verbose or not check.ok else ""))
        if not check.ok and failed is None:
            failed = check
            if not args.keep_going:
                break
    if failed is not None:
        print(f"FAIL: {failed.suite} {failed.case}: {failed.detail}")
        return EXIT_FAIL
    print(f"PASS ({count} checks)")
    return EXIT_OK


def cmd_cache(args) -> int:
    from .cache import default_cache_dir

    root = default_cache_dir(args.cache_dir)
    if args.action == "path":
        print(root)
    elif args.action == "list":
        if root.exists():
            for p in sorted(root.iterdir()):
                print(f"{p.name}\t{p.stat().st_size}")
    elif args.action == "clear":
        if root.exists():
            shutil.rmtree(root)
    elif args.action == "warm":
        if args.n is None:
            raise UsageError("cache warm needs --n")
        from .gf import _resolve_split
        try:
            m, seed = _resolve_split(args.n, args.n_seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        cache = _cache(args)
        cache.rec_u()
        cache.rec_v()
        cache.numerator(seed)
        cache.table(seed, m)
        print(f"{root}: {cache.hits} hits, {cache.misses} built")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", help="human-readable report and logging")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (default $STERNCT_CACHE_DIR or ./.sternct-cache)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write cache files")
    common.add_argument("--threads", type=int, default=1, help="worker threads for the j-loop")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true", help="emit a JSON run report")
    output.add_argument("--out", metavar="FILE", help="write the decimal value to FILE")
    output.add_argument("--force", action="store_true", help="lift the definition-method cutoff")

    p = argparse.ArgumentParser(prog="sternct", description=__doc__.split("\n")[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("nu", parents=[common, output], help="nu(n)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--method", choices=["gf", "definition"])
    q.set_defaults(func=cmd_nu)

    q = sub.add_parser("omega", parents=[common, output], help="omega(n)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--method", choices=["definition", "transfer", "gf"],
                   help="default: definition n<=20, transfer n<=300, gf beyond")
    q.add_argument("--prune", action=argparse.BooleanOptionalAction, default=True,
                   help="drop transfer terms that cannot reach x^0 (default on)")
    q.add_argument("--n-seed", type=int, help="seed index n of the split N = m + n")
    q.add_argument("--source", choices=["holonomic", "direct", "hseries"], default="holonomic",
                   help="how gf obtains the constant terms of H")
    q.add_argument("--backend", choices=["compiled", "python"], help="kernel backend")
    q.set_defaults(func=cmd_omega)

    q = sub.add_parser("ualpha", parents=[common, output], help="u_alpha(n) by definition")
    q.add_argument("--alpha", required=True, help="exponents, e.g. 2 or 1,2")
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_ualpha)

    q = sub.add_parser("verify", parents=[common], help="run cross-validation suites")
    q.add_argument("--max-n", type=int, default=20)
    q.add_argument("--suites", default="all", help="comma list of oracle, cross, series, all")
    q.add_argument("--order", type=int, default=100, help="series order for the series suite")
    q.add_argument("--keep-going", action="store_true", help="do not stop at the first failure")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("cache", parents=[common], help="inspect or fill the cache directory")
    q.add_argument("action", choices=["path", "list", "clear", "warm"])
    q.add_argument("--n", type=int, help="target N for warm")
    q.add_argument("--n-seed", type=int)
    q.set_defaults(func=cmd_cache)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # omega(10000) has 6591 digits
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "threads", 1) < 1:
        print("sternct: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sternct: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, ValueError) as exc:
        print(f"sternct: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
