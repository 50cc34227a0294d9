"""Plain-text cache files for the expensive one-time artifacts.

Every file starts with ``STERNCT-CACHE 1 <kind> <n_seed> <m>``.  Kinds:

``table``      records ``i j a_ij`` (nonzero entries only); ``# support lo hi``
``numerator``  records ``i j c`` for the coefficient of ``t^i x^j`` in ``L``
``rec-u``      records ``r / ke je / p/q`` (``c_r`` has ``p/q k^ke j^je``)
``rec-v``      same as ``rec-u``

Lines starting with ``#`` are metadata.  Reading back is bit-exact.
"""

from __future__ import annotations

import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from .gf import CoeffTable, build_coeff_table, solve_component
from .holonomic import RecurrenceOp, derive_rec_u, derive_rec_v
from .laurent import LaurentPoly, TPoly

__all__ = [
    "CacheError",
    "FORMAT_VERSION",
    "dump_table",
    "load_table",
    "dump_numerator",
    "load_numerator",
    "dump_recurrence",
    "load_recurrence",
    "CacheDir",
    "default_cache_dir",
]

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAGIC = "STERNCT-CACHE"
PathLike = Union[str, os.PathLike]


class CacheError(ValueError):
    """Malformed, mismatched or unsupported cache file."""


def _header(kind: str, n_seed: int, m: int) -> str:
    return f"{MAGIC} {FORMAT_VERSION} {kind} {n_seed} {m}\n"


def _parse_header(line: str, kind: str) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 5 or parts[0] != MAGIC:
        raise CacheError(f"not a cache file: {line.strip()!r}")
    if parts[1] != str(FORMAT_VERSION):
        raise CacheError(f"unsupported cache version {parts[1]}")
    if parts[2] != kind:
        raise CacheError(f"expected kind {kind!r}, found {parts[2]!r}")
    try:
        return int(parts[3]), int(parts[4])
    except ValueError as exc:
        raise CacheError(f"bad header: {line.strip()!r}") from exc


def _write_atomic(path: PathLike, lines: Iterable[str]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.writelines(lines)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: PathLike, kind: str):
    with open(path) as fh:
        first = fh.readline()
        if not first:
            raise CacheError(f"{path}: empty file")
        n_seed, m = _parse_header(first, kind)
        meta, body = [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            (meta if line.startswith("#") else body).append((lineno, line))
    return n_seed, m, meta, body


def _ints(lineno: int, line: str, count: int) -> List[int]:
    parts = line.split()
    if len(parts) != count:
        raise CacheError(f"line {lineno}: expected {count} fields")
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise CacheError(f"line {lineno}: {exc}") from exc


# -- coefficient table --------------------------------------------------------

def dump_table(table: CoeffTable, path: PathLike) -> None:
    def lines():
        yield _header("table", table.n_seed, table.m)
        yield f"# support {table.support[0]} {table.support[1]}\n"
        yield f"# rows {' '.join(str(len(r)) for r in table.rows)}\n"
        for i, j, a in table.entries():
            yield f"{i} {j} {a}\n"
    _write_atomic(path, lines())


def load_table(path: PathLike) -> CoeffTable:
    n_seed, m, meta, body = _read(path, "table")
    support = None
    lengths = None
    for lineno, line in meta:
        parts = line[1:].split()
        if parts and parts[0] == "support":
            support = tuple(_ints(lineno, " ".join(parts[1:]), 2))
        elif parts and parts[0] == "rows":
            lengths = [int(p) for p in parts[1:]]
    if support is None or lengths is None:
        raise CacheError(f"{path}: missing support/rows metadata")
    rows = [[0] * n for n in lengths]
    for lineno, line in body:
        i, j, a = _ints(lineno, line, 3)
        if not (0 <= i < len(rows) and 0 <= -j < len(rows[i])):
            raise CacheError(f"line {lineno}: entry ({i}, {j}) outside the table")
        rows[i][-j] = a
    return CoeffTable(n_seed, m, rows, support)


# -- numerator L(x, t) --------------------------------------------------------

def dump_numerator(numerator: TPoly, n_seed: int, path: PathLike) -> None:
    def lines():
        yield _header("numerator", n_seed, 0)
        yield f"# t-degree {len(numerator.coeffs) - 1}\n"
        for i, p in enumerate(numerator.coeffs):
            for e, c in p.items():
                yield f"{i} {e} {c}\n"
    _write_atomic(path, lines())


def load_numerator(path: PathLike) -> Tuple[int, TPoly]:
    n_seed, _, meta, body = _read(path, "numerator")
    deg = None
    for lineno, line in meta:
        parts = line[1:].split()
        if parts[:1] == ["t-degree"]:
            deg = _ints(lineno, parts[1], 1)[0]
    if deg is None:
        raise CacheError(f"{path}: missing t-degree metadata")
    terms: List[Dict[int, int]] = [dict() for _ in range(deg + 1)]
    for lineno, line in body:
        i, e, c = _ints(lineno, line, 3)
        if not 0 <= i <= deg:
            raise CacheError(f"line {lineno}: t-power {i} out of range")
        terms[i][e] = c
    return n_seed, TPoly(tuple(LaurentPoly.from_dict(d) for d in terms))


# -- recurrences ----------------------------------------------------------------

def dump_recurrence(rec: RecurrenceOp, kind: str, path: PathLike) -> None:
    if kind not in ("rec-u", "rec-v"):
        raise ValueError(f"unknown recurrence kind {kind!r}")

    def lines():
        yield _header(kind, 0, 0)
        yield f"# order {rec.order}\n"
        for r, c in enumerate(rec.coeffs):
            for (ke, je), v in sorted(c.items()):
                yield f"{r} / {ke} {je} / {Fraction(v)}\n"
    _write_atomic(path, lines())


def load_recurrence(path: PathLike, kind: str) -> RecurrenceOp:
    _, _, meta, body = _read(path, kind)
    order = None
    for lineno, line in meta:
        parts = line[1:].split()
        if parts[:1] == ["order"]:
            order = _ints(lineno, parts[1], 1)[0]
    if order is None:
        raise CacheError(f"{path}: missing order metadata")
    coeffs: List[Dict[Tuple[int, int], int]] = [dict() for _ in range(order + 1)]
    for lineno, line in body:
        fields = [f.strip() for f in line.split("/", 2)]
        if len(fields) != 3:
            raise CacheError(f"line {lineno}: expected 'r / ke je / value'")
        (r,) = _ints(lineno, fields[0], 1)
        ke, je = _ints(lineno, fields[1], 2)
        try:
            v = Fraction(fields[2])
        except ValueError as exc:
            raise CacheError(f"line {lineno}: {exc}") from exc
        if not 0 <= r <= order:
            raise CacheError(f"line {lineno}: index {r} beyond order {order}")
        if v.denominator != 1:
            raise CacheError(f"line {lineno}: recurrence coefficients are stored as integers")
        coeffs[r][(ke, je)] = int(v)
    return RecurrenceOp(tuple(coeffs))


# -- directory manager ----------------------------------------------------------------

def default_cache_dir(flag: Optional[PathLike] = None) -> Path:
    """Flag, then ``STERNCT_CACHE_DIR``, then ``./.sternct-cache``."""
    if flag:
        return Path(flag)
    env = os.environ.get("STERNCT_CACHE_DIR")
    return Path(env) if env else Path(".sternct-cache")


class CacheDir:
    """Load-or-build access to cached artifacts; counts hits."""

    def __init__(self, root: PathLike, enabled: bool = True):
        self.root = Path(root)
        self.enabled = enabled
        self.hits = 0
        self.misses = 0

    def _get(self, name: str, load: Callable, build: Callable, dump: Callable):
        path = self.root / name
        if self.enabled and path.exists():
            try:
                value = load(path)
                self.hits += 1
                log.debug("cache hit %s", path)
                return value
            except (CacheError, OSError) as exc:
                log.warning("ignoring unreadable cache file %s: %s", path, exc)
        self.misses += 1
        value = build()
        if self.enabled:
            try:
                dump(value, path)
            except OSError as exc:
                log.warning("could not write cache file %s: %s", path, exc)
        return value

    def numerator(self, n_seed: int) -> TPoly:
        def load(path):
            n, num = load_numerator(path)
            if n != n_seed:
                raise CacheError("seed mismatch")
            return num
        return self._get(f"numerator-{n_seed}.txt", load,
                         lambda: solve_component(n_seed).numerator,
                         lambda v, p: dump_numerator(v, n_seed, p))

    def table(self, n_seed: int, m: int) -> CoeffTable:
        def load(path):
            t = load_table(path)
            if (t.n_seed, t.m) != (n_seed, m):
                raise CacheError("split mismatch")
            return t
        return self._get(f"table-{n_seed}-{m}.txt", load,
                         lambda: build_coeff_table(n_seed, m, self.numerator(n_seed)),
                         dump_table)

    def rec_u(self) -> RecurrenceOp:
        return self._get("rec-u.txt", lambda p: load_recurrence(p, "rec-u"), derive_rec_u,
                         lambda v, p: dump_recurrence(v, "rec-u", p))

    def rec_v(self) -> RecurrenceOp:
        return self._get("rec-v.txt", lambda p: load_recurrence(p, "rec-v"), derive_rec_v,
                         lambda v, p: dump_recurrence(v, "rec-v", p))
