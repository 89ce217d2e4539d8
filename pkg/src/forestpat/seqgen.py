"""Exact tree and forest count sequences.

Every sequence is indexed from 0 with the conventions ``t_0 = 0`` (trees
are nonempty) and ``f_0 = 1`` (the empty forest). Forests are sets of
trees, so ``F = exp(T)`` on exponential generating functions; the
recurrence ``f_n = sum_k C(n-1, k-1) t_k f_{n-k}`` realises this exactly
and is inverted without division.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path
from typing import Sequence

from .enumeration import FORESTS, TREES, check_cap, enumerate_stats
from .errors import InsufficientDataError, IntegrityError, ParseError, UnsupportedFamilyError
from .patterns import CLASSICAL, CONSECUTIVE, PatternSet, classify

BRUTE = "brute-force"
CLOSED = "closed-form"
TRANSFORM = "transform"
INGESTED = "ingested"
DEPTH = "depth-recurrence"
PROVENANCES = (BRUTE, CLOSED, TRANSFORM, INGESTED, DEPTH)


@dataclass
class CountSequence:
    mode: str
    values: list
    kind: str = CLASSICAL
    descriptor: str = ""
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        self.values = [int(v) for v in self.values]
        if not self.provenance:
            self.provenance = [BRUTE] * len(self.values)
        elif isinstance(self.provenance, str):
            self.provenance = [self.provenance] * len(self.values)
        if len(self.provenance) != len(self.values):
            raise ValueError("one provenance tag per value required")
        self.validate()

    def validate(self) -> None:
        if self.mode not in (TREES, FORESTS):
            raise ValueError(f"unknown mode {self.mode!r}")
        vals = self.values
        if any(v < 0 for v in vals):
            raise IntegrityError("count sequences are nonnegative")
        head = (0, 1) if self.mode == TREES else (1, 1)
        for i, want in enumerate(head[:len(vals)]):
            if vals[i] != want:
                raise IntegrityError(f"{self.mode} sequence must start {head}, got value[{i}]={vals[i]}")
        for n, v in enumerate(vals):
            if n >= 2 and v > cayley(n, self.mode):
                raise IntegrityError(f"value[{n}]={v} exceeds the Cayley total")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def truncate(self, n_max: int) -> "CountSequence":
        return CountSequence(self.mode, self.values[:n_max + 1], self.kind, self.descriptor,
                             self.provenance[:n_max + 1])


def cayley(n: int, mode: str) -> int:
    """Number of rooted labeled trees (n^{n-1}) or forests ((n+1)^{n-1}) on [n]."""
    if n == 0:
        return 0 if mode == TREES else 1
    return n ** (n - 1) if mode == TREES else (n + 1) ** (n - 1)


class Pascal:
    """Incrementally grown table of binomial coefficients."""

    def __init__(self):
        self.rows = [[1]]

    def row(self, n: int) -> list:
        while len(self.rows) <= n:
            prev = self.rows[-1]
            self.rows.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
        return self.rows[n]


_PASCAL = Pascal()


def exp_values(t: Sequence[int]) -> list:
    """Forest counts from tree counts (t_0 must be 0)."""
    if t and t[0] != 0:
        raise ParseError("tree sequence must have t_0 = 0")
    f = [1]
    for n in range(1, len(t)):
        row = _PASCAL.row(n - 1)
        f.append(sum(row[k - 1] * t[k] * f[n - k] for k in range(1, n + 1)))
    return f[:len(t)] if t else []


def log_values(f: Sequence[int]) -> list:
    if f and f[0] != 1:
        raise ParseError("forest sequence must have f_0 = 1")
    t = [0] * len(f)
    for n in range(1, len(f)):
        row = _PASCAL.row(n - 1)
        t[n] = f[n] - sum(row[k - 1] * t[k] * f[n - k] for k in range(1, n))
    return t


def exp_transform(t: CountSequence) -> CountSequence:
    if t.mode != TREES:
        raise ParseError("exp_transform expects a tree sequence")
    return CountSequence(FORESTS, exp_values(t.values), t.kind, t.descriptor, TRANSFORM)


def log_transform(f: CountSequence) -> CountSequence:
    if f.mode != FORESTS:
        raise ParseError("log_transform expects a forest sequence")
    return CountSequence(TREES, log_values(f.values), f.kind, f.descriptor, TRANSFORM)


def count_bruteforce(s: PatternSet, mode: str, n_max: int, *, cap: int | None = None,
                     workers: int = 1) -> CountSequence:
    check_cap(n_max, mode, cap)  # fail before spending time on the smaller n
    vals = [enumerate_stats(n, s, mode, cap=cap, workers=workers).total for n in range(n_max + 1)]
    return CountSequence(mode, vals, s.kind, s.describe(), BRUTE)


# ---------------------------------------------------------------- families

def _ps(text: str, kind: str = CLASSICAL) -> PatternSet:
    return PatternSet.parse(text, kind)


def recognize_family(s: PatternSet) -> str | None:
    """Name of the closed-form family containing s or its complement, else None."""
    classical = s.kind == CLASSICAL
    for cand in (s, s.complement()):
        if len(cand) == 0:
            return "cayley"
        # 21 makes every pattern not starting with 1 redundant (each contains a descent)
        if "21" in cand and not cand.has_one_start:
            return "increasing"
        if not classical:
            continue
        if cand.same_patterns(_ps("132,231,321")):
            return "root-free-increasing"
        if cand.same_patterns(_ps("213,231,312,321")):
            return "tree-plus-forest"
        if cand.same_patterns(_ps("123,21")):
            return "bell"
    return None


def _rec_tree_plus_forest(n_max: int) -> tuple[list, list]:
    # t_{k+1} = t_k + f_k, extending f by one exp-transform step each time
    t = [0]
    f = [1]
    for k in range(n_max):
        t.append(t[k] + f[k])
        n = k + 1
        row = _PASCAL.row(n - 1)
        f.append(sum(row[j - 1] * t[j] * f[n - j] for j in range(1, n + 1)))
    return t, f


def closed_form_family(s: PatternSet, n_max: int) -> tuple[CountSequence, CountSequence]:
    """Exact (t, f) for recognized families; raises UnsupportedFamilyError otherwise."""
    fam = recognize_family(s)
    N = range(n_max + 1)
    if fam == "cayley":
        t = [cayley(n, TREES) for n in N]
        f = [cayley(n, FORESTS) for n in N]
    elif fam == "increasing":
        t = [0] + [factorial(n - 1) for n in range(1, n_max + 1)]
        f = [factorial(n) for n in N]
    elif fam == "root-free-increasing":
        t = [0] + [factorial(n) for n in range(1, n_max + 1)]
        f = exp_values(t)
    elif fam == "tree-plus-forest":
        t, f = _rec_tree_plus_forest(n_max)
    elif fam == "bell":
        t = [0] + [1] * n_max
        f = exp_values(t)
    else:
        raise UnsupportedFamilyError(f"no closed form known for {s.describe()} ({s.kind})")
    d = s.describe()
    return (CountSequence(TREES, t, s.kind, d, CLOSED),
            CountSequence(FORESTS, f, s.kind, d, CLOSED))


def depth_bounded(m: int, n_max: int) -> tuple[CountSequence, CountSequence]:
    """Trees and forests of depth at most m, via T_1 = x, F_m = exp(T_m), T_{m+1} = x F_m."""
    if m < 1:
        raise ValueError("depth bound must be at least 1")
    t = [0, 1] + [0] * (n_max - 1) if n_max >= 1 else [0]
    f = exp_values(t)
    for _ in range(m - 1):
        t = [0] + [n * f[n - 1] for n in range(1, n_max + 1)]
        f = exp_values(t)
    d = f"depth<={m}"
    return (CountSequence(TREES, t[:n_max + 1], descriptor=d, provenance=DEPTH),
            CountSequence(FORESTS, f[:n_max + 1], descriptor=d, provenance=DEPTH))


# ---------------------------------------------------------------- b-files

_LINE = re.compile(r"^\s*(-?\d+)\s+(-?\d+)\s*$")


def ingest_bfile(text: str, mode: str, kind: str = CLASSICAL, descriptor: str = "") -> CountSequence:
    """Parse "index value" lines; '#' lines are comments. Index 0 is filled if absent."""
    idx: list[int] = []
    vals: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected '<index> <value>', got {line!r}")
        i, v = int(m.group(1)), int(m.group(2))
        if v < 0:
            raise ParseError(f"line {lineno}: negative value {v}")
        if not idx:
            if i not in (0, 1):
                raise ParseError(f"line {lineno}: indices must start at 0 or 1, got {i}")
        elif i != idx[-1] + 1:
            raise ParseError(f"line {lineno}: index {i} does not follow {idx[-1]}")
        idx.append(i)
        vals.append(v)
    if not idx:
        raise ParseError("b-file contains no data lines")
    if idx[0] == 1:
        vals.insert(0, 0 if mode == TREES else 1)
    try:
        return CountSequence(mode, vals, kind, descriptor, INGESTED)
    except IntegrityError as exc:
        raise ParseError(f"b-file data invalid: {exc}") from exc


def read_bfile(path, mode: str, kind: str = CLASSICAL, descriptor: str = "") -> CountSequence:
    return ingest_bfile(Path(path).read_text(), mode, kind, descriptor)


def _runs(tags: Sequence[str]) -> str:
    parts = []
    start = 0
    for i in range(1, len(tags) + 1):
        if i == len(tags) or tags[i] != tags[start]:
            parts.append(f"{tags[start]}:{start}-{i - 1}")
            start = i
    return ",".join(parts)


def format_bfile(seq: CountSequence, header: bool = True) -> str:
    lines = []
    if header:
        lines += [
            "# forestpat count sequence",
            f"# set: {seq.descriptor or 'unknown'}",
            f"# kind: {seq.kind}",
            f"# mode: {seq.mode}",
            f"# provenance: {_runs(seq.provenance)}",
        ]
    lines += [f"{i} {v}" for i, v in enumerate(seq.values)]
    return "\n".join(lines) + "\n"


def parse_cache(text: str) -> CountSequence:
    meta = {}
    for line in text.splitlines():
        if line.startswith("# ") and ":" in line:
            key, _, val = line[2:].partition(":")
            meta[key.strip()] = val.strip()
    for key in ("mode", "kind", "provenance"):
        if key not in meta:
            raise ParseError(f"cache file lacks '{key}' header")
    seq = ingest_bfile(text, meta["mode"], meta["kind"], meta.get("set", ""))
    tags: list[str] = []
    for part in meta["provenance"].split(","):
        tag, _, rng = part.rpartition(":")
        a, _, b = rng.partition("-")
        tags += [tag] * (int(b) - int(a) + 1)
    if len(tags) != len(seq):
        raise ParseError("cache provenance does not cover the data")
    seq.provenance = tags
    return seq


def cache_path(cache_dir, s: PatternSet, mode: str) -> Path:
    name = s.describe().replace(",", "_").replace("[", "").replace("]", "")
    return Path(cache_dir) / f"{s.kind}-{mode}-{name}.txt"


def write_cache(cache_dir, s: PatternSet, seq: CountSequence) -> Path:
    path = cache_path(cache_dir, s, seq.mode)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_bfile(seq))
    return path


def read_cache(cache_dir, s: PatternSet, mode: str) -> CountSequence:
    path = cache_path(cache_dir, s, mode)
    if not path.exists():
        raise FileNotFoundError(f"no cached {mode} sequence for {s.describe()} at {path}")
    return parse_cache(path.read_text())


# ---------------------------------------------------------------- sandwich

@dataclass
class SandwichReport:
    # rows of (k, t_{k+1} >= f_k, t_k <= k f_{k-1}); None where data is missing
    rows: list
    first_lower_violation: int | None
    first_upper_violation: int | None
    integrity_error: bool

    @property
    def ok(self) -> bool:
        return self.first_lower_violation is None and self.first_upper_violation is None


def check_sandwich(t: Sequence[int], f: Sequence[int], s: PatternSet | None = None) -> SandwichReport:
    """Evaluate f_k <= t_{k+1} and t_k <= k f_{k-1} wherever both sides are known."""
    t = list(t.values if isinstance(t, CountSequence) else t)
    f = list(f.values if isinstance(f, CountSequence) else f)
    rows = []
    first_lo = first_hi = None
    for k in range(max(len(t), len(f))):
        lo = t[k + 1] >= f[k] if k + 1 < len(t) and k < len(f) else None
        hi = t[k] <= k * f[k - 1] if k >= 1 and k < len(t) and k - 1 < len(f) else None
        if lo is False and first_lo is None:
            first_lo = k
        if hi is False and first_hi is None:
            first_hi = k
        rows.append((k, lo, hi))
    integrity = first_lo is not None and s is not None and s.is_uncovered
    return SandwichReport(rows, first_lo, first_hi, integrity)


def require(seq: Sequence[int], n: int, what: str) -> None:
    if len(seq) <= n:
        raise InsufficientDataError(f"{what} needs index {n}, have up to {len(seq) - 1}")


__all__ = [
    "CountSequence", "cayley", "exp_transform", "log_transform", "exp_values", "log_values",
    "count_bruteforce", "closed_form_family", "recognize_family", "depth_bounded", "classify",
    "ingest_bfile", "read_bfile", "format_bfile", "parse_cache", "write_cache", "read_cache",
    "check_sandwich", "SandwichReport", "CONSECUTIVE",
]
