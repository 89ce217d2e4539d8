"""Exhaustive enumeration of avoiding forests with incremental pruning.

Parent arrays are filled for vertices 1, 2, ..., n in turn, each trying
parents 0..n in increasing order; output is lexicographic in the parent
array. A branch is cut as soon as the newly attached edge closes a cycle or
completes a pattern instance along an ancestor chain. Shards fix the
parents of the first few vertices and combine by summation.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import kernels
from .errors import CapExceededError
from .forest import LabeledForest
from .patterns import CONSECUTIVE, PatternSet

DEFAULT_CAP = 10
FORESTS = "forests"
TREES = "trees"
MODES = (FORESTS, TREES)


def enumeration_cap() -> int:
    return int(os.environ.get("FORESTPAT_CAP", DEFAULT_CAP))


def check_cap(n: int, mode: str, cap: int | None) -> int:
    cap = enumeration_cap() if cap is None else cap
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the enumeration cap {cap}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    return cap


def enumerate_forests(n: int, s: PatternSet, mode: str = FORESTS, *, cap: int | None = None,
                      prefix: Sequence[int] = (), max_depth: int = 0) -> Iterator[LabeledForest]:
    """Lazily yield every forest (or tree) on [n] avoiding ``s``, each once."""
    check_cap(n, mode, cap)
    for par in kernels.iter_forests(n, s.tuples(), s.kind == CONSECUTIVE, mode == TREES,
                                    tuple(prefix), max_depth):
        yield LabeledForest(par)


@dataclass
class EnumerationStats:
    n: int
    total: int = 0
    components: list = field(default_factory=list)
    root_labels: list = field(default_factory=list)
    size_counts: list = field(default_factory=list)
    depths: list = field(default_factory=list)

    def merge(self, other: "EnumerationStats") -> "EnumerationStats":
        def add(a, b):
            return [x + y for x, y in zip(a, b)] if a else list(b)

        return EnumerationStats(self.n, self.total + other.total,
                                add(self.components, other.components),
                                add(self.root_labels, other.root_labels),
                                add(self.size_counts, other.size_counts),
                                add(self.depths, other.depths))


def _run(args) -> EnumerationStats:
    n, pats, consecutive, trees, prefix, max_depth, desc_rule, want = args
    tot, comp, roots, sizes, depths = kernels.count_forests(
        n, pats, consecutive, trees, prefix, max_depth, desc_rule, want)
    return EnumerationStats(n, tot, comp, roots, sizes, depths)


def shard_prefixes(n: int, depth: int) -> list[tuple[int, ...]]:
    """All parent choices for the first ``depth`` vertices (invalid ones prune to zero)."""
    out: list[tuple[int, ...]] = [()]
    for j in range(1, min(depth, n) + 1):
        out = [p + (q,) for p in out for q in range(n + 1) if q != j]
    return out


def enumerate_stats(n: int, s: PatternSet, mode: str = FORESTS, *, cap: int | None = None,
                    max_depth: int = 0, desc_rule: int = -1, want_stats: bool = False,
                    workers: int = 1, shard_depth: int = 1) -> EnumerationStats:
    """Count (and optionally profile) avoiding forests without materializing them."""
    check_cap(n, mode, cap)
    base = (s.tuples(), s.kind == CONSECUTIVE, mode == TREES)
    if workers <= 1 or n < 2:
        return _run((n, *base, (), max_depth, desc_rule, want_stats))
    jobs = [(n, *base, pre, max_depth, desc_rule, want_stats) for pre in shard_prefixes(n, shard_depth)]
    result = EnumerationStats(n)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves job order, so the reduction is deterministic
        for part in pool.map(_run, jobs):
            result = result.merge(part)
    return result


def count_avoiding(n: int, s: PatternSet, mode: str = FORESTS, **kw) -> int:
    return enumerate_stats(n, s, mode, **kw).total
