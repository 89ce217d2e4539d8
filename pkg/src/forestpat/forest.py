"""Rooted labeled forests as parent arrays, and definitional pattern tests.

The containment routines here are deliberately the plain definitions
(walk every root-to-leaf label sequence and look for an order-isomorphic
subsequence or window). The enumeration kernels use a faster incremental
test; these functions are the reference they are checked against.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .patterns import CLASSICAL, CONSECUTIVE, Pattern, PatternSet


@dataclass(frozen=True)
class LabeledForest:
    """Forest on vertices 1..n; ``parent[v-1]`` is the parent of v, 0 for roots."""

    parent: tuple[int, ...]

    def __post_init__(self):
        par = tuple(int(p) for p in self.parent)
        object.__setattr__(self, "parent", par)
        n = len(par)
        for v, p in enumerate(par, start=1):
            if not 0 <= p <= n:
                raise ValueError(f"parent of {v} out of range: {p}")
            if p == v:
                raise ValueError(f"vertex {v} is its own parent")
        # acyclicity: every chain must reach 0 within n steps
        state = [0] * (n + 1)  # 0 unseen, 1 on stack, 2 done
        for v in range(1, n + 1):
            path = []
            u = v
            while u != 0 and state[u] == 0:
                state[u] = 1
                path.append(u)
                u = par[u - 1]
            if u != 0 and state[u] == 1:
                raise ValueError(f"parent array has a cycle through {u}")
            for w in path:
                state[w] = 2

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]]) -> "LabeledForest":
        """Build from (parent, child) pairs; unlisted vertices are roots."""
        par = [0] * n
        for p, c in edges:
            par[c - 1] = p
        return cls(tuple(par))

    @property
    def n(self) -> int:
        return len(self.parent)

    def roots(self) -> list[int]:
        return [v for v, p in enumerate(self.parent, start=1) if p == 0]

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in range(self.n + 1)}
        for v, p in enumerate(self.parent, start=1):
            ch[p].append(v)
        return ch

    def is_tree(self) -> bool:
        return len(self.roots()) == 1

    def root_to_leaf_paths(self) -> Iterator[tuple[int, ...]]:
        ch = self.children()
        stack = [(r, (r,)) for r in reversed(ch[0])]
        while stack:
            v, path = stack.pop()
            if not ch[v]:
                yield path
            for c in reversed(ch[v]):
                stack.append((c, path + (c,)))

    def depth(self) -> int:
        return max((len(p) for p in self.root_to_leaf_paths()), default=0)

    def complement(self) -> "LabeledForest":
        n = self.n
        par = [0] * n
        for v, p in enumerate(self.parent, start=1):
            par[n - v] = 0 if p == 0 else n + 1 - p
        return LabeledForest(tuple(par))


def forest_complement(f: LabeledForest) -> LabeledForest:
    return f.complement()


def _standardize(vals: Sequence[int]) -> tuple[int, ...]:
    order = sorted(range(len(vals)), key=vals.__getitem__)
    ranks = [0] * len(vals)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return tuple(ranks)


def sequence_contains(seq: Sequence[int], p: Pattern, kind: str = CLASSICAL) -> bool:
    k = len(p)
    if kind == CONSECUTIVE:
        return any(_standardize(seq[i:i + k]) == p.values for i in range(len(seq) - k + 1))
    return any(_standardize(sub) == p.values for sub in combinations(seq, k))


def contains(f: LabeledForest, p: Pattern, kind: str = CLASSICAL) -> bool:
    return any(sequence_contains(path, p, kind) for path in f.root_to_leaf_paths())


def avoids(f: LabeledForest, s: PatternSet) -> bool:
    return not any(contains(f, p, s.kind) for p in s.patterns)


@dataclass(frozen=True)
class ForestProfile:
    components: int
    sizes: tuple[int, ...]
    roots: tuple[int, ...]
    depth: int


def forest_profile(f: LabeledForest) -> ForestProfile:
    """Component count, sizes and roots (both ordered by root label) and depth."""
    root_of = {}
    for v in range(1, f.n + 1):
        u = v
        while f.parent[u - 1] != 0:
            u = f.parent[u - 1]
        root_of[v] = u
    roots = tuple(sorted(f.roots()))
    sizes = tuple(sum(1 for v in root_of if root_of[v] == r) for r in roots)
    return ForestProfile(len(roots), sizes, roots, f.depth())


def sample_forest_12() -> LabeledForest:
    """Twelve-vertex forest with roots 5, 8, 12: contains 213, avoids 123, consecutively contains 312."""
    edges = [(5, 3), (3, 1), (1, 10), (3, 2), (5, 4), (5, 7), (12, 6), (6, 11), (12, 9)]
    return LabeledForest.from_edges(12, edges)
