"""Slow, obviously-correct reference computations used only by the tests."""
from itertools import combinations, product, permutations


def all_parent_maps(n):
    """Every acyclic parent map on [n] (as tuples), by filtering all (n+1)^n maps."""
    for par in product(range(n + 1), repeat=n):
        ok = True
        for v in range(1, n + 1):
            u, steps = v, 0
            while u != 0 and steps <= n:
                u = par[u - 1]
                steps += 1
            if u != 0:
                ok = False
                break
        if ok:
            yield par


def _pattern_of(vals):
    s = sorted(vals)
    return tuple(s.index(x) + 1 for x in vals)


def root_paths(par):
    n = len(par)
    kids = {v: [] for v in range(n + 1)}
    for v, p in enumerate(par, start=1):
        kids[p].append(v)
    out = []

    def walk(v, path):
        path = path + [v]
        if not kids[v]:
            out.append(path)
        for c in kids[v]:
            walk(c, path)

    for r in kids[0]:
        walk(r, [])
    return out


def path_contains(path, pat, consecutive):
    k = len(pat)
    if consecutive:
        return any(_pattern_of(path[i:i + k]) == pat for i in range(len(path) - k + 1))
    return any(_pattern_of(c) == pat for c in combinations(path, k))


def avoiding(n, pats, consecutive=False, trees=False):
    pats = [tuple(p) for p in pats]
    for par in all_parent_maps(n):
        if trees and par.count(0) != 1:
            continue
        if not any(path_contains(path, p, consecutive) for path in root_paths(par) for p in pats):
            yield par


def stirling_first(n, k):
    """Unsigned Stirling numbers of the first kind by counting cycles of permutations."""
    count = 0
    for perm in permutations(range(n)):
        seen, cycles = [False] * n, 0
        for i in range(n):
            if not seen[i]:
                cycles += 1
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
        if cycles == k:
            count += 1
    return count


def set_partitions(n):
    """Number of set partitions of [n] by explicit restricted-growth strings."""
    if n == 0:
        return 1
    count = 0
    for rgs in product(range(n), repeat=n):
        if rgs[0] != 0:
            continue
        if all(rgs[i] <= max(rgs[:i]) + 1 for i in range(1, n)):
            count += 1
    return count
