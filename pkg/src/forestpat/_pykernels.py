"""Pure-Python enumeration and sampling kernels.

Reference twin of ``_kernels.pyx``; the two must agree result for result.
Vertices receive parents in increasing index order, candidates 0..n in
increasing order, so leaves come out in lexicographic parent-array order.

After ``parent[j] = p`` every new instance must cross the edge j -> p, so
only label sequences of the form (upward chain from p) + (downward path
from j) are tested, and only for matches that start above j and end at or
below it.
"""
from __future__ import annotations

from typing import Iterator, Sequence


def compile_patterns(patterns: Sequence[Sequence[int]]):
    """Per pattern: (k, lo, hi) where lo[m]/hi[m] index the earlier entry with
    the nearest smaller/larger value, or -1."""
    out = []
    for pat in patterns:
        k = len(pat)
        lo = [-1] * k
        hi = [-1] * k
        for m in range(k):
            best_lo = best_hi = -1
            for l in range(m):
                if pat[l] < pat[m] and (best_lo < 0 or pat[l] > pat[best_lo]):
                    best_lo = l
                if pat[l] > pat[m] and (best_hi < 0 or pat[l] < pat[best_hi]):
                    best_hi = l
            lo[m] = best_lo
            hi[m] = best_hi
        out.append((k, lo, hi))
    return out


def _match(seq, L, u, k, lo, hi, m, start, pos):
    if m == k:
        return True
    end = L - (k - m) + 1
    if m == 0 and end > u:
        end = u
    if m == k - 1 and start < u:
        start = u
    lm = lo[m]
    hm = hi[m]
    for i in range(start, end):
        val = seq[i]
        if lm >= 0 and seq[pos[lm]] > val:
            continue
        if hm >= 0 and seq[pos[hm]] < val:
            continue
        pos[m] = i
        if _match(seq, L, u, k, lo, hi, m + 1, i + 1, pos):
            return True
    return False


def span_contains(seq, L, u, compiled, consecutive) -> bool:
    """Is there an instance in seq[:L] starting before u and ending at or after u?"""
    for k, lo, hi in compiled:
        if k > L:
            continue
        if consecutive:
            s0 = max(0, u - k + 1)
            s1 = min(u - 1, L - k)
            for s in range(s0, s1 + 1):
                ok = True
                for m in range(1, k):
                    val = seq[s + m]
                    if lo[m] >= 0 and seq[s + lo[m]] > val:
                        ok = False
                        break
                    if hi[m] >= 0 and seq[s + hi[m]] < val:
                        ok = False
                        break
                if ok:
                    return True
        else:
            if _match(seq, L, u, k, lo, hi, 0, 0, [0] * k):
                return True
    return False


class _Search:
    def __init__(self, n, patterns, consecutive, trees_only, prefix, max_depth, desc_rule):
        self.n = n
        self.compiled = compile_patterns(patterns)
        self.consecutive = bool(consecutive)
        self.trees_only = bool(trees_only)
        self.prefix = list(prefix)
        self.max_depth = max_depth
        self.desc_rule = desc_rule
        self.parent = [0] * (n + 1)
        self.children = [[] for _ in range(n + 1)]
        self.nroots = 0
        self.seq = [0] * (n + 1)

    def _down_ok(self, v, L, u) -> bool:
        seq = self.seq
        seq[L] = v
        L += 1
        if self.max_depth and L > self.max_depth:
            return False
        ch = self.children[v]
        if not ch:
            return not span_contains(seq, L, u, self.compiled, self.consecutive)
        for c in ch:
            if not self._down_ok(c, L, u):
                return False
        return True

    def _attach_ok(self, j, p) -> bool:
        parent = self.parent
        up = []
        v = p
        while True:
            if v == j:
                return False
            up.append(v)
            if v > j:
                break
            v = parent[v]
            if v == 0:
                break
        u = len(up)
        seq = self.seq
        for i in range(u):
            seq[i] = up[u - 1 - i]
        return self._down_ok(j, u, u)

    def _leaf_ok(self) -> bool:
        if self.trees_only and self.nroots != 1:
            return False
        if self.max_depth and self.n > 0:
            if _depths(self.parent, self.n)[1] > self.max_depth:
                return False
        if self.desc_rule >= 0 and not _desc_rule_ok(self.parent, self.n, self.desc_rule):
            return False
        return True

    def leaves(self, j=1) -> Iterator[list]:
        n = self.n
        if j > n:
            if self._leaf_ok():
                yield self.parent
            return
        if j <= len(self.prefix):
            cands = (self.prefix[j - 1],)
        else:
            cands = range(n + 1)
        parent = self.parent
        for p in cands:
            if p == j:
                continue
            if p == 0:
                if self.trees_only and self.nroots >= 1:
                    continue
                parent[j] = 0
                self.nroots += 1
                yield from self.leaves(j + 1)
                self.nroots -= 1
            else:
                if not self._attach_ok(j, p):
                    continue
                parent[j] = p
                self.children[p].append(j)
                yield from self.leaves(j + 1)
                self.children[p].pop()
            parent[j] = 0


def _depths(parent, n):
    depth = [0] * (n + 1)
    best = 0
    for v in range(1, n + 1):
        d = 0
        u = v
        while u != 0:
            d += 1
            u = parent[u]
        depth[v] = d
        best = max(best, d)
    return depth, best


def _desc_rule_ok(parent, n, threshold) -> bool:
    size = [1] * (n + 1)
    low = list(range(n + 1))
    for v in range(1, n + 1):
        u = parent[v]
        while u != 0:
            size[u] += 1
            if v < low[u]:
                low[u] = v
            u = parent[u]
    for v in range(1, n + 1):
        if size[v] - 1 > threshold and low[v] != v:
            return False
    return True


def leaf_stats(parent, n):
    """Root label of every vertex (index 0 unused)."""
    root = [0] * (n + 1)
    for v in range(1, n + 1):
        u = v
        while parent[u] != 0:
            u = parent[u]
        root[v] = u
    return root


def iter_forests(n, patterns, consecutive=False, trees_only=False, prefix=(), max_depth=0, desc_rule=-1):
    """Yield avoiding parent arrays as tuples (index 0 unused dropped)."""
    search = _Search(n, patterns, consecutive, trees_only, prefix, max_depth, desc_rule)
    for par in search.leaves():
        yield tuple(par[1:])


def count_forests(n, patterns, consecutive=False, trees_only=False, prefix=(),
                  max_depth=0, desc_rule=-1, want_stats=False):
    """Return (total, comp_hist, root_hist, size_sum, depth_hist).

    comp_hist[c]  forests with c components
    root_hist[a]  occurrences of label a as a root
    size_sum[k]   total number of size-k components over all forests
    depth_hist[d] forests of depth d
    Histograms are zero lists unless want_stats.
    """
    search = _Search(n, patterns, consecutive, trees_only, prefix, max_depth, desc_rule)
    total = 0
    comp = [0] * (n + 1)
    roots = [0] * (n + 1)
    sizes = [0] * (n + 1)
    depths = [0] * (n + 1)
    for par in search.leaves():
        total += 1
        if want_stats:
            root = leaf_stats(par, n)
            csize = [0] * (n + 1)
            for v in range(1, n + 1):
                csize[root[v]] += 1
            c = 0
            for r in range(1, n + 1):
                if par[r] == 0:
                    c += 1
                    roots[r] += 1
                    sizes[csize[r]] += 1
            comp[c] += 1
            depths[_depths(par, n)[1]] += 1
    return total, comp, roots, sizes, depths


def decode_prufer(seq, n):
    """Forest on 1..n from a Prufer sequence of length n-1 over 0..n (tree on 0..n rooted at 0)."""
    N = n + 1
    if n == 0:
        return []
    if n == 1:
        return [0, 0]
    degree = [1] * N
    for x in seq:
        degree[x] += 1
    adj = [[] for _ in range(N)]
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for x in seq:
        adj[leaf].append(x)
        adj[x].append(leaf)
        degree[x] -= 1
        if x < ptr and degree[x] == 1:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    # last edge joins leaf and N-1
    adj[leaf].append(N - 1)
    adj[N - 1].append(leaf)
    parent = [0] * N
    seen = [False] * N
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                stack.append(w)
    return parent


def parent_avoids(parent, n, compiled, consecutive) -> bool:
    seq = [0] * (n + 1)
    for v in range(1, n + 1):
        L = 0
        u = v
        while u != 0:
            seq[L] = u
            L += 1
            u = parent[u]
        if L < 2:
            continue
        seq[:L] = seq[:L][::-1]
        if span_contains(seq, L, L - 1, compiled, consecutive):
            return False
    return True


def sample_batch(n, patterns, consecutive, prufer_rows):
    """Decode each row and test avoidance. Returns list of parent tuples (None if rejected)."""
    compiled = compile_patterns(patterns)
    out = []
    for row in prufer_rows:
        par = decode_prufer([int(x) for x in row], n)
        if parent_avoids(par, n, compiled, consecutive):
            out.append(tuple(par[1:]))
        else:
            out.append(None)
    return out
