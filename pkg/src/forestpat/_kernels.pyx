# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled counting and sampling kernels; mirror of ``_pykernels``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

cdef enum:
    MAXN = 24
    MAXP = 64
    MAXK = 24


cdef struct Ctx:
    int n
    int npat
    int klen[MAXP]
    int lo[MAXP][MAXK]
    int hi[MAXP][MAXK]
    int consecutive
    int trees_only
    int max_depth
    int desc_rule
    int want_stats
    int nprefix
    int prefix[MAXN + 1]
    int parent[MAXN + 1]
    int child_head[MAXN + 1]
    int sibling[MAXN + 1]
    int nroots
    int seq[MAXN + 2]
    int pos[MAXK]
    long long total
    long long comp_hist[MAXN + 1]
    long long root_hist[MAXN + 1]
    long long size_sum[MAXN + 1]
    long long depth_hist[MAXN + 1]


cdef int _setup(Ctx* c, int n, patterns, bint consecutive) except -1:
    cdef int q, m, l, k, best_lo, best_hi
    if n > MAXN:
        raise ValueError(f"kernel supports n <= {MAXN}")
    if len(patterns) > MAXP:
        raise ValueError(f"kernel supports at most {MAXP} patterns")
    memset(c, 0, sizeof(Ctx))
    c.n = n
    c.npat = len(patterns)
    c.consecutive = consecutive
    for q, pat in enumerate(patterns):
        k = len(pat)
        if k > MAXK:
            raise ValueError(f"kernel supports pattern length <= {MAXK}")
        c.klen[q] = k
        for m in range(k):
            best_lo = -1
            best_hi = -1
            for l in range(m):
                if pat[l] < pat[m] and (best_lo < 0 or pat[l] > pat[best_lo]):
                    best_lo = l
                if pat[l] > pat[m] and (best_hi < 0 or pat[l] < pat[best_hi]):
                    best_hi = l
            c.lo[q][m] = best_lo
            c.hi[q][m] = best_hi
    return 0


cdef bint _match(Ctx* c, int q, int L, int u, int m, int start) noexcept nogil:
    cdef int k = c.klen[q]
    cdef int end, i, val, lm, hm
    if m == k:
        return True
    end = L - (k - m) + 1
    if m == 0 and end > u:
        end = u
    if m == k - 1 and start < u:
        start = u
    lm = c.lo[q][m]
    hm = c.hi[q][m]
    for i in range(start, end):
        val = c.seq[i]
        if lm >= 0 and c.seq[c.pos[lm]] > val:
            continue
        if hm >= 0 and c.seq[c.pos[hm]] < val:
            continue
        c.pos[m] = i
        if _match(c, q, L, u, m + 1, i + 1):
            return True
    return False


cdef bint _span_contains(Ctx* c, int L, int u) noexcept nogil:
    cdef int q, k, s, s0, s1, m, val
    cdef bint ok
    for q in range(c.npat):
        k = c.klen[q]
        if k > L:
            continue
        if c.consecutive:
            s0 = u - k + 1
            if s0 < 0:
                s0 = 0
            s1 = L - k
            if s1 > u - 1:
                s1 = u - 1
            for s in range(s0, s1 + 1):
                ok = True
                for m in range(1, k):
                    val = c.seq[s + m]
                    if c.lo[q][m] >= 0 and c.seq[s + c.lo[q][m]] > val:
                        ok = False
                        break
                    if c.hi[q][m] >= 0 and c.seq[s + c.hi[q][m]] < val:
                        ok = False
                        break
                if ok:
                    return True
        else:
            if _match(c, q, L, u, 0, 0):
                return True
    return False


cdef bint _down_ok(Ctx* c, int v, int L, int u) noexcept nogil:
    cdef int ch
    c.seq[L] = v
    L += 1
    if c.max_depth and L > c.max_depth:
        return False
    ch = c.child_head[v]
    if ch == 0:
        return not _span_contains(c, L, u)
    while ch != 0:
        if not _down_ok(c, ch, L, u):
            return False
        ch = c.sibling[ch]
    return True


cdef bint _attach_ok(Ctx* c, int j, int p) noexcept nogil:
    cdef int up[MAXN + 1]
    cdef int u = 0, v = p, i
    while True:
        if v == j:
            return False
        up[u] = v
        u += 1
        if v > j:
            break
        v = c.parent[v]
        if v == 0:
            break
    for i in range(u):
        c.seq[i] = up[u - 1 - i]
    return _down_ok(c, j, u, u)


cdef void _leaf(Ctx* c) noexcept nogil:
    cdef int n = c.n
    cdef int v, u, d, best = 0, comps = 0
    cdef int root[MAXN + 1]
    cdef int size[MAXN + 1]
    cdef int low[MAXN + 1]
    cdef int csize[MAXN + 1]
    if c.trees_only and c.nroots != 1:
        return
    if c.max_depth or c.want_stats:
        for v in range(1, n + 1):
            d = 0
            u = v
            while u != 0:
                d += 1
                u = c.parent[u]
            if d > best:
                best = d
        if c.max_depth and best > c.max_depth:
            return
    if c.desc_rule >= 0:
        for v in range(n + 1):
            size[v] = 1
            low[v] = v
        for v in range(1, n + 1):
            u = c.parent[v]
            while u != 0:
                size[u] += 1
                if v < low[u]:
                    low[u] = v
                u = c.parent[u]
        for v in range(1, n + 1):
            if size[v] - 1 > c.desc_rule and low[v] != v:
                return
    c.total += 1
    if not c.want_stats:
        return
    for v in range(n + 1):
        csize[v] = 0
    for v in range(1, n + 1):
        u = v
        while c.parent[u] != 0:
            u = c.parent[u]
        root[v] = u
        csize[u] += 1
    for v in range(1, n + 1):
        if c.parent[v] == 0:
            comps += 1
            c.root_hist[v] += 1
            c.size_sum[csize[v]] += 1
    c.comp_hist[comps] += 1
    c.depth_hist[best] += 1


cdef void _dfs(Ctx* c, int j) noexcept nogil:
    cdef int p, p0, p1
    if j > c.n:
        _leaf(c)
        return
    if j <= c.nprefix:
        p0 = c.prefix[j]
        p1 = p0
    else:
        p0 = 0
        p1 = c.n
    for p in range(p0, p1 + 1):
        if p == j:
            continue
        if p == 0:
            if c.trees_only and c.nroots >= 1:
                continue
            c.parent[j] = 0
            c.nroots += 1
            _dfs(c, j + 1)
            c.nroots -= 1
        else:
            if not _attach_ok(c, j, p):
                continue
            c.parent[j] = p
            c.sibling[j] = c.child_head[p]
            c.child_head[p] = j
            _dfs(c, j + 1)
            c.child_head[p] = c.sibling[j]
            c.sibling[j] = 0
        c.parent[j] = 0


def count_forests(int n, patterns, bint consecutive=False, bint trees_only=False, prefix=(),
                  int max_depth=0, int desc_rule=-1, bint want_stats=False):
    """Return (total, comp_hist, root_hist, size_sum, depth_hist); see ``_pykernels``."""
    cdef Ctx* c = <Ctx*> malloc(sizeof(Ctx))
    cdef int i
    if c == NULL:
        raise MemoryError()
    try:
        return _count(c, n, patterns, consecutive, trees_only, prefix, max_depth, desc_rule, want_stats)
    finally:
        free(c)


cdef _count(Ctx* c, int n, patterns, bint consecutive, bint trees_only, prefix,
            int max_depth, int desc_rule, bint want_stats):
    cdef int i
    _setup(c, n, patterns, consecutive)
    if len(prefix) > n:
        raise ValueError("prefix longer than n")
    c.trees_only = trees_only
    c.max_depth = max_depth
    c.desc_rule = desc_rule
    c.want_stats = want_stats
    c.nprefix = len(prefix)
    for i in range(c.nprefix):
        if not 0 <= prefix[i] <= n:
            raise ValueError("prefix parent out of range")
        c.prefix[i + 1] = prefix[i]
    with nogil:
        _dfs(c, 1)
    return (c.total,
            [c.comp_hist[i] for i in range(n + 1)],
            [c.root_hist[i] for i in range(n + 1)],
            [c.size_sum[i] for i in range(n + 1)],
            [c.depth_hist[i] for i in range(n + 1)])


cdef int _decode_prufer(long long[:] row, int n, int* parent) noexcept nogil:
    cdef int N = n + 1
    cdef int degree[MAXN + 2]
    cdef int head[MAXN + 2]
    cdef int nxt[2 * MAXN + 4]
    cdef int to[2 * MAXN + 4]
    cdef int stack[MAXN + 2]
    cdef char seen[MAXN + 2]
    cdef int ne = 0, i, x, ptr, leaf, v, e, sp
    for i in range(N):
        degree[i] = 1
        head[i] = -1
        seen[i] = 0
        parent[i] = 0
    if n <= 1:
        return 0
    for i in range(n - 1):
        degree[row[i]] += 1
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(n - 1):
        x = <int> row[i]
        to[ne] = x; nxt[ne] = head[leaf]; head[leaf] = ne; ne += 1
        to[ne] = leaf; nxt[ne] = head[x]; head[x] = ne; ne += 1
        degree[x] -= 1
        if x < ptr and degree[x] == 1:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    to[ne] = N - 1; nxt[ne] = head[leaf]; head[leaf] = ne; ne += 1
    to[ne] = leaf; nxt[ne] = head[N - 1]; head[N - 1] = ne; ne += 1
    seen[0] = 1
    sp = 0
    stack[sp] = 0
    sp += 1
    while sp > 0:
        sp -= 1
        v = stack[sp]
        e = head[v]
        while e >= 0:
            if not seen[to[e]]:
                seen[to[e]] = 1
                parent[to[e]] = v
                stack[sp] = to[e]
                sp += 1
            e = nxt[e]
    return 0


cdef bint _parent_avoids(Ctx* c, int* parent) noexcept nogil:
    cdef int v, u, L, i, tmp
    for v in range(1, c.n + 1):
        L = 0
        u = v
        while u != 0:
            c.seq[L] = u
            L += 1
            u = parent[u]
        if L < 2:
            continue
        for i in range(L // 2):
            tmp = c.seq[i]
            c.seq[i] = c.seq[L - 1 - i]
            c.seq[L - 1 - i] = tmp
        if _span_contains(c, L, L - 1):
            return False
    return True


def sample_batch(int n, patterns, bint consecutive, prufer_rows):
    """Decode each Prufer row (tree on 0..n rooted at 0) and keep avoiding ones."""
    cdef Ctx* c = <Ctx*> malloc(sizeof(Ctx))
    if c == NULL:
        raise MemoryError()
    try:
        return _sample(c, n, patterns, consecutive, prufer_rows)
    finally:
        free(c)


cdef _sample(Ctx* c, int n, patterns, bint consecutive, prufer_rows):
    cdef long long[:, :] rows
    cdef int parent[MAXN + 2]
    cdef Py_ssize_t r, nrows
    cdef bint ok
    import numpy as np
    _setup(c, n, patterns, consecutive)
    arr = np.ascontiguousarray(prufer_rows, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != max(n - 1, 0):
        if not (arr.size == 0 and n <= 1):
            raise ValueError("prufer rows must have shape (count, n-1)")
        arr = np.zeros((len(prufer_rows), 0), dtype=np.int64)
    rows = arr
    nrows = rows.shape[0]
    out = []
    for r in range(nrows):
        with nogil:
            _decode_prufer(rows[r], n, parent)
            ok = _parent_avoids(c, parent)
        if ok:
            out.append(tuple([parent[i] for i in range(1, n + 1)]))
        else:
            out.append(None)
    return out
