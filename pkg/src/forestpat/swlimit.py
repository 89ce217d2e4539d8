"""Certified lower bounds on forest Stanley-Wilf limits.

From tree counts t and forest counts f of an uncovered set the engine builds

    A_n(x) = sum_{k<=n} (t_{k+1} - f_k) x^k / k!
    C_n = exp(int A_n),   D_n = int C_n,   F_n = C_n / (1 - D_n)

and finds the root r_n of D_n(x) = 1. Since every coefficient is
nonnegative, a truncated series evaluated with every operation rounded
toward zero under-approximates D_n, so a grid point x* with D~(x*) >= 1
certifies r_n <= x*, hence 1/(e x*) <= 1/(e r_n) <= L_S.

Fixed-point values are Python integers scaled by 2**bits. Only upper
bounds on r_n are certified; the float brackets are diagnostics.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import ForestPatError, IntegrityError
from .patterns import PatternSet
from .seqgen import CountSequence, closed_form_family, count_bruteforce, require
from .enumeration import FORESTS, enumerate_stats

EXACT = "exact-rational"
ROUND_DOWN = "round-down-fixed"
DEFAULT_PRECISION = 256
GUARD_BITS = 64
DEFAULT_MAX_DEGREE = 5000
EXACT_MAX_DEGREE = 64


class MethodNotApplicableError(ForestPatError):
    exit_code = 7


def _vals(seq) -> list:
    return list(seq.values if isinstance(seq, CountSequence) else seq)


def a_coeffs(t, f, n: int, s: PatternSet | None = None) -> list[int]:
    """[t_{k+1} - f_k for k = 0..n]; negative entries for an uncovered s are an integrity error."""
    t, f = _vals(t), _vals(f)
    require(t, n + 1, "tree sequence")
    require(f, n, "forest sequence")
    a = [t[k + 1] - f[k] for k in range(n + 1)]
    if s is not None and s.is_uncovered and any(x < 0 for x in a):
        k = next(i for i, x in enumerate(a) if x < 0)
        raise IntegrityError(f"t_{k + 1} < f_{k} for uncovered set {s.describe()}: count data is wrong")
    return a


# ---------------------------------------------------------------- series

class DSeries:
    """Lazily extended coefficients of C_n and D_n.

    Exact mode stores Fractions. Round-down mode stores floor(2**bits * c)
    with one floor per coefficient, which keeps each stored value a lower
    bound of the true one.
    """

    def __init__(self, a: Sequence[int], arithmetic: str = EXACT, bits: int = DEFAULT_PRECISION + GUARD_BITS,
                 max_degree: int = DEFAULT_MAX_DEGREE):
        if any(x < 0 for x in a):
            raise MethodNotApplicableError("A_n has a negative coefficient; the series bound does not apply")
        if arithmetic not in (EXACT, ROUND_DOWN):
            raise ValueError(f"unknown arithmetic {arithmetic!r}")
        self.a = list(a)
        self.arithmetic = arithmetic
        self.exact = arithmetic == EXACT
        self.bits = bits
        self.max_degree = max_degree
        self.one = Fraction(1) if self.exact else 1 << bits
        if self.exact:
            self.alpha = [Fraction(x, factorial(j)) for j, x in enumerate(self.a)]
        else:
            self.alpha = [(x << bits) // factorial(j) for j, x in enumerate(self.a)]
        self.c = [self.one]
        self.d = [0 * self.one]

    @property
    def n(self) -> int:
        return len(self.a) - 1

    def _extend_c(self) -> None:
        alpha, c = self.alpha, self.c
        mm = len(c) - 1
        acc = sum(alpha[j] * c[mm - j] for j in range(min(mm, len(alpha) - 1) + 1))
        c.append(acc / (mm + 1) if self.exact else acc // ((mm + 1) << self.bits))

    def ensure(self, m: int) -> None:
        """Make d_0..d_m available (d_k = c_{k-1} / k)."""
        while len(self.c) < m:
            self._extend_c()
        while len(self.d) <= m:
            k = len(self.d)
            self.d.append(self.c[k - 1] / k if self.exact else self.c[k - 1] // k)

    def coeff(self, m: int):
        self.ensure(m)
        return self.d[m]

    def c_coeff(self, m: int):
        while len(self.c) <= m:
            self._extend_c()
        return self.c[m]

    def is_identity(self) -> bool:
        return not any(self.a)


@dataclass
class TruncatedSeries:
    coefficients: list
    role: str
    source_n: int
    exact: bool = True
    bits: int = 0

    @property
    def max_degree(self) -> int:
        return len(self.coefficients) - 1

    def coeff(self, m: int):
        return self.coefficients[m]

    @property
    def one(self):
        return Fraction(1) if self.exact else 1 << self.bits

    def is_identity(self) -> bool:
        return not any(self.coefficients[2:])

    def as_fractions(self) -> list:
        if self.exact:
            return list(self.coefficients)
        return [Fraction(c, 1 << self.bits) for c in self.coefficients]


def d_series(a: Sequence[int], M: int, arithmetic: str = EXACT,
             bits: int = DEFAULT_PRECISION + GUARD_BITS) -> TruncatedSeries:
    """First M+1 coefficients of D_n."""
    eng = DSeries(a, arithmetic, bits, M)
    eng.ensure(M)
    return TruncatedSeries(eng.d[:M + 1], "D", len(a) - 1, eng.exact, 0 if eng.exact else bits)


def c_series(a: Sequence[int], M: int) -> TruncatedSeries:
    eng = DSeries(a, EXACT)
    eng.c_coeff(M)
    return TruncatedSeries(eng.c[:M + 1], "C", len(a) - 1)


# ---------------------------------------------------------------- evaluation

@dataclass
class Evaluation:
    certified_ge_one: bool
    degree: int
    tail_small: bool


def _evaluate(series, X: int, grid_bits: int, cap: int, tiny_bits: int, window: int) -> Evaluation:
    """Lower-bound partial sums of series at x = X / 2**grid_bits, stopping early once >= 1.

    Summation stops when the last ``window`` terms are all below 2**-tiny_bits
    (the truncation rule) or at degree ``cap``. The truncation point depends
    only on x, never on how far the sum got, so raising ``cap`` can only grow
    the certified sum.
    """
    exact = getattr(series, "exact", True)
    if exact:
        x = Fraction(X, 1 << grid_bits)
        one = Fraction(1)
        tiny = Fraction(1, 1 << tiny_bits)
        power = one
        total = Fraction(0)
    else:
        bits = series.bits
        if bits < grid_bits:
            raise ValueError("working precision must be at least the grid precision")
        x = X << (bits - grid_bits)
        one = 1 << bits
        tiny = 1 << max(bits - tiny_bits, 0)
        power = one
        total = 0
    small_run = 0
    for m in range(1, cap + 1):
        if exact:
            power = power * x
            term = series.coeff(m) * power
        else:
            power = (power * x) >> bits
            term = (series.coeff(m) * power) >> bits
        total += term
        if total >= one:
            return Evaluation(True, m, False)
        small_run = small_run + 1 if term < tiny else 0
        if small_run >= window:
            return Evaluation(False, m, True)
        if hasattr(series, "max_degree") and m >= series.max_degree:
            return Evaluation(False, m, False)
    return Evaluation(False, cap, False)


@dataclass
class RootCertificate:
    x_star: Fraction
    grid_bits: int
    max_degree_used: int
    cap_hit: bool
    float_bracket: tuple


def _grid_bits(tol) -> int:
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    g = 0
    while Fraction(1, 1 << g) > tol:
        g += 1
    return g


def certified_r_upper(d, tol=Fraction(1, 1 << 30), *, precision: int | None = None,
                      cap: int | None = None) -> RootCertificate:
    """Smallest grid point x* in (0, 1] with certified D~(x*) >= 1, so r_n <= x*.

    Valid on [0, 1] because d_1 = 1 forces D~(1) >= 1 in either arithmetic.
    """
    g = _grid_bits(tol)
    precision = precision if precision is not None else max(g, 32)
    cap = cap if cap is not None else getattr(d, "max_degree", DEFAULT_MAX_DEGREE)
    n = getattr(d, "n", getattr(d, "source_n", 0))
    window = max(n + 2, 4)
    tiny_bits = max(precision // 2, 8)
    if d.coeff(1) != d.one:
        raise ValueError("D series must have d_1 = 1")
    lo, hi = 0, 1 << g
    used = 1
    cap_hit = False
    if d.is_identity():
        # A_n = 0: D = x, root exactly 1
        return RootCertificate(Fraction(1), g, 1, False, (1.0, 1.0))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        ev = _evaluate(d, mid, g, cap, tiny_bits, window)
        used = max(used, ev.degree)
        if not ev.certified_ge_one and not ev.tail_small:
            cap_hit = True
        if ev.certified_ge_one:
            hi = mid
        else:
            lo = mid
    x_star = Fraction(hi, 1 << g)
    return RootCertificate(x_star, g, used, cap_hit, float_bracket(d, used, float(x_star)))


def float_bracket(d, degree: int, x_hint: float = 1.0) -> tuple:
    """Non-certified float bracket around the root of D.

    Uses at least ``degree`` terms, continuing while terms at ``x_hint`` are
    still above double-precision resolution (up to the series' own limit).
    """
    exact = getattr(d, "exact", True)
    limit = getattr(d, "max_degree", DEFAULT_MAX_DEGREE)
    lhint = math.log(x_hint)
    logs = []
    small = 0
    m = 0
    while m < limit:
        m += 1
        v = d.coeff(m)
        if v == 0:
            lc = -math.inf
        elif exact:
            lc = math.log(v.numerator) - math.log(v.denominator)
        else:
            lc = math.log(v) - d.bits * math.log(2)
        logs.append(lc)
        small = small + 1 if lc + m * lhint < -45 else 0
        if m >= degree and small >= 8:
            break

    def D(x: float) -> float:
        lx = math.log(x)
        s = 0.0
        for m, lc in enumerate(logs, start=1):
            if lc != -math.inf:
                s += math.exp(min(lc + m * lx, 700.0))
        return s

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if D(mid) >= 1.0:
            hi = mid
        else:
            lo = mid
    return (lo, hi)


# ---------------------------------------------------------------- constants

def inv_e_lower(bits: int) -> int:
    """floor(2**bits / e) from below: alternating-series partial sum ending on a negative term."""
    s = Fraction(0)
    k = 0
    term = Fraction(1)
    while True:
        s += term if k % 2 == 0 else -term
        if k % 2 == 1 and term < Fraction(1, 1 << (bits + 4)):
            break
        k += 1
        term = term / k
    return (s.numerator << bits) // s.denominator


# ---------------------------------------------------------------- bounds

@dataclass
class LimitBound:
    descriptor: str
    kind: str
    n: int
    M: int
    precision: int
    x_star: Fraction
    lower_bound: Fraction
    r_estimate: float
    r_bracket: tuple
    proven: bool
    cap_hit: bool = False
    flags: list = field(default_factory=list)

    @property
    def lower_bound_float(self) -> float:
        return float(self.lower_bound)

    @property
    def estimate(self) -> float:
        """Non-certified float value of 1/(e r_n)."""
        return 1.0 / (math.e * self.r_estimate)


def limit_lower_bound(s: PatternSet, t, f, n: int, M: int = DEFAULT_MAX_DEGREE,
                      precision: int = DEFAULT_PRECISION, arithmetic: str | None = None,
                      allow_covered: bool = True) -> LimitBound:
    """Certified lower bound 1/(e x*) on L_S from counts up to t_{n+1}, f_n."""
    flags = []
    proven = s.is_uncovered
    if not proven:
        flags.append("covered-set:not-proven-by-theorem")
        if not allow_covered:
            raise MethodNotApplicableError(
                f"{s.describe()} is covered; the bound is only a theorem for uncovered sets")
        warnings.warn(f"{s.describe()} is covered: result is not a proven bound", stacklevel=2)
    a = a_coeffs(t, f, n, s)
    if any(x < 0 for x in a):
        raise MethodNotApplicableError("negative A_n coefficient on the computed prefix")
    if arithmetic is None:
        arithmetic = EXACT if M <= EXACT_MAX_DEGREE else ROUND_DOWN
    bits = precision + GUARD_BITS
    series = DSeries(a, arithmetic, bits, M)
    if all(x == 0 for x in a):
        cert = RootCertificate(Fraction(1), precision, 1, False, (1.0, 1.0))
        flags.append("A_n=0:exact-root-1")
    else:
        cert = certified_r_upper(series, Fraction(1, 1 << precision), precision=precision, cap=M)
    if cert.cap_hit:
        flags.append(f"degree-cap-{M}-hit")
    X = int(cert.x_star * (1 << cert.grid_bits))
    einv = inv_e_lower(bits)  # <= 2**bits / e
    lower = Fraction((einv << cert.grid_bits) // X, 1 << bits)
    lo, hi = cert.float_bracket
    return LimitBound(s.describe(), s.kind, n, cert.max_degree_used, precision, cert.x_star, lower,
                      0.5 * (lo + hi), (lo, hi), proven, cert.cap_hit, flags)


# ---------------------------------------------------------------- consistency

@dataclass
class ConsistencyReport:
    n: int
    K: int
    coefficients: list  # k! [x^k] F_n
    equal_prefix: bool
    dominated_tail: bool
    mismatches: list

    @property
    def ok(self) -> bool:
        return self.equal_prefix and self.dominated_tail


def fn_series(a: Sequence[int], K: int) -> list[Fraction]:
    """Coefficients of F_n = C_n / (1 - D_n) to degree K, exactly."""
    eng = DSeries(a, EXACT)
    eng.ensure(K)
    eng.c_coeff(K)
    c, d = eng.c, eng.d
    g = [c[0]]
    for m in range(1, K + 1):
        g.append(c[m] + sum(d[j] * g[m - j] for j in range(1, m + 1)))
    return g


def fn_consistency(a: Sequence[int], t, f, n: int, K: int) -> ConsistencyReport:
    f = _vals(f)
    if K < n + 1:
        raise ValueError("K must be at least n + 1")
    require(f, K, "forest sequence")
    g = fn_series(a, K)
    coeffs = [g[k] * factorial(k) for k in range(K + 1)]
    mism = []
    for k, v in enumerate(coeffs):
        if v.denominator != 1:
            mism.append((k, v, f[k], "non-integer"))
        elif k <= n + 1 and v != f[k]:
            mism.append((k, v, f[k], "prefix"))
        elif k > n + 1 and v > f[k]:
            mism.append((k, v, f[k], "tail"))
    return ConsistencyReport(n, K, [int(v) if v.denominator == 1 else v for v in coeffs],
                             not any(m[3] in ("prefix", "non-integer") and m[0] <= n + 1 for m in mism),
                             not any(m[3] in ("tail", "non-integer") and m[0] > n + 1 for m in mism),
                             mism)


@dataclass
class ClassCheckReport:
    n: int
    rows: list  # (k, class count, k! [x^k] F_n)

    @property
    def discrepancies(self) -> list:
        return [r for r in self.rows if r[1] != r[2]]


def scriptF_class_check(s: PatternSet, n: int, k_max: int, *, cap: int | None = None,
                        t=None, f=None) -> ClassCheckReport:
    """Compare brute-force counts of forests where every vertex with more than n
    descendants carries the smallest label of its subtree against k! [x^k] F_n.
    Reported, not asserted."""
    if t is None or f is None:
        t = count_bruteforce(s, "trees", n + 1, cap=cap)
        f = count_bruteforce(s, "forests", n, cap=cap)
    a = a_coeffs(t, f, n)
    g = fn_series(a, k_max)
    rows = []
    for k in range(k_max + 1):
        cnt = enumerate_stats(k, s, FORESTS, cap=cap, desc_rule=n).total
        rows.append((k, cnt, g[k] * factorial(k)))
    return ClassCheckReport(n, rows)


# ---------------------------------------------------------------- diagnostics

@dataclass
class RatioReport:
    values: list  # (k, f_k^{1/k}/k)
    non_monotone: list  # k where value[k] > value[k-1]

    def at(self, k: int) -> float:
        return dict(self.values)[k]


def root_ratio(v: int, k: int) -> float:
    return math.exp(math.log(v) / k) / k


def ratio_diagnostic(f, k_max: int | None = None) -> RatioReport:
    f = _vals(f)
    k_max = len(f) - 1 if k_max is None else k_max
    require(f, k_max, "forest sequence")
    vals = [(k, root_ratio(f[k], k)) for k in range(1, k_max + 1) if f[k] > 0]
    bad = [vals[i][0] for i in range(1, len(vals)) if vals[i][1] > vals[i - 1][1]]
    return RatioReport(vals, bad)


@dataclass
class FamilyReport:
    bound: LimitBound
    ratio: RatioReport
    envelope: float


def family_ode_limit(n_data: int = 400, M: int = DEFAULT_MAX_DEGREE,
                     precision: int = DEFAULT_PRECISION) -> FamilyReport:
    """Bound and ratio envelope for {213,231,312,321}, whose counts obey t_{k+1} = t_k + f_k."""
    s = PatternSet.parse("213,231,312,321")
    t, f = closed_form_family(s, n_data + 1)
    bound = limit_lower_bound(s, t, f, n_data, M, precision)
    ratio = ratio_diagnostic(f, n_data)
    return FamilyReport(bound, ratio, ratio.at(n_data))
