import math
import warnings
from fractions import Fraction
from math import factorial

import mpmath
import pytest
import sympy
from scipy import integrate, optimize

from forestpat import seqgen, swlimit
from forestpat.enumeration import FORESTS, TREES
from forestpat.errors import IntegrityError
from forestpat.patterns import PatternSet


@pytest.fixture(scope="module")
def data213():
    s = PatternSet.parse("213")
    return s, seqgen.count_bruteforce(s, TREES, 9), seqgen.count_bruteforce(s, FORESTS, 8)


def _sympy_d(a, M):
    x = sympy.symbols("x")
    A = sum(sympy.Rational(ak, factorial(k)) * x ** k for k, ak in enumerate(a))
    C = sympy.exp(sympy.integrate(A, x))
    ser = sympy.series(C, x, 0, M).removeO()
    D = sympy.integrate(ser, x)
    poly = sympy.Poly(D, x)
    out = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
           for c in reversed(poly.all_coeffs())]
    return out + [Fraction(0)] * (M + 1 - len(out))


def _r1():
    g = lambda x: integrate.quad(lambda t: math.exp(t * t / 2), 0, x)[0] - 1
    return optimize.brentq(g, 0.5, 1.0, xtol=1e-15)


@pytest.mark.parametrize("text,n,want", [
    ("21", 4, [0, 0, 0, 0, 0]), ("213", 2, [0, 1, 5]), ("empty", 2, [0, 1, 6])])
def test_a_coeffs_examples(text, n, want):
    s = PatternSet.parse(text)
    t = [seqgen.cayley(k, TREES) for k in range(n + 2)] if text == "empty" else None
    if t is None:
        t = seqgen.count_bruteforce(s, TREES, n + 1).values
    f = seqgen.exp_values(t)
    assert swlimit.a_coeffs(t, f, n, s) == want


def test_a_coeffs_integrity():
    with pytest.raises(IntegrityError):
        swlimit.a_coeffs([0, 1, 1, 1], [1, 1, 3], 2, PatternSet.parse("213"))
    with pytest.raises(seqgen.InsufficientDataError):
        swlimit.a_coeffs([0, 1, 2], [1, 1, 3], 2)


def test_d_series_identity():
    d = swlimit.d_series([0], 6)
    assert d.as_fractions() == [0, 1, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("a", [[0, 1], [0, 1, 5], [0, 1, 6, 40]])
def test_d_series_against_symbolic(a):
    M = 10
    d = swlimit.d_series(a, M)
    assert d.as_fractions() == _sympy_d(a, M)


def test_d1_coefficients():
    d = swlimit.d_series([0, 1], 9).as_fractions()
    assert d == [0, 1, 0, Fraction(1, 6), 0, Fraction(1, 40), 0, Fraction(1, 336), 0, Fraction(1, 3456)]


def test_round_down_coefficients_are_lower_bounds():
    a = [0, 1, 5, 32, 217]
    exact = swlimit.d_series(a, 60).as_fractions()
    bits = 128
    rd = swlimit.d_series(a, 60, swlimit.ROUND_DOWN, bits).as_fractions()
    for e, r in zip(exact, rd):
        assert r <= e
        assert e - r < Fraction(60 * 8, 1 << bits)


def test_d1_root_against_quadrature():
    r1 = _r1()
    assert abs(r1 - 0.8744967115413) < 1e-9
    cert = swlimit.certified_r_upper(swlimit.DSeries([0, 1], swlimit.ROUND_DOWN), Fraction(1, 10 ** 6))
    x = float(cert.x_star)
    assert r1 <= x < r1 + 2e-6
    assert integrate.quad(lambda t: math.exp(t * t / 2), 0, x, epsabs=1e-14)[0] >= 1
    lo, hi = cert.float_bracket
    assert lo <= r1 <= hi + 1e-12


def test_identity_series_root_is_one():
    cert = swlimit.certified_r_upper(swlimit.DSeries([0, 0, 0]))
    assert cert.x_star == 1


def test_inv_e_lower():
    mpmath.mp.prec = 600
    for bits in (64, 256, 320):
        v = swlimit.inv_e_lower(bits)
        true = mpmath.mpf(2) ** bits / mpmath.e
        assert v <= true < v + 2


@pytest.mark.parametrize("M", [20, 100, 200])
def test_exact_and_rounded_agree(data213, M):
    s, t, f = data213
    prec = 48
    ex = swlimit.limit_lower_bound(s, t, f, 3, M, prec, swlimit.EXACT)
    rd = swlimit.limit_lower_bound(s, t, f, 3, M, prec, swlimit.ROUND_DOWN)
    assert abs(ex.x_star - rd.x_star) <= Fraction(2, 1 << prec)
    assert rd.x_star >= ex.x_star


def test_bounds_monotone_in_n(data213):
    s, t, f = data213
    bounds = [swlimit.limit_lower_bound(s, t, f, n).lower_bound for n in range(1, 9)]
    assert all(b2 >= b1 for b1, b2 in zip(bounds, bounds[1:]))
    assert float(bounds[0]) > math.exp(-1)
    # frozen pipeline value
    assert float(bounds[-1]) == pytest.approx(0.5766415, abs=2e-7)


def test_bounds_monotone_in_M(data213):
    s, t, f = data213
    prev = Fraction(0)
    for M in (3, 5, 10, 20, 50, 100, 269, 5000):
        b = swlimit.limit_lower_bound(s, t, f, 8, M, arithmetic=swlimit.ROUND_DOWN).lower_bound
        assert b >= prev
        prev = b


def test_cap_reported(data213):
    s, t, f = data213
    b = swlimit.limit_lower_bound(s, t, f, 8, 10)
    assert b.cap_hit and any("cap" in fl for fl in b.flags)
    assert not swlimit.limit_lower_bound(s, t, f, 8).cap_hit


def test_soundness_sandwich(data213):
    s, t, f = data213
    ratios = swlimit.ratio_diagnostic(f, 8)
    for n in range(1, 8):
        b = swlimit.limit_lower_bound(s, t, f, n)
        assert b.lower_bound_float <= b.estimate + 1e-12
        assert all(b.estimate <= v for _, v in ratios.values)


@pytest.mark.parametrize("text", ["21", "12", "21,312"])
def test_limit_one_over_e(text):
    s = PatternSet.parse(text)
    t, f = seqgen.closed_form_family(s, 6)
    b = swlimit.limit_lower_bound(s, t, f, 5)
    assert b.x_star == 1
    mpmath.mp.prec = 400
    gap = mpmath.mpf(b.lower_bound.numerator) / b.lower_bound.denominator - 1 / mpmath.e
    assert -mpmath.mpf(2) ** -250 < gap <= 0


@pytest.mark.parametrize("text", ["213", "123", "132", "1234", "2143,3142"])
def test_n1_bound_exceeds_one_over_e(text):
    s = PatternSet.parse(text)
    t = seqgen.count_bruteforce(s, TREES, 2)
    f = seqgen.count_bruteforce(s, FORESTS, 1)
    b = swlimit.limit_lower_bound(s, t, f, 1)
    assert b.lower_bound_float > math.exp(-1) + 0.05
    assert b.lower_bound_float == pytest.approx(1 / (math.e * _r1()), abs=2e-6)


def test_covered_sets():
    s = PatternSet.parse("132,231,321")
    t, f = seqgen.closed_form_family(s, 8)
    with pytest.raises(swlimit.MethodNotApplicableError):
        swlimit.limit_lower_bound(s, t, f, 6, allow_covered=False)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        b = swlimit.limit_lower_bound(s, t, f, 6)
    assert w and not b.proven and "covered-set:not-proven-by-theorem" in b.flags
    # a_8 = t_9 - f_8 < 0: engine refuses
    t, f = seqgen.closed_form_family(s, 9)
    with pytest.raises(swlimit.MethodNotApplicableError), warnings.catch_warnings():
        warnings.simplefilter("ignore")
        swlimit.limit_lower_bound(s, t, f, 8)


def test_fn_consistency_examples(data213):
    s, t, f = data213
    a = swlimit.a_coeffs(t, f, 2)
    rep = swlimit.fn_consistency(a, t, f, 2, 3)
    assert rep.ok and rep.coefficients[3] == 15
    rep = swlimit.fn_consistency(a, t, f, 2, 5)
    assert rep.ok
    assert rep.coefficients[4] < f[4] and rep.coefficients[5] < f[5]
    s21 = PatternSet.parse("21")
    t21, f21 = seqgen.closed_form_family(s21, 12)
    for n in range(4):
        rep = swlimit.fn_consistency(swlimit.a_coeffs(t21, f21, n), t21, f21, n, n + 5)
        assert rep.coefficients == f21.values[:n + 6]


def test_class_check_matches_series():
    s = PatternSet.parse("213")
    for n, want in [(1, [1, 1, 3, 10, 47, 268, 1841]), (2, [1, 1, 3, 15, 72, 468, 3666])]:
        rep = swlimit.scriptF_class_check(s, n, 6)
        assert [r[1] for r in rep.rows] == want
        assert rep.discrepancies == []


def test_ratio_examples():
    f21 = [factorial(k) for k in range(11)]
    assert swlimit.ratio_diagnostic(f21).at(10) == pytest.approx(0.4529, abs=1e-4)
    cay = [seqgen.cayley(k, FORESTS) for k in range(5)]
    assert swlimit.ratio_diagnostic(cay).at(4) == pytest.approx(0.836, abs=1e-3)


def test_family_limit_against_quadrature():
    rho = integrate.quad(lambda T: 1 / (T + math.exp(T)), 0, 700, epsabs=1e-13, limit=200)[0]
    L = 1 / (math.e * rho)
    for n in (200, 400):
        rep = swlimit.family_ode_limit(n)
        assert 0.44 <= rep.bound.lower_bound_float <= L
        assert rep.bound.lower_bound_float < 0.4562 + 1e-3
        assert not rep.bound.cap_hit
        assert rep.ratio.non_monotone == []


def test_family_envelope_against_singularity_estimate():
    # F = exp(T) with T' = T + e^T has a simple pole at rho with residue 1,
    # so f_k ~ k! rho^(-k-1); the envelope at k = 400 follows from that alone
    rho = integrate.quad(lambda T: 1 / (T + math.exp(T)), 0, 700, epsabs=1e-13, limit=200)[0]
    k = 400
    est = math.exp((math.lgamma(k + 1) - (k + 1) * math.log(rho)) / k) / k
    rep = swlimit.family_ode_limit(k)
    assert rep.envelope == pytest.approx(est, abs=1e-5)
    assert rep.envelope == pytest.approx(0.460936, abs=1e-6)
