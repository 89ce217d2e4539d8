"""Command-line driver: ``forestpat {count,limit,stats,verify,table}``.

Exit codes: 0 ok, 2 parse error, 3 enumeration cap or sampler floor,
4 data integrity, 5 verification suite failure, 6 no closed form,
7 method not applicable (covered set), 8 insufficient data.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import random
import sys
import warnings
from fractions import Fraction
from math import floor
from pathlib import Path

from . import seqgen, swlimit
from .enumeration import FORESTS, TREES
from .errors import ForestPatError, InsufficientDataError, ParseError
from .foreststat import (CSV_HEADER, component_count_dist, component_size_profile,
                         moments_report, root_label_dist, sample_forests)
from .patterns import CLASSICAL, KINDS, PatternSet

SUITE_FAILURE = 5
CACHE_ENV = "FORESTPAT_CACHE"
SUITES = ("cayley", "roundtrip", "sandwich", "consistency", "monotonicity")
DEFAULT_TABLE_ROWS = ("21", "213", "123", "132", "213,231,312,321")


# ---------------------------------------------------------------- formatting

def _sig(q: Fraction, digits: int, up: bool) -> str:
    """Decimal string of q with `digits` significant digits, rounded toward +inf if up else -inf."""
    q = Fraction(q)
    if q == 0:
        return "0"
    if q < 0:
        return "-" + _sig(-q, digits, not up)
    e = len(str(q.numerator // q.denominator)) - 1 if q >= 1 else -len(str(q.denominator // q.numerator))
    # fix e so that 10^e <= q < 10^(e+1)
    while Fraction(10) ** e > q:
        e -= 1
    while Fraction(10) ** (e + 1) <= q:
        e += 1
    scale = Fraction(10) ** (digits - 1 - e)
    v = q * scale
    m = floor(v)
    if up and m != v:
        m += 1
    places = max(0, digits - 1 - e)
    text = str(m).rjust(places + 1, "0")
    if places:
        text = text[:-places] + "." + text[-places:]
    elif digits - 1 - e < 0:
        text += "0" * (e + 1 - digits)
    return text


def fmt_down(q: Fraction, digits: int = 6) -> str:
    return _sig(q, digits, up=False)


def fmt_up(q: Fraction, digits: int = 6) -> str:
    return _sig(q, digits, up=True)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def _emit(rows, header, fmt) -> str:
    return _csv(rows, header) if fmt == "csv" else _table(rows, header)


# ---------------------------------------------------------------- data sources

def cache_dir(args) -> Path:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    return Path.home() / ".cache" / "forestpat"


def _from_bfile(path: str, s: PatternSet, mode: str, n: int) -> seqgen.CountSequence:
    text = Path(path).read_text()
    if any(line.startswith("# mode:") for line in text.splitlines()):
        seq = seqgen.parse_cache(text)
    else:
        seq = seqgen.ingest_bfile(text, TREES, s.kind, s.describe())
    if seq.mode != mode:
        conv = seqgen.exp_transform if mode == FORESTS else seqgen.log_transform
        seq = conv(seq)
    return seq


def obtain(s: PatternSet, mode: str, n: int, source: str, cdir: Path, workers: int = 1,
           truncate: bool = True) -> seqgen.CountSequence:
    """Sequence for s in `mode` through index n from the requested source."""
    if source == "auto":
        if seqgen.recognize_family(s) is not None:
            source = "closed-form"
        else:
            try:
                seq = seqgen.read_cache(cdir, s, mode)
                if seq.n_max >= n:
                    return seq.truncate(n)
            except (FileNotFoundError, ParseError):
                pass
            source = "brute"
    if source == "closed-form":
        t, f = seqgen.closed_form_family(s, n)
        return t if mode == TREES else f
    if source == "brute":
        return seqgen.count_bruteforce(s, mode, n, workers=workers)
    if source == "cache":
        seq = seqgen.read_cache(cdir, s, mode)
    elif source.startswith("bfile:"):
        seq = _from_bfile(source[len("bfile:"):], s, mode, n)
    else:
        raise ParseError(f"unknown source {source!r}")
    if seq.n_max < n and truncate:
        raise InsufficientDataError(f"{source} has {mode} data only to n={seq.n_max}, need {n}")
    return seq.truncate(n) if truncate else seq


def _pattern_set(args) -> PatternSet:
    return PatternSet.parse(args.set, args.kind)


# ---------------------------------------------------------------- count

def cmd_count(args) -> str:
    s = _pattern_set(args)
    cdir = cache_dir(args)
    modes = (TREES, FORESTS) if args.mode == "both" else (args.mode,)
    seqs = [obtain(s, m, args.n, args.source, cdir, args.workers) for m in modes]
    if args.source != "cache" and not args.no_cache:
        for seq in seqs:
            seqgen.write_cache(cdir, s, seq)
    header = ["n"]
    for m in modes:
        header += [m, f"{m}_provenance"]
    rows = []
    for i in range(args.n + 1):
        row = [i]
        for seq in seqs:
            row += [seq[i], seq.provenance[i]]
        rows.append(row)
    return _emit(rows, header, args.format)


# ---------------------------------------------------------------- limit

BOUND_FIELDS = ["set", "kind", "n", "M", "precision", "x_star", "lower_bound", "r_estimate",
                "proven", "flags"]


def bound_record(b: swlimit.LimitBound, exact: bool = False) -> dict:
    rec = {
        "set": b.descriptor,
        "kind": b.kind,
        "n": b.n,
        "M": b.M,
        "precision": b.precision,
        "x_star": fmt_up(b.x_star),
        "lower_bound": fmt_down(b.lower_bound),
        "r_estimate": f"{b.r_estimate:.6g}",
        "proven": "yes" if b.proven else "no",
        "flags": ";".join(b.flags) or "none",
    }
    if exact:
        rec["x_star_exact"] = str(b.x_star)
        rec["lower_bound_exact"] = str(b.lower_bound)
    return rec


def format_bound(b: swlimit.LimitBound, fmt: str = "table", exact: bool = False) -> str:
    rec = bound_record(b, exact)
    if fmt == "csv":
        return _csv([list(rec.values())], list(rec))
    return "".join(f"{k}: {v}\n" for k, v in rec.items())


def _limit_data(s: PatternSet, n: int, source: str, cdir: Path, workers: int = 1):
    """(t to n+1, f to n, n used, flags). A b-file shorter than n+1 lowers n."""
    flags = []
    t = obtain(s, TREES, n + 1, source, cdir, workers, truncate=not source.startswith("bfile:"))
    if t.n_max < n + 1:
        if t.n_max < 2:
            raise InsufficientDataError("b-file too short for a bound")
        flags.append(f"data-depth-reduced-from-{n}")
        n = t.n_max - 1
    t = t.truncate(n + 1)
    f = seqgen.exp_transform(t.truncate(n))
    return t, f, n, flags


def compute_bound(s, n, source, cdir, M, precision, allow_covered, exact_arith=False, workers=1):
    if not s.is_uncovered and not allow_covered:
        raise swlimit.MethodNotApplicableError(
            f"refusing covered set {s.describe()}: the lower-bound theorem needs an uncovered set "
            "(no pattern starting with 1, or none starting with its maximum); pass --allow-covered")
    t, f, n, flags = _limit_data(s, n, source, cdir, workers)
    arith = swlimit.EXACT if exact_arith else None
    with warnings.catch_warnings():
        # the report's flags already say this
        warnings.simplefilter("ignore")
        b = swlimit.limit_lower_bound(s, t, f, n, M, precision, arith, allow_covered=True)
    b.flags = flags + b.flags
    if any(p == seqgen.INGESTED for p in t.provenance):
        b.flags.append("ingested-data")
    return b, t, f


def cmd_limit(args) -> str:
    s = _pattern_set(args)
    b, _, _ = compute_bound(s, args.n, args.source, cache_dir(args), args.M, args.precision,
                            args.allow_covered, workers=args.workers)
    return format_bound(b, args.format, args.exact)


# ---------------------------------------------------------------- stats

def cmd_stats(args) -> str:
    s = _pattern_set(args)
    out = []
    if args.sample:
        if args.stat == "sizes":
            raise ParseError("sampled mode supports --stat root or components")
        run = sample_forests(s, args.n, args.sample, args.seed, trees=args.stat == "root")
        pmf = run.root_labels() if args.stat == "root" else run.component_counts()
        rows = pmf.csv_rows()
        note = f"# sampled: count={args.sample} seed={args.seed} acceptance={run.acceptance_rate:.6g}"
    elif args.stat == "sizes":
        prof = component_size_profile(s, args.n, workers=args.workers)
        rows = prof.csv_rows()
        pmf = None
        note = "# expected number of size-k components; reference 1/k"
    else:
        fn = root_label_dist if args.stat == "root" else component_count_dist
        pmf = fn(s, args.n, workers=args.workers)
        rows = pmf.csv_rows()
        note = "# exact"
    if args.format == "csv":
        return CSV_HEADER + "\n" + "".join(r + "\n" for r in rows)
    out.append(note)
    table = [r.split(",") for r in rows]
    out.append(_table(table, CSV_HEADER.split(",")).rstrip("\n"))
    if pmf is not None:
        mo = moments_report(pmf)
        und = "undefined"
        out.append("# moments (exploratory)")
        out.append(f"mean: {mo.mean} ({float(mo.mean):.6g})")
        out.append(f"variance: {mo.variance} ({float(mo.variance):.6g})")
        out.append(f"skewness: {und if mo.skewness is None else f'{mo.skewness:.6g}'}")
        out.append(f"excess_kurtosis: {und if mo.excess_kurtosis is None else f'{mo.excess_kurtosis:.6g}'}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- verify

def suite_cayley(args, s) -> tuple[bool, list[str]]:
    empty = PatternSet((), args.kind)
    lines, ok = [], True
    for mode in (TREES, FORESTS):
        seq = seqgen.count_bruteforce(empty, mode, args.n, workers=args.workers)
        for i, v in enumerate(seq.values):
            if v != seqgen.cayley(i, mode):
                ok = False
                lines.append(f"  {mode} n={i}: got {v}, want {seqgen.cayley(i, mode)}")
    return ok, lines


def suite_roundtrip(args, s) -> tuple[bool, list[str]]:
    rng = random.Random(args.seed)
    lines, ok = [], True
    for trial in range(100):
        length = rng.randint(1, 30)
        t = [0] + [rng.randint(0, 10 ** 30) for _ in range(length - 1)]
        if length > 1:
            t[1] = 1
        back = seqgen.log_values(seqgen.exp_values(t))
        if back != t:
            ok = False
            lines.append(f"  trial {trial}: round trip changed {t}")
    return ok, lines


def suite_sandwich(args, s) -> tuple[bool, list[str]]:
    t = obtain(s, TREES, args.n, args.source, cache_dir(args), args.workers)
    f = obtain(s, FORESTS, args.n, args.source, cache_dir(args), args.workers)
    rep = seqgen.check_sandwich(t, f, s)
    lines = []
    if rep.first_lower_violation is not None:
        k = rep.first_lower_violation
        lines.append(f"  lower inequality t_(k+1) >= f_k fails at k={k}: t_{k + 1}={t[k + 1]} < f_{k}={f[k]}")
    if rep.first_upper_violation is not None:
        k = rep.first_upper_violation
        lines.append(f"  upper inequality t_k <= k f_(k-1) fails at k={k}")
    if rep.integrity_error:
        lines.append("  integrity error: set is uncovered, so the lower inequality is a theorem")
    return not rep.integrity_error and rep.first_upper_violation is None, lines


def suite_consistency(args, s) -> tuple[bool, list[str]]:
    K = max(args.n + 1, args.K)
    t = obtain(s, TREES, args.n + 1, args.source, cache_dir(args), args.workers)
    f = obtain(s, FORESTS, K, args.source, cache_dir(args), args.workers)
    a = swlimit.a_coeffs(t, f, args.n, s)
    rep = swlimit.fn_consistency(a, t, f, args.n, K)
    lines = [f"  k={k}: series gives {v}, f_k={fk} ({why})" for k, v, fk, why in rep.mismatches]
    return rep.ok, lines


def suite_monotonicity(args, s) -> tuple[bool, list[str]]:
    cdir = cache_dir(args)
    lines, ok = [], True
    prev = None
    for n in range(1, args.n + 1):
        b, _, _ = compute_bound(s, n, args.source, cdir, args.M, args.precision, args.allow_covered,
                                workers=args.workers)
        lines.append(f"  n={n}: lower_bound {fmt_down(b.lower_bound)}")
        if prev is not None and b.lower_bound < prev:
            ok = False
            lines.append(f"  decrease in n at n={n}")
        prev = b.lower_bound
    prev = None
    for M in (8, 16, 32, 64, 128, args.M):
        b, _, _ = compute_bound(s, args.n, args.source, cdir, M, args.precision, args.allow_covered,
                                workers=args.workers)
        if prev is not None and b.lower_bound < prev:
            ok = False
            lines.append(f"  decrease in M at M={M}")
        prev = b.lower_bound
    return ok, lines


def cmd_verify(args) -> tuple[str, int]:
    s = _pattern_set(args)
    names = SUITES if args.suite == "all" else (args.suite,)
    out, failed = [], False
    for name in names:
        ok, lines = globals()[f"suite_{name}"](args, s)
        failed |= not ok
        out.append(f"{name}: {'PASS' if ok else 'FAIL'} (set {s.describe()}, n={args.n})")
        out += lines
    return "\n".join(out) + "\n", SUITE_FAILURE if failed else 0


# ---------------------------------------------------------------- table

def _table_row(text: str, args, cdir: Path, bfiles: dict) -> list:
    s = PatternSet.parse(text, args.kind)
    if text in bfiles:
        source, n = f"bfile:{bfiles[text]}", args.bfile_n
    elif seqgen.recognize_family(s) is not None:
        source = "closed-form"
        n = args.family_n if seqgen.recognize_family(s) == "tree-plus-forest" else args.n
    else:
        source, n = args.source, args.n
    try:
        b, t, f = compute_bound(s, n, source, cdir, args.M, args.precision, args.allow_covered,
                                workers=args.workers)
    except (ForestPatError, FileNotFoundError) as exc:
        return [s.describe(), source.split(":")[0], "-", "-", "-", "-", f"missing ({type(exc).__name__})"]
    env = swlimit.ratio_diagnostic(f, b.n).at(b.n)
    note = "ingested" if "ingested-data" in b.flags else "computed"
    if not b.proven:
        note += "; covered set, not a theorem"
    return [b.descriptor, source.split(":")[0], b.n, b.M, fmt_down(b.lower_bound), f"{env:.6g}", note]


def cmd_table(args) -> str:
    rows_in = [r for r in args.rows.split(";") if r] if args.rows else list(DEFAULT_TABLE_ROWS)
    bfiles = {}
    for item in args.bfile or []:
        key, _, path = item.partition("=")
        if not path:
            raise ParseError(f"--bfile expects SET=PATH, got {item!r}")
        bfiles[key] = path
        if key not in rows_in:
            rows_in.append(key)
    cdir = cache_dir(args)
    rows = [_table_row(r, args, cdir, bfiles) for r in rows_in]
    header = ["set", "source", "n", "M", "lower_bound", "envelope", "note"]
    return _emit(rows, header, args.format)


# ---------------------------------------------------------------- parser

def _positive(v: str) -> int:
    try:
        x = int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {v!r}")
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v!r}")
    return x


def _nonneg(v: str) -> int:
    try:
        x = int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {v!r}")
    if x < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {v!r}")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forestpat", description="Pattern-avoiding rooted labeled forests.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--set", default="empty", help='pattern set, e.g. "213" or "123,2413,3412"')
    common.add_argument("--kind", choices=KINDS, default=CLASSICAL)
    common.add_argument("--source", default="auto",
                        help="auto, brute, closed-form, cache or bfile:PATH")
    common.add_argument("--format", choices=("table", "csv"), default="table")
    common.add_argument("--cache-dir", help=f"sequence cache (default ${CACHE_ENV} or ~/.cache/forestpat)")
    common.add_argument("--workers", type=_positive, default=1)
    bound = argparse.ArgumentParser(add_help=False)
    bound.add_argument("--M", type=_positive, default=swlimit.DEFAULT_MAX_DEGREE, help="series degree cap")
    bound.add_argument("--precision", type=_positive, default=swlimit.DEFAULT_PRECISION, help="bits")
    bound.add_argument("--allow-covered", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="tree/forest counts")
    c.add_argument("--mode", choices=(TREES, FORESTS, "both"), default="both")
    c.add_argument("--n", type=_nonneg, default=7)
    c.add_argument("--no-cache", action="store_true", help="do not write the cache")

    lim = sub.add_parser("limit", parents=[common, bound], help="certified lower bound on the limit")
    lim.add_argument("--n", type=_positive, default=4)
    lim.add_argument("--exact", action="store_true", help="also print exact rationals")

    st = sub.add_parser("stats", parents=[common], help="distributions of forest statistics")
    st.add_argument("--stat", choices=("root", "components", "sizes"), default="components")
    st.add_argument("--n", type=_nonneg, default=5)
    st.add_argument("--sample", type=_positive, help="draw this many samples instead of enumerating")
    st.add_argument("--seed", type=_nonneg, default=0)

    v = sub.add_parser("verify", parents=[common, bound], help="invariant suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--n", type=_positive, default=6)
    v.add_argument("--K", type=_positive, default=8, help="series degree for consistency")
    v.add_argument("--seed", type=_nonneg, default=0)

    tb = sub.add_parser("table", parents=[common, bound], help="bound table over several sets")
    tb.add_argument("--rows", help='";"-separated pattern sets')
    tb.add_argument("--n", type=_positive, default=6, help="data depth for brute-force rows")
    tb.add_argument("--family-n", type=_positive, default=400)
    tb.add_argument("--bfile", action="append", help="SET=PATH tree b-file for a row")
    tb.add_argument("--bfile-n", type=_positive, default=10 ** 6)
    return p


def run(argv=None) -> tuple[str, int]:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    return {"count": cmd_count, "limit": cmd_limit, "stats": cmd_stats, "table": cmd_table}[args.command](args), 0


def main(argv=None) -> int:
    try:
        out, code = run(argv)
    except SystemExit as exc:  # argparse
        return 2 if exc.code else 0
    except ForestPatError as exc:
        print(f"forestpat: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"forestpat: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
