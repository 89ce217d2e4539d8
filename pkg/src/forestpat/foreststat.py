"""Distributions of root labels, component counts and component sizes.

Exact pmfs come from enumeration up to the cap. Beyond it, uniform forests
are drawn by rejection: a uniform Prufer sequence over {0..n} gives a
uniform tree on n+1 vertices, which rooted at 0 is a uniform forest on
[n]; it is kept iff it avoids the set. The generator is numpy's PCG64,
seeded explicitly.

Anything these numbers suggest about limiting behaviour is exploratory.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import kernels
from .enumeration import FORESTS, TREES, enumerate_stats
from .errors import AcceptanceRateError, InsufficientDataError
from .patterns import CONSECUTIVE, PatternSet


@dataclass
class DiscretePMF:
    support: list
    probabilities: list  # Fractions for exact pmfs
    statistic: str = ""
    n: int = 0
    sample_size: int | None = None

    def __post_init__(self):
        if any(p < 0 for p in self.probabilities):
            raise ValueError("negative probability")
        if self.sample_size is None and self.probabilities and sum(self.probabilities) != 1:
            raise ValueError("exact pmf must sum to 1")

    @classmethod
    def from_counts(cls, counts: dict, statistic: str = "", n: int = 0,
                    sample_size: int | None = None) -> "DiscretePMF":
        total = sum(counts.values())
        if total == 0:
            raise InsufficientDataError(f"empty class: no objects for {statistic} at n={n}")
        pts = sorted(k for k, v in counts.items() if v)
        return cls(pts, [Fraction(counts[k], total) for k in pts], statistic, n, sample_size)

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.probabilities))

    def __getitem__(self, point) -> Fraction:
        return self.as_dict().get(point, Fraction(0))

    def csv_rows(self) -> list[str]:
        rows = []
        for x, p in zip(self.support, self.probabilities):
            p = Fraction(p)
            rows.append(f"{self.statistic},{self.n},{x},{p.numerator},{p.denominator},{float(p):.12g}")
        return rows


CSV_HEADER = "statistic,n,point,numerator,denominator,float"


def _hist(values: list) -> dict:
    return {i: v for i, v in enumerate(values) if v}


def root_label_dist(s: PatternSet, n: int, **kw) -> DiscretePMF:
    st = enumerate_stats(n, s, TREES, want_stats=True, **kw)
    return DiscretePMF.from_counts(_hist(st.root_labels), "root", n)


def component_count_dist(s: PatternSet, n: int, **kw) -> DiscretePMF:
    st = enumerate_stats(n, s, FORESTS, want_stats=True, **kw)
    return DiscretePMF.from_counts(_hist(st.components), "components", n)


@dataclass
class SizeProfile:
    n: int
    expected: dict  # k -> E[T_{S,n,k}]
    reference: dict  # k -> 1/k

    def csv_rows(self) -> list[str]:
        return [f"size,{self.n},{k},{v.numerator},{v.denominator},{float(v):.12g}"
                for k, v in sorted(self.expected.items())]


def component_size_profile(s: PatternSet, n: int, **kw) -> SizeProfile:
    st = enumerate_stats(n, s, FORESTS, want_stats=True, **kw)
    if st.total == 0:
        raise InsufficientDataError(f"no avoiding forests on [{n}]")
    exp = {k: Fraction(st.size_counts[k], st.total) for k in range(1, n + 1)}
    return SizeProfile(n, exp, {k: Fraction(1, k) for k in range(1, n + 1)})


# ---------------------------------------------------------------- sampling

@dataclass
class SampleRun:
    n: int
    seed: int
    samples: list  # parent tuples
    proposals: int

    @property
    def acceptance_rate(self) -> float:
        return len(self.samples) / self.proposals if self.proposals else 0.0

    def _pmf(self, statistic: str, values: Iterable[int]) -> DiscretePMF:
        c = Counter(values)
        total = len(self.samples)
        pts = sorted(c)
        return DiscretePMF(pts, [Fraction(c[k], total) for k in pts], statistic, self.n, total)

    def component_counts(self) -> DiscretePMF:
        return self._pmf("components", (sum(1 for p in par if p == 0) for par in self.samples))

    def root_labels(self) -> DiscretePMF:
        # for tree samples only: the unique root
        return self._pmf("root", (par.index(0) + 1 for par in self.samples if par.count(0) == 1))


def sample_forests(s: PatternSet, n: int, count: int, seed: int, *, batch: int = 4096,
                   min_acceptance: float = 1e-4, max_proposals: int | None = None,
                   trees: bool = False) -> SampleRun:
    """Uniform samples from the avoiding forests (or trees) on [n], by rejection."""
    rng = np.random.Generator(np.random.PCG64(seed))
    pats = s.tuples()
    consecutive = s.kind == CONSECUTIVE
    samples: list = []
    proposals = 0
    while len(samples) < count:
        rows = rng.integers(0, n + 1, size=(batch, max(n - 1, 0)), dtype=np.int64)
        for par in kernels.sample_batch(n, pats, consecutive, rows):
            proposals += 1
            if par is not None and (not trees or par.count(0) == 1):
                samples.append(par)
                if len(samples) == count:
                    break
        if proposals >= 1000 and len(samples) / proposals < min_acceptance:
            raise AcceptanceRateError(
                f"acceptance rate {len(samples) / proposals:.2e} below floor {min_acceptance:.2e}")
        if max_proposals is not None and proposals >= max_proposals:
            break
    return SampleRun(n, seed, samples, proposals)


def sample_forests_sharded(s: PatternSet, n: int, count: int, seed: int, workers: int = 2, **kw) -> SampleRun:
    """Split the seed into independent substreams; results merge in substream order."""
    kids = np.random.SeedSequence(seed).spawn(workers)
    per = [count // workers + (1 if i < count % workers else 0) for i in range(workers)]
    samples: list = []
    proposals = 0
    for child, c in zip(kids, per):
        run = sample_forests(s, n, c, int(child.generate_state(1)[0]), **kw)
        samples += run.samples
        proposals += run.proposals
    return SampleRun(n, seed, samples, proposals)


# ---------------------------------------------------------------- moments

@dataclass
class Moments:
    mean: Fraction
    variance: Fraction
    skewness: float | None
    excess_kurtosis: float | None


def moments_report(p: DiscretePMF) -> Moments:
    xs = [Fraction(x) for x in p.support]
    ps = [Fraction(q) for q in p.probabilities]
    total = sum(ps)
    ps = [q / total for q in ps]
    mean = sum(x * q for x, q in zip(xs, ps))
    var = sum((x - mean) ** 2 * q for x, q in zip(xs, ps))
    if var == 0:
        return Moments(mean, var, None, None)
    m3 = sum((x - mean) ** 3 * q for x, q in zip(xs, ps))
    m4 = sum((x - mean) ** 4 * q for x, q in zip(xs, ps))
    sd = math.sqrt(var)
    return Moments(mean, var, float(m3) / sd ** 3, float(m4 / var ** 2) - 3.0)
