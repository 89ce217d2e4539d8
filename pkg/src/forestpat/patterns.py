"""Permutation patterns and pattern sets.

Patterns are stored in one-line notation. A set is *covered* when it holds
both a pattern starting with 1 and a pattern starting with its own maximum;
otherwise it is uncovered, and the uncovered sets split further by which of
the two starts is missing.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError

CLASSICAL = "classical"
CONSECUTIVE = "consecutive"
KINDS = (CLASSICAL, CONSECUTIVE)

COVERED = "covered"
UNCOVERED_NO_1_START = "uncovered-no-1-start"
UNCOVERED_NO_MAX_START = "uncovered-no-max-start"
UNCOVERED_BOTH = "uncovered-both"


@dataclass(frozen=True, order=True)
class Pattern:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        k = len(vals)
        if k < 2:
            raise ParseError(f"pattern {vals!r}: length must be at least 2")
        if sorted(vals) != list(range(1, k + 1)):
            raise ParseError(f"pattern {vals!r} is not a permutation of 1..{k}")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self) -> str:
        if len(self) <= 9:
            return "".join(map(str, self.values))
        return "[" + ",".join(map(str, self.values)) + "]"

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        text = text.strip()
        if text.startswith("["):
            if not text.endswith("]"):
                raise ParseError(f"unterminated bracketed pattern {text!r}")
            parts = [p.strip() for p in text[1:-1].split(",") if p.strip()]
            if not all(p.isdigit() for p in parts):
                raise ParseError(f"bad bracketed pattern {text!r}")
            return cls(tuple(int(p) for p in parts))
        if not text.isdigit() or "0" in text:
            raise ParseError(f"bad pattern {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def starts_with_one(self) -> bool:
        return self.values[0] == 1

    @property
    def starts_with_max(self) -> bool:
        return self.values[0] == len(self.values)

    def complement(self) -> "Pattern":
        k = len(self.values)
        return Pattern(tuple(k + 1 - v for v in self.values))


def pattern_complement(p: Pattern) -> Pattern:
    return p.complement()


@dataclass(frozen=True)
class PatternSet:
    patterns: frozenset
    kind: str = CLASSICAL

    def __init__(self, patterns: Iterable = (), kind: str = CLASSICAL):
        if kind not in KINDS:
            raise ParseError(f"unknown avoidance kind {kind!r}")
        pats = []
        for p in patterns:
            if isinstance(p, Pattern):
                pats.append(p)
            elif isinstance(p, str):
                pats.append(Pattern.parse(p))
            else:
                pats.append(Pattern(tuple(p)))
        object.__setattr__(self, "patterns", frozenset(pats))
        object.__setattr__(self, "kind", kind)

    @classmethod
    def parse(cls, text: str, kind: str = CLASSICAL) -> "PatternSet":
        """Parse ``"213"``, ``"123,2413,3412"``, ``"[10,2,1,...],12"`` or ``"empty"``."""
        text = text.strip()
        if text in ("", "empty", "none", "{}"):
            return cls((), kind)
        tokens = re.findall(r"\[[^\]]*\]?|[^,\s]+", text)
        if not tokens:
            raise ParseError(f"cannot parse pattern set {text!r}")
        return cls([Pattern.parse(t) for t in tokens], kind)

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.patterns)

    def __contains__(self, item) -> bool:
        if isinstance(item, str):
            item = Pattern.parse(item)
        elif not isinstance(item, Pattern):
            item = Pattern(tuple(item))
        return item in self.patterns

    def sorted(self) -> list[Pattern]:
        # lexicographic on the text form keeps "123" < "2413" < "3412"
        return sorted(self.patterns, key=lambda p: (str(p), p.values))

    def describe(self) -> str:
        return ",".join(str(p) for p in self.sorted()) or "empty"

    def __str__(self) -> str:
        return self.describe()

    def complement(self) -> "PatternSet":
        return PatternSet([p.complement() for p in self.patterns], self.kind)

    def tuples(self) -> list[tuple[int, ...]]:
        return [p.values for p in self.sorted()]

    @property
    def has_one_start(self) -> bool:
        return any(p.starts_with_one for p in self.patterns)

    @property
    def has_max_start(self) -> bool:
        return any(p.starts_with_max for p in self.patterns)

    @property
    def is_covered(self) -> bool:
        return self.has_one_start and self.has_max_start

    @property
    def is_uncovered(self) -> bool:
        return not self.is_covered

    def same_patterns(self, other: "PatternSet") -> bool:
        return self.patterns == other.patterns


def classify(s: PatternSet) -> str:
    one, top = s.has_one_start, s.has_max_start
    if one and top:
        return COVERED
    if not one and not top:
        return UNCOVERED_BOTH
    return UNCOVERED_NO_1_START if top else UNCOVERED_NO_MAX_START
