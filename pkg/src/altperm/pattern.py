"""Dash-notation generalized (vincular) patterns and their occurrences."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .perm import Permutation


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class GeneralizedPattern:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.blocks or any(len(b) == 0 for b in self.blocks):
            raise PatternError("pattern blocks must be non-empty")
        flat = self.flat
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise PatternError(f"pattern letters {flat} are not a permutation of 1..{len(flat)}")

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(v for b in self.blocks for v in b)

    @property
    def k(self) -> int:
        return len(self.flat)

    def is_classical(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def __str__(self) -> str:
        return "-".join("".join(str(v) for v in b) for b in self.blocks)


def parse_pattern(text: str) -> GeneralizedPattern:
    text = text.strip()
    if not text:
        raise PatternError("empty pattern")
    blocks = []
    seen: set[int] = set()
    for token in text.split("-"):
        if token == "":
            raise PatternError(f"empty block in {text!r}")
        block = []
        for ch in token:
            if not ch.isdigit() or ch == "0":
                raise PatternError(f"illegal character {ch!r} in block {token!r}")
            v = int(ch)
            if v in seen:
                raise PatternError(f"repeated value {v} in block {token!r}")
            seen.add(v)
            block.append(v)
        blocks.append(tuple(block))
    k = len(seen)
    missing = sorted(set(range(1, k + 1)) - seen)
    if missing:
        raise PatternError(f"values {missing} missing from {text!r}")
    return GeneralizedPattern(tuple(blocks))


def as_pattern(t) -> GeneralizedPattern:
    return t if isinstance(t, GeneralizedPattern) else parse_pattern(t)


def increasing(j: int) -> GeneralizedPattern:
    """1-2-...-j"""
    return GeneralizedPattern(tuple((i,) for i in range(1, j + 1)))


def prefixed(tau: str, k: int) -> GeneralizedPattern:
    """tau-3-4-...-k for a two-letter prefix tau such as '12' or '2-1'."""
    return parse_pattern(tau + "".join(f"-{i}" for i in range(3, k + 1)))


def position_tuples(n: int, t: GeneralizedPattern):
    """Index tuples i_1 < ... < i_k respecting block adjacency.

    Block starts are chosen freely among n - sum(b_j - 1) slots and then
    spread out by the block lengths.
    """
    sizes = [len(b) for b in t.blocks]
    free = n - sum(sizes) + len(sizes)
    if free < len(sizes):
        return
    for starts in itertools.combinations(range(free), len(sizes)):
        idx = []
        offset = 0
        for s, b in zip(starts, sizes):
            base = s + offset
            idx.extend(range(base, base + b))
            offset += b - 1
        yield tuple(idx)


def occurrences(p: Sequence[int], t) -> int:
    t = as_pattern(t)
    flat = t.flat
    k = len(flat)
    order = sorted(range(k), key=lambda i: flat[i])
    count = 0
    for idx in position_tuples(len(p), t):
        vals = [p[idx[i]] for i in order]
        if all(vals[i] < vals[i + 1] for i in range(k - 1)):
            count += 1
    return count


@dataclass(frozen=True)
class ConstraintSpec:
    """Occurrence count of a pattern must equal `count` (0 means avoidance)."""
    pattern: GeneralizedPattern
    count: int = 0

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("occurrence count must be non-negative")

    @classmethod
    def avoid(cls, t) -> "ConstraintSpec":
        return cls(as_pattern(t), 0)

    @classmethod
    def exactly(cls, t, r: int) -> "ConstraintSpec":
        return cls(as_pattern(t), r)

    def __str__(self) -> str:
        return f"avoid {self.pattern}" if self.count == 0 else f"exactly {self.count} of {self.pattern}"

    def canonical(self) -> str:
        return f"{self.pattern}={self.count}"


def satisfies(p: Permutation, c: ConstraintSpec) -> bool:
    return occurrences(p, c.pattern) == c.count
