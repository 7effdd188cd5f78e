"""Permutations of {1..n} and the four alternation classes."""

from __future__ import annotations

import enum
import itertools
from typing import Iterator

Permutation = tuple[int, ...]

DEFAULT_CAP = 12


class CapExceeded(ValueError):
    pass


class ClassLabel(enum.Enum):
    UD = "UD"
    UU = "UU"
    DU = "DU"
    DD = "DD"
    A = "A"
    NONE = "-"

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        aliases = {
            "ud": cls.UD, "updown": cls.UD, "uu": cls.UU, "upup": cls.UU,
            "du": cls.DU, "downup": cls.DU, "dd": cls.DD, "downdown": cls.DD,
            "a": cls.A, "alt": cls.A, "alternating": cls.A,
        }
        try:
            return aliases[text.strip().lower().replace("-", "").replace("_", "")]
        except KeyError:
            raise ValueError(f"unknown class label {text!r}") from None


FOUR = (ClassLabel.UD, ClassLabel.UU, ClassLabel.DU, ClassLabel.DD)

_BY_SIGNS = {
    (1, 1): ClassLabel.UU,
    (1, -1): ClassLabel.UD,
    (-1, 1): ClassLabel.DU,
    (-1, -1): ClassLabel.DD,
}


def _check_cap(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError("length must be non-negative")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap of {cap}; raise the cap explicitly to go further")


def permutations_of(n: int, cap: int = DEFAULT_CAP) -> Iterator[Permutation]:
    """All n! permutations of 1..n in lexicographic order."""
    _check_cap(n, cap)
    return itertools.permutations(range(1, n + 1))


def classify(p: Permutation) -> ClassLabel:
    n = len(p)
    if n < 2:
        return ClassLabel.A
    signs = [1 if p[i + 1] > p[i] else -1 for i in range(n - 1)]
    if any(signs[i] == signs[i + 1] for i in range(n - 2)):
        return ClassLabel.NONE
    return _BY_SIGNS[(signs[0], signs[-1])]


def in_class(p: Permutation, c: ClassLabel) -> bool:
    got = classify(p)
    if c is ClassLabel.A:
        return got in (ClassLabel.A, ClassLabel.UU, ClassLabel.UD)
    return got is c


def alternating_shapes(n: int, cap: int = DEFAULT_CAP) -> Iterator[Permutation]:
    """Permutations whose consecutive comparisons strictly alternate, in lexicographic order.

    Backtracking prunes any prefix that breaks alternation, so this visits
    roughly 2*E_n leaves instead of n!.
    """
    _check_cap(n, cap)
    if n < 2:
        yield tuple(range(1, n + 1))
        return
    used = [False] * (n + 1)
    pref: list[int] = []

    def rec(last_sign: int) -> Iterator[Permutation]:
        if len(pref) == n:
            yield tuple(pref)
            return
        prev = pref[-1]
        for v in range(1, n + 1):
            if used[v]:
                continue
            s = 1 if v > prev else -1
            if s == last_sign:
                continue
            used[v] = True
            pref.append(v)
            yield from rec(s)
            pref.pop()
            used[v] = False

    for first in range(1, n + 1):
        used[first] = True
        pref.append(first)
        yield from rec(0)
        pref.pop()
        used[first] = False


def members(n: int, c: ClassLabel, cap: int = DEFAULT_CAP) -> list[Permutation]:
    if c is ClassLabel.NONE:
        raise ValueError("members() is defined for the alternation classes only")
    if n < 2:
        _check_cap(n, cap)
        return [tuple(range(1, n + 1))] if c is ClassLabel.A else []
    return [p for p in alternating_shapes(n, cap) if in_class(p, c)]


def reverse(p: Permutation) -> Permutation:
    return tuple(reversed(p))
