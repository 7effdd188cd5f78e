"""Exhaustive counting over alternating permutations.

Members of each class are enumerated once per length into a numpy array;
pattern occurrences are then counted for all rows at once by looping over
position tuples. Results can be memoized on disk as one JSON document per
query, named by the sha256 of the canonical query string.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .pattern import ConstraintSpec, GeneralizedPattern, as_pattern, increasing, parse_pattern, position_tuples
from .perm import CapExceeded, ClassLabel, alternating_shapes, classify

ENGINE_VERSION = "altperm-oracle/1"
DEFAULT_N_CAP = 10
HARD_N_CAP = 12


@dataclass(frozen=True)
class OracleConfig:
    cap: int = DEFAULT_N_CAP
    cache_dir: Optional[Path] = None
    threads: int = 1

    def __post_init__(self):
        if not 0 <= self.cap <= HARD_N_CAP:
            raise ValueError(f"the enumeration cap must lie in 0..{HARD_N_CAP}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def parse_statistic(text: Optional[str]) -> Optional[str]:
    """Normalize 'rlmax', 'inc' or 'occ:<pattern>'."""
    if text is None:
        return None
    text = text.strip()
    if text in ("rlmax", "inc"):
        return text
    if text.startswith("occ:"):
        return "occ:" + str(parse_pattern(text[4:]))
    raise ValueError(f"unknown statistic {text!r}; expected rlmax, inc or occ:<pattern>")


@dataclass(frozen=True)
class CountQuery:
    n: int
    cls: ClassLabel
    constraints: tuple[ConstraintSpec, ...] = ()
    statistic: Optional[str] = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.cls is ClassLabel.NONE:
            raise ValueError("queries range over the alternation classes only")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "statistic", parse_statistic(self.statistic))

    def canonical(self) -> str:
        cons = ",".join(sorted(c.canonical() for c in self.constraints))
        stat = self.statistic or "-"
        return f"n={self.n};class={self.cls.value};constraints=[{cons}];stat={stat}"

    def without_statistic(self) -> "CountQuery":
        return CountQuery(self.n, self.cls, self.constraints, None)


@dataclass(frozen=True)
class DistributionTable:
    query: CountQuery
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def rows(self) -> list[tuple[int, int, int]]:
        """(n, stat_value, count) rows for CSV output."""
        return [(self.query.n, v, c) for v, c in sorted(self.counts.items())]


# -------------------------------------------------------------------------
# vectorized kernels


def occurrence_counts(rows: np.ndarray, t: GeneralizedPattern) -> np.ndarray:
    """Occurrences of t in every row of an (m, n) array of permutations."""
    m, n = rows.shape
    out = np.zeros(m, dtype=np.int64)
    if t.k > n or m == 0:
        return out
    flat = t.flat
    order = sorted(range(t.k), key=lambda i: flat[i])
    for idx in position_tuples(n, t):
        cols = [idx[i] for i in order]
        hit = rows[:, cols[0]] < rows[:, cols[1]] if t.k > 1 else np.ones(m, dtype=bool)
        for a, b in zip(cols[1:], cols[2:]):
            hit &= rows[:, a] < rows[:, b]
        out += hit
    return out


def rlmax_counts(rows: np.ndarray) -> np.ndarray:
    m, n = rows.shape
    if n == 0:
        return np.zeros(m, dtype=np.int64)
    suffix = np.maximum.accumulate(rows[:, ::-1], axis=1)[:, ::-1]
    later = np.concatenate([suffix[:, 1:], np.zeros((m, 1), dtype=rows.dtype)], axis=1)
    return (rows > later).sum(axis=1).astype(np.int64)


def inc_counts(rows: np.ndarray) -> np.ndarray:
    """Number of non-empty increasing subsequences of each row."""
    m, n = rows.shape
    ending = np.ones((m, n), dtype=np.int64)
    for i in range(n):
        for h in range(i):
            ending[:, i] += np.where(rows[:, h] < rows[:, i], ending[:, h], 0)
    return ending.sum(axis=1)


def statistic_values(rows: np.ndarray, stat: str) -> np.ndarray:
    if stat == "rlmax":
        return rlmax_counts(rows)
    if stat == "inc":
        return inc_counts(rows)
    if stat.startswith("occ:"):
        return occurrence_counts(rows, parse_pattern(stat[4:]))
    raise ValueError(f"unknown statistic {stat!r}")


# -------------------------------------------------------------------------
# the engine


class Oracle:
    def __init__(self, config: OracleConfig | None = None):
        self.config = config or OracleConfig()
        self._shapes: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._memo: dict[str, object] = {}

    # enumeration
    def _check(self, n: int) -> None:
        if n > self.config.cap:
            raise CapExceeded(f"n={n} exceeds the oracle cap of {self.config.cap}")

    def _all_shapes(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        if n not in self._shapes:
            perms = list(alternating_shapes(n, cap=HARD_N_CAP))
            rows = np.array(perms, dtype=np.int8).reshape(len(perms), n)
            labels = np.array([classify(p).value for p in perms])
            self._shapes[n] = (rows, labels)
        return self._shapes[n]

    def member_rows(self, n: int, cls: ClassLabel) -> np.ndarray:
        """Class members as an (m, n) int8 array, lexicographic order."""
        self._check(n)
        rows, labels = self._all_shapes(n)
        if n < 2:
            return rows if cls is ClassLabel.A else rows[:0]
        if cls is ClassLabel.A:
            mask = (labels == "UD") | (labels == "UU")
        else:
            mask = labels == cls.value
        return rows[mask]

    def _chunked(self, rows: np.ndarray, fn) -> np.ndarray:
        t = self.config.threads
        if t == 1 or len(rows) < 2 * t:
            return fn(rows)
        parts = np.array_split(rows, t)
        with ThreadPoolExecutor(max_workers=t) as pool:
            return np.concatenate(list(pool.map(fn, parts)))

    def constrained_rows(self, n: int, cls: ClassLabel, constraints: Sequence[ConstraintSpec]) -> np.ndarray:
        rows = self.member_rows(n, cls)
        for c in constraints:
            if len(rows) == 0:
                break
            counts = self._chunked(rows, lambda r, p=c.pattern: occurrence_counts(r, p))
            rows = rows[counts == c.count]
        return rows

    def values(self, n: int, cls: ClassLabel, constraints: Sequence[ConstraintSpec], stat: str) -> np.ndarray:
        rows = self.constrained_rows(n, cls, constraints)
        return self._chunked(rows, lambda r: statistic_values(r, stat))

    # disk cache
    def _cache_path(self, canon: str) -> Optional[Path]:
        if self.config.cache_dir is None:
            return None
        digest = hashlib.sha256(canon.encode()).hexdigest()
        return Path(self.config.cache_dir) / f"{digest}.json"

    def _load(self, canon: str):
        path = self._cache_path(canon)
        if path is None or not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
            if doc["query"] != canon or doc["engine_version"] != ENGINE_VERSION:
                return None
            return doc["result"]
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def _store(self, canon: str, result) -> None:
        path = self._cache_path(canon)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"query": canon, "result": result, "engine_version": ENGINE_VERSION,
               "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def _cached(self, canon: str, compute, valid):
        if canon in self._memo:
            return self._memo[canon]
        result = self._load(canon)
        if result is None or not valid(result):
            result = compute()
            self._store(canon, result)
        self._memo[canon] = result
        return result

    # public queries
    def count_exact(self, q: CountQuery) -> int:
        if q.statistic is not None:
            raise ValueError("count_exact takes a statistic-free query; use distribution()")
        self._check(q.n)
        return self._cached(
            q.canonical(),
            lambda: int(len(self.constrained_rows(q.n, q.cls, q.constraints))),
            lambda r: isinstance(r, int) and r >= 0,
        )

    def distribution(self, q: CountQuery) -> DistributionTable:
        if q.statistic is None:
            raise ValueError("distribution needs a statistic")
        self._check(q.n)

        def compute():
            vals = self.values(q.n, q.cls, q.constraints, q.statistic)
            uniq, cnt = np.unique(vals, return_counts=True)
            return {str(int(v)): int(c) for v, c in zip(uniq, cnt)}

        def valid(r):
            return isinstance(r, dict) and all(isinstance(c, int) and c > 0 for c in r.values())

        raw = self._cached(q.canonical(), compute, valid)
        return DistributionTable(q, {int(v): c for v, c in sorted(raw.items(), key=lambda kv: int(kv[0]))})

    def count(self, n: int, cls: ClassLabel, constraints: Sequence[ConstraintSpec] = ()) -> int:
        return self.count_exact(CountQuery(n, cls, tuple(constraints)))


_DEFAULT: Optional[Oracle] = None


def default_oracle() -> Oracle:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Oracle()
    return _DEFAULT


def count_exact(q: CountQuery, oracle: Oracle | None = None) -> int:
    return (oracle or default_oracle()).count_exact(q)


def distribution(q: CountQuery, oracle: Oracle | None = None) -> DistributionTable:
    return (oracle or default_oracle()).distribution(q)


def constraint_from_text(text: str, exactly: bool = False) -> ConstraintSpec:
    """'1-3-2' for avoidance, or '1-3-2:2' with exactly=True."""
    if exactly:
        pat, _, r = text.rpartition(":")
        if not pat:
            raise ValueError(f"expected <pattern>:<r>, got {text!r}")
        return ConstraintSpec.exactly(as_pattern(pat), int(r))
    return ConstraintSpec.avoid(as_pattern(text))


__all__ = [
    "ENGINE_VERSION", "OracleConfig", "CountQuery", "DistributionTable", "Oracle",
    "count_exact", "distribution", "default_oracle", "occurrence_counts", "rlmax_counts",
    "inc_counts", "statistic_values", "constraint_from_text", "increasing",
]
