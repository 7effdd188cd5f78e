"""Formula-vs-oracle verification and the discrepancy ledger.

Every check compares exact coefficients from the catalog (or a statistics
cell) with brute-force counts. The oracle is ground truth: a disagreement is
recorded with its first differing coefficient and never patched.
"""

from __future__ import annotations

import fnmatch
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import stats
from .formulas import DomainError, FamilyKey, constraints, domain_keys, raw_coefficients
from .oracle import ENGINE_VERSION, CountQuery, Oracle, OracleConfig

MATCH, MISMATCH, SKIP = "Match", "Mismatch", "DomainSkip"

# per-row fields that legitimately differ between identical runs
VOLATILE_FIELDS = ("runtime_s",)


@dataclass(frozen=True)
class FirstMismatch:
    n: int
    formula_value: str
    oracle_value: int
    m: Optional[int] = None  # y-exponent, statistics cells only


@dataclass
class VerificationReport:
    key: str
    n_range: tuple[int, int]
    status: str
    first_mismatch: Optional[FirstMismatch] = None
    runtime_s: float = 0.0
    detail: str = ""
    suspect: Optional[str] = None  # origin of the matching suspect entry

    def __post_init__(self):
        if (self.status == MISMATCH) != (self.first_mismatch is not None):
            raise ValueError("a Mismatch carries a first mismatch and nothing else does")

    def to_row(self) -> dict:
        row = asdict(self)
        row["n_range"] = list(self.n_range)
        row["engine_version"] = ENGINE_VERSION
        if self.status == MISMATCH:
            row["flag"] = "known-suspect" if self.suspect else "unexpected"
        else:
            row["flag"] = None
        return row


def _fmt(v: Fraction) -> str:
    return str(v)


# -------------------------------------------------------------------------
# single checks


def _verify_family(key: FamilyKey, lo: int, hi: int, oracle: Oracle) -> tuple[str, Optional[FirstMismatch], str]:
    raw = raw_coefficients(key, hi)
    cons = constraints(key)
    negative = sorted(n for n, v in raw.items() if n < 0 and v != 0)
    if negative:
        n = negative[0]
        return MISMATCH, FirstMismatch(n, _fmt(raw[n]), 0), "coefficient at a negative exponent"
    covered = [n for n in range(lo, hi + 1) if n in raw]
    for n in covered:
        got = oracle.count_exact(CountQuery(n, key.cls, cons))
        if raw[n] != got:
            return MISMATCH, FirstMismatch(n, _fmt(raw[n]), got), ""
    if key.form == "remark":
        return MATCH, None, f"statement covers n={covered[0]}..{covered[-1]}" if covered else "no n in range"
    return MATCH, None, ""


def _cell_series(cell: tuple, hi: int):
    if cell[0] == "RL":
        _, cls, k = cell
        if k is None:
            return stats.rlmax_gf(cls, hi)
        return stats.rlmax_fixed_k(k, hi)
    _, family, cls, a, variant = cell
    return stats.stat_gf(family, cls, a, hi, ywin=None, variant=variant)


def _verify_cell(text: str, lo: int, hi: int, oracle: Oracle) -> tuple[str, Optional[FirstMismatch], str]:
    cell = stats.parse_cell(text)
    try:
        s = _cell_series(cell, hi)
    except stats.UnsupportedStat as e:
        return SKIP, None, str(e)
    if cell[0] == "RL":
        want = stats.oracle_table("classical", cell[1], stats.Assignment("rlmax"), hi, oracle)
        if cell[2] is not None:
            k = cell[2]
            got = {n: s.coeff(n) for n in range(lo, hi + 1)}
            for n in range(lo, hi + 1):
                if got[n] != want.get((n, k), 0):
                    return MISMATCH, FirstMismatch(n, _fmt(got[n]), want.get((n, k), 0), k), ""
            return MATCH, None, ""
        got_t = stats.series_table(s, hi)
    else:
        _, family, cls, a, _ = cell
        want = stats.oracle_table(family, cls, a, hi, oracle)
        got_t = stats.series_table(s, hi)
    keys = sorted({k for k in set(got_t) | set(want) if lo <= k[0] <= hi})
    for n, m in keys:
        g, w = got_t.get((n, m), Fraction(0)), want.get((n, m), 0)
        if g != w:
            return MISMATCH, FirstMismatch(n, _fmt(g), w, m), ""
    return MATCH, None, ""


def verify(key: FamilyKey | str, n_max: int, n_min: int = 0, oracle: Oracle | None = None) -> VerificationReport:
    """Compare a catalog key or statistics cell against brute force on n_min..n_max."""
    oracle = oracle or Oracle()
    if n_max > oracle.config.cap:
        raise ValueError(f"n_max={n_max} exceeds the oracle cap {oracle.config.cap}")
    text = str(key)
    t0 = time.perf_counter()
    if text.startswith(("S:", "RL:")):
        status, first, detail = _verify_cell(text, n_min, n_max, oracle)
    else:
        fk = key if isinstance(key, FamilyKey) else FamilyKey.parse(text)
        try:
            status, first, detail = _verify_family(fk, n_min, n_max, oracle)
        except DomainError as e:
            status, first, detail = SKIP, None, str(e)
    return VerificationReport(text, (n_min, n_max), status, first, round(time.perf_counter() - t0, 4), detail)


# -------------------------------------------------------------------------
# suspects


@dataclass(frozen=True)
class Suspect:
    pattern: str
    origin: str
    note: str

    def matches(self, key: str) -> bool:
        return fnmatch.fnmatchcase(key, self.pattern)


def load_suspects(path: Path | str | None = None) -> list[Suspect]:
    if path is None:
        text = resources.files("altperm").joinpath("data/suspects.json").read_text()
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    return [Suspect(e["key"], e["origin"], e.get("note", "")) for e in doc["suspects"]]


def suspect_origin(key: str, suspects: Sequence[Suspect]) -> Optional[str]:
    for s in suspects:
        if s.matches(key):
            return s.origin
    return None


# -------------------------------------------------------------------------
# the suite


@dataclass
class SuiteConfig:
    families: tuple[int, ...] = tuple(range(1, 11))
    k_min: int = 2
    k_max: int = 5
    r_max: int = 2
    n_max: int = 9
    # families checked further than n_max
    n_max_overrides: dict[int, int] = field(default_factory=lambda: {1: 10, 7: 10, 10: 10})
    include_stats: bool = True
    stats_n_max: int = 9
    assignments: tuple[str, ...] = ("length", "mark=2", "mark=3", "mark=4", "rlmax", "inc")
    suspects: Optional[str] = None
    threads: int = 1
    cache_dir: Optional[str] = None

    @classmethod
    def from_file(cls, path: Path | str) -> "SuiteConfig":
        doc = json.loads(Path(path).read_text())
        if "families" in doc:
            doc["families"] = tuple(doc["families"])
        if "assignments" in doc:
            doc["assignments"] = tuple(doc["assignments"])
        if "n_max_overrides" in doc:
            doc["n_max_overrides"] = {int(k): v for k, v in doc["n_max_overrides"].items()}
        return cls(**doc)

    def n_for(self, family: int) -> int:
        return self.n_max_overrides.get(family, self.n_max)

    def checks(self) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        for f in self.families:
            for key in domain_keys(f, k_max=self.k_max, r_max=self.r_max):
                if key.k is not None and key.k < self.k_min and key.form != "remark":
                    continue
                out.append((str(key), self.n_for(f)))
        if self.include_stats:
            assigns = [stats.Assignment.parse(a) for a in self.assignments]
            for cell in stats.cells(assigns):
                out.append((cell, self.stats_n_max))
        return out


@dataclass
class SuiteResult:
    reports: list[VerificationReport]

    @property
    def unexpected(self) -> list[VerificationReport]:
        return [r for r in self.reports if r.status == MISMATCH and r.suspect is None]

    @property
    def exit_code(self) -> int:
        return 1 if self.unexpected else 0

    def summary(self) -> dict[str, int]:
        out = {MATCH: 0, MISMATCH: 0, SKIP: 0, "known-suspect": 0, "unexpected": 0}
        for r in self.reports:
            out[r.status] += 1
        out["known-suspect"] = sum(1 for r in self.reports if r.status == MISMATCH and r.suspect)
        out["unexpected"] = len(self.unexpected)
        return out


def run_checks(checks: Iterable[tuple[str, int]], oracle: Oracle, suspects: Sequence[Suspect],
               threads: int = 1) -> SuiteResult:
    checks = list(checks)

    def one(item):
        key, n = item
        rep = verify(key, n, oracle=oracle)
        if rep.status == MISMATCH:
            rep.suspect = suspect_origin(key, suspects)
        return rep

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(one, checks))
    else:
        reports = [one(c) for c in checks]
    return SuiteResult(reports)


def write_ledger(result: SuiteResult, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for rep in result.reports:
            fh.write(json.dumps(rep.to_row(), sort_keys=True) + "\n")


def stable_rows(path: Path | str) -> list[dict]:
    """Ledger rows with the volatile fields removed, for run-to-run comparison."""
    rows = []
    for line in Path(path).read_text().splitlines():
        row = json.loads(line)
        for f in VOLATILE_FIELDS:
            row.pop(f, None)
        rows.append(row)
    return rows


def run_suite(config: SuiteConfig | None = None, ledger: Path | str | None = None,
              oracle: Oracle | None = None) -> SuiteResult:
    config = config or SuiteConfig()
    if oracle is None:
        cap = max([config.n_for(f) for f in config.families] + [config.stats_n_max])
        oracle = Oracle(OracleConfig(cap=cap, cache_dir=Path(config.cache_dir) if config.cache_dir else None))
    result = run_checks(config.checks(), oracle, load_suspects(config.suspects), config.threads)
    if ledger is not None:
        write_ledger(result, ledger)
    return result
