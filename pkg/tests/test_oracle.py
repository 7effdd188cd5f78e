import json
from math import factorial

import pytest

from altperm.oracle import (
    CountQuery,
    Oracle,
    OracleConfig,
    constraint_from_text,
    inc_counts,
    occurrence_counts,
    rlmax_counts,
)
from altperm.pattern import ConstraintSpec, parse_pattern
from altperm.perm import CapExceeded, ClassLabel, alternating_shapes, permutations_of

import numpy as np

A, UD, UU, DU, DD = ClassLabel.A, ClassLabel.UD, ClassLabel.UU, ClassLabel.DU, ClassLabel.DD
AVOID132 = constraint_from_text("1-3-2")
EULER = [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521]


def test_count_examples(oracle):
    assert oracle.count_exact(CountQuery(6, A, (AVOID132,))) == 5
    assert oracle.count_exact(CountQuery(3, UD, (AVOID132,))) == 1
    assert oracle.count_exact(CountQuery(5, UD, (constraint_from_text("1-3-2:1", exactly=True),))) == 4


def test_witnesses_at_six(oracle):
    rows = oracle.constrained_rows(6, A, (AVOID132,))
    got = {"".join(map(str, r)) for r in rows}
    assert got == {"452316", "342516", "562314", "563412", "453612"}


def test_distribution_examples(oracle):
    assert oracle.distribution(CountQuery(3, UD, (AVOID132,), "rlmax")).counts == {2: 1}
    assert oracle.distribution(CountQuery(2, UU, (AVOID132,), "rlmax")).counts == {1: 1}
    assert oracle.distribution(CountQuery(7, UD, (AVOID132,), "occ:1-2-3")).total == 5


def test_euler_numbers(oracle):
    # UD and UU together are the up-first alternating permutations
    for n in range(2, 11):
        assert oracle.count_exact(CountQuery(n, A)) == EULER[n]


def test_class_partition(oracle):
    for n in range(2, 9):
        total = sum(oracle.count_exact(CountQuery(n, c)) for c in (UD, UU, DU, DD))
        shapes = sum(1 for _ in alternating_shapes(n))
        assert total == shapes == 2 * EULER[n]


@pytest.mark.parametrize("stat", ["rlmax", "inc", "occ:1-2-3", "occ:12-3"])
@pytest.mark.parametrize("cls", [UD, UU, DU, DD, A])
def test_marginalization(oracle, stat, cls):
    for n in (5, 6, 7):
        q = CountQuery(n, cls, (AVOID132,), stat)
        assert oracle.distribution(q).total == oracle.count_exact(q.without_statistic())


def test_cap():
    small = Oracle(OracleConfig(cap=5))
    with pytest.raises(CapExceeded):
        small.count_exact(CountQuery(6, A))
    with pytest.raises(ValueError):
        OracleConfig(cap=13)


def test_query_validation():
    with pytest.raises(ValueError):
        CountQuery(-1, A)
    with pytest.raises(ValueError):
        CountQuery(3, ClassLabel.NONE)
    with pytest.raises(ValueError):
        CountQuery(3, A, (), "descents")
    with pytest.raises(ValueError):
        Oracle().count_exact(CountQuery(3, A, (), "rlmax"))


def test_canonical_ignores_constraint_order():
    b = constraint_from_text("1-2-3")
    assert CountQuery(5, A, (AVOID132, b)).canonical() == CountQuery(5, A, (b, AVOID132)).canonical()


def test_cache_transparency(tmp_path):
    cold = Oracle(OracleConfig(cap=8, cache_dir=tmp_path))
    q = CountQuery(8, UD, (AVOID132,))
    d = CountQuery(8, UU, (AVOID132,), "inc")
    first = (cold.count_exact(q), cold.distribution(d).counts)
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == 2
    doc = json.loads(files[0].read_text())
    assert set(doc) == {"query", "result", "engine_version", "timestamp"}
    warm = Oracle(OracleConfig(cap=8, cache_dir=tmp_path))
    assert (warm.count_exact(q), warm.distribution(d).counts) == first
    fresh = Oracle(OracleConfig(cap=8))
    assert (fresh.count_exact(q), fresh.distribution(d).counts) == first


def test_corrupt_cache_is_recomputed(tmp_path):
    q = CountQuery(7, A, (AVOID132,))
    o = Oracle(OracleConfig(cap=8, cache_dir=tmp_path))
    want = o.count_exact(q)
    (path,) = tmp_path.glob("*.json")
    path.write_text("{not json")
    assert Oracle(OracleConfig(cap=8, cache_dir=tmp_path)).count_exact(q) == want
    # a well-formed document that lies about its query is not trusted either
    doc = json.loads(path.read_text())
    doc["result"], doc["query"] = 999, "something else"
    path.write_text(json.dumps(doc))
    assert Oracle(OracleConfig(cap=8, cache_dir=tmp_path)).count_exact(q) == want
    doc = json.loads(path.read_text())
    doc["result"] = -4
    path.write_text(json.dumps(doc))
    assert Oracle(OracleConfig(cap=8, cache_dir=tmp_path)).count_exact(q) == want


def test_threads_do_not_change_results():
    one = Oracle(OracleConfig(cap=9))
    four = Oracle(OracleConfig(cap=9, threads=4))
    for cls in (UD, UU, A):
        q = CountQuery(9, cls, (AVOID132,), "occ:1-2-3")
        assert one.distribution(q).counts == four.distribution(q).counts
        q2 = CountQuery(9, cls, (constraint_from_text("1-3-2:2", exactly=True),))
        assert one.count_exact(q2) == four.count_exact(q2)


def test_kernels_against_direct_scans():
    perms = list(permutations_of(6))
    rows = np.array(perms, dtype=np.int8)
    pat = parse_pattern("1-3-2")
    occ = occurrence_counts(rows, pat)
    rl = rlmax_counts(rows)
    inc = inc_counts(rows)
    for p, o, r, i in zip(perms, occ, rl, inc):
        n = len(p)
        direct_occ = sum(1 for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)
                         if p[a] < p[c] < p[b])
        assert o == direct_occ
        assert r == sum(1 for a in range(n) if all(p[a] > p[b] for b in range(a + 1, n)))
        assert i == sum(1 for mask in range(1, 2 ** n)
                        if _increasing([p[j] for j in range(n) if mask >> j & 1]))


def _increasing(xs):
    return all(a < b for a, b in zip(xs, xs[1:]))


def test_constraint_text():
    c = constraint_from_text("12-3:2", exactly=True)
    assert c == ConstraintSpec.exactly(parse_pattern("12-3"), 2)
    with pytest.raises(ValueError):
        constraint_from_text("12-3", exactly=True)
