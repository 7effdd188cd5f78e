from fractions import Fraction

import pytest

from altperm.formulas import (
    DomainError,
    FamilyKey,
    FormulaAnomaly,
    binomial,
    catalan,
    coefficients,
    constraints,
    domain_keys,
    fibonacci,
    gf,
    lucas,
    number,
    raw_coefficients,
)
from altperm.oracle import CountQuery
from altperm.perm import ClassLabel
from altperm.series import LaurentSeries

N = 24


def test_numbers():
    assert catalan(4) == 14
    assert catalan(Fraction(1, 2)) == 0 and catalan(-1) == 0
    assert fibonacci(0) == 0 and fibonacci(5) == 5
    assert lucas(0) == 2 and lucas(1) == 1 and lucas(5) == 11
    assert binomial(4, Fraction(3, 2)) == 0
    assert binomial(4, 5) == 0 and binomial(4, -1) == 0 and binomial(6, 2) == 15
    assert number("catalan", 3) == 5
    with pytest.raises(ValueError):
        number("bell", 3)


@pytest.mark.parametrize("text", [
    "F1:UD", "F2:A:k=4:kernel", "F3:DD:tau=2-1:k=3", "F6:UU:tau=231:r=2", "F4:DU:k=3:alt", "F2:A:k=5:remark",
])
def test_key_round_trip(text):
    key = FamilyKey.parse(text)
    assert str(key) == text
    assert FamilyKey.parse(str(key)) == key


@pytest.mark.parametrize("text", ["UD", "G1:UD", "Fx:UD", "F2:UD:q=3", "F2:XY:k=3"])
def test_key_parse_errors(text):
    with pytest.raises(ValueError):
        FamilyKey.parse(text)


@pytest.mark.parametrize("text", [
    "F11:UD",            # no such family
    "F2:UD",             # k missing
    "F1:UD:k=3",         # k does not apply
    "F2:UD:k=1",         # below the stated range
    "F6:DU:tau=123:r=1",  # class not covered
    "F6:UD:tau=231:r=0",
    "F10:UD:r=4",
    "F9:A:k=3",
    "F8:A:tau=2-1:k=3",
    "F4:A:k=2",
    "F5:A:tau=2-1:k=3:kernel",
    "F2:UD:k=3:kernel",
    "F2:A:k=4:remark",
])
def test_domain_errors(text):
    with pytest.raises(DomainError):
        gf(text, 6)


def test_f1_up_up_equals_down_down():
    assert gf("F1:UU", N).equal_to_order(gf("F1:DD", N), N)


@pytest.mark.parametrize("k", range(2, 9))
def test_f2_kernel_agrees_with_display(k):
    assert gf(f"F2:A:k={k}", N).equal_to_order(gf(f"F2:A:k={k}:kernel", N), N)


@pytest.mark.parametrize("tau", ["12", "1-2"])
@pytest.mark.parametrize("cls", ["UD", "UU", "DU", "DD", "A"])
def test_f3_two_letter_prefix_reduces_to_f2(tau, cls):
    # avoiding 1-3-2 forces every 12-3-...-k or 1-2-3-...-k occurrence
    # to come with a plain increasing one and vice versa
    for k in (3, 4):
        a = gf(f"F3:{cls}:tau={tau}:k={k}", 16)
        b = gf(f"F2:{cls}:k={k}", 16)
        assert a.equal_to_order(b, 16)


@pytest.mark.parametrize("tau", ["12", "21", "1-2", "2-1"])
def test_f5_down_up_is_down_down_over_x(tau):
    for k in (3, 4, 5):
        dd = gf(f"F5:DD:tau={tau}:k={k}", 18)
        du = gf(f"F5:DU:tau={tau}:k={k}", 17)
        assert (dd / LaurentSeries.monomial(1, 18)).equal_to_order(du, 16)


def test_f10_up_down_partitions_class(oracle):
    # for small n no up-down permutation has more than three 1-3-2 occurrences,
    # so r = 0..3 exhaust the class
    for n in range(0, 9):
        dist = oracle.distribution(CountQuery(n, ClassLabel.UD, (), "occ:1-3-2"))
        if max(dist.counts, default=0) > 3:
            break
        total = sum(raw_coefficients(f"F10:UD:r={r}", n)[n] for r in range(4))
        assert total == dist.total
    else:
        pytest.fail("expected some n with more than three occurrences")


def test_anomaly_raised_for_fractional_display():
    raw = raw_coefficients("F10:UU:r=3", 6)
    assert any(n < 0 or v.denominator != 1 for n, v in raw.items())
    with pytest.raises(FormulaAnomaly):
        coefficients("F10:UU:r=3", 6)


def test_coefficients_integer_table():
    t = coefficients("F1:UD", 9)
    assert [t.values[n] for n in range(10)] == [0, 0, 0, 1, 0, 2, 0, 5, 0, 14]
    assert all(isinstance(v, int) for v in t.values.values())


def test_remark_covers_only_stated_lengths():
    raw = raw_coefficients("F2:A:k=5:remark", 12)
    assert raw and all(n >= 0 for n in raw)
    with pytest.raises(DomainError):
        gf("F2:A:k=5:remark", 6)


@pytest.mark.parametrize("text, want", [
    ("F1:UD", ["avoid 1-3-2"]),
    ("F2:UD:k=3", ["avoid 1-3-2", "avoid 1-2-3"]),
    ("F3:UD:tau=cyc:k=4", ["avoid 1-3-2", "avoid 2-3-4-1"]),
    ("F3:UD:tau=21:k=4", ["avoid 1-3-2", "avoid 21-3-4"]),
    ("F4:UD:k=3", ["avoid 1-3-2", "exactly 1 of 1-2-3"]),
    ("F5:UD:tau=2-1:k=3", ["avoid 1-3-2", "exactly 1 of 2-1-3"]),
    ("F6:UD:tau=213:r=2", ["avoid 1-3-2", "exactly 2 of 213"]),
    ("F7:UD", ["exactly 1 of 1-3-2"]),
    ("F8:UD:tau=12:k=4", ["exactly 1 of 1-3-2", "avoid 12-3-4"]),
    ("F9:UD:k=3", ["exactly 1 of 1-3-2", "exactly 1 of 1-2-3"]),
    ("F10:UD:r=2", ["exactly 2 of 1-3-2"]),
])
def test_constraint_translation(text, want):
    got = constraints(FamilyKey.parse(text))
    assert [describe(c) for c in got] == want


def describe(c):
    if c.count == 0:
        return f"avoid {c.pattern}"
    return f"exactly {c.count} of {c.pattern}"


def test_domain_keys_are_valid_and_sorted_stably():
    for f in range(1, 11):
        keys = domain_keys(f, k_max=4)
        assert keys, f
        for key in keys:
            constraints(key)
        assert len(set(keys)) == len(keys)
