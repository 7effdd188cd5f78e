from fractions import Fraction

import pytest

from altperm.cheb import (
    CFDepthError,
    CFSpec,
    cf_eval,
    chebyshev_u,
    default_depth,
    r_series,
    reversed_u,
    u_half,
)
from altperm.series import BiSeries, LaurentSeries


def test_chebyshev_u_examples():
    assert chebyshev_u(-1).coeffs == ()
    assert chebyshev_u(0).coeffs == (1,)
    assert chebyshev_u(1).coeffs == (0, 2)
    assert chebyshev_u(2).coeffs == (-1, 0, 4)
    assert chebyshev_u(3).coeffs == (0, -4, 0, 8)
    assert chebyshev_u(4)(Fraction(1, 2)) == -1
    with pytest.raises(ValueError):
        chebyshev_u(-2)


def test_chebyshev_u_at_one():
    for r in range(8):
        assert chebyshev_u(r)(1) == r + 1


def test_reversed_u_examples():
    assert reversed_u(-1).coeffs == ()
    assert reversed_u(0).coeffs == (1,)
    assert reversed_u(1).coeffs == (1,)
    assert reversed_u(2).coeffs == (1, 0, -1)
    assert reversed_u(3).coeffs == (1, 0, -2)
    assert reversed_u(4).coeffs == (1, 0, -3, 0, 1)


@pytest.mark.parametrize("m", range(0, 11))
def test_reversed_u_matches_definition(m):
    # x^m U_m(1/(2x)) = sum_i c_i x^(m-i) / 2^i
    dense = [Fraction(0)] * (m + 1)
    for i, c in enumerate(chebyshev_u(m).coeffs):
        dense[m - i] += c / 2 ** i
    assert reversed_u(m).coeffs == tuple(dense[: reversed_u(m).degree + 1])
    assert all(c == 0 for c in dense[reversed_u(m).degree + 1:])
    order = 12
    lifted = u_half(m, order) * LaurentSeries.monomial(m, order)
    assert lifted.equal_to_order(reversed_u(m).to_series(order))


def test_r_series_examples():
    assert r_series(0, 6).is_zero()
    assert r_series(1, 6).coefficients() == [1, 0, 0, 0, 0, 0, 0]
    assert r_series(2, 6).coefficients() == [1] * 7
    assert r_series(4, 6).coefficients()[:5] == [1, 1, 2, 5, 13]


def test_r4_closed_form():
    x = LaurentSeries.monomial(1, 10)
    assert r_series(4, 10).equal_to_order((1 - 2 * x) / (1 - 3 * x + x * x), 10)


@pytest.mark.parametrize("k", range(1, 11))
def test_r_series_recursion(k):
    order = 20
    x = LaurentSeries.monomial(1, order)
    prod = r_series(k, order) * (1 - x * r_series(k - 1, order))
    assert prod.equal_to_order(LaurentSeries.const(1, order), order)


def test_r_series_stabilizes_to_catalan():
    from altperm.series import catalan_series
    assert r_series(12, 10).equal_to_order(catalan_series(10), 10)


def _length_rule(d):
    return ((2, 0), (1, 0), (1, 0))


def test_cf_single_level_closed_form():
    order = 12
    got = cf_eval(CFSpec(1, _length_rule), order, check=False)
    q = BiSeries.monomial(1, 0, order)
    want = q.mul_monomial(2, 0) / (1 - q.mul_monomial(1, 0))
    assert got == want


def test_cf_length_only_gives_odd_catalans():
    s = cf_eval(CFSpec(default_depth(12), _length_rule), 12).marginal()
    assert [s.coeff(e) for e in (3, 5, 7, 9, 11)] == [1, 2, 5, 14, 42]


def test_cf_depth_stability_check():
    cf_eval(CFSpec(default_depth(16), _length_rule), 16)
    with pytest.raises(CFDepthError):
        cf_eval(CFSpec(1, _length_rule), 16)


def test_cf_rejects_constant_levels():
    with pytest.raises(ValueError):
        cf_eval(CFSpec(2, lambda d: ((0, 0), (1, 0), (1, 0))), 6, check=False)
    with pytest.raises(ValueError):
        CFSpec(0, _length_rule)
