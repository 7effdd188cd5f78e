"""Truncated Laurent series and bivariate (x, y) series over exact rationals.

A LaurentSeries stores the coefficients of x^min_exp, x^(min_exp+1), ...
and an order N past which nothing is known. Arithmetic tracks N
conservatively, so a coefficient is only ever read when it is trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

DEFAULT_ORDER = 24

Scalar = Union[int, Fraction]


class SeriesOrderError(IndexError):
    """A coefficient beyond the truncation order was requested."""


class WindowError(ArithmeticError):
    """A y-window truncation could not be shown to be exact."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


@dataclass(frozen=True)
class LaurentSeries:
    min_exp: int
    coeffs: tuple[Fraction, ...]
    order: int

    # construction ---------------------------------------------------------

    @classmethod
    def make(cls, min_exp: int, coeffs: Iterable, order: int) -> "LaurentSeries":
        cs = [_frac(c) for c in coeffs]
        keep = max(0, order - min_exp + 1)
        cs = cs[:keep]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            return cls(order + 1, (), order)
        return cls(min_exp + lead, tuple(cs), order)

    @classmethod
    def from_list(cls, coeffs: Sequence, order: int | None = None, min_exp: int = 0) -> "LaurentSeries":
        if order is None:
            order = min_exp + len(coeffs) - 1
        return cls.make(min_exp, coeffs, order)

    @classmethod
    def const(cls, c: Scalar, order: int = DEFAULT_ORDER) -> "LaurentSeries":
        return cls.make(0, [c], order)

    @classmethod
    def monomial(cls, e: int, order: int = DEFAULT_ORDER, c: Scalar = 1) -> "LaurentSeries":
        return cls.make(e, [c], order)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "LaurentSeries":
        return cls(order + 1, (), order)

    # inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient (order+1 if none is known)."""
        return self.min_exp

    def coeff(self, e: int) -> Fraction:
        if e > self.order:
            raise SeriesOrderError(f"coefficient of x^{e} requested but series is only known to order {self.order}")
        i = e - self.min_exp
        if i < 0 or i >= len(self.coeffs):
            return Fraction(0)
        return self.coeffs[i]

    def coefficients(self, lo: int = 0, hi: int | None = None) -> list[Fraction]:
        hi = self.order if hi is None else hi
        return [self.coeff(e) for e in range(lo, hi + 1)]

    def truncate(self, order: int) -> "LaurentSeries":
        if order >= self.order:
            return self
        return LaurentSeries.make(self.min_exp, self.coeffs, order)

    def equal_to_order(self, other: "LaurentSeries", order: int | None = None) -> bool:
        n = min(self.order, other.order) if order is None else order
        lo = min(self.min_exp, other.min_exp)
        return all(self.coeff(e) == other.coeff(e) for e in range(lo, n + 1))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{self.min_exp + i}")
        body = " + ".join(terms) if terms else "0"
        return f"LaurentSeries({body} + O(x^{self.order + 1}))"

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "LaurentSeries | None":
        if isinstance(other, LaurentSeries):
            return other
        return None

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.min_exp, tuple(-c for c in self.coeffs), self.order)

    def _add(self, other: "LaurentSeries", sign: int) -> "LaurentSeries":
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        if lo > order:
            return LaurentSeries.zero(order)
        out = [Fraction(0)] * (order - lo + 1)
        for i, c in enumerate(self.coeffs):
            e = self.min_exp + i - lo
            if e < len(out):
                out[e] += c
        for i, c in enumerate(other.coeffs):
            e = other.min_exp + i - lo
            if e < len(out):
                out[e] += sign * c
        return LaurentSeries.make(lo, out, order)

    def _add_scalar(self, c: Scalar) -> "LaurentSeries":
        c = _frac(c)
        if c == 0 or self.order < 0:
            return self
        lo = min(self.min_exp, 0)
        out = [self.coeff(e) for e in range(lo, self.order + 1)]
        out[-lo] += c
        return LaurentSeries.make(lo, out, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return self._add_scalar(other)
        return self._add(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return self._add_scalar(-_frac(other))
        return self._add(o, -1)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def scale(self, c: Scalar) -> "LaurentSeries":
        c = _frac(c)
        return LaurentSeries.make(self.min_exp, [c * a for a in self.coeffs], self.order)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x^k."""
        return LaurentSeries(self.min_exp + k, self.coeffs, self.order + k)

    def _mul(self, other: "LaurentSeries") -> "LaurentSeries":
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        base = self.min_exp + other.min_exp
        if base > order:
            return LaurentSeries.zero(order)
        out = [Fraction(0)] * (order - base + 1)
        n = len(out)
        bc = other.coeffs
        for i, a in enumerate(self.coeffs):
            if i >= n:
                break
            if not a:
                continue
            lim = min(len(bc), n - i)
            for j in range(lim):
                b = bc[j]
                if b:
                    out[i + j] += a * b
        return LaurentSeries.make(base, out, order)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.scale(other)
        return self._mul(o)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroDivisionError("division by a series that is identically zero to its known order")
        v = self.min_exp
        c0 = self.coeffs[0]
        rel = self.order - v
        g = [a / c0 for a in self.coeffs[: rel + 1]]
        g += [Fraction(0)] * (rel + 1 - len(g))
        h = [Fraction(1)]
        for n in range(1, rel + 1):
            s = Fraction(0)
            for k in range(1, n + 1):
                if g[k]:
                    s += g[k] * h[n - k]
            h.append(-s)
        return LaurentSeries.make(-v, [a / c0 for a in h], rel - v)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            c = _frac(other)
            if c == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(1 / c)
        return self._mul(o.inverse())

    def __rtruediv__(self, other):
        return self.inverse().scale(_frac(other))

    def __pow__(self, p):
        return series_pow(self, p)

    def subs_power(self, m: int) -> "LaurentSeries":
        """Substitute x -> x^m (m >= 1)."""
        if m < 1:
            raise ValueError("substitution power must be >= 1")
        out: dict[int, Fraction] = {}
        for i, c in enumerate(self.coeffs):
            out[(self.min_exp + i) * m] = c
        order = (self.order + 1) * m - 1
        lo = self.min_exp * m
        dense = [out.get(e, Fraction(0)) for e in range(lo, lo + m * max(len(self.coeffs), 1))]
        return LaurentSeries.make(lo, dense, order)

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {"min_exp": self.min_exp, "order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "LaurentSeries":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.make(int(obj["min_exp"]), [Fraction(s) for s in obj["coeffs"]], int(obj["order"]))


def series_arith(kind: str, a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def _is_integral(p) -> bool:
    return isinstance(p, int) or (isinstance(p, Fraction) and p.denominator == 1)


def series_pow(a: LaurentSeries, p) -> LaurentSeries:
    """a**p for integer p, or for rational p when a = 1 + u with u = O(x).

    The fractional case uses the generalized binomial series, computed
    through the recurrence n*f_n = sum_k ((p+1)k - n) a_k f_{n-k}, which
    yields the same coefficients as sum_i binom(p, i) u^i.
    """
    p = _frac(p)
    if _is_integral(p):
        e = int(p)
        if e < 0:
            return series_pow(a.inverse(), -e)
        if e == 0:
            return LaurentSeries.const(1, a.order - a.min_exp)
        base = a
        acc = None
        while e:
            if e & 1:
                acc = base if acc is None else acc * base
            e >>= 1
            if e:
                base = base * base
        return acc
    if a.min_exp != 0 or not a.coeffs or a.coeffs[0] != 1:
        raise ValueError("fractional powers need a series of the form 1 + O(x)")
    n_max = a.order
    ac = [a.coeff(e) for e in range(0, n_max + 1)]
    f = [Fraction(1)]
    for n in range(1, n_max + 1):
        s = Fraction(0)
        for k in range(1, n + 1):
            if ac[k]:
                s += ((p + 1) * k - n) * ac[k] * f[n - k]
        f.append(s / n)
    return LaurentSeries.make(0, f, n_max)


def sqrt(a: LaurentSeries) -> LaurentSeries:
    return series_pow(a, Fraction(1, 2))


def series_coeff(a: LaurentSeries, e: int) -> Fraction:
    return a.coeff(e)


def x_series(order: int = DEFAULT_ORDER) -> LaurentSeries:
    return LaurentSeries.monomial(1, order)


def catalan_series(order: int = DEFAULT_ORDER) -> LaurentSeries:
    """C(x) = (1 - sqrt(1 - 4x)) / (2x)."""
    w = order + 1
    root = sqrt(LaurentSeries.from_list([1, -4], w))
    return ((1 - root) / LaurentSeries.monomial(1, w, 2)).truncate(order)


# -------------------------------------------------------------------------
# bivariate series


class BiSeries:
    """Series in x (exponents 0..order) with Laurent-polynomial coefficients in y.

    y-exponents are kept inside [-ywin, ywin] when a window is set. Dropping
    terms above the window is exact only when no operand carries negative
    y-exponents (then y^(ywin+1) generates an ideal); otherwise a drop raises
    WindowError rather than returning a possibly wrong answer.
    """

    __slots__ = ("order", "ywin", "terms")

    def __init__(self, terms: Sequence[Mapping[int, Fraction]], order: int, ywin: int | None = None):
        self.order = order
        self.ywin = ywin
        rows = []
        for n in range(order + 1):
            src = terms[n] if n < len(terms) else {}
            row = {}
            for m, c in src.items():
                if c:
                    if ywin is not None and abs(m) > ywin:
                        continue
                    row[m] = _frac(c)
            rows.append(row)
        self.terms = tuple(rows)

    # construction
    @classmethod
    def zero(cls, order: int, ywin: int | None = None) -> "BiSeries":
        return cls([], order, ywin)

    @classmethod
    def monomial(cls, xe: int, ye: int, order: int, ywin: int | None = None, c: Scalar = 1) -> "BiSeries":
        if xe < 0:
            raise ValueError("BiSeries holds non-negative x-exponents only")
        terms = [{} for _ in range(order + 1)]
        if xe <= order:
            terms[xe] = {ye: _frac(c)}
        return cls(terms, order, ywin)

    @classmethod
    def const(cls, c: Scalar, order: int, ywin: int | None = None) -> "BiSeries":
        return cls.monomial(0, 0, order, ywin, c)

    @classmethod
    def from_laurent(cls, s: LaurentSeries, order: int | None = None, ywin: int | None = None) -> "BiSeries":
        order = s.order if order is None else min(order, s.order)
        if s.coeffs and s.min_exp < 0:
            raise ValueError("cannot lift a series with negative x-exponents")
        return cls([{0: s.coeff(n)} for n in range(order + 1)], order, ywin)

    # inspection
    def coeff(self, n: int, m: int) -> Fraction:
        if n > self.order:
            raise SeriesOrderError(f"x^{n} beyond order {self.order}")
        return self.terms[n].get(m, Fraction(0))

    def marginal(self) -> LaurentSeries:
        """Set y = 1."""
        return LaurentSeries.make(0, [sum(r.values(), Fraction(0)) for r in self.terms], self.order)

    def table(self) -> list[tuple[int, int, Fraction]]:
        return [(n, m, c) for n, row in enumerate(self.terms) for m, c in sorted(row.items())]

    def min_y(self) -> int:
        return min((m for row in self.terms for m in row), default=0)

    def truncate(self, order: int) -> "BiSeries":
        if order >= self.order:
            return self
        return BiSeries(self.terms[: order + 1], order, self.ywin)

    def equal_to_order(self, other: "BiSeries", order: int | None = None) -> bool:
        n = min(self.order, other.order) if order is None else order
        return all(self.terms[i] == other.terms[i] for i in range(n + 1))

    def __eq__(self, other) -> bool:
        return isinstance(other, BiSeries) and self.order == other.order and self.terms == other.terms

    def __repr__(self) -> str:
        parts = [f"{c}*x^{n}*y^{m}" for n, m, c in self.table()]
        return f"BiSeries({' + '.join(parts) or '0'} + O(x^{self.order + 1}))"

    # arithmetic
    def _win(self, other: "BiSeries") -> int | None:
        if self.ywin is None:
            return other.ywin
        if other.ywin is None:
            return self.ywin
        return min(self.ywin, other.ywin)

    def _add(self, other: "BiSeries", sign: int) -> "BiSeries":
        order = min(self.order, other.order)
        rows = []
        for n in range(order + 1):
            row = dict(self.terms[n])
            for m, c in other.terms[n].items():
                row[m] = row.get(m, Fraction(0)) + sign * c
            rows.append(row)
        return BiSeries(rows, order, self._win(other))

    def _as_bi(self, other) -> "BiSeries":
        if isinstance(other, BiSeries):
            return other
        return BiSeries.const(other, self.order, self.ywin)

    def __add__(self, other):
        return self._add(self._as_bi(other), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._add(self._as_bi(other), -1)

    def __rsub__(self, other):
        return self._as_bi(other)._add(self, -1)

    def __neg__(self):
        return BiSeries([{m: -c for m, c in r.items()} for r in self.terms], self.order, self.ywin)

    def scale(self, c: Scalar) -> "BiSeries":
        c = _frac(c)
        return BiSeries([{m: c * v for m, v in r.items()} for r in self.terms], self.order, self.ywin)

    def mul_monomial(self, xe: int, ye: int) -> "BiSeries":
        if xe < 0:
            raise ValueError("negative x-shift leaves the BiSeries domain")
        rows = [{} for _ in range(self.order + 1)]
        for n, r in enumerate(self.terms):
            if n + xe <= self.order:
                rows[n + xe] = {m + ye: c for m, c in r.items()}
        out = BiSeries(rows, self.order, self.ywin)
        self._check_drop(rows, out, self.min_y() < 0 or ye < 0)
        return out

    @staticmethod
    def _check_drop(rows, out: "BiSeries", mixed: bool) -> None:
        if out.ywin is None or not mixed:
            return
        for r in rows:
            for m, c in r.items():
                if c and abs(m) > out.ywin:
                    raise WindowError(f"y^{m} falls outside the window ±{out.ywin} with negative y-exponents present")

    def _mul(self, other: "BiSeries") -> "BiSeries":
        order = min(self.order, other.order)
        win = self._win(other)
        mixed = self.min_y() < 0 or other.min_y() < 0
        rows: list[dict[int, Fraction]] = [{} for _ in range(order + 1)]
        for i in range(order + 1):
            a = self.terms[i]
            if not a:
                continue
            for j in range(order + 1 - i):
                b = other.terms[j]
                if not b:
                    continue
                row = rows[i + j]
                for ma, ca in a.items():
                    for mb, cb in b.items():
                        m = ma + mb
                        if win is not None and m > win and not mixed:
                            continue
                        row[m] = row.get(m, Fraction(0)) + ca * cb
        out = BiSeries(rows, order, win)
        self._check_drop(rows, out, mixed)
        return out

    def __mul__(self, other):
        if isinstance(other, BiSeries):
            return self._mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def inverse(self) -> "BiSeries":
        lead = {m: c for m, c in self.terms[0].items() if c}
        if len(lead) != 1:
            raise ZeroDivisionError("x^0 coefficient must be a single y-monomial to invert")
        (m0, c0), = lead.items()
        inv0 = (-m0, 1 / c0)
        # normalized g = self / (c0 y^m0), h = 1/g
        g = self.mul_monomial(0, -m0).scale(1 / c0) if m0 else self.scale(1 / c0)
        h: list[dict[int, Fraction]] = [{0: Fraction(1)}]
        win = self.ywin
        mixed = g.min_y() < 0
        for n in range(1, self.order + 1):
            acc: dict[int, Fraction] = {}
            for k in range(1, n + 1):
                gk = g.terms[k]
                if not gk:
                    continue
                for ma, ca in gk.items():
                    for mb, cb in h[n - k].items():
                        m = ma + mb
                        if win is not None and m > win and not mixed:
                            continue
                        acc[m] = acc.get(m, Fraction(0)) - ca * cb
            acc = {m: c for m, c in acc.items() if c}
            if win is not None:
                if mixed and any(abs(m) > win for m in acc):
                    raise WindowError("inverse leaves the y-window with negative exponents present")
            h.append(acc)
        out = BiSeries(h, self.order, win)
        if inv0[0]:
            out = out.mul_monomial(0, inv0[0])
        return out.scale(inv0[1])

    def __truediv__(self, other):
        if isinstance(other, BiSeries):
            return self._mul(other.inverse())
        return self.scale(1 / _frac(other))

    def __rtruediv__(self, other):
        return self.inverse().scale(_frac(other))
