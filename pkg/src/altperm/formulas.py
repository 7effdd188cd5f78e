"""Catalog of closed-form generating functions for 1-3-2 restricted
alternating permutations, keyed by FamilyKey.

Each branch transcribes a published display as written, built from
U_m(1/(2x)) Laurent polynomials, powers of (1 - 4x^2) and the R_k kernel.
Nothing here is adjusted to agree with brute force; disagreements are the
harness's business.

Families
  F1   avoid 1-3-2
  F2   avoid 1-3-2 and 1-2-...-k
  F3   avoid 1-3-2 and 2-3-...-k-1 (tau=cyc), or tau-3-...-k for tau in 12, 21, 1-2, 2-1
  F4   avoid 1-3-2, contain 1-2-...-k exactly once
  F5   avoid 1-3-2, contain tau-3-...-k exactly once
  F6   avoid 1-3-2, contain a dashless three-letter tau exactly r times
  F7   contain 1-3-2 exactly once
  F8   contain 1-3-2 exactly once, avoid 1-2-...-k (tau=1-2) or tau-3-...-k
  F9   contain 1-3-2 exactly once and 1-2-...-k exactly once
  F10  contain 1-3-2 exactly r times, r <= 3

Forms: the default is the generating-function display. "kernel" selects
the (1+x)R_{k-1}(x^2) expression of an A-series, "alt" the second DD/DU
display for F4, and "remark" a stated closed number formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Optional

from .cheb import r_series, u_half
from .pattern import ConstraintSpec, increasing, parse_pattern, prefixed
from .perm import ClassLabel
from .series import DEFAULT_ORDER, LaurentSeries, series_pow, sqrt

UD, UU, DU, DD, A = ClassLabel.UD, ClassLabel.UU, ClassLabel.DU, ClassLabel.DD, ClassLabel.A
ALL5 = (UD, UU, DU, DD, A)

TAU2 = ("12", "21", "1-2", "2-1")
TAU3 = ("123", "213", "231", "312", "321")


class DomainError(ValueError):
    pass


class FormulaAnomaly(ArithmeticError):
    """A coefficient that cannot be a count: non-integer, negative, or at a negative exponent."""

    def __init__(self, key: "FamilyKey", n: int, value: Fraction, reason: str):
        self.key, self.n, self.value, self.reason = key, n, value, reason
        super().__init__(f"{key}: coefficient of x^{n} is {value} ({reason})")


# -------------------------------------------------------------------------
# integer sequences


def _as_index(a) -> Optional[int]:
    a = Fraction(a)
    return int(a) if a.denominator == 1 else None


def binomial(a, b) -> int:
    """binom(a, b), zero when b is negative, non-integral, or exceeds a."""
    bi = _as_index(b)
    if bi is None or bi < 0:
        return 0
    ai = _as_index(a)
    if ai is None:
        raise ValueError(f"binomial with non-integer top {a} and integer bottom {b}")
    if bi > ai:
        return 0
    return comb(ai, bi)


def catalan(m) -> int:
    """C_m, zero for non-integral or negative m."""
    mi = _as_index(m)
    if mi is None or mi < 0:
        return 0
    return comb(2 * mi, mi) // (mi + 1)


@lru_cache(maxsize=None)
def fibonacci(n: int) -> int:
    if n < 0:
        raise ValueError("Fibonacci index must be non-negative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@lru_cache(maxsize=None)
def lucas(n: int) -> int:
    """L_0 = 2, L_1 = 1."""
    if n < 0:
        raise ValueError("Lucas index must be non-negative")
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def number(kind: str, *args) -> int:
    table: dict[str, Callable[..., int]] = {
        "catalan": catalan, "fibonacci": fibonacci, "lucas": lucas, "binomial": binomial,
    }
    try:
        return table[kind](*args)
    except KeyError:
        raise ValueError(f"unknown number kind {kind!r}") from None


# -------------------------------------------------------------------------
# keys


@dataclass(frozen=True, order=False)
class FamilyKey:
    family: int
    cls: ClassLabel
    k: Optional[int] = None
    r: Optional[int] = None
    tau: Optional[str] = None
    form: Optional[str] = None

    def __str__(self) -> str:
        parts = [f"F{self.family}", self.cls.value]
        if self.tau is not None:
            parts.append(f"tau={self.tau}")
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.r is not None:
            parts.append(f"r={self.r}")
        if self.form is not None:
            parts.append(self.form)
        return ":".join(parts)

    @classmethod
    def parse(cls, text: str) -> "FamilyKey":
        parts = text.strip().split(":")
        if len(parts) < 2 or not parts[0].upper().startswith("F"):
            raise ValueError(f"cannot parse family key {text!r}")
        try:
            fam = int(parts[0][1:])
        except ValueError:
            raise ValueError(f"bad family in {text!r}") from None
        fields: dict = {"family": fam, "cls": ClassLabel.parse(parts[1])}
        for p in parts[2:]:
            if "=" in p:
                name, val = p.split("=", 1)
                if name in ("k", "r"):
                    fields[name] = int(val)
                elif name == "tau":
                    fields["tau"] = val
                else:
                    raise ValueError(f"unknown field {name!r} in {text!r}")
            else:
                fields["form"] = p
        return cls(**fields)

    def sort_key(self):
        return (self.family, self.tau or "", self.k or 0, self.r or 0,
                [c for c in ALL5].index(self.cls), self.form or "")


# -------------------------------------------------------------------------
# working context


class _Ctx:
    """Series building blocks at a working order w."""

    def __init__(self, w: int):
        self.w = w
        self.x = LaurentSeries.monomial(1, w)
        self.one = LaurentSeries.const(1, w)
        self._u: dict[int, LaurentSeries] = {}
        self._h: dict[Fraction, LaurentSeries] = {}

    def U(self, m: int) -> LaurentSeries:
        if m < -1:
            raise DomainError(f"U_{m} is outside the U_{{-1}}=0 extension")
        if m not in self._u:
            self._u[m] = u_half(m, self.w)
        return self._u[m]

    def xp(self, e: int) -> LaurentSeries:
        return LaurentSeries.monomial(e, self.w)

    def h(self, p) -> LaurentSeries:
        """(1 - 4x^2)^p"""
        p = Fraction(p)
        if p not in self._h:
            self._h[p] = series_pow(LaurentSeries.from_list([1, 0, -4], self.w), p)
        return self._h[p]

    def R(self, k: int) -> LaurentSeries:
        return r_series(k, self.w)


# -------------------------------------------------------------------------
# F1


def _f1(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    x, s = c.x, c.h(Fraction(1, 2))
    ud = (1 - 2 * x * x - s) / (2 * x)
    uu = (1 - s) / (1 + s)
    if key.cls is UD:
        return ud
    if key.cls in (UU, DD):
        return uu
    if key.cls is DU:
        t = (1 - s) / (2 * x * x)
        return x * t * t - x
    return 1 + x + ud + uu


# -------------------------------------------------------------------------
# F2 and F3


def _avoid_inc(cls: ClassLabel, k: int, c: _Ctx, form: Optional[str] = None) -> LaurentSeries:
    """Avoiding 1-3-2 and 1-2-...-k (the same displays serve tau-3-...-k)."""
    x, U = c.x, c.U
    if cls is UD:
        return x * U(k - 3) / U(k - 1)
    if cls is DD:
        return (c.xp(k - 1) + U(k - 3)) / U(k - 1)
    if cls is UU:
        return U(k - 3) / U(k - 1)
    if cls is DU:
        return (c.xp(k - 1) + U(k - 3)) / (x * U(k - 1)) - x
    if form == "kernel":
        return (1 + x) * c.R(k - 1).subs_power(2)
    return (1 + x) * U(k - 2) / (x * U(k - 1))


def _f2(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    return _avoid_inc(key.cls, key.k, c, key.form)


def _f3(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    if key.tau != "cyc":
        return _avoid_inc(key.cls, key.k, c, key.form)
    x, U, k = c.x, c.U, key.k
    if key.cls is UD:
        return x * U(k - 4) / U(k - 2)
    if key.cls is DD:
        return (c.xp(k - 2) + U(k - 4)) / U(k - 2)
    if key.cls is UU:
        return U(k - 3) * U(k - 3) / (U(k - 2) * U(k - 2))
    if key.cls is DU:
        inner = c.xp(k - 3) * (U(k - 3) + x * U(k - 2)) + 2 * U(k - 3) * U(k - 3) + U(k - 4) * U(k - 4) - 2
        return x / (U(k - 2) * U(k - 2)) * inner
    return ((1 + x) * U(k - 3) * U(k - 3) - x) / (U(k - 2) * U(k - 2))


# -------------------------------------------------------------------------
# F4 and F5


def _thc1_sum(k: int, c: _Ctx, shift: int) -> LaurentSeries:
    """sum_{m=0}^{k-2} x^{k-1-shift-m} (x^{m+1} + U_{m-1}) / (U_m U_{m+1})."""
    U = c.U
    total = LaurentSeries.zero(c.w)
    for m in range(0, k - 1):
        total = total + c.xp(k - 1 - shift - m) * (c.xp(m + 1) + U(m - 1)) / (U(m) * U(m + 1))
    return total


def _contain_inc_once(cls: ClassLabel, k: int, c: _Ctx, form: Optional[str] = None) -> LaurentSeries:
    x, U = c.x, c.U
    if cls is UD:
        return x / (U(k - 1) * U(k - 1))
    if cls is UU:
        return 1 / (U(k - 1) * U(k - 1))
    if cls in (DD, DU):
        if form == "alt":
            dd = x / U(k - 1) * _thc1_sum(k, c, 1)
            return dd if cls is DD else dd / x
        s = _thc1_sum(k, c, 0)
        return s / U(k - 1) if cls is DD else s / (x * U(k - 1))
    return (1 + x) / (U(k - 1) * U(k - 1))


def _f4(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    return _contain_inc_once(key.cls, key.k, c, key.form)


def _f5_dd(tau: str, k: int, c: _Ctx) -> LaurentSeries:
    x, U = c.x, c.U
    if tau == "1-2":
        return x / U(k - 1) * _thc1_sum(k, c, 1)
    if tau == "12":
        return x / U(k - 1) * (c.xp(k) + _thc1_sum(k, c, 1))
    if tau == "2-1":
        return c.xp(k - 1) / U(k - 1)
    return 1 / (U(k - 1) * U(k - 1))


def _f5(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    x, U, k, tau = c.x, c.U, key.k, key.tau
    if key.cls in (UD, UU):
        if tau == "2-1":
            return LaurentSeries.zero(c.w)
        return x / (U(k - 1) * U(k - 1)) if key.cls is UD else 1 / (U(k - 1) * U(k - 1))
    if key.cls is DD:
        return _f5_dd(tau, k, c)
    if key.cls is DU:
        return _f5_dd(tau, k, c) / x
    if tau == "2-1":
        return LaurentSeries.zero(c.w)
    if key.form == "kernel":
        return (1 + x) * c.R(k - 1).subs_power(2)
    return (1 + x) * U(k - 2) / (x * U(k - 1))


# -------------------------------------------------------------------------
# F6


def _tail_sum(r: int, parity: int, w: int) -> LaurentSeries:
    """sum_{n>=r+1} (r+1)/(n(n-r)) binom(n, r+1)^2 x^{2n+parity}"""
    coeffs: dict[int, Fraction] = {}
    n = r + 1
    while 2 * n + parity <= w:
        coeffs[2 * n + parity] = Fraction(r + 1, n * (n - r)) * comb(n, r + 1) ** 2
        n += 1
    if not coeffs:
        return LaurentSeries.zero(w)
    return LaurentSeries.make(0, [coeffs.get(e, 0) for e in range(w + 1)], w)


def _f6(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    tau, r = key.tau, key.r
    if tau in ("123", "321"):
        return LaurentSeries.zero(c.w)
    if tau in ("213", "312"):
        if key.cls is UD:
            return _tail_sum(r, 1, c.w)
        if key.cls is UU:
            return _tail_sum(r, 0, c.w)
        return _tail_sum(r, 0, c.w) + _tail_sum(r, 1, c.w)
    cr = catalan(r)
    if key.cls is UD:
        return c.xp(2 * r + 1).scale(cr)
    if key.cls is UU:
        return c.xp(2 * r + 2).scale(cr)
    return (c.xp(2 * r + 2) + c.xp(2 * r + 1)).scale(cr)


# -------------------------------------------------------------------------
# F7 and F8


def _f7(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    x, s = c.x, c.h(Fraction(1, 2))
    x2 = x * x
    ud = x * (1 - s) / (1 - 4 * x2 + s)
    uu = (x2 - 1) / x2 + (1 - 3 * x2) / (x2 * s)
    if key.cls is UD:
        return ud
    if key.cls in (UU, DD):
        return uu
    if key.cls is DU:
        x3 = x2 * x
        return (2 * x2 * x2 + 4 * x2 - 3) / (2 * x3) + (3 - 10 * x2) / (2 * x3 * s)
    return ud + uu


def _sum_uu(lo: int, hi: int, c: _Ctx) -> LaurentSeries:
    """sum_{j=lo}^{hi} U_j U_{j+1}"""
    total = LaurentSeries.zero(c.w)
    for j in range(lo, hi + 1):
        total = total + c.U(j) * c.U(j + 1)
    return total


def _once132_avoid_inc(cls: ClassLabel, k: int, c: _Ctx) -> LaurentSeries:
    x, U = c.x, c.U
    if cls is UD:
        return _sum_uu(0, k - 3, c) / (U(k - 1) * U(k - 1))
    if cls is UU:
        return (x * U(k - 3) * U(k - 3) + _sum_uu(0, k - 4, c)) / (x * U(k - 1) * U(k - 1))
    if cls is DD:
        total = LaurentSeries.zero(c.w)
        for i in range(0, k - 1):
            frac = (c.xp(k - 1 - i) + U(k - 3 - i)) / (U(k - 1 - i) * U(k - 2 - i))
            total = total + c.xp(i) * (frac * _sum_uu(0, k - 2 - i, c) - x * U(k - 2 - i))
        return total / U(k - 1)
    if cls is DU:
        # DD^1_{k-1} read as the same family at k-1; it vanishes at k-1 = 2
        dd_prev = _once132_avoid_inc(DD, k - 1, c) if k - 1 >= 3 else LaurentSeries.zero(c.w)
        return ((c.xp(k - 1) + U(k - 3)) / U(k - 2) * _once132_avoid_inc(UU, k, c)
                + U(k - 2) / U(k - 1) * dd_prev
                + x * U(k - 3) * (c.xp(k - 2) + U(k - 4)) / (U(k - 2) * U(k - 1)))
    inner = x * U(k - 3) * (U(k - 3) + U(k - 4)) + (1 + x) * _sum_uu(0, k - 4, c)
    return inner / (x * U(k - 1) * U(k - 1))


def _f8(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    k = key.k
    if key.tau != "2-1":
        return _once132_avoid_inc(key.cls, k, c)
    x, U = c.x, c.U
    if key.cls is UD:
        return (_sum_uu(0, k - 3, c) - x) / (U(k - 1) * U(k - 1))
    return (x * U(k - 4) * U(k - 2) + _sum_uu(0, k - 4, c)) / (x * U(k - 1) * U(k - 1))


# -------------------------------------------------------------------------
# F9


def _f9_ud(k: int, c: _Ctx) -> LaurentSeries:
    x, U = c.x, c.U
    total = LaurentSeries.zero(c.w)
    for j in range(0, k - 2):
        num = U(j + 1) * (U(j + 1) + x * U(j)) + 2 * x * _sum_uu(0, j - 1, c)
        total = total + num / (U(j + 1) * U(j + 2))
    return total / (U(k - 1) * U(k - 1))


def _f9_uu(k: int, c: _Ctx) -> LaurentSeries:
    """Solve the stated linear relation for UU^1_{k;1}.

    Lower-order ingredients at pattern length 1 or 2 use their definitional
    values: every class avoiding "1" is empty, so those series vanish, and
    the 1-2 avoiders containing 1-3-2 once do not exist either.
    """
    x, zero = c.x, LaurentSeries.zero(c.w)

    def ud0(j):  # UD avoiding 1-2-...-j
        return _avoid_inc(UD, j, c) if j >= 2 else zero

    def uu0(j):
        return _avoid_inc(UU, j, c) if j >= 2 else zero

    def ud_once(j):  # avoid 1-3-2, contain 1-2-...-j once
        return _contain_inc_once(UD, j, c) if j >= 2 else zero

    def uu_once(j):
        return _contain_inc_once(UU, j, c) if j >= 2 else zero

    def ud1(j):  # contain 1-3-2 once, avoid 1-2-...-j
        return _once132_avoid_inc(UD, j, c) if j >= 3 else zero

    def uu1(j):
        return _once132_avoid_inc(UU, j, c) if j >= 3 else zero

    def f9(j):
        return _f9_ud(j, c) if j >= 2 else zero

    rest = (x * f9(k - 1) * (1 + uu0(k))
            + x * ud1(k) * uu_once(k)
            + x * ud_once(k - 1) * uu1(k)
            + x ** 3 * uu_once(k - 1) * (x + ud0(k - 1)) * (1 + uu0(k))
            + x ** 3 * (1 + uu0(k - 1)) * ud_once(k - 1) * (1 + uu0(k))
            + x ** 3 * (1 + uu0(k - 1)) * (x + ud0(k - 1)) * uu_once(k))
    return rest / (1 - x * (x + ud0(k - 1)))


def _f9(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    return _f9_ud(key.k, c) if key.cls is UD else _f9_uu(key.k, c)


# -------------------------------------------------------------------------
# F10

_F10 = {
    # class, r: (prefactor polynomial, its x-power divisor), (root polynomial, divisor), exponent of (1-4x^2)
    (UD, 0): (([1, 0, -2], 1, 2), ([-1], 1, 2), Fraction(1, 2)),
    (UD, 1): (([-1], 1, 2), ([1, 0, -2], 1, 2), Fraction(-1, 2)),
    (UD, 2): (([1], 1, 2), ([-1, 0, 6, 0, -6], 1, 2), Fraction(-3, 2)),
    (UD, 3): (([-2, 0, 2], 1, 1), ([2, 0, -22, 0, 80, 0, -98, 0, 16], 1, 1), Fraction(-5, 2)),
    (UU, 0): (([1, 0, -2], 2, 2), ([-1], 2, 2), Fraction(1, 2)),
    (UU, 1): (([-1, 0, 1], 2, 1), ([1, 0, -3], 2, 1), Fraction(-1, 2)),
    (UU, 2): (([4, 0, -5], 2, 2), ([-4, 0, 29, 0, -54, 0, 16], 2, 2), Fraction(-3, 2)),
    (UU, 3): (([13, 0, -11, 0, 2], 2, 2), ([13, 0, -152, 0, 612, 0, -940, 0, 384], 2, 2), Fraction(-5, 2)),
    (A, 0): (([1, 1, -2, -2], 2, 2), ([-1, -1], 2, 2), Fraction(1, 2)),
    (A, 1): (([-2, -1, 2], 2, 2), ([2, 1, -6, -2], 2, 2), Fraction(-1, 2)),
    (A, 2): (([4, 1, -5], 2, 2), ([-4, -1, 29, 6, -54, -6, 16], 2, 2), Fraction(-3, 2)),
    (A, 3): (([13, -4, -11, 4, 2], 2, 2),
             ([13, 4, -152, -44, 612, 160, -940, -196, 384, 32], 2, 2), Fraction(-5, 2)),
}


def _f10(key: FamilyKey, c: _Ctx) -> LaurentSeries:
    (p, pe, pd), (q, qe, qd), expo = _F10[(key.cls, key.r)]
    first = LaurentSeries.make(0, p, c.w).shift(-pe).scale(Fraction(1, pd))
    second = LaurentSeries.make(0, q, c.w).shift(-qe).scale(Fraction(1, qd))
    return first + second * c.h(expo)


# -------------------------------------------------------------------------
# stated number formulas


def _remark_f1(cls: ClassLabel, n: int) -> Optional[Fraction]:
    if cls is A:
        return Fraction(catalan(n // 2))
    if n < 3:
        return None
    m = {UD: Fraction(n - 1, 2), UU: Fraction(n, 2), DU: Fraction(n + 1, 2), DD: Fraction(n, 2)}[cls]
    return Fraction(catalan(m))


def _remark_f2(n: int) -> Optional[Fraction]:
    return Fraction(fibonacci((n + 2) // 2))


def _remark_f3(n: int) -> Optional[Fraction]:
    if n < 2:
        return None
    m = n // 2
    if n % 2 == 0:
        return Fraction(7, 10) * m * lucas(2 * m) - Fraction(1, 10) * (15 * m - 4) * fibonacci(2 * m)
    return Fraction(fibonacci(2 * m - 1))


def _remark_f4(n: int) -> Optional[Fraction]:
    if n < 6:
        return None
    h = n // 2
    return Fraction(sum(fibonacci(2 * j) * fibonacci(2 * h - 4 - 2 * j) for j in range(1, h - 3 + 1)))


def _remark_f7(cls: ClassLabel, n: int) -> Optional[Fraction]:
    half = Fraction(1, 2)
    if cls is UD:
        return Fraction(binomial(n - 1, (n - 3) * half)) if n >= 1 else Fraction(0)
    if cls in (UU, DD):
        return Fraction(2 * binomial(n - 1, (n - 4) * half)) if n >= 1 else Fraction(0)
    if cls is DU:
        return Fraction(3, 2) * binomial(n + 3, (n + 3) * half) - 5 * binomial(n + 1, (n + 1) * half)
    if n < 1:
        return Fraction(0)
    return Fraction(binomial(n - 1, (n - 3) * half) + binomial(n - 1, (n - 4) * half))


def remark_value(key: FamilyKey, n: int) -> Optional[Fraction]:
    """The stated closed number for length n, or None where the statement does not apply."""
    _validate(key)
    f = key.family
    if f == 1:
        return _remark_f1(key.cls, n)
    if f == 2:
        return _remark_f2(n)
    if f == 3:
        return _remark_f3(n)
    if f == 4:
        return _remark_f4(n)
    return _remark_f7(key.cls, n)


# -------------------------------------------------------------------------
# domains


_BUILDERS = {1: _f1, 2: _f2, 3: _f3, 4: _f4, 5: _f5, 6: _f6, 7: _f7, 8: _f8, 9: _f9, 10: _f10}

_REMARKS = {
    1: "closed Catalan counts (all classes)",
    2: "Fibonacci count for k=5, class A",
    3: "Lucas/Fibonacci count for tau=cyc, k=6, class A",
    4: "Fibonacci-convolution count for k=5, class A",
    7: "binomial counts (all classes)",
}


def _need(cond: bool, key: FamilyKey, msg: str) -> None:
    if not cond:
        raise DomainError(f"{key}: {msg}")


def _validate(key: FamilyKey) -> None:
    f, cls, k, r, tau, form = key.family, key.cls, key.k, key.r, key.tau, key.form
    _need(f in _BUILDERS, key, "family must be F1..F10")
    _need(cls in ALL5, key, "class must be UD, UU, DU, DD or A")
    _need(form in (None, "kernel", "alt", "remark"), key, f"unknown form {form!r}")
    uses_k = f in (2, 3, 4, 5, 8, 9)
    uses_r = f in (6, 10)
    uses_tau = f in (3, 5, 6, 8)
    _need(uses_k == (k is not None), key, "k is required" if uses_k else "k does not apply")
    _need(uses_r == (r is not None), key, "r is required" if uses_r else "r does not apply")
    _need(uses_tau == (tau is not None), key, "tau is required" if uses_tau else "tau does not apply")

    if form == "remark":
        _need(f in _REMARKS, key, "no closed number statement for this family")
        if f == 2:
            _need(k == 5 and cls is A, key, _REMARKS[2])
        if f == 3:
            _need(k == 6 and tau == "cyc" and cls is A, key, _REMARKS[3])
        if f == 4:
            _need(k == 5 and cls is A, key, _REMARKS[4])
        return
    if form == "kernel":
        _need(cls is A and (f == 2 or (f in (3, 5) and tau in TAU2)), key,
              "the R_k kernel form exists for A-series of F2, F3 (tau-3-...-k) and F5")
        _need(not (f == 5 and tau == "2-1"), key, "the kernel form is stated for tau in 12, 21, 1-2 only")
    if form == "alt":
        _need(f == 4 and cls in (DD, DU), key, "the alternative display exists for F4 DD and DU")
        _need(k >= 3, key, "the alternative display is stated for k >= 3")

    if f == 2:
        _need(k >= 2, key, "stated for k >= 2")
    elif f == 3:
        _need(tau in TAU2 + ("cyc",), key, "tau must be cyc, 12, 21, 1-2 or 2-1")
        _need(k >= (3 if tau == "cyc" else 2), key,
              "stated for k >= 3" if tau == "cyc" else "stated for k >= 2")
    elif f == 4:
        _need(k >= 2, key, "stated for k >= 2")
        if cls is A:
            _need(k >= 3, key, "the A-series is stated for k >= 3")
    elif f == 5:
        _need(tau in TAU2, key, "tau must be 12, 21, 1-2 or 2-1")
        _need(k >= 3, key, "stated for k >= 3")
    elif f == 6:
        _need(tau in TAU3, key, "tau must be a dashless three-letter pattern")
        _need(cls in (UD, UU, A), key, "stated for UD, UU and A only")
        _need(r >= 0, key, "r must be non-negative")
        if tau == "231":
            _need(r >= 1, key, "the 231 displays are stated for r >= 1")
    elif f == 8:
        _need(tau in ("1-2", "12", "21", "2-1"), key, "tau must be 1-2, 12, 21 or 2-1")
        _need(k >= 3, key, "stated for k >= 3")
        if tau == "2-1":
            _need(cls in (UD, UU), key, "the 2-1-3-...-k displays cover UD and UU only")
    elif f == 9:
        _need(k >= 2, key, "stated for k >= 2")
        _need(cls in (UD, UU), key, "stated for UD (display) and UU (linear relation) only")
    elif f == 10:
        _need(0 <= r <= 3, key, "stated for r = 0..3")
        _need(cls in (UD, UU, A), key, "stated for UD, UU and A only")


def validate(key: FamilyKey) -> FamilyKey:
    _validate(key)
    return key


def is_remark(key: FamilyKey) -> bool:
    return key.form == "remark"


# -------------------------------------------------------------------------
# public API


def gf(key: FamilyKey | str, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """The displayed generating function for key, trusted through x^order."""
    if isinstance(key, str):
        key = FamilyKey.parse(key)
    _validate(key)
    if is_remark(key):
        raise DomainError(f"{key} is a number statement, not a generating function; use coefficients()")
    w = order + 8
    for _ in range(6):
        s = _BUILDERS[key.family](key, _Ctx(w))
        if s.order >= order:
            return s.truncate(order)
        w += (order - s.order) + 8
    raise ArithmeticError(f"{key}: could not reach order {order}")


@dataclass(frozen=True)
class SequenceTable:
    key: FamilyKey
    values: dict[int, int] = field(default_factory=dict)


def raw_coefficients(key: FamilyKey | str, n_max: int) -> dict[int, Fraction]:
    """Exact coefficients for n <= n_max, including any at negative exponents.

    For remark keys only the lengths the statement covers are present.
    """
    if isinstance(key, str):
        key = FamilyKey.parse(key)
    _validate(key)
    if is_remark(key):
        out = {}
        for n in range(n_max + 1):
            v = remark_value(key, n)
            if v is not None:
                out[n] = v
        return out
    s = gf(key, n_max)
    lo = min(0, s.min_exp)
    return {n: s.coeff(n) for n in range(lo, n_max + 1) if n >= 0 or s.coeff(n) != 0}


def anomalies(key: FamilyKey, raw: dict[int, Fraction]) -> list[FormulaAnomaly]:
    out = []
    for n, v in sorted(raw.items()):
        if n < 0:
            out.append(FormulaAnomaly(key, n, v, "negative exponent"))
        elif v.denominator != 1:
            out.append(FormulaAnomaly(key, n, v, "non-integer"))
        elif v < 0:
            out.append(FormulaAnomaly(key, n, v, "negative"))
    return out


def coefficients(key: FamilyKey | str, n_max: int) -> SequenceTable:
    if isinstance(key, str):
        key = FamilyKey.parse(key)
    raw = raw_coefficients(key, n_max)
    bad = anomalies(key, raw)
    if bad:
        raise bad[0]
    return SequenceTable(key, {n: int(v) for n, v in raw.items()})


# -------------------------------------------------------------------------
# translation into brute-force constraints


def constraints(key: FamilyKey) -> tuple[ConstraintSpec, ...]:
    """The constraint set whose class members the key's series counts."""
    _validate(key)
    f, k, r, tau = key.family, key.k, key.r, key.tau
    p132 = parse_pattern("1-3-2")
    avoid132 = ConstraintSpec.avoid(p132)
    once132 = ConstraintSpec.exactly(p132, 1)

    def second() -> ConstraintSpec:
        if f == 2:
            return ConstraintSpec.avoid(increasing(k))
        if f == 3:
            if tau == "cyc":
                return ConstraintSpec.avoid(parse_pattern("-".join(str(i) for i in range(2, k + 1)) + "-1"))
            return ConstraintSpec.avoid(prefixed(tau, k))
        if f == 4:
            return ConstraintSpec.exactly(increasing(k), 1)
        if f == 5:
            return ConstraintSpec.exactly(prefixed(tau, k), 1)
        if f == 6:
            return ConstraintSpec.exactly(parse_pattern(tau), r)
        if f == 8:
            return ConstraintSpec.avoid(increasing(k) if tau == "1-2" else prefixed(tau, k))
        if f == 9:
            return ConstraintSpec.exactly(increasing(k), 1)
        raise AssertionError(f)

    if f == 1:
        return (avoid132,)
    if f == 7:
        return (once132,)
    if f == 10:
        return (ConstraintSpec.exactly(p132, r),)
    if f in (2, 3, 4, 5, 6):
        return (avoid132, second())
    return (once132, second())


def domain_keys(family: int, k_max: int = 5, r_max: int = 2, forms: bool = True) -> list[FamilyKey]:
    """Every in-domain key of a family with k <= k_max and r <= r_max (F10 always r <= 3)."""
    keys: list[FamilyKey] = []

    def add(**kw):
        key = FamilyKey(family=family, **kw)
        try:
            _validate(key)
        except DomainError:
            return
        keys.append(key)

    ks = range(2, k_max + 1)
    for cls in ALL5:
        if family in (1, 7):
            add(cls=cls)
        elif family in (2, 4, 9):
            for k in ks:
                add(cls=cls, k=k)
        elif family == 3:
            for tau in ("cyc",) + TAU2:
                for k in ks:
                    add(cls=cls, k=k, tau=tau)
        elif family == 5:
            for tau in TAU2:
                for k in ks:
                    add(cls=cls, k=k, tau=tau)
        elif family == 6:
            for tau in TAU3:
                for r in range(0, r_max + 1):
                    add(cls=cls, r=r, tau=tau)
        elif family == 8:
            for tau in ("1-2", "12", "21", "2-1"):
                for k in ks:
                    add(cls=cls, k=k, tau=tau)
        elif family == 10:
            for r in range(0, 4):
                add(cls=cls, r=r)
    if forms:
        extra = []
        for key in keys:
            for form in ("kernel", "alt"):
                cand = replace(key, form=form)
                try:
                    _validate(cand)
                except DomainError:
                    continue
                extra.append(cand)
        keys += extra
        for cls in ALL5:
            for kw in ({"cls": cls}, {"cls": cls, "k": 5}, {"cls": cls, "k": 6, "tau": "cyc"}):
                cand = FamilyKey(family=family, form="remark", **kw)
                try:
                    _validate(cand)
                except DomainError:
                    continue
                if cand not in keys:
                    keys.append(cand)
    return sorted(set(keys), key=FamilyKey.sort_key)
