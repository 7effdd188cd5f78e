"""Multistatistic generating functions for 1-3-2 avoiding alternating
permutations under concrete variable assignments.

A permutation pi is weighted by prod_j x_j^{s_j(pi)} where, depending on the
statistic family,

  classical   s_j = occurrences of 1-2-...-j          (j >= 1)
  v12         s_1 = |pi|, s_j = occurrences of 12-3-...-j  (j >= 2)
  v21         s_1 = |pi|, s_j = occurrences of 21-3-...-j  (j >= 2)

and the x_j are specialized to monomials x^a y^b by a named Assignment.

Two variants are offered for the classical family. "literal" follows the
published continued fraction and its companions literally. "corrected"
follows the block decomposition pi = (alpha', n, alpha''), where alpha' is
weighted by the shifted variables (x_1 x_2, x_2 x_3, ...); this changes the
inner partial denominator from x_1 to (x_1 x_2) and the DD sum's shifted
argument. Under the length-only assignment they differ only in DD and in
DU, which is assembled from DD.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Iterable, Optional

import numpy as np

from .cheb import CFSpec, cf_eval, default_depth
from .formulas import binomial
from .oracle import Oracle, default_oracle, inc_counts, occurrence_counts, rlmax_counts
from .pattern import ConstraintSpec, increasing, parse_pattern, prefixed
from .perm import ClassLabel, Permutation
from .series import DEFAULT_ORDER, BiSeries, LaurentSeries, sqrt

UD, UU, DU, DD, A = ClassLabel.UD, ClassLabel.UU, ClassLabel.DU, ClassLabel.DD, ClassLabel.A

Mono = tuple[int, int]  # (x-exponent, y-exponent)

FAMILIES = ("classical", "v12", "v21")
VARIANTS = ("literal", "corrected")


class UnsupportedStat(ValueError):
    pass


def _madd(a: Mono, b: Mono, times: int = 1) -> Mono:
    return (a[0] + times * b[0], a[1] + times * b[1])


def _mscale(a: Mono, c: int) -> Mono:
    return (c * a[0], c * a[1])


# -------------------------------------------------------------------------
# assignments


@dataclass(frozen=True)
class Assignment:
    """One of the named specializations of x_1, x_2, ...

    length   x_1 = x, x_j = 1
    mark     x_1 = x, x_k = y, other x_j = 1     (k >= 2)
    rlmax    x_1 = xy, x_j = y^{(-1)^{j+1}}
    inc      x_1 = xy, x_j = y
    """
    name: str
    k: Optional[int] = None

    def __post_init__(self):
        if self.name not in ("length", "mark", "rlmax", "inc"):
            raise ValueError(f"unknown assignment {self.name!r}")
        if (self.name == "mark") != (self.k is not None):
            raise ValueError("mark needs k, the other assignments take none")
        if self.name == "mark" and self.k < 2:
            raise ValueError("mark-k needs k >= 2 (x_1 always carries length)")

    @classmethod
    def parse(cls, text: str) -> "Assignment":
        text = text.strip()
        for sep in (":", "=", "-"):
            if text.startswith("mark" + sep):
                return cls("mark", int(text[5:]))
        return cls(text)

    def __str__(self) -> str:
        return f"mark={self.k}" if self.name == "mark" else self.name

    def var(self, j: int) -> Mono:
        if j < 1:
            raise IndexError("variables are indexed from 1")
        if self.name == "length":
            return (1, 0) if j == 1 else (0, 0)
        if self.name == "mark":
            return (1, 0) if j == 1 else ((0, 1) if j == self.k else (0, 0))
        if self.name == "rlmax":
            return (1, 1) if j == 1 else (0, 1 if j % 2 else -1)
        return (1, 1)if j == 1 else (0, 1)

    def y_weights(self, upto: int) -> list[int]:
        """The y-exponent of x_1..x_upto, index 0 unused."""
        return [0] + [self.var(j)[1] for j in range(1, upto + 1)]

    @property
    def has_negative_y(self) -> bool:
        return self.name == "rlmax"


NAMED = (Assignment("length"), Assignment("mark", 2), Assignment("mark", 3),
         Assignment("mark", 4), Assignment("rlmax"), Assignment("inc"))


# -------------------------------------------------------------------------
# variable sequences and their shifts

VarSeq = Callable[[int], Mono]


def shift_s(vs: VarSeq, d: int) -> VarSeq:
    """(S^d vs)_i = prod_{j=0}^{d} vs_{i+j}^{binom(d,j)}"""
    if d == 0:
        return vs

    @lru_cache(maxsize=None)
    def f(i: int) -> Mono:
        m = (0, 0)
        for j in range(d + 1):
            m = _madd(m, vs(i + j), comb(d, j))
        return m
    return f


def shift_t(vs: VarSeq, d: int) -> VarSeq:
    """S^d acting on x_2, x_3, ... with x_1 held fixed."""
    if d == 0:
        return vs
    s = shift_s(vs, d)
    return lambda i: vs(1) if i == 1 else s(i)


def shift_literal(vs: VarSeq, d: int) -> VarSeq:
    """The printed DD argument: i-th entry prod_{j>=1} x_{j+i-1}^{binom(d,j)}."""

    @lru_cache(maxsize=None)
    def f(i: int) -> Mono:
        m = (0, 0)
        for j in range(1, d + 1):
            m = _madd(m, vs(j + i - 1), comb(d, j))
        return m
    return f


def _bi_mono(m: Mono, order: int, ywin) -> BiSeries:
    return BiSeries.monomial(m[0], m[1], order, ywin)


# -------------------------------------------------------------------------
# classical family


def _ud_classical(vs: VarSeq, variant: str, order: int, ywin) -> BiSeries:
    def a(d: int) -> Mono:
        return shift_s(vs, d)(1)

    if variant == "literal":
        rule = lambda d: (_mscale(a(d), 2), a(d), a(d))
    else:
        rule = lambda d: (_mscale(a(d), 2), a(d), a(d + 1))
    return cf_eval(CFSpec(default_depth(order), rule, "st1"), order, ywin)


def _uu_classical(vs: VarSeq, variant: str, order: int, ywin) -> BiSeries:
    x1 = _bi_mono(vs(1), order, ywin)
    sv = shift_s(vs, 1)
    if variant == "literal":
        w = x1 * x1 + x1 * _ud_classical(sv, variant, order, ywin)
    else:
        w = x1 * (_bi_mono(sv(1), order, ywin) + _ud_classical(sv, variant, order, ywin))
    # -1/(1 - 1/w) == w/(1 - w); the latter avoids inverting a series with zero constant term
    return w / (1 - w)


def _min_x(s: BiSeries) -> int:
    for n, row in enumerate(s.terms):
        if any(row.values()):
            return n
    return s.order + 1


def _dd_classical(vs: VarSeq, variant: str, order: int, ywin) -> BiSeries:
    total = BiSeries.zero(order, ywin)
    prod = BiSeries.const(1, order, ywin)
    d = 1
    while True:
        big_a = _bi_mono(shift_s(vs, d - 1)(1), order, ywin)
        if variant == "literal":
            ud = _ud_classical(shift_literal(vs, d), variant, order, ywin)
            factor = big_a * big_a / (1 - big_a * big_a - big_a * ud)
        else:
            a_next = _bi_mono(shift_s(vs, d)(1), order, ywin)
            ud = _ud_classical(shift_s(vs, d), variant, order, ywin)
            factor = big_a * big_a / (1 - big_a * (a_next + ud))
        prod = prod * factor
        if _min_x(prod) > order:
            return total
        total = total + prod
        d += 1


def _du_classical(vs: VarSeq, variant: str, order: int, ywin) -> BiSeries:
    x1 = _bi_mono(vs(1), order, ywin)
    uu = _uu_classical(vs, variant, order, ywin)
    dd = _dd_classical(shift_s(vs, 1), variant, order, ywin)
    return x1 * uu + x1 * dd * (1 + uu)


# -------------------------------------------------------------------------
# 12-3-...-k and 21-3-...-k families


def _ud_v12(vs: VarSeq, order: int, ywin) -> BiSeries:
    x1 = vs(1)

    def rule(d: int):
        b = shift_t(vs, d)(2)
        return (_madd(_mscale(x1, 2), b), _madd(x1, b), x1)
    return cf_eval(CFSpec(default_depth(order), rule, "st2"), order, ywin)


def _uu_v12(vs: VarSeq, order: int, ywin) -> BiSeries:
    x1 = _bi_mono(vs(1), order, ywin)
    x2 = _bi_mono(vs(2), order, ywin)
    w = x1 * x2 * (x1 + _ud_v12(shift_t(vs, 1), order, ywin))
    return w / (1 - w)


def display_12_3(cls: ClassLabel | str, order: int = DEFAULT_ORDER, ywin: Optional[int] = None) -> BiSeries:
    """The two printed continued fractions marking occurrences of 12-3.

    UD:  -x^2/(x - 1/(x - x^2y/(xy - 1/(x - x^2y^2/(xy^2 - ...)))))
    UU:  -1/(1 - 1/(x^2 - x * x^2y/(xy - 1/(x - x^2y^2/(xy^2 - ...)))))
    """
    if isinstance(cls, str):
        cls = ClassLabel.parse(cls)
    depth = default_depth(order)
    if cls is UD:
        return cf_eval(CFSpec(depth, lambda d: ((2, d), (1, d), (1, 0)), "st2"), order, ywin)
    if cls is UU:
        inner = cf_eval(CFSpec(depth, lambda d: ((2, d + 1), (1, d + 1), (1, 0)), "st2"), order, ywin)
        x = BiSeries.monomial(1, 0, order, ywin)
        w = x * x + x * inner
        return w / (1 - w)
    raise UnsupportedStat("the 12-3 displays cover UD and UU")


# -------------------------------------------------------------------------
# public API


def _window(a: Assignment, ywin: Optional[int]) -> Optional[int]:
    # with y^{-1} present, truncating in y is not a ring map; keep everything
    return None if a.has_negative_y else ywin


ORDER_WINDOW = "order"


def stat_gf(family: str, cls: ClassLabel | str, a: Assignment | str, order: int = DEFAULT_ORDER,
            ywin: Optional[int] | str = ORDER_WINDOW, variant: str = "literal") -> BiSeries:
    """Sum over 1-3-2 avoiders of the class of x^n y^(weighted statistic).

    ywin bounds the kept y-exponents: by default y^order, which covers every
    statistic bounded by the length; None keeps all of them. Entries inside
    the window are exact either way.
    """
    if isinstance(cls, str):
        cls = ClassLabel.parse(cls)
    if isinstance(a, str):
        a = Assignment.parse(a)
    if family not in FAMILIES:
        raise UnsupportedStat(f"unknown statistic family {family!r}")
    if variant not in VARIANTS:
        raise UnsupportedStat(f"unknown variant {variant!r}")
    ywin = _window(a, order if ywin == ORDER_WINDOW else ywin)
    vs = a.var
    x1 = _bi_mono(vs(1), order, ywin)

    if family == "classical":
        if cls is UD:
            return _ud_classical(vs, variant, order, ywin)
        if cls is UU:
            return _uu_classical(vs, variant, order, ywin)
        if cls is DD:
            return _dd_classical(vs, variant, order, ywin)
        if cls is DU:
            return _du_classical(vs, variant, order, ywin)
        if cls is A:
            return 1 + x1 + _ud_classical(vs, variant, order, ywin) + _uu_classical(vs, variant, order, ywin)
        raise UnsupportedStat(f"class {cls} is not covered")

    if variant != "literal":
        raise UnsupportedStat("the 12-3 and 21-3 families have a single variant")
    if cls not in (UD, UU, A):
        raise UnsupportedStat(f"{family} covers UD, UU and A only, not {cls.value}")
    uu2 = _uu_v12(vs, order, ywin)
    x2 = vs(2)
    if family == "v12":
        if cls is UD:
            return _ud_v12(vs, order, ywin)
        if cls is UU:
            return uu2
        return 1 + x1 + (1 + x1) * uu2
    if cls is UD:
        return _ud_v12(vs, order, ywin)
    uu3 = uu2.mul_monomial(-x2[0], -x2[1]) if x2 != (0, 0) else uu2
    if cls is UU:
        return uu3
    return 1 + x1 + x1 * uu2 + uu3


# -------------------------------------------------------------------------
# right-to-left maxima closed forms


def c_hat(order: int) -> LaurentSeries:
    """C(x^2) - x = (1 - 2x^2 - sqrt(1-4x^2)) / (2x)"""
    x = LaurentSeries.monomial(1, order + 1)
    s = sqrt(LaurentSeries.from_list([1, 0, -4], order + 1))
    return ((1 - 2 * x * x - s) / (2 * x)).truncate(order)


def rlmax_gf(cls: ClassLabel | str, order: int = DEFAULT_ORDER, ywin: Optional[int] = None) -> BiSeries:
    """The printed closed forms for sum x^n y^rlmax over 1-3-2 avoiders."""
    if isinstance(cls, str):
        cls = ClassLabel.parse(cls)
    ywin = order if ywin is None else ywin
    ch = BiSeries.from_laurent(c_hat(order), order, ywin)
    s = BiSeries.from_laurent(sqrt(LaurentSeries.from_list([1, 0, -4], order)), order, ywin)
    xy = BiSeries.monomial(1, 1, order, ywin)
    x2y2 = xy * xy
    if cls is UD:
        return x2y2 * (xy + ch) / (1 - x2y2 - xy * ch)
    if cls is UU:
        w = x2y2 + xy * ch
        return w / (1 - w)
    if cls is DD:
        return x2y2.scale(2) / (s * (1 - xy * ch - x2y2))
    if cls is DU:
        total = BiSeries.zero(order, ywin)
        powers = [BiSeries.const(1, order, ywin)]
        for d in range(2, order + 1):
            inner = BiSeries.zero(order, ywin)
            for j in range(0, d):
                e = d - 1 - 2 * j
                if e < 0:
                    break
                while len(powers) <= e:
                    powers.append(powers[-1] * ch)
                inner = inner + powers[e].scale(comb(d - 1 - j, j))
            total = total + inner.mul_monomial(d, d)
        return (1 - s) / (1 + s) * xy + total.scale(2) / s
    raise UnsupportedStat(f"no right-to-left maxima closed form for {cls.value}")


def rlmax_gf_corrected(order: int = DEFAULT_ORDER, ywin: Optional[int] = None) -> BiSeries:
    """x^2y^2(x + C^)/(1 - xy(x + C^)), what the decomposition gives for up-down."""
    ywin = order if ywin is None else ywin
    ch = BiSeries.from_laurent(c_hat(order), order, ywin)
    x = BiSeries.monomial(1, 0, order, ywin)
    xy = BiSeries.monomial(1, 1, order, ywin)
    return xy * xy * (x + ch) / (1 - xy * (x + ch))


def rlmax_fixed_k(k: int, order: int = DEFAULT_ORDER) -> LaurentSeries:
    """x^k sum_{j=0}^{k-2} binom((k-2+j)/2, (k-2-j)/2) C^^j, the printed up-down count with k maxima."""
    if k < 2:
        raise ValueError("the display is stated for k >= 2")
    ch = c_hat(order)
    total = LaurentSeries.zero(order)
    power = LaurentSeries.const(1, order)
    for j in range(0, k - 1):
        c = binomial(Fraction(k - 2 + j, 2), Fraction(k - 2 - j, 2))
        if c:
            total = total + power.scale(c)
        power = power * ch
    return total.shift(k).truncate(order)


# -------------------------------------------------------------------------
# per-permutation statistics


def perm_stat(p: Permutation, stat: str) -> int:
    rows = np.array([p], dtype=np.int64).reshape(1, len(p))
    if stat == "rlmax":
        return int(rlmax_counts(rows)[0])
    if stat == "inc":
        return int(inc_counts(rows)[0])
    if stat.startswith("occ:"):
        return int(occurrence_counts(rows, parse_pattern(stat[4:]))[0])
    raise ValueError(f"unknown statistic {stat!r}")


def family_pattern(family: str, j: int):
    """The pattern whose occurrences x_j counts (j >= 2 for v12/v21)."""
    if family == "classical":
        return increasing(j)
    if j < 2:
        raise ValueError("x_1 counts length in the 12-3 and 21-3 families")
    if j == 2:
        return parse_pattern("12" if family == "v12" else "21")
    return prefixed("12" if family == "v12" else "21", j)


def oracle_table(family: str, cls: ClassLabel, a: Assignment, n_max: int,
                 oracle: Oracle | None = None) -> dict[tuple[int, int], int]:
    """Brute-force {(n, y-exponent): count} over 1-3-2 avoiders of the class."""
    oracle = oracle or default_oracle()
    avoid = (ConstraintSpec.avoid("1-3-2"),)
    out: dict[tuple[int, int], int] = {}
    for n in range(n_max + 1):
        rows = oracle.constrained_rows(n, cls, avoid)
        if len(rows) == 0:
            continue
        ys = np.full(len(rows), a.var(1)[1] * (n if family != "classical" else 0), dtype=np.int64)
        for j in range(1, n + 1):
            w = a.var(j)[1]
            if w == 0 or (family != "classical" and j == 1):
                continue
            ys += w * occurrence_counts(rows, family_pattern(family, j))
        for v, c in zip(*np.unique(ys, return_counts=True)):
            out[(n, int(v))] = int(c)
    return out


def series_table(s: BiSeries, n_max: int) -> dict[tuple[int, int], Fraction]:
    return {(n, m): c for n, m, c in s.table() if n <= n_max and c != 0}


def distribution_csv(table: dict[tuple[int, int], object]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "stat_value", "count"])
    for (n, m), c in sorted(table.items()):
        w.writerow([n, m, str(c)])
    return buf.getvalue()


def cell_key(family: str, cls: ClassLabel, a: Assignment, variant: str = "literal") -> str:
    base = f"S:{family}:{cls.value}:{a}"
    return base + (f":v={variant}" if family == "classical" else "")


def parse_cell(text: str) -> tuple:
    """Inverse of cell_key, also accepting RL:<cls> and RL:UD:k=<k>."""
    parts = text.split(":")
    if parts[0] == "RL":
        cls = ClassLabel.parse(parts[1])
        if len(parts) == 3 and parts[2].startswith("k="):
            return ("RL", cls, int(parts[2][2:]))
        if len(parts) == 2:
            return ("RL", cls, None)
    elif parts[0] == "S" and len(parts) in (4, 5):
        variant = "literal"
        if len(parts) == 5:
            if not parts[4].startswith("v="):
                raise ValueError(f"bad variant in {text!r}")
            variant = parts[4][2:]
        return ("S", parts[1], ClassLabel.parse(parts[2]), Assignment.parse(parts[3]), variant)
    raise ValueError(f"cannot parse statistics cell {text!r}")


def cells(assignments: Iterable[Assignment] = NAMED) -> list[str]:
    """Every supported statistics cell for the given assignments."""
    out = []
    for a in assignments:
        for cls in (UD, UU, DU, DD, A):
            for v in VARIANTS:
                out.append(cell_key("classical", cls, a, v))
        for fam in ("v12", "v21"):
            for cls in (UD, UU, A):
                out.append(cell_key(fam, cls, a))
    for cls in (UD, UU, DU, DD):
        out.append(f"RL:{cls.value}")
    for k in range(2, 7):
        out.append(f"RL:UD:k={k}")
    return out
