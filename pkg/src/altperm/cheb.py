"""Chebyshev polynomials of the second kind, their reversed companions,
the R_k kernel, and a truncated continued-fraction evaluator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .series import BiSeries, LaurentSeries

Monomial = tuple[int, int]  # (x-exponent, y-exponent), coefficient 1


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[Fraction, ...]

    @classmethod
    def of(cls, coeffs: Sequence) -> "Polynomial":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial.of([u + v for u, v in zip(a, b)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "Polynomial":
        return Polynomial.of([c * a for a in self.coeffs])

    def shift(self, k: int) -> "Polynomial":
        """Multiply by the variable to the power k >= 0."""
        return Polynomial.of([0] * k + list(self.coeffs)) if self.coeffs else self

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def to_series(self, order: int) -> LaurentSeries:
        return LaurentSeries.make(0, self.coeffs, order)


def chebyshev_u(r: int) -> Polynomial:
    if r < -1:
        raise ValueError(f"U_r is defined here for r >= -1, got r={r}")
    return _cheb_u(r)


@lru_cache(maxsize=None)
def _cheb_u(r: int) -> Polynomial:
    if r == -1:
        return Polynomial.of([])
    if r == 0:
        return Polynomial.of([1])
    return _cheb_u(r - 1).shift(1).scale(2) - _cheb_u(r - 2) if r >= 2 else Polynomial.of([0, 2])


def reversed_u(m: int) -> Polynomial:
    """p_m(x) = x^m U_m(1/(2x)); p_m = p_{m-1} - x^2 p_{m-2}, p_{-1}=0, p_0=p_1=1."""
    if m < -1:
        raise ValueError(f"p_m is defined here for m >= -1, got m={m}")
    return _rev_u(m)


@lru_cache(maxsize=None)
def _rev_u(m: int) -> Polynomial:
    if m == -1:
        return Polynomial.of([])
    if m in (0, 1):
        return Polynomial.of([1])
    return _rev_u(m - 1) - _rev_u(m - 2).shift(2)


def u_half(m: int, order: int) -> LaurentSeries:
    """U_m(1/(2x)) as the finite Laurent polynomial x^{-m} p_m(x)."""
    return reversed_u(m).to_series(order + m).shift(-m) if m >= 0 else LaurentSeries.zero(order)


def r_series(k: int, order: int) -> LaurentSeries:
    """R_0 = 0, R_k = 1 / (1 - x R_{k-1})."""
    if k < 0:
        raise ValueError("R_k needs k >= 0")
    x = LaurentSeries.monomial(1, order)
    r = LaurentSeries.zero(order)
    for _ in range(k):
        r = 1 / (1 - x * r)
    return r.truncate(order)


# -------------------------------------------------------------------------
# continued fractions


class CFDepthError(RuntimeError):
    pass


Level = tuple[Monomial, Monomial, Monomial]


@dataclass(frozen=True)
class CFSpec:
    """A continued fraction V_0 where

        V_d = -n_d / (p_d - 1 / (q_d + V_{d+1})),   V_depth = 0,

    and rule(d) = (n_d, p_d, q_d) gives the three monomials of level d.
    The first-kind nesting uses p_d = q_d; the second kind keeps q_d = x_1.
    """
    depth: int
    rule: Callable[[int], Level]
    shape: str = "st1"

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("continued fraction depth must be >= 1")

    def with_depth(self, depth: int) -> "CFSpec":
        return CFSpec(depth, self.rule, self.shape)


def default_depth(order: int) -> int:
    return -(-order // 2) + 2


def _cf_value(spec: CFSpec, order: int, ywin: int | None) -> BiSeries:
    tail = BiSeries.zero(order, ywin)
    for d in reversed(range(spec.depth)):
        (nx, ny), (px, py), (qx, qy) = spec.rule(d)
        if nx < 1:
            raise ValueError(f"level {d} numerator x^{nx} must have positive x-degree")
        if px < 1:
            raise ValueError(f"level {d} partial denominator x^{px} must have positive x-degree")
        inner = BiSeries.monomial(qx, qy, order, ywin) + tail
        # -n/(p - 1/inner) == n*inner / (1 - p*inner)
        den = 1 - inner.mul_monomial(px, py)
        tail = inner.mul_monomial(nx, ny) / den
    return tail


def cf_eval(spec: CFSpec, order: int, ywin: int | None = None, check: bool = True) -> BiSeries:
    value = _cf_value(spec, order, ywin)
    if check:
        deeper = _cf_value(spec.with_depth(spec.depth + 1), order, ywin)
        if not value.equal_to_order(deeper, order):
            raise CFDepthError(f"depth {spec.depth} is not stable to order {order}; use a deeper expansion")
    return value
