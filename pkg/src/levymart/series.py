"""Truncated formal power series in one variable.

Coefficients may be Fractions or :class:`MultiPoly` values (series over a
polynomial ring).  A series of order ``n`` knows its coefficients of
``u**0 .. u**n`` exactly; asking for anything beyond that raises
:class:`TruncationError` instead of silently returning zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, List, Sequence

from .errors import InvalidArgumentError, TruncationError
from .ratpoly import MultiPoly


def _zero_like(c):
    if isinstance(c, MultiPoly):
        return MultiPoly.zero(c.variables)
    return Fraction(0)


def _one_like(c):
    if isinstance(c, MultiPoly):
        return MultiPoly.constant(c.variables, 1)
    return Fraction(1)


def _is_zero(c) -> bool:
    return c.is_zero() if isinstance(c, MultiPoly) else c == 0


class TruncatedSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise InvalidArgumentError("a series needs at least the constant term")
        self.coeffs: List = [c if isinstance(c, MultiPoly) else Fraction(c) for c in coeffs]

    @classmethod
    def from_egf(cls, values: Sequence) -> "TruncatedSeries":
        """Series with coefficients ``values[k] / k!``."""
        return cls([v * Fraction(1, factorial(k)) for k, v in enumerate(values)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        if k < 0:
            raise IndexError(k)
        if k > self.order:
            raise TruncationError(f"coefficient {k} requested from a series of order {self.order}")
        return self.coeffs[k]

    def egf_coefficient(self, k: int):
        """``k! * [u^k]`` i.e. the k-th derivative at 0."""
        return self[k] * factorial(k)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        z = _zero_like(self.coeffs[0])
        return TruncatedSeries([z + other] + [z] * self.order)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        n = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self.coeffs])

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs])
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = _zero_like(self.coeffs[0] if isinstance(self.coeffs[0], MultiPoly) else other.coeffs[0])
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if _is_zero(a) or _is_zero(b):
                    continue
                acc = acc + a * b
            out.append(acc)
        return TruncatedSeries(out)

    def __rmul__(self, other) -> "TruncatedSeries":
        return TruncatedSeries([other * c for c in self.coeffs])

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            raise InvalidArgumentError("negative powers are not supported")
        result = TruncatedSeries([_one_like(self.coeffs[0])] + [_zero_like(self.coeffs[0])] * self.order)
        for _ in range(k):
            result = result * self
        return result

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            raise TruncationError("derivative of an order-0 series has no known terms")
        return TruncatedSeries([self.coeffs[k] * k for k in range(1, self.order + 1)])

    def integral(self) -> "TruncatedSeries":
        """Antiderivative vanishing at 0 (order grows by one)."""
        z = _zero_like(self.coeffs[0])
        return TruncatedSeries([z] + [c * Fraction(1, k + 1) for k, c in enumerate(self.coeffs)])

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term, via E' = a' E."""
        if not _is_zero(self.coeffs[0]):
            raise InvalidArgumentError("exp needs a zero constant term for exact coefficients")
        n = self.order
        da = [self.coeffs[k] * k for k in range(n + 1)]  # k a_k
        e = [_one_like(self.coeffs[0])]
        for m in range(1, n + 1):
            acc = _zero_like(self.coeffs[0])
            for k in range(1, m + 1):
                if _is_zero(da[k]):
                    continue
                acc = acc + da[k] * e[m - k]
            e.append(acc * Fraction(1, m))
        return TruncatedSeries(e)

    def map(self, fn: Callable) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.coeffs!r})"
