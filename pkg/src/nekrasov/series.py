"""Truncated power series in q and assembly of the partition function Z.

Coefficients may be any exact field elements: :class:`RationalFunction` for
symbolic work, or plain ``Fraction`` values when everything is evaluated at a
sampled point.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .exactalg import RationalFunction
from .localization import (MATTER, Context, alpha_n, alpha_value, localization_sum,
                           localization_value, psi_integrand)


class BadConstantTermError(ValueError):
    """log needs constant term 1, exp needs 0, division needs a unit."""


def _zero_like(c):
    return c * 0


class QSeries:
    """``c_0 + c_1 q + ... + c_N q^N`` modulo ``q^(N+1)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    @classmethod
    def constant(cls, c, order: int) -> QSeries:
        return cls([c] + [_zero_like(c)] * order)

    def truncate(self, order: int) -> QSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return QSeries(self.coeffs[:order + 1])

    def _common(self, other: QSeries) -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return QSeries((self.coeffs[0] + other,) + self.coeffs[1:])
        n = self._common(other)
        return QSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([c * other for c in self.coeffs])
        n = self._common(other)
        out = []
        for k in range(n + 1):
            acc = self.coeffs[0] * other.coeffs[k]
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return QSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([c / other for c in self.coeffs])
        n = self._common(other)
        y0 = other.coeffs[0]
        if y0 == 0:
            raise BadConstantTermError("division by a series with zero constant term")
        out = []
        for k in range(n + 1):
            acc = self.coeffs[k]
            for j in range(1, k + 1):
                acc = acc - other.coeffs[j] * out[k - j]
            out.append(acc / y0)
        return QSeries(out)

    def log(self) -> QSeries:
        """Formal logarithm; requires constant term 1."""
        f = self.coeffs
        if f[0] != 1:
            raise BadConstantTermError("log needs constant term 1")
        out = [_zero_like(f[0])]
        for n in range(1, len(f)):
            acc = f[n] * n
            for k in range(1, n):
                acc = acc - out[k] * f[n - k] * k
            out.append(acc / n)
        return QSeries(out)

    def exp(self) -> QSeries:
        """Formal exponential; requires constant term 0."""
        g = self.coeffs
        if g[0] != 0:
            raise BadConstantTermError("exp needs constant term 0")
        out = [g[0] + 1]
        for n in range(1, len(g)):
            acc = g[1] * out[n - 1]
            for k in range(2, n + 1):
                acc = acc + g[k] * out[n - k] * k
            out.append(acc / n)
        return QSeries(out)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = QSeries.constant(self.coeffs[0] * 0 + 1, self.order)
        for _ in range(e):
            result = result * self
        return result

    def map(self, fn: Callable) -> QSeries:
        return QSeries([fn(c) for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and all(x == y for x, y in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def to_dict(self) -> dict:
        return {"order": self.order, "coeffs": [c.to_dict() for c in self.coeffs]}

    @classmethod
    def from_dict(cls, data) -> QSeries:
        coeffs = [RationalFunction.from_dict(c) for c in data["coeffs"]]
        if len(coeffs) != data["order"] + 1:
            raise ValueError("order does not match the number of coefficients")
        return cls(coeffs)

    def __repr__(self):
        return f"QSeries({list(self.coeffs)!r})"


def falling_factorial(u, k: int):
    """``u (u-1) ... (u-k+1)``; the empty product is 1."""
    out = u * 0 + 1
    for i in range(k):
        out = out * (u - i)
    return out


def binom_pow(s: int, u, order: int) -> QSeries:
    """``(1 - s q)^u`` to the given order, for ``s`` in {+1, -1}."""
    if s not in (1, -1):
        raise ValueError("s must be +1 or -1")
    if isinstance(u, int):
        u = Fraction(u)
    return QSeries([falling_factorial(u, k) * ((-s) ** k) / factorial(k) for k in range(order + 1)])


VARIANTS = ("standard", "negated_eps", "unit", "tangent_twist")


def z_coefficient(ctx: Context, n: int, variant: str = "standard", *, point=None,
                  twist=None, workers: int = 1):
    """n-th coefficient of Z, symbolic or (with ``point``) evaluated at a point.

    ``negated_eps`` is the standard coefficient with e1, e2 replaced by -e1, -e2.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "negated_eps":
        if point is not None:
            flipped = [-point[0], -point[1], *point[2:]]
            return z_coefficient(ctx, n, "standard", point=flipped)
        return alpha_n(ctx, n, workers).substitute(ctx.sign_flip(eps=True))
    integrand = MATTER if variant == "standard" else psi_integrand(ctx, variant, twist)
    if point is not None:
        if variant == "standard":
            return alpha_value(ctx, n, point, workers)
        return localization_value(ctx, n, integrand, point, workers)
    if variant == "standard":
        return alpha_n(ctx, n, workers)
    return localization_sum(ctx, n, integrand, workers)


def assemble_Z(ctx: Context, order: int, variant: str = "standard", *, point=None,
               twist=None, workers: int = 1) -> QSeries:
    """``sum_n c_n q^n`` to the given order for the chosen integrand variant."""
    if order < 0:
        raise ValueError("order must be non-negative")
    return QSeries([z_coefficient(ctx, n, variant, point=point, twist=twist, workers=workers)
                    for n in range(order + 1)])
