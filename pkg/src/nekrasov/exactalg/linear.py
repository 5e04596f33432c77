"""Affine-linear forms with rational coefficients.

A form is ``const + sum(c_i * x_i)`` where ``x_i`` indexes the ordered
variable list of the surrounding computation. Forms are immutable and hashable
so they can key the factor multisets of :class:`FactoredRational`.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import ZeroFormError

Rational = int | Fraction


def as_rational(x) -> Rational:
    """Collapse integral fractions to ``int``; leave other rationals alone."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


class LinearForm:
    __slots__ = ("const", "coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = (),
                 const: Rational = 0):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Rational] = {}
        for i, c in items:
            if i < 0:
                raise IndexError(f"negative variable index {i}")
            acc[i] = acc.get(i, 0) + c
        self.coeffs: tuple[tuple[int, Rational], ...] = tuple(
            sorted((i, as_rational(c)) for i, c in acc.items() if c != 0))
        self.const: Rational = as_rational(const)
        self._hash = hash((self.coeffs, self.const))

    @classmethod
    def var(cls, index: int, coeff: Rational = 1) -> LinearForm:
        return cls({index: coeff})

    @classmethod
    def constant(cls, value: Rational) -> LinearForm:
        return cls((), value)

    @classmethod
    def from_vector(cls, vec: Sequence[Rational], const: Rational = 0) -> LinearForm:
        return cls(enumerate(vec), const)

    # -- structure -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coeffs == other.coeffs and self.const == other.const

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.coeffs) or self.const != 0

    def is_constant(self) -> bool:
        return not self.coeffs

    def coeff(self, index: int) -> Rational:
        for i, c in self.coeffs:
            if i == index:
                return c
        return 0

    def as_dict(self) -> dict[int, Rational]:
        return dict(self.coeffs)

    def max_index(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else -1

    def leading(self) -> tuple[int, Rational] | None:
        """Leading (index, coefficient) under graded-lex order, i.e. lowest index."""
        return self.coeffs[0] if self.coeffs else None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, LinearForm):
            return LinearForm(self.coeffs + other.coeffs, self.const + other.const)
        if isinstance(other, (int, Fraction)):
            return LinearForm(self.coeffs, self.const + other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LinearForm(((i, -c) for i, c in self.coeffs), -self.const)

    def __sub__(self, other):
        if isinstance(other, (LinearForm, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return LinearForm(((i, c * k) for i, c in self.coeffs), self.const * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / k)

    def evaluate(self, point: Sequence[Rational]) -> Rational:
        total = self.const
        for i, c in self.coeffs:
            total += c * point[i]
        return total

    def substitute(self, images: Mapping[int, LinearForm]) -> LinearForm:
        """Replace ``x_i`` by ``images[i]``; unmapped variables stay put."""
        out = LinearForm.constant(self.const)
        for i, c in self.coeffs:
            img = images.get(i)
            out = out + (img * c if img is not None else LinearForm.var(i, c))
        return out

    def reindex(self, mapping: Mapping[int, int]) -> LinearForm:
        return LinearForm(((mapping[i], c) for i, c in self.coeffs), self.const)

    # -- normalization --------------------------------------------------
    def canonical(self) -> tuple[LinearForm, Fraction]:
        """Return ``(g, c)`` with ``self == c * g`` and ``g`` canonical.

        ``g`` has coprime integer coefficients and a positive leading
        coefficient (the constant term leads only for constant forms).
        """
        if not self:
            raise ZeroFormError("cannot normalize the zero form")
        values = [c for _, c in self.coeffs] + ([self.const] if self.const else [])
        num_g = 0
        den_l = 1
        for v in values:
            v = Fraction(v)
            num_g = gcd(num_g, v.numerator)
            den_l = lcm(den_l, v.denominator)
        scale = Fraction(num_g, den_l)
        if values[0] < 0:
            scale = -scale
        if scale == 1:
            return self, Fraction(1)
        inv = 1 / scale
        return LinearForm(((i, c * inv) for i, c in self.coeffs), self.const * inv), scale

    def is_canonical(self) -> bool:
        return bool(self) and self.canonical()[1] == 1

    # -- display --------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        parts = []
        for i, c in self.coeffs:
            name = names[i] if names else f"x{i}"
            if c == 1:
                term = name
            elif c == -1:
                term = f"-{name}"
            else:
                term = f"{c}*{name}"
            parts.append(term)
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LinearForm({self.to_str()})"


def lf_canonical(f: LinearForm) -> tuple[LinearForm, Fraction]:
    return f.canonical()
