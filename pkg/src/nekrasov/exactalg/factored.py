"""Products of linear forms with integer exponents, times a rational scalar."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DivideByZeroScalarError, InadmissiblePointError
from .linear import LinearForm, Rational, as_rational


def form_key(form: LinearForm):
    return (form.coeffs, form.const)


class FactoredRational:
    """``scalar * prod(L**e)`` over canonical linear forms ``L``.

    Non-canonical input forms are normalized on construction and their scale
    is folded into ``scalar``; factors whose exponents cancel are dropped.
    """

    __slots__ = ("scalar", "factors")

    def __init__(self, scalar: Rational = 1,
                 factors: Mapping[LinearForm, int] | Iterable[tuple[LinearForm, int]] = ()):
        items = factors.items() if isinstance(factors, Mapping) else factors
        scalar = Fraction(scalar)
        acc: dict[LinearForm, int] = {}
        for form, e in items:
            if e == 0:
                continue
            g, c = form.canonical()
            if g.is_constant():
                scalar *= (c * g.const) ** e
                continue
            if c != 1:
                scalar *= c ** e
            acc[g] = acc.get(g, 0) + e
        self.scalar: Rational = as_rational(scalar)
        if self.scalar == 0:
            self.factors: dict[LinearForm, int] = {}
        else:
            self.factors = {g: e for g, e in acc.items() if e}

    @classmethod
    def _raw(cls, scalar: Rational, factors: dict[LinearForm, int]) -> FactoredRational:
        obj = cls.__new__(cls)
        obj.scalar = as_rational(scalar)
        obj.factors = factors if obj.scalar != 0 else {}
        return obj

    @classmethod
    def from_forms(cls, numerator: Iterable[LinearForm] = (),
                   denominator: Iterable[LinearForm] = (), scalar: Rational = 1) -> FactoredRational:
        return cls(scalar, [(f, 1) for f in numerator] + [(f, -1) for f in denominator])

    # -- structure -------------------------------------------------------
    def sorted_factors(self) -> list[tuple[LinearForm, int]]:
        return sorted(self.factors.items(), key=lambda fe: form_key(fe[0]))

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self.scalar == other.scalar and self.factors == other.factors

    def __hash__(self):
        return hash((self.scalar, frozenset(self.factors.items())))

    def is_zero(self) -> bool:
        return self.scalar == 0

    def numerator_degree(self) -> int:
        return sum(e for e in self.factors.values() if e > 0)

    def denominator_degree(self) -> int:
        return -sum(e for e in self.factors.values() if e < 0)

    def max_index(self) -> int:
        return max((f.max_index() for f in self.factors), default=-1)

    # -- arithmetic -----------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FactoredRational._raw(self.scalar * other, dict(self.factors))
        if not isinstance(other, FactoredRational):
            return NotImplemented
        out = dict(self.factors)
        for f, e in other.factors.items():
            v = out.get(f, 0) + e
            if v:
                out[f] = v
            else:
                del out[f]
        return FactoredRational._raw(self.scalar * other.scalar, out)

    __rmul__ = __mul__

    def inverse(self) -> FactoredRational:
        if self.scalar == 0:
            raise DivideByZeroScalarError("inverse of a zero factored rational")
        return FactoredRational._raw(Fraction(1) / self.scalar, {f: -e for f, e in self.factors.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivideByZeroScalarError("division by zero scalar")
            return FactoredRational._raw(Fraction(self.scalar) / other, dict(self.factors))
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FactoredRational._raw(Fraction(self.scalar) ** e, {f: k * e for f, k in self.factors.items()} if e else {})

    def __neg__(self):
        return self * -1

    # -- evaluation -----------------------------------------------------
    def evaluate(self, point: Sequence[Rational]) -> Rational:
        num: Rational = self.scalar
        den: Rational = 1
        for f, e in self.factors.items():
            v = f.evaluate(point)
            if e > 0:
                num *= v ** e
            else:
                if v == 0:
                    raise InadmissiblePointError(f"factor {f!r} vanishes")
                den *= v ** (-e)
        return as_rational(Fraction(num) / den)

    def substitute(self, images: Mapping[int, LinearForm]) -> FactoredRational:
        return FactoredRational(self.scalar, [(f.substitute(images), e) for f, e in self.factors.items()])

    def expand(self, vars: Sequence[str]):
        from .ratfunc import RationalFunction
        return RationalFunction.from_factored(vars, self)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        parts = [str(self.scalar)]
        for f, e in self.sorted_factors():
            s = f"({f.to_str(names)})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts)

    def __repr__(self):
        return f"FactoredRational({self.to_str()})"


def fr_mul(x: FactoredRational, y: FactoredRational) -> FactoredRational:
    return x * y


def fr_div(x: FactoredRational, y: FactoredRational) -> FactoredRational:
    return x / y


def fr_expand(x: FactoredRational, vars: Sequence[str]):
    return x.expand(vars)
