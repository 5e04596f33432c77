"""Rational functions whose denominators are (mostly) products of linear forms.

A :class:`RationalFunction` stores a numerator polynomial and a denominator
kept as canonical linear factors with multiplicities, plus an optional
residual polynomial factor for quotients by non-linear numerators. Linear
factors that divide the numerator are cancelled eagerly, so whenever the
residual factor is trivial the stored form is the unique reduced form. No
multivariate gcd is ever computed.

The canonical presentation (``num`` / ``den`` properties and JSON) expands the
denominator and scales it so its leading graded-lex coefficient is 1.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .errors import (DivideByZeroError, InadmissiblePointError, VariableMismatchError,
                     ZeroDenominatorAfterSubstitutionError)
from .factored import FactoredRational, form_key
from .linear import LinearForm, Rational, as_rational
from .poly import MultiPoly, unpack

Scalar = (int, Fraction)


def _monomial_factors(p: MultiPoly):
    """Factor a single-term polynomial into (coefficient, [(var form, exp)])."""
    (k, c), = p.terms.items()
    exps = unpack(k, p.nvars)
    return c, [(LinearForm.var(i), e) for i, e in enumerate(exps) if e]


def split_linear(p: MultiPoly) -> tuple[Rational, dict[LinearForm, int], MultiPoly]:
    """Write ``p = c * prod(L**e) * rest`` using only cheap structural cases."""
    if p.is_zero():
        raise DivideByZeroError("zero polynomial")
    if p.is_constant():
        return p.constant_term(), {}, MultiPoly.one(p.vars)
    if len(p) == 1:
        c, fs = _monomial_factors(p)
        return c, dict(fs), MultiPoly.one(p.vars)
    if p.total_degree() == 1:
        n = p.nvars
        form = LinearForm([(i, c) for i, c in enumerate(_linear_coeffs(p, n)) if c], p.constant_term())
        g, c = form.canonical()
        return c, {g: 1}, MultiPoly.one(p.vars)
    lc = p.leading_coefficient()
    return lc, {}, p.scale(Fraction(1) / lc)


def _linear_coeffs(p: MultiPoly, n: int) -> list[Rational]:
    out = [0] * n
    for k, c in p.terms.items():
        if k:
            exps = unpack(k, n)
            out[exps.index(1)] = c
    return out


class RationalFunction:
    """Element of the field of fractions of ``Q[vars]``.

    Internally ``value == scale * num / (prod(L**e) * rest)`` where ``num`` is
    an integral polynomial with coprime coefficients, every ``L`` is a
    canonical linear form not dividing ``num``, and ``rest`` is monic (the
    constant 1 unless a non-linear polynomial was divided by).
    """

    __slots__ = ("vars", "_num", "_scale", "_den", "_rest")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        """General constructor from a numerator/denominator pair."""
        if den is None:
            den = MultiPoly.one(num.vars)
        if num.vars != den.vars:
            raise VariableMismatchError("numerator and denominator variables differ")
        c, factors, rest = split_linear(den)
        obj = RationalFunction._build(num.vars, num, Fraction(1) / Fraction(c), factors, rest)
        for slot in self.__slots__:
            setattr(self, slot, getattr(obj, slot))

    @classmethod
    def _raw(cls, vars, num, scale, den, rest) -> RationalFunction:
        obj = cls.__new__(cls)
        obj.vars = vars
        obj._num = num
        obj._scale = scale
        obj._den = den
        obj._rest = rest
        return obj

    @classmethod
    def _build(cls, vars, num: MultiPoly, scale: Rational, den: Mapping[LinearForm, int],
               rest: MultiPoly, try_cancel: Iterable[LinearForm] | None = None) -> RationalFunction:
        vars = tuple(vars)
        if num.is_zero() or scale == 0:
            return cls.zero(vars)
        c, num = num.primitive()
        scale = Fraction(scale) * c
        if rest.is_zero():
            raise DivideByZeroError("zero denominator")
        if rest.is_constant():
            scale /= rest.constant_term()
            rest = MultiPoly.one(vars)
        else:
            lc = rest.leading_coefficient()
            if lc != 1:
                rest = rest.scale(Fraction(1) / lc)
                scale /= lc
            rc, rp = rest.primitive()
            if rp == num:
                num, scale, rest = MultiPoly.one(vars), scale / rc, MultiPoly.one(vars)
        den = {f: e for f, e in den.items() if e}
        candidates = den.keys() if try_cancel is None else [f for f in try_cancel if f in den]
        for f in sorted(candidates, key=form_key):
            e = den[f]
            while e > 0:
                q = num.div_linear(f)
                if q is None:
                    break
                num = q
                e -= 1
            den[f] = e
        den = {f: e for f, e in den.items() if e}
        if any(not isinstance(v, int) for v in num.terms.values()):
            c, num = num.primitive()
            scale *= c
        return cls._raw(vars, num, as_rational(scale), den, rest)

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> RationalFunction:
        vars = tuple(vars)
        return cls._raw(vars, MultiPoly.zero(vars), 0, {}, MultiPoly.one(vars))

    @classmethod
    def constant(cls, vars: Sequence[str], value: Rational) -> RationalFunction:
        vars = tuple(vars)
        if value == 0:
            return cls.zero(vars)
        return cls._raw(vars, MultiPoly.one(vars), as_rational(value), {}, MultiPoly.one(vars))

    @classmethod
    def one(cls, vars: Sequence[str]) -> RationalFunction:
        return cls.constant(vars, 1)

    @classmethod
    def variable(cls, vars: Sequence[str], index: int) -> RationalFunction:
        vars = tuple(vars)
        return cls._raw(vars, MultiPoly.variable(vars, index), 1, {}, MultiPoly.one(vars))

    @classmethod
    def from_poly(cls, p: MultiPoly) -> RationalFunction:
        return cls._build(p.vars, p, 1, {}, MultiPoly.one(p.vars))

    @classmethod
    def from_linear(cls, vars: Sequence[str], form: LinearForm) -> RationalFunction:
        return cls.from_poly(MultiPoly.from_linear(vars, form))

    @classmethod
    def from_factored(cls, vars: Sequence[str], x: FactoredRational) -> RationalFunction:
        vars = tuple(vars)
        if x.max_index() >= len(vars):
            raise VariableMismatchError("factored rational uses a variable outside the list")
        if x.is_zero():
            return cls.zero(vars)
        num = MultiPoly.one(vars)
        den: dict[LinearForm, int] = {}
        for f, e in x.sorted_factors():
            if e > 0:
                for _ in range(e):
                    num = num.mul_linear(f)
            else:
                den[f] = -e
        return cls._raw(vars, num, x.scalar, den, MultiPoly.one(vars))

    @classmethod
    def sum_factored(cls, vars: Sequence[str], terms: Iterable[FactoredRational]) -> RationalFunction:
        """Exact sum of factored terms over their common factored denominator."""
        vars = tuple(vars)
        terms = [t for t in terms if not t.is_zero()]
        if not terms:
            return cls.zero(vars)
        lcm_den: dict[LinearForm, int] = {}
        common = 1
        for t in terms:
            common = lcm(common, Fraction(t.scalar).denominator)
            for f, e in t.factors.items():
                if e < 0 and -e > lcm_den.get(f, 0):
                    lcm_den[f] = -e
        order = sorted(lcm_den, key=form_key)
        total = MultiPoly.zero(vars)
        for t in terms:
            s = Fraction(t.scalar) * common
            p = MultiPoly.constant(vars, s.numerator)
            for f, e in t.sorted_factors():
                for _ in range(e):
                    p = p.mul_linear(f)
            for f in order:
                missing = lcm_den[f] + min(t.factors.get(f, 0), 0)
                for _ in range(missing):
                    p = p.mul_linear(f)
            total = total + p
        return cls._build(vars, total, Fraction(1, common), lcm_den, MultiPoly.one(vars))

    # -- structure -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def den_factors(self) -> list[tuple[LinearForm, int]]:
        return sorted(self._den.items(), key=lambda fe: form_key(fe[0]))

    def den_residual(self) -> MultiPoly:
        return self._rest

    def has_linear_denominator(self) -> bool:
        return self._rest.is_constant()

    def _den_scale(self) -> Rational:
        k: Rational = 1
        for f, e in self._den.items():
            k *= f.leading()[1] ** e
        return k

    @property
    def den(self) -> MultiPoly:
        """Expanded denominator, scaled to have leading coefficient 1."""
        p = self._rest
        for f, e in self.den_factors():
            for _ in range(e):
                p = p.mul_linear(f)
        return p.scale(Fraction(1) / p.leading_coefficient())

    @property
    def num(self) -> MultiPoly:
        """Numerator matching :attr:`den`."""
        return self._num.scale(Fraction(self._scale) / self._den_scale())

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return not self._den and self._rest.is_constant()

    def is_constant(self) -> bool:
        return self.is_polynomial() and self._num.is_constant()

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError("not a constant")
        return as_rational(self._scale * self._num.constant_term()) if self._num else 0

    def _check(self, other: RationalFunction):
        if self.vars != other.vars:
            raise VariableMismatchError(f"{self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            self._check(other)
            return other
        if isinstance(other, Scalar):
            return RationalFunction.constant(self.vars, other)
        if isinstance(other, MultiPoly):
            return RationalFunction.from_poly(other)
        return None

    # -- field operations -------------------------------------------------
    def _aligned(self, other: RationalFunction):
        """Numerators (without scales) of self and other over a common denominator."""
        den = dict(self._den)
        for f, e in other._den.items():
            if e > den.get(f, 0):
                den[f] = e
        n1, n2 = self._num, other._num
        for f in sorted(den, key=form_key):
            for _ in range(den[f] - self._den.get(f, 0)):
                n1 = n1.mul_linear(f)
            for _ in range(den[f] - other._den.get(f, 0)):
                n2 = n2.mul_linear(f)
        if self._rest == other._rest:
            rest = self._rest
        else:
            rest = self._rest * other._rest
            n1 = n1 * other._rest
            n2 = n2 * self._rest
        return n1, n2, den, rest

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        n1, n2, den, rest = self._aligned(other)
        s1, s2 = Fraction(self._scale), Fraction(other._scale)
        q = lcm(s1.denominator, s2.denominator)
        total = n1.scale(s1.numerator * (q // s1.denominator)) + n2.scale(s2.numerator * (q // s2.denominator))
        return RationalFunction._build(self.vars, total, Fraction(1, q), den, rest)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.vars, self._num, -self._scale, self._den, self._rest)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if other == 0:
                return RationalFunction.zero(self.vars)
            return RationalFunction._raw(self.vars, self._num, as_rational(self._scale * other),
                                         self._den, self._rest)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.vars)
        one = MultiPoly.one(self.vars)
        # cross-cancel first so the product numerator stays small
        a = RationalFunction._build(self.vars, self._num, 1, dict(other._den), one)
        b = RationalFunction._build(self.vars, other._num, 1, dict(self._den), one)
        den = dict(a._den)
        for f, e in b._den.items():
            den[f] = den.get(f, 0) + e
        rest = self._rest * other._rest
        scale = Fraction(self._scale) * other._scale * a._scale * b._scale
        return RationalFunction._build(self.vars, a._num * b._num, scale, den, rest, try_cancel=())

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise DivideByZeroError("inverse of the zero rational function")
        num = self._rest
        for f, e in self.den_factors():
            for _ in range(e):
                num = num.mul_linear(f)
        c, factors, rest = split_linear(self._num)
        return RationalFunction._build(self.vars, num, Fraction(1) / (Fraction(self._scale) * c),
                                       factors, rest, try_cancel=())

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            if other == 0:
                raise DivideByZeroError("division by zero")
            return RationalFunction._raw(self.vars, self._num, as_rational(Fraction(self._scale) / other),
                                         self._den, self._rest)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = RationalFunction.one(self.vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            other = RationalFunction.constant(self.vars, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.vars != other.vars:
            return False
        return symbolic_equal(self, other)

    __hash__ = None

    # -- evaluation / substitution ---------------------------------------
    def evaluate(self, point: Sequence[Rational]) -> Rational:
        den: Rational = self._rest.evaluate(point) if not self._rest.is_constant() else 1
        for f, e in self._den.items():
            den *= f.evaluate(point) ** e
        if den == 0:
            raise InadmissiblePointError("denominator vanishes at the point")
        return as_rational(Fraction(self._num.evaluate(point)) * self._scale / den)

    def substitute(self, images: Mapping[int, LinearForm],
                   target_vars: Sequence[str] | None = None) -> RationalFunction:
        """Substitute linear forms for variables (unmapped ones stay, by name)."""
        tvars = tuple(target_vars) if target_vars is not None else self.vars
        full: dict[int, LinearForm] = dict(images)
        if tvars != self.vars:
            for i, name in enumerate(self.vars):
                if i not in full and name in tvars:
                    full[i] = LinearForm.var(tvars.index(name))
        num = self._num.substitute(full, tvars)
        rest = self._rest.substitute(full, tvars) if not self._rest.is_constant() else MultiPoly.one(tvars)
        if rest.is_zero():
            raise ZeroDenominatorAfterSubstitutionError("residual denominator maps to zero")
        den: dict[LinearForm, int] = {}
        scale = Fraction(self._scale)
        for f, e in self._den.items():
            g = LinearForm.constant(f.const)
            for i, c in f.coeffs:
                img = full.get(i)
                if img is None:
                    if tvars is not self.vars:
                        raise ValueError(f"variable {self.vars[i]} has no image")
                    img = LinearForm.var(i)
                g = g + img * c
            if not g:
                raise ZeroDenominatorAfterSubstitutionError(f"factor {f.to_str(self.vars)} maps to zero")
            h, c = g.canonical()
            if h.is_constant():
                scale /= (c * h.const) ** e
                continue
            scale /= c ** e
            den[h] = den.get(h, 0) + e
        return RationalFunction._build(tvars, num, scale, den, rest)

    def extend_vars(self, new_vars: Sequence[str]) -> RationalFunction:
        new_vars = tuple(new_vars)
        return RationalFunction._raw(new_vars, self._num.extend_vars(new_vars), self._scale,
                                     dict(self._den), self._rest.extend_vars(new_vars))

    def degree_in(self, index: int) -> tuple[int, int]:
        """(numerator degree, denominator degree) in one variable."""
        d = self._rest.degree_in(index) if not self._rest.is_constant() else 0
        for f, e in self._den.items():
            if f.coeff(index):
                d += e
        return self._num.degree_in(index), d

    def numerator_coefficient(self, index: int, degree: int) -> RationalFunction:
        """Coefficient of ``x**degree`` in the numerator, over the same denominator.

        Only meaningful when the denominator does not involve ``x``.
        """
        if self.degree_in(index)[1]:
            raise ValueError(f"denominator depends on {self.vars[index]}")
        return RationalFunction._build(self.vars, self._num.coefficient_in(index, degree), self._scale,
                                       dict(self._den), self._rest)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {"vars": list(self.vars), "num": self.num.json_terms(), "den": self.den.json_terms()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def den_factors_json(self) -> list:
        return [[[[i, str(c)] for i, c in f.coeffs], str(f.const), e] for f, e in self.den_factors()]

    @classmethod
    def from_dict(cls, data: Mapping, den_factors: list | None = None) -> RationalFunction:
        vars = tuple(data["vars"])
        num = MultiPoly.from_exponents(vars, [(e, Fraction(c)) for e, c in data["num"]])
        den = MultiPoly.from_exponents(vars, [(e, Fraction(c)) for e, c in data["den"]])
        if den_factors is None:
            return cls(num, den)
        # divide the expanded denominator exactly by the listed linear factors;
        # whatever remains (the constant 1 for linear denominators) is kept as is
        factors: dict[LinearForm, int] = {}
        rest = den
        for coeffs, const, e in den_factors:
            g, _ = LinearForm([(i, Fraction(c)) for i, c in coeffs], Fraction(const)).canonical()
            for _ in range(e):
                q = rest.div_linear(g)
                if q is None:
                    raise ValueError("denominator factorization does not match the expanded denominator")
                rest = q
            factors[g] = factors.get(g, 0) + e
        return cls._build(vars, num, 1, factors, rest, try_cancel=())

    @classmethod
    def from_json(cls, text: str) -> RationalFunction:
        return cls.from_dict(json.loads(text))

    def to_str(self) -> str:
        n = self.num.to_str()
        if self.is_polynomial():
            return n
        return f"({n}) / ({self.den.to_str()})"

    def __repr__(self):
        return f"RationalFunction({self.to_str()})"


def symbolic_equal(x: RationalFunction, y: RationalFunction) -> bool:
    """Exact equality by cross-multiplication over the common factored denominator."""
    if x.vars != y.vars:
        raise VariableMismatchError(f"{x.vars} vs {y.vars}")
    if x._den == y._den and x._rest == y._rest:
        n1, n2 = x._num, y._num
    else:
        n1, n2, _, _ = x._aligned(y)
    return n1.scale(x._scale) == n2.scale(y._scale)


def rf_add(x, y):
    return x + y


def rf_sub(x, y):
    return x - y


def rf_mul(x, y):
    return x * y


def rf_div(x, y):
    return x / y


def rf_substitute(x: RationalFunction, images: Mapping[int, LinearForm],
                  target_vars: Sequence[str] | None = None) -> RationalFunction:
    return x.substitute(images, target_vars)
