"""Sparse multivariate polynomials over the rationals.

Exponent vectors are packed into a single ``int`` (16 bits per variable, first
variable in the most significant field) so that multiplying monomials is one
integer addition and comparing packed keys of equal degree is lexicographic
comparison of the exponent vectors. Coefficients are ``int`` whenever they are
integral and :class:`fractions.Fraction` otherwise.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import VariableMismatchError
from .linear import LinearForm, Rational, as_rational

BITS = 16
MASK = (1 << BITS) - 1


def _qdiv(a: Rational, c: Rational) -> Rational:
    if isinstance(a, int) and isinstance(c, int):
        q, r = divmod(a, c)
        if r == 0:
            return q
        return Fraction(a, c)
    return as_rational(Fraction(a) / c)


def _denominator_lcm(terms: Mapping[int, Rational]) -> int:
    d = 1
    for c in terms.values():
        if not isinstance(c, int):
            d = lcm(d, c.denominator)
    return d


def pack(exps: Sequence[int]) -> int:
    key = 0
    for e in exps:
        if e < 0 or e > MASK:
            raise ValueError(f"exponent {e} out of range")
        key = (key << BITS) | e
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & MASK
        key >>= BITS
    return tuple(out)


def key_degree(key: int) -> int:
    d = 0
    while key:
        d += key & MASK
        key >>= BITS
    return d


class MultiPoly:
    """Polynomial in the ordered variables ``vars``.

    Instances are treated as immutable; every operation returns a new object.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[int, Rational] | None = None):
        self.vars = tuple(vars)
        self.terms: dict[int, Rational] = {}
        if terms:
            self.terms = {k: as_rational(c) for k, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict[int, Rational]) -> MultiPoly:
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> MultiPoly:
        return cls._raw(tuple(vars), {})

    @classmethod
    def constant(cls, vars: Sequence[str], value: Rational) -> MultiPoly:
        value = as_rational(value)
        return cls._raw(tuple(vars), {0: value} if value else {})

    @classmethod
    def one(cls, vars: Sequence[str]) -> MultiPoly:
        return cls.constant(vars, 1)

    @classmethod
    def variable(cls, vars: Sequence[str], index: int) -> MultiPoly:
        vars = tuple(vars)
        return cls._raw(vars, {1 << (BITS * (len(vars) - 1 - index)): 1})

    @classmethod
    def from_linear(cls, vars: Sequence[str], form: LinearForm) -> MultiPoly:
        vars = tuple(vars)
        n = len(vars)
        if form.max_index() >= n:
            raise VariableMismatchError("linear form uses a variable outside the list")
        terms = {1 << (BITS * (n - 1 - i)): c for i, c in form.coeffs}
        if form.const:
            terms[0] = form.const
        return cls._raw(vars, terms)

    @classmethod
    def from_exponents(cls, vars: Sequence[str],
                       terms: Mapping[Sequence[int], Rational] | Iterable[tuple[Sequence[int], Rational]]) -> MultiPoly:
        vars = tuple(vars)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Rational] = {}
        for exps, c in items:
            if len(exps) != len(vars):
                raise ValueError("exponent vector length does not match variables")
            k = pack(exps)
            acc[k] = acc.get(k, 0) + c
        return cls(vars, acc)

    # -- basic structure -------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def _shift(self, index: int) -> int:
        return BITS * (len(self.vars) - 1 - index)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> Rational:
        return self.terms.get(0, 0)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def exponent_items(self) -> list[tuple[tuple[int, ...], Rational]]:
        n = self.nvars
        return [(unpack(k, n), c) for k, c in self.terms.items()]

    def sorted_keys(self) -> list[int]:
        """Packed keys in descending graded-lex order."""
        return sorted(self.terms, key=lambda k: (key_degree(k), k), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], Rational]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        k = max(self.terms, key=lambda k: (key_degree(k), k))
        return unpack(k, self.nvars), self.terms[k]

    def leading_coefficient(self) -> Rational:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        return max((key_degree(k) for k in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        s = self._shift(index)
        return max(((k >> s) & MASK for k in self.terms), default=-1)

    def coefficient_in(self, index: int, degree: int) -> MultiPoly:
        """Coefficient of ``x_index**degree`` as a polynomial free of ``x_index``."""
        s = self._shift(index)
        strip = degree << s
        out = {k - strip: c for k, c in self.terms.items() if (k >> s) & MASK == degree}
        return MultiPoly._raw(self.vars, out)

    def _check(self, other: MultiPoly) -> None:
        if self.vars != other.vars:
            raise VariableMismatchError(f"{self.vars} vs {other.vars}")

    # -- ring operations ------------------------------------------------
    def __neg__(self):
        return MultiPoly._raw(self.vars, {k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.vars, other)
        elif not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        a, b = (self.terms, other.terms) if len(self.terms) >= len(other.terms) else (other.terms, self.terms)
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: Rational) -> MultiPoly:
        k = as_rational(k)
        if k == 0:
            return MultiPoly.zero(self.vars)
        if k == 1:
            return self
        if isinstance(k, int):
            return MultiPoly._raw(self.vars, {m: c * k for m, c in self.terms.items()})
        return MultiPoly._raw(self.vars, {m: as_rational(c * k) for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, LinearForm):
            return self.mul_linear(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return MultiPoly._raw(self.vars, {k + kb: c * cb for k, c in a.items()})
        # clear denominators so the quadratic loop runs on machine-friendly ints
        da, db = _denominator_lcm(a), _denominator_lcm(b)
        if da != 1:
            a = {k: int(c * da) for k, c in a.items()}
        if db != 1:
            b = {k: int(c * db) for k, c in b.items()}
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        d = da * db
        if d == 1:
            return MultiPoly._raw(self.vars, {k: v for k, v in out.items() if v})
        return MultiPoly._raw(self.vars, {k: _qdiv(v, d) for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.one(self.vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_linear(self, form: LinearForm) -> MultiPoly:
        """Multiply by a linear form without building it as a polynomial."""
        n = self.nvars
        out: dict[int, Rational] = {}
        get = out.get
        for i, a in form.coeffs:
            unit = 1 << (BITS * (n - 1 - i))
            for k, c in self.terms.items():
                m = k + unit
                out[m] = get(m, 0) + c * a
        if form.const:
            a = form.const
            for k, c in self.terms.items():
                out[k] = get(k, 0) + c * a
        return MultiPoly._raw(self.vars, {k: v for k, v in out.items() if v})

    def div_linear(self, form: LinearForm) -> MultiPoly | None:
        """Exact quotient by a non-constant linear form, or ``None``."""
        lead = form.leading()
        if lead is None:
            raise ValueError("division by a constant form; use scale()")
        if not self.terms:
            return self
        v, cv = lead
        n = self.nvars
        sv = BITS * (n - 1 - v)
        rest = [(1 << (BITS * (n - 1 - i)), c) for i, c in form.coeffs[1:]]
        const = form.const
        slices: dict[int, dict[int, Rational]] = {}
        for k, c in self.terms.items():
            d = (k >> sv) & MASK
            slices.setdefault(d, {})[k - (d << sv)] = c
        top = max(slices)
        if top == 0:
            return None
        # over Z a primitive divisor leaves an integral quotient (Gauss), so a
        # remainder in any coefficient proves non-divisibility early
        integral = (isinstance(form.const, int) and all(isinstance(c, int) for _, c in form.coeffs)
                    and gcd(form.const, *(c for _, c in form.coeffs)) == 1
                    and all(isinstance(c, int) for c in self.terms.values()))

        def times_rest(q: dict[int, Rational]) -> dict[int, Rational]:
            out: dict[int, Rational] = {}
            get = out.get
            for unit, a in rest:
                for k, c in q.items():
                    m = k + unit
                    out[m] = get(m, 0) + c * a
            if const:
                for k, c in q.items():
                    out[k] = get(k, 0) + c * const
            return out

        quotient: dict[int, Rational] = {}
        q_prev: dict[int, Rational] = {}
        for d in range(top, -1, -1):
            cur = dict(slices.get(d, {}))
            if q_prev:
                for k, c in times_rest(q_prev).items():
                    val = cur.get(k, 0) - c
                    if val:
                        cur[k] = val
                    else:
                        cur.pop(k, None)
            if d == 0:
                if cur:
                    return None
                break
            if integral:
                q_prev = {}
                for k, c in cur.items():
                    if not isinstance(c, int):
                        integral = False
                        break
                    q, r = divmod(c, cv)
                    if r:
                        return None
                    q_prev[k] = q
            if not integral:
                q_prev = {k: _qdiv(c, cv) for k, c in cur.items()}
            shift = (d - 1) << sv
            for k, c in q_prev.items():
                quotient[k + shift] = c
        return MultiPoly._raw(self.vars, quotient)

    # -- evaluation and substitution -------------------------------------
    def evaluate(self, point: Sequence[Rational]) -> Rational:
        n = self.nvars
        if len(point) < n:
            raise ValueError("evaluation point is too short")
        powers: list[dict[int, Rational]] = [{0: 1, 1: point[i]} for i in range(n)]
        total: Rational = 0
        for k, c in self.terms.items():
            val = c
            i = n - 1
            while k:
                e = k & MASK
                if e:
                    table = powers[i]
                    p = table.get(e)
                    if p is None:
                        p = table[e] = point[i] ** e
                    val = val * p
                k >>= BITS
                i -= 1
            total += val
        return as_rational(total)

    def substitute(self, images: Mapping[int, LinearForm],
                   target_vars: Sequence[str] | None = None) -> MultiPoly:
        """Replace variables by linear forms over ``target_vars``.

        Unmapped variables are carried over by name when ``target_vars`` is
        given and by index otherwise.
        """
        tvars = tuple(target_vars) if target_vars is not None else self.vars
        n = self.nvars
        forms: list[LinearForm] = []
        for i in range(n):
            if i in images:
                forms.append(images[i])
            elif tvars is self.vars:
                forms.append(LinearForm.var(i))
            else:
                try:
                    forms.append(LinearForm.var(tvars.index(self.vars[i])))
                except ValueError:
                    forms.append(None)  # only legal if the variable is absent
        tn = len(tvars)
        # monomial substitutions (x_i -> c * y_j) are a relabelling
        if all(f is None or (len(f.coeffs) == 1 and not f.const) for f in forms):
            out: dict[int, Rational] = {}
            units = [None if f is None else (1 << (BITS * (tn - 1 - f.coeffs[0][0])), f.coeffs[0][1])
                     for f in forms]
            for k, c in self.terms.items():
                nk = 0
                val = c
                i = n - 1
                while k:
                    e = k & MASK
                    if e:
                        u = units[i]
                        if u is None:
                            raise ValueError(f"variable {self.vars[i]} has no image")
                        nk += u[0] * e
                        val = val * u[1] ** e
                    k >>= BITS
                    i -= 1
                out[nk] = out.get(nk, 0) + val
            return MultiPoly(tvars, out)
        polys = [None if f is None else MultiPoly.from_linear(tvars, f) for f in forms]
        cache: list[dict[int, MultiPoly]] = [{} for _ in range(n)]

        def power(i: int, e: int) -> MultiPoly:
            if polys[i] is None:
                raise ValueError(f"variable {self.vars[i]} has no image")
            hit = cache[i].get(e)
            if hit is None:
                hit = polys[i] if e == 1 else power(i, e - 1) * polys[i]
                cache[i][e] = hit
            return hit

        result = MultiPoly.zero(tvars)
        for k, c in self.terms.items():
            term = MultiPoly.constant(tvars, c)
            for i, e in enumerate(unpack(k, n)):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def extend_vars(self, new_vars: Sequence[str]) -> MultiPoly:
        """Embed into a variable list that extends this one at the end."""
        new_vars = tuple(new_vars)
        if new_vars[: self.nvars] != self.vars:
            raise VariableMismatchError("new variable list must extend the old one")
        shift = BITS * (len(new_vars) - self.nvars)
        return MultiPoly._raw(new_vars, {k << shift: c for k, c in self.terms.items()})

    # -- normalization and output -----------------------------------------
    def primitive(self) -> tuple[Fraction, MultiPoly]:
        """``(c, q)`` with ``self == c * q``, ``q`` integral with coprime coefficients, ``c > 0``."""
        if not self.terms:
            return Fraction(0), self
        vals = self.terms.values()
        if all(isinstance(c, int) for c in vals):
            g = 0
            for c in vals:
                g = gcd(g, c)
                if g == 1:
                    return Fraction(1), self
            return Fraction(g), MultiPoly._raw(self.vars, {k: c // g for k, c in self.terms.items()})
        c = self.content()
        inv = 1 / c
        return c, MultiPoly._raw(self.vars, {k: as_rational(v * inv) for k, v in self.terms.items()})

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive over the integers."""
        g, l = 0, 1
        for c in self.terms.values():
            c = Fraction(c)
            g = gcd(g, c.numerator)
            l = lcm(l, c.denominator)
        return Fraction(g, l) if g else Fraction(0)

    def json_terms(self) -> list[list]:
        n = self.nvars
        return [[list(unpack(k, n)), str(self.terms[k])] for k in self.sorted_keys()]

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in self.sorted_keys():
            c = self.terms[k]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, unpack(k, self.nvars)) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self.to_str()})"
