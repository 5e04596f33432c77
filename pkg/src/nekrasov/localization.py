"""Torus-fixed-point weights and localization sums over tuples of Young diagrams.

Multiplicative characters ``t1^i t2^j e^{a} e^{m}`` are recorded additively as
linear forms ``i*e1 + j*e2 + a + m``; the square root of ``t1*t2`` becomes the
half-integral shift ``(e1 + e2)/2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .exactalg import FactoredRational, LinearForm, RationalFunction
from .partitions import Partition, arm, enumerate_tuples, leg

HALF = Fraction(1, 2)


class DegenerateWeightError(ArithmeticError):
    """A tangent weight vanished identically."""


class ZeroWeightMiscountError(ArithmeticError):
    """The tautological character at a=0 lacks exactly one zero weight."""


@dataclass(frozen=True)
class Context:
    """Rank, number of flavours and the variable table built from them.

    Variables are ordered ``e1, e2, a1..ar, m1..m_nf``; with ``with_a=False``
    the Coulomb parameters are dropped (the ``a = 0`` specialization).
    """

    r: int
    nf: int = 0
    with_a: bool = True

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("rank r must be at least 1")
        if not 0 <= self.nf <= 2 * self.r:
            raise ValueError(f"N_f={self.nf} must lie in [0, 2r={2 * self.r}]")
        if not self.with_a and self.r != 1:
            raise ValueError("the a = 0 specialization is only used in rank 1")

    @cached_property
    def vars(self) -> tuple[str, ...]:
        names = ["e1", "e2"]
        if self.with_a:
            names += [f"a{k}" for k in range(1, self.r + 1)]
        names += [f"m{f}" for f in range(1, self.nf + 1)]
        return tuple(names)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def a_index(self, alpha: int) -> int | None:
        """Variable index of ``a_alpha`` (1-based alpha), None when a = 0."""
        return 1 + alpha if self.with_a else None

    def m_index(self, f: int) -> int:
        return 1 + (self.r if self.with_a else 0) + f

    def a(self, alpha: int) -> LinearForm:
        i = self.a_index(alpha)
        return LinearForm() if i is None else LinearForm.var(i)

    def m(self, f: int) -> LinearForm:
        if not 1 <= f <= self.nf:
            raise IndexError(f"flavour {f} outside 1..{self.nf}")
        return LinearForm.var(self.m_index(f))

    def eps(self, k: int) -> LinearForm:
        return LinearForm.var(k - 1)

    @property
    def eps_plus(self) -> LinearForm:
        return LinearForm({0: 1, 1: 1})

    def with_nf(self, nf: int) -> Context:
        return Context(self.r, nf, self.with_a)

    def rf(self, form: LinearForm) -> RationalFunction:
        return RationalFunction.from_linear(self.vars, form)

    def sign_flip(self, eps: bool = False, a: bool = False, m: bool = False) -> dict[int, LinearForm]:
        """Substitution negating the chosen groups of variables."""
        images: dict[int, LinearForm] = {}
        if eps:
            images[0] = LinearForm.var(0, -1)
            images[1] = LinearForm.var(1, -1)
        if a and self.with_a:
            for alpha in range(1, self.r + 1):
                images[self.a_index(alpha)] = LinearForm.var(self.a_index(alpha), -1)
        if m:
            for f in range(1, self.nf + 1):
                images[self.m_index(f)] = LinearForm.var(self.m_index(f), -1)
        return images

    def key(self) -> str:
        return f"r{self.r}_nf{self.nf}" + ("" if self.with_a else "_a0")


# -- weights --------------------------------------------------------------

def _check_tuple(ctx: Context, vec_y: Sequence[Partition]) -> None:
    if len(vec_y) != ctx.r:
        raise ValueError(f"expected {ctx.r} diagrams, got {len(vec_y)}")


def taut_character(ctx: Context, vec_y: Sequence[Partition]) -> list[LinearForm]:
    """Weights ``a_alpha + (1-i) e1 + (1-j) e2`` of the tautological fibre."""
    _check_tuple(ctx, vec_y)
    return [ctx.a(alpha) + LinearForm({0: 1 - i, 1: 1 - j})
            for alpha, y in enumerate(vec_y, 1) for i, j in y.boxes()]


def matter_factors(ctx: Context, vec_y: Sequence[Partition], f: int) -> list[LinearForm]:
    """Weights ``a_alpha + (1/2-i) e1 + (1/2-j) e2 + m_f``, one per box."""
    _check_tuple(ctx, vec_y)
    mf = ctx.m(f)
    return [ctx.a(alpha) + LinearForm({0: HALF - i, 1: HALF - j}) + mf
            for alpha, y in enumerate(vec_y, 1) for i, j in y.boxes()]


def tangent_factors(ctx: Context, vec_y: Sequence[Partition]) -> list[LinearForm]:
    """The 2rn tangent weights at the fixed point, pair (alpha, beta) by pair."""
    _check_tuple(ctx, vec_y)
    out = []
    for alpha, ya in enumerate(vec_y, 1):
        for beta, yb in enumerate(vec_y, 1):
            shift = ctx.a(beta) - ctx.a(alpha)
            for s in ya.boxes():
                out.append(shift + LinearForm({0: -leg(yb, s), 1: arm(ya, s) + 1}))
            for t in yb.boxes():
                out.append(shift + LinearForm({0: leg(ya, t) + 1, 1: -arm(yb, t)}))
    for w in out:
        if not w:
            raise DegenerateWeightError(f"zero tangent weight at {vec_y}")
    return out


@dataclass(frozen=True)
class FixedPointWeights:
    vec_y: tuple[Partition, ...]
    tangent: FactoredRational
    matter: FactoredRational
    taut_char: tuple[LinearForm, ...]
    tangent_count: int
    matter_count: int


def fixed_point_weights(ctx: Context, vec_y: Sequence[Partition]) -> FixedPointWeights:
    tangent = tangent_factors(ctx, vec_y)
    matter = [w for f in range(1, ctx.nf + 1) for w in matter_factors(ctx, vec_y, f)]
    return FixedPointWeights(tuple(vec_y), FactoredRational.from_forms(tangent),
                             FactoredRational.from_forms(matter), tuple(taut_character(ctx, vec_y)),
                             len(tangent), len(matter))


# -- integrands -------------------------------------------------------------

@dataclass(frozen=True)
class Integrand:
    """Equivariant class integrated over M(r, n).

    ``matter``: Euler class of the first ``nf`` matter summands.
    ``unit``: the class 1.
    ``twist``: Euler class of the tangent bundle twisted by ``twist``.
    ``hilbert``: e(V x e^{mu1} + V^dual x e^{mu2}) with ``masses = (mu1, mu2)``.
    ``residue``: e(V/O) e(V^dual x t1 t2), the destabilizing-sheaf integrand.
    """

    kind: str = "matter"
    twist: LinearForm | None = None
    masses: tuple[LinearForm, LinearForm] | None = None

    def term(self, ctx: Context, vec_y: Sequence[Partition]) -> FactoredRational:
        tangent = tangent_factors(ctx, vec_y)
        if self.kind == "matter":
            num = [w for f in range(1, ctx.nf + 1) for w in matter_factors(ctx, vec_y, f)]
        elif self.kind == "unit":
            num = []
        elif self.kind == "twist":
            num = [w + self.twist for w in tangent]
        elif self.kind == "hilbert":
            mu1, mu2 = self.masses
            taut = taut_character(ctx, vec_y)
            num = [w + mu1 for w in taut] + [mu2 - w for w in taut]
        elif self.kind == "residue":
            taut = taut_character(ctx, vec_y)
            nonzero = [w for w in taut if w]
            if len(taut) - len(nonzero) != 1:
                raise ZeroWeightMiscountError(f"{len(taut) - len(nonzero)} zero weights at {vec_y}")
            num = nonzero + [ctx.eps_plus - w for w in taut]
        else:
            raise ValueError(f"unknown integrand kind {self.kind!r}")
        for w in num:
            if not w:
                return FactoredRational(0)
        return FactoredRational.from_forms(num, tangent)


MATTER = Integrand("matter")
UNIT = Integrand("unit")


def fixed_point_terms(ctx: Context, n: int, integrand: Integrand = MATTER) -> list[FactoredRational]:
    return [integrand.term(ctx, y) for y in enumerate_tuples(ctx.r, n)]


def localization_sum(ctx: Context, n: int, integrand: Integrand = MATTER,
                     workers: int = 1) -> RationalFunction:
    """Sum of integrand / e(T) over all fixed points of M(r, n), exactly."""
    if n < 0:
        raise ValueError("n must be non-negative")
    from .parallel import reduce_terms
    return reduce_terms(ctx, n, integrand, workers)


def localization_value(ctx: Context, n: int, integrand: Integrand, point: Sequence,
                       workers: int = 1) -> Fraction:
    """The same sum evaluated at a rational point (raises if a weight vanishes)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if len(point) != ctx.nvars:
        raise ValueError(f"point has {len(point)} coordinates, context has {ctx.nvars} variables")
    from .parallel import reduce_values
    return reduce_values(ctx, n, integrand, point, workers)


# -- named integrals ------------------------------------------------------

@lru_cache(maxsize=256)
def _alpha_cached(ctx: Context, n: int) -> RationalFunction:
    return localization_sum(ctx, n, MATTER)


def alpha_n(ctx: Context, n: int, workers: int = 1) -> RationalFunction:
    """Integral of the Euler class of the (first nf) matter bundle over M(r, n)."""
    if workers == 1:
        return _alpha_cached(ctx, n)
    return localization_sum(ctx, n, MATTER, workers)


def beta_n(ctx: Context, n: int, workers: int = 1) -> RationalFunction:
    """Co-stable counterpart: alpha_n with a and m negated."""
    return alpha_n(ctx, n, workers).substitute(ctx.sign_flip(a=True, m=True))


@lru_cache(maxsize=4096)
def _alpha_value_cached(ctx: Context, n: int, point: tuple) -> Fraction:
    return localization_value(ctx, n, MATTER, point)


def alpha_value(ctx: Context, n: int, point: Sequence, workers: int = 1) -> Fraction:
    """alpha_n evaluated at a rational point, without expanding anything."""
    point = tuple(Fraction(v) for v in point)
    if workers == 1:
        return _alpha_value_cached(ctx, n, point)
    return localization_value(ctx, n, MATTER, point, workers)


def co_twist(ctx: Context, reading: str = "m-e/2") -> LinearForm:
    """Twist weight for e(TM x sqrt(t1 t2) e^{m1}).

    ``"m-e/2"`` gives m1 - (e1+e2)/2, the convention of the matter bundle
    (and the one for which the rank-1 product formula holds); ``"m+e/2"``
    gives m1 + (e1+e2)/2.
    """
    if reading == "m-e/2":
        return ctx.m(1) - ctx.eps_plus * HALF
    if reading == "m+e/2":
        return ctx.m(1) + ctx.eps_plus * HALF
    raise ValueError(f"unknown twist reading {reading!r}")


def psi_integrand(ctx: Context, kind: str, twist: LinearForm | None = None) -> Integrand:
    if kind == "unit":
        return UNIT
    if kind == "tangent_twist":
        return Integrand("twist", twist=twist if twist is not None else co_twist(ctx))
    raise ValueError(f"unknown psi kind {kind!r}")


def psi_other(ctx: Context, n: int, kind: str = "unit", twist: LinearForm | None = None,
              workers: int = 1) -> RationalFunction:
    return localization_sum(ctx, n, psi_integrand(ctx, kind, twist), workers)


HILBERT_CTX = Context(1, 2, with_a=False)
RESIDUE_CTX = Context(1, 0, with_a=False)


def hilbert_integrand(mu1: LinearForm | None = None, mu2: LinearForm | None = None) -> Integrand:
    ctx = HILBERT_CTX
    return Integrand("hilbert", masses=(mu1 if mu1 is not None else ctx.m(1),
                                        mu2 if mu2 is not None else ctx.m(2)))


def hilbert_integral(n: int, mu1: LinearForm | None = None, mu2: LinearForm | None = None,
                     workers: int = 1) -> RationalFunction:
    """Localization of e(V x e^{mu1} + V^dual x e^{mu2}) over Hilb^n(C^2).

    Lives over the variables ``e1, e2, m1, m2``; the masses default to m1, m2.
    """
    return localization_sum(HILBERT_CTX, n, hilbert_integrand(mu1, mu2), workers)


def hilbert_closed_form(n: int) -> RationalFunction:
    """prod_{i=1..n} (m1 m2 / (e1 e2) + i - 1) / n! over ``e1, e2, m1, m2``."""
    ctx = HILBERT_CTX
    x = ctx.rf(ctx.m(1)) * ctx.rf(ctx.m(2)) / (ctx.rf(ctx.eps(1)) * ctx.rf(ctx.eps(2)))
    out = RationalFunction.one(ctx.vars)
    for i in range(1, n + 1):
        out = out * (x + (i - 1)) / i
    return out


def residue_sum(p: int, workers: int = 1) -> RationalFunction:
    """Direct fixed-point sum of e(V/O) / e(Ob) over Hilb^p, in ``e1, e2``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    return localization_sum(RESIDUE_CTX, p, Integrand("residue"), workers)


def residue_via_hilbert(p: int, workers: int = 1) -> RationalFunction:
    """(1/mu1) * hilbert_integral(p, mu1, e1+e2) in the limit mu1 -> 0."""
    if p < 1:
        raise ValueError("p must be at least 1")
    ctx = HILBERT_CTX
    h = hilbert_integral(p, ctx.m(1), ctx.eps_plus, workers)
    quotient = h / ctx.rf(ctx.m(1))
    limit = quotient.substitute({ctx.m_index(1): LinearForm()})
    return limit.substitute({}, target_vars=RESIDUE_CTX.vars)


def residue_closed_form(p: int) -> RationalFunction:
    ctx = RESIDUE_CTX
    e1, e2 = ctx.rf(ctx.eps(1)), ctx.rf(ctx.eps(2))
    return (e1 + e2) / (e1 * e2 * p)
