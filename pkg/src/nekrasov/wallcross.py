"""Checks of the wall-crossing formula and of its corollaries.

Every identity is written once, against an *evaluator* that either produces
exact rational functions (``symbolic`` mode) or exact rational numbers at a
sampled point (``randomized`` mode). A check returns a :class:`CheckReport`;
failures always carry a witness.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial, prod
from typing import Callable, Sequence

from .exactalg import LinearForm, RationalFunction, randomized_identity, symbolic_equal
from .localization import (HILBERT_CTX, MATTER, UNIT, Context, Integrand, alpha_n, alpha_value,
                           co_twist, hilbert_closed_form, hilbert_integrand, localization_sum,
                           localization_value, residue_closed_form, residue_sum,
                           residue_via_hilbert)
from .partitions import (count_decomposition_types, enumerate_compositions,
                         predicted_decomposition_count)
from .series import QSeries, binom_pow, falling_factorial

MODES = ("symbolic", "randomized")
REDUCE_INTERPRETATION = ("q -> q/m_Nf and m_Nf -> infinity: the leading m_Nf coefficient of "
                         "alpha_n^(Nf) must equal alpha_n^(Nf-1)")


class DegreeMismatchError(ArithmeticError):
    """alpha_n^(Nf) does not have degree n in the last mass."""


@dataclass
class CheckReport:
    check: str
    params: dict
    verdict: str
    certificate: dict = field(default_factory=dict)
    duration_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> str:
        data = asdict(self)
        data["duration_s"] = round(self.duration_s, 6)
        return json.dumps(data, sort_keys=True, default=str)


# -- evaluators -------------------------------------------------------------

class SymbolicEvaluator:
    """Values are :class:`RationalFunction` objects."""

    mode = "symbolic"

    def __init__(self, workers: int = 1):
        self.workers = workers

    def integral(self, ctx: Context, n: int, integrand: Integrand = MATTER,
                 images: dict[int, LinearForm] | None = None) -> RationalFunction:
        if integrand == MATTER:
            value = alpha_n(ctx, n, self.workers)
        else:
            value = localization_sum(ctx, n, integrand, self.workers)
        return value.substitute(images) if images else value

    def lift(self, x: RationalFunction) -> RationalFunction:
        return x

    def leading_mass_coefficient(self, ctx: Context, n: int) -> RationalFunction:
        value = self.integral(ctx, n)
        index = ctx.m_index(ctx.nf)
        num_deg, den_deg = value.degree_in(index)
        if den_deg or (num_deg != n and value):
            raise DegreeMismatchError(f"degree ({num_deg}, {den_deg}) in m{ctx.nf}, expected ({n}, 0)")
        return value.numerator_coefficient(index, n)


class PointEvaluator:
    """Values are ``Fraction`` numbers at one rational point.

    A context reads the first ``ctx.nvars`` coordinates, which is consistent
    across contexts of the same rank because masses come last.
    """

    mode = "randomized"

    def __init__(self, point: Sequence[Fraction], workers: int = 1):
        self.point = tuple(Fraction(v) for v in point)
        self.workers = workers

    def _at(self, nvars: int, images: dict[int, LinearForm] | None = None) -> tuple:
        p = self.point[:nvars]
        if not images:
            return p
        return tuple(images[i].evaluate(p) if i in images else p[i] for i in range(nvars))

    def integral(self, ctx: Context, n: int, integrand: Integrand = MATTER,
                 images: dict[int, LinearForm] | None = None) -> Fraction:
        p = self._at(ctx.nvars, images)
        if integrand == MATTER:
            return alpha_value(ctx, n, p, self.workers)
        return localization_value(ctx, n, integrand, p, self.workers)

    def lift(self, x: RationalFunction) -> Fraction:
        return Fraction(x.evaluate(self._at(x.nvars)))

    def leading_mass_coefficient(self, ctx: Context, n: int) -> Fraction:
        """n-th finite difference in the last mass over n!; exact for degree n."""
        index = ctx.m_index(ctx.nf)
        m0 = self.point[index]

        def value(j):
            return self.integral(ctx, n, images={index: LinearForm.constant(m0 + j)})

        values = [value(j) for j in range(n + 2)]
        diff = [sum((-1) ** (k - j) * _binom(k, j) * values[j] for j in range(k + 1))
                for k in (n, n + 1)]
        if diff[1] != 0:
            raise DegreeMismatchError(f"nonzero difference of order {n + 1} in m{ctx.nf}")
        return Fraction(diff[0]) / factorial(n)


def _binom(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k))


# -- running identities -----------------------------------------------------

Sides = Callable[[object], tuple[list, list]]


def run_identity(name: str, params: dict, sides: Sides, nvars: int, mode: str = "symbolic",
                 points: int = 20, seed: int = 0, workers: int = 1) -> CheckReport:
    """Evaluate ``sides(evaluator) -> (lhs, rhs)`` and compare them entry by entry."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    params = dict(params, mode=mode)
    if mode == "randomized":
        params.update(points=points, seed=seed)
    start = time.perf_counter()
    try:
        if mode == "symbolic":
            lhs, rhs = sides(SymbolicEvaluator(workers))
            verdict, cert = "pass", {"method": "exact normalization and cross-multiplication",
                                     "entries": len(lhs)}
            for k, (x, y) in enumerate(zip(lhs, rhs, strict=True)):
                if not _equal(x, y):
                    verdict = "fail"
                    cert = {"method": cert["method"], "index": k,
                            "lhs": _show(x), "rhs": _show(y)}
                    break
        else:
            result = randomized_identity(
                lambda p: tuple(map(list, sides(PointEvaluator(p, workers)))), nvars, points, seed)
            verdict, cert = ("pass" if result.equal else "fail"), result.certificate
    except DegreeMismatchError as exc:
        verdict, cert = "fail", {"error": "DegreeMismatch", "detail": str(exc)}
    return CheckReport(name, params, verdict, cert, time.perf_counter() - start)


def _equal(x, y) -> bool:
    if isinstance(x, RationalFunction) and isinstance(y, RationalFunction):
        return symbolic_equal(x, y)
    return x == y


def _show(x) -> str:
    return x.to_str() if isinstance(x, RationalFunction) else str(x)


# -- the wall-crossing formula ----------------------------------------------

def u_r(ctx: Context) -> RationalFunction:
    """``(e1+e2)(2 sum a + sum m) / (e1 e2)``."""
    if ctx.nf != 2 * ctx.r:
        raise ValueError("u_r is defined for N_f = 2r")
    mass = sum((ctx.a(alpha) * 2 for alpha in range(1, ctx.r + 1)), LinearForm())
    mass = sum((ctx.m(f) for f in range(1, ctx.nf + 1)), mass)
    return ctx.rf(ctx.eps_plus) * ctx.rf(mass) / (ctx.rf(ctx.eps(1)) * ctx.rf(ctx.eps(2)))


def _rhs(ctx: Context, n: int, ev) -> object:
    u = ev.lift(u_r(ctx))
    total = u * 0
    for k in range(1, n + 1):
        sign = (-1) ** (k * (ctx.r + 1))
        total = total + falling_factorial(u, k) * ev.integral(ctx, n - k) * sign / factorial(k)
    return total


def wallcross_rhs(ctx: Context, n: int, workers: int = 1) -> RationalFunction:
    """``sum_k (-1)^(k(r+1)) u(u-1)...(u-k+1)/k! alpha_{n-k}``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _rhs(ctx, n, SymbolicEvaluator(workers))


def verify_main(ctx: Context, n: int, mode: str = "symbolic", points: int = 20, seed: int = 0,
                workers: int = 1) -> CheckReport:
    """beta_n - alpha_n against the falling-factorial sum."""
    if n < 1:
        raise ValueError("n must be at least 1")
    flip = ctx.sign_flip(a=True, m=True)

    def sides(ev):
        return [ev.integral(ctx, n, images=flip) - ev.integral(ctx, n)], [_rhs(ctx, n, ev)]

    return run_identity("main", {"r": ctx.r, "nf": ctx.nf, "n": n}, sides, ctx.nvars, mode,
                        points, seed, workers)


def verify_even(ctx: Context, order: int, mode: str = "randomized", points: int = 20,
                seed: int = 0, workers: int = 1) -> CheckReport:
    """Z(-e, a, m) = (1 - (-1)^r q)^{u_r} Z(e, a, m), coefficient-wise."""
    flip = ctx.sign_flip(eps=True)

    def sides(ev):
        z = QSeries([ev.integral(ctx, k) for k in range(order + 1)])
        lhs = [ev.integral(ctx, k, images=flip) for k in range(order + 1)]
        rhs = binom_pow((-1) ** ctx.r, ev.lift(u_r(ctx)), order) * z
        return lhs, list(rhs.coeffs)

    return run_identity("even", {"r": ctx.r, "nf": ctx.nf, "order": order}, sides, ctx.nvars,
                        mode, points, seed, workers)


def verify_reduce(ctx: Context, n: int, mode: str = "symbolic", points: int = 20, seed: int = 0,
                  workers: int = 1) -> CheckReport:
    """Decoupling of the last flavour: leading m_Nf coefficient of alpha_n^(Nf) is alpha_n^(Nf-1)."""
    if ctx.nf < 1:
        raise ValueError("reduce needs N_f >= 1")
    lower = ctx.with_nf(ctx.nf - 1)

    def sides(ev):
        lead = ev.leading_mass_coefficient(ctx, n)
        target = ev.integral(lower, n)
        if isinstance(target, RationalFunction):
            target = target.extend_vars(ctx.vars)
        return [lead], [target]

    report = run_identity("reduce", {"r": ctx.r, "nf": ctx.nf, "n": n}, sides, ctx.nvars, mode,
                          points, seed, workers)
    report.certificate["interpretation"] = REDUCE_INTERPRETATION
    return report


def verify_odd(ctx: Context, order: int, mode: str = "symbolic", points: int = 20, seed: int = 0,
               workers: int = 1) -> CheckReport:
    """Behaviour of Z^(N_f) under e -> -e for N_f < 2r."""
    r, nf = ctx.r, ctx.nf
    if nf > 2 * r - 1:
        raise ValueError("odd-part check needs N_f <= 2r - 1")
    flip = ctx.sign_flip(eps=True)

    def sides(ev):
        plus = [ev.integral(ctx, k) for k in range(order + 1)]
        minus = [ev.integral(ctx, k, images=flip) for k in range(order + 1)]
        if nf <= 2 * r - 2:
            return minus, plus
        ratio = (QSeries(minus) / QSeries(plus)).log()
        e1, e2 = ctx.rf(ctx.eps(1)), ctx.rf(ctx.eps(2))
        c = ev.lift((e1 + e2) / (e1 * e2)) * (-1) ** (r + 1)
        expected = [c * 0] * (order + 1)
        if order >= 1:
            expected[1] = c
        return list(ratio.coeffs), expected

    case = "invariant" if nf <= 2 * r - 2 else "log-ratio"
    return run_identity("odd", {"r": r, "nf": nf, "order": order, "case": case}, sides,
                        ctx.nvars, mode, points, seed, workers)


# -- combinatorial identities -----------------------------------------------

GOAL_VARS = ("u",)


def goal_sides(k: int, u):
    lhs = u * 0
    for comp in enumerate_compositions(k):
        partial = 1
        acc = 0
        for p in comp:
            acc += p
            partial *= acc
        lhs = lhs + u ** len(comp) * (-1) ** len(comp) / partial
    rhs = falling_factorial(u, k) * (-1) ** k / factorial(k)
    return lhs, rhs


def verify_goal(k: int, mode: str = "symbolic", points: int = 20, seed: int = 0) -> CheckReport:
    """Composition sum against (-1)^k u(u-1)...(u-k+1)/k! in an abstract variable u."""
    if k < 1:
        raise ValueError("k must be at least 1")

    def sides(ev):
        if isinstance(ev, SymbolicEvaluator):
            u = RationalFunction.variable(GOAL_VARS, 0)
        else:
            u = ev.point[0]
        lhs, rhs = goal_sides(k, u)
        return [lhs], [rhs]

    return run_identity("goal", {"k": k}, sides, 1, mode, points, seed)


def verify_counting(n: int) -> CheckReport:
    """Brute-force decomposition-type counts against the product identity."""
    if n < 1:
        raise ValueError("n must be at least 1")
    start = time.perf_counter()
    checked = 0
    for k in range(1, n + 1):
        for comp in enumerate_compositions(k):
            count = count_decomposition_types(n, comp)
            lhs = Fraction(count * prod(factorial(p - 1) for p in comp) * factorial(n - k),
                           factorial(n))
            partial = 1
            acc = 0
            for p in comp:
                acc += p
                partial *= acc
            checked += 1
            if lhs != Fraction(1, partial) or count != predicted_decomposition_count(n, comp):
                return CheckReport("counting", {"n": n}, "fail",
                                   {"composition": list(comp), "count": count, "lhs": str(lhs),
                                    "rhs": str(Fraction(1, partial))},
                                   time.perf_counter() - start)
    return CheckReport("counting", {"n": n}, "pass", {"compositions": checked},
                       time.perf_counter() - start)


# -- rank-one closed forms and appendix identities ----------------------------

def _product_series(exponent, order: int) -> QSeries:
    """``prod_{n=1..order} (1 - q^n)^exponent`` by multiplying binomial series."""
    one = exponent * 0 + 1
    total = QSeries.constant(one, order)
    for n in range(1, order + 1):
        b = binom_pow(1, exponent, order // n)
        spread = [one * 0] * (order + 1)
        for k, c in enumerate(b.coeffs):
            spread[n * k] = c
        total = total * QSeries(spread)
    return total


def co_exponent(ctx: Context, homogenized: bool = True) -> RationalFunction:
    """``(e+)^2/4 - m1^2 - 1``; homogenized, the quadratic part is divided by e1 e2."""
    e1, e2, m = ctx.rf(ctx.eps(1)), ctx.rf(ctx.eps(2)), ctx.rf(ctx.m(1))
    quad = (e1 + e2) ** 2 / 4 - m * m
    return (quad / (e1 * e2) if homogenized else quad) - 1


CO_CTX = Context(1, 1)


def verify_co_formula(order: int, reading: str = "m-e/2", form: str = "homogenized",
                      mode: str = "symbolic", points: int = 20, seed: int = 0,
                      workers: int = 1) -> CheckReport:
    """Rank-1 tangent-twisted Z against prod (1 - q^n)^{e+^2/4 - m1^2 - 1}.

    ``form="literal"`` takes the exponent exactly as printed, which is not
    homogeneous and can only hold on the slice e1 e2 = 1; it is checked at
    random points of that slice. ``form="homogenized"`` divides the quadratic
    part by e1 e2 and is checked as an identity of rational functions.
    """
    ctx = CO_CTX
    twist = co_twist(ctx, reading)
    integrand = Integrand("twist", twist=twist)
    if form not in ("literal", "homogenized"):
        raise ValueError(f"unknown form {form!r}")
    if form == "literal" and mode == "symbolic":
        return CheckReport("co_formula", {"order": order, "reading": reading, "form": form,
                                          "mode": mode}, "skipped",
                           {"reason": "the literal exponent is only defined on e1 e2 = 1; "
                                      "use randomized mode"})
    exponent = co_exponent(ctx, form == "homogenized")

    def sides(ev):
        if form == "literal":
            p = ev.point
            ev = PointEvaluator((p[0], 1 / p[0]) + p[2:], ev.workers)
        lhs = [ev.integral(ctx, k, integrand) for k in range(order + 1)]
        return lhs, list(_product_series(ev.lift(exponent), order).coeffs)

    report = run_identity("co_formula", {"order": order, "reading": reading, "form": form},
                          sides, ctx.nvars, mode, points, seed, workers)
    report.certificate["twist"] = twist.to_str(ctx.vars)
    if form == "literal":
        report.certificate["slice"] = "e2 := 1/e1 applied to every sampled point"
    return report


def verify_rank1_closed_forms(order: int, mode: str = "symbolic", points: int = 20,
                              seed: int = 0, reading: str = "m-e/2",
                              workers: int = 1) -> list[CheckReport]:
    """(a) Hilbert-scheme integrals, (b) Z = (1+q)^alpha_1, (c) the twisted product formula."""
    hctx = HILBERT_CTX
    hil = hilbert_integrand()
    e1, e2 = hctx.rf(hctx.eps(1)), hctx.rf(hctx.eps(2))
    hexp = -(hctx.rf(hctx.m(1)) * hctx.rf(hctx.m(2))) / (e1 * e2)

    def sides_a(ev):
        return ([ev.integral(hctx, k, hil) for k in range(order + 1)],
                list(binom_pow(1, ev.lift(hexp), order).coeffs))

    ctx = Context(1, 2)

    def sides_b(ev):
        return ([ev.integral(ctx, k) for k in range(order + 1)],
                list(binom_pow(-1, ev.integral(ctx, 1), order).coeffs))

    return [
        run_identity("rank1_hilbert_series", {"order": order}, sides_a, hctx.nvars, mode,
                     points, seed, workers),
        run_identity("rank1_binomial", {"order": order}, sides_b, ctx.nvars, mode, points, seed,
                     workers),
        verify_co_formula(order, reading, "homogenized", mode, points, seed, workers),
        verify_co_formula(order, reading, "literal", "randomized", points, seed, workers),
    ]


def verify_hilbert(n_max: int, mode: str = "symbolic", points: int = 20, seed: int = 0,
                   workers: int = 1) -> CheckReport:
    """Localization over Hilb^n against prod_i (m1 m2/(e1 e2) + i - 1)/n!, for n <= n_max."""
    ctx, hil = HILBERT_CTX, hilbert_integrand()

    def sides(ev):
        return ([ev.integral(ctx, n, hil) for n in range(n_max + 1)],
                [ev.lift(hilbert_closed_form(n)) for n in range(n_max + 1)])

    return run_identity("hilbert", {"n": n_max}, sides, ctx.nvars, mode, points, seed, workers)


def verify_residue(p_max: int, workers: int = 1) -> CheckReport:
    """Both residue routes against (e1+e2)/(p e1 e2) for p <= p_max (always symbolic)."""
    start = time.perf_counter()
    for p in range(1, p_max + 1):
        closed = residue_closed_form(p)
        direct = residue_sum(p, workers)
        via = residue_via_hilbert(p, workers)
        for route, value in (("direct", direct), ("hilbert-limit", via)):
            if not symbolic_equal(value, closed):
                return CheckReport("residue", {"p": p_max, "mode": "symbolic"}, "fail",
                                   {"p": p, "route": route, "lhs": value.to_str(),
                                    "rhs": closed.to_str()}, time.perf_counter() - start)
    return CheckReport("residue", {"p": p_max, "mode": "symbolic"}, "pass",
                       {"routes": ["direct", "hilbert-limit"], "agree": True},
                       time.perf_counter() - start)


def verify_parity_unit(ctx: Context, order: int, mode: str = "symbolic", points: int = 20,
                       seed: int = 0, workers: int = 1) -> CheckReport:
    """Z with integrand 1 is invariant under e -> -e."""
    ctx = ctx.with_nf(0)
    flip = ctx.sign_flip(eps=True)

    def sides(ev):
        return ([ev.integral(ctx, k, UNIT, flip) for k in range(order + 1)],
                [ev.integral(ctx, k, UNIT) for k in range(order + 1)])

    return run_identity("parity_unit", {"r": ctx.r, "order": order}, sides, ctx.nvars, mode,
                        points, seed, workers)


# -- symmetries ---------------------------------------------------------------

def verify_flavor_symmetry(ctx: Context, n: int, mode: str = "symbolic", points: int = 20,
                           seed: int = 0, workers: int = 1) -> CheckReport:
    """alpha_n is invariant under every permutation of the masses."""
    idx = [ctx.m_index(f) for f in range(1, ctx.nf + 1)]
    perms = [dict(zip(idx, (LinearForm.var(j) for j in perm))) for perm in permutations(idx)][1:]

    def sides(ev):
        base = ev.integral(ctx, n)
        return [ev.integral(ctx, n, images=s) for s in perms], [base] * len(perms)

    return run_identity("flavor_symmetry", {"r": ctx.r, "nf": ctx.nf, "n": n}, sides, ctx.nvars,
                        mode, points, seed, workers)


def verify_exchange_symmetry(ctx: Context, n: int, mode: str = "symbolic", points: int = 20,
                             seed: int = 0, workers: int = 1) -> CheckReport:
    """alpha_n is invariant under e1 <-> e2."""
    swap = {0: LinearForm.var(1), 1: LinearForm.var(0)}

    def sides(ev):
        return [ev.integral(ctx, n, images=swap)], [ev.integral(ctx, n)]

    return run_identity("exchange_symmetry", {"r": ctx.r, "nf": ctx.nf, "n": n}, sides,
                        ctx.nvars, mode, points, seed, workers)


def verify_sign_parity(ctx: Context, order: int, mode: str = "symbolic", points: int = 20,
                       seed: int = 0, workers: int = 1) -> CheckReport:
    """Z(e, a, m) = Z(-e, -a, -m) coefficient-wise."""
    flip = ctx.sign_flip(eps=True, a=True, m=True)

    def sides(ev):
        return ([ev.integral(ctx, k, images=flip) for k in range(order + 1)],
                [ev.integral(ctx, k) for k in range(order + 1)])

    return run_identity("sign_parity", {"r": ctx.r, "nf": ctx.nf, "order": order}, sides,
                        ctx.nvars, mode, points, seed, workers)
