"""Random admissible evaluation points and identity testing by evaluation."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InadmissiblePointError, SamplingExhaustedError, VariableMismatchError
from .ratfunc import RationalFunction, symbolic_equal

SAMPLE_BOUND = 10 ** 6
MAX_REDRAWS = 100


@dataclass(frozen=True)
class EvalPoint:
    values: tuple[Fraction, ...]
    seed: int
    draw: int

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def to_json(self) -> list[str]:
        return [str(v) for v in self.values]


class PointSampler:
    """Draws rationals p/q with p, q uniform on [-10**6, 10**6] minus {0}.

    Each sampler owns its generator, so concurrent workers never share state.
    """

    def __init__(self, nvars: int, seed: int, bound: int = SAMPLE_BOUND):
        self.nvars = nvars
        self.seed = seed
        self.bound = bound
        self._rng = random.Random(seed)
        self._draws = 0

    def _nonzero(self) -> int:
        while True:
            v = self._rng.randint(-self.bound, self.bound)
            if v:
                return v

    def draw(self) -> EvalPoint:
        vals = tuple(Fraction(self._nonzero(), self._nonzero()) for _ in range(self.nvars))
        self._draws += 1
        return EvalPoint(vals, self.seed, self._draws)

    def admissible(self, evaluate: Callable[[EvalPoint], object],
                   max_redraws: int = MAX_REDRAWS):
        """Draw until ``evaluate`` succeeds; return (point, result)."""
        for _ in range(max_redraws + 1):
            p = self.draw()
            try:
                return p, evaluate(p)
            except InadmissiblePointError:
                continue
        raise SamplingExhaustedError(f"no admissible point after {max_redraws} redraws")


@dataclass
class EqResult:
    equal: bool
    mode: str
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.equal


def _show(x):
    if isinstance(x, (list, tuple)):
        return [str(v) for v in x]
    return str(x)


def randomized_identity(sides: Callable[[Sequence[Fraction]], tuple], nvars: int,
                        points: int, seed: int) -> EqResult:
    """Compare ``lhs == rhs`` from ``sides(point)`` at ``points`` admissible points.

    A mismatch is definitive and reported with its witness; agreement at every
    point is probabilistic evidence (the Schwartz-Zippel bound).
    """
    if points < 1:
        raise ValueError("randomized mode needs at least one point")
    sampler = PointSampler(nvars, seed)
    used = []
    for _ in range(points):
        p, (lhs, rhs) = sampler.admissible(lambda q: sides(q.values))
        used.append(p.to_json())
        if lhs != rhs:
            return EqResult(False, "randomized", {
                "seed": seed, "points": used, "witness": p.to_json(),
                "lhs": _show(lhs), "rhs": _show(rhs)})
    return EqResult(True, "randomized", {"seed": seed, "points": used})


def rf_eq(x: RationalFunction, y: RationalFunction, mode: str = "symbolic",
          points: int = 20, seed: int = 0) -> EqResult:
    if x.vars != y.vars:
        raise VariableMismatchError(f"{x.vars} vs {y.vars}")
    if mode == "symbolic":
        return EqResult(symbolic_equal(x, y), "symbolic", {"method": "cross-multiplication"})
    if mode == "randomized":
        return randomized_identity(lambda p: (x.evaluate(p), y.evaluate(p)), len(x.vars), points, seed)
    raise ValueError(f"unknown mode {mode!r}")
