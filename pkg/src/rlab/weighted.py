"""Weighted spaces X(w): norms, admissibility, Hoelder pairing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dyadic import StepFunction, level_cap, make_step
from .errors import DivisionByZero, InvalidSpec, NonPositiveWeight
from .spaces import SpaceSpec, dual_space, norm


@dataclass(frozen=True)
class Weight:
    """Strictly positive step weight; 1/w stays exactly rational."""

    fn: StepFunction
    label: str = "step"

    def __post_init__(self):
        if any(value <= 0 for _, value in self.fn.runs):
            raise NonPositiveWeight("weight must be positive on every cell")

    def reciprocal_fn(self) -> StepFunction:
        return self.fn.reciprocal()

    @staticmethod
    def constant(c) -> "Weight":
        c = Fraction(c)
        return Weight(StepFunction.constant(c), label=f"const:{c}")

    @staticmethod
    def from_samples(fn_of_t, level: int, label: str = "sampled", max_den: int = 10**12) -> "Weight":
        """Sample a closed-form positive weight at cell midpoints."""
        n = 2**level
        vals = [
            Fraction(float(fn_of_t((j + 0.5) / n))).limit_denominator(max_den)
            for j in range(n)
        ]
        return Weight(make_step(level, vals), label=f"{label}:level={level}")

    @staticmethod
    def logpow(beta: float, level: int) -> "Weight":
        """w(t) = log(e/t)**beta sampled at rank-`level` cell midpoints."""
        return Weight.from_samples(
            lambda t: math.log(math.e / t) ** beta, level, label=f"logpow:{beta}"
        )


def weighted_norm(X: SpaceSpec, w: Weight, f: StepFunction) -> float:
    if w.fn.level == 0 and w.fn.runs[0][1] == 1:
        return norm(X, f)
    return norm(X, f * w.fn)


def admissible(X: SpaceSpec, w: Weight) -> dict:
    """Both halves of L_infty subset X(w) subset L_1: w in X and 1/w in X'."""
    wx = norm(X, w.fn)
    inv = norm(dual_space(X), w.reciprocal_fn())
    ok = math.isfinite(wx) and math.isfinite(inv)
    return {"ok": ok, "wX": wx, "invWXdual": inv}


def holder_check(X: SpaceSpec, f: StepFunction, g: StepFunction) -> float:
    """integral |fg| / (||f||_X ||g||_X'); must stay <= 1 + 1e-9."""
    nf = norm(X, f)
    ng = norm(dual_space(X), g)
    if nf == 0 or ng == 0:
        raise DivisionByZero("zero norm in Hoelder ratio")
    pairing = float((abs(f) * abs(g)).integral())
    return pairing / (nf * ng)


def parse_weight(text: str) -> Weight:
    """CLI descriptors: const:1, step:<json file>, logpow:0.5:level=20."""
    parts = text.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "const":
            return Weight.constant(Fraction(parts[1]))
        if kind == "step":
            with open(parts[1]) as fh:
                return Weight(StepFunction.from_json(fh.read()), label=text)
        if kind == "logpow":
            beta = float(parts[1])
            level = 10
            for extra in parts[2:]:
                key, _, val = extra.partition("=")
                if key == "level":
                    level = int(val)
            if level > level_cap():
                raise InvalidSpec(f"sampling level {level} exceeds cap")
            return Weight.logpow(beta, level)
    except (IndexError, ValueError, OSError) as exc:
        raise InvalidSpec(f"malformed weight descriptor {text!r}") from exc
    raise InvalidSpec(f"unknown weight kind {kind!r}")
