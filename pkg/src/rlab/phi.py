"""Closed-form descriptors for quasi-concave functions and Orlicz functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class PhiFn:
    """Positive function on (0,1] with phi(0+) = 0, increasing, phi(t)/t decreasing."""

    label = "phi"

    def __call__(self, t: float) -> float:
        raise NotImplementedError

    def derivative(self, t: float) -> float | None:
        return None

    def tilde(self) -> "PhiFn":
        """The dual-generating function t / phi(t)."""
        return TildePhi(self)

    def check_quasiconcave(self, grid_size: int = 40, tol: float = 1e-12) -> bool:
        """phi nondecreasing and phi(t)/t nonincreasing on a dyadic grid."""
        ts = [2.0**-j for j in range(grid_size, -1, -1)]
        vals = [self(t) for t in ts]
        ratios = [v / t for v, t in zip(vals, ts)]
        inc = all(b >= a - tol for a, b in zip(vals, vals[1:]))
        dec = all(b <= a + tol for a, b in zip(ratios, ratios[1:]))
        return inc and dec and self(1e-14) >= -tol


@dataclass(frozen=True)
class PowerPhi(PhiFn):
    """phi(t) = t**alpha, 0 < alpha <= 1."""

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0,1], got {self.alpha}")

    @property
    def label(self) -> str:
        return f"pow:{self.alpha}"

    def __call__(self, t: float) -> float:
        t = float(t)
        return 0.0 if t <= 0 else t**self.alpha

    def derivative(self, t: float) -> float:
        t = float(t)
        return self.alpha * t ** (self.alpha - 1)


@dataclass(frozen=True)
class LogPowerPhi(PhiFn):
    """phi(t) = c * log(e/t)**(-beta); increasing with phi(0+) = 0 for beta > 0."""

    beta: float
    c: float = 1.0

    def __post_init__(self):
        if self.beta <= 0 or self.c <= 0:
            raise ValueError("beta and c must be positive")

    @property
    def label(self) -> str:
        return f"logpow:{self.beta}"

    def __call__(self, t: float) -> float:
        t = float(t)
        if t <= 0:
            return 0.0
        return self.c * math.log(math.e / t) ** (-self.beta)

    def derivative(self, t: float) -> float:
        t = float(t)
        return self.c * self.beta * math.log(math.e / t) ** (-self.beta - 1) / t


@dataclass(frozen=True)
class ProductPhi(PhiFn):
    left: PhiFn
    right: PhiFn

    @property
    def label(self) -> str:
        return f"({self.left.label})*({self.right.label})"

    def __call__(self, t: float) -> float:
        return self.left(t) * self.right(t)

    def derivative(self, t: float) -> float | None:
        dl, dr = self.left.derivative(t), self.right.derivative(t)
        if dl is None or dr is None:
            return None
        return dl * self.right(t) + self.left(t) * dr


@dataclass(frozen=True)
class TildePhi(PhiFn):
    """t / base(t); quasi-concave whenever base is."""

    base: PhiFn

    @property
    def label(self) -> str:
        return f"tilde({self.base.label})"

    def __call__(self, t: float) -> float:
        t = float(t)
        if t <= 0:
            return 0.0
        b = self.base(t)
        return t / b if b > 0 else 0.0

    def derivative(self, t: float) -> float | None:
        db = self.base.derivative(t)
        if db is None:
            return None
        b = self.base(t)
        if b == 0:
            return None
        return (b - float(t) * db) / b**2


@dataclass(frozen=True)
class TabulatedConcave(PhiFn):
    """Piecewise-linear interpolation through (t_i, y_i), prepended with (0,0)."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple(sorted((float(t), float(y)) for t, y in self.points))
        if not pts or pts[0][0] <= 0:
            raise ValueError("breakpoints must have positive abscissae")
        object.__setattr__(self, "points", pts)

    @property
    def label(self) -> str:
        return f"tab[{len(self.points)}]"

    def _segment(self, t: float) -> tuple[float, float, float, float]:
        lo = (0.0, 0.0)
        for pt in self.points:
            if pt[0] >= t:
                return (*lo, *pt)
            lo = pt
        # extend linearly past the last segment
        if len(self.points) >= 2:
            return (*self.points[-2], *self.points[-1])
        return (0.0, 0.0, *self.points[-1])

    def __call__(self, t: float) -> float:
        t = float(t)
        if t <= 0:
            return 0.0
        x0, y0, x1, y1 = self._segment(t)
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)

    def derivative(self, t: float) -> float:
        x0, y0, x1, y1 = self._segment(float(t))
        return (y1 - y0) / (x1 - x0)


class OrliczFn:
    """Increasing convex M on [0, inf) with M(0) = 0 and an analytic inverse."""

    label = "orlicz"

    def __call__(self, u: float) -> float:
        raise NotImplementedError

    def inverse(self, v: float) -> float:
        raise NotImplementedError

    def check_convex(self, grid_size: int = 30, tol: float = 1e-12) -> bool:
        us = [0.1 * k for k in range(grid_size)]
        vals = [self(u) for u in us]
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        return (
            abs(self(0.0)) <= tol
            and all(d >= -tol for d in diffs)
            and all(b >= a - tol for a, b in zip(diffs, diffs[1:]))
        )


@dataclass(frozen=True)
class PowerOrlicz(OrliczFn):
    """M(u) = u**p; the Orlicz space is L_p isometrically."""

    p: float

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")

    @property
    def label(self) -> str:
        return f"u^{self.p}"

    def __call__(self, u: float) -> float:
        return float(u) ** self.p

    def inverse(self, v: float) -> float:
        return float(v) ** (1.0 / self.p)


@dataclass(frozen=True)
class ExpPowerOrlicz(OrliczFn):
    """M(u) = exp(u**p) - 1; generates the exponential-integrability space."""

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")

    @property
    def label(self) -> str:
        return f"exp(u^{self.p})-1"

    def __call__(self, u: float) -> float:
        return math.expm1(float(u) ** self.p)

    def inverse(self, v: float) -> float:
        return math.log1p(float(v)) ** (1.0 / self.p)
