"""Norms and structural predicates for the implemented symmetric-space families.

Families: L_p, L_infty, Orlicz (power / exponential-power), Exp L^p,
Lorentz Lambda(phi), Marcinkiewicz M(phi).  Norm evaluation works on exact
StepFunctions; outputs are floats at documented tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, special

from .dyadic import StepFunction, chi_prefix
from .errors import InvalidSpec, QuadratureFailure, UnsupportedDual
from .phi import (
    ExpPowerOrlicz,
    LogPowerPhi,
    OrliczFn,
    PhiFn,
    PowerOrlicz,
    PowerPhi,
    TabulatedConcave,
)
from .rearrangement import decreasing_rearrangement

GOLDEN_TOL = 1e-9
ORLICZ_TOL = 1e-10
TREND_GROWTH = 1e-3


def logpow_cumulative(q: float, t: float) -> float:
    """Integral of log(e/s)**q over s in (0, t], via the incomplete gamma.

    Substituting s = e^(1-u) gives e * Gamma(q+1, log(e/t)).
    """
    if t <= 0:
        return 0.0
    if t > 1:
        t = 1.0
    x = math.log(math.e / t)
    return math.e * special.gammaincc(q + 1.0, x) * math.gamma(q + 1.0)


def loghalf_cumulative(t: float) -> float:
    return logpow_cumulative(0.5, t)


def divergence_trend(values: list[float]) -> tuple[bool, list[float]]:
    """Doubling-truncation certificate: diverging iff the last three doublings
    each grow by more than TREND_GROWTH relative."""
    growths = []
    for a, b in zip(values, values[1:]):
        growths.append((b - a) / a if a > 0 else (math.inf if b > 0 else 0.0))
    if len(growths) < 3:
        return False, growths
    return all(g > TREND_GROWTH for g in growths[-3:]), growths


def _star_cells(f: StepFunction) -> list[tuple[float, float, float]]:
    """(start, end, value) runs of f*, floats, zero-valued tail dropped."""
    star = decreasing_rearrangement(f)
    cells = []
    for a, b, v in star.cells():
        if v == 0:
            break
        cells.append((float(a), float(b), float(v)))
    return cells


class SpaceSpec:
    family = "abstract"

    def norm(self, f: StepFunction) -> float:
        raise NotImplementedError

    def fundamental(self, t) -> float:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_json_dict(self) -> dict:
        return {"family": self.family, "params": self.params()}

    @property
    def label(self) -> str:
        ps = self.params()
        inner = ",".join(f"{k}={v}" for k, v in sorted(ps.items()))
        return f"{self.family}({inner})" if inner else self.family


@dataclass(frozen=True)
class Lp(SpaceSpec):
    p: Fraction

    family = "lp"

    def __post_init__(self):
        p = Fraction(self.p)
        if p < 1:
            raise InvalidSpec(f"p must be >= 1, got {p}")
        object.__setattr__(self, "p", p)

    def params(self) -> dict:
        return {"p": str(self.p)}

    def norm(self, f: StepFunction) -> float:
        p = self.p
        if p.denominator == 1:
            # exact rational p-th moment, single controlled root at the end
            total = Fraction(0)
            width = Fraction(1, 2**f.level)
            for length, value in f.runs:
                total += length * abs(value) ** int(p)
            total *= width
            return float(total) ** (1.0 / int(p))
        pf = float(p)
        width = 1.0 / 2**f.level
        total = math.fsum(length * abs(float(value)) ** pf for length, value in f.runs) * width
        return total ** (1.0 / pf)

    def fundamental(self, t) -> float:
        return float(t) ** (1.0 / float(self.p))


@dataclass(frozen=True)
class Linfty(SpaceSpec):
    family = "linfty"

    def norm(self, f: StepFunction) -> float:
        return float(f.sup_abs())

    def fundamental(self, t) -> float:
        return 1.0 if float(t) > 0 else 0.0


@dataclass(frozen=True)
class Lorentz(SpaceSpec):
    phi: PhiFn

    family = "lorentz"

    def params(self) -> dict:
        return {"phi": self.phi.label}

    def norm(self, f: StepFunction) -> float:
        star = decreasing_rearrangement(f)
        total = 0.0
        prev = 0.0
        terms = []
        for _, b, v in star.cells():
            cur = self.phi(float(b))
            terms.append(float(v) * (cur - prev))
            prev = cur
        total = math.fsum(terms)
        return total

    def fundamental(self, t) -> float:
        return self.phi(float(t))


@dataclass(frozen=True)
class Marcinkiewicz(SpaceSpec):
    phi: PhiFn

    family = "marcinkiewicz"

    def params(self) -> dict:
        return {"phi": self.phi.label}

    def norm(self, f: StepFunction) -> float:
        cells = _star_cells(f)
        if not cells:
            return 0.0

        cum = 0.0
        best = 0.0
        for a, b, v in cells:
            # F(t) = cum + v*(t-a) on this cell; objective phi(t)/t * F(t)
            def g(t, cum=cum, a=a, v=v):
                return self.phi(t) * (cum + v * (t - a)) / t

            best = max(best, _golden_max(g, a if a > 0 else min(b, 1e-300), b))
            cum += v * (b - a)
        # past the support, F is constant: phi(t)/t decreasing, check support edge
        edge = cells[-1][1]
        if edge < 1.0:
            best = max(best, self.phi(edge) / edge * cum)
        return best

    def fundamental(self, t) -> float:
        return self.phi(float(t))


@dataclass(frozen=True)
class OrliczSpace(SpaceSpec):
    M: OrliczFn

    family = "orlicz"

    def params(self) -> dict:
        return {"M": self.M.label}

    def norm(self, f: StepFunction) -> float:
        vals = [(length / 2**f.level, abs(float(value))) for length, value in f.runs if value != 0]
        if not vals:
            return 0.0
        top = max(v for _, v in vals)

        def modular(lam: float) -> float:
            return math.fsum(m * self.M(v / lam) for m, v in vals)

        hi = top / self.M.inverse(1.0)
        lo = hi
        while modular(lo) <= 1.0:
            lo /= 2.0
            if lo < 1e-300:
                return 0.0
        # bisection on the monotone feasibility boundary
        while (hi - lo) / hi > ORLICZ_TOL:
            mid = 0.5 * (lo + hi)
            if modular(mid) <= 1.0:
                hi = mid
            else:
                lo = mid
        return hi

    def fundamental(self, t) -> float:
        t = float(t)
        if t <= 0:
            return 0.0
        return 1.0 / self.M.inverse(1.0 / t)


@dataclass(frozen=True)
class ExpLp(SpaceSpec):
    """Zygmund space Exp L^p, evaluated through its Marcinkiewicz sup form.

    The sup form sup x*(t) log^(-1/p)(e/t) is an equivalent norm; reports
    carry the "equivalent-norm convention" tag.  The Luxemburg form through
    exp(u^p)-1 is available as luxemburg_norm.
    """

    p: Fraction

    family = "explp"

    def __post_init__(self):
        p = Fraction(self.p)
        if p <= 0:
            raise InvalidSpec(f"p must be positive, got {p}")
        object.__setattr__(self, "p", p)

    def params(self) -> dict:
        return {"p": str(self.p)}

    def phi_p(self) -> LogPowerPhi:
        return LogPowerPhi(beta=1.0 / float(self.p))

    def norm(self, f: StepFunction) -> float:
        phi = self.phi_p()
        best = 0.0
        for _, b, v in _star_cells(f):
            # x* nonincreasing, phi increasing: cell sup at the right endpoint
            best = max(best, v * phi(b))
        return best

    def luxemburg_norm(self, f: StepFunction) -> float:
        return OrliczSpace(ExpPowerOrlicz(float(self.p))).norm(f)

    def fundamental(self, t) -> float:
        return self.phi_p()(float(t))


def _golden_max(g, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    """Golden-section maximum of g on [a, b] to relative x-tolerance tol."""
    if b <= a:
        return g(b)
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv * (b - a)
    x2 = a + inv * (b - a)
    f1, f2 = g(x1), g(x2)
    best = max(g(a), g(b), f1, f2)
    lo, hi = a, b
    while (hi - lo) > tol * max(hi, 1e-30):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv * (hi - lo)
            f2 = g(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv * (hi - lo)
            f1 = g(x1)
        best = max(best, f1, f2)
    return best


def norm(X: SpaceSpec, f: StepFunction) -> float:
    if not isinstance(X, SpaceSpec):
        raise InvalidSpec(f"not a space spec: {X!r}")
    return X.norm(f)


def fundamental(X: SpaceSpec, t) -> float:
    return X.fundamental(t)


def dual_space(X: SpaceSpec) -> SpaceSpec:
    """Koethe dual within the implemented families."""
    if isinstance(X, Lp):
        if X.p == 1:
            return Linfty()
        return Lp(X.p / (X.p - 1))
    if isinstance(X, Linfty):
        return Lp(Fraction(1))
    if isinstance(X, Lorentz):
        return Marcinkiewicz(X.phi.tilde())
    if isinstance(X, Marcinkiewicz):
        return Lorentz(X.phi.tilde())
    if isinstance(X, ExpLp):
        # Exp L^p coincides with M(phi_p); dual through that identification
        return Lorentz(X.phi_p().tilde())
    if isinstance(X, OrliczSpace) and isinstance(X.M, PowerOrlicz):
        return dual_space(Lp(Fraction(X.M.p).limit_denominator(10**6)))
    raise UnsupportedDual(f"no dual formula for {X.label}")


def dilation_indices(psi: PhiFn, j_lo: int = 40, j_hi: int = 80) -> tuple[float, float]:
    """Finite-grid estimates of the lower/upper dilation indices of psi.

    Log-log slope fit of sup_s psi(st)/psi(s) for t -> 0 (gamma) and
    t -> infinity (delta); clamped into [0, 1] with gamma <= delta.  The
    window must sit deep enough that slowly varying factors (powers of
    log) contribute a slope below the reported 0.02 tolerance.
    """
    s_grid = [2.0**-j for j in range(0, 2 * j_hi + 1)]

    def sup_ratio_small(t: float) -> float:
        return max(psi(s * t) / psi(s) for s in s_grid if 0.0 < s * t <= 1.0)

    def sup_ratio_large(t: float) -> float:
        return max(psi(s * t) / psi(s) for s in s_grid if s <= 1.0 / t)

    js = list(range(j_lo, j_hi + 1))
    xs = [-j for j in js]
    y_gamma = [math.log2(sup_ratio_small(2.0**-j)) for j in js]
    y_delta = [math.log2(sup_ratio_large(2.0**j)) for j in js]
    gamma = float(np.polyfit(xs, y_gamma, 1)[0])
    delta = float(np.polyfit([j for j in js], y_delta, 1)[0])
    gamma = min(max(gamma, 0.0), 1.0)
    delta = min(max(delta, 0.0), 1.0)
    if gamma > delta:
        gamma, delta = delta, gamma
    return gamma, delta


def delta2_check(phi: PhiFn) -> dict:
    """Trend test of phi(t) <= C phi(t^2) on the grid t = 2^-j, j <= 40."""

    def sup_upto(jmax: int) -> float:
        best = 0.0
        for j in range(1, jmax + 1):
            t = 2.0**-j
            denom = phi(t * t)
            best = max(best, math.inf if denom == 0 else phi(t) / denom)
        return best

    s1, s2, s3 = sup_upto(10), sup_upto(20), sup_upto(40)
    if not all(math.isfinite(s) for s in (s1, s2, s3)):
        return {"holds": False, "C": math.inf, "sups": [s1, s2, s3]}
    g12 = s2 / s1 if s1 > 0 else math.inf
    g23 = s3 / s2 if s2 > 0 else math.inf
    holds = g23 <= max(g12, 1.0 + 1e-9) and g23 <= 1.1
    return {"holds": bool(holds), "C": s3, "sups": [s1, s2, s3]}


def _loghalf(t: float) -> float:
    return math.sqrt(math.log(math.e / t))


def contains_loghalf(X: SpaceSpec) -> bool:
    """Family-specific membership of log^(1/2)(e/t) in X (truncation trend
    where no closed form decides)."""
    if isinstance(X, Lp):
        return True
    if isinstance(X, Linfty):
        return False
    if isinstance(X, ExpLp):
        return float(X.p) <= 2.0
    if isinstance(X, OrliczSpace):
        if isinstance(X.M, PowerOrlicz):
            return True
        if isinstance(X.M, ExpPowerOrlicz):
            return X.M.p <= 2.0
        raise InvalidSpec(f"unknown Orlicz form {X.M!r}")
    if isinstance(X, Lorentz):
        partials = []
        for jmax in (16, 32, 64, 128, 256):
            total = 0.0
            prev_phi = X.phi(1.0)
            acc = 0.0
            for j in range(1, jmax + 1):
                t_hi = 2.0 ** -(j - 1)
                t_lo = 2.0**-j
                acc += _loghalf(t_hi) * (prev_phi - X.phi(t_lo))
                prev_phi = X.phi(t_lo)
            partials.append(acc)
        diverging, _ = divergence_trend(partials)
        return not diverging
    if isinstance(X, Marcinkiewicz):
        sups = []
        for jmax in (16, 32, 64, 128, 256):
            best = 0.0
            for j in range(0, jmax + 1):
                t = 2.0**-j
                best = max(best, X.phi(t) / t * loghalf_cumulative(t))
            sups.append(best)
        diverging, _ = divergence_trend(sups)
        return not diverging
    raise InvalidSpec(f"unknown family {X!r}")


def _stieltjes_weighted(v_cells, phi: PhiFn, cutoff: float) -> float:
    """Sum_i v_i * integral over cell of log^(1/2)(e/t) d phi(t), truncated
    below at `cutoff`, by geometric-grid Stieltjes sums."""
    total = 0.0
    for a, b, v in v_cells:
        lo = max(a, cutoff)
        if lo >= b:
            continue
        # geometric refinement toward the left edge
        ts = np.geomspace(lo, b, num=max(8, int(24 * math.log2(b / lo) + 8)))
        phis = [phi(float(t)) for t in ts]
        mids = [math.sqrt(t0 * t1) for t0, t1 in zip(ts, ts[1:])]
        total += v * math.fsum(
            _loghalf(m) * (p1 - p0) for m, p0, p1 in zip(mids, phis, phis[1:])
        )
    return total


def sym_kernel_report(X: SpaceSpec, f: StepFunction) -> dict:
    """Norm of f*(t) log^(1/2)(e/t) in X with a truncation-trend certificate."""
    cells = _star_cells(f)
    if not cells:
        return {"value": 0.0, "diverging": False, "trend": []}

    if isinstance(X, OrliczSpace):
        if isinstance(X.M, PowerOrlicz):
            return sym_kernel_report(Lp(Fraction(X.M.p).limit_denominator(10**6)), f)
        if isinstance(X.M, ExpPowerOrlicz):
            return sym_kernel_report(ExpLp(Fraction(X.M.p).limit_denominator(10**6)), f)
        raise InvalidSpec(f"unknown Orlicz form {X.M!r}")

    if isinstance(X, Lp):
        p = float(X.p)
        total = math.fsum(
            v**p * (logpow_cumulative(p / 2.0, b) - logpow_cumulative(p / 2.0, a))
            for a, b, v in cells
        )
        return {"value": total ** (1.0 / p), "diverging": False, "trend": []}

    if isinstance(X, Linfty):
        return {"value": math.inf, "diverging": True, "trend": []}

    if isinstance(X, ExpLp):
        e0 = 0.5 - 1.0 / float(X.p)
        if e0 > 0 and cells[0][0] == 0.0:
            return {"value": math.inf, "diverging": True, "trend": []}
        best = 0.0
        for a, b, v in cells:
            t = b if e0 <= 0 else max(a, 1e-300)
            best = max(best, v * math.log(math.e / t) ** e0)
        return {"value": best, "diverging": False, "trend": []}

    if isinstance(X, Lorentz):
        partials = [
            _stieltjes_weighted(cells, X.phi, 2.0**-j) for j in (16, 32, 64, 128, 256)
        ]
        diverging, _ = divergence_trend(partials)
        return {
            "value": math.inf if diverging else partials[-1],
            "diverging": diverging,
            "trend": partials,
        }

    if isinstance(X, Marcinkiewicz):
        def H(t: float) -> float:
            acc = 0.0
            for a, b, v in cells:
                if t <= a:
                    break
                acc += v * (loghalf_cumulative(min(t, b)) - loghalf_cumulative(a))
            return acc

        sups = []
        for jmax in (16, 32, 64, 128, 256):
            candidates = [2.0**-j for j in range(0, jmax + 1)]
            candidates += [b for _, b, _ in cells]
            best = max(X.phi(t) / t * H(t) for t in candidates if t > 0)
            sups.append(best)
        diverging, _ = divergence_trend(sups)
        return {
            "value": math.inf if diverging else sups[-1],
            "diverging": diverging,
            "trend": sups,
        }

    raise InvalidSpec(f"unknown family {X!r}")


def sym_kernel_norm(X: SpaceSpec, f: StepFunction) -> float:
    return sym_kernel_report(X, f)["value"]


def psi_from_phi(phi: PhiFn, j_max: int = 60, rel_tol: float = 1e-8) -> TabulatedConcave:
    """psi(t) = integral_0^t phi'(s) log^(1/2)(e/s) ds on a logarithmic grid."""
    if phi.derivative(0.5) is None:
        raise QuadratureFailure("phi has no usable derivative")

    def integrand(s: float) -> float:
        return phi.derivative(s) * _loghalf(s)

    grid = [2.0**-j for j in range(j_max, -1, -1)]
    points: list[tuple[float, float]] = []
    acc, err_head = integrate.quad(integrand, 0.0, grid[0], limit=200)
    total_err = err_head
    points.append((grid[0], acc))
    for lo, hi in zip(grid, grid[1:]):
        piece, err = integrate.quad(integrand, lo, hi, limit=200)
        acc += piece
        total_err += err
        points.append((hi, acc))
    if acc > 0 and total_err / acc > rel_tol:
        raise QuadratureFailure(f"relative error {total_err / acc:.2e} exceeds {rel_tol}")
    return TabulatedConcave(tuple(points))


_SQRT_ALIASES = {"sqrt": 0.5}


def _parse_phi(parts: list[str]) -> PhiFn:
    if not parts:
        raise InvalidSpec("missing phi descriptor")
    head = parts[0]
    if head in _SQRT_ALIASES:
        return PowerPhi(_SQRT_ALIASES[head])
    if head == "pow":
        return PowerPhi(float(parts[1]))
    if head == "logpow":
        return LogPowerPhi(beta=float(parts[1]))
    raise InvalidSpec(f"unknown phi descriptor {':'.join(parts)!r}")


def parse_space(text: str) -> SpaceSpec:
    """Parse CLI descriptors: lp:2, linfty, lorentz:sqrt, lorentz:pow:0.5,
    marcinkiewicz:logpow:0.5, explp:2, orlicz:pow:2, orlicz:exp:2."""
    parts = text.strip().lower().split(":")
    family = parts[0]
    try:
        if family == "lp":
            return Lp(Fraction(parts[1]))
        if family == "linfty":
            return Linfty()
        if family == "lorentz":
            return Lorentz(_parse_phi(parts[1:]))
        if family == "marcinkiewicz":
            return Marcinkiewicz(_parse_phi(parts[1:]))
        if family == "explp":
            return ExpLp(Fraction(parts[1]))
        if family == "orlicz":
            if parts[1] == "pow":
                return OrliczSpace(PowerOrlicz(float(parts[2])))
            if parts[1] == "exp":
                return OrliczSpace(ExpPowerOrlicz(float(parts[2])))
    except (IndexError, ValueError) as exc:
        raise InvalidSpec(f"malformed space descriptor {text!r}") from exc
    raise InvalidSpec(f"unknown space family {family!r}")


def fundamental_crosscheck(X: SpaceSpec, t: Fraction, level: int | None = None) -> tuple[float, float]:
    """(closed form, direct norm of the indicator) for chi_[0,t]."""
    chi = chi_prefix(Fraction(t), level)
    return X.fundamental(t), X.norm(chi)
