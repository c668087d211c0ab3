"""Rademacher coefficients, projections, Khintchine checks, and
multiplicator / projection norm estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dyadic import (
    StepFunction,
    hadamard_select,
    level_cap,
    rademacher,
    rademacher_sum,
    sign_matrix,
)
from .errors import LevelCapExceeded, TooManyCoefficients
from .spaces import (
    Lp,
    SpaceSpec,
    contains_loghalf,
    dual_space,
    norm,
    sym_kernel_report,
)
from .weighted import Weight, weighted_norm

KHINTCHINE_MAX_N = 20
KHINTCHINE_LOWER_SQ = Fraction(1, 2)  # (1/sqrt(2))^2


@dataclass(frozen=True)
class CoeffSeq:
    """Finite coefficient sequence with exact l2 accounting for rationals."""

    a: tuple[Fraction, ...]

    @staticmethod
    def of(values: Sequence) -> "CoeffSeq":
        return CoeffSeq(tuple(Fraction(v) for v in values))

    def __len__(self) -> int:
        return len(self.a)

    def l2_squared(self) -> Fraction:
        return sum((v * v for v in self.a), Fraction(0))

    def l2(self) -> float:
        return math.sqrt(float(self.l2_squared()))


@dataclass(frozen=True)
class NormBracket:
    """Certified [lower, upper] interval for a norm estimate."""

    lower: float
    upper: float
    method: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"bracket inverted: {self.lower} > {self.upper}")


def coefficients(f: StepFunction, n: int) -> CoeffSeq:
    """Exact Rademacher coefficients c_k = integral f r_k, k = 1..n.

    c_k is the alternating-sign sum of the per-cell integrals of f over the
    rank-k dyadic cells; for k above f's level the sibling halves cancel, so
    c_k = 0 exactly.  Cell integrals are folded down one level at a time.
    """
    if n > level_cap():
        raise LevelCapExceeded(f"n = {n} exceeds cap {level_cap()}")
    if n < 1:
        return CoeffSeq(())
    coeffs = [Fraction(0)] * n
    kmax = min(n, f.level)
    if kmax >= 1:
        width = Fraction(1, 2**f.level)
        scale = 2 ** (f.level - kmax)  # level cells per rank-kmax cell
        cell = [Fraction(0)] * 2**kmax  # integral of f over each rank-kmax cell
        pos = 0
        for length, value in f.runs:
            if value != 0:
                start, end = pos, pos + length
                j0, j1 = start // scale, (end - 1) // scale
                if j0 == j1:
                    cell[j0] += value * length * width
                else:
                    cell[j0] += value * ((j0 + 1) * scale - start) * width
                    cell[j1] += value * (end - j1 * scale) * width
                    full = value * scale * width
                    for j in range(j0 + 1, j1):
                        cell[j] += full
            pos += length
        for k in range(kmax, 0, -1):
            coeffs[k - 1] = sum(
                (cell[j] - cell[j + 1] for j in range(0, 2**k, 2)), Fraction(0)
            )
            cell = [cell[2 * j] + cell[2 * j + 1] for j in range(2 ** (k - 1))]
    return CoeffSeq(tuple(coeffs))


def project(f: StepFunction, n: int) -> StepFunction:
    """Truncated Rademacher projection P_n f = sum_{k<=n} c_k(f) r_k, exact."""
    cs = coefficients(f, n).a
    m = len(cs)
    while m and cs[m - 1] == 0:
        m -= 1
    return rademacher_sum(cs[:m])


def weighted_project(f: StepFunction, w: Weight, n: int) -> StepFunction:
    """P_w f = sum_k (integral f r_k / w) r_k w; equals w * P_n(f / w)."""
    coeffs = coefficients(f * w.reciprocal_fn(), n)
    return rademacher_sum(coeffs.a) * w.fn


def rademacher_sum_l1_exact(a: Sequence) -> Fraction:
    """Exact ||sum a_k r_k||_1 by enumeration over the 2**n sign cells."""
    coeffs = [Fraction(v) for v in a]
    n = len(coeffs)
    if n > KHINTCHINE_MAX_N:
        raise TooManyCoefficients(f"n = {n} exceeds {KHINTCHINE_MAX_N}")
    den = math.lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    nums = [int(c * den) for c in coeffs]
    max_abs = sum(abs(v) for v in nums)
    if max_abs.bit_length() + n <= 62:
        vals = np.zeros(1, dtype=np.int64)
        for c in nums:
            vals = np.concatenate([vals + c, vals - c])
        total = int(np.abs(vals).sum())
    else:
        vals_py = [0]
        for c in nums:
            vals_py = [v + c for v in vals_py] + [v - c for v in vals_py]
        total = sum(abs(v) for v in vals_py)
    return Fraction(total, den * 2**n)


def khintchine_check(a: CoeffSeq | Sequence) -> dict:
    """Exact L1 Khintchine window: l2/sqrt(2) <= ||sum a_k r_k||_1 <= l2."""
    seq = a if isinstance(a, CoeffSeq) else CoeffSeq.of(a)
    l1 = rademacher_sum_l1_exact(seq.a)
    l2_sq = seq.l2_squared()
    lower_ok = KHINTCHINE_LOWER_SQ * l2_sq <= l1 * l1
    upper_ok = l1 * l1 <= l2_sq
    return {"l1": l1, "l2_squared": l2_sq, "lower_ok": bool(lower_ok), "upper_ok": bool(upper_ok)}


# Trial vectors only produce lower bounds / empirical brackets, so their
# entries may be rounded to a fixed dyadic grid; dyadic denominators stay
# bounded under addition, keeping exact step-function arithmetic fast.
_SNAP_BITS = 30


def _snap(v: float) -> Fraction:
    return Fraction(round(float(v) * (1 << _SNAP_BITS)), 1 << _SNAP_BITS)


def _float_vector_to_fractions(vec: np.ndarray) -> tuple[Fraction, ...]:
    return tuple(_snap(v) for v in vec)


def _unit_vectors(n: int, trials: int, seed) -> list[tuple[Fraction, ...]]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        v = rng.standard_normal(n)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            v = np.ones(n)
            nrm = math.sqrt(n)
        out.append(_float_vector_to_fractions(v / nrm))
    return out


def _structured_unit_vectors(n: int) -> list[tuple[Fraction, ...]]:
    vecs = []
    for k in range(n):
        e = [Fraction(0)] * n
        e[k] = Fraction(1)
        vecs.append(tuple(e))
    u = _snap(1.0 / math.sqrt(n))
    vecs.append(tuple([u] * n))
    if n >= 2 and n & (n - 1) == 0:
        from .dyadic import _sylvester

        h = _sylvester(n)
        for c in range(n):
            vecs.append(tuple(_snap(s / math.sqrt(n)) for s in h[:, c]))
    return vecs


def equivalence_constants(X: SpaceSpec, w: Weight, n: int, trials: int, seed) -> dict:
    """Empirical bracket for ||sum a_k r_k||_X(w) over unit vectors a."""
    vals = []
    for a in _unit_vectors(n, trials, seed) + _structured_unit_vectors(n):
        vals.append(weighted_norm(X, w, rademacher_sum(a)))
    return {"cLow": min(vals), "cHigh": max(vals), "n": n, "trials": trials}


def _ratio_objective(X: SpaceSpec, f: StepFunction, a: Sequence[float]) -> float:
    s = rademacher_sum([_snap(v) for v in a])
    denom = norm(X, s)
    if denom == 0.0:
        return 0.0
    return norm(X, f * s) / denom


def _indicator_profile(f: StepFunction, n: int):
    """If f = c * chi_A with A a union of rank-n cells, return (c, J); else None."""
    if f.level > n:
        return None
    nonzero = {value for _, value in f.runs if value != 0}
    if len(nonzero) != 1:
        return None
    c = nonzero.pop()
    if c < 0:
        c = -c
    js = []
    cell = 1
    rep = 2 ** (n - f.level)
    for length, value in f.runs:
        if value != 0:
            js.extend(range(cell, cell + length * rep))
        cell += length * rep
    return c, js


def _hadamard_orthogonal(n: int, js: list[int]) -> bool:
    if len(js) != n or n > 16:
        return False
    block = sign_matrix(n).select(js).selected_block().astype(np.int64)
    return bool(np.array_equal(block.T @ block, n * np.eye(n, dtype=np.int64)))


def multiplicator_norm(
    X: SpaceSpec, f: StepFunction, n: int, budget: int = 200, seed=0
) -> NormBracket:
    """Bracket for the multiplicator norm restricted to the first n Rademachers.

    Lower bound: structured witnesses plus seeded coordinate-ascent on the
    norm ratio.  Upper bound: exact head/tail chain for L1 indicators, or
    the symmetric-kernel surrogate (measured equivalence, not certified).
    """
    # constant functions multiply every Rademacher sum verbatim
    consts = {abs(value) for _, value in f.runs}
    if len(consts) == 1:
        c = float(consts.pop())
        return NormBracket(c, c, "exact")

    evals = 0
    best = 0.0
    best_vec: np.ndarray | None = None
    for a in _structured_unit_vectors(n):
        val = _ratio_objective(X, f, [float(v) for v in a])
        evals += 1
        if val > best:
            best = val
            best_vec = np.array([float(v) for v in a])

    rng = np.random.default_rng(seed)
    budget_flag = False
    starts = [best_vec] if best_vec is not None else []
    while evals < budget:
        starts.append(rng.standard_normal(n))
        a = starts.pop(0)
        a = a / (np.linalg.norm(a) or 1.0)
        cur = _ratio_objective(X, f, a)
        evals += 1
        step = 0.5
        while step > 1e-3 and evals < budget:
            improved = False
            for i in range(n):
                for sgn in (1.0, -1.0):
                    if evals >= budget:
                        budget_flag = True
                        break
                    trial = a.copy()
                    trial[i] += sgn * step
                    val = _ratio_objective(X, f, trial)
                    evals += 1
                    if val > cur:
                        cur, a, improved = val, trial, True
                        break
                if budget_flag:
                    break
            if not improved:
                step /= 2.0
        best = max(best, cur)
        if budget_flag:
            break

    lower = best
    lower_method = "witness+ascent"

    upper = math.inf
    upper_method = "none"
    profile = _indicator_profile(f, n)
    if isinstance(X, Lp) and X.p == 1 and profile is not None and n <= 16:
        c, js = profile
        m_a = len(js) * 2.0**-n
        head = n * 2.0**-n if _hadamard_orthogonal(n, js) else math.sqrt(m_a)
        upper = float(c) * math.sqrt(2.0) * (head + m_a)
        upper_method = "exact-chain+tail-bound"
    elif contains_loghalf(X):
        rep = sym_kernel_report(X, f)
        if not rep["diverging"]:
            upper = rep["value"]
            upper_method = "sym-upper"

    if upper < lower:
        upper = lower
        upper_method += "(inflated-to-lower)"
    method = f"lower={lower_method};upper={upper_method}"
    if budget_flag:
        method += ";budget-exhausted"
    return NormBracket(lower, upper, method)


def _projection_test_functions(n: int, trials: int, seed) -> list[StepFunction]:
    from .dyadic import chi_prefix

    rng = np.random.default_rng(seed)
    level = min(n + 2, 10)
    fns = [rademacher(k) for k in range(1, n + 1)]
    if n + 1 <= level_cap():
        fns.append(rademacher(n + 1))
    fns.append(StepFunction.constant(1))
    fns.append(chi_prefix(Fraction(1, 2)))
    for _ in range(trials):
        vals = rng.standard_normal(2**level)
        fns.append(StepFunction.from_runs(level, ((1, _snap(v)) for v in vals)))
    return fns


def projection_norm(X: SpaceSpec, w: Weight, n: int, trials: int = 50, seed=0) -> float:
    """Certified lower bound on ||P_n||_{X(w) -> X(w)} from test functions."""
    best = 0.0
    for f in _projection_test_functions(n, trials, seed):
        denom = weighted_norm(X, w, f)
        if denom == 0.0:
            continue
        best = max(best, weighted_norm(X, w, project(f, n)) / denom)
    return best


def projection_norm_profile(
    X: SpaceSpec, w: Weight, ns: Sequence[int] = (2, 4, 8, 16), trials: int = 50, seed=0
) -> list[tuple[int, float]]:
    return [(n, projection_norm(X, w, n, trials, seed)) for n in ns]


def theorem_predicates(X: SpaceSpec, w: Weight, n: int = 8, budget: int = 80, seed=0) -> dict:
    """Numeric proxies for the span / embedding criteria at finite truncation.

    The G-embedding proxy is membership of log^(1/2)(e/t); symmetric-kernel
    membership is a truncation-trend certificate; none of these is a proof.
    """
    from .spaces import ExpLp, Linfty

    g_subset = contains_loghalf(X)
    report: dict = {
        "space": X.label,
        "weight": w.label,
        "g_subset_proxy": {
            "value": bool(g_subset),
            "method": "closed-form/trend membership of log^(1/2)(e/t)",
        },
    }
    if not g_subset:
        report["branch"] = "equivalence fails"
        return report
    report["branch"] = "equivalence"

    sym = sym_kernel_report(X, w.fn)
    report["w_in_sym_proxy"] = {
        "value": not sym["diverging"],
        "sym_norm": sym["value"],
        "method": "trend",
    }

    bracket = multiplicator_norm(X, w.fn, n, budget, seed)
    report["w_in_mult"] = {
        "lower": bracket.lower,
        "upper": bracket.upper,
        "method": bracket.method,
    }
    try:
        dual = dual_space(X)
        dual_bracket = multiplicator_norm(dual, w.reciprocal_fn(), n, budget, seed)
        report["inv_w_in_mult_dual"] = {
            "lower": dual_bracket.lower,
            "upper": dual_bracket.upper,
            "method": dual_bracket.method,
        }
    except Exception as exc:  # UnsupportedDual propagates as a note
        report["inv_w_in_mult_dual"] = {"error": type(exc).__name__}

    if isinstance(X, ExpLp):
        p = float(X.p)
        if p < 2.0:
            q = 2.0 * p / (2.0 - p)
            qspace: SpaceSpec = ExpLp(Fraction(q).limit_denominator(10**6))
        else:
            q = math.inf
            qspace = Linfty()
        report["explp_weight_membership"] = {
            "q": q,
            "norm_w": norm(qspace, w.fn),
            "method": "direct evaluation at the weight's sampling level",
        }
    return report
