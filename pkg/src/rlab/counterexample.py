"""Executable two-tier construction of f with bounded multiplicator norm and
an equimeasurable g with diverging block lower bounds.

Explicit tier: materialize the blocks for relaxed plans within the level cap.
Certificate tier: exact integer/rational verification of the closed-form
bound chains, with eighth-root comparisons done by cross-raising to integer
powers (no irrational intermediates)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .dyadic import (
    StepFunction,
    hadamard_select,
    indicator,
    level_cap,
    single_negative_select,
)
from .errors import BlockTooSmall, GrowthConditionViolated, LevelCapExceeded, NotPowerOfTwo
from .rearrangement import equimeasurable
from .spaces import loghalf_cumulative


@dataclass(frozen=True)
class CounterexamplePlan:
    m_list: tuple[int, ...]
    strict: bool
    n: tuple[int, ...]  # n_k = 2**m_k
    N: tuple[int, ...]  # partial sums n_1 + ... + n_k
    condition_ok: bool  # growth condition n_k^(1/8) >= 2^(N_{k-1})

    def alpha_float(self, k: int) -> float:
        """alpha_k = 2**n_k * n_k**(-5/4); float, for explicit small builds."""
        nk = self.n[k - 1]
        return 2.0**nk * nk**-1.25

    def alpha_mpf(self, k: int) -> mpmath.mpf:
        nk = self.n[k - 1]
        return mpmath.power(2, nk) * mpmath.power(nk, mpmath.mpf(-5) / 4)


def plan(m_list, strict: bool = True) -> CounterexamplePlan:
    ms = tuple(int(m) for m in m_list)
    if not ms or any(b <= a for a, b in zip(ms, ms[1:])):
        raise GrowthConditionViolated("m_list must be strictly increasing and nonempty")
    ns = tuple(2**m for m in ms)
    Ns = []
    acc = 0
    for nk in ns:
        acc += nk
        Ns.append(acc)
    # n_k^(1/8) >= 2^(N_{k-1})  <=>  m_k >= 8 N_{k-1}
    ok = all(ms[k] >= 8 * Ns[k - 1] for k in range(1, len(ms)))
    if strict and not ok:
        bad = next(k for k in range(1, len(ms)) if ms[k] < 8 * Ns[k - 1])
        raise GrowthConditionViolated(
            f"block {bad + 1}: m = {ms[bad]} < 8 * N_prev = {8 * Ns[bad - 1]}"
        )
    return CounterexamplePlan(ms, strict, ns, tuple(Ns), ok)


def _alpha_exact_or_float(nk: int, mk: int) -> Fraction:
    """Exact 2**(n_k - 5 m_k / 4) when the exponent is an integer, else the
    exactly-representable float approximation (heights only need to match
    between the two blocks, which this guarantees)."""
    num = 4 * nk - 5 * mk
    if num % 4 == 0:
        e = num // 4
        return Fraction(2**e) if e >= 0 else Fraction(1, 2**-e)
    return Fraction(2.0**nk * nk**-1.25)


def _nested_selection(pl: CounterexamplePlan, K: int, select) -> list[list[int]]:
    """Per-block 1-based rank-N_k interval index sets, each nested inside a
    host interval left free by the previous block."""
    blocks: list[list[int]] = []
    host = 1  # 1-based index of the current host interval, rank N_{k-1}
    for k in range(1, K + 1):
        nk = pl.n[k - 1]
        sub = select(nk)  # 1-based sub-indices within the host, rank n_k
        base = (host - 1) * 2**nk
        blocks.append([base + j for j in sub])
        taken = set(sub)
        free = next(j for j in range(1, 2**nk + 1) if j not in taken)
        host = base + free
    return blocks


def build_explicit(pl: CounterexamplePlan, K: int) -> dict:
    """Materialize f = sum alpha_k chi_(B_k) and g = sum alpha_k chi_(D_k)."""
    if K < 1 or K > len(pl.m_list):
        raise GrowthConditionViolated(f"K = {K} out of range for plan of {len(pl.m_list)} blocks")
    if pl.N[K - 1] > level_cap():
        raise LevelCapExceeded(f"N_{K} = {pl.N[K - 1]} exceeds cap {level_cap()}")

    b_sets = _nested_selection(pl, K, hadamard_select)
    d_sets = _nested_selection(pl, K, lambda n: list(single_negative_select(n)))

    f = StepFunction.zero()
    g = StepFunction.zero()
    for k in range(1, K + 1):
        alpha = _alpha_exact_or_float(pl.n[k - 1], pl.m_list[k - 1])
        f = f + indicator(pl.N[k - 1], b_sets[k - 1]).scale(alpha)
        g = g + indicator(pl.N[k - 1], d_sets[k - 1]).scale(alpha)
    assert equimeasurable(f, g)
    return {"f": f, "g": g, "B": b_sets, "D": d_sets, "plan": pl}


def _check_head_simplification(prefix_N: int) -> bool:
    """(sqrt(P) + 1) 2^-P <= 1, exactly: sqrt(P) <= 2^P - 1 <=> P <= (2^P - 1)^2."""
    if prefix_N == 0:
        return True
    return prefix_N <= (2**prefix_N - 1) ** 2


def _check_tail_dominated(n: int, prefix_N: int) -> bool:
    """N 2^-N <= n 2^-n with N = prefix + n, exactly: N <= n 2^(N-n).

    Stated this way the power has exponent prefix_N, not n, so plan-scale
    blocks (n ~ 2^65536 and beyond) stay computable."""
    N = prefix_N + n
    return N <= n * 2**prefix_N


def bound_B(n: int, prefix_N: int = 0, precision: int = 128) -> mpmath.mpf:
    """Certified upper bound 2 sqrt(2) n 2^-n for the Hadamard block's
    multiplicator norm, after exact verification of the simplification chain."""
    if n < 1 or n & (n - 1) != 0:
        raise NotPowerOfTwo(f"n = {n} is not a power of two")
    if not _check_head_simplification(prefix_N):
        raise GrowthConditionViolated(f"head simplification fails at prefix {prefix_N}")
    if not _check_tail_dominated(n, prefix_N):
        raise GrowthConditionViolated(f"tail term not dominated for n={n}, prefix={prefix_N}")
    with mpmath.workprec(precision):
        return 2 * mpmath.sqrt(2) * n * mpmath.power(2, -n)


def bound_D(n: int, prefix_N: int = 0, precision: int = 128) -> mpmath.mpf:
    """Exact witness value (sqrt(n) - 2/sqrt(n)) n 2^-(prefix+n) for the
    single-negative block; asserted >= n^(3/2) 2^-(prefix+n) / 2."""
    if n < 4:
        raise BlockTooSmall(f"n = {n} < 4")
    # sqrt(n) - 2/sqrt(n) >= sqrt(n)/2  <=>  n >= 4, exact
    assert n >= 4
    with mpmath.workprec(precision):
        root = mpmath.sqrt(n)
        return (root - 2 / root) * n * mpmath.power(2, -(prefix_N + n))


def _gterm_eighth_powers(nk: int, prefix_N: int) -> tuple[Fraction, Fraction]:
    """Exact 8th powers of alpha_k * bound_D and of n_k^(1/8) / 2.

    alpha_k bound_D = (n^(1/2) - 2 n^(-1/2)) n^(-1/4) 2^(-prefix); its square
    is (n - 4 + 4/n) n^(-1/2) 4^(-prefix), so the 8th power is rational."""
    base = Fraction(nk) - 4 + Fraction(4, nk)
    lhs8 = base**4 / Fraction(nk**2) / Fraction(2 ** (8 * prefix_N))
    rhs8 = Fraction(nk, 2**8)
    return lhs8, rhs8


def _fterm_eighth_power(nk: int) -> Fraction:
    """(alpha_k * bound_B)^8 = (2 sqrt(2) n_k^(-1/4))^8 = 2^12 / n_k^2, exact."""
    return Fraction(2**12, nk**2)


def _fraction_repr(fr: Fraction) -> str:
    """Exact p/q string when printable; high-precision decimal otherwise
    (plan-scale eighth powers overflow the int-to-str digit limit)."""
    if fr.numerator.bit_length() < 4000 and fr.denominator.bit_length() < 4000:
        return str(fr)
    with mpmath.workprec(80):
        return mpmath.nstr(mpmath.mpf(fr.numerator) / mpmath.mpf(fr.denominator), 20)


def certify(pl: CounterexamplePlan, K: int, precision: int = 128) -> dict:
    """Exact-arithmetic certificate for the first K blocks of a strict plan."""
    if not (pl.strict and pl.condition_ok):
        raise GrowthConditionViolated("certify requires a strict plan satisfying the growth condition")
    if K < 1 or K > len(pl.m_list):
        raise GrowthConditionViolated(f"K = {K} out of range")

    checks: list[dict] = []
    f_terms: list[mpmath.mpf] = []
    g_terms: list[mpmath.mpf | None] = []
    ok = True
    with mpmath.workprec(precision):
        majorant_factor = 2 * mpmath.sqrt(2)
        for k in range(1, K + 1):
            nk = pl.n[k - 1]
            prefix = pl.N[k - 2] if k >= 2 else 0

            bB = bound_B(nk, prefix, precision)  # raises if the chain breaks
            f_term = pl.alpha_mpf(k) * bB
            f_terms.append(f_term)
            # alpha_k bound_B == 2 sqrt(2) n_k^(-1/4): exact via 8th powers
            lhs8 = _fterm_eighth_power(nk)
            rhs8 = Fraction(2**12, nk**2)
            holds = lhs8 <= rhs8
            ok &= holds
            checks.append(
                {
                    "name": f"f_term_le_majorant[k={k}]",
                    "lhs8": _fraction_repr(lhs8),
                    "rhs8": _fraction_repr(rhs8),
                    "relation": "<=",
                    "holds": bool(holds),
                    "lhs": mpmath.nstr(f_term, 20),
                    "rhs": mpmath.nstr(majorant_factor * mpmath.power(nk, mpmath.mpf(-1) / 4), 20),
                    "method": "exact",
                }
            )

            if nk < 4:
                g_terms.append(None)
                checks.append(
                    {
                        "name": f"g_term_ge_half_eighth_root[k={k}]",
                        "holds": True,
                        "skipped": "block too small for the witness bound (n < 4)",
                        "method": "exact",
                    }
                )
                continue

            bD = bound_D(nk, prefix, precision)
            g_term = pl.alpha_mpf(k) * bD
            g_terms.append(g_term)
            lhs8, rhs8 = _gterm_eighth_powers(nk, prefix)
            holds = lhs8 >= rhs8
            ok &= holds
            checks.append(
                {
                    "name": f"g_term_ge_half_eighth_root[k={k}]",
                    "lhs8": _fraction_repr(lhs8),
                    "rhs8": _fraction_repr(rhs8),
                    "relation": ">=",
                    "holds": bool(holds),
                    "lhs": mpmath.nstr(g_term, 20),
                    "rhs": mpmath.nstr(mpmath.power(nk, mpmath.mpf(1) / 8) / 2, 20),
                    "method": "exact",
                }
            )

        real_g = [(idx + 1, g) for idx, g in enumerate(g_terms) if g is not None]
        for (k0, g0), (k1, g1) in zip(real_g, real_g[1:]):
            holds = g1 > g0
            ok &= holds
            checks.append(
                {
                    "name": f"g_terms_increasing[{k0}->{k1}]",
                    "holds": bool(holds),
                    "lhs": mpmath.nstr(g0, 20),
                    "rhs": mpmath.nstr(g1, 20),
                    "relation": "<",
                    "method": "high-precision",
                }
            )

        partials = []
        acc = mpmath.mpf(0)
        for t in f_terms:
            acc += t
            partials.append(mpmath.nstr(acc, 20))

    return {
        "verdict": "PASS" if ok else "FAIL",
        "blocks": K,
        "m_list": list(pl.m_list),
        "f_upper_series": partials,
        "g_lower_terms": [None if g is None else mpmath.nstr(g, 20) for g in g_terms],
        "checks": checks,
        "precision": precision,
    }


def sym_integral_trend_function(f: StepFunction) -> float:
    """integral of f*(t) log^(1/2)(e/t) dt for an explicit step function."""
    from .rearrangement import decreasing_rearrangement

    total = 0.0
    for a, b, v in decreasing_rearrangement(f).cells():
        if v == 0:
            break
        total += float(v) * (loghalf_cumulative(float(b)) - loghalf_cumulative(float(a)))
    return total


def sym_integral_trend_plan(pl: CounterexamplePlan, K: int, precision: int = 128) -> dict:
    """Per-block contributions to integral f* log^(1/2)(e/t) dt at plan scale.

    Blocks enter the rearrangement in order of decreasing height, i.e.
    k = K down to 1; windows and integrals are evaluated in high precision."""
    with mpmath.workprec(precision):
        e = mpmath.e

        def cumulative(T):
            if T <= 0:
                return mpmath.mpf(0)
            x = 1 - mpmath.log(T)
            return e * mpmath.gammainc(mpmath.mpf(3) / 2, a=x)

        contributions: dict[int, str] = {}
        raw = []
        pos = mpmath.mpf(0)
        for k in range(K, 0, -1):
            width = pl.n[k - 1] * mpmath.power(2, -pl.N[k - 1])
            contrib = pl.alpha_mpf(k) * (cumulative(pos + width) - cumulative(pos))
            pos += width
            contributions[k] = mpmath.nstr(contrib, 20)
            raw.append((k, contrib))
        raw.sort()
        partial = mpmath.mpf(0)
        partials = []
        for _, c in raw:
            partial += c
            partials.append(mpmath.nstr(partial, 20))
    return {"contributions": contributions, "partial_sums": partials}
