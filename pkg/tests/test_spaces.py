"""Norms, fundamental functions, duals, indices, and membership predicates."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from rlab.dyadic import StepFunction, chi_prefix, make_step
from rlab.errors import InvalidSpec, UnsupportedDual
from rlab.phi import LogPowerPhi, PhiFn, PowerOrlicz, PowerPhi
from rlab.rearrangement import decreasing_rearrangement
from rlab.spaces import (
    ExpLp,
    Linfty,
    Lorentz,
    Lp,
    Marcinkiewicz,
    OrliczSpace,
    contains_loghalf,
    delta2_check,
    dilation_indices,
    divergence_trend,
    dual_space,
    fundamental,
    fundamental_crosscheck,
    logpow_cumulative,
    norm,
    parse_space,
    psi_from_phi,
    sym_kernel_norm,
)

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=16)
step_functions = st.integers(min_value=0, max_value=5).flatmap(
    lambda lvl: st.lists(rationals, min_size=2**lvl, max_size=2**lvl).map(
        lambda vs: make_step(lvl, vs)
    )
)

ALL_SPACES = [
    Lp(F(1)),
    Lp(F(3, 2)),
    Lp(F(2)),
    Linfty(),
    Lorentz(PowerPhi(0.5)),
    Marcinkiewicz(PowerPhi(0.5)),
    OrliczSpace(PowerOrlicz(2.0)),
    ExpLp(F(2)),
]


class TestNormExamples:
    def test_l1_spike(self):
        assert norm(Lp(F(1)), make_step(2, [2, 0, 0, 0])) == pytest.approx(0.5)

    def test_lorentz_sqrt_indicator(self):
        assert norm(Lorentz(PowerPhi(0.5)), chi_prefix(F(1, 4))) == pytest.approx(0.5)

    def test_marcinkiewicz_sqrt_indicator(self):
        assert norm(Marcinkiewicz(PowerPhi(0.5)), chi_prefix(F(1, 4))) == pytest.approx(
            0.5, rel=1e-9
        )

    def test_orlicz_square_indicator(self):
        X = OrliczSpace(PowerOrlicz(2.0))
        analytic = 1.0 / PowerOrlicz(2.0).inverse(4.0)
        assert norm(X, chi_prefix(F(1, 4))) == pytest.approx(analytic, rel=1e-9)

    def test_linfty(self):
        assert norm(Linfty(), make_step(1, [-3, 2])) == 3.0

    def test_explp_constant(self):
        assert norm(ExpLp(F(2)), StepFunction.constant(1)) == pytest.approx(1.0)

    def test_zero_function_everywhere(self):
        for X in ALL_SPACES:
            assert norm(X, StepFunction.zero()) == 0.0

    def test_l2_exact_moments(self):
        f = make_step(2, [3, 1, 2, 3])
        assert norm(Lp(F(2)), f) == pytest.approx(math.sqrt(23 / 4), rel=1e-12)


class TestFundamental:
    def test_l2_quarter(self):
        assert fundamental(Lp(F(2)), F(1, 4)) == pytest.approx(0.5)

    def test_lorentz_is_phi(self):
        phi = PowerPhi(0.5)
        assert fundamental(Lorentz(phi), F(1, 8)) == pytest.approx(phi(0.125))
        assert fundamental(Marcinkiewicz(phi), F(1, 8)) == pytest.approx(phi(0.125))

    def test_explp_is_log_power(self):
        t = 0.125
        expect = math.log(math.e / t) ** -0.5
        assert fundamental(ExpLp(F(2)), F(1, 8)) == pytest.approx(expect)

    @pytest.mark.parametrize(
        "X",
        [Lp(F(1)), Lp(F(3, 2)), Lp(F(2)), Lorentz(PowerPhi(0.5)), Marcinkiewicz(PowerPhi(0.5))],
    )
    def test_crosscheck_against_indicator_norm(self, X):
        for j in range(1, 10):
            closed, direct = fundamental_crosscheck(X, F(1, 2**j))
            assert direct == pytest.approx(closed, rel=1e-9)


class TestDuality:
    def test_lorentz_dual_is_marcinkiewicz_tilde(self):
        dual = dual_space(Lorentz(PowerPhi(0.5)))
        assert isinstance(dual, Marcinkiewicz)
        # tilde of sqrt is sqrt again
        for t in (0.1, 0.5, 0.9):
            assert dual.phi(t) == pytest.approx(math.sqrt(t))

    def test_marcinkiewicz_dual_is_lorentz(self):
        assert isinstance(dual_space(Marcinkiewicz(PowerPhi(0.5))), Lorentz)

    def test_lp_self_and_extremes(self):
        assert dual_space(Lp(F(2))) == Lp(F(2))
        assert isinstance(dual_space(Lp(F(1))), Linfty)
        assert dual_space(Linfty()) == Lp(F(1))
        assert dual_space(Lp(F(3))) == Lp(F(3, 2))

    def test_explp_dual_via_marcinkiewicz_form(self):
        assert isinstance(dual_space(ExpLp(F(2))), Lorentz)

    def test_unsupported(self):
        from rlab.phi import ExpPowerOrlicz

        with pytest.raises(UnsupportedDual):
            dual_space(OrliczSpace(ExpPowerOrlicz(2.0)))


class TestIndices:
    def test_power_half(self):
        gamma, delta = dilation_indices(PowerPhi(0.5))
        assert gamma == pytest.approx(0.5, abs=0.02)
        assert delta == pytest.approx(0.5, abs=0.02)

    def test_log_power(self):
        gamma, delta = dilation_indices(LogPowerPhi(0.5))
        assert gamma == pytest.approx(0.0, abs=0.02)
        assert delta == pytest.approx(0.0, abs=0.02)

    def test_identity(self):
        gamma, delta = dilation_indices(PowerPhi(1.0))
        assert gamma == pytest.approx(1.0, abs=0.02)
        assert delta == pytest.approx(1.0, abs=0.02)


class _ConstOne(PhiFn):
    def __call__(self, t: float) -> float:
        return 1.0 if t > 0 else 0.0


class TestDelta2:
    def test_log_power_holds_with_sqrt2_constant(self):
        res = delta2_check(LogPowerPhi(0.5))
        assert res["holds"]
        assert res["C"] <= math.sqrt(2) + 0.01

    def test_sqrt_fails(self):
        assert not delta2_check(PowerPhi(0.5))["holds"]

    def test_constant_like_holds(self):
        res = delta2_check(_ConstOne())
        assert res["holds"]
        assert res["C"] == pytest.approx(1.0)


class TestContainsLogHalf:
    def test_closed_forms(self):
        assert contains_loghalf(Lp(F(2)))
        assert not contains_loghalf(Linfty())
        assert contains_loghalf(ExpLp(F(2)))
        assert not contains_loghalf(ExpLp(F(3)))

    def test_trend_families(self):
        assert contains_loghalf(Lorentz(PowerPhi(0.5)))
        assert contains_loghalf(Marcinkiewicz(PowerPhi(0.5)))
        assert contains_loghalf(Marcinkiewicz(LogPowerPhi(0.5)))
        # phi(t)/t * int_0^t log^(1/2) grows like log^(1/2 - beta); beta < 1/2 diverges
        assert not contains_loghalf(Marcinkiewicz(LogPowerPhi(0.25)))


class TestSymKernel:
    def test_l1_full_indicator_matches_quadrature(self):
        oracle, err = integrate.quad(
            lambda t: math.sqrt(math.log(math.e / t)), 0.0, 1.0
        )
        assert err < 1e-8
        got = sym_kernel_norm(Lp(F(1)), StepFunction.constant(1))
        assert got == pytest.approx(oracle, abs=1e-6)

    def test_zero(self):
        assert sym_kernel_norm(Lp(F(1)), StepFunction.zero()) == 0.0

    def test_monotone_in_support(self):
        vals = [
            sym_kernel_norm(Lp(F(1)), chi_prefix(F(1, 2**j))) for j in range(5, 0, -1)
        ]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_linfty_diverges(self):
        from rlab.spaces import sym_kernel_report

        rep = sym_kernel_report(Linfty(), StepFunction.constant(1))
        assert rep["diverging"] and rep["value"] == math.inf


class TestLogPowCumulative:
    @pytest.mark.parametrize("q", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("t", [1.0, 0.25, 1e-4])
    def test_against_quadrature(self, q, t):
        oracle, err = integrate.quad(
            lambda s: math.log(math.e / s) ** q, 0.0, t, limit=200
        )
        assert logpow_cumulative(q, t) == pytest.approx(oracle, rel=1e-8)

    def test_degenerate(self):
        assert logpow_cumulative(0.5, 0.0) == 0.0


class TestDivergenceTrend:
    def test_flat_sequence_not_diverging(self):
        div, _ = divergence_trend([1.0, 1.0001, 1.0001, 1.0001, 1.0001])
        assert not div

    def test_growing_sequence_diverging(self):
        div, _ = divergence_trend([1.0, 2.0, 4.0, 8.0, 16.0])
        assert div


class TestPsiFromPhi:
    def test_identity_phi(self):
        psi = psi_from_phi(PowerPhi(1.0))
        oracle, _ = integrate.quad(
            lambda s: math.sqrt(math.log(math.e / s)), 0.0, 1.0
        )
        assert psi(1.0) == pytest.approx(oracle, rel=1e-6)
        assert psi(1.0) > 1.0  # integrand >= 1

    def test_ratio_grows_toward_zero(self):
        psi = psi_from_phi(PowerPhi(1.0))
        ratios = [psi(2.0**-j) / 2.0**-j for j in (2, 6, 10, 14)]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))


class TestParsing:
    @pytest.mark.parametrize(
        "text,cls",
        [
            ("lp:2", Lp),
            ("linfty", Linfty),
            ("lorentz:sqrt", Lorentz),
            ("lorentz:pow:0.5", Lorentz),
            ("marcinkiewicz:logpow:0.5", Marcinkiewicz),
            ("explp:2", ExpLp),
            ("orlicz:pow:2", OrliczSpace),
            ("orlicz:exp:2", OrliczSpace),
        ],
    )
    def test_descriptors(self, text, cls):
        assert isinstance(parse_space(text), cls)

    @pytest.mark.parametrize("text", ["bogus:1", "lp", "lorentz:cubic", "lp:junk"])
    def test_malformed(self, text):
        with pytest.raises(InvalidSpec):
            parse_space(text)


class TestNormProperties:
    @settings(deadline=None, max_examples=40)
    @given(step_functions)
    def test_symmetry(self, f):
        star = decreasing_rearrangement(f)
        for X in ALL_SPACES:
            assert norm(X, f) == pytest.approx(norm(X, star), rel=1e-9, abs=1e-12)

    @settings(deadline=None, max_examples=40)
    @given(step_functions)
    def test_lattice_monotonicity(self, f):
        g = abs(f) + StepFunction.constant(F(1, 2))
        for X in ALL_SPACES:
            assert norm(X, f) <= norm(X, g) + 1e-12

    @settings(deadline=None, max_examples=40)
    @given(step_functions)
    def test_marcinkiewicz_below_lorentz(self, f):
        phi = PowerPhi(0.5)
        assert norm(Marcinkiewicz(phi), f) <= norm(Lorentz(phi), f) * (1 + 1e-9)

    @settings(deadline=None, max_examples=40)
    @given(step_functions, step_functions)
    def test_triangle_inequality(self, f, g):
        for X in ALL_SPACES:
            assert norm(X, f + g) <= norm(X, f) + norm(X, g) + 1e-9

    @settings(deadline=None, max_examples=30)
    @given(step_functions)
    def test_orlicz_square_matches_l2(self, f):
        assert norm(OrliczSpace(PowerOrlicz(2.0)), f) == pytest.approx(
            norm(Lp(F(2)), f), rel=1e-9, abs=1e-12
        )


class TestExpLpConventions:
    def test_sup_and_luxemburg_are_equivalent_on_indicators(self):
        X = ExpLp(F(2))
        ratios = []
        for j in range(1, 8):
            chi = chi_prefix(F(1, 2**j))
            sup_form = X.norm(chi)
            lux = X.luxemburg_norm(chi)
            assert lux > 0 and sup_form > 0
            ratios.append(sup_form / lux)
        # mutual equivalence: bounded ratio band, measured not assumed
        assert max(ratios) / min(ratios) < 4.0
