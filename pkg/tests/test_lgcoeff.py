import mpmath as mp
import pytest
from mpmath import mpf, mpc

from legasym import LaurentPoly, VarTag, resolve
from legasym.errors import (AlphaOutOfRange, ImaginaryResidue,
                            NearTurningPoint, PrecisionExhausted)
from legasym.lgcoeff import (FALLBACK_RADIUS, CoeffTable, a1_turning_limit,
                             b0_turning_limit, eval_ab, eval_ab_near_turning,
                             gen_bessel_coeffs, gen_legendre_coeffs)
from legasym.mapping import LegendreParams
from legasym.numerics import DEFAULT_CTX, PrecisionCtx

from conftest import rel_err

ALPHAS = ["0", "0.25", "0.5", "0.9"]


def golden_e1(alpha):
    """E_1 reconstructed from its factored closed form."""
    a2 = mpf(alpha) ** 2
    f1 = LaurentPoly({2: 1, 0: 1})
    f2 = LaurentPoly({4: -5 * a2, 2: 2 * (a2 + 6), 0: -5 * a2})
    shift = LaurentPoly({-3: 1 / (192 * (1 - a2))})
    return f1 * f2 * shift


def golden_e2(alpha):
    """E_2 reconstructed from its factored closed form."""
    a2 = mpf(alpha) ** 2
    f1 = LaurentPoly({4: 1, 2: -2, 0: 1})
    f2 = LaurentPoly({4: -a2, 2: 4 - 2 * a2, 0: -a2})
    f3 = LaurentPoly({4: -5 * a2, 2: 4 - 6 * a2, 0: -5 * a2})
    shift = LaurentPoly({-6: 1 / (1024 * (1 - a2) ** 2)})
    return f1 * f2 * f3 * shift


def golden_bessel_seconds(alpha):
    """(e_2, e~_2) from their factored closed forms."""
    a2 = mpf(alpha) ** 2
    f_a = LaurentPoly({2: 1, 0: -a2}, VarTag.BETA_HAT)
    f_b = LaurentPoly({2: 1, 0: -5 * a2}, VarTag.BETA_HAT)
    f_c = LaurentPoly({2: 3, 0: -7 * a2}, VarTag.BETA_HAT)
    down = LaurentPoly({-6: mpf(1) / 16}, VarTag.BETA_HAT)
    return f_a * f_b * down, (f_a * f_c * down).scale(-1)


@pytest.fixture(scope="module", params=ALPHAS)
def table(request):
    return CoeffTable.build(mpf(request.param), 8, DEFAULT_CTX)


class TestGoldenValues:
    def test_e1_matches_closed_form(self, table):
        assert table.E[1].rel_distance(golden_e1(table.alpha)) < mpf("1e-20")

    def test_e2_matches_closed_form(self, table):
        assert table.E[2].rel_distance(golden_e2(table.alpha)) < mpf("1e-20")

    def test_lambda1_closed_form(self, table):
        a2 = table.alpha ** 2
        want = (3 - 2 * a2) / (24 * (1 - a2))
        assert rel_err(table.lambda_odd[0], want) < mpf("1e-14")

    def test_bessel_seeds(self, table):
        a2 = table.alpha ** 2
        e1 = LaurentPoly({-1: mpf(1) / 8, -3: -5 * a2 / 24}, VarTag.BETA_HAT)
        et1 = LaurentPoly({-1: mpf(-3) / 8, -3: 7 * a2 / 24}, VarTag.BETA_HAT)
        assert table.e[1].rel_distance(e1) < mpf("1e-25")
        assert table.e_tilde[1].rel_distance(et1) < mpf("1e-25")

    def test_bessel_seconds_match_closed_forms(self, table):
        want_e2, want_et2 = golden_bessel_seconds(table.alpha)
        assert table.e[2].rel_distance(want_e2) < mpf("1e-20")
        assert table.e_tilde[2].rel_distance(want_et2) < mpf("1e-20")

    def test_alpha_zero_specials(self):
        e, et = gen_bessel_coeffs(0, 4)
        assert e[1] == LaurentPoly({-1: mpf(1) / 8}, VarTag.BETA_HAT)
        assert et[1] == LaurentPoly({-1: mpf(-3) / 8}, VarTag.BETA_HAT)


class TestStructuralIdentities:
    def test_palindromy(self, table):
        for s in range(1, 9):
            es = table.E[s]
            assert es.substitute_reciprocal().rel_distance(es) < mpf("1e-20")

    def test_parity(self, table):
        for s in range(1, 9):
            want = "odd" if s % 2 else "even"
            assert table.E[s].parity() in (want, "zero")

    def test_endpoint_values(self, table):
        lam_i = 0
        for s in range(1, 9):
            es = table.E[s]
            scale = max(es.max_abs_coeff(), mpf(1))
            at1, atm1 = es.evaluate(mpf(1)), es.evaluate(mpf(-1))
            if s % 2 == 0:
                assert abs(at1) < mpf("1e-20") * scale
                assert abs(atm1) < mpf("1e-20") * scale
            else:
                assert abs(at1 + atm1) < mpf("1e-20") * scale
                assert rel_err(at1, table.lambda_odd[lam_i]) < mpf("1e-20")
                lam_i += 1

    def test_bessel_side_vanishes_at_infinity(self, table):
        for s in range(1, 9):
            assert max(table.E[s].exponents()) == -min(table.E[s].exponents())
            assert max(table.e[s].exponents()) <= -1
            assert max(table.e_tilde[s].exponents()) <= -1

    def test_alpha_range(self):
        with pytest.raises(AlphaOutOfRange):
            gen_legendre_coeffs(mpf("0.99"), 8)
        with pytest.raises(AlphaOutOfRange):
            gen_bessel_coeffs(mpf(-0.1), 8)


@pytest.fixture(scope="module")
def table05():
    return CoeffTable.build(mpf("0.5"), 8, DEFAULT_CTX)


@pytest.fixture(scope="module")
def params05():
    return LegendreParams.from_nu_alpha(50, mpf("0.5"))


class TestEvalAB:
    def test_first_terms_have_empty_sums(self, table05, params05):
        # q_1 and its tilde twin equal the first combined coefficients, so
        # B_0 must equal (E_1(beta) - e_1(beta_hat))/beta_hat exactly
        pt = resolve(params05, mpf("0.3"), DEFAULT_CTX)
        ev = eval_ab(table05, pt, params05.u, 1, DEFAULT_CTX)
        with DEFAULT_CTX.working():
            manual = (table05.E[1].evaluate(pt.beta)
                      - table05.e[1].evaluate(pt.beta_hat)) / pt.beta_hat
        assert rel_err(ev.b[0], manual.real) < mpf("1e-30")
        assert abs(manual.imag) < mpf("1e-25") * abs(manual)

    def test_oracle_precision_reevaluation(self, table05, params05):
        # same computation repeated at oracle precision agrees to 1e-12
        ctx = DEFAULT_CTX
        pt = resolve(params05, mpf("0.3"), ctx)
        ev = eval_ab(table05, pt, params05.u, 4, ctx)
        hi = PrecisionCtx(50, 66)
        table_hi = CoeffTable.build(mpf("0.5"), 8, hi)
        pt_hi = resolve(params05, mpf("0.3"), hi)
        ev_hi = eval_ab(table_hi, pt_hi, params05.u, 4, hi)
        for a, b in zip(ev.a + ev.b, ev_hi.a + ev_hi.b):
            assert rel_err(a, b) < mpf("1e-12")

    def test_real_on_both_sides(self, table05, params05):
        for t in ("0.2", "0.95", "1.7"):
            pt = resolve(params05, mpf(t), DEFAULT_CTX)
            ev = eval_ab(table05, pt, params05.u, 4, DEFAULT_CTX)
            for v in ev.a + ev.b:
                assert not isinstance(v, mpc)
                assert mp.isfinite(v)

    def test_combined_sequence_structure(self, table05, params05):
        # oscillatory side: odd combinations purely imaginary, even ones
        # real; monotone side: everything real
        osc = resolve(params05, mpf("0.35"), DEFAULT_CTX)
        mono = resolve(params05, mpf("0.96"), DEFAULT_CTX)
        with DEFAULT_CTX.working():
            for s in range(1, 8):
                sign = -1 if s % 2 else 1
                comb = (table05.E[s].evaluate(osc.beta)
                        + sign * table05.e[s].evaluate(osc.beta_hat))
                if s % 2:
                    assert abs(comb.real) < mpf("1e-25") * abs(comb)
                else:
                    assert abs(comb.imag) < mpf("1e-25") * abs(comb)
                comb = (table05.E[s].evaluate(mono.beta)
                        + sign * table05.e[s].evaluate(mono.beta_hat))
                assert abs(comb.imag) < mpf("1e-25") * abs(comb)

    def test_advisory_inside_radius(self, table05, params05):
        pt = resolve(params05, mpf("0.82"), DEFAULT_CTX)
        with pytest.raises(NearTurningPoint):
            eval_ab(table05, pt, params05.u, 4, DEFAULT_CTX)

    def test_branch_error_detected(self, table05, params05):
        # a real beta paired with an imaginary beta_hat violates branch
        # coherence and must surface as a complex combination
        pt = resolve(params05, mpf("0.3"), DEFAULT_CTX)
        bad = type(pt)(t=pt.t, region=pt.region, beta=abs(pt.beta),
                       zeta=pt.zeta, beta_hat=pt.beta_hat,
                       residual=pt.residual)
        with pytest.raises(ImaginaryResidue):
            eval_ab(table05, bad, params05.u, 4, DEFAULT_CTX)

    def test_n_terms_validation(self, table05, params05):
        pt = resolve(params05, mpf("0.3"), DEFAULT_CTX)
        with pytest.raises(ValueError):
            eval_ab(table05, pt, params05.u, 5, DEFAULT_CTX)


class TestNearTurning:
    def test_b0_limit_at_exact_turning_point(self, table05, params05):
        pt = resolve(params05, params05.sigma, DEFAULT_CTX)
        ev = eval_ab_near_turning(table05, pt, params05.u, 4, DEFAULT_CTX)
        assert ev.fallback_used
        assert abs(ev.b[0] - mpf(2) / 35) < mpf("1e-8")

    def test_a1_limit_at_exact_turning_point(self, table05, params05):
        pt = resolve(params05, params05.sigma, DEFAULT_CTX)
        ev = eval_ab_near_turning(table05, pt, params05.u, 4, DEFAULT_CTX)
        assert rel_err(ev.a[0], a1_turning_limit(mpf("0.5"))) < mpf("1e-8")

    def test_two_path_agreement_at_radius(self, table05, params05):
        for side in (+1, -1):
            t = params05.sigma + side * FALLBACK_RADIUS * (1 + mpf("1e-12"))
            pt = resolve(params05, t, DEFAULT_CTX)
            direct = eval_ab(table05, pt, params05.u, 4, DEFAULT_CTX)
            near = eval_ab_near_turning(table05, pt, params05.u, 4,
                                        DEFAULT_CTX)
            for d, n in zip(direct.a + direct.b, near.a + near.b):
                assert rel_err(d, n) < mpf("1e-9")

    def test_series_matches_raised_precision_direct(self, params05, table05):
        # beta ~ 0.05 lies in the series zone; re-compute directly at very
        # high precision as the independent route
        with mp.workdps(120):
            sig = mp.sqrt(mpf(3)) / 2
            beta = mpf("0.05")
            t = sig * (1 + beta ** 2) / (1 - beta ** 2)
        pt = resolve(params05, t, DEFAULT_CTX)
        near = eval_ab_near_turning(table05, pt, params05.u, 4, DEFAULT_CTX)
        assert near.fallback_used
        hi = PrecisionCtx(110, 126)
        table_hi = CoeffTable.build(mpf("0.5"), 8, hi)
        pt_hi = resolve(params05, t, hi)
        with mp.workdps(110):
            from legasym.lgcoeff import _eval_ab_raw
            a_hi, b_hi = _eval_ab_raw(table_hi, pt_hi.beta, pt_hi.beta_hat, 4)
        for got, want in zip(near.a + near.b, a_hi + b_hi):
            assert rel_err(got, want.real) < mpf("1e-20")

    def test_oscillatory_side_series(self, table05, params05):
        # same check with purely imaginary beta
        t = params05.sigma - mpf("0.002")
        pt = resolve(params05, t, DEFAULT_CTX)
        assert abs(pt.beta) < mpf("0.1")
        ev = eval_ab_near_turning(table05, pt, params05.u, 4, DEFAULT_CTX)
        assert all(mp.isfinite(v) for v in ev.a + ev.b)

    def test_alpha_zero_beta_hat_series(self):
        # the mapping series at alpha=0 is 2*arctanh: 2, 2/3, 2/5, ...
        from legasym._series import beta_hat_odd_series
        h = beta_hat_odd_series(mpf(0), 5)
        for m, c in enumerate(h):
            assert rel_err(c, mpf(2) / (2 * m + 1)) == 0

    def test_precision_exhausted_at_low_digits(self, params05):
        low = PrecisionCtx(8, 18)
        low_table = CoeffTable.build(mpf("0.5"), 8, low)
        pt = resolve(params05, params05.sigma, low)
        with pytest.raises(PrecisionExhausted):
            eval_ab_near_turning(low_table, pt, params05.u, 4, low)

    def test_limits_positive_alpha(self):
        # closed-form turning-point limits stay consistent across alpha
        for alpha in ("0.25", "0.5", "0.9"):
            tab = CoeffTable.build(mpf(alpha), 8, DEFAULT_CTX)
            params = LegendreParams.from_nu_alpha(50, mpf(alpha))
            pt = resolve(params, params.sigma, DEFAULT_CTX)
            ev = eval_ab_near_turning(tab, pt, params.u, 4, DEFAULT_CTX)
            assert rel_err(ev.b[0], b0_turning_limit(mpf(alpha))) < mpf("1e-10")
            assert rel_err(ev.a[0], a1_turning_limit(mpf(alpha))) < mpf("1e-10")
