import mpmath as mp
import pytest
from mpmath import mpf

from legasym import LegendreParams, Region, beta_hat_series_check, resolve
from legasym.errors import (AlphaOutOfRange, DomainError, SingularPoint)
from legasym.mapping import expected_beta_hat_coeffs
from legasym.numerics import DEFAULT_CTX

from conftest import rel_err


@pytest.fixture(scope="module")
def params05():
    return LegendreParams.from_nu_alpha(50, mpf("0.5"))


@pytest.fixture(scope="module")
def params0():
    return LegendreParams.from_nu_alpha(50, 0)


class TestParams:
    def test_derived_quantities(self, params05):
        assert rel_err(params05.u, mpf("50.5")) == 0
        assert rel_err(params05.mu, mpf("25.25")) < mpf("1e-30")
        assert rel_err(params05.sigma, mp.sqrt(mpf(3)) / 2) < mpf("1e-38")
        assert rel_err(params05.z_t, 1 - params05.sigma) < mpf("1e-38")

    def test_from_mu_round_trip(self):
        p = LegendreParams.from_nu_mu(50, mpf("25.25"))
        assert rel_err(p.alpha, mpf("0.5")) < mpf("1e-38")
        assert rel_err(p.mu, p.u * p.alpha) < mpf("1e-15")

    def test_alpha_range(self):
        with pytest.raises(AlphaOutOfRange):
            LegendreParams.from_nu_alpha(50, mpf("0.96"))
        with pytest.raises(DomainError):
            LegendreParams.from_nu_alpha(-1, mpf("0.5"))


class TestResolve:
    def test_turning_point_shortcut(self, params05):
        pt = resolve(params05, params05.sigma, DEFAULT_CTX)
        assert pt.zeta == params05.alpha ** 2
        assert pt.beta == 0 and pt.beta_hat == 0
        assert pt.region is Region.MONOTONE
        assert pt.residual == 0

    def test_alpha_zero_oscillatory_closed_form(self, params0):
        for t in ("0.15", "0.5", "0.85"):
            pt = resolve(params0, mpf(t), DEFAULT_CTX)
            assert rel_err(pt.zeta, mp.acos(mpf(t)) ** 2) < mpf("1e-12")

    def test_alpha_zero_at_origin(self, params0):
        pt = resolve(params0, 0, DEFAULT_CTX)
        assert rel_err(pt.zeta, mp.pi ** 2 / 4) < mpf("1e-12")

    def test_alpha_zero_cut_closed_form(self, params0):
        for x in ("1.2", "1.9", "3.5"):
            pt = resolve(params0, mpf(x), DEFAULT_CTX)
            assert rel_err(-pt.zeta, mp.acosh(mpf(x)) ** 2) < mpf("1e-12")

    def test_regions(self, params05):
        assert resolve(params05, mpf("0.5"), DEFAULT_CTX).region \
            is Region.OSCILLATORY
        assert resolve(params05, mpf("0.9"), DEFAULT_CTX).region \
            is Region.MONOTONE
        assert resolve(params05, mpf("1.5"), DEFAULT_CTX).region is Region.CUT

    def test_zeta_signs(self, params05):
        a2 = params05.alpha ** 2
        assert resolve(params05, mpf("0.5"), DEFAULT_CTX).zeta > a2
        mono = resolve(params05, mpf("0.9"), DEFAULT_CTX).zeta
        assert 0 < mono < a2
        assert resolve(params05, mpf("1.5"), DEFAULT_CTX).zeta < 0

    def test_branch_coherence(self, params05):
        osc = resolve(params05, mpf("0.4"), DEFAULT_CTX)
        assert osc.beta.real == 0 and osc.beta.imag < 0
        assert osc.beta_hat.real == 0 and osc.beta_hat.imag < 0
        for t in ("0.92", "1.8"):
            pt = resolve(params05, mpf(t), DEFAULT_CTX)
            assert pt.beta.imag == 0 and 0 < pt.beta.real < 1
            assert pt.beta_hat.imag == 0 and pt.beta_hat.real > 0

    def test_monotonicity(self, params05):
        inner = [resolve(params05, mpf(i) / 20, DEFAULT_CTX).zeta
                 for i in range(1, 20)]
        assert all(a > b for a, b in zip(inner, inner[1:]))
        outer = [resolve(params05, 1 + mpf(i) / 4, DEFAULT_CTX).zeta
                 for i in range(1, 12)]
        assert all(a > b for a, b in zip(outer, outer[1:]))

    @pytest.mark.parametrize("t", ["0.05", "0.3", "0.6", "0.85",
                                   "0.88", "0.95", "0.999",
                                   "1.001", "1.3", "2.0", "5.0"])
    def test_residuals_over_grid(self, t, params05):
        assert resolve(params05, mpf(t), DEFAULT_CTX).residual < mpf("1e-13")

    def test_near_turning_conditioning(self, params05):
        for offset in ("1e-8", "-1e-8", "1e-5", "-1e-5"):
            pt = resolve(params05, params05.sigma + mpf(offset), DEFAULT_CTX)
            assert pt.residual < mpf("1e-13")
            assert abs(pt.beta_hat) > 0

    def test_singular_point(self, params05):
        with pytest.raises(SingularPoint):
            resolve(params05, 1, DEFAULT_CTX)
        with pytest.raises(SingularPoint):
            resolve(params05, mpf("1") + mpf("1e-13"), DEFAULT_CTX)

    def test_negative_t(self, params05):
        with pytest.raises(DomainError):
            resolve(params05, -1, DEFAULT_CTX)

    def test_cut_complex_resubstitution(self, params05):
        # the real matching equation on the cut must agree with the complex
        # continuation of both sides of the mapping
        with DEFAULT_CTX.oracle():
            alpha, x = params05.alpha, mpf("1.5")
            sig = mp.sqrt(1 - alpha ** 2)
            pt = resolve(params05, x, DEFAULT_CTX)
            bh = -mp.sqrt(alpha ** 2 + abs(pt.zeta))
            xi_zeta = (bh + alpha / 2 * (mp.log(abs(pt.zeta)) - 1j * mp.pi)
                       - alpha * (mp.log(abs(bh + alpha)) - 1j * mp.pi))
            w = mp.sqrt(x ** 2 - sig ** 2) / (alpha * x)
            xi_t = (alpha / 2 * mp.log((w + 1) / (w - 1)) - mp.acosh(x / sig)
                    + 1j * alpha * mp.pi / 2)
            assert abs(xi_zeta - xi_t) < mpf("1e-13")


class TestBetaHatSeries:
    def test_alpha_zero_fit(self, params0):
        rep = beta_hat_series_check(params0, DEFAULT_CTX)
        assert rep.ok
        want = (mpf(2), mpf(2) / 3, mpf(2) / 5)
        for f, w in zip(rep.fitted, want):
            assert rel_err(f, w) < mpf("1e-6")

    def test_alpha_half_fit(self, params05):
        rep = beta_hat_series_check(params05, DEFAULT_CTX)
        assert rep.ok
        sig2 = mpf("0.75")
        kap = 2 * mp.cbrt(sig2)
        assert rel_err(rep.fitted[0], kap) < mpf("1e-6")
        # cubic-to-linear coefficient ratio
        ratio = rep.fitted[1] / rep.fitted[0]
        want = ((3 + sig2) * kap - 8 * sig2) / (5 * mpf("0.25") * kap)
        assert rel_err(ratio, want) < mpf("1e-6")

    def test_expected_coeffs_consistent_with_series_module(self):
        from legasym._series import beta_hat_odd_series
        for alpha in ("0.25", "0.5", "0.9"):
            with mp.workdps(50):
                h = beta_hat_odd_series(mpf(alpha), 3)
                want = expected_beta_hat_coeffs(mpf(alpha))
                for a, b in zip(h, want):
                    assert rel_err(a, b) < mpf("1e-40")
