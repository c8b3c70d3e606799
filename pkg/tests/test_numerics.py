import mpmath as mp
import pytest
from mpmath import mpf

from legasym import Bracket, LegendreParams, log_gamma, resolve, solve_root
from legasym.errors import DomainError, NoConvergence, NoSignChange
from legasym.numerics import PrecisionCtx

from conftest import rel_err


class TestPrecisionCtx:
    def test_defaults(self, ctx):
        assert ctx.working_digits == 34
        assert ctx.oracle_digits == 50

    def test_oracle_must_dominate(self):
        with pytest.raises(ValueError):
            PrecisionCtx(working_digits=34, oracle_digits=40)

    def test_working_floor(self):
        with pytest.raises(ValueError):
            PrecisionCtx(working_digits=2, oracle_digits=50)

    def test_workdps_scopes(self, ctx):
        with ctx.oracle():
            assert mp.mp.dps == 50
        with ctx.working():
            assert mp.mp.dps == 34


class TestSolveRoot:
    def test_quadratic(self):
        f = lambda x: x * x - 4
        root = solve_root(f, Bracket.from_fn(f, 0, 3), mpf("1e-25"))
        assert abs(root - 2) < mpf("1e-24")

    def test_canonical_transcendental_root(self, ctx):
        # 2 sqrt(r+1) + ln r - ln(r + 2 sqrt(r+1) + 2) = 0 on [0.1, 1]
        def f(r):
            s = 2 * mp.sqrt(r + 1)
            return s + mp.log(r) - mp.log(r + s + 2)

        with ctx.working():
            root = solve_root(f, Bracket.from_fn(f, mpf("0.1"), 1), mpf("1e-20"))
        assert abs(root - mpf("0.4392288399")) < mpf("1e-9")

    def test_mapping_residual_resubstitutes(self, ctx):
        # the solver behind the point mapping: solved zeta re-evaluates the
        # defining equation below 1e-13 at oracle precision
        params = LegendreParams.from_nu_alpha(50, mpf("0.5"))
        point = resolve(params, mpf("0.3"), ctx)
        assert point.residual < mpf("1e-13")

    def test_residual_bound_at_oracle_precision(self, ctx):
        # |f(root)| re-evaluated at oracle precision stays within
        # 10 * tol * max(1, |f'(root)| * |root|)
        def f(r):
            s = 2 * mp.sqrt(r + 1)
            return s + mp.log(r) - mp.log(r + s + 2)

        tol = mpf("1e-20")
        with ctx.working():
            root = solve_root(f, Bracket.from_fn(f, mpf("0.1"), 1), tol)
        with ctx.oracle():
            resid = abs(f(root))
            h = mpf("1e-20")
            deriv = abs(f(root + h) - f(root - h)) / (2 * h)
            assert resid <= 10 * tol * max(mpf(1), deriv * abs(root))

    def test_no_sign_change(self):
        f = lambda x: x * x + 1
        with pytest.raises(NoSignChange):
            Bracket.from_fn(f, 0, 3)

    def test_iteration_cap(self):
        f = lambda x: (x - mpf(1) / 3) ** 3
        with pytest.raises(NoConvergence) as info:
            solve_root(f, Bracket.from_fn(f, 0, 1), mpf("1e-30"), max_iter=4)
        assert info.value.lo is not None

    def test_cube_like_root(self, ctx):
        # vanishing derivative at the root must not defeat the safeguard
        with ctx.working():
            target = mpf("0.7")
            f = lambda x: (x - target) ** 3
            root = solve_root(f, Bracket.from_fn(f, 0, 2), mpf("1e-25"))
            assert abs(root - target) < mpf("1e-24")

    def test_bracket_invariants(self):
        with pytest.raises(ValueError):
            Bracket(mpf(2), mpf(1), 1, -1)


class TestLogGamma:
    def test_at_one(self, ctx):
        assert log_gamma(1, ctx) == 0

    def test_at_half(self, ctx):
        with ctx.working():
            assert rel_err(log_gamma(mpf("0.5"), ctx), mp.log(mp.pi) / 2) < mpf("1e-30")

    def test_against_product_recurrence(self, ctx):
        # independent route: ln Gamma(25.75) = ln Gamma(0.75) + sum ln(0.75+k)
        with ctx.oracle():
            acc = mp.loggamma(mpf("0.75"))
            for k in range(25):
                acc += mp.log(mpf("0.75") + k)
        assert rel_err(log_gamma(mpf("25.75"), ctx), acc) < mpf("1e-14")

    @pytest.mark.parametrize("x", ["0.5", "1.25", "7", "63.5", "200"])
    def test_recurrence_identity(self, x, ctx):
        with ctx.working():
            x = mpf(x)
            lhs = log_gamma(x + 1, ctx) - log_gamma(x, ctx)
            assert rel_err(lhs, mp.log(x)) < mpf("1e-13")

    def test_domain(self, ctx):
        with pytest.raises(DomainError):
            log_gamma(0, ctx)
        with pytest.raises(DomainError):
            log_gamma(-3, ctx)
