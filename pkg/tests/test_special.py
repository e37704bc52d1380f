"""Tests for the special functions and the adaptive quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as scipy_integrate

from mlebounds import (
    DEFAULT_QUADRATURE,
    DomainError,
    QuadratureError,
    QuadratureSpec,
    gamma_ratio,
    gamma_ratio_expansion,
    integrate_interval,
    integrate_real_line,
    log_gamma,
    std_normal_cdf,
    std_normal_pdf,
)


class TestLogGamma:
    def test_gamma_of_one(self):
        assert log_gamma(1.0) == 0.0

    def test_gamma_of_half_is_sqrt_pi(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)

    def test_integer_factorial_oracle(self):
        # ln Gamma(k+1) = ln k!, with the factorial computed exactly.
        for k in (1, 2, 5, 10, 20, 100):
            expected = math.log(math.factorial(k))
            assert log_gamma(k + 1) == pytest.approx(expected, rel=1e-12)

    def test_large_argument(self):
        # Stirling cross-check at x = 1e6 via scipy.
        from scipy.special import gammaln

        assert log_gamma(1e6) == pytest.approx(float(gammaln(1e6)), rel=1e-14)

    @given(st.floats(min_value=0.5, max_value=1e4))
    def test_recurrence(self, x):
        lhs = log_gamma(x + 1.0)
        rhs = log_gamma(x) + math.log(x)
        assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-11)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, -math.inf])
    def test_domain_errors(self, bad):
        with pytest.raises(DomainError):
            log_gamma(bad)


class TestGammaRatio:
    def test_shift_by_one(self):
        assert gamma_ratio(10.0, 1.0, 0.0) == pytest.approx(10.0, rel=1e-14)

    def test_shift_by_two(self):
        assert gamma_ratio(10.0, 2.0, 0.0) == pytest.approx(110.0, rel=1e-13)

    def test_matches_expansion_at_large_z(self):
        r = gamma_ratio(1000.0, 0.5, 0.0)
        assert r == pytest.approx(gamma_ratio_expansion(1000.0, 0.5, 0.0), rel=1e-5)

    def test_no_overflow_at_huge_z(self):
        r = gamma_ratio(1e6, 2.0, 0.0)
        assert math.isfinite(r)
        assert r == pytest.approx(1e6 * (1e6 + 1.0), rel=1e-10)

    @given(
        st.floats(min_value=1.0, max_value=1e5),
        st.floats(min_value=0.0, max_value=2.0),
        st.floats(min_value=0.0, max_value=2.0),
    )
    def test_reciprocal_identity(self, z, a, b):
        prod = gamma_ratio(z, a, b) * gamma_ratio(z, b, a)
        assert prod == pytest.approx(1.0, rel=1e-12)

    def test_expansion_error_is_second_order(self):
        # For z >= 100 the two-term expansion holds to 5/z^2.
        for z in (100.0, 250.0, 1000.0, 10000.0, 100000.0, 1000000.0):
            for a in np.linspace(0.0, 2.0, 9):
                for b in np.linspace(0.0, 2.0, 9):
                    r = gamma_ratio(z, float(a), float(b))
                    e = gamma_ratio_expansion(z, float(a), float(b))
                    assert abs(r / e - 1.0) <= 5.0 / z**2

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            gamma_ratio(1.0, -2.0, 0.0)
        with pytest.raises(DomainError):
            gamma_ratio(1.0, 0.0, -1.5)


def _cdf_series(x: float) -> float:
    """Independent series oracle: Phi(x) = 1/2 + phi(x) sum x^(2k+1)/(2k+1)!!."""
    s, term, k = 0.0, x, 0
    while abs(term) > 1e-18:
        s += term
        k += 1
        term *= x * x / (2 * k + 1)
    return 0.5 + std_normal_pdf(x) * s


class TestStdNormalCdf:
    def test_at_zero(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_far_tail(self):
        assert std_normal_cdf(40.0) == pytest.approx(1.0, abs=1e-15)

    def test_quantile_via_series_oracle(self):
        x = 1.959963985
        assert std_normal_cdf(x) == pytest.approx(_cdf_series(x), abs=1e-13)
        assert std_normal_cdf(x) == pytest.approx(0.975, abs=1e-9)

    @given(st.floats(min_value=-10.0, max_value=10.0))
    def test_symmetry(self, x):
        assert std_normal_cdf(-x) == pytest.approx(1.0 - std_normal_cdf(x), abs=1e-14)

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            std_normal_cdf(math.nan)


class TestQuadratureSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"abs_tol": 0.0},
            {"abs_tol": -1e-3},
            {"rel_tol": 0.0},
            {"max_refinements": 0},
            {"truncation_radius": 0.0},
        ],
    )
    def test_invalid_specs_rejected(self, kwargs):
        with pytest.raises(DomainError):
            QuadratureSpec(**kwargs)


class TestIntegration:
    def test_normal_density_normalizes(self):
        assert integrate_real_line(std_normal_pdf) == pytest.approx(1.0, abs=1e-10)

    def test_reference_expectation(self):
        # E[h(Z)] for h = 1/(x^2+2); cross-checked against an independent
        # adaptive integrator.
        f = lambda z: std_normal_pdf(z) / (z * z + 2.0)
        mine = integrate_real_line(f)
        other, err = scipy_integrate.quad(f, -12.0, 12.0, epsabs=1e-13)
        assert mine == pytest.approx(other, abs=1e-10)
        assert mine == pytest.approx(0.379, abs=5e-4)

    def test_unit_variance(self):
        assert integrate_real_line(lambda z: std_normal_pdf(z) * z * z) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_odd_integrand_vanishes(self):
        val = integrate_real_line(lambda z: z * std_normal_pdf(z))
        assert abs(val) <= DEFAULT_QUADRATURE.abs_tol

    def test_deterministic(self):
        f = lambda z: std_normal_pdf(z) / (z * z + 2.0)
        assert integrate_real_line(f) == integrate_real_line(f)

    def test_finite_interval_polynomial(self):
        # Simpson is exact on cubics; the interface should be too.
        val = integrate_interval(lambda x: x**3 - 2.0 * x + 1.0, -1.0, 3.0)
        assert val == pytest.approx(16.0, rel=1e-13)

    def test_scipy_cross_checks(self):
        cases = [
            (lambda x: math.exp(-x * x) * math.cos(3.0 * x), -6.0, 6.0),
            (lambda x: 1.0 / (1.0 + x * x), -10.0, 10.0),
            (lambda x: x * x * math.exp(-x), 0.0, 50.0),
        ]
        for f, a, b in cases:
            mine = integrate_interval(f, a, b)
            other, _ = scipy_integrate.quad(f, a, b, epsabs=1e-12, limit=200)
            assert mine == pytest.approx(other, rel=1e-9, abs=1e-10)

    def test_exhausted_refinements_raise(self):
        spec = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_refinements=1)
        with pytest.raises(QuadratureError):
            integrate_real_line(std_normal_pdf, spec)

    def test_non_finite_integrand_raises(self):
        with pytest.raises(QuadratureError):
            integrate_interval(lambda x: math.inf if x == 0.0 else 1.0 / x, 0.0, 1.0)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            integrate_interval(math.sin, 1.0, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.2, max_value=2.0))
def test_gaussian_mass_shift_invariance(mu, sigma):
    # Integrating a shifted/scaled normal density over a wide window gives 1.
    f = lambda x: std_normal_pdf((x - mu) / sigma) / sigma
    val = integrate_interval(f, mu - 12.0 * sigma, mu + 12.0 * sigma)
    assert val == pytest.approx(1.0, abs=1e-9)
