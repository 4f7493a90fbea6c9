"""Special-function layer: gamma, kernel constants, benchmark solutions.

Expected values come from three independent sources: the C library gamma
(math.gamma), scipy's Jacobi evaluation, and direct quadrature of the
defining integrals. Pinned decimals were frozen from those oracles before
the implementations existed.
"""

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from fracdarcy.special import (
    exact_energy,
    exact_pressure,
    exact_rhs,
    frac_constants,
    gamma,
    jacobi_poly,
    reference_solution,
    surface_measure,
)


class TestGamma:
    def test_pinned_values(self):
        assert gamma(1.0) == pytest.approx(1.0, abs=1e-14)
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
        # reflection branch
        assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-13)

    def test_against_libm(self):
        for x in np.linspace(0.05, 30.0, 137):
            assert gamma(float(x)) == pytest.approx(math.gamma(x), rel=5e-14)

    def test_poles_raise(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(ValueError):
                gamma(x)

    @given(st.floats(min_value=0.1, max_value=20.0))
    @settings(max_examples=200, deadline=None)
    def test_functional_equation(self, x):
        assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)


class TestFracConstants:
    def test_pinned_diffusion_constant(self):
        # closed forms at s = 1/2
        assert frac_constants(1, 0.5).nu == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert frac_constants(2, 0.5).nu == pytest.approx(
            1.0 / (2.0 * math.pi), rel=1e-13
        )

    def test_pinned_gradient_constant(self):
        expect = (
            math.sqrt(2.0)
            * math.gamma(1.25)
            / (math.sqrt(math.pi) * math.gamma(0.25))
        )
        assert frac_constants(1, 0.5).mu == pytest.approx(expect, rel=1e-13)
        assert frac_constants(1, 0.5).mu == pytest.approx(0.19947, abs=5e-6)

    def test_against_gamma_oracle(self):
        for d in (1, 2):
            for s in (0.1, 0.25, 0.5, 0.75, 0.9):
                p = frac_constants(d, s)
                nu = (
                    4.0**s
                    * s
                    * math.gamma(s + d / 2)
                    / (math.pi ** (d / 2) * math.gamma(1 - s))
                )
                mu = (
                    2.0**s
                    * math.gamma((d + s + 1) / 2)
                    / (math.pi ** (d / 2) * math.gamma((1 - s) / 2))
                )
                assert p.nu == pytest.approx(nu, rel=1e-13)
                assert p.mu == pytest.approx(mu, rel=1e-13)
                assert p.potential_scale == pytest.approx(
                    mu / (d + s - 1), rel=1e-13
                )

    def test_regular_limit(self):
        # nu * Gamma(1-s) is the regularized constant: finite up to s -> 1
        for s in (0.9, 0.99, 0.999999):
            p = frac_constants(1, s)
            assert math.isfinite(p.nu * math.gamma(1 - s))
            assert p.nu * math.gamma(1 - s) < 10.0

    def test_validation(self):
        with pytest.raises(ValueError):
            frac_constants(3, 0.5)
        for bad in (0.0, 1.0, -0.2, 1.7):
            with pytest.raises(ValueError):
                frac_constants(1, bad)


class TestJacobiPoly:
    def test_degree_zero_and_one(self):
        t = np.linspace(-1.0, 1.0, 11)
        assert np.allclose(jacobi_poly(0.3, -0.5, 0, t), 1.0)
        a, b = 0.7, 0.0
        expect = (a + 1.0) + (a + b + 2.0) * (t - 1.0) / 2.0
        assert np.allclose(jacobi_poly(a, b, 1, t), expect, rtol=1e-13)

    def test_against_scipy(self):
        rng = np.random.default_rng(7)
        t = rng.uniform(-1.0, 1.0, size=25)
        for a, b in [(0.5, -0.5), (0.5, 0.0), (0.25, 0.0), (0.75, -0.5)]:
            for n in range(0, 7):
                ours = jacobi_poly(a, b, n, t)
                ref = scipy.special.eval_jacobi(n, a, b, t)
                # alternating Gamma-ratio sum loses a few digits by n = 6
                assert np.allclose(ours, ref, rtol=1e-8, atol=1e-10)

    def test_three_term_recurrence(self):
        # independent of both implementations above
        a, b = 0.5, 0.0
        t = np.linspace(-0.95, 0.95, 9)
        for n in range(1, 6):
            n1 = n + 1.0
            c1 = 2 * n1 * (n1 + a + b) * (2 * n1 + a + b - 2)
            c2 = (2 * n1 + a + b - 1) * (a * a - b * b)
            c3 = (
                (2 * n1 + a + b - 2)
                * (2 * n1 + a + b - 1)
                * (2 * n1 + a + b)
            )
            c4 = 2 * (n1 + a - 1) * (n1 + b - 1) * (2 * n1 + a + b)
            lhs = c1 * jacobi_poly(a, b, n + 1, t)
            rhs = (c2 + c3 * t) * jacobi_poly(a, b, n, t) - c4 * jacobi_poly(
                a, b, n - 1, t
            )
            assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10)

    def test_scalar_passthrough(self):
        assert jacobi_poly(0.5, 0.0, 2, 0.3) == pytest.approx(
            float(scipy.special.eval_jacobi(2, 0.5, 0.0, 0.3)), rel=1e-12
        )


class TestBenchmarkSolution:
    def test_pinned_center_values(self):
        sol = reference_solution(0, 1, 0.5)
        assert exact_pressure(sol, np.array([0.0]))[0] == pytest.approx(1.0, rel=1e-13)
        sol2 = reference_solution(0, 2, 0.5)
        assert exact_pressure(sol2, np.array([[0.0, 0.0]]))[0] == pytest.approx(
            2.0 / math.pi, rel=1e-13
        )

    def test_vanishes_outside(self):
        sol = reference_solution(2, 2, 0.75)
        x = np.array([[1.5, 0.0], [0.8, 0.8], [0.0, -3.0]])
        assert np.all(exact_pressure(sol, x) == 0.0)

    def test_rhs_degree_zero_is_one(self):
        sol = reference_solution(0, 2, 0.3)
        x = np.array([[0.0, 0.0], [0.5, 0.1], [-0.2, 0.6]])
        assert np.allclose(exact_rhs(sol, x), 1.0)

    def test_rhs_is_weight_polynomial(self):
        sol = reference_solution(3, 1, 0.25)
        x = np.linspace(-0.9, 0.9, 7)
        ref = scipy.special.eval_jacobi(3, 0.25, -0.5, 2 * x**2 - 1)
        assert np.allclose(exact_rhs(sol, x), ref, rtol=1e-11)

    def test_operator_identity_1d(self):
        # Apply the order-s operator to the benchmark pressure by direct
        # quadrature of the symmetric difference form and compare with the
        # claimed forcing. Independent of every closed form in the package.
        s = 0.5
        sol = reference_solution(0, 1, s)
        nu = sol.params.nu

        def u(y):
            return exact_pressure(sol, np.atleast_1d(y))[0]

        for x in (0.0, 0.3, -0.45):
            ux = u(x)

            def second_diff(t, x=x, ux=ux):
                return (2.0 * ux - u(x + t) - u(x - t)) * t ** (-1.0 - 2 * s)

            T = 4.0
            body, _ = scipy.integrate.quad(
                second_diff, 0.0, T, limit=400, epsabs=1e-11, epsrel=1e-11
            )
            tail = 2.0 * ux * T ** (-2 * s) / (2 * s)
            value = nu * (body + tail)
            assert value == pytest.approx(exact_rhs(sol, x), abs=2e-6)

    def test_operator_identity_2d_center(self):
        s = 0.5
        sol = reference_solution(0, 2, s)
        nu = sol.params.nu
        u0 = exact_pressure(sol, np.array([[0.0, 0.0]]))[0]

        def radial(r):
            ur = exact_pressure(sol, np.array([[r, 0.0]]))[0]
            return (u0 - ur) * r ** (-1.0 - 2 * s)

        body, _ = scipy.integrate.quad(
            radial, 0.0, 1.0, limit=400, epsabs=1e-11, epsrel=1e-11
        )
        tail = u0 / (2 * s)
        value = nu * 2.0 * math.pi * (body + tail)
        assert value == pytest.approx(1.0, abs=2e-6)


class TestExactEnergy:
    def test_pinned_torsion_values(self):
        assert exact_energy(reference_solution(0, 1, 0.5)) == pytest.approx(
            math.pi / 2.0, rel=1e-13
        )
        assert exact_energy(reference_solution(0, 2, 0.5)) == pytest.approx(
            4.0 / 3.0, rel=1e-13
        )

    def test_against_quadrature(self):
        # Gauss-Jacobi in the radial variable t = 2r^2 - 1 integrates the
        # product exactly up to the polynomial factor.
        for d in (1, 2):
            for s in (0.25, 0.5, 0.75):
                for n in (0, 1, 3):
                    sol = reference_solution(n, d, s)
                    t, w = scipy.special.roots_jacobi(n + 4, s, d / 2 - 1)
                    poly = scipy.special.eval_jacobi(n, s, d / 2 - 1, t)
                    integral = np.sum(w * poly**2)
                    expect = (
                        sol.scale
                        * surface_measure(d)
                        * 2.0 ** (-s - d / 2)
                        * 0.5
                        * integral
                    )
                    assert exact_energy(sol) == pytest.approx(expect, rel=1e-12)

    def test_matches_direct_1d_integral(self):
        s = 0.3
        sol = reference_solution(2, 1, s)

        def fp(x):
            xa = np.atleast_1d(x)
            return exact_rhs(sol, xa)[0] * exact_pressure(sol, xa)[0]

        val, _ = scipy.integrate.quad(fp, -1.0, 1.0, limit=200, epsrel=1e-12)
        assert exact_energy(sol) == pytest.approx(val, rel=1e-9)
