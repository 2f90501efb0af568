"""Quadrature and finite-difference checks against independent integrals."""

import numpy as np
import pytest
from scipy.integrate import quad

from cdwhitney.numerics import (
    ball_grid,
    finite_diff,
    hermite_rule,
    integrate_box,
    integrate_gaussian,
    uniform_rule,
)


class TestHermiteRule:
    def test_axis_weights_sum_to_sqrt_pi(self):
        rule = hermite_rule(1, 20)
        assert rule.axis_weights.sum() == pytest.approx(np.sqrt(np.pi), rel=1e-13)
        assert np.all(rule.axis_weights > 0)

    def test_polynomial_exactness(self):
        # oracle: 1-D weighted integrals of t^6 and t^4 by adaptive quadrature
        rule = hermite_rule(1, 6)
        for p in (4, 6):
            want, _ = quad(lambda t, p=p: t**p * np.exp(-t * t), -np.inf, np.inf)
            got = float(rule.weights() @ rule.nodes()[:, 0] ** p)
            assert got == pytest.approx(want, rel=1e-12)

    def test_tensor_shapes_and_order(self):
        rule = hermite_rule(2, 3)
        nodes = rule.nodes()
        assert nodes.shape == (9, 2)
        # C order: first axis varies slowest
        assert np.array_equal(nodes[:3, 0], np.full(3, rule.axis_nodes[0]))
        assert np.array_equal(nodes[:3, 1], rule.axis_nodes)

    def test_default_points(self):
        assert hermite_rule(4).points_per_axis == 20
        assert hermite_rule(8).points_per_axis == 8
        assert hermite_rule(12).points_per_axis == 4
        with pytest.raises(ValueError, match="impractical"):
            hermite_rule(16)

    def test_oversized_tensor_rejected(self):
        with pytest.raises(ValueError, match="too large"):
            hermite_rule(16, 20)


class TestIntegrateGaussian:
    def test_unit_integrand_total_mass(self):
        # integral of exp(-s^2 |y|^2) over R^n is (pi / s^2)^(n/2)
        for n, s in ((1, 1.0), (2, 2.0), (4, 0.5)):
            rule = hermite_rule(n, 12)
            got = integrate_gaussian(lambda u: np.ones(u.shape[0]), np.zeros(n), s, rule)
            assert got == pytest.approx((np.pi / s**2) ** (n / 2), rel=1e-12)

    def test_odd_moment_vanishes(self):
        rule = hermite_rule(2, 10)
        got = integrate_gaussian(lambda u: u[:, 0], np.zeros(2), 1.0, rule)
        assert abs(got) < 1e-13

    def test_second_moment(self):
        # oracle: product of 1-D integrals via adaptive quadrature
        n = 3
        rule = hermite_rule(n, 10)
        got = integrate_gaussian(lambda u: u[:, 1] ** 2, np.zeros(n), 1.0, rule)
        m2, _ = quad(lambda t: t * t * np.exp(-t * t), -np.inf, np.inf)
        m0, _ = quad(lambda t: np.exp(-t * t), -np.inf, np.inf)
        assert got == pytest.approx(m2 * m0 ** (n - 1), rel=1e-10)

    def test_shifted_center(self):
        rule = hermite_rule(1, 14)
        got = integrate_gaussian(lambda u: u[:, 0], np.array([2.5]), 3.0, rule)
        # mean of the Gaussian weight times its mass
        assert got == pytest.approx(2.5 * np.sqrt(np.pi) / 3.0, rel=1e-12)

    def test_vector_valued_integrand(self):
        rule = hermite_rule(2, 8)
        out = integrate_gaussian(
            lambda u: np.stack([np.ones(u.shape[0]), u[:, 0]], axis=-1),
            np.zeros(2), 1.0, rule,
        )
        assert out.shape == (2,)
        assert out[0] == pytest.approx(np.pi, rel=1e-12)
        assert abs(out[1]) < 1e-13

    def test_chunked_evaluation_matches(self):
        rule = hermite_rule(2, 12)
        f = lambda u: np.exp(-np.abs(u).sum(axis=1))
        a = integrate_gaussian(f, np.zeros(2), 1.0, rule)
        b = integrate_gaussian(f, np.zeros(2), 1.0, rule, chunk=17)
        assert a == b

    def test_requires_hermite_kind(self):
        rule = uniform_rule(2, 4, 1.0)
        with pytest.raises(ValueError, match="hermite"):
            integrate_gaussian(lambda u: np.ones(u.shape[0]), np.zeros(2), 1.0, rule)


class TestIntegrateBox:
    def test_constant_on_cube(self):
        rule = uniform_rule(2, 8, 1.5)
        got = integrate_box(lambda u: np.ones(u.shape[0]), rule)
        assert got == pytest.approx(3.0 ** 2, rel=1e-12)

    def test_midpoint_convergence(self):
        f = lambda u: np.cos(u[:, 0])
        want = 2.0 * np.sin(1.0)
        errs = []
        for m in (8, 16, 32):
            got = integrate_box(f, uniform_rule(1, m, 1.0))
            errs.append(abs(got - want))
        assert errs[2] < errs[1] < errs[0]
        assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.15)


class TestFiniteDiff:
    def test_zero_order_is_evaluation(self):
        f = lambda u: np.sin(u[:, 0]) + u[:, 1]
        z = np.array([0.3, -0.7])
        assert finite_diff(f, z, [0, 0]) == pytest.approx(float(f(z[None])[0]))

    def test_linear_function_exact(self):
        f = lambda u: 3.0 * u[:, 0] - 2.0 * u[:, 1]
        z = np.array([0.1, 0.2])
        assert finite_diff(f, z, [1, 0], h=0.1) == pytest.approx(3.0, abs=1e-12)
        assert finite_diff(f, z, [0, 1], h=0.1) == pytest.approx(-2.0, abs=1e-12)

    def test_gaussian_second_derivative_at_origin(self):
        f = lambda u: np.exp(-u[:, 0] ** 2)
        got = finite_diff(f, np.array([0.0]), [2], h=1e-3)
        assert got == pytest.approx(-2.0, abs=1e-6)

    def test_mixed_partial(self):
        f = lambda u: u[:, 0] ** 2 * u[:, 1] ** 3
        z = np.array([1.5, -0.5])
        got = finite_diff(f, z, [2, 1], h=1e-2, richardson=True)
        assert got == pytest.approx(2.0 * 3.0 * z[1] ** 2, rel=1e-8)

    def test_second_order_convergence(self):
        f = lambda u: np.exp(np.sin(u[:, 0]))
        z = np.array([0.4])
        exact = finite_diff(f, z, [1], h=1e-5, richardson=True)
        errs = [abs(finite_diff(f, z, [1], h=h) - exact) for h in (0.2, 0.1, 0.05)]
        orders = np.log2([errs[0] / errs[1], errs[1] / errs[2]])
        assert np.all(orders > 1.9)

    def test_richardson_improves(self):
        f = lambda u: np.exp(u[:, 0])
        z = np.array([0.0])
        h = 0.1
        plain = abs(finite_diff(f, z, [1], h=h) - 1.0)
        extra = abs(finite_diff(f, z, [1], h=h, richardson=True) - 1.0)
        assert extra < plain / 50

    def test_vector_valued(self):
        f = lambda u: np.stack([u[:, 0] ** 2, u[:, 0] ** 3], axis=-1)
        got = finite_diff(f, np.array([2.0]), [1], h=1e-3)
        assert got == pytest.approx([4.0, 12.0], rel=1e-6)

    def test_order_above_table_raises(self):
        with pytest.raises(ValueError, match="orders <= 6"):
            finite_diff(lambda u: u[:, 0], np.array([0.0]), [7])


class TestBallGrid:
    def test_zero_radius(self):
        pts = ball_grid(np.array([1.0, 2.0]), 0.0, 5)
        assert pts.shape == (1, 2)
        assert np.array_equal(pts[0], [1.0, 2.0])

    def test_single_point_per_axis(self):
        pts = ball_grid(np.zeros(3), 1.0, 1)
        assert pts.shape == (1, 3)

    def test_cross_pattern_in_plane(self):
        # 3 points per axis on the unit ball keeps only the center and the
        # four axis points
        pts = ball_grid(np.zeros(2), 1.0, 3)
        want = {(-1.0, 0.0), (0.0, -1.0), (0.0, 0.0), (0.0, 1.0), (1.0, 0.0)}
        assert {tuple(p) for p in pts} == want

    def test_deterministic_order(self):
        a = ball_grid(np.zeros(2), 1.0, 7)
        b = ball_grid(np.zeros(2), 1.0, 7)
        assert np.array_equal(a, b)

    def test_all_points_inside(self):
        pts = ball_grid(np.array([0.5, 0.5, 0.5]), 2.0, 6)
        assert np.all(np.linalg.norm(pts - 0.5, axis=1) <= 2.0 + 1e-9)
