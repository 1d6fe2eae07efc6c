"""Shared types, coordinate conversions, and rational detection."""

import math
from fractions import Fraction

import numpy as np
import pytest

from ringshape.core import (
    DomainError,
    MotionConstants,
    PhaseState,
    angular_momentum,
    best_rational,
    from_cylindrical,
    from_spherical,
    to_cylindrical,
    to_spherical,
)


def brute_force_best_rational(value, tol, max_den):
    """Exhaustive minimal-denominator search; the independent oracle."""
    for q in range(1, max_den + 1):
        p = round(value * q)
        if abs(value - p / q) <= tol:
            f = Fraction(p, q)
            return f.numerator, f.denominator
    return None


class TestCylindrical:
    def test_axis_aligned_point(self):
        s = PhaseState(x=1, y=0, z=2, vx=0, vy=3, vz=0)
        rho, phi, z, rho_dot, phi_dot, z_dot = to_cylindrical(s)
        assert (rho, phi, z) == (1.0, 0.0, 2.0)
        assert (rho_dot, phi_dot, z_dot) == (0.0, 3.0, 0.0)

    def test_quadrant(self):
        _, phi, *_ = to_cylindrical(PhaseState(0, 2, 0, 0, 0, 0))
        assert phi == pytest.approx(math.pi / 2, abs=0)

    def test_pythagorean(self):
        rho, *_ = to_cylindrical(PhaseState(3, 4, 0, 0, 0, 0))
        assert rho == pytest.approx(5.0, abs=0)

    def test_on_axis_rates_undefined(self):
        rho, phi, z, rho_dot, phi_dot, z_dot = to_cylindrical(PhaseState(0, 0, 1, 1, 2, 3))
        assert rho == 0.0 and phi == 0.0
        assert math.isnan(phi_dot) and math.isnan(rho_dot)
        assert z_dot == 3.0

    def test_branch_is_half_open(self):
        _, phi, *_ = to_cylindrical(PhaseState(-1, 0, 0, 0, 0, 0))
        assert phi == math.pi


class TestSpherical:
    def test_pole(self):
        r, theta, *_ = to_spherical(PhaseState(0, 0, 1, 0, 0, 0))
        assert (r, theta) == (1.0, 0.0)

    def test_equator(self):
        r, theta, phi, *_ = to_spherical(PhaseState(1, 0, 0, 0, 0, 0))
        assert r == 1.0 and theta == pytest.approx(math.pi / 2) and phi == 0.0

    def test_diagonal(self):
        r, theta, *_ = to_spherical(PhaseState(1, 1, math.sqrt(2), 0, 0, 0))
        assert r == pytest.approx(2.0) and theta == pytest.approx(math.pi / 4)

    def test_origin_rejected(self):
        with pytest.raises(DomainError):
            to_spherical(PhaseState(0, 0, 0, 1, 0, 0))


class TestRoundTrip:
    def test_random_states(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            s = PhaseState(*rng.uniform(-3, 3, size=6), t=rng.uniform(-1, 1))
            if s.rho <= 1e-8:
                continue
            back = from_cylindrical(*to_cylindrical(s), t=s.t)
            scale = max(1.0, s.r)
            for a, b in zip((s.x, s.y, s.z, s.vx, s.vy, s.vz),
                            (back.x, back.y, back.z, back.vx, back.vy, back.vz)):
                assert abs(a - b) <= 1e-14 * scale
            back = from_spherical(*to_spherical(s), t=s.t)
            for a, b in zip((s.x, s.y, s.z, s.vx, s.vy, s.vz),
                            (back.x, back.y, back.z, back.vx, back.vy, back.vz)):
                assert abs(a - b) <= 1e-13 * scale


class TestAngularMomentum:
    def test_circular_orbit(self):
        assert angular_momentum(PhaseState(1, 0, 0, 0, 1, 0)) == (0.0, 0.0, 1.0)

    def test_parallel_vectors_vanish(self):
        assert angular_momentum(PhaseState(1, 2, 3, 2, 4, 6)) == (0.0, 0.0, 0.0)

    def test_axis_swap(self):
        assert angular_momentum(PhaseState(0, 0, 1, 1, 0, 0)) == (0.0, 1.0, 0.0)

    def test_antisymmetric_under_position_velocity_swap(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            r = rng.uniform(-2, 2, 3)
            v = rng.uniform(-2, 2, 3)
            l_rv = angular_momentum(PhaseState(*r, *v))
            l_vr = angular_momentum(PhaseState(*v, *r))
            assert np.allclose(l_rv, -np.asarray(l_vr), atol=1e-15)

    def test_bilinear(self):
        rng = np.random.default_rng(12)
        r, v, w = rng.uniform(-2, 2, (3, 3))
        a, b = 1.7, -0.4
        lhs = angular_momentum(PhaseState(*r, *(a * v + b * w)))
        l1 = np.array(angular_momentum(PhaseState(*r, *v)))
        l2 = np.array(angular_momentum(PhaseState(*r, *w)))
        assert np.allclose(lhs, a * l1 + b * l2, atol=1e-13)


class TestMotionConstants:
    def test_effective_momentum_identity(self):
        c = MotionConstants.from_m(energy=7.0, separation=5.0, m_z=2.0, q=5.0)
        assert c.m_eff ** 2 == pytest.approx(c.m_z ** 2 + 5.0, abs=0)

    def test_invalid_rejected(self):
        with pytest.raises(DomainError):
            MotionConstants(energy=1.0, separation=-1.0, m_z=0.0, m_eff=0.0)
        with pytest.raises(DomainError):
            MotionConstants(energy=1.0, separation=1.0, m_z=2.0, m_eff=1.0)


class TestBestRational:
    def test_exact_simple_fraction(self):
        got = best_rational(1.5, 1e-9, 100)
        assert (got.k1, got.k2) == (3, 2)
        assert got.residual == 0.0

    def test_pi_matches_exhaustive_search(self):
        # oracle first: the true minimal-denominator fraction within 1e-3
        expect = brute_force_best_rational(math.pi, 1e-3, 200)
        assert expect == (201, 64)
        got = best_rational(math.pi, 1e-3, 200)
        assert (got.k1, got.k2) == expect
        assert got.residual <= 1e-3

    def test_sqrt2_has_no_close_fraction(self):
        assert brute_force_best_rational(math.sqrt(2), 1e-12, 100) is None
        assert best_rational(math.sqrt(2), 1e-12, 100) is None

    def test_matches_exhaustive_search_on_random_values(self):
        rng = np.random.default_rng(3)
        for _ in range(150):
            value = float(rng.uniform(-4, 4))
            tol = float(10.0 ** rng.uniform(-6, -1))
            got = best_rational(value, tol, 300)
            expect = brute_force_best_rational(value, tol, 300)
            if expect is None:
                assert got is None
            else:
                # the denominators must agree; the numerators may differ only
                # when two fractions with the same denominator are both in range
                assert got.k2 == expect[1]
                assert abs(value - got.k1 / got.k2) <= tol

    def test_exact_rationals_return_lowest_terms(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            den = int(rng.integers(1, 10 ** 4))
            num = int(rng.integers(-10 ** 5, 10 ** 5))
            f = Fraction(num, den)
            got = best_rational(num / den, 1e-9, 10 ** 4)
            assert (got.k1, got.k2) == (f.numerator, f.denominator)

    def test_negative_and_integer_values(self):
        got = best_rational(-math.pi, 1e-3, 200)
        assert (got.k1, got.k2) == (-201, 64)
        got = best_rational(7.0, 1e-9, 10)
        assert (got.k1, got.k2) == (7, 1)
        got = best_rational(0.0, 1e-9, 10)
        assert (got.k1, got.k2) == (0, 1)

    def test_denominator_cap(self):
        assert best_rational(math.pi, 1e-3, 63) is None

    def test_bad_inputs_rejected(self):
        with pytest.raises(DomainError):
            best_rational(math.nan, 1e-3, 10)
        with pytest.raises(DomainError):
            best_rational(1.0, 0.0, 10)
        with pytest.raises(DomainError):
            best_rational(1.0, 1e-3, 0)
