"""Special-function kernel against arbitrary-precision oracles (mpmath)."""

import mpmath as mp
import numpy as np
import pytest

from tevsolve.errors import RangeError, SingularityError
from tevsolve.special import (
    bessel_j,
    bessel_j_positive_root,
    bessel_j_prime,
    bessel_j_second,
    hankel1,
)

mp.mp.dps = 30


def mp_jv(m, z):
    v = mp.besselj(m, mp.mpc(z))
    return complex(v)


class TestBesselJ:
    def test_series_anchor_values(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        # first positive root of J0, located by bisection on the mpmath series
        root = float(mp.besseljzero(0, 1))
        assert root == pytest.approx(2.404825557695773, abs=1e-14)
        assert abs(bessel_j(0, root)) <= 1e-12
        # J1(1) from the 30-digit series
        assert bessel_j(1, 1.0) == pytest.approx(float(mp.besselj(1, 1)), rel=1e-14)
        assert bessel_j(1, 1.0) == pytest.approx(0.4400505857449335, rel=1e-12)

    def test_relative_accuracy_against_mpmath(self):
        rng = np.random.default_rng(42)
        for _ in range(60):
            m = int(rng.integers(0, 21))
            z = complex(rng.uniform(-50, 50), rng.uniform(-10, 10))
            if abs(z) < 1e-3:
                continue
            ours = complex(bessel_j(m, z))
            ref = mp_jv(m, z)
            assert abs(ours - ref) <= 1e-12 * max(abs(ref), 1e-280)

    def test_negative_order_reflection(self):
        z = 1.7 - 0.4j
        for m in (1, 2, 5):
            assert bessel_j(-m, z) == pytest.approx((-1) ** m * bessel_j(m, z), rel=1e-14)

    def test_recurrence_property(self):
        rng = np.random.default_rng(7)
        for _ in range(120):
            m = int(rng.integers(1, 21))
            z = rng.uniform(0.1, 50) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            lhs = bessel_j(m - 1, z) + bessel_j(m + 1, z)
            rhs = 2 * m / z * bessel_j(m, z)
            assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs), 1e-250)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            m = int(rng.integers(0, 15))
            z = complex(rng.uniform(-20, 20), rng.uniform(-5, 5))
            assert bessel_j(m, np.conj(z)) == pytest.approx(
                np.conj(bessel_j(m, z)), rel=1e-13, abs=1e-290
            )

    def test_real_input_stays_real(self):
        x = np.linspace(0.1, 40, 64)
        out = bessel_j(3, x)
        assert out.dtype == np.float64  # no imaginary part can exist at all

    def test_range_errors(self):
        with pytest.raises(RangeError):
            bessel_j(0, 2.0e4)
        with pytest.raises(RangeError):
            bessel_j(61, 1.0)
        with pytest.raises(RangeError):
            bessel_j(0, np.nan)
        with pytest.raises(RangeError):
            bessel_j(0.5, 1.0)


class TestBesselJPrime:
    def test_anchor_values(self):
        assert bessel_j_prime(0, 0.0) == 0.0
        assert bessel_j_prime(1, 0.0) == pytest.approx(0.5, abs=1e-15)
        # J0' = -J1, value from the mpmath series
        assert bessel_j_prime(0, 1.0) == pytest.approx(-0.4400505857449335, rel=1e-12)

    def test_halved_difference_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            m = int(rng.integers(1, 15))
            z = complex(rng.uniform(0.3, 30), rng.uniform(-3, 3))
            expect = 0.5 * (bessel_j(m - 1, z) - bessel_j(m + 1, z))
            assert bessel_j_prime(m, z) == pytest.approx(expect, rel=1e-12)

    def test_against_central_differences(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            m = int(rng.integers(0, 11))
            z = complex(rng.uniform(0.5, 30), rng.uniform(-2, 2))
            h = 1e-6 * max(1.0, abs(z))
            fd = (bessel_j(m, z + h) - bessel_j(m, z - h)) / (2 * h)
            assert abs(bessel_j_prime(m, z) - fd) <= 1e-6 * max(1.0, abs(fd))

    def test_second_derivative_matches_ode(self):
        # z^2 J'' + z J' + (z^2 - m^2) J = 0
        for m, z in ((0, 2.0 + 0.3j), (3, 5.5 - 1.0j)):
            resid = (
                z**2 * bessel_j_second(m, z)
                + z * bessel_j_prime(m, z)
                + (z**2 - m**2) * bessel_j(m, z)
            )
            assert abs(resid) <= 1e-12 * max(1.0, abs(z) ** 2)


class TestHankel1:
    def test_h0_at_one(self):
        # J0(1) and Y0(1) from mpmath series with the Euler-Mascheroni constant
        ref = complex(mp.besselj(0, 1)) + 1j * complex(mp.bessely(0, 1))
        assert ref == pytest.approx(0.7651976865579666 + 0.0882569642156769j, abs=1e-13)
        assert complex(hankel1(0, 1.0)) == pytest.approx(ref, rel=1e-11)

    def test_derivative_relation(self):
        # H0'(z) = -H1(z), checked by central differences at z = 2 + 0.5i
        z = 2.0 + 0.5j
        h = 1e-6
        fd = (hankel1(0, z + h) - hankel1(0, z - h)) / (2 * h)
        assert abs(fd + hankel1(1, z)) <= 1e-10 * abs(hankel1(1, z)) * 1e4 or abs(
            fd + hankel1(1, z)
        ) <= 1e-6

    def test_wronskian(self):
        import scipy.special as sp

        x = 3.0
        w = sp.jv(0, x) * sp.yvp(0, x) - sp.jvp(0, x) * sp.yv(0, x)
        assert w == pytest.approx(2.0 / (np.pi * x), abs=1e-12)

    def test_accuracy_range(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            r = np.exp(rng.uniform(np.log(1e-3), np.log(200.0)))
            th = rng.uniform(-1.2, 1.2)
            z = r * np.exp(1j * th)
            if z.real <= 0:
                continue
            for m in (0, 1):
                # J + iY cancels ~e^{2 im(z)}: give mpmath enough guard digits
                with mp.workdps(40 + int(abs(z.imag))):
                    ref = complex(mp.hankel1(m, mp.mpc(z)))
                assert abs(complex(hankel1(m, z)) - ref) <= 1e-11 * abs(ref)

    def test_j_plus_iy_split_near_real_axis(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            z = complex(np.exp(rng.uniform(np.log(1e-3), np.log(200.0))), rng.uniform(-0.2, 0.2))
            for m in (0, 1):
                ref = complex(mp.besselj(m, mp.mpc(z)) + 1j * mp.bessely(m, mp.mpc(z)))
                assert abs(complex(hankel1(m, z)) - ref) <= 1e-11 * abs(ref)

    def test_errors(self):
        with pytest.raises(SingularityError):
            hankel1(0, 1e-9)
        with pytest.raises(RangeError):
            hankel1(0, -1.0 + 0.5j)
        with pytest.raises(RangeError):
            hankel1(2, 1.0)


class TestPositiveRoots:
    def test_first_roots_match_mpmath(self):
        assert bessel_j_positive_root(0, 1) == pytest.approx(
            float(mp.besseljzero(0, 1)), abs=1e-13
        )
        assert bessel_j_positive_root(1, 1) == pytest.approx(
            float(mp.besseljzero(1, 1)), abs=1e-13
        )
        assert bessel_j_positive_root(0, 1) == pytest.approx(2.404825557695773, abs=1e-12)
        assert bessel_j_positive_root(1, 1) == pytest.approx(3.831705970207512, abs=1e-12)

    def test_residual_and_interlacing(self):
        for m in (0, 3, 10):
            for idx in (1, 5, 20):
                root = bessel_j_positive_root(m, idx)
                assert abs(bessel_j(m, root)) <= 1e-12
        assert bessel_j_positive_root(0, 1) < bessel_j_positive_root(0, 2)

    def test_range_errors(self):
        with pytest.raises(RangeError):
            bessel_j_positive_root(11, 1)
        with pytest.raises(RangeError):
            bessel_j_positive_root(0, 21)
