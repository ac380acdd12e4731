"""Cauchy-real query contracts against high-precision oracles."""

from fractions import Fraction

import mpmath
import pytest

from rigfun.dyadic import Dyadic, ZERO, ONE, pow2
from rigfun.errors import BadWitness
from rigfun.real import (
    CauchyReal, PI, cos_ball, real_div, real_from_dyadic, real_from_fraction,
    real_limit, sin_ball,
)
from rigfun.dyadic import Ball


class TestBasics:
    def test_from_dyadic(self):
        x = real_from_dyadic(ZERO)
        b = x.query(50)
        assert b.c == ZERO and b.r == ZERO
        y = real_from_dyadic(Dyadic(3, -2))
        assert y.query(2).c == Dyadic(3, -2)

    def test_radius_contract_and_consistency(self):
        x = real_from_fraction(Fraction(1, 3))
        balls = [x.query(n) for n in range(0, 61, 7)]
        for n, b in zip(range(0, 61, 7), balls):
            assert b.r <= pow2(-n)
        for b1 in balls:
            for b2 in balls:
                assert b1.intersects(b2)

    def test_arithmetic_homomorphism(self):
        a = real_from_dyadic(Dyadic(3, -1))
        b = real_from_dyadic(Dyadic(5, -3))
        s = (a + b).query(30)
        assert s.contains_fraction(Fraction(3, 2) + Fraction(5, 8))
        p = (a * b).query(30)
        assert p.contains_fraction(Fraction(3, 2) * Fraction(5, 8))

    def test_memoization_returns_best(self):
        calls = []

        def q(n):
            calls.append(n)
            return Ball(ZERO, pow2(-n))
        x = CauchyReal(q)
        x.query(20)
        x.query(10)
        assert calls == [20]


class TestDivision:
    def test_exact(self):
        one = real_from_dyadic(ONE)
        two = real_from_dyadic(Dyadic(2))
        q = real_div(one, two, ONE).query(10)
        assert q.contains_fraction(Fraction(1, 2))
        assert q.r <= pow2(-10)

    def test_self_division(self):
        x = real_from_dyadic(Dyadic(3))
        q = real_div(x, x, Dyadic(2))
        for n in (5, 20, 40):
            assert q.query(n).contains_fraction(Fraction(1))

    def test_reciprocal_of_third(self):
        third = real_from_fraction(Fraction(1, 3))
        q = real_div(real_from_dyadic(ONE), third, Dyadic(1, -2))
        for n in range(5, 41, 5):
            b = q.query(n)
            assert b.contains_fraction(Fraction(3))
            assert b.r <= pow2(-n)

    def test_bad_witness(self):
        tiny = real_from_fraction(Fraction(1, 1000))
        q = real_div(real_from_dyadic(ONE), tiny, ONE)
        with pytest.raises(BadWitness):
            q.query(20)


class TestLimit:
    def test_constant_sequence(self):
        x = real_from_fraction(Fraction(2, 3))
        lim = real_limit(lambda k: x, [1])
        assert lim.query(20).contains_fraction(Fraction(2, 3))

    def test_geometric(self):
        def seq(k):
            return real_from_fraction(1 - Fraction(1, 2**k))
        lim = real_limit(seq, [2, 1])  # p(n) = n + 2
        for n in (4, 11, 30):
            b = lim.query(n)
            assert b.contains_fraction(Fraction(1))
            assert b.r <= pow2(-n)

    def test_exponential_series(self):
        # partial sums of sum 2^-k / k! converge to e^(1/2) - 1
        def seq(k):
            acc = Fraction(0)
            fact = 1
            for j in range(1, k + 1):
                fact *= j
                acc += Fraction(1, 2**j * fact)
            return real_from_fraction(acc)
        lim = real_limit(seq, [2, 1])
        b = lim.query(40)
        with mpmath.workdps(60):
            target = mpmath.exp(mpmath.mpf(1) / 2) - 1
            v = Fraction(mpmath.nstr(target, 50))
        assert b.lo.as_fraction() <= v <= b.hi.as_fraction()


class TestElementary:
    def test_pi(self):
        for n in (5, 20, 50):
            b = PI.query(n)
            assert b.r <= pow2(-n)
            with mpmath.workdps(60):
                v = Fraction(mpmath.nstr(+mpmath.pi, 50))
            assert b.lo.as_fraction() <= v <= b.hi.as_fraction()

    @pytest.mark.parametrize("num,den", [(1, 2), (-3, 4), (10, 1), (7, 8), (-12, 5)])
    def test_sin_cos_points(self, num, den):
        x = Fraction(num, den)
        xb = Ball(Dyadic(num)) if den == 1 else None
        if xb is None:
            from rigfun.dyadic import fraction_ball
            xb = fraction_ball(x, 80)
        with mpmath.workdps(60):
            sv = Fraction(mpmath.nstr(mpmath.sin(mpmath.mpf(num) / den), 50))
            cv = Fraction(mpmath.nstr(mpmath.cos(mpmath.mpf(num) / den), 50))
        sb = sin_ball(xb, 70)
        cb = cos_ball(xb, 70)
        eps = Fraction(1, 2**45)
        assert sb.lo.as_fraction() - eps <= sv <= sb.hi.as_fraction() + eps
        assert cb.lo.as_fraction() - eps <= cv <= cb.hi.as_fraction() + eps

    def test_sin_ball_widens_by_radius(self):
        b = sin_ball(Ball(ZERO, Dyadic(1, -3)), 60)
        assert b.contains_fraction(Fraction(0))
        assert b.r >= Dyadic(1, -3)
