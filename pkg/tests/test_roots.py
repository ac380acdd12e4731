"""Root isolation against sympy's independent isolation and Sturm oracles."""

import random
from fractions import Fraction

import pytest
import sympy

from rigfun.cheb import PowerPolyInt
from rigfun.dyadic import Dyadic, DyadicInterval, ONE, pow2
from rigfun.errors import ConstantPolynomial, EndpointRoot
from rigfun.roots import isolate, isolate_in_interval, sturm_count

X = sympy.Symbol("x")


def sympy_roots_in_unit(ints, y=Fraction(0)) -> list[Fraction]:
    """Exact rational-isolated real roots of P(x) - y inside [-1,1]."""
    poly = sympy.Poly(sum(c * X**i for i, c in enumerate(ints)) - sympy.Rational(y), X)
    if poly.degree() < 1:
        return []
    out = []
    for root in sympy.Poly(poly, X).real_roots():
        if root.is_rational:
            r = Fraction(int(sympy.numer(root)), int(sympy.denom(root)))
            if -1 <= r <= 1:
                out.append(r)
        else:
            approx = Fraction(str(sympy.N(root, 40)))
            if Fraction(-1) - Fraction(1, 10**30) <= approx <= Fraction(1) + Fraction(1, 10**30):
                out.append(approx)
    return out


class TestIsolate:
    def test_square(self):
        res = isolate(PowerPolyInt([0, 0, 1]), (1, 4), 10)
        assert len(res) == 2
        lo_iv, hi_iv = res.intervals
        assert lo_iv.contains(Dyadic(-1, -1))
        assert hi_iv.contains(Dyadic(1, -1))
        for iv in res:
            assert iv.diameter() <= pow2(-10)

    def test_triple_root(self):
        res = isolate(PowerPolyInt([0, 0, 0, 1]), (0, 1), 8)
        assert len(res) == 1
        assert res.intervals[0].contains(Dyadic(0))
        assert res.intervals[0].diameter() <= pow2(-8)

    def test_no_roots(self):
        res = isolate(PowerPolyInt([1, 0, 1]), (0, 1), 8)  # x^2 + 1
        assert len(res) == 0

    def test_constant_rejected(self):
        with pytest.raises(ConstantPolynomial):
            isolate(PowerPolyInt([5]), (0, 1), 8)

    def test_endpoint_root(self):
        # roots at exactly -1, 0, 1
        res = isolate(PowerPolyInt([0, -1, 0, 1]), (0, 1), 10)
        assert len(res) == 3
        assert res.intervals[0].contains(Dyadic(-1))
        assert res.intervals[1].contains(Dyadic(0))
        assert res.intervals[2].contains(ONE)

    def test_scaled_polynomial(self):
        # 2^-3 * (8x - 4) has root 1/2
        res = isolate(PowerPolyInt([-4, 8], -3), (0, 1), 12)
        assert len(res) == 1
        assert res.intervals[0].contains(Dyadic(1, -1))

    def test_rational_target(self):
        # x^3 = 2^5/3 has no solution in [-1,1]; x^3 = 1/3 has one
        assert len(isolate(PowerPolyInt([0, 0, 0, 1]), (32, 3), 8)) == 0
        res = isolate(PowerPolyInt([0, 0, 0, 1]), (1, 3), 20)
        assert len(res) == 1
        iv = res.intervals[0]
        approx = Fraction(6934, 10000)  # cube root of 1/3
        assert iv.lo.as_fraction() - Fraction(1, 1000) <= approx <= iv.hi.as_fraction() + Fraction(1, 1000)

    def test_determinism(self):
        rng = random.Random(3)
        ints = [rng.randrange(-9, 10) for _ in range(7)]
        ints[-1] = ints[-1] or 1
        a = isolate(PowerPolyInt(ints), (0, 1), 12)
        b = isolate(PowerPolyInt(ints), (0, 1), 12)
        assert a.intervals == b.intervals

    @pytest.mark.parametrize("seed", range(8))
    def test_random_against_sympy(self, seed):
        rng = random.Random(100 + seed)
        for _ in range(12):
            deg = rng.randrange(2, 9)
            ints = [rng.randrange(-12, 13) for _ in range(deg + 1)]
            if ints[-1] == 0:
                ints[-1] = 1
            res = isolate(PowerPolyInt(ints), (0, 1), 10)
            roots = sympy_roots_in_unit(ints)
            assert len(res) == len(roots), f"{ints}: {res.intervals} vs {roots}"
            for root, iv in zip(sorted(roots), res.intervals):
                eps = Fraction(1, 10**25)  # sympy print-off slack
                assert iv.lo.as_fraction() - eps <= root <= iv.hi.as_fraction() + eps
            # disjoint and sorted
            for a, b in zip(res.intervals, res.intervals[1:]):
                assert a.hi < b.lo
            for iv in res:
                assert iv.diameter() <= pow2(-10)

    def test_subinterval(self):
        ivs = isolate_in_interval(PowerPolyInt([0, 0, 1]), (1, 4), 10,
                                  DyadicInterval(Dyadic(0), ONE))
        assert len(ivs) == 1
        assert ivs[0].contains(Dyadic(1, -1))


class TestSturmCount:
    def test_examples(self):
        # counting happens inside [-1,1] scaled problems, but the routine
        # accepts any dyadic interval
        assert sturm_count(PowerPolyInt([-1, 0, 1]),
                           DyadicInterval(Dyadic(-2), Dyadic(2))) == 2
        assert sturm_count(PowerPolyInt([1, 0, 1]),
                           DyadicInterval(Dyadic(-1), ONE)) == 0

    def test_endpoint_root_raises(self):
        with pytest.raises(EndpointRoot):
            sturm_count(PowerPolyInt([0, 1]), DyadicInterval(Dyadic(0), ONE))

    def test_multiplicity_collapsed(self):
        # (x-1/2)^2 has one distinct root
        assert sturm_count(PowerPolyInt([1, -4, 4]),
                           DyadicInterval(Dyadic(0), ONE)) == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_random_against_sympy_grid(self, seed):
        rng = random.Random(200 + seed)
        for _ in range(10):
            deg = rng.randrange(1, 9)
            ints = [rng.randrange(-9, 10) for _ in range(deg + 1)]
            if ints[-1] == 0:
                ints[-1] = 1
            lo, hi = Dyadic(-1), ONE
            try:
                got = sturm_count(PowerPolyInt(ints), DyadicInterval(lo, hi))
            except EndpointRoot:
                continue
            want = len(sympy_roots_in_unit(ints))
            assert got == want, f"{ints}"


class TestCompleteness:
    def test_counts_partition(self):
        rng = random.Random(42)
        for _ in range(15):
            deg = rng.randrange(2, 8)
            ints = [rng.randrange(-9, 10) for _ in range(deg + 1)]
            if ints[-1] == 0:
                ints[-1] = 1
            res = isolate(PowerPolyInt(ints), (0, 1), 10)
            try:
                total = sturm_count(PowerPolyInt(ints),
                                    DyadicInterval(Dyadic(-1), ONE))
            except EndpointRoot:
                continue
            covered = 0
            for iv in res:
                try:
                    covered += max(1, sturm_count(PowerPolyInt(ints), iv))
                except EndpointRoot:
                    covered += 1
            assert covered >= total
