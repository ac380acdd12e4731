"""Shared independent oracles for the test suite.

Everything here deliberately avoids the library's own evaluation paths:
exact Fraction arithmetic, sympy root finding, mpmath high precision, and
dense float grids.
"""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath

from rigfun.dyadic import Dyadic


def frac_of(d: Dyadic) -> Fraction:
    return d.as_fraction()


def cheb_value_fraction(coeffs: dict[int, Dyadic], x: Fraction) -> Fraction:
    """Direct T_k recurrence evaluation, independent of Clenshaw."""
    t_prev, t_cur = Fraction(1), x
    total = Fraction(0)
    top = max(coeffs) if coeffs else 0
    for k in range(top + 1):
        t = t_prev if k == 0 else (t_cur if k == 1 else 2 * x * t_cur - t_prev)
        if k >= 2:
            t_prev, t_cur = t_cur, t
        c = coeffs.get(k)
        if c is not None:
            total += c.as_fraction() * t
    return total


def random_dyadic(rng: random.Random, mag_bits: int = 10,
                  exp_range: tuple[int, int] = (-8, 2)) -> Dyadic:
    return Dyadic(rng.randrange(-(1 << mag_bits), (1 << mag_bits) + 1),
                  rng.randrange(*exp_range))


def random_unit_fraction(rng: random.Random, denom_bits: int = 16) -> Fraction:
    d = 1 << denom_bits
    return Fraction(rng.randrange(-d, d + 1), d)


def mp_fraction(x, dps: int = 50) -> Fraction:
    """Snap an mpmath value to an exact Fraction with ~dps digits."""
    with mpmath.workdps(dps):
        return Fraction(mpmath.nstr(+x, dps - 5))
