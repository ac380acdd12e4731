"""Real numbers as fast-converging Cauchy queries.

A CauchyReal is a procedure from an accuracy n (bits) to a Ball of radius
<= 2^-n containing the number.  Queries are memoized at the highest accuracy
seen so far, behind a lock so values can be shared between workers.

The module also hosts the elementary point functions (sin, cos on balls, pi)
used by coefficient construction and by the evaluator-based representations.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Sequence

from .dyadic import (
    Ball, Dyadic, ZERO, ONE, pow2, fraction_ball, ball_recip, round_dir,
)
from .errors import BadWitness, DivisionByZeroPossible


class CauchyReal:
    """query(n) yields a Ball of radius <= 2^-n; balls at different n intersect."""

    __slots__ = ("_query", "_lock", "_best_n", "_best_ball", "name")

    def __init__(self, query: Callable[[int], Ball], name: str = "real"):
        self._query = query
        self._lock = threading.Lock()
        self._best_n = -1
        self._best_ball = None
        self.name = name

    def query(self, n: int) -> Ball:
        if n < 0:
            n = 0
        with self._lock:
            if self._best_n >= n:
                return self._best_ball
        ball = self._query(n)
        if ball.r > pow2(-n):
            raise AssertionError(
                f"{self.name}: radius {ball.r} exceeds 2^-{n}")
        with self._lock:
            if n > self._best_n:
                self._best_n = n
                self._best_ball = ball
            return self._best_ball if self._best_n >= n else ball

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "CauchyReal") -> "CauchyReal":
        def q(n: int) -> Ball:
            return self.query(n + 1) + other.query(n + 1)
        return CauchyReal(q, "sum")

    def __sub__(self, other: "CauchyReal") -> "CauchyReal":
        def q(n: int) -> Ball:
            return self.query(n + 1) - other.query(n + 1)
        return CauchyReal(q, "difference")

    def __neg__(self) -> "CauchyReal":
        return CauchyReal(lambda n: -self.query(n), "negation")

    def __mul__(self, other: "CauchyReal") -> "CauchyReal":
        def q(n: int) -> Ball:
            # coarse probe for magnitudes, then schedule operand accuracies
            a0 = self.query(0)
            b0 = other.query(0)
            ka = max(0, (b0.mag_bound() + ONE).ceil_log2())
            kb = max(0, (a0.mag_bound() + ONE).ceil_log2())
            extra = 2
            while True:
                res = self.query(n + ka + extra) * other.query(n + kb + extra)
                if res.r <= pow2(-n):
                    return res
                extra += 2
        return CauchyReal(q, "product")


def real_from_dyadic(d: Dyadic) -> CauchyReal:
    ball = Ball(d, ZERO)
    return CauchyReal(lambda n: ball, f"dyadic({d})")


def real_from_fraction(fr: Fraction) -> CauchyReal:
    def q(n: int) -> Ball:
        return fraction_ball(fr, n + 2)
    return CauchyReal(q, f"rational({fr})")


def real_div(a: CauchyReal, b: CauchyReal, lb: Dyadic) -> CauchyReal:
    """a/b given a trusted witness |b| >= lb > 0.

    Raises BadWitness if a queried enclosure of b certifies |b| < lb.
    """
    if lb <= ZERO:
        raise ValueError("witness must be positive")
    k0 = max(0, 1 - lb.floor_log2())  # 2^-k0 <= lb/2

    def q(n: int) -> Ball:
        extra = 2
        while True:
            bb = b.query(k0 + extra + max(0, n))
            if bb.mag_bound() < lb:
                raise BadWitness(
                    f"denominator enclosure {bb} certifies |b| < {lb}")
            prec = n + k0 + 64
            try:
                inv = ball_recip(bb, prec)
            except DivisionByZeroPossible:
                extra += 4
                continue
            aa = a.query(n + 2 * k0 + extra)
            res = aa * inv
            if res.r <= pow2(-n):
                return res
            extra += 4
    return CauchyReal(q, "quotient")


def real_limit(seq: Callable[[int], CauchyReal],
               rate: Sequence[int]) -> CauchyReal:
    """Limit of seq with modulus polynomial given by nonnegative coefficients.

    rate = [a0, a1, ...] encodes p(n) = a0 + a1*n + a2*n^2 + ...; the caller
    promises ||seq(k) - lim|| < 2^-(n+1) for all k >= p(n).
    """
    if any(c < 0 for c in rate):
        raise ValueError("rate polynomial needs nonnegative coefficients")

    def p(n: int) -> int:
        acc = 0
        for c in reversed(rate):
            acc = acc * n + c
        return acc

    def q(n: int) -> Ball:
        ball = seq(p(n + 1)).query(n + 1)
        return ball.widen(pow2(-n - 1))
    return CauchyReal(q, "limit")


# -- elementary point functions -----------------------------------------

_SIN_ARG_CAP = 1 << 10


def _sin_like_point(x: Dyadic, prec: int, which: str) -> Ball:
    """Taylor evaluation of sin or cos at an exact dyadic point.

    Plain series around zero; arguments are capped since the benchmark
    signature never produces huge ones (no range reduction, by design).
    """
    if abs(x) > Dyadic(_SIN_ARG_CAP):
        raise ValueError(f"sin/cos argument too large: {x}")
    work = prec + 8
    # round the argument first so powers stay small
    xr = x
    slack = ZERO
    if xr.bit_size() > work:
        lo = round_dir(x, work, up=False)
        slack = abs(x - lo)  # |sin'|,|cos'| <= 1 transfers argument error
        xr = lo
    xf = xr.as_fraction()
    acc = Fraction(0)
    term = xf if which == "sin" else Fraction(1)
    k = 1 if which == "sin" else 0
    tol = Fraction(1, 1 << (prec + 6))
    x2f = xf * xf
    while True:
        acc += term
        term = -term * x2f / ((k + 1) * (k + 2))
        k += 2
        if abs(term) < tol and 2 * x2f < (k + 1) * (k + 2):
            # successive term ratios are now <= 1/2, so the whole tail is
            # bounded by twice the first omitted term
            tail = 2 * abs(term)
            break
    enclosure = fraction_ball(acc, prec + 6)
    bound = Dyadic.from_fraction_up(tail, 32)
    return enclosure.widen(bound + slack)


def sin_ball(x: Ball, prec: int = 64) -> Ball:
    """Enclosure of sin over the ball; uses |sin'| <= 1 for the radius."""
    core = _sin_like_point(x.c, prec, "sin")
    return core.widen(x.r)


def cos_ball(x: Ball, prec: int = 64) -> Ball:
    core = _sin_like_point(x.c, prec, "cos")
    return core.widen(x.r)


def _pi_query(n: int) -> Ball:
    """Machin's formula with exact rational partial sums."""
    target = Fraction(1, 1 << (n + 4))

    def atan_inv(m: int, scale: int) -> tuple[Fraction, Fraction]:
        # atan(1/m) alternating series; returns (partial sum, tail bound)
        acc = Fraction(0)
        k = 0
        while True:
            term = Fraction((-1) ** k, (2 * k + 1) * m ** (2 * k + 1))
            if scale * abs(term) < target:
                return acc, scale * abs(term)
            acc += term
            k += 1

    s5, t5 = atan_inv(5, 16)
    s239, t239 = atan_inv(239, 4)
    approx = 16 * s5 - 4 * s239
    ball = fraction_ball(approx, n + 6)
    return ball.widen(Dyadic.from_fraction_up(t5 + t239, 32))


PI = CauchyReal(_pi_query, "pi")
