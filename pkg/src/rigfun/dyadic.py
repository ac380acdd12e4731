"""Exact dyadic rationals, exact-endpoint intervals, and outward-rounded balls.

Every value is immutable.  Dyadic addition, subtraction and multiplication are
exact; division exists only at the ball level, with explicit directed rounding.
Ball radii are capped at RADIUS_BITS significant bits and always rounded up, so
they stay cheap while remaining sound.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZeroPossible

RADIUS_BITS = 64


class Dyadic:
    """An exact binary rational mantissa * 2**exponent.

    Canonical form: the mantissa is odd or zero, and zero has exponent 0.
    """

    __slots__ = ("m", "e")

    def __init__(self, m: int, e: int = 0):
        if m == 0:
            self.m = 0
            self.e = 0
        else:
            shift = (m & -m).bit_length() - 1
            self.m = m >> shift
            self.e = e + shift

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_fraction_up(fr: Fraction, prec: int) -> "Dyadic":
        """Smallest representable value >= fr with about prec significant bits."""
        return _div_int_dir(fr.numerator, fr.denominator, prec, up=True)

    @staticmethod
    def from_fraction_down(fr: Fraction, prec: int) -> "Dyadic":
        return _div_int_dir(fr.numerator, fr.denominator, prec, up=False)

    # -- exact ring operations ----------------------------------------

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if self.m == 0:
            return other
        if other.m == 0:
            return self
        if self.e >= other.e:
            return Dyadic((self.m << (self.e - other.e)) + other.m, other.e)
        return Dyadic(self.m + (other.m << (other.e - self.e)), self.e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        d = Dyadic.__new__(Dyadic)
        d.m = -self.m
        d.e = self.e
        return d

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        if self.m == 0 or other.m == 0:
            return ZERO
        d = Dyadic.__new__(Dyadic)
        d.m = self.m * other.m  # product of odd mantissas stays odd
        d.e = self.e + other.e
        return d

    def __abs__(self) -> "Dyadic":
        return -self if self.m < 0 else self

    # -- comparisons (exact) ------------------------------------------

    def _cmp(self, other: "Dyadic") -> int:
        if self.m == 0 and other.m == 0:
            return 0
        diff = self - other
        return (diff.m > 0) - (diff.m < 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Dyadic) and self.m == other.m and self.e == other.e

    def __lt__(self, other): return self._cmp(other) < 0
    def __le__(self, other): return self._cmp(other) <= 0
    def __gt__(self, other): return self._cmp(other) > 0
    def __ge__(self, other): return self._cmp(other) >= 0

    def __hash__(self):
        return hash((self.m, self.e))

    def __bool__(self):
        return self.m != 0

    @property
    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    # -- views ---------------------------------------------------------

    def as_fraction(self) -> Fraction:
        if self.e >= 0:
            return Fraction(self.m << self.e, 1)
        return Fraction(self.m, 1 << -self.e)

    def __float__(self) -> float:
        # display/debug only; saturates instead of raising on huge exponents
        import math
        try:
            return math.ldexp(self.m, self.e)
        except OverflowError:
            return math.inf if self.m > 0 else -math.inf

    def __repr__(self) -> str:
        return f"{self.m}*2^{self.e}"

    # -- size bookkeeping ----------------------------------------------

    def bit_size(self) -> int:
        return abs(self.m).bit_length()

    def floor_log2(self) -> int:
        """floor(log2(|self|)); requires self != 0."""
        if self.m == 0:
            raise ValueError("log2 of zero")
        return self.e + abs(self.m).bit_length() - 1

    def ceil_log2(self) -> int:
        """ceil(log2(|self|)); requires self != 0."""
        f = self.floor_log2()
        return f if abs(self.m) == 1 else f + 1


def _div_int_dir(num: int, den: int, prec: int, up: bool) -> Dyadic:
    """Directed rounding of num/den to about prec significant bits.

    up=True rounds toward +infinity, up=False toward -infinity.
    """
    if den == 0:
        raise ZeroDivisionError("dyadic directed division by zero")
    if num == 0:
        return ZERO
    if den < 0:
        num, den = -num, -den
    shift = prec + den.bit_length() - abs(num).bit_length() + 2
    if shift < 0:
        shift = 0
    q, r = divmod(num << shift, den)
    if r and up:
        q += 1
    return Dyadic(q, -shift)


def dyadic_div_dir(a: Dyadic, b: Dyadic, prec: int, up: bool) -> Dyadic:
    """a/b with directed rounding; exact when the quotient is dyadic."""
    d = _div_int_dir(a.m, b.m, prec, up)
    return Dyadic(d.m, d.e + a.e - b.e)


def round_dir(d: Dyadic, bits: int, up: bool) -> Dyadic:
    """Round d to at most `bits` significant bits, toward +inf (up) or -inf."""
    excess = d.bit_size() - bits
    if excess <= 0:
        return d
    if up:
        m = -((-d.m) >> excess)
    else:
        m = d.m >> excess
    return Dyadic(m, d.e + excess)


def _cap_radius(r: Dyadic) -> Dyadic:
    return round_dir(r, RADIUS_BITS, up=True)


ZERO = Dyadic(0)
ONE = Dyadic(1)
TWO = Dyadic(2)
HALF = Dyadic(1, -1)


def pow2(k: int) -> Dyadic:
    return Dyadic(1, k)


class DyadicInterval:
    """An interval with exact dyadic endpoints, lo <= hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Dyadic, hi: Dyadic):
        if lo > hi:
            raise ValueError(f"interval endpoints out of order: {lo} > {hi}")
        self.lo = lo
        self.hi = hi

    def diameter(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi) * HALF

    def contains(self, x: Dyadic) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "DyadicInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __eq__(self, other):
        return (isinstance(other, DyadicInterval)
                and self.lo == other.lo and self.hi == other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


UNIT_INTERVAL = DyadicInterval(Dyadic(-1), ONE)


class Ball:
    """center +- radius with radius >= 0; all operations are inclusion-isotone."""

    __slots__ = ("c", "r")

    def __init__(self, c: Dyadic, r: Dyadic = ZERO):
        if r.m < 0:
            raise ValueError("negative ball radius")
        self.c = c
        self.r = _cap_radius(r)

    @staticmethod
    def from_endpoints(lo: Dyadic, hi: Dyadic) -> "Ball":
        return Ball((lo + hi) * HALF, (hi - lo) * HALF)

    @staticmethod
    def from_interval(iv: DyadicInterval) -> "Ball":
        return Ball.from_endpoints(iv.lo, iv.hi)

    def interval(self) -> DyadicInterval:
        return DyadicInterval(self.c - self.r, self.c + self.r)

    @property
    def lo(self) -> Dyadic:
        return self.c - self.r

    @property
    def hi(self) -> Dyadic:
        return self.c + self.r

    def contains_fraction(self, fr: Fraction) -> bool:
        lo = self.lo.as_fraction()
        hi = self.hi.as_fraction()
        return lo <= fr <= hi

    def contains_dyadic(self, d: Dyadic) -> bool:
        return self.lo <= d <= self.hi

    def intersects(self, other: "Ball") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def mag_bound(self) -> Dyadic:
        """Upper bound on |x| over the ball."""
        return abs(self.c) + self.r

    def __add__(self, other: "Ball") -> "Ball":
        return Ball(self.c + other.c, self.r + other.r)

    def __sub__(self, other: "Ball") -> "Ball":
        return Ball(self.c - other.c, self.r + other.r)

    def __neg__(self) -> "Ball":
        return Ball(-self.c, self.r)

    def __mul__(self, other: "Ball") -> "Ball":
        r = abs(self.c) * other.r + abs(other.c) * self.r + self.r * other.r
        return Ball(self.c * other.c, r)

    def scale(self, d: Dyadic) -> "Ball":
        return Ball(self.c * d, self.r * abs(d))

    def widen(self, slack: Dyadic) -> "Ball":
        return Ball(self.c, self.r + slack)

    def __repr__(self):
        return f"Ball({self.c}, {self.r})"


def ball_recip(a: Ball, prec: int = 96) -> Ball:
    """Inclusion-isotone reciprocal; requires 0 outside the ball."""
    lo, hi = a.lo, a.hi
    if lo.m <= 0 <= hi.m:
        raise DivisionByZeroPossible(f"reciprocal of {a} which may contain zero")
    # 1/x is decreasing on either side of zero, so endpoints swap
    out_lo = dyadic_div_dir(ONE, hi, prec, up=False)
    out_hi = dyadic_div_dir(ONE, lo, prec, up=True)
    return Ball.from_endpoints(out_lo, out_hi)


def ball_div(a: Ball, b: Ball, prec: int = 96) -> Ball:
    return a * ball_recip(b, prec)


def ball_max(a: Ball, b: Ball) -> Ball:
    """Enclosure of max(x, y) for x in a, y in b."""
    lo = a.lo if a.lo >= b.lo else b.lo
    hi = a.hi if a.hi >= b.hi else b.hi
    return Ball.from_endpoints(lo, hi)


def ball_hull(a: Ball, b: Ball) -> Ball:
    lo = a.lo if a.lo <= b.lo else b.lo
    hi = a.hi if a.hi >= b.hi else b.hi
    return Ball.from_endpoints(lo, hi)


def ball_intersect(a: Ball, b: Ball) -> Ball:
    """Intersection of two overlapping balls."""
    lo = a.lo if a.lo >= b.lo else b.lo
    hi = a.hi if a.hi <= b.hi else b.hi
    if lo > hi:
        raise ValueError("balls do not intersect")
    return Ball.from_endpoints(lo, hi)


def round_to(a: Dyadic, n: int) -> Ball:
    """A ball of radius <= 2^-n containing a, whose center exponent is >= -n."""
    if n < 0:
        raise ValueError("accuracy must be nonnegative")
    if a.e >= -n:
        return Ball(a, ZERO)
    shift = -n - a.e
    q, rem = divmod(a.m, 1 << shift)   # floor division
    if 2 * rem >= (1 << shift):
        q += 1
    center = Dyadic(q, -n)
    return Ball(center, abs(a - center))


def dyadic_recip_ball(k: int, prec: int) -> Ball:
    """Enclosure of 1/k for a nonzero integer k; exact for powers of two."""
    if k == 0:
        raise ZeroDivisionError("1/0")
    lo = _div_int_dir(1, k, prec, up=False)
    hi = _div_int_dir(1, k, prec, up=True)
    return Ball.from_endpoints(lo, hi)


def fraction_ball(fr: Fraction, prec: int) -> Ball:
    """Enclosure of an exact rational; exact when fr is dyadic."""
    lo = Dyadic.from_fraction_down(fr, prec)
    hi = Dyadic.from_fraction_up(fr, prec)
    return Ball.from_endpoints(lo, hi)


def format_dyadic(d: Dyadic) -> str:
    return f"{d.m}*2^{d.e}"
