"""Polynomial enclosures in the Chebyshev basis on [-1,1].

A ChebEnclosure is a sparse dyadic coefficient map plus an error radius; it
denotes the set of continuous functions within that radius of the centre
polynomial in sup norm.  Coefficient l1 norms bound sup norms (|T_k| <= 1),
which keeps every error estimate cheap and rigorous.

All arithmetic on centres is exact; every rounding step (sweeping, coefficient
truncation, non-dyadic constants) moves mass into the error radius, so the
denotation only ever widens.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .dyadic import (
    Ball, Dyadic, DyadicInterval, ZERO, ONE, HALF, pow2, round_dir,
    dyadic_recip_ball, fraction_ball,
)
from .errors import DomainViolation, ConstantPolynomial
from .metrics import charge_nodes, note_degree

ERR_BITS = 64
# above this degree, range maximisation switches from Sturm root isolation to
# branch and bound on values (the chains get too expensive to be useful)
ISOLATION_DEGREE_LIMIT = 80

UNIT = DyadicInterval(Dyadic(-1), ONE)


def _cap(r: Dyadic) -> Dyadic:
    return round_dir(r, ERR_BITS, up=True)


class ChebEnclosure:
    """Sparse Chebyshev polynomial with dyadic coefficients and error radius.

    The polynomial always lives in coordinates on [-1,1]; `domain` records
    which global interval those coordinates represent (local representations
    rescale subintervals onto [-1,1] and keep the original interval here).
    """

    __slots__ = ("coeffs", "err", "domain", "_l1", "_deriv_l1", "_fixed")

    def __init__(self, coeffs: dict[int, Dyadic], err: Dyadic = ZERO,
                 domain: DyadicInterval | None = None):
        if err.m < 0:
            raise ValueError("negative error radius")
        self.coeffs = {k: c for k, c in coeffs.items() if c.m != 0}
        self.err = _cap(err)
        self.domain = domain if domain is not None else UNIT
        self._l1 = None
        self._deriv_l1 = None
        self._fixed = None
        note_degree(self.degree())

    # -- inspection -----------------------------------------------------

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def coeff(self, k: int) -> Dyadic:
        return self.coeffs.get(k, ZERO)

    def l1_norm(self) -> Dyadic:
        """Exact sum of |c_k|; an upper bound for the sup norm of the centre."""
        if self._l1 is None:
            acc = ZERO
            for c in self.coeffs.values():
                acc = acc + abs(c)
            self._l1 = acc
        return self._l1

    def mag_bound(self) -> Dyadic:
        return self.l1_norm() + self.err

    def is_exact(self) -> bool:
        return self.err.m == 0

    def center(self) -> "ChebEnclosure":
        if self.err.m == 0:
            return self
        return ChebEnclosure(self.coeffs, ZERO, self.domain)

    def deriv_l1(self) -> Dyadic:
        """l1 bound on the derivative of the centre; a Lipschitz constant."""
        if self._deriv_l1 is None:
            self._deriv_l1 = cheb_derivative(self).l1_norm()
        return self._deriv_l1

    def __repr__(self):
        terms = ", ".join(f"{k}:{c}" for k, c in sorted(self.coeffs.items()))
        return f"Cheb({{{terms}}}, err={self.err})"

    def dump_text(self) -> str:
        lines = [f"{k}:{c}" for k, c in sorted(self.coeffs.items())]
        lines.append(f"err:{self.err}")
        return "\n".join(lines)


# -- constructors --------------------------------------------------------

def cheb_const(c: Dyadic, err: Dyadic = ZERO) -> ChebEnclosure:
    return ChebEnclosure({0: c}, err)


def cheb_const_ball(b: Ball) -> ChebEnclosure:
    return ChebEnclosure({0: b.c}, b.r)


def cheb_x() -> ChebEnclosure:
    return ChebEnclosure({1: ONE})


def cheb_basis(k: int) -> ChebEnclosure:
    return ChebEnclosure({k: ONE})


# -- exact linear operations ----------------------------------------------

def _common_domain(p: ChebEnclosure, q: ChebEnclosure) -> DyadicInterval:
    if p.domain != q.domain:
        raise DomainViolation(
            f"operands live on different domains: {p.domain} vs {q.domain}")
    return p.domain


def cheb_add(p: ChebEnclosure, q: ChebEnclosure) -> ChebEnclosure:
    dom = _common_domain(p, q)
    coeffs = dict(p.coeffs)
    for k, c in q.coeffs.items():
        coeffs[k] = coeffs.get(k, ZERO) + c
    return ChebEnclosure(coeffs, p.err + q.err, dom)


def cheb_neg(p: ChebEnclosure) -> ChebEnclosure:
    return ChebEnclosure({k: -c for k, c in p.coeffs.items()}, p.err, p.domain)


def cheb_sub(p: ChebEnclosure, q: ChebEnclosure) -> ChebEnclosure:
    return cheb_add(p, cheb_neg(q))


def cheb_scale(p: ChebEnclosure, d: Dyadic) -> ChebEnclosure:
    return ChebEnclosure({k: c * d for k, c in p.coeffs.items()},
                         p.err * abs(d), p.domain)


def cheb_scale_ball(p: ChebEnclosure, b: Ball) -> ChebEnclosure:
    extra = p.mag_bound() * b.r
    return ChebEnclosure({k: c * b.c for k, c in p.coeffs.items()},
                         p.err * abs(b.c) + extra, p.domain)


def cheb_mul(p: ChebEnclosure, q: ChebEnclosure) -> ChebEnclosure:
    """Exact product via T_m T_n = (T_{m+n} + T_{|m-n|}) / 2."""
    dom = _common_domain(p, q)
    err = p.l1_norm() * q.err + q.l1_norm() * p.err + p.err * q.err
    if not p.coeffs or not q.coeffs:
        return ChebEnclosure({}, err, dom)
    # integer fast path on a shared exponent
    ep = min(c.e for c in p.coeffs.values())
    eq = min(c.e for c in q.coeffs.values())
    items_p = [(k, c.m << (c.e - ep)) for k, c in p.coeffs.items()]
    items_q = [(k, c.m << (c.e - eq)) for k, c in q.coeffs.items()]
    acc: dict[int, int] = {}
    for i, mi in items_p:
        for j, mj in items_q:
            prod = mi * mj
            s = i + j
            d = i - j if i >= j else j - i
            acc[s] = acc.get(s, 0) + prod
            acc[d] = acc.get(d, 0) + prod
    e_out = ep + eq - 1  # the /2 from the product identity
    return ChebEnclosure({k: Dyadic(v, e_out) for k, v in acc.items() if v},
                         err, dom)


# -- sweeping and size reduction -------------------------------------------

def sweep(p: ChebEnclosure, target: int) -> ChebEnclosure:
    """Drop small terms whose joint l1 mass stays below 2^-(target+2).

    The removed mass is added to the error radius, so the denotation widens.
    """
    if not p.coeffs:
        return p
    budget = pow2(-target - 2)
    by_size = sorted(p.coeffs.items(), key=lambda kv: abs(kv[1]).as_fraction())
    removed = ZERO
    drop = set()
    for k, c in by_size:
        mass = removed + abs(c)
        if mass > budget:
            break
        removed = mass
        drop.add(k)
    if not drop:
        return p
    kept = {k: c for k, c in p.coeffs.items() if k not in drop}
    return ChebEnclosure(kept, p.err + removed, p.domain)


def round_coeffs(p: ChebEnclosure, bits: int) -> ChebEnclosure:
    """Truncate coefficient mantissas to `bits`, absorbing the loss."""
    out = {}
    lost = ZERO
    for k, c in p.coeffs.items():
        if c.bit_size() <= bits:
            out[k] = c
        else:
            r = round_dir(c, bits, up=(c.m < 0))  # toward zero
            lost = lost + abs(c - r)
            if r.m != 0:
                out[k] = r
    if lost.m == 0:
        return p
    return ChebEnclosure(out, p.err + lost, p.domain)


def size_reduce(p: ChebEnclosure, target: int) -> ChebEnclosure:
    return round_coeffs(sweep(p, target), target + ERR_BITS)


# -- evaluation -------------------------------------------------------------

def cheb_eval_exact(p: ChebEnclosure, x: Dyadic) -> Dyadic:
    """Exact Clenshaw evaluation of the centre at a dyadic point."""
    deg = p.degree()
    b1 = ZERO
    b2 = ZERO
    two_x = x + x
    for k in range(deg, 0, -1):
        b1, b2 = p.coeff(k) + two_x * b1 - b2, b1
    return p.coeff(0) + x * b1 - b2


def cheb_eval_fraction(p: ChebEnclosure, x: Fraction) -> Fraction:
    """Exact rational evaluation of the centre (test oracles, Q0 values)."""
    deg = p.degree()
    b1 = Fraction(0)
    b2 = Fraction(0)
    two_x = 2 * x
    for k in range(deg, 0, -1):
        b1, b2 = p.coeff(k).as_fraction() + two_x * b1 - b2, b1
    return p.coeff(0).as_fraction() + x * b1 - b2


def cheb_endpoint_values(p: ChebEnclosure) -> tuple[Dyadic, Dyadic]:
    """Exact centre values at -1 and +1 (T_k(+-1) = (+-1)^k)."""
    at_pos = ZERO
    at_neg = ZERO
    for k, c in p.coeffs.items():
        at_pos = at_pos + c
        at_neg = (at_neg + c) if k % 2 == 0 else (at_neg - c)
    return at_neg, at_pos


def cheb_eval(p: ChebEnclosure, x: Ball,
              domain: DyadicInterval | None = None) -> Ball:
    """Enclosure of f(xi) for f in the denotation and xi in x.

    Mean-value form: exact evaluation at the centre plus a Lipschitz term for
    the ball width.  (Interval Clenshaw amplifies radii exponentially near the
    endpoints, so it is deliberately avoided.)
    """
    if domain is not None:
        iv = x.interval()
        if not (domain.lo <= iv.lo and iv.hi <= domain.hi):
            raise DomainViolation(f"{x} outside domain {domain}")
    center = cheb_eval_exact(p, x.c)
    r = p.err
    if x.r.m != 0:
        r = r + x.r * p.deriv_l1()
    charge_nodes()
    return Ball(center, r)


def cheb_derivative(p: ChebEnclosure) -> ChebEnclosure:
    """Exact derivative of the centre polynomial (error radius dropped)."""
    deg = p.degree()
    if deg == 0:
        return ChebEnclosure({})
    out = {}
    # downward recurrence: b_{k-1} = b_{k+1} + 2k c_k, with b halved at k=0
    nxt = ZERO      # b_{k+1}
    cur = ZERO      # b_k
    for k in range(deg, 0, -1):
        prev = nxt + Dyadic(2 * k) * p.coeff(k)
        if k - 1 == 0:
            prev = prev * HALF
        out[k - 1] = prev
        nxt = cur
        cur = prev
    return ChebEnclosure(out)


# -- Markov bound -------------------------------------------------------------

def markov_bound(p: ChebEnclosure) -> Dyadic:
    """n^2 * B with B the coefficient l1 bound; a Lipschitz constant on [-1,1].

    Requires an exact polynomial (error radius zero).
    """
    if p.err.m != 0:
        raise ValueError("markov_bound needs an exact polynomial")
    n = p.degree()
    return Dyadic(n * n) * p.l1_norm()


# -- integration ---------------------------------------------------------------

def cheb_antiderivative(p: ChebEnclosure, prec: int = 128) -> ChebEnclosure:
    """Chebyshev antiderivative; non-dyadic 1/(2k) factors become error mass."""
    out: dict[int, Dyadic] = {}
    err = ZERO
    c0 = p.coeff(0)
    c2 = p.coeff(2)
    out[1] = c0 - c2 * HALF
    top = p.degree()
    for k in range(2, top + 2):
        num = p.coeff(k - 1) - p.coeff(k + 1)
        if num.m == 0:
            continue
        inv = dyadic_recip_ball(2 * k, prec + num.bit_size())
        out[k] = num * inv.c
        err = err + abs(num) * inv.r
    return ChebEnclosure(out, err)


def cheb_integrate(p: ChebEnclosure, a: Ball, b: Ball,
                   prec: int = 128,
                   domain: DyadicInterval | None = None) -> Ball:
    """Enclosure of the integral of p from a to b."""
    dom = domain if domain is not None else DyadicInterval(Dyadic(-1), ONE)
    for endpoint in (a, b):
        iv = endpoint.interval()
        if not (dom.lo <= iv.lo and iv.hi <= dom.hi):
            raise DomainViolation(f"integration endpoint {endpoint} outside {dom}")
    anti = cheb_antiderivative(p, prec)
    fa = cheb_eval(anti, a)
    fb = cheb_eval(anti, b)
    res = fb - fa
    width = (b - a).mag_bound()
    return res.widen(p.err * width)


def cheb_integrate_unit(p: ChebEnclosure, prec: int = 128) -> Ball:
    """Integral over the whole of [-1,1] via exact endpoint evaluation."""
    anti = cheb_antiderivative(p, prec)
    lo_val, hi_val = cheb_endpoint_values(anti)
    center = hi_val - lo_val
    return Ball(center, anti.err + anti.err + p.err * Dyadic(2))


# -- power basis --------------------------------------------------------------

class PowerPoly:
    """Dense power-basis polynomial with exact dyadic coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Dyadic]):
        cs = list(coeffs)
        while len(cs) > 1 and cs[-1].m == 0:
            cs.pop()
        self.coeffs = cs if cs else [ZERO]

    @staticmethod
    def from_ints(ints: Iterable[int]) -> "PowerPoly":
        return PowerPoly([Dyadic(i) for i in ints])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c.m == 0 for c in self.coeffs)

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c.as_fraction()
        return acc

    def eval_dyadic(self, x: Dyadic) -> Dyadic:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "PowerPoly":
        if self.degree() == 0:
            return PowerPoly([ZERO])
        return PowerPoly([Dyadic(i) * c
                          for i, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "PowerPoly") -> "PowerPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else ZERO
            b = other.coeffs[i] if i < len(other.coeffs) else ZERO
            out.append(a + b)
        return PowerPoly(out)

    def __neg__(self) -> "PowerPoly":
        return PowerPoly([-c for c in self.coeffs])

    def __sub__(self, other: "PowerPoly") -> "PowerPoly":
        return self + (-other)

    def __mul__(self, other: "PowerPoly") -> "PowerPoly":
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.m == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b.m == 0:
                    continue
                out[i + j] = out[i + j] + a * b
        return PowerPoly(out)

    def coeff_l1(self) -> Dyadic:
        acc = ZERO
        for c in self.coeffs:
            acc = acc + abs(c)
        return acc

    def compose_affine(self, c0: Dyadic, c1: Dyadic) -> "PowerPoly":
        """p(c0 + c1 x), exactly."""
        acc = PowerPoly([ZERO])
        aff = PowerPoly([c0, c1])
        for c in reversed(self.coeffs):
            acc = acc * aff + PowerPoly([c])
        return acc

    def __repr__(self):
        return "Power(" + ", ".join(map(str, self.coeffs)) + ")"


class PowerPolyInt:
    """Integer-coefficient power-basis polynomial scaled by 2^scale."""

    __slots__ = ("ints", "scale")

    def __init__(self, ints: list[int], scale: int = 0):
        while len(ints) > 1 and ints[-1] == 0:
            ints = ints[:-1]
        self.ints = ints if ints else [0]
        self.scale = scale

    def degree(self) -> int:
        return len(self.ints) - 1

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.ints):
            acc = acc * x + c
        return acc * Fraction(2) ** self.scale

    def __repr__(self):
        return f"PowerInt({self.ints}, 2^{self.scale})"


def power_to_int(p: PowerPoly) -> PowerPolyInt:
    nonzero = [c for c in p.coeffs if c.m != 0]
    if not nonzero:
        return PowerPolyInt([0], 0)
    e = min(c.e for c in nonzero)
    return PowerPolyInt([c.m << (c.e - e) if c.m != 0 else 0
                         for c in p.coeffs], e)


def to_power_basis(p: ChebEnclosure) -> PowerPolyInt:
    """Exact basis change of the centre polynomial."""
    return power_to_int(to_power_poly(p))


def to_power_poly(p: ChebEnclosure) -> PowerPoly:
    deg = p.degree()
    out = [ZERO] * (deg + 1)
    # T_k rows by the recurrence T_{k+1} = 2x T_k - T_{k-1}
    t_prev = [1]
    t_cur = [0, 1]
    for k in range(deg + 1):
        row = t_prev if k == 0 else (t_cur if k == 1 else None)
        if row is None:
            row = [0] + [2 * v for v in t_cur]
            for i, v in enumerate(t_prev):
                row[i] -= v
            t_prev, t_cur = t_cur, row
        c = p.coeff(k)
        if c.m != 0:
            for i, t in enumerate(row):
                if t:
                    out[i] = out[i] + c * Dyadic(t)
    return PowerPoly(out)


def power_to_cheb(p: PowerPoly) -> ChebEnclosure:
    """Exact basis change power -> Chebyshev (x T_k = (T_{k+1}+T_{|k-1|})/2)."""
    result: dict[int, Dyadic] = {}
    cur = {0: ONE}   # Chebyshev form of x^i
    for i, a in enumerate(p.coeffs):
        if a.m != 0:
            for k, c in cur.items():
                result[k] = result.get(k, ZERO) + a * c
        if i < len(p.coeffs) - 1:
            nxt: dict[int, Dyadic] = {}
            for k, c in cur.items():
                half = c * HALF
                if k == 0:
                    nxt[1] = nxt.get(1, ZERO) + c
                else:
                    nxt[k + 1] = nxt.get(k + 1, ZERO) + half
                    nxt[k - 1] = nxt.get(k - 1, ZERO) + half
            cur = nxt
    return ChebEnclosure(result)


def int_poly_to_cheb(p: PowerPolyInt) -> ChebEnclosure:
    return power_to_cheb(PowerPoly([Dyadic(c, p.scale) for c in p.ints]))


# -- affine recomposition -------------------------------------------------------

def compose_affine(p: ChebEnclosure, c0: Ball, c1: Ball,
                   sweep_target: int | None = None) -> ChebEnclosure:
    """Enclosure of p(c0 + c1 t) as a polynomial in t.

    Exact when both affine coefficients are exact dyadics and the image of
    [-1,1] stays inside [-1,1]; callers are responsible for that containment
    (restriction maps of subintervals always satisfy it).
    """
    aff = ChebEnclosure({0: c0.c, 1: c1.c}, c0.r + c1.r)
    two_aff = cheb_scale(aff, Dyadic(2))
    deg = p.degree()
    b1 = ChebEnclosure({})
    b2 = ChebEnclosure({})
    for k in range(deg, 0, -1):
        nxt = cheb_add(cheb_const(p.coeff(k)), cheb_sub(cheb_mul(two_aff, b1), b2))
        if sweep_target is not None:
            nxt = sweep(nxt, sweep_target)
        b1, b2 = nxt, b1
    res = cheb_add(cheb_const(p.coeff(0)), cheb_sub(cheb_mul(aff, b1), b2))
    return ChebEnclosure(res.coeffs, res.err + p.err)


def restrict(p: ChebEnclosure, lo: Dyadic, hi: Dyadic,
             sweep_target: int | None = None) -> ChebEnclosure:
    """Restriction of p to [lo, hi] within [-1,1], rescaled onto [-1,1]."""
    mid = (lo + hi) * HALF
    rad = (hi - lo) * HALF
    return compose_affine(p, Ball(mid), Ball(rad), sweep_target)


# -- trigonometric application ----------------------------------------------------

def _taylor_terms(bound: Fraction, n: int, odd: bool) -> int:
    """Smallest J with a tail bound 2 * B^(2J+d) / (2J+d)! <= 2^-(n+3)."""
    d = 3 if odd else 2
    target = Fraction(1, 1 << (n + 4))
    j = 0
    power = bound ** d
    fact = 1
    for i in range(2, d + 1):
        fact *= i
    while True:
        if power / fact <= target and 2 * bound * bound < (2 * j + d + 1) * (2 * j + d + 2):
            return j
        j += 1
        power *= bound * bound
        fact *= (2 * j + d - 1) * (2 * j + d)


def _sin_cos_enclosure(p: ChebEnclosure, n: int, trig: str) -> ChebEnclosure:
    """Compose sin or cos with p via the Taylor series in p's centre.

    Sweeping inside the Horner recursion must anticipate that mass dropped at
    step j is still multiplied by up to ||u||^(2j) afterwards, so the sweep
    target carries the remaining amplification in bits.
    """
    u = p.center()
    bound = u.l1_norm().as_fraction()
    odd = trig == "sin"
    J = _taylor_terms(bound, n, odd)
    log_b = max(0, (u.l1_norm() + ONE).ceil_log2())
    work = n + 8 + J.bit_length()
    cprec = work + 8 + log_b * (2 * J + 3)

    u2 = cheb_mul(u, u)  # exact; its degree is intrinsic to the argument

    def inv_factorial(k: int) -> Ball:
        f = 1
        for i in range(2, k + 1):
            f *= i
        return dyadic_recip_ball(f, cprec)

    acc = ChebEnclosure({}, domain=u.domain)
    for j in range(J, -1, -1):
        k = 2 * j + (1 if odd else 0)
        coeff = inv_factorial(k)
        if j % 2 == 1:
            coeff = -coeff
        term = ChebEnclosure({0: coeff.c}, coeff.r, u.domain)
        if j == J:
            acc = term
        else:
            # 2*j multiplications by u remain after this step (plus the final
            # one for sine); sweep below what they can amplify
            amp = log_b * (2 * j + (1 if odd else 0))
            acc = sweep(cheb_add(cheb_mul(acc, u2), term), work + amp)
    if odd:
        acc = sweep(cheb_mul(acc, u), work)
    # Lagrange tail plus the |sin'| <= 1 transfer of the input error
    dd = 3 if odd else 2
    tail_fr = 2 * bound ** (2 * J + dd)
    fact = 1
    for i in range(2, 2 * J + dd + 1):
        fact *= i
    tail = Dyadic.from_fraction_up(tail_fr / fact, 32)
    return ChebEnclosure(acc.coeffs, acc.err + tail + p.err)


def cheb_sin(p: ChebEnclosure, n: int) -> ChebEnclosure:
    """Enclosure of sin(f) for every f in p, to error 2^-n plus p's radius."""
    return _sin_cos_enclosure(p, n, "sin")


def cheb_cos(p: ChebEnclosure, n: int) -> ChebEnclosure:
    return _sin_cos_enclosure(p, n, "cos")


# -- fixed-point evaluation (stable alternative to exact Clenshaw) -----------------

class _FixedHorner:
    """Power-basis Horner with one global 2^-W grid.

    For |x| <= 1 the rounding error of the whole evaluation is at most
    (deg+1) * 2^-W in value, so a single pass yields a two-sided enclosure.
    Mantissa sizes stay bounded, unlike exact evaluation at deep bisection
    midpoints.
    """

    __slots__ = ("ints", "W", "slack")

    def __init__(self, p: ChebEnclosure, extra_bits: int):
        pw = to_power_basis(p)
        s = pw.scale
        self.W = max(extra_bits + (p.degree() + 2).bit_length() + 4, -s, 1)
        self.ints = [c << (self.W + s) for c in pw.ints]  # W >= -s keeps this exact
        self.slack = pow2(-self.W) * Dyadic(p.degree() + 2)

    def value(self, x: Dyadic) -> Ball:
        """Enclosure of the centre value at a dyadic point with |x| <= 1."""
        shift = self.W + x.e
        if shift < 0:
            raise ValueError("point finer than the fixed-point grid")
        xi = x.m << shift
        acc = 0
        for c in reversed(self.ints):
            acc = ((acc * xi) >> self.W) + c
        return Ball(Dyadic(acc, -self.W), self.slack)


def _fixed_horner(p: ChebEnclosure, bits: int) -> _FixedHorner:
    if p._fixed is None or p._fixed.W < bits:
        p._fixed = _FixedHorner(p, bits)
    return p._fixed


# -- range maximisation ------------------------------------------------------------

def _mean_value_ball(p: ChebEnclosure, lo: Dyadic, hi: Dyadic) -> Ball:
    mid = (lo + hi) * HALF
    rad = (hi - lo) * HALF
    v = cheb_eval_exact(p, mid)
    return Ball(v, rad * p.deriv_l1())


def cheb_range_max(p: ChebEnclosure, a: Ball, b: Ball, n: int,
                   domain: DyadicInterval | None = None) -> Ball:
    """Ball of radius <= 2^-n + err containing max of p over [a, b].

    Candidates are the endpoints plus the critical set of the centre; the
    critical set comes from Sturm root isolation of the derivative for
    moderate degrees and from branch-and-bound pruning beyond that.
    """
    dom = domain if domain is not None else DyadicInterval(Dyadic(-1), ONE)
    for endpoint in (a, b):
        iv = endpoint.interval()
        if not (dom.lo <= iv.lo and iv.hi <= dom.hi):
            raise DomainViolation(f"endpoint {endpoint} outside {dom}")
    lo_pt = a.c
    hi_pt = b.c
    if lo_pt > hi_pt:
        lo_pt, hi_pt = hi_pt, lo_pt
    center = p.center()
    candidates = [Ball(lo_pt, a.r), Ball(hi_pt, b.r)]
    if center.degree() >= 2:
        if center.degree() <= ISOLATION_DEGREE_LIMIT:
            candidates.extend(
                _critical_intervals_sturm(center, lo_pt, hi_pt, n))
        else:
            best = _range_max_bnb(center, lo_pt, hi_pt, n)
            return best.widen(p.err)
    out_lo = None
    out_hi = None
    lip = center.deriv_l1()
    for cand in candidates:
        v = cheb_eval_exact(center, cand.c)
        w = cand.r * lip
        v_lo, v_hi = v - w, v + w
        out_lo = v_lo if out_lo is None or v_lo > out_lo else out_lo
        out_hi = v_hi if out_hi is None or v_hi > out_hi else out_hi
    return Ball.from_endpoints(out_lo, out_hi).widen(p.err)


def _critical_intervals_sturm(center: ChebEnclosure, lo: Dyadic, hi: Dyadic,
                              n: int) -> list[Ball]:
    from .roots import isolate_in_interval
    deriv = cheb_derivative(center)
    lip = center.deriv_l1()
    bits = n + 1 + (max(lip, ONE)).ceil_log2()
    dpoly = to_power_basis(deriv)
    if dpoly.degree() < 1:
        return []
    try:
        intervals = isolate_in_interval(dpoly, (0, 1), bits,
                                        DyadicInterval(lo, hi))
    except ConstantPolynomial:
        return []
    return [Ball.from_interval(iv) for iv in intervals]


def _range_max_bnb(center: ChebEnclosure, lo: Dyadic, hi: Dyadic,
                   n: int) -> Ball:
    """Branch and bound on centre values with mean-value enclosures."""
    import heapq
    target = pow2(-n - 1)
    lip = center.deriv_l1()
    horner = _fixed_horner(center, n + 10)
    incumbent = None
    counter = 0
    heap: list[tuple[Fraction, int, Dyadic, Dyadic]] = []

    def certified_value(x: Dyadic) -> Ball:
        return horner.value(x)

    def push(u: Dyadic, v: Dyadic):
        nonlocal counter, incumbent
        mid = (u + v) * HALF
        val = certified_value(mid)
        if incumbent is None or val.lo > incumbent:
            incumbent = val.lo
        rad = (v - u) * HALF
        upper = val.hi + rad * lip
        heapq.heappush(heap, (-upper.as_fraction(), counter, u, v))
        counter += 1

    for endpoint in (lo, hi):
        val = certified_value(endpoint)
        if incumbent is None or val.lo > incumbent:
            incumbent = val.lo
    push(lo, hi)
    while True:
        charge_nodes()
        neg_upper, _, u, v = heapq.heappop(heap)
        upper = Dyadic.from_fraction_up(-neg_upper, 80)
        if upper - incumbent <= target:
            return Ball.from_endpoints(incumbent, upper)
        mid = (u + v) * HALF
        push(u, mid)
        push(mid, v)
