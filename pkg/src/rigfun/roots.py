"""Certified isolation of polynomial equation solutions on [-1,1].

Everything here is exact integer arithmetic: Sturm chains built from
fraction-free pseudo-remainders count distinct real roots, and plain dyadic
midpoint bisection shrinks isolating intervals to the requested diameter.
Multiple roots are handled by reducing to the square-free part first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dyadic import Dyadic, DyadicInterval, ZERO, ONE, pow2
from .errors import ConstantPolynomial, EndpointRoot
from .cheb import PowerPolyInt
from .metrics import charge_nodes

IntPoly = list[int]  # dense, lowest degree first


# -- integer polynomial helpers -------------------------------------------

def _strip(p: IntPoly) -> IntPoly:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


def _degree(p: IntPoly) -> int:
    return len(p) - 1


def _is_zero(p: IntPoly) -> bool:
    return all(c == 0 for c in p)


def _derivative(p: IntPoly) -> IntPoly:
    if len(p) <= 1:
        return [0]
    return [i * c for i, c in enumerate(p)][1:]


def _content(p: IntPoly) -> int:
    from math import gcd
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g if g else 1


def _primitive(p: IntPoly) -> IntPoly:
    g = _content(p)
    return [c // g for c in p]


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Remainder of lc(b)^(da-db+1) * a modulo b (fraction-free).

    Each elimination step replaces r by lc(b)*r - r_k * x^(k-db) * b, so the
    total multiplier applied to a is exactly lc(b)^(da-db+1).
    """
    r = list(_strip(a))
    da, db = _degree(r), _degree(b)
    if da < db:
        return r
    lc = b[-1]
    for k in range(da, db - 1, -1):
        rk = r[k]
        r = [c * lc for c in r]
        if rk:
            shift = k - db
            for i, bc in enumerate(b):
                r[i + shift] -= rk * bc
        r[k] = 0
    return _strip(r)


def _poly_div_exact(num: IntPoly, den: IntPoly) -> IntPoly:
    """num / den when the division is exact over the rationals."""
    nf = [Fraction(c) for c in num]
    df = [Fraction(c) for c in den]
    dn, dd = _degree(num), _degree(den)
    out = [Fraction(0)] * (dn - dd + 1)
    for k in range(dn - dd, -1, -1):
        q = nf[k + dd] / df[-1]
        out[k] = q
        for i, dc in enumerate(df):
            nf[k + i] -= q * dc
    if any(f != 0 for f in nf):
        raise ArithmeticError("inexact polynomial division")
    denoms = 1
    for f in out:
        denoms = denoms * f.denominator // _gcd_int(denoms, f.denominator)
    return _strip([int(f * denoms) for f in out])


def _gcd_int(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _int_gcd_poly(a: IntPoly, b: IntPoly) -> IntPoly:
    a, b = _primitive(_strip(a)), _primitive(_strip(b))
    if _degree(a) < _degree(b):
        a, b = b, a
    while not _is_zero(b) and _degree(b) >= 0:
        if _degree(b) == 0:
            return [1]
        r = _primitive(_pseudo_rem(a, b))
        if _is_zero(r):
            break
        a, b = b, r
    res = _primitive(b if not _is_zero(b) else a)
    if res[-1] < 0:
        res = [-c for c in res]
    return res


def squarefree_part(p: IntPoly) -> IntPoly:
    p = _primitive(_strip(p))
    if _degree(p) <= 1:
        return p
    g = _int_gcd_poly(p, _derivative(p))
    if _degree(g) == 0:
        return p
    return _primitive(_poly_div_exact(p, g))


def eval_sign(p: IntPoly, x: Dyadic) -> int:
    """Exact sign of p at a dyadic point via integer Horner."""
    d = _degree(p)
    if x.e >= 0:
        xi = x.m << x.e
        acc = 0
        for c in reversed(p):
            acc = acc * xi + c
    else:
        s = -x.e
        acc = 0
        for i in range(d, -1, -1):
            acc = acc * x.m + (p[i] << (s * (d - i)))
    return (acc > 0) - (acc < 0)


def sturm_chain(p: IntPoly) -> list[IntPoly]:
    """Sign-faithful Sturm sequence (positive multipliers only)."""
    p = _primitive(_strip(p))
    chain = [p]
    dp = _derivative(p)
    if _is_zero(dp):
        return chain
    chain.append(_primitive(dp))
    while _degree(chain[-1]) > 0:
        a, b = chain[-2], chain[-1]
        delta = _degree(a) - _degree(b) + 1
        r = _pseudo_rem(a, b)
        if _is_zero(r):
            break
        # multiplier was lc(b)^delta; flip the remainder when that is negative
        if b[-1] < 0 and delta % 2 == 1:
            r = [-c for c in r]
        chain.append(_primitive([-c for c in r]))
    return chain


def _variations(chain: list[IntPoly], x: Dyadic, cache: dict) -> int:
    key = (x.m, x.e)
    hit = cache.get(key)
    if hit is not None:
        return hit
    signs = []
    for q in chain:
        s = eval_sign(q, x)
        if s != 0:
            signs.append(s)
    var = sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)
    cache[key] = var
    return var


@dataclass
class IsolationResult:
    """Sorted, pairwise disjoint intervals covering all solutions."""
    intervals: list[DyadicInterval]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)


def _count(chain, lo: Dyadic, hi: Dyadic, cache) -> int:
    """Distinct roots in (lo, hi]; endpoints must not be roots of chain[0]."""
    return _variations(chain, lo, cache) - _variations(chain, hi, cache)


def _nonroot_point_near(p: IntPoly, x: Dyadic, step: Dyadic, limit: int = 200):
    """First non-root among x + step, x + step/2, ... (exists: roots are finite)."""
    s = step
    for _ in range(limit):
        cand = x + s
        if eval_sign(p, cand) != 0:
            return cand
        s = s * Dyadic(1, -1)
    raise ArithmeticError("could not escape a root cluster")


def isolate_in_interval(P: PowerPolyInt, y: tuple[int, int], n: int,
                        interval: DyadicInterval) -> list[DyadicInterval]:
    """Isolating intervals for P(x) = y on the given interval.

    Each returned interval has diameter <= 2^-n, contains at least one
    solution, and every solution is covered; intervals are disjoint and sorted.
    """
    if P.degree() < 1:
        raise ConstantPolynomial("cannot isolate solutions of a constant")
    num, den = y
    if den == 0:
        raise ZeroDivisionError("rational target with zero denominator")
    if den < 0:
        num, den = -num, -den
    # clear the 2^scale and the denominator to get an integer equation
    if P.scale >= 0:
        g = [den * (c << P.scale) for c in P.ints]
    else:
        g = [den * c for c in P.ints]
        num <<= -P.scale
    g[0] -= num
    g = squarefree_part(g)
    if _degree(g) < 1:
        return []  # constant nonzero: no solutions (g == 0 is impossible
                   # here because P was non-constant)
    chain = sturm_chain(g)
    cache: dict = {}
    diam = pow2(-n)
    out: list[DyadicInterval] = []

    lo, hi = interval.lo, interval.hi
    # endpoint roots become degenerate-width isolating intervals
    if eval_sign(g, lo) == 0:
        lo2 = _nonroot_point_near(g, lo, diam * Dyadic(1, -4))
        if lo2 > hi:
            return [DyadicInterval(lo, hi)]
        out.append(DyadicInterval(lo, lo2))
        lo = lo2
    tail: list[DyadicInterval] = []
    if eval_sign(g, hi) == 0:
        hi2 = _nonroot_point_near(g, hi, -(diam * Dyadic(1, -4)))
        if hi2 < lo:
            return out + [DyadicInterval(lo, hi)]
        tail.append(DyadicInterval(hi2, hi))
        hi = hi2

    def bisect(a: Dyadic, b: Dyadic):
        charge_nodes()
        k = _count(chain, a, b, cache)
        if k == 0:
            return
        if b - a <= diam:
            out.append(DyadicInterval(a, b))
            return
        mid = (a + b) * Dyadic(1, -1)
        if eval_sign(g, mid) == 0:
            # root exactly at the midpoint: put it inside a tiny interval
            left = _nonroot_point_near(g, mid, -(diam * Dyadic(1, -4)))
            right = _nonroot_point_near(g, mid, diam * Dyadic(1, -4))
            left = left if left > a else a
            right = right if right < b else b
            bisect(a, left)
            out.append(DyadicInterval(left, right))
            bisect(right, b)
            return
        bisect(a, mid)
        bisect(mid, b)

    if lo < hi:
        bisect(lo, hi)
    out.extend(tail)
    out.sort(key=lambda iv: (iv.lo.as_fraction(), iv.hi.as_fraction()))
    return _separate(out, chain, g, cache)


def _shrink_top(chain, g, iv: DyadicInterval, cache) -> DyadicInterval:
    """Trim iv from above, keeping all its roots; iv.hi must not be a root."""
    half = Dyadic(1, -1)
    step = (iv.hi - iv.lo) * half
    m = iv.lo + step
    for _ in range(300):
        if eval_sign(g, m) != 0 and _count(chain, m, iv.hi, cache) == 0:
            return DyadicInterval(iv.lo, m)
        step = step * half
        m = iv.hi - step
    raise ArithmeticError("failed to separate adjacent isolating intervals")


def _separate(intervals, chain, g, cache):
    """Shrink intervals that share an endpoint until pairwise disjoint."""
    result = list(intervals)
    for i in range(len(result) - 1):
        if result[i].hi >= result[i + 1].lo:
            result[i] = _shrink_top(chain, g, result[i], cache)
    return result


def isolate(P: PowerPolyInt, y: tuple[int, int], n: int) -> IsolationResult:
    """Solutions of P(x) = y on [-1,1] to diameter 2^-n (see module doc)."""
    unit = DyadicInterval(Dyadic(-1), ONE)
    return IsolationResult(isolate_in_interval(P, y, n, unit))


def sturm_count(P: PowerPolyInt, interval: DyadicInterval) -> int:
    """Exact number of distinct real roots of P in the interval.

    Works on the square-free part; raises EndpointRoot when an endpoint is a
    root (callers perturb the endpoint by less than their isolation target).
    """
    if P.degree() < 1:
        raise ConstantPolynomial("constant polynomial")
    g = squarefree_part(list(P.ints))
    if _degree(g) < 1:
        return 0
    if eval_sign(g, interval.lo) == 0 or eval_sign(g, interval.hi) == 0:
        raise EndpointRoot(f"endpoint of {interval} is a root")
    chain = sturm_chain(g)
    return _count(chain, interval.lo, interval.hi, {})
