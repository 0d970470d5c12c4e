"""Exact polynomial and interval helpers over the rationals.

Polynomials are tuples of coefficients, constant term first.  Everything
here is exact (int / Fraction); no floating point enters any certificate.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence


def normalize(coeffs: Sequence) -> tuple:
    """Drop trailing zero coefficients (keep at least the constant)."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(coeffs: Sequence) -> int:
    return len(normalize(coeffs)) - 1


def eval_at(coeffs: Sequence, x):
    """Horner evaluation; exact for Fraction/int arguments."""
    acc = coeffs[-1] * 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def derivative(coeffs: Sequence) -> tuple:
    if len(coeffs) <= 1:
        return (0,)
    return tuple(i * c for i, c in enumerate(coeffs) if i > 0)


def reverse_poly(coeffs: Sequence) -> tuple:
    """X^deg * P(1/X).  Caller must strip zero roots first."""
    return normalize(tuple(reversed(normalize(coeffs))))


def poly_mul(a: Sequence, b: Sequence) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return normalize(out)


def poly_divmod(a: Sequence, b: Sequence):
    """Exact division over Q; returns (quotient, remainder) as Fraction tuples."""
    a = [Fraction(c) for c in normalize(a)]
    b = [Fraction(c) for c in normalize(b)]
    if b == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = a[-1] / lead
        q[shift] = factor
        for i, bc in enumerate(b):
            a[shift + i] -= factor * bc
        a.pop()
    if not a:
        a = [Fraction(0)]
    return normalize(q), normalize(a)


def poly_gcd(a: Sequence, b: Sequence) -> tuple:
    """Monic gcd over Q."""
    a = normalize([Fraction(c) for c in a])
    b = normalize([Fraction(c) for c in b])
    while b != (Fraction(0),) and b != (0,):
        _, r = poly_divmod(a, b)
        a, b = b, r
    if a[-1] == 0:
        return (Fraction(0),)
    lead = a[-1]
    return tuple(c / lead for c in a)


def is_squarefree(coeffs: Sequence) -> bool:
    return degree(poly_gcd(coeffs, derivative(coeffs))) == 0


def squarefree_part(coeffs: Sequence) -> tuple:
    g = poly_gcd(coeffs, derivative(coeffs))
    if degree(g) == 0:
        return normalize(coeffs)
    q, _ = poly_divmod(coeffs, g)
    return q


def rational_roots(coeffs: Sequence) -> list[Fraction]:
    """All rational roots of an integer polynomial (monic: integer candidates)."""
    c = normalize(coeffs)
    roots = []
    # strip zero roots
    while c[0] == 0 and len(c) > 1:
        roots.append(Fraction(0))
        c = c[1:]
        break
    if len(c) == 1:
        return roots
    const, lead = abs(c[0]), abs(c[-1])
    for num in _divisors(int(const)):
        for den in _divisors(int(lead)):
            for s in (1, -1):
                cand = Fraction(s * num, den)
                if eval_at(c, cand) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# Sturm chains and real root counting


def sturm_chain(coeffs: Sequence) -> list[tuple]:
    p0 = normalize([Fraction(c) for c in coeffs])
    p1 = normalize([Fraction(c) for c in derivative(p0)])
    chain = [p0, p1]
    while degree(chain[-1]) > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if r == (Fraction(0),) or r == (0,):
            break
        chain.append(tuple(-c for c in r))
    return chain


def _sign_changes(chain, x) -> int:
    signs = []
    for p in chain:
        v = eval_at(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_in(chain, lo, hi) -> int:
    """Number of distinct real roots in (lo, hi]."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def cauchy_bound(coeffs: Sequence) -> Fraction:
    c = normalize(coeffs)
    lead = abs(Fraction(c[-1]))
    m = max((abs(Fraction(x)) for x in c[:-1]), default=Fraction(0))
    return 1 + m / lead


def isolate_real_roots(coeffs: Sequence) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, each containing exactly one real root.

    Requires a squarefree input.  Exact roots r are returned as (r, r).
    """
    chain = sturm_chain(coeffs)
    bound = cauchy_bound(coeffs) + 1
    out: list[tuple[Fraction, Fraction]] = []

    def recurse(lo: Fraction, hi: Fraction, n: int) -> None:
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if eval_at(coeffs, mid) == 0:
            out.append((mid, mid))
            eps = (hi - lo) / (1 << (4 * n * n).bit_length())
            lo2, hi2 = mid - eps, mid + eps
            while count_roots_in(chain, lo2, hi2) > 1:
                eps /= 2
                lo2, hi2 = mid - eps, mid + eps
            recurse(lo, lo2, count_roots_in(chain, lo, lo2))
            recurse(hi2, hi, count_roots_in(chain, hi2, hi))
            return
        left = count_roots_in(chain, lo, mid)
        recurse(lo, mid, left)
        recurse(mid, hi, n - left)

    total = count_roots_in(chain, -bound, bound)
    recurse(-bound, bound, total)
    # make intervals open at the left root-free, strictly disjoint
    out.sort()
    return out


def eval_interval(coeffs: Sequence, lo: Fraction, hi: Fraction):
    """Interval Horner: rigorous enclosure of P([lo, hi])."""
    alo = ahi = Fraction(0)
    for c in reversed([Fraction(x) for x in coeffs]):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def _round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((x * scale).__floor__(), scale)


def _round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((x * scale).__ceil__(), scale)


def refine_real_root(coeffs: Sequence, lo: Fraction, hi: Fraction,
                     width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval below `width`.

    Interval Newton step when it contracts, bisection otherwise; the sign
    change at the endpoints is preserved throughout, so the enclosure stays
    a certificate.  Endpoints are rounded outward onto a dyadic grid after
    each Newton step to keep coefficient sizes proportional to the target
    precision instead of doubling per iteration.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo == hi:
        return lo, hi
    f = lambda x: eval_at(coeffs, x)
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    dcoeffs = derivative(coeffs)
    while hi - lo > width:
        gap = hi - lo
        bits = max(8, (width.denominator.bit_length()
                       - width.numerator.bit_length()) + 8)
        mid = (lo + hi) / 2
        # interval Newton: mid - f(mid) / f'([lo, hi])
        new = None
        dlo, dhi = eval_interval(dcoeffs, lo, hi)
        if dlo > 0 or dhi < 0:
            fm = f(mid)
            if fm == 0:
                return mid, mid
            n1 = mid - fm / dlo
            n2 = mid - fm / dhi
            nlo, nhi = min(n1, n2), max(n1, n2)
            nlo = max(_round_down(nlo, bits), lo)
            nhi = min(_round_up(nhi, bits), hi)
            if nlo <= nhi and (nhi - nlo) < gap / 2:
                new = (nlo, nhi)
        if new is not None:
            nlo, nhi = new
            fnlo, fnhi = f(nlo), f(nhi)
            if fnlo == 0:
                return nlo, nlo
            if fnhi == 0:
                return nhi, nhi
            if (fnlo > 0) != (fnhi > 0):
                lo, hi, flo, fhi = nlo, nhi, fnlo, fnhi
                continue
            # Newton interval lost the sign change (possible only through
            # the outward rounding); fall through to bisection
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (flo > 0) != (fm > 0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return lo, hi


# ---------------------------------------------------------------------------
# Rational square root bounds


def _sqrt_scale_bits(q: Fraction, bits: int) -> int:
    # enough scaling that the integer square root carries ~bits significant
    # bits even for tiny radicands (relative, not absolute, precision)
    return bits + max(0, (q.denominator.bit_length()
                          - q.numerator.bit_length()) // 2 + 2)


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    """Rational u with u >= sqrt(q), within 2^-bits relative slack."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0)
    scale = 1 << _sqrt_scale_bits(q, bits)
    n = q.numerator * scale * scale
    d = q.denominator
    r = isqrt(n // d)
    while r * r * d < n:
        r += 1
    return Fraction(r, scale)


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0)
    scale = 1 << _sqrt_scale_bits(q, bits)
    n = q.numerator * scale * scale
    d = q.denominator
    r = isqrt(n // d)
    while r * r * d > n:
        r -= 1
    return Fraction(r, scale)
