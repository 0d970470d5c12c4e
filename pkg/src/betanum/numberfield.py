"""Exact arithmetic in Q(beta) for a Pisot base beta.

Elements are stored in the power basis 1, beta, ..., beta^(r-1) with integer
numerator coefficients over a single positive denominator, always in
canonical form (content coprime to the denominator), so equality and
hashing are structural.  Numeric evaluation goes through certified root
enclosures; a float fast path with a rigorous error budget covers the hot
orbit loops and falls back to exact interval refinement near ties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, floor as _floor
from typing import Iterable, Sequence

from . import qpoly, roots
from .errors import DegenerateInput, DivisionByZero, FieldMismatch, NotPisot

_FLOAT_EPS = 2.0 ** -52


@dataclass(frozen=True)
class MinimalPolynomial:
    """Monic squarefree integer polynomial, constant term first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = self.coeffs
        if len(c) < 2 or any(not isinstance(x, int) for x in c):
            raise DegenerateInput("need integer coefficients of degree >= 1")
        if c[-1] != 1:
            raise DegenerateInput("polynomial must be monic")
        if not qpoly.is_squarefree(c):
            raise DegenerateInput("polynomial must be squarefree")
        if len(c) > 2 and qpoly.rational_roots(c):
            raise DegenerateInput("polynomial has a rational root (reducible)")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        return " ".join(str(c) for c in self.coeffs)


class PisotField:
    """Q(beta) together with certified enclosures of every conjugate."""

    def __init__(self, minpoly: MinimalPolynomial):
        self.minpoly = minpoly
        self.degree = minpoly.degree
        r = self.degree
        coeffs = minpoly.coeffs

        if r == 1:
            root = -coeffs[0]
            if root <= 1:
                raise NotPisot(f"dominant root {root} is not > 1")
            self.dominant = roots.RealRoot(Fraction(root), Fraction(root))
            self.real_conjugates: list[roots.RealRoot] = []
            self.complex_conjugates: list[roots.ComplexRoot] = []
        else:
            reals, disks = roots.certified_roots(coeffs)
            if not reals:
                raise NotPisot("dominant root is not real")
            reals.sort(key=lambda rr: rr.mid)
            dom = reals[-1]
            while dom.hi - dom.lo > Fraction(1, 2**80):
                dom = dom.refined(coeffs, (dom.hi - dom.lo) / 2**40)
            if dom.hi <= 1:
                raise NotPisot("dominant root is not > 1")
            while dom.lo <= 1:
                dom = dom.refined(coeffs, (dom.hi - dom.lo) / 4)
            for rr in reals[:-1]:
                if roots.real_modulus_vs_one(coeffs, rr) >= 0:
                    raise NotPisot("a real conjugate has modulus >= 1")
            for dk in disks:
                if roots.complex_modulus_vs_one(coeffs, dk) >= 0:
                    raise NotPisot("a complex conjugate has modulus >= 1")
            self.dominant = dom
            self.real_conjugates = [
                rr.refined(coeffs, Fraction(1, 2**80)) for rr in reals[:-1]
            ]
            self.complex_conjugates = [
                roots.refine_complex_root(coeffs, dk, Fraction(1, 2**80))
                for dk in disks
            ]

        # beta^k in the power basis for k = 0 .. 2r-2 (exact integer rows)
        rows = [tuple(1 if i == k else 0 for i in range(r)) for k in range(r)]
        for _ in range(r - 1):
            rows.append(self._shift_row(rows[-1]))
        self._pow_rows = rows

        # float caches for the fast floor/sign path
        self._dom_f = float(self.dominant.mid)
        self._dom_err_f = float(self.dominant.hi - self.dominant.lo) + 1e-300
        self.beta_floor = self._floor_of_dominant()

    def _shift_row(self, row: Sequence[int]) -> tuple[int, ...]:
        """Multiply a power-basis row by beta and reduce modulo the minpoly."""
        r = self.degree
        carry = row[-1]
        out = [0] + list(row[:-1])
        if carry:
            for i in range(r):
                out[i] -= carry * self.minpoly.coeffs[i]
        return tuple(out)

    def _floor_of_dominant(self) -> int:
        lo, hi = self.dominant.lo, self.dominant.hi
        while _floor(lo) != _floor(hi):
            rr = self.dominant.refined(self.minpoly.coeffs, (hi - lo) / 4)
            lo, hi = rr.lo, rr.hi
        return _floor(lo)

    # -- element constructors ------------------------------------------------

    def element(self, num: Iterable[int], den: int = 1) -> "FieldElement":
        num = list(num)
        if len(num) > self.degree:
            raise ValueError("too many coefficients")
        num += [0] * (self.degree - len(num))
        return self._make(num, den)

    def _make(self, num: list[int], den: int) -> "FieldElement":
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = [c // g for c in num]
            den //= g
        return FieldElement(self, tuple(num), den)

    def zero(self) -> "FieldElement":
        return self.element([0])

    def one(self) -> "FieldElement":
        return self.element([1])

    def beta(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([-self.minpoly.coeffs[0]])
        return self.element([0, 1])

    def from_fraction(self, q: Fraction) -> "FieldElement":
        return self.element([q.numerator], q.denominator)

    def from_int(self, n: int) -> "FieldElement":
        return self.element([n])

    # -- arithmetic kernels ---------------------------------------------------

    def _mul_num(self, a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
        r = self.degree
        conv = [0] * (2 * r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = [0] * r
        rows = self._pow_rows
        for k, ck in enumerate(conv):
            if ck:
                row = rows[k]
                for i in range(r):
                    if row[i]:
                        out[i] += ck * row[i]
        return out

    def _mul_beta_num(self, a: Sequence[int]) -> list[int]:
        r = self.degree
        carry = a[-1]
        out = [0] + list(a[:-1])
        if carry:
            mp = self.minpoly.coeffs
            for i in range(r):
                out[i] -= carry * mp[i]
        return out

    # -- certified evaluation --------------------------------------------------

    def dominant_interval(self, width: Fraction) -> tuple[Fraction, Fraction]:
        rr = self.dominant
        if rr.hi - rr.lo > width:
            rr = rr.refined(self.minpoly.coeffs, width)
        return rr.lo, rr.hi

    def __eq__(self, other):
        return isinstance(other, PisotField) and self.minpoly.coeffs == other.minpoly.coeffs

    def __hash__(self):
        return hash(self.minpoly.coeffs)

    def __repr__(self):
        return f"PisotField({list(self.minpoly.coeffs)})"


class FieldElement:
    """Canonical element num(beta)/den of a PisotField.  Immutable."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: PisotField, num: tuple[int, ...], den: int):
        self.field = field
        self.num = num
        self.den = den

    # -- ring structure -----------------------------------------------------

    def _check(self, other: "FieldElement") -> None:
        if self.field is not other.field and self.field != other.field:
            raise FieldMismatch("elements from different fields")

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        da, db = self.den, other.den
        g = gcd(da, db)
        ma, mb = db // g, da // g
        num = [a * ma + b * mb for a, b in zip(self.num, other.num)]
        return self.field._make(num, da * ma)

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        da, db = self.den, other.den
        g = gcd(da, db)
        ma, mb = db // g, da // g
        num = [a * ma - b * mb for a, b in zip(self.num, other.num)]
        return self.field._make(num, da * ma)

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.num), self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        num = self.field._mul_num(self.num, other.num)
        return self.field._make(num, self.den * other.den)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fraction(other)
        return NotImplemented

    __radd__ = __add__
    __rmul__ = __mul__

    def mul_beta(self) -> "FieldElement":
        return self.field._make(self.field._mul_beta_num(self.num), self.den)

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # extended Euclid over Q[X] against the minimal polynomial
        a = qpoly.normalize([Fraction(c) for c in self.num])
        m = [Fraction(c) for c in self.field.minpoly.coeffs]
        r0, r1 = tuple(m), a
        s0, s1 = (Fraction(0),), (Fraction(1),)
        while qpoly.degree(r1) > 0:
            q, rem = qpoly.poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, qpoly.poly_mul(q, s1))
        if r1 == (Fraction(0),):
            raise DegenerateInput("element not invertible: minpoly reducible")
        c = r1[0]
        inv = [x / c for x in s1]
        from math import lcm
        den = lcm(*[f.denominator for f in inv]) if inv else 1
        num = [int(f * den) for f in inv]
        num += [0] * (self.field.degree - len(num))
        return self.field._make([n * self.den for n in num], den)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is irrational")
        return Fraction(self.num[0], self.den)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)):
                other = self._coerce(other)
            else:
                return NotImplemented
        return (self.field == other.field and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    # -- numeric evaluation ---------------------------------------------------

    def _float_eval(self) -> tuple[float, float]:
        """(value, rigorous absolute error bound) at the dominant root."""
        f = self.field
        x = f._dom_f
        acc = 0.0
        mag = 0.0
        for c in reversed(self.num):
            acc = acc * x + c
            mag = mag * abs(x) + abs(c)
        # derivative-style sensitivity to the root enclosure width plus
        # float rounding, with a generous safety factor
        sens = 0.0
        p = 1.0
        for i, c in enumerate(self.num):
            if i:
                sens += abs(c) * i * p
            p *= abs(x) + 1e-15
        err = (sens + 1.0) * f._dom_err_f + 8.0 * (len(self.num) + 2) * _FLOAT_EPS * (mag + 1.0)
        return acc / self.den, err / self.den

    def interval(self, eps: Fraction) -> tuple[Fraction, Fraction]:
        """Certified rational interval of width <= eps containing the value."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        f = self.field
        width = Fraction(1, 2**60)
        for _ in range(64):
            lo, hi = f.dominant_interval(width)
            vlo, vhi = qpoly.eval_interval(self.num, lo, hi)
            vlo, vhi = vlo / self.den, vhi / self.den
            if vhi - vlo <= eps:
                return vlo, vhi
            width /= 2**40
        raise RuntimeError("interval refinement stalled")

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.num[0] > 0 else -1
        v, err = self._float_eval()
        if v > err:
            return 1
        if v < -err:
            return -1
        eps = Fraction(1, 2**80)
        while True:
            lo, hi = self.interval(eps)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            eps /= 2**40

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __float__(self):
        return self._float_eval()[0]

    def floor(self) -> int:
        if self.is_rational():
            return self.num[0] // self.den
        v, err = self._float_eval()
        fl, fh = _floor(v - err), _floor(v + err)
        if fl == fh:
            return fl
        # near an integer boundary: decide exactly
        n = round(v)
        if (self - n).is_zero():
            return n
        eps = Fraction(1, 2**80)
        while True:
            lo, hi = self.interval(eps)
            fl, fh = lo.__floor__(), hi.__floor__()
            if fl == fh:
                return fl
            if fh == fl + 1 and (self - fh).is_zero():
                return fh
            eps /= 2**40

    def __repr__(self):
        return f"FieldElement({list(self.num)}/{self.den})"

    def __str__(self):
        return ",".join(str(c) for c in self.num) + "/" + str(self.den)


def _poly_sub(a, b):
    la, lb = len(a), len(b)
    n = max(la, lb)
    out = []
    for i in range(n):
        x = a[i] if i < la else Fraction(0)
        y = b[i] if i < lb else Fraction(0)
        out.append(x - y)
    return qpoly.normalize(out)


# ---------------------------------------------------------------------------
# Module-level operation surface


def make_field(coeffs: Sequence[int]) -> PisotField:
    """Build the field for a monic integer polynomial, rejecting non-Pisot input."""
    if not coeffs or all(c == 0 for c in coeffs):
        raise DegenerateInput("zero polynomial")
    return PisotField(MinimalPolynomial(tuple(int(c) for c in coeffs)))


def elem_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def elem_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def elem_neg(a: FieldElement) -> FieldElement:
    return -a


def elem_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def real_value(a: FieldElement, eps) -> tuple[Fraction, Fraction]:
    return a.interval(Fraction(eps))


def exact_floor(a: FieldElement) -> int:
    return a.floor()


def parse_descriptor(text: str) -> list[int]:
    """Field descriptor: space-separated integers, constant term first."""
    try:
        coeffs = [int(tok) for tok in text.split()]
    except ValueError as e:
        raise DegenerateInput(f"bad field descriptor: {e}") from None
    if not coeffs:
        raise DegenerateInput("empty field descriptor")
    return coeffs


def format_descriptor(field: PisotField) -> str:
    return " ".join(str(c) for c in field.minpoly.coeffs)
