"""The representation space K_beta and the canonical embedding.

Archimedean coordinates come from certified conjugate enclosures (one
representative per complex pair); non-Archimedean coordinates live in the
fixed-precision completions of the padic module, one for each prime ideal
above a prime divisor of the norm of beta.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from typing import Optional, Sequence

from . import padic, qpoly, roots
from .errors import PrecisionExhausted
from .numberfield import FieldElement, PisotField

ARCH_REFINE_WIDTH = Fraction(1, 2**160)


@dataclass(frozen=True)
class PlaceDescriptor:
    kind: str  # "real" | "complex" | "padic"
    # archimedean data
    root_re: float = 0.0
    root_im: float = 0.0
    exact_root: object = None   # refined RealRoot / ComplexRoot enclosure
    # p-adic data
    local: Optional[padic.PadicPlace] = None
    # contraction data
    modulus: float = 0.0        # per-step scaling of the place metric
    haar_modulus: Fraction | float = 0.0  # Haar scaling of mult-by-beta

    def __str__(self):
        if self.kind == "real":
            return f"real({self.root_re:.6f})"
        if self.kind == "complex":
            return f"complex({self.root_re:.6f}{self.root_im:+.6f}i)"
        pl = self.local
        return f"padic(p={pl.p},e={pl.e},f={pl.f})"


@dataclass(frozen=True)
class EmbeddedPoint:
    """A point of K_beta, optionally extended by the R factor of K_beta x R."""

    arch: tuple[complex, ...]
    padics: tuple[tuple[Fraction, ...], ...]
    arch_err: float = 0.0
    real_coord: Optional[float] = None
    real_exact: Optional[FieldElement] = None
    source: Optional[FieldElement] = None  # x with point == delta(x), if known

    def with_real(self, x: FieldElement) -> "EmbeddedPoint":
        return EmbeddedPoint(self.arch, self.padics, self.arch_err,
                             float(x), x, self.source)


class RepresentationSpace:
    """K_beta = R^(r-1) x C^s x prod K_I, with precision policy."""

    def __init__(self, field: PisotField, eps: Fraction = Fraction(1, 10**12),
                 padic_digits: int = 32):
        self.field = field
        self.eps = Fraction(eps)
        self.padic_digits = padic_digits
        coeffs = field.minpoly.coeffs

        places: list[PlaceDescriptor] = []
        for rr in field.real_conjugates:
            rr = rr.refined(coeffs, ARCH_REFINE_WIDTH)
            val = float(rr.mid)
            places.append(PlaceDescriptor(
                kind="real", root_re=val, exact_root=rr, modulus=abs(val),
                haar_modulus=abs(val)))
        for dk in field.complex_conjugates:
            dk = roots.refine_complex_root(coeffs, dk, ARCH_REFINE_WIDTH)
            z = dk.complex()
            places.append(PlaceDescriptor(
                kind="complex", root_re=z.real, root_im=z.imag, exact_root=dk,
                modulus=abs(z), haar_modulus=abs(z) ** 2))
        norm = abs(coeffs[0])
        prec = max(padic_digits * 2 + 16, 64)
        for p in padic.prime_divisors(norm):
            for pl in padic.padic_places(coeffs, p, prec):
                places.append(PlaceDescriptor(
                    kind="padic", local=pl,
                    modulus=float(pl.p) ** float(-pl.beta_val),
                    haar_modulus=pl.contraction_modulus()))
        self.places = tuple(places)

    @property
    def arch_places(self):
        return [pl for pl in self.places if pl.kind != "padic"]

    @property
    def padic_places(self):
        return [pl for pl in self.places if pl.kind == "padic"]

    def delta(self, x: FieldElement) -> EmbeddedPoint:
        """Canonical embedding: evaluate x at every place.

        Uses float Horner while its rigorous error bound meets eps, exact
        evaluation at the refined root enclosure otherwise (large power
        basis coordinates cancel, so the float bound can be pessimistic).
        """
        num, den = x.num, x.den
        arch = []
        err = 0.0
        scale = 1.0
        for pl in self.arch_places:
            root = complex(pl.root_re, pl.root_im)
            acc = 0 + 0j
            mag = 0.0
            for c in reversed(num):
                acc = acc * root + c
                mag = mag * abs(root) + abs(c)
            bound = ((len(num) + 3) * 4.0 * 2.0**-52 * (mag + 1.0) / den
                     + mag * float(ARCH_REFINE_WIDTH))
            if bound > float(self.eps) * max(1.0, abs(acc) / den):
                val, bound = self._exact_arch_eval(pl, num, den)
            else:
                val = acc / den
            arch.append(val)
            err = max(err, bound)
            scale = max(scale, abs(val))
        # eps is absolute for bounded coordinates and relative beyond 1;
        # float64 output cannot do better for large conjugate values
        if err > float(self.eps) * scale:
            raise PrecisionExhausted("archimedean error bound above eps")
        pads = []
        for pl in self.padic_places:
            pads.append(pl.local.embed_polynomial(num, den))
        return EmbeddedPoint(tuple(arch), tuple(pads), err, source=x)

    def _exact_arch_eval(self, pl: PlaceDescriptor, num, den):
        """Exact rational evaluation at the certified enclosure, rounded to
        a float with a near-machine error bound."""
        if pl.kind == "real":
            lo, hi = qpoly.eval_interval(num, pl.exact_root.lo, pl.exact_root.hi)
            val = complex(float((lo + hi) / (2 * den)), 0.0)
            width = float((hi - lo) / den)
        else:
            er = pl.exact_root
            re, im = roots._gauss_eval(num, er.cre, er.cim)
            val = complex(float(re / den), float(im / den))
            # derivative sensitivity to the enclosure radius
            sens = sum(abs(int(c)) * i for i, c in enumerate(num)) or 1
            width = float(er.rad) * sens * max(1.0, abs(val)) * 4.0
        return val, width + 4.0 * 2.0**-52 * (abs(val) + 1.0)

    def h_beta(self, pt: EmbeddedPoint) -> EmbeddedPoint:
        """Coordinate-wise multiplication by the image of beta."""
        arch = []
        i = 0
        for pl in self.arch_places:
            arch.append(pt.arch[i] * complex(pl.root_re, pl.root_im))
            i += 1
        pads = []
        for j, pl in enumerate(self.padic_places):
            pads.append(pl.local.mul_beta(pt.padics[j]))
        src = pt.source.mul_beta() if pt.source is not None else None
        err = pt.arch_err * max((p.modulus for p in self.arch_places), default=0.0)
        return EmbeddedPoint(tuple(arch), tuple(pads), err,
                             pt.real_coord, pt.real_exact, src)

    def add(self, a: EmbeddedPoint, b: EmbeddedPoint) -> EmbeddedPoint:
        arch = tuple(x + y for x, y in zip(a.arch, b.arch))
        pads = tuple(pl.local.add(x, y) for pl, x, y in
                     zip(self.padic_places, a.padics, b.padics))
        src = None
        if a.source is not None and b.source is not None:
            src = a.source + b.source
        return EmbeddedPoint(arch, pads, a.arch_err + b.arch_err, source=src)

    def neg(self, a: EmbeddedPoint) -> EmbeddedPoint:
        arch = tuple(-x for x in a.arch)
        pads = tuple(pl.local.neg(x) for pl, x in zip(self.padic_places, a.padics))
        src = -a.source if a.source is not None else None
        return EmbeddedPoint(arch, pads, a.arch_err, a.real_coord,
                             a.real_exact, src)

    def zero_point(self) -> EmbeddedPoint:
        return self.delta(self.field.zero())

    def distance(self, a: EmbeddedPoint, b: EmbeddedPoint) -> float:
        """Max-metric over the places of K_beta (the real factor excluded)."""
        d = 0.0
        for x, y in zip(a.arch, b.arch):
            d = max(d, abs(x - y))
        for pl, x, y in zip(self.padic_places, a.padics, b.padics):
            d = max(d, pl.local.distance(x, y))
        return d

    def contraction_moduli(self) -> list[float]:
        """Per-place Haar scaling of multiplication by beta.

        |root| at real places, |root|^2 at complex places, and the norm
        modulus p^(-e f val(beta)) at p-adic places; the product is 1/beta.
        """
        return [float(pl.haar_modulus) for pl in self.places]

    def tail_bound(self, depth: int) -> float:
        """Upper bound for the distance between partial digit sums that
        share a length-`depth` prefix (and for truncation tails)."""
        bf = self.field.beta_floor
        best = 0.0
        for pl in self.places:
            if pl.kind == "padic":
                best = max(best, pl.modulus ** depth)
            else:
                rho = pl.modulus
                best = max(best, bf * rho**depth / (1.0 - rho))
        return best

    # -- serialization -------------------------------------------------------

    def point_record(self, pt: EmbeddedPoint) -> str:
        """One line per point: arch decimal pairs, p-adic digit strings
        most-significant-last, then the real coordinate when present."""
        cols = []
        for z in pt.arch:
            cols.append(f"{z.real:.15g}")
            cols.append(f"{z.imag:.15g}")
        for pl, vec in zip(self.padic_places, pt.padics):
            off, ds = pl.local.digits(vec, self.padic_digits)
            s = "".join(str(d) for d in reversed(ds))
            cols.append(s if off == 0 else f"{s}*u^{off}")
        if pt.real_coord is not None:
            cols.append(f"{pt.real_coord:.15g}")
        return " ".join(cols)


def places(field: PisotField, eps: Fraction = Fraction(1, 10**12),
           padic_digits: int = 32) -> RepresentationSpace:
    return RepresentationSpace(field, eps, padic_digits)


def delta(space: RepresentationSpace, x: FieldElement) -> EmbeddedPoint:
    return space.delta(x)


def h_beta(space: RepresentationSpace, pt: EmbeddedPoint) -> EmbeddedPoint:
    return space.h_beta(pt)


def contraction_moduli(space: RepresentationSpace) -> list[float]:
    return space.contraction_moduli()
