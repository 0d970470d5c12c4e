"""Certified root enclosures for integer polynomials.

Real roots are isolated exactly (Sturm counts + sign-change bisection) and
refined by a guarded interval-Newton loop.  Complex roots are located
heuristically at high precision and then certified with exact rational
arithmetic: a Gaussian-rational center c gets the classical enclosure
radius deg * |P(c)/P'(c)|, and pairwise-disjoint disks (together with the
real isolating intervals) each contain exactly one root.

Nothing in a certificate depends on floating point; mpmath only proposes
centers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from . import qpoly
from .qpoly import Fraction as _F  # noqa: F401  (re-export convenience)


@dataclass(frozen=True)
class RealRoot:
    lo: Fraction
    hi: Fraction

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refined(self, coeffs, width) -> "RealRoot":
        lo, hi = qpoly.refine_real_root(coeffs, self.lo, self.hi, Fraction(width))
        return RealRoot(lo, hi)

    def float(self) -> float:
        return float(self.mid)


@dataclass(frozen=True)
class ComplexRoot:
    """Certified open disk |z - (cre + i*cim)| < rad containing one root.

    Only the representative with positive imaginary part is stored; its
    conjugate mirror is implicit.
    """

    cre: Fraction
    cim: Fraction
    rad: Fraction

    def modulus_sq_bounds(self) -> tuple[Fraction, Fraction]:
        m2 = self.cre * self.cre + self.cim * self.cim
        m = qpoly.sqrt_upper(m2)
        up = m + self.rad
        lo = qpoly.sqrt_lower(m2) - self.rad
        if lo < 0:
            lo = Fraction(0)
        return lo * lo, up * up

    def modulus_upper(self) -> Fraction:
        return qpoly.sqrt_upper(self.cre * self.cre + self.cim * self.cim) + self.rad

    def modulus_lower(self) -> Fraction:
        lo = qpoly.sqrt_lower(self.cre * self.cre + self.cim * self.cim) - self.rad
        return lo if lo > 0 else Fraction(0)

    def complex(self) -> complex:
        return complex(float(self.cre), float(self.cim))


def _gauss_eval(coeffs: Sequence, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    """Exact evaluation at a Gaussian rational, Horner in Q(i)."""
    are, aim = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        are, aim = are * re - aim * im + c, are * im + aim * re
    return are, aim


def _mpf_to_fraction(x) -> Fraction:
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    val = Fraction(man) * (Fraction(2) ** exp)
    return -val if sign else val


def _certify_disk(coeffs: Sequence, re: Fraction, im: Fraction) -> Fraction | None:
    """Exact radius bound deg*|P(c)/P'(c)| at center c, or None if P'(c)=0."""
    d = qpoly.degree(coeffs)
    pre, pim = _gauss_eval(coeffs, re, im)
    dre, dim = _gauss_eval(qpoly.derivative(coeffs), re, im)
    den = dre * dre + dim * dim
    if den == 0:
        return None
    num = pre * pre + pim * pim
    return Fraction(d) * qpoly.sqrt_upper(num / den)


def certified_roots(coeffs: Sequence, extra_prec: int = 0):
    """All roots of a squarefree integer polynomial with certificates.

    Returns (real_roots, complex_roots): exact isolating intervals for the
    real roots and certified disks for one representative of each complex
    conjugate pair.
    """
    coeffs = qpoly.normalize(coeffs)
    deg = qpoly.degree(coeffs)
    if deg == 0:
        return [], []
    if not qpoly.is_squarefree(coeffs):
        raise ValueError("certified_roots requires a squarefree polynomial")

    reals = [RealRoot(lo, hi) for lo, hi in qpoly.isolate_real_roots(coeffs)]
    n_complex_pairs = (deg - len(reals)) // 2
    if n_complex_pairs == 0:
        return reals, []

    prec = 80 + extra_prec
    for _ in range(12):
        disks = _try_complex_certification(coeffs, reals, n_complex_pairs, prec)
        if disks is not None:
            return reals, disks
        prec *= 2
    raise RuntimeError("complex root certification did not converge")


def _try_complex_certification(coeffs, reals, n_pairs, prec):
    with mpmath.workprec(prec):
        try:
            approx = mpmath.polyroots(
                [mpmath.mpf(int(c)) for c in reversed(coeffs)],
                maxsteps=200, extraprec=prec,
            )
        except mpmath.libmp.NoConvergence:
            return None
    cands = sorted((z for z in approx if mpmath.im(z) > 0),
                   key=lambda z: -mpmath.im(z))[:n_pairs]
    if len(cands) < n_pairs:
        return None
    disks = []
    for z in cands:
        re = _mpf_to_fraction(mpmath.mpf(mpmath.re(z)))
        im = _mpf_to_fraction(mpmath.mpf(mpmath.im(z)))
        rad = _certify_disk(coeffs, re, im)
        if rad is None:
            return None
        disks.append(ComplexRoot(re, im, rad))
    # mirror disjointness: disk strictly above the real axis
    for dk in disks:
        if dk.cim <= dk.rad:
            return None
    # pairwise disjointness among disks and their mirrors
    for i, a in enumerate(disks):
        for j, b in enumerate(disks):
            if i < j:
                if not _disks_disjoint(a.cre, a.cim, a.rad, b.cre, b.cim, b.rad):
                    return None
            if i <= j:
                if not _disks_disjoint(a.cre, a.cim, a.rad, b.cre, -b.cim, b.rad):
                    return None
    # disjointness from real isolating intervals is implied by the mirror
    # check (a disk meeting R would meet its own mirror)
    return disks


def _disks_disjoint(x1, y1, r1, x2, y2, r2) -> bool:
    dx, dy = x1 - x2, y1 - y2
    s = r1 + r2
    return dx * dx + dy * dy > s * s


def refine_complex_root(coeffs: Sequence, disk: ComplexRoot,
                        rad_target: Fraction) -> ComplexRoot:
    """Shrink a certified disk below rad_target by re-centering via Newton."""
    if disk.rad <= rad_target:
        return disk
    re, im = disk.cre, disk.cim
    prec = 120
    dcoeffs = qpoly.derivative(coeffs)
    for _ in range(64):
        with mpmath.workprec(prec):
            z = mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator,
                           mpmath.mpf(im.numerator) / im.denominator)
            for _ in range(80):
                pv = _mp_eval(coeffs, z)
                dv = _mp_eval(dcoeffs, z)
                if dv == 0:
                    break
                step = pv / dv
                z = z - step
                if abs(step) < mpmath.mpf(2) ** (-prec + 8):
                    break
            nre = _mpf_to_fraction(mpmath.mpf(mpmath.re(z)))
            nim = _mpf_to_fraction(mpmath.mpf(mpmath.im(z)))
        rad = _certify_disk(coeffs, nre, nim)
        if rad is not None and rad <= rad_target:
            # containment in the original disk proves it is the same root
            dx, dy = nre - disk.cre, nim - disk.cim
            gap = disk.rad - rad
            if gap > 0 and dx * dx + dy * dy <= gap * gap:
                return ComplexRoot(nre, nim, rad)
        prec *= 2
        re, im = nre, nim
    raise RuntimeError("complex refinement stalled")


def _mp_eval(coeffs, z):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + int(c)
    return acc


# ---------------------------------------------------------------------------
# Exact modulus-versus-one decisions


def real_modulus_vs_one(coeffs, root: RealRoot) -> int:
    """-1, 0, +1 as |root| <,=,> 1.  Exact via endpoint evaluation."""
    if qpoly.eval_at(coeffs, Fraction(1)) == 0 and root.lo <= 1 <= root.hi:
        return 0
    if qpoly.eval_at(coeffs, Fraction(-1)) == 0 and root.lo <= -1 <= root.hi:
        return 0
    r = root
    while True:
        if abs(r.lo) < 1 and abs(r.hi) < 1:
            return -1
        if abs(r.lo) > 1 and abs(r.hi) > 1 and (r.lo > 1 or r.hi < -1):
            return 1
        width = (r.hi - r.lo) / 4 if r.hi > r.lo else Fraction(1, 10**6)
        if r.hi == r.lo:
            return -1 if abs(r.lo) < 1 else 1
        r = r.refined(coeffs, width)


def complex_modulus_vs_one(coeffs, disk: ComplexRoot) -> int:
    """-1, 0, +1 as the modulus of the enclosed root compares with 1.

    Termination for the |z| = 1 case uses an exact identity test: |z| = 1
    iff z equals 1/conj(z), and both are roots of P * reverse(P), so the
    question reduces to whether two certified root regions of that product
    coincide.
    """
    d = disk
    for i in range(80):
        if d.modulus_upper() < 1:
            return -1
        if d.modulus_lower() > 1:
            return 1
        # run the (heavy) exact circle test only once the disk is tight
        if d.rad < Fraction(1, 10**10) and _on_unit_circle(coeffs, d):
            return 0
        d = refine_complex_root(coeffs, d, d.rad / 16)
    raise RuntimeError("modulus decision stalled")


def _on_unit_circle(coeffs, disk: ComplexRoot) -> bool:
    """Exact test: is the root z in `disk` equal to 1/conj(z)?"""
    rev = qpoly.reverse_poly(coeffs)
    prod = qpoly.poly_mul(coeffs, rev)
    q = qpoly.squarefree_part(prod)
    q = _to_int_poly(q)
    d = disk
    for it in range(60):
        # certified regions of q, tightened as the iteration proceeds
        try:
            qreals, qdisks = certified_roots(q, extra_prec=80 * (it + 1))
        except RuntimeError:
            return False
        iz = _identify_region(qreals, qdisks, d.cre, d.cim, d.rad)
        # image disk of w = 1/conj(z): center 1/conj(c), radius bound
        m2 = d.cre * d.cre + d.cim * d.cim
        mlow = qpoly.sqrt_lower(m2) - d.rad
        if mlow <= 0:
            d = refine_complex_root(coeffs, d, d.rad / 16)
            continue
        wre = d.cre / m2
        wim = d.cim / m2
        wrad = d.rad / (mlow * mlow)
        iw = _identify_region(qreals, qdisks, wre, wim, wrad)
        if iz is not None and iw is not None:
            return iz == iw
        d = refine_complex_root(coeffs, d, d.rad / 16)
    return False


def _to_int_poly(coeffs) -> tuple:
    from math import lcm
    den = lcm(*[Fraction(c).denominator for c in coeffs])
    return tuple(int(Fraction(c) * den) for c in coeffs)


def _identify_region(reals, disks, cre, cim, rad):
    """Which certified region contains the disk (cre, cim, rad), if unique."""
    hits = []
    for i, r in enumerate(reals):
        # treat the isolating interval as a thin box around the real axis
        if cim - rad <= 0 <= cim + rad or abs(cim) <= rad:
            if not (cre + rad < r.lo or cre - rad > r.hi):
                hits.append(("r", i))
    for i, dk in enumerate(disks):
        for sign in (1, -1):
            if not _disks_disjoint(cre, cim, rad, dk.cre, sign * dk.cim, dk.rad):
                hits.append(("c", i, sign))
    if len(hits) == 1:
        return hits[0]
    return None
