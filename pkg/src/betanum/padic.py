"""Fixed-precision p-adic places of a Pisot field.

For each prime p dividing the norm of beta, the positive-valuation part of
the minimal polynomial is split off by a coprime Hensel lift and analysed
through its Newton polygon.  Certified cases: linear factors, totally
ramified factors of pure fractional slope, and unramified factors reached
through an integral-slope substitution; anything wilder raises
UnsupportedRamification instead of degrading silently.

A local field K = Q_p[z]/(M) stores its monic modulus to absolute
precision p^prec; elements are coefficient vectors of Fractions whose
denominators are powers of p (other denominators are absorbed by modular
inversion).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import PrecisionExhausted, UnsupportedRamification

# ---------------------------------------------------------------------------
# polynomial helpers modulo an integer


def _pnorm(poly, m):
    out = [c % m for c in poly]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _pmul(a, b, m):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return _pnorm(out, m)


def _padd(a, b, m):
    n = max(len(a), len(b))
    return _pnorm([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m
                   for i in range(n)], m)


def _psub(a, b, m):
    n = max(len(a), len(b))
    return _pnorm([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m
                   for i in range(n)], m)


def _pdivmod_monic(a, b, m):
    """Division by a monic polynomial, coefficients mod m."""
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if da < db:
        return [0], _pnorm(a, m)
    q = [0] * (da - db + 1)
    for shift in range(da - db, -1, -1):
        c = a[shift + db] % m
        if c:
            q[shift] = c
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bc) % m
    return _pnorm(q, m), _pnorm(a[:db] if db else [0], m)


def _gf_inv(x, p):
    return pow(x % p, p - 2, p) if p > 2 else x % p


def _gf_extgcd(a, b, p):
    """(g, s, t) with s*a + t*b = g (monic) over F_p."""
    r0, r1 = _pnorm(a, p), _pnorm(b, p)
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while r1 != [0]:
        lead = _gf_inv(r1[-1], p)
        r1m = _pnorm([c * lead % p for c in r1], p)
        q, r = _pdivmod_monic(r0, r1m, p)
        q = _pnorm([c * lead % p for c in q], p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    lead = _gf_inv(r0[-1], p)
    mk = lambda u: _pnorm([c * lead % p for c in u], p)
    return mk(r0), mk(s0), mk(t0)


def hensel_pair_lift(P, g0, h0, p, nsteps):
    """Lift P = g0*h0 (mod p), gcd(g0,h0)=1, g0 monic, to modulus p^nsteps.

    Returns (G, H) monic*cofactor with P = G*H (mod p^nsteps), G = g0 and
    H = h0 (mod p), deg G = deg g0.
    """
    _, a, b = _gf_extgcd(g0, h0, p)  # a*g0 + b*h0 = 1 (mod p)
    G, H = _pnorm(g0, p), _pnorm(h0, p)
    modulus = p
    for _ in range(nsteps - 1):
        newmod = modulus * p
        prod = _pmul(G, H, newmod)
        diff = _psub(_pnorm(P, newmod), prod, newmod)
        e = [(c // modulus) % p for c in diff]
        e = _pnorm(e, p)
        # solve dG*H + dH*G = e (mod p) with deg dG < deg g0
        q, dG = _pdivmod_monic(_pmul(b, e, p), g0, p)
        dH = _padd(_pmul(a, e, p), _pmul(q, h0, p), p)
        G = _padd(G, [c * modulus % newmod for c in dG], newmod)
        H = _padd(H, [c * modulus % newmod for c in dH], newmod)
        modulus = newmod
    return G, H


def val_p(n: int, p: int, cap: int = 10**9) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if v >= cap:
            break
    return v


def val_p_fraction(q: Fraction, p: int, cap: int = 10**9) -> int:
    if q == 0:
        return cap
    return val_p(q.numerator, p, cap) - val_p(q.denominator, p, cap)


def newton_polygon_slopes(poly, p):
    """Lower-hull slopes of {(i, val_p(c_i))} from i=0 to deg, as a list of
    (slope: Fraction, length: int), slopes increasing."""
    pts = [(i, val_p(c, p)) for i, c in enumerate(poly)]
    deg = len(poly) - 1
    hull = [(0, pts[0][1])]
    i = 0
    while i < deg:
        best = None
        for j in range(i + 1, deg + 1):
            if pts[j][1] >= 10**9:
                continue
            s = Fraction(pts[j][1] - hull[-1][1], j - i)
            if best is None or s < best[0] or (s == best[0] and j > best[1]):
                best = (s, j)
        if best is None:
            break
        hull.append((best[1], pts[best[1]][1]))
        i = best[1]
    out = []
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        out.append((Fraction(v0 - v1, i1 - i0), i1 - i0))
    return out


# ---------------------------------------------------------------------------
# mod-p factor utilities (degrees <= 3 suffice for the certified cases)

_ROOT_SEARCH_LIMIT = 2 * 10**6


def _gf_roots(poly, p):
    if p > _ROOT_SEARCH_LIMIT:
        raise UnsupportedRamification(f"prime {p} too large for residue factoring")
    out = []
    for a in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * a + c) % p
        if acc == 0:
            out.append(a)
    return out


def _gf_is_squarefree(poly, p):
    d = _pnorm([i * c % p for i, c in enumerate(poly) if i > 0] or [0], p)
    g, _, _ = _gf_extgcd(poly, d, p)
    return len(g) == 1


def _gf_factor_unit(poly, p):
    """Distinct irreducible factors of a squarefree poly over F_p.

    Handles degree <= 3 completely (linear peeling plus the no-root
    criterion); degree >= 4 non-linear remainders raise.
    """
    poly = _pnorm(poly, p)
    lead = _gf_inv(poly[-1], p)
    poly = _pnorm([c * lead % p for c in poly], p)
    factors = []
    for a in _gf_roots(poly, p):
        factors.append([-a % p, 1])
        poly, rem = _pdivmod_monic(poly, [-a % p, 1], p)
        assert rem == [0]
    if len(poly) - 1 >= 1:
        if len(poly) - 1 > 3:
            raise UnsupportedRamification(
                f"degree-{len(poly) - 1} residue factor not certified")
        factors.append(poly)  # no roots and degree 2 or 3: irreducible
    return factors


# ---------------------------------------------------------------------------
# local fields


@dataclass(frozen=True)
class PadicPlace:
    """Completion K = Q_p[z]/(M) receiving beta with |beta| < 1."""

    p: int
    modulus: tuple[int, ...]          # monic, coefficients mod p^prec
    prec: int                         # absolute coefficient precision
    e: int                            # ramification index
    f: int                            # residue degree
    z_val: Fraction                   # valuation of the basis generator z
    beta_image: tuple[Fraction, ...]  # image of beta as a vector over Q_p
    beta_val: Fraction                # valuation of the image (positive)

    def __post_init__(self):
        m = len(self.modulus) - 1
        pk = self.p ** self.prec
        rows = [tuple(1 if i == k else 0 for i in range(m)) for k in range(m)]
        for _ in range(m - 1):
            rows.append(self._shift(rows[-1], pk))
        object.__setattr__(self, "_rows", tuple(rows))
        pows = [self.unit_vector()]
        for _ in range(m):
            pows.append(self.mul(pows[-1], self.beta_image))
        object.__setattr__(self, "_beta_pows", tuple(pows))

    @property
    def dim(self) -> int:
        return len(self.modulus) - 1

    def _shift(self, row, pk):
        m = self.dim
        carry = row[-1]
        out = [0] + list(row[:-1])
        if carry:
            for i in range(m):
                out[i] = (out[i] - carry * self.modulus[i]) % pk
        return tuple(out)

    # -- element arithmetic (vectors of Fractions over the z-power basis) --

    def zero_vector(self):
        return tuple(Fraction(0) for _ in range(self.dim))

    def unit_vector(self):
        return tuple(Fraction(1 if i == 0 else 0) for i in range(self.dim))

    def _red(self, c: Fraction) -> Fraction:
        """Canonical representative mod p^prec keeping the p-denominator."""
        num, den = c.numerator, c.denominator
        t = val_p(den, self.p)
        v = den // (self.p ** t)
        mod = self.p ** (self.prec + t)
        if v != 1:
            num = num * pow(v, -1, mod)
        return Fraction(num % mod, self.p ** t)

    def reduce(self, vec):
        return tuple(self._red(Fraction(c)) for c in vec)

    def add(self, a, b):
        return tuple(self._red(x + y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self._red(x - y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self._red(-x) for x in a)

    def scale(self, a, c):
        c = Fraction(c)
        return tuple(self._red(x * c) for x in a)

    def mul(self, a, b):
        m = self.dim
        conv = [Fraction(0)] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = [Fraction(0)] * m
        for k, ck in enumerate(conv):
            if ck:
                row = self._rows[k]
                for i in range(m):
                    if row[i]:
                        out[i] += ck * row[i]
        return tuple(self._red(c) for c in out)

    def mul_beta(self, a):
        return self.mul(a, self.beta_image)

    def valuation(self, vec) -> Fraction | None:
        """min_j val_p(c_j) + j * z_val; None for the zero vector.

        Valid because the per-term valuations are pairwise distinct mod 1
        (totally ramified case) or the residue basis is independent
        (unramified case).
        """
        best = None
        for j, c in enumerate(vec):
            if c == 0:
                continue
            v = Fraction(val_p_fraction(Fraction(c), self.p)) + j * self.z_val
            if best is None or v < best:
                best = v
        return best

    def distance(self, a, b) -> float:
        v = self.valuation(self.sub(a, b))
        if v is None:
            return 0.0
        cap = Fraction(self.prec)
        if v > cap:
            v = cap
        return float(self.p) ** float(-v)

    def embed_polynomial(self, coeffs, den: int = 1):
        """Image of (sum coeffs_i beta^i) / den in K."""
        out = self.zero_vector()
        power = self.unit_vector()
        for i, c in enumerate(coeffs):
            if c:
                out = self.add(out, self.scale(power, c))
            if i + 1 < len(coeffs):
                power = self.mul_beta(power)
        if den != 1:
            t = val_p(den, self.p)
            if t > self.prec // 2:
                raise PrecisionExhausted(
                    f"denominator p-valuation {t} beyond precision budget")
            out = self.scale(out, Fraction(1, den))
        return out

    # -- uniformizer digit expansion (rendering + serialization) -----------

    def _uniformizer_inverse(self):
        if self.e == 1:
            return None  # uniformizer is p; handled separately
        if self.z_val != Fraction(1, self.e):
            raise UnsupportedRamification(
                "digit rendering needs a slope-1/e uniformizer")
        # z^-1 = -(z^(m-1) + M_{m-1} z^(m-2) + ... + M_1) / M_0
        m = self.dim
        vec = [Fraction(0)] * m
        for j in range(1, m):
            vec[j - 1] = Fraction(-self.modulus[j])
        vec[m - 1] = Fraction(-1)
        return tuple(self._red(c / self.modulus[0]) for c in vec)

    def digits(self, vec, n: int) -> tuple[int, list[int]]:
        """(offset, digits): vec = sum_i d_i * u^(i + offset) with u the
        uniformizer and d_i in [0, p^f)."""
        v = self.valuation(vec)
        if v is None:
            return 0, [0] * n
        offset = (v * self.e).__floor__()
        q = self.p ** self.f
        out = []
        cur = vec
        if self.e == 1:
            # shift by p^-offset
            if offset:
                cur = self.scale(cur, Fraction(1, self.p ** offset)
                                 if offset > 0 else Fraction(self.p ** (-offset)))
            for _ in range(n):
                res = [int(c) % self.p if c.denominator == 1 else None for c in cur]
                if any(r is None for r in res):
                    raise PrecisionExhausted("non-integral residue in digits")
                d = sum(r * self.p ** j for j, r in enumerate(res))
                out.append(d)
                cur = self.scale(self.sub(cur, tuple(Fraction(r) for r in res)),
                                 Fraction(1, self.p))
            return offset, out
        zinv = self._uniformizer_inverse()
        if offset:
            shift = zinv if offset > 0 else tuple(
                Fraction(1 if i == 1 else 0) for i in range(self.dim))
            for _ in range(abs(offset)):
                cur = self.mul(cur, shift)
        for _ in range(n):
            c0 = cur[0]
            if c0.denominator != 1:
                raise PrecisionExhausted("non-integral residue in digits")
            d = int(c0) % self.p
            out.append(d)
            delta = list(cur)
            delta[0] = delta[0] - d
            cur = self.mul(tuple(delta), zinv)
        return offset, out

    def render_digits(self, vec, n: int) -> float:
        """Rendering projection sum d_i q^-(i+offset)-1, q the residue size."""
        offset, ds = self.digits(vec, n)
        q = float(self.p ** self.f)
        return sum(d * q ** (-(i + offset) - 1) for i, d in enumerate(ds))

    def contraction_modulus(self) -> Fraction:
        """Haar scaling of multiplication by beta: p^(-e*f*val(beta))."""
        expo = self.e * self.f * self.beta_val
        assert expo.denominator == 1
        return Fraction(1, self.p ** int(expo))


# ---------------------------------------------------------------------------
# place analysis


def padic_places(minpoly_coeffs, p: int, prec: int) -> list[PadicPlace]:
    """All completions above p in which beta has positive valuation."""
    P = [int(c) for c in minpoly_coeffs]
    deg = len(P) - 1
    k = 0
    while k <= deg and P[k] % p == 0:
        k += 1
    if k == 0:
        return []
    if k > deg:
        raise UnsupportedRamification("polynomial vanishes mod p (not monic?)")
    lift_steps = prec + 2
    if k == deg:
        g = _pnorm(P, p ** lift_steps)
    else:
        g0 = [0] * k + [1]
        h0 = _pnorm([c for c in P[k:]], p)
        g, _ = hensel_pair_lift(P, g0, h0, p, lift_steps)
    out = []
    for modulus, beta_img, z_val, e, f, sub_prec in _analyze_positive(
            g, p, lift_steps):
        place = PadicPlace(
            p=p,
            modulus=tuple(modulus),
            prec=min(prec, sub_prec),
            e=e,
            f=f,
            z_val=z_val,
            beta_image=tuple(Fraction(c) for c in beta_img),
            beta_val=_vec_val(beta_img, p, z_val),
        )
        out.append(place)
    return out


def _vec_val(vec, p, z_val) -> Fraction:
    best = None
    for j, c in enumerate(vec):
        c = Fraction(c)
        if c == 0:
            continue
        v = Fraction(val_p_fraction(c, p)) + j * z_val
        if best is None or v < best:
            best = v
    return best


def _analyze_positive(g, p, prec):
    """Split a monic factor with all roots of positive valuation into
    certified places.

    Yields (modulus, beta_image_vector, z_val, e, f, prec); beta_image is
    the image of the analysed root in Q_p[z]/(modulus).
    """
    g = _pnorm(g, p ** prec)
    deg = len(g) - 1
    if deg == 1:
        theta = (-g[0]) % p ** prec
        return [((0, 1), (Fraction(theta),), Fraction(0), 1, 1, prec)]
    slopes = newton_polygon_slopes(g, p)
    if len(slopes) == 1:
        slope, length = slopes[0]
        assert length == deg
        if slope.denominator == deg:
            # pure fractional slope spanning the degree: irreducible,
            # totally ramified; the root itself is (a power of) a uniformizer
            return [(tuple(g), _unit_vec(deg, 1), slope, deg, 1, prec)]
        if slope.denominator == 1:
            return _analyze_integral_slope(g, p, prec, int(slope))
        raise UnsupportedRamification(
            f"mixed slope {slope} over degree {deg} not certified")
    # multiple slopes: peel the smallest if it is integral
    smin = min(s for s, _ in slopes)
    if smin.denominator != 1:
        raise UnsupportedRamification(
            "fractional lowest slope in a multi-slope polygon")
    return _analyze_integral_slope(g, p, prec, int(smin))


def _analyze_integral_slope(g, p, prec, v):
    """Substitute y = x / p^v and split unit part from deeper part."""
    deg = len(g) - 1
    drop = v * deg
    if prec - drop < 8:
        raise PrecisionExhausted("precision exhausted by slope substitution")
    nprec = prec - drop
    pk = p ** nprec
    h = []
    for i, c in enumerate(g):
        scaled = c * p ** (v * i)
        num, rem = divmod(scaled, p ** drop)
        if rem:
            raise UnsupportedRamification("slope substitution not integral")
        h.append(num % pk)
    h = _pnorm(h, pk)
    # trailing part = roots with valuation > v; unit part = valuation exactly v
    k = 0
    while k < len(h) - 1 and h[k] % p == 0:
        k += 1
    out = []
    if k == 0:
        unit, deeper = h, None
    elif k == len(h) - 1:
        unit, deeper = None, h
    else:
        g0 = [0] * k + [1]
        h0 = _pnorm(h[k:], p)
        deeper, unit = hensel_pair_lift(h, g0, h0, p, nprec)
    if unit is not None:
        out.extend(_unit_part_places(unit, p, nprec, v))
    if deeper is not None:
        for modulus, img, z_val, e, f, sp in _analyze_positive(deeper, p, nprec):
            scaled = tuple(Fraction(c) * p ** v for c in img)
            out.append((modulus, scaled, z_val, e, f, sp))
    return out


def _unit_part_places(u, p, prec, v):
    """Places for a factor with unit roots, after the p^v substitution."""
    u = _pnorm(u, p ** prec)
    if not _gf_is_squarefree(u, p):
        raise UnsupportedRamification(
            "repeated residue factor (wild ramification) not certified")
    residue_factors = _gf_factor_unit(u, p)
    lifted = _lift_factorization(u, residue_factors, p, prec)
    out = []
    for F in lifted:
        m = len(F) - 1
        if m == 1:
            theta = (-F[0] * p ** v) % p ** prec
            out.append(((0, 1), (Fraction(theta),), Fraction(0), 1, 1, prec))
        else:
            img = tuple(Fraction(c) * p ** v for c in _unit_vec(m, 1))
            out.append((tuple(F), img, Fraction(0), 1, m, prec))
    return out


def _lift_factorization(u, residue_factors, p, prec):
    if len(residue_factors) == 1:
        return [_pnorm(u, p ** prec)]
    f0 = residue_factors[0]
    rest = [1]
    for f in residue_factors[1:]:
        rest = _pmul(rest, f, p)
    F0, R = hensel_pair_lift(u, f0, rest, p, prec)
    return [F0] + _lift_factorization(R, residue_factors[1:], p, prec)


def _unit_vec(m, j):
    return tuple(Fraction(1 if i == j else 0) for i in range(m))


def prime_divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out
