"""Graph-directed IFS approximation of the generalized Rauzy fractal.

Points are partial sums sum_{i<k} w_i beta^i over label paths of the
reversed automaton, stored exactly as integer vectors in the power basis;
per-place float or p-adic coordinates are projected on demand.  Membership
against a depth-k cloud runs as a pruned breadth-first search over the
path tree with certified per-place tail bounds, so clouds far beyond
enumerable size remain queryable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import padic
from .betaexpand import ParryData, classify_parry
from .embedding import EmbeddedPoint, RepresentationSpace
from .errors import NoPlottableAxes, OutOfRange
from .numberfield import FieldElement, PisotField
from .sofic import SoficAutomaton

_INT64_SAFE = 2**60


def _beta_matrix(field: PisotField) -> np.ndarray:
    """Row-vector action of multiplication by beta on the power basis."""
    r = field.degree
    m = np.zeros((r, r), dtype=np.int64)
    for t in range(r - 1):
        m[t, t + 1] = 1
    for j in range(r):
        m[r - 1, j] = -field.minpoly.coeffs[j]
    return m


def _beta_power_rows(field: PisotField, depth: int) -> np.ndarray:
    """Integer vectors of beta^j for j = 0..depth (power basis rows)."""
    r = field.degree
    rows = [[1] + [0] * (r - 1)]
    for _ in range(depth):
        prev = rows[-1]
        nxt = [0] * r
        carry = prev[-1]
        for i in range(r):
            nxt[i] = (prev[i - 1] if i else 0) - carry * field.minpoly.coeffs[i]
        rows.append(nxt)
        if max(abs(c) for c in nxt) > _INT64_SAFE:
            raise OverflowError(f"depth {depth} exceeds int64 coefficient range")
    return np.array(rows, dtype=np.int64)


def reversed_edges(aut: SoficAutomaton) -> dict[int, list[tuple[int, int]]]:
    """Outgoing (label, target) lists of the edge-reversed automaton."""
    out: dict[int, list[tuple[int, int]]] = {s: [] for s in range(1, aut.state_count + 1)}
    for a, lab, b in aut.edges:
        out[b].append((lab, a))
    for lst in out.values():
        lst.sort()
    return out


@dataclass
class FractalApprox:
    """Depth-indexed exact point clouds for the pieces R(1..d)."""

    space: RepresentationSpace
    automaton: SoficAutomaton
    depth: int
    piece_coeffs: list[np.ndarray]  # (n_i, r) int64, power-basis partial sums
    deduplicated: bool

    @property
    def piece_count(self) -> int:
        return len(self.piece_coeffs)

    @property
    def materialized(self) -> bool:
        return all(p is not None for p in self.piece_coeffs)

    def piece_size(self, i: int) -> int:
        return len(self.piece_coeffs[i - 1])

    def points(self, i: int) -> list[EmbeddedPoint]:
        """Piece i as embedded points (K_beta coordinates only)."""
        field = self.space.field
        out = []
        for row in self.piece_coeffs[i - 1]:
            x = field.element([int(c) for c in row])
            out.append(self.space.delta(x))
        return out

    def axes_info(self) -> list[tuple[str, int]]:
        """(label, place index) per plot axis, in place order."""
        out = []
        for idx, pl in enumerate(self.space.places):
            if pl.kind == "real":
                out.append((f"real{idx}", idx))
            elif pl.kind == "complex":
                out.append((f"re{idx}", idx))
                out.append((f"im{idx}", idx))
            else:
                out.append((f"padic{idx}(p={pl.local.p})", idx))
        return out

    def piece_axes(self, i: int, ndigits: int = 20) -> np.ndarray:
        """Float coordinate matrix of piece i over all plottable axes
        (p-adic places through the rendering projection)."""
        rows = self.piece_coeffs[i - 1]
        cols = []
        field = self.space.field
        r = field.degree
        for pl in self.space.places:
            if pl.kind in ("real", "complex"):
                root = complex(pl.root_re, pl.root_im)
                pows = np.array([root**t for t in range(r)])
                vals = rows.astype(np.float64) @ pows
                if pl.kind == "real":
                    cols.append(vals.real)
                else:
                    cols.append(vals.real)
                    cols.append(vals.imag)
            else:
                cols.append(_padic_render_column(pl.local, field, rows, ndigits))
        return np.column_stack(cols) if cols else np.zeros((len(rows), 0))


def _padic_reduction_matrix(place: padic.PadicPlace, field: PisotField,
                            cap_mod: int) -> np.ndarray:
    """beta^j -> K coordinate rows (r x m), entries reduced mod cap_mod."""
    r = field.degree
    rows = []
    power = place.unit_vector()
    for j in range(r):
        rows.append([int(c) % cap_mod for c in power])
        if j + 1 < r:
            power = place.mul_beta(power)
    return np.array(rows, dtype=np.int64)


def _padic_cap(place: padic.PadicPlace, bits: int = 30) -> int:
    cap = 1
    k = 0
    while cap * place.p < (1 << bits):
        cap *= place.p
        k += 1
    return min(k, place.prec)


def _padic_render_column(place: padic.PadicPlace, field: PisotField,
                         rows: np.ndarray, ndigits: int) -> np.ndarray:
    """Vectorized rendering projection for the certified place shapes."""
    p = place.p
    m = place.dim
    if m == 1:
        capk = min(_padic_cap(place, 40), place.prec)
        theta = int(place.beta_image[0]) % p**capk
        r = field.degree
        red = np.array([pow(theta, j, p**capk) for j in range(r)], dtype=np.int64)
        coords = (rows % p**capk) @ red % p**capk
        vals = np.zeros(len(rows))
        c = coords.copy()
        q = float(p)
        for i in range(min(ndigits, capk)):
            d = c % p
            vals += d.astype(np.float64) * q ** (-(i + 1))
            c //= p
        return vals
    M0 = field.minpoly.coeffs[0]
    if (place.e == m and place.z_val == Fraction(1, m)
            and abs(M0) == p and m == field.degree
            and tuple(int(c) for c in place.beta_image) ==
            tuple(1 if i == 1 else 0 for i in range(m))):
        # Eisenstein place generated by beta itself: K-coordinates are the
        # power-basis vectors; digits via exact integer uniformizer division
        mp = [int(c) for c in field.minpoly.coeffs]
        z = rows.astype(object).copy()
        vals = np.zeros(len(rows))
        q = float(p)
        for i in range(ndigits):
            d = np.array([int(c) % p for c in z[:, 0]], dtype=np.int64)
            vals += d.astype(np.float64) * q ** (-(i + 1))
            z[:, 0] = z[:, 0] - d.astype(object)
            z = _divide_by_uniformizer(z, mp, M0)
        return vals
    # generic fallback: per-point exact digits (small clouds only)
    out = np.zeros(len(rows))
    for idx, row in enumerate(rows):
        vec = place.embed_polynomial([int(c) for c in row])
        out[idx] = place.render_digits(vec, ndigits)
    return out


def _divide_by_uniformizer(z: np.ndarray, minpoly: list[int], M0: int) -> np.ndarray:
    """(a_0 + a_1 z + ...) / z for vectors with z | a_0, via
    z^-1 = -(z^(m-1) + c_{m-1} z^(m-2) + ... + c_1)/c_0 with |c_0| = p."""
    m = z.shape[1]
    out = np.zeros_like(z)
    a0 = z[:, 0]
    for j in range(m - 1):
        out[:, j] = z[:, j + 1]
    coeffs = [-minpoly[j + 1] for j in range(m - 1)] + [-1]
    for j in range(m):
        num = a0 * coeffs[j]
        q, r = np.divmod(num, M0)
        if np.any(r):
            raise ArithmeticError("non-integral uniformizer division")
        out[:, j] = out[:, j] + q
    return out


def iterate_ifs(space: RepresentationSpace, automaton: SoficAutomaton,
                depth: int, dedup: bool = False) -> FractalApprox:
    """Depth-k clouds by the self-affine set equations.

    Piece i at depth k+1 is the union over reversed-automaton edges
    i -> j (label w0) of (beta * piece j at depth k) + w0; equivalently the
    set of partial sums over length-(k+1) label paths from state a_i.
    """
    field = space.field
    r = field.degree
    d = automaton.state_count
    bmat = _beta_matrix(field)
    edges = reversed_edges(automaton)
    pieces = [np.zeros((1, r), dtype=np.int64) for _ in range(d)]
    _beta_power_rows(field, depth)  # int64 range guard
    for _ in range(depth):
        new = []
        for i in range(1, d + 1):
            chunks = []
            for lab, j in edges[i]:
                block = pieces[j - 1] @ bmat
                if lab:
                    block = block.copy()
                    block[:, 0] += lab
                chunks.append(block)
            arr = np.concatenate(chunks) if chunks else np.zeros((0, r), np.int64)
            if dedup and len(arr):
                arr = np.unique(arr, axis=0)
            new.append(arr)
        pieces = new
    return FractalApprox(space, automaton, depth, pieces, dedup)


def virtual_approx(space: RepresentationSpace, automaton: SoficAutomaton,
                   depth: int) -> FractalApprox:
    """Depth-k cloud handle without materialized points.

    Membership queries enumerate lazily through the pruned search, so deep
    clouds (beyond memory) stay usable; points()/piece_axes() require a
    materialized approximation from iterate_ifs.
    """
    d = automaton.state_count
    return FractalApprox(space, automaton, depth, [None] * d, False)


def enumerate_paths(automaton: SoficAutomaton, state: int, depth: int):
    """All label words of length `depth` read from `state` in the reversed
    automaton (test oracle for the IFS construction)."""
    edges = reversed_edges(automaton)
    words: list[tuple[int, ...]] = []

    def rec(s: int, acc: tuple[int, ...]):
        if len(acc) == depth:
            words.append(acc)
            return
        for lab, t in edges[s]:
            rec(t, acc + (lab,))

    rec(state, ())
    return words


# ---------------------------------------------------------------------------
# Cylinder heights and the two-sided set


def cylinder_heights(parry: ParryData, field: PisotField) -> list[FieldElement]:
    """h_i = value of the maximal admissible future from state a_i, which is
    the (i-1)-th beta-transform of 1 along the expansion of 1."""
    heights = [field.from_int(1)]
    z = field.from_int(1)
    for i in range(1, parry.d):
        y = z.mul_beta()
        z = y - y.floor()
        heights.append(z)
    return heights


@dataclass
class CylinderSet:
    pieces: FractalApprox
    heights: list[FieldElement]

    @property
    def depth(self) -> int:
        return self.pieces.depth


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: str  # "In" | "Out" | "BoundaryUnknown"
    distance: float
    depth: int
    tol_in: float
    tol_out: float


# ---------------------------------------------------------------------------
# Pruned cloud-distance queries


class _PlaceEngine:
    """Per-place vectorized distances from a fixed query point to exact
    partial-sum vectors."""

    def __init__(self, space: RepresentationSpace, query: EmbeddedPoint):
        field = space.field
        r = field.degree
        self.arch_roots = []
        self.arch_query = []
        for pl, q in zip(space.arch_places, query.arch):
            root = complex(pl.root_re, pl.root_im)
            self.arch_roots.append(np.array([root**t for t in range(r)]))
            self.arch_query.append(q)
        self.pads = []
        for pl, vec in zip(space.padic_places, query.padics):
            place = pl.local
            cap = _padic_cap(place)
            capmod = place.p ** cap
            # query vector as integer numerators over a p-power denominator;
            # everything below fits int64 by the _padic_cap bit budget
            t = max((padic.val_p(c.denominator, place.p) for c in vec), default=0)
            den = place.p ** t
            while capmod * den >= 2**61 and cap > 4:
                cap -= 1
                capmod //= place.p
            red = _padic_reduction_matrix(place, field, capmod)
            nums = np.array([int(c * den) % (capmod * den) for c in vec],
                            dtype=np.int64)
            zvals = [float(place.z_val * j) for j in range(place.dim)]
            self.pads.append((place, cap, capmod, red, nums, den, t, zvals))

    def place_distances(self, rows: np.ndarray):
        """List of per-place float distance arrays for the given rows."""
        out = []
        for root_pows, q in zip(self.arch_roots, self.arch_query):
            vals = rows @ root_pows
            out.append(np.abs(vals - q))
        for place, cap, capmod, red, nums, den, t, zvals in self.pads:
            coords = (rows % capmod) @ red % capmod
            dist = np.zeros(len(rows))
            capped = cap + t
            for j in range(place.dim):
                delta = (nums[j] - den * coords[:, j]) % (capmod * den)
                v = _vec_val_p(delta, place.p, capped) - t + zvals[j]
                dj = np.where(v >= cap, 0.0, float(place.p) ** (-v))
                dist = np.maximum(dist, dj)
            out.append(dist)
        return out


def _vec_val_p(arr: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Elementwise p-adic valuation of an int64 array, capped at `cap`."""
    v = np.zeros(len(arr))
    rem = arr.copy()
    zero = rem == 0
    v[zero] = cap
    for _ in range(cap):
        div = (~zero) & (v < cap) & (rem % p == 0)
        if not div.any():
            break
        rem[div] //= p
        v[div] += 1
    return v


def cloud_distance(space: RepresentationSpace, automaton: SoficAutomaton,
                   query: EmbeddedPoint, piece: int, depth: int,
                   early_in: float = -1.0, early_out: float = np.inf,
                   node_limit: int = 5_000_000) -> float:
    """Distance (max-metric over K_beta places) from `query` to the depth-k
    point cloud of piece `piece`, by pruned breadth-first search.

    Identical in value to flat enumeration; subtree pruning uses the exact
    per-place tail bounds.  Early exits: returns an upper bound <= early_in
    or a lower bound > early_out as soon as either is certified.
    """
    field = space.field
    r = field.degree
    engine = _PlaceEngine(space, query)
    pow_rows = _beta_power_rows(field, depth)
    bf = field.beta_floor
    arch_mods = [pl.modulus for pl in space.arch_places]
    pad_mods = [pl.modulus for pl in space.padic_places]
    edges = reversed_edges(automaton)

    frontier = {piece: np.zeros((1, r), dtype=np.int64)}
    best_upper = np.inf
    for level in range(depth):
        arch_tail = [bf * m**level / (1.0 - m) for m in arch_mods]
        pad_tail = [m**level for m in pad_mods]
        # evaluate bounds on the current frontier
        lower_min = np.inf
        pruned = {}
        total = 0
        for state, rows in frontier.items():
            if not len(rows):
                continue
            dists = engine.place_distances(rows)
            lower = np.zeros(len(rows))
            upper = np.zeros(len(rows))
            k = 0
            for da, tail in zip(dists[: len(arch_mods)], arch_tail):
                lower = np.maximum(lower, da - tail)
                upper = np.maximum(upper, da + tail)
                k += 1
            for dp, tail in zip(dists[len(arch_mods):], pad_tail):
                # ultrametric: beyond the tail the distance is exact
                lower = np.maximum(lower, np.where(dp > tail, dp, 0.0))
                upper = np.maximum(upper, np.maximum(dp, tail))
            lower_min = min(lower_min, float(lower.min()) if len(lower) else np.inf)
            best_upper = min(best_upper, float(upper.min()) if len(upper) else np.inf)
            keep = lower <= min(best_upper, early_out) * (1 + 1e-12)
            rows = rows[keep]
            if len(rows):
                pruned[state] = rows
                total += len(rows)
        if best_upper <= early_in:
            return best_upper
        if lower_min > early_out:
            return lower_min
        if total > node_limit:
            raise MemoryError(f"membership frontier exceeded {node_limit} nodes")
        # expand one level
        row_j = pow_rows[level]
        nxt: dict[int, list[np.ndarray]] = {}
        for state, rows in pruned.items():
            for lab, target in edges[state]:
                block = rows if lab == 0 else rows + lab * row_j
                nxt.setdefault(target, []).append(block)
        frontier = {}
        for state, blocks in nxt.items():
            arr = np.concatenate(blocks)
            if len(arr) > 1024:
                arr = np.unique(arr, axis=0)
            frontier[state] = arr
    # final exact distances
    best = np.inf
    for state, rows in frontier.items():
        if not len(rows):
            continue
        dists = engine.place_distances(rows)
        total = np.zeros(len(rows))
        for dcol in dists:
            total = np.maximum(total, dcol)
        best = min(best, float(total.min()))
    return best


def diameter_bound(space: RepresentationSpace, depth: int) -> float:
    return space.tail_bound(depth)


def membership(cyl: CylinderSet, pt: EmbeddedPoint,
               tol: Optional[tuple[float, float]] = None) -> MembershipVerdict:
    """Two-threshold membership of a point of K_beta x R in the two-sided
    set union_i (-piece_i) x [0, h_i).

    The minus sign of the two-sided representation is applied here: the
    piece clouds are stored without it, so the query is the negated
    K_beta part.
    """
    if pt.real_coord is None:
        raise OutOfRange("membership needs a point with a real coordinate")
    approx = cyl.pieces
    space = approx.space
    depth = approx.depth
    diam = diameter_bound(space, depth)
    tol_in, tol_out = tol if tol is not None else (diam, 3.0 * diam)

    query = space.neg(pt)
    eligible = []
    for i, h in enumerate(cyl.heights, start=1):
        if pt.real_exact is not None:
            ok = pt.real_exact.sign() >= 0 and pt.real_exact < h
        else:
            ok = -1e-12 <= pt.real_coord < float(h)
        if ok:
            eligible.append(i)
    if not eligible:
        return MembershipVerdict("Out", np.inf, depth, tol_in, tol_out)
    best = np.inf
    for i in eligible:
        d = cloud_distance(space, approx.automaton, query, i, depth,
                           early_in=tol_in, early_out=tol_out)
        best = min(best, d)
        if best <= tol_in:
            break
    if best <= tol_in:
        verdict = "In"
    elif best >= tol_out:
        verdict = "Out"
    else:
        verdict = "BoundaryUnknown"
    return MembershipVerdict(verdict, best, depth, tol_in, tol_out)


# ---------------------------------------------------------------------------
# Box-counting measures and rendering


def measure_estimate(approx: FractalApprox, grid_resolution: float) -> list[float]:
    """Occupied cells times cell volume per piece, over all plottable axes."""
    out = []
    for i in range(1, approx.piece_count + 1):
        coords = approx.piece_axes(i)
        if coords.shape[1] == 0:
            out.append(0.0)
            continue
        cells = np.unique(np.floor(coords / grid_resolution).astype(np.int64),
                          axis=0)
        out.append(len(cells) * grid_resolution ** coords.shape[1])
    return out


def render(approx: FractalApprox, axes: Optional[Sequence[int]] = None,
           size: int = 256, pieces: Optional[Sequence[int]] = None):
    """(raster, cloud) where raster is an indexed grayscale array with one
    shade per piece and cloud the per-piece float coordinate table."""
    labels = approx.axes_info()
    naxes = len(labels)
    if naxes < 2:
        raise NoPlottableAxes("fewer than two plottable axes")
    if axes is None:
        axes = (0, 1)
    if len(axes) != 2 or any(a < 0 or a >= naxes for a in axes):
        raise NoPlottableAxes(f"axes {axes} not available (have {naxes})")
    which = pieces if pieces is not None else range(1, approx.piece_count + 1)
    tables = {i: approx.piece_axes(i) for i in which}
    allc = np.concatenate([t for t in tables.values() if len(t)])
    ax, ay = axes
    xmin, xmax = allc[:, ax].min(), allc[:, ax].max()
    ymin, ymax = allc[:, ay].min(), allc[:, ay].max()
    xspan = max(xmax - xmin, 1e-12)
    yspan = max(ymax - ymin, 1e-12)
    raster = np.zeros((size, size), dtype=np.int32)
    for i, table in tables.items():
        if not len(table):
            continue
        xs = np.clip(((table[:, ax] - xmin) / xspan * (size - 1)).astype(int), 0, size - 1)
        ys = np.clip(((table[:, ay] - ymin) / yspan * (size - 1)).astype(int), 0, size - 1)
        raster[ys, xs] = i
    return raster, tables


def raster_to_pgm(raster: np.ndarray, maxval: Optional[int] = None) -> str:
    """Plain (P2) portable graymap."""
    h, w = raster.shape
    mv = maxval if maxval is not None else max(1, int(raster.max()))
    lines = ["P2", f"{w} {h}", str(mv)]
    for row in raster[::-1]:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def cloud_text(approx: FractalApprox, tables: dict[int, np.ndarray]) -> str:
    """Point-cloud file: header lines then one sorted record per point."""
    from .numberfield import format_descriptor

    header = [
        f"# field: {format_descriptor(approx.space.field)}",
        f"# depth: {approx.depth}",
        f"# places: {', '.join(str(p) for p in approx.space.places)}",
        f"# axes: {', '.join(lbl for lbl, _ in approx.axes_info())}",
    ]
    lines = []
    for i, table in sorted(tables.items()):
        recs = sorted(
            "\t".join(f"{v:.12g}" for v in row) for row in table
        )
        lines.extend(f"{i}\t{rec}" for rec in recs)
    return "\n".join(header + lines) + "\n"
