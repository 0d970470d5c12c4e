"""Natural extension of the beta-transformation and the purely-periodic
expansion deciders.

Two independent routes: the exact decider iterates the beta-transformation
on canonical field elements until the orbit closes; the geometric decider
embeds (delta(x), x) and tests it against the two-sided attractor through
the pruned cloud search.  The cross-check harness runs both over a range
of rationals (plus seeded irrational elements) and classifies agreement;
a disagreement with a decisive geometric verdict is an invariant breach.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from . import betaexpand, rauzy, sofic
from .betaexpand import ParryData
from .embedding import EmbeddedPoint, RepresentationSpace
from .errors import FloorUndecidable, OutOfRange
from .numberfield import FieldElement, PisotField


@dataclass(frozen=True)
class NaturalExtensionState:
    point: EmbeddedPoint  # K_beta coordinates plus a real coordinate in [0,1)

    def __post_init__(self):
        if self.point.real_coord is None:
            raise OutOfRange("natural extension state needs a real coordinate")


@dataclass(frozen=True)
class PeriodicityReport:
    x: FieldElement
    exact_verdict: bool
    exact_period: int
    geometric: rauzy.MembershipVerdict
    agreement: str  # "Agree" | "GeometricUndecided" | "CONFLICT"

    @property
    def conflict(self) -> bool:
        return self.agreement == "CONFLICT"


def natural_extension_step(space: RepresentationSpace,
                           s: NaturalExtensionState) -> NaturalExtensionState:
    """(a, b) -> (h(a) - [beta b] delta(1), beta b - [beta b])."""
    pt = s.point
    field = space.field
    if pt.real_exact is not None:
        bb = pt.real_exact.mul_beta()
        n = bb.floor()
        new_real = bb - n
        new_real_f = float(new_real)
    else:
        bb = pt.real_coord * float(field.dominant.mid)
        err = abs(pt.real_coord) * 1e-12 + 1e-12
        import math

        if math.floor(bb - err) != math.floor(bb + err):
            raise FloorUndecidable("real coordinate too close to an integer")
        n = math.floor(bb)
        new_real = None
        new_real_f = bb - n
    moved = space.h_beta(pt)
    if n:
        shift = space.delta(field.from_int(-n))
        moved = space.add(moved, shift)
    out = EmbeddedPoint(moved.arch, moved.padics, moved.arch_err,
                        new_real_f, new_real, moved.source)
    return NaturalExtensionState(out)


def two_sided_point(space: RepresentationSpace, left: Sequence[int],
                    right_pre: Sequence[int], right_per: Sequence[int]) -> EmbeddedPoint:
    """phi-tilde of a two-sided word: (-delta(sum w_i beta^i), value(u)).

    `left` is the finite past (w_0 first), the future is the eventually
    periodic stream right_pre.(right_per)^inf evaluated exactly.
    """
    field = space.field
    acc = field.zero()
    for i in range(len(left) - 1, -1, -1):
        acc = acc.mul_beta() + left[i]
    x = betaexpand.value_of_word(field, right_pre, right_per)
    pt = space.neg(space.delta(acc))
    return EmbeddedPoint(pt.arch, pt.padics, pt.arch_err, float(x), x, pt.source)


def shift_two_sided(left: Sequence[int], right_pre: Sequence[int],
                    right_per: Sequence[int]):
    """One shift step: the first future digit moves into the past."""
    pre = list(right_pre) or None
    if pre:
        head, rest_pre, rest_per = pre[0], pre[1:], list(right_per)
    else:
        per = list(right_per) or [0]
        head, rest_pre, rest_per = per[0], [], per[1:] + [per[0]]
    return [head] + list(left), rest_pre, rest_per


@dataclass(frozen=True)
class CommutationReport:
    samples: int
    excluded: int
    max_shift_deviation: float
    max_conjugacy_deviation: float
    max_backward_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(self.max_shift_deviation, self.max_conjugacy_deviation,
                   self.max_backward_deviation)


def _random_two_sided_word(parry: ParryData, aut: sofic.SoficAutomaton,
                           rng: random.Random, past_len: int, fut_len: int):
    """Admissible (finite past, eventually periodic future) pair: a backward
    walk and a forward walk in the automaton glued at a common state."""
    rev = rauzy.reversed_edges(aut)
    state = rng.randrange(1, aut.state_count + 1)
    left = []
    s = state
    for _ in range(past_len):
        lab, t = rng.choice(rev[s])
        left.append(lab)
        s = t
    # forward walk, then pump the trailing state cycle as the period
    s = state
    labels = []
    states = [s]
    for _ in range(fut_len):
        lab, t = rng.choice([(l, b) for (a, l, b) in aut.edges if a == s])
        labels.append(lab)
        states.append(t)
        s = t
    if states[-1] in states[:-1]:
        j = states.index(states[-1])
        pre, per = labels[:j], labels[j:]
    else:
        pre, per = labels, [0]
    return left, pre, per


def check_commutation(space: RepresentationSpace, samples: int = 1000,
                      tol: float = 1e-8, seed: int = 20240901,
                      past_len: int = 24) -> CommutationReport:
    """Deviations of the shift/natural-extension commutation relations and
    the explicit backward step on seeded admissible two-sided words.

    Futures equal to the quasi-greedy expansion of 1 are excluded, matching
    the hypothesis of the forward relation.
    """
    field = space.field
    parry = betaexpand.classify_parry(field)
    aut = sofic.build_automaton(parry)
    rng = random.Random(seed)
    max_shift = max_conj = max_back = 0.0
    excluded = 0
    done = 0
    one = field.from_int(1)
    while done < samples:
        left, pre, per = _random_two_sided_word(parry, aut, rng, past_len, 12)
        word = betaexpand.EventuallyPeriodicWord(tuple(pre), tuple(per))
        if (word.preperiod, word.period) == \
                (parry.d_star.preperiod, parry.d_star.period):
            excluded += 1
            continue
        # the relation's hypothesis: the shifted future must stay below 1,
        # i.e. the tail after the first digit is not the quasi-greedy word
        x0 = betaexpand.value_of_word(field, pre, per)
        u1 = word.digit(0)
        if not (x0.mul_beta() - u1) < one:
            excluded += 1
            continue
        pt = two_sided_point(space, left, pre, per)
        # forward: phi(S(w,u)) == T(phi(w,u))
        l2, p2, q2 = shift_two_sided(left, pre, per)
        lhs = two_sided_point(space, l2, p2, q2)
        rhs = natural_extension_step(space, NaturalExtensionState(pt)).point
        dev = space.distance(lhs, rhs)
        dev = max(dev, abs(float(lhs.real_exact - rhs.real_exact)))
        max_shift = max(max_shift, dev)
        # conjugacy on exact points: T(delta, id)(x) == (delta, id)(T x)
        x = pt.real_exact
        st = NaturalExtensionState(space.delta(x).with_real(x))
        stepped = natural_extension_step(space, st).point
        tx = betaexpand.t_beta(field, x)
        direct = space.delta(tx).with_real(tx)
        dev = space.distance(stepped, direct)
        dev = max(dev, abs(float(stepped.real_exact - direct.real_exact)))
        max_conj = max(max_conj, dev)
        # backward: the inverse formula (z + w0)/beta followed by a forward
        # step returns the state
        z = pt.real_exact
        w0 = left[0] if left else 0
        back = (z + w0) * field.beta().inverse()
        if back.sign() >= 0 and back < field.from_int(1):
            bst = NaturalExtensionState(space.delta(back).with_real(back))
            fwd = natural_extension_step(space, bst).point
            dev = space.distance(fwd, space.delta(z).with_real(z))
            dev = max(dev, abs(float(fwd.real_exact - z)))
            max_back = max(max_back, dev)
        done += 1
    return CommutationReport(done, excluded, max_shift, max_conj, max_back)


# ---------------------------------------------------------------------------
# Deciders


def is_purely_periodic_exact(field: PisotField, x: FieldElement,
                             max_steps: int = betaexpand.DEFAULT_MAX_STEPS
                             ) -> tuple[bool, int]:
    res = betaexpand.expand(field, x, max_steps)
    return res.purely_periodic, len(res.period)


def is_purely_periodic_geometric(space: RepresentationSpace,
                                 cyl: rauzy.CylinderSet,
                                 x: FieldElement) -> rauzy.MembershipVerdict:
    if x.sign() < 0 or x >= space.field.from_int(1):
        raise OutOfRange(f"{x} not in [0,1)")
    pt = space.delta(x).with_real(x)
    return rauzy.membership(cyl, pt)


def _classify(exact: bool, geo: rauzy.MembershipVerdict) -> str:
    if geo.verdict == "BoundaryUnknown":
        return "GeometricUndecided"
    if (geo.verdict == "In") == exact:
        return "Agree"
    return "CONFLICT"


def irrational_samples(field: PisotField, count: int, seed: int) -> list[FieldElement]:
    """Elements a*beta + b with small rational a != 0, b, filtered into [0,1)."""
    rng = random.Random(seed)
    beta = field.beta()
    out = []
    one = field.from_int(1)
    while len(out) < count:
        a = Fraction(rng.randint(-8, 8), rng.randint(1, 12))
        b = Fraction(rng.randint(-12, 12), rng.randint(1, 12))
        if a == 0 or field.degree == 1:
            a = Fraction(0)
        x = beta * a + field.from_fraction(b) if a else field.from_fraction(b)
        if x.sign() >= 0 and x < one:
            out.append(x)
    return out


def cross_check(field: PisotField, max_denominator: int,
                depth: int = 16,
                space: Optional[RepresentationSpace] = None,
                extra_samples: int = 0, seed: int = 20240901,
                max_steps: int = betaexpand.DEFAULT_MAX_STEPS
                ) -> list[PeriodicityReport]:
    """Both deciders over every reduced p/q in [0,1) with q <= Q, plus
    seeded irrational elements of the field; reports sorted by (q, p)."""
    if space is None:
        space = RepresentationSpace(field)
    parry = betaexpand.classify_parry(field)
    aut = sofic.build_automaton(parry)
    approx = rauzy.virtual_approx(space, aut, depth)
    cyl = rauzy.CylinderSet(approx, rauzy.cylinder_heights(parry, field))
    xs: list[tuple[tuple, FieldElement]] = []
    for q in range(1, max_denominator + 1):
        for p in range(q):
            if gcd(p, q) == 1 or (p == 0 and q == 1):
                xs.append(((q, p), field.from_fraction(Fraction(p, q))))
    for i, x in enumerate(irrational_samples(field, extra_samples, seed)):
        xs.append(((10**9, i), x))
    xs.sort(key=lambda t: t[0])
    out = []
    for _, x in xs:
        exact, period = is_purely_periodic_exact(field, x, max_steps)
        geo = is_purely_periodic_geometric(space, cyl, x)
        out.append(PeriodicityReport(x, exact, period if exact else 0, geo,
                                     _classify(exact, geo)))
    return out


def summarize(reports: Sequence[PeriodicityReport]) -> dict:
    return {
        "tested": len(reports),
        "agree": sum(r.agreement == "Agree" for r in reports),
        "undecided": sum(r.agreement == "GeometricUndecided" for r in reports),
        "conflicts": sum(r.conflict for r in reports),
    }


def report_lines(reports: Sequence[PeriodicityReport]) -> list[str]:
    lines = []
    for r in reports:
        lines.append(
            f"x={r.x} exact={'pp' if r.exact_verdict else 'not-pp'} "
            f"period={r.exact_period} geometric={r.geometric.verdict} "
            f"distance={r.geometric.distance:.6g} depth={r.geometric.depth} "
            f"agreement={r.agreement}")
    s = summarize(reports)
    lines.append(f"summary: tested={s['tested']} agree={s['agree']} "
                 f"undecided={s['undecided']} conflicts={s['conflicts']}")
    return lines
