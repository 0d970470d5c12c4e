"""Greedy beta-expansions, Parry classification, and digit admissibility.

The beta-transformation T(x) = beta*x mod 1 is iterated on exact field
elements; hashing canonical forms detects the orbit cycle in one pass and
yields the minimal preperiod and primitive period directly (distinct orbit
points cannot emit a digit pattern that would allow a shorter split).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import islice
from typing import Iterator, Sequence

from .errors import InadmissibleWord, OrbitBudgetExceeded, OutOfRange
from .numberfield import FieldElement, PisotField

DEFAULT_MAX_STEPS = 10**6


def _fmt_digits(digits: Sequence[int]) -> str:
    if any(d > 9 for d in digits):
        return ",".join(str(d) for d in digits)
    return "".join(str(d) for d in digits)


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """preperiod . (period)^inf ; a finite word has period () meaning 0^inf."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre, per = _canonical_split(self.preperiod, self.period)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def digit(self, i: int) -> int:
        """0-based digit of the infinite word."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        if not self.period:
            return 0
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def digits(self) -> Iterator[int]:
        i = 0
        while True:
            yield self.digit(i)
            i += 1

    @property
    def is_finite(self) -> bool:
        return not self.period or set(self.period) == {0}

    def __str__(self):
        if self.is_finite:
            return _fmt_digits(self.preperiod) if self.preperiod else "0"
        pre = _fmt_digits(self.preperiod)
        return f"{pre}({_fmt_digits(self.period)})^inf"


def _canonical_split(pre: Sequence[int], per: Sequence[int]):
    pre, per = list(pre), list(per)
    # primitive period
    if per:
        n = len(per)
        for d in range(1, n):
            if n % d == 0 and per == per[: d] * (n // d):
                per = per[:d]
                break
    # all-zero period folds into the implicit 0^inf tail
    if per and set(per) == {0}:
        per = []
    if per:
        # minimal preperiod: roll back while the last preperiod digit
        # matches the last period digit
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = [per[-1]] + per[:-1]
    else:
        while pre and pre[-1] == 0:
            pre.pop()
    return tuple(pre), tuple(per)


@dataclass(frozen=True)
class ParryData:
    d_beta_one: EventuallyPeriodicWord
    d_star: EventuallyPeriodicWord
    kind: str  # "SimpleParry" | "NonSimpleParry"
    n: int
    p: int
    d: int

    @property
    def simple(self) -> bool:
        return self.kind == "SimpleParry"

    def t_digit(self, i: int) -> int:
        """1-based digit t_i of d_beta(1)."""
        return self.d_beta_one.digit(i - 1)

    def star_digit(self, i: int) -> int:
        """1-based digit of the quasi-greedy word d*_beta(1)."""
        return self.d_star.digit(i - 1)


@dataclass(frozen=True)
class ExpansionResult:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    purely_periodic: bool

    def word(self) -> EventuallyPeriodicWord:
        return EventuallyPeriodicWord(self.preperiod, self.period)


def t_beta(field: PisotField, x: FieldElement) -> FieldElement:
    """One step of the beta-transformation on an exact element of [0, 1)."""
    if x.sign() < 0 or x >= field.from_int(1):
        raise OutOfRange(f"{x} not in [0,1)")
    y = x.mul_beta()
    return y - y.floor()


def _orbit_split(field: PisotField, x: FieldElement, max_steps: int):
    """Iterate z -> beta*z - floor(beta*z), returning (digits, preperiod, period)."""
    seen: dict[FieldElement, int] = {}
    digits: list[int] = []
    z = x
    for step in range(max_steps):
        if z in seen:
            j = seen[z]
            return digits, j, step - j
        seen[z] = step
        y = z.mul_beta()
        d = y.floor()
        digits.append(d)
        z = y - d
    raise OrbitBudgetExceeded(f"no cycle within {max_steps} steps")


def expand(field: PisotField, x: FieldElement, max_steps: int = DEFAULT_MAX_STEPS) -> ExpansionResult:
    """Greedy beta-expansion of x in [0,1) with exact cycle detection."""
    if x.sign() < 0 or x >= field.from_int(1):
        raise OutOfRange(f"{x} not in [0,1)")
    digits, j, p = _orbit_split(field, x, max_steps)
    pre, per = tuple(digits[:j]), tuple(digits[j : j + p])
    return ExpansionResult(pre, per, purely_periodic=(j == 0))


def classify_parry(field: PisotField, max_steps: int = DEFAULT_MAX_STEPS) -> ParryData:
    """Classification of beta via the expansion of 1.

    Integer bases use the single-digit convention d_beta(1) = beta, so the
    quasi-greedy word is (beta-1)^inf and the automaton has one state.
    """
    seen: dict[FieldElement, int] = {}
    digits: list[int] = []
    z = field.from_int(1)
    zero = field.zero()
    for step in range(max_steps):
        if z == zero:
            # finite expansion: simple Parry
            word = EventuallyPeriodicWord(tuple(digits), ())
            n = len(digits)
            star_per = digits[:-1] + [digits[-1] - 1]
            d_star = EventuallyPeriodicWord((), tuple(star_per))
            return ParryData(word, d_star, "SimpleParry", n=n, p=0, d=n)
        if z in seen:
            j = seen[z]
            pre, per = tuple(digits[:j]), tuple(digits[j:])
            word = EventuallyPeriodicWord(pre, per)
            n, p = len(word.preperiod), len(word.period)
            return ParryData(word, word, "NonSimpleParry", n=n, p=p, d=n + p)
        seen[z] = step
        y = z.mul_beta()
        d = y.floor()
        digits.append(d)
        z = y - d
    raise OrbitBudgetExceeded(f"no cycle within {max_steps} steps")


# ---------------------------------------------------------------------------
# Admissibility


def _lex_less_stream(a: Iterator[int], b: Iterator[int], horizon: int) -> int:
    """-1, 0, +1 comparing two digit streams over `horizon` places."""
    for x, y in islice(zip(a, b), horizon):
        if x != y:
            return -1 if x < y else 1
    return 0


def _word_stream(w: Sequence[int]) -> Iterator[int]:
    yield from w
    while True:
        yield 0


def admissible(parry: ParryData, w: Sequence[int], side: str = "right",
               strict: bool = False) -> bool:
    """Admissibility of a finite digit word.

    side="right": every suffix, extended by 0^inf, must be lexicographically
    <= d*_beta(1) (strictly < when `strict`, the expansion-validity test).
    side="left": the word must be readable backwards in the reversed
    automaton, i.e. be a factor of the shift language.
    """
    w = list(w)
    if side == "left":
        from .sofic import build_automaton, is_factor

        return is_factor(build_automaton(parry), w)
    if side != "right":
        raise ValueError("side must be 'right' or 'left'")
    horizon = len(w) + len(parry.d_star.preperiod) + max(1, len(parry.d_star.period)) + 2
    for k in range(len(w)):
        cmp = _lex_less_stream(_word_stream(w[k:]), parry.d_star.digits(), horizon)
        if cmp > 0 or (strict and cmp == 0):
            return False
    return True


def stream_admissible(parry: ParryData, pre: Sequence[int], per: Sequence[int],
                      strict: bool = True) -> bool:
    """Admissibility of the eventually periodic stream pre.(per)^inf."""
    from math import lcm

    word = EventuallyPeriodicWord(tuple(pre), tuple(per))
    m = len(word.preperiod)
    L = max(1, len(word.period))
    star = parry.d_star
    # eventually periodic streams agreeing through the preperiods plus the
    # lcm of the periods agree forever
    horizon = m + len(star.preperiod) + lcm(L, max(1, len(star.period))) + 2
    # finitely many distinct suffixes: indices 0 .. m+L-1
    for k in range(m + L):
        suffix = (word.digit(k + i) for i in range(horizon + 1))
        cmp = _lex_less_stream(suffix, star.digits(), horizon)
        if cmp > 0 or (strict and cmp == 0):
            return False
    return True


def value_of_word(field: PisotField, pre: Sequence[int], per: Sequence[int]) -> FieldElement:
    """Exact value of sum w_i beta^-i for the stream pre.(per)^inf.

    No admissibility requirement; used for quasi-greedy tails and heights.
    """
    beta = field.beta()
    binv = beta.inverse()
    acc = field.zero()
    p = field.one()
    for d in pre:
        p = p * binv
        acc = acc + p * d
    if per and set(per) != {0}:
        # (a_1 beta^(L-1) + ... + a_L) / (beta^L - 1), shifted below the preperiod
        L = len(per)
        numer = field.zero()
        for d in per:
            numer = numer * beta + field.from_int(d)
        tail = numer * (_beta_pow(field, L) - field.one()).inverse()
        acc = acc + p * tail
    return acc


def _beta_pow(field: PisotField, k: int) -> FieldElement:
    out = field.one()
    for _ in range(k):
        out = out.mul_beta()
    return out


def value_of_periodic(field: PisotField, preperiod: Sequence[int],
                      period: Sequence[int], parry: ParryData | None = None) -> FieldElement:
    """Exact element whose expansion is preperiod.(period)^inf.

    Raises InadmissibleWord when the stream is not a valid greedy expansion
    (every suffix must be lexicographically below d*_beta(1)).
    """
    if parry is None:
        parry = classify_parry(field)
    amax = parry.t_digit(1)
    if any(d < 0 or d > amax for d in list(preperiod) + list(period)):
        raise InadmissibleWord("digit outside the alphabet")
    if not stream_admissible(parry, preperiod, period, strict=True):
        raise InadmissibleWord("stream violates the admissibility condition")
    return value_of_word(field, preperiod, period)


# ---------------------------------------------------------------------------
# Machine-readable expansion report


def expansion_record(field: PisotField, x: FieldElement, result: ExpansionResult) -> dict:
    from .numberfield import format_descriptor

    return {
        "field": format_descriptor(field),
        "x": str(x),
        "preperiod": list(result.preperiod),
        "period": list(result.period),
        "purely_periodic": result.purely_periodic,
    }
