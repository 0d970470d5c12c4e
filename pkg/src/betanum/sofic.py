"""Minimal factor automaton, beta-substitution, incidence matrix, and the
canonical linear numeration system.

The automaton is the chain a_1 -> ... -> a_d with edge a_i -> a_{i+1}
labeled t_i, return edges a_i -> a_1 labeled 0 .. t_i - 1, and (non-simple
case) the cycle edge a_{n+p} -> a_{n+1} labeled t_{n+p}.  States are fixed
in chain order so piece indices stay reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import qpoly, roots
from .betaexpand import ParryData
from .errors import IndexOutOfRange


@dataclass(frozen=True)
class SoficAutomaton:
    """Edge list over states 1..d; all states initial-reachable and accepting."""

    state_count: int
    edges: tuple[tuple[int, int, int], ...]  # (from, label, to)
    initial: int = 1

    def out_edges(self, state: int):
        return [e for e in self.edges if e[0] == state]

    def adjacency(self) -> list[list[int]]:
        d = self.state_count
        m = [[0] * d for _ in range(d)]
        for a, _, b in self.edges:
            m[a - 1][b - 1] += 1
        return m

    def step(self, states: set[int], label: int) -> set[int]:
        return {b for a, l, b in self.edges if a in states and l == label}


@dataclass(frozen=True)
class Substitution:
    images: tuple[tuple[int, ...], ...]  # images[i] = word for letter i+1

    @property
    def alphabet_size(self) -> int:
        return len(self.images)

    def __str__(self):
        return " ".join(
            f"{i + 1}->{''.join(str(c) for c in w)}" for i, w in enumerate(self.images)
        )


def build_automaton(parry: ParryData) -> SoficAutomaton:
    d = parry.d
    t = [parry.t_digit(i) for i in range(1, d + 1)]
    edges: list[tuple[int, int, int]] = []
    for i in range(1, d + 1):
        for lab in range(t[i - 1]):
            edges.append((i, lab, 1))
        if i < d:
            edges.append((i, t[i - 1], i + 1))
    if not parry.simple:
        edges.append((d, t[d - 1], parry.n + 1))
    return SoficAutomaton(d, tuple(edges))


def reverse(aut: SoficAutomaton) -> SoficAutomaton:
    return SoficAutomaton(aut.state_count,
                          tuple((b, l, a) for a, l, b in aut.edges),
                          aut.initial)


def is_factor(aut: SoficAutomaton, w) -> bool:
    """True iff w labels a path in aut starting anywhere."""
    states = set(range(1, aut.state_count + 1))
    for label in w:
        states = aut.step(states, label)
        if not states:
            return False
    return True


def build_substitution(parry: ParryData) -> Substitution:
    d = parry.d
    t = [parry.t_digit(i) for i in range(1, d + 1)]
    images = []
    for i in range(1, d + 1):
        word = [1] * t[i - 1]
        if i < d:
            word.append(i + 1)
        elif not parry.simple:
            word.append(parry.n + 1)
        images.append(tuple(word))
    return Substitution(tuple(images))


def incidence(sub: Substitution) -> list[list[int]]:
    """entry (i, j) counts occurrences of letter i+1 in sub(j+1)."""
    d = sub.alphabet_size
    m = [[0] * d for _ in range(d)]
    for j, word in enumerate(sub.images):
        for letter in word:
            m[letter - 1][j] += 1
    return m


def transpose(m: list[list[int]]) -> list[list[int]]:
    return [list(row) for row in zip(*m)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x:
                for j in range(m):
                    out[i][j] += x * b[t][j]
    return out


def is_primitive(m: list[list[int]]) -> bool:
    """Wielandt bound: primitive iff m^(d^2 - 2d + 2) is strictly positive."""
    d = len(m)
    bound = d * d - 2 * d + 2
    acc = [row[:] for row in m]
    power = 1
    while power < bound:
        acc = mat_mul(acc, acc)
        # clamp to keep entries small; positivity is all that matters
        acc = [[min(x, 1) for x in row] for row in acc]
        power *= 2
    return all(all(x > 0 for x in row) for row in acc)


def char_poly(m: list[list[int]]) -> tuple[int, ...]:
    """Characteristic polynomial det(XI - m), constant first, by exact
    Faddeev-LeVerrier iteration."""
    d = len(m)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    mk = [[Fraction(x) for x in row] for row in m]
    ident = [[Fraction(1 if i == j else 0) for j in range(d)] for i in range(d)]
    acc = [row[:] for row in ident]
    for k in range(1, d + 1):
        acc = mat_mul(mk, acc)
        c = -sum(acc[i][i] for i in range(d)) / k
        coeffs[d - k] = c
        for i in range(d):
            acc[i][i] += c
    return tuple(int(c) for c in coeffs)


def factor_char_poly(coeffs) -> list[tuple[tuple[int, ...], int]]:
    """Irreducible integer factors (constant first) with multiplicities."""
    import sympy

    x = sympy.Symbol("x")
    poly = sum(int(c) * x**i for i, c in enumerate(coeffs))
    _, factors = sympy.factor_list(sympy.Poly(poly, x))
    out = []
    for fac, mult in factors:
        fc = sympy.Poly(fac, x).all_coeffs()[::-1]
        out.append((tuple(int(c) for c in fc), int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), fm[0]))
    return out


def format_poly(coeffs) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(f"{'+' if c > 0 else '-'}{abs(c)}")
        else:
            xs = "X" if i == 1 else f"X^{i}"
            if abs(c) == 1:
                terms.append(f"{'+' if c > 0 else '-'}{xs}")
            else:
                terms.append(f"{'+' if c > 0 else '-'}{abs(c)}{xs}")
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s


def is_pisot_type(m: list[list[int]]) -> bool:
    """Pisot-type verdict on the eigenvalues of an incidence matrix.

    The dominant eigenvalue must be simple and every other eigenvalue
    nonzero with certified modulus < 1; modulus exactly 1 is decided
    exactly, never by refinement alone.
    """
    cp = char_poly(m)
    cp = qpoly.normalize(cp)
    # zero eigenvalues: an X^k factor fails the nonzero requirement
    if cp[0] == 0:
        return False
    rad = qpoly.squarefree_part(cp)
    rad = tuple(int(c) for c in _clear_denoms(rad))
    reals, disks = roots.certified_roots(rad)
    if not reals:
        return False
    reals.sort(key=lambda rr: rr.mid)
    dom = reals[-1]
    dom = dom.refined(rad, Fraction(1, 2**40))
    # dominant must exceed 1 and strictly dominate in modulus
    if dom.hi <= 1:
        return False
    # simplicity in the original characteristic polynomial
    g = qpoly.poly_gcd(cp, qpoly.derivative(cp))
    if qpoly.degree(g) > 0:
        gi = tuple(int(c) for c in _clear_denoms(g))
        chain = qpoly.sturm_chain(gi)
        if qpoly.count_roots_in(chain, dom.lo, dom.hi) > 0:
            return False
    for rr in reals[:-1]:
        if roots.real_modulus_vs_one(rad, rr) >= 0:
            return False
    for dk in disks:
        if roots.complex_modulus_vs_one(rad, dk) >= 0:
            return False
    return True


def _clear_denoms(coeffs):
    from math import lcm

    den = lcm(*[Fraction(c).denominator for c in coeffs])
    return tuple(int(Fraction(c) * den) for c in coeffs)


# ---------------------------------------------------------------------------
# Linear canonical numeration system U_N


def numeration(parry: ParryData, N: int) -> list[int]:
    """U_0 .. U_N with U_0 = 1, U_k = t_1 U_{k-1} + ... + t_k U_0 + 1 over
    the digits of d*_beta(1)."""
    u = [1]
    for k in range(1, N + 1):
        s = 1
        for i in range(1, k + 1):
            s += parry.star_digit(i) * u[k - i]
        u.append(s)
    return u


def greedy_rep(parry: ParryData, i: int, N: int) -> tuple[int, ...]:
    """Greedy digits (w_0, ..., w_{N-1}) with i = sum w_k U_k; unique."""
    u = numeration(parry, N)
    if i < 0 or i >= u[N]:
        raise IndexOutOfRange(f"{i} not in [0, U_{N} = {u[N]})")
    rem = i
    w = [0] * N
    for k in range(N - 1, -1, -1):
        w[k] = rem // u[k]
        rem -= w[k] * u[k]
    return tuple(w)


# ---------------------------------------------------------------------------
# Exports


def export_graph(aut: SoficAutomaton) -> str:
    """Directed graph in DOT format; edge attribute is the digit label."""
    lines = ["digraph beta_automaton {"]
    for i in range(1, aut.state_count + 1):
        lines.append(f'  a{i} [shape=circle];')
    for a, l, b in sorted(aut.edges):
        lines.append(f'  a{a} -> a{b} [label="{l}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_substitution(sub: Substitution) -> str:
    return "\n".join(
        f"{i + 1} -> {''.join(str(c) for c in w)}" for i, w in enumerate(sub.images)
    ) + "\n"
