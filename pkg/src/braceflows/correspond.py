"""Conversion between braces and pre-Lie rings, in both directions.

Brace -> pre-Lie: average the star operation against the powers of the
(p-1)-th root of unity xi,
    a . b = sum_{i=0}^{p-2} xi^{p-1-i} ((xi^i a) * b),
then scale by -(1 + p + ... + p^{n-1}) to normalize the leading term.

Pre-Lie -> brace: the group of flows.  With L_a(b) = a.b, let
    exp(a) = e^{L_a}(1) - 1 = a + a.a/2! + a.(a.a)/3! + ...
(the formal identity 1 comes from the Dorroh extension); exp is a
bijection of A, log is its inverse, and
    a o b = a + e^{L_{log(a)}}(b)
defines a left brace on the same additive group.

Both constructions are exact mod p^n and require the nilpotency index
and n+1 to stay below p.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .abelian import GroupElement
from .arith import factorial_inverse, geometric_scalar, mod_inverse, teichmueller_xi
from .brace import Brace
from .errors import HypothesisViolated
from .prelie import PreLieRing, scale_prelie

_ADDITIVITY_SAMPLES = 32


def averaged_star_product(B: Brace, name: str = "") -> PreLieRing:
    """The root-of-unity average of the star operation, as a pre-Lie ring.

    Requires B strongly nilpotent with index k and k < p, n+1 < p.  The
    result is biadditive (so structure constants on generator pairs
    determine it) and satisfies the pre-Lie identity.
    """
    B.require_verified()
    G = B.group
    p, n = G.modulus.p, G.modulus.n
    k = B.strong_index()
    if k >= p:
        raise HypothesisViolated(f"strong nilpotency index {k} must be < p = {p}")
    if n + 1 >= p:
        raise HypothesisViolated(f"need n+1 < p, got n = {n}, p = {p}")

    xi = teichmueller_xi(G.modulus)
    xi_pow = [pow(xi, j, G.modulus.value) for j in range(p)]
    star = B.star_table
    add = G.add_table

    def dot_idx(ai: int, bi: int) -> int:
        acc = 0
        for i in range(p - 1):
            t = star[G.scalar_table(xi_pow[i])[ai], bi]
            acc = add[acc, G.scalar_table(xi_pow[p - 1 - i])[t]]
        return int(acc)

    # additivity spot-check before committing to generator-pair storage
    rng = np.random.default_rng(0)
    for _ in range(_ADDITIVITY_SAMPLES):
        a, b, c = (int(v) for v in rng.integers(0, G.order, 3))
        if dot_idx(int(add[a, b]), c) != int(add[dot_idx(a, c), dot_idx(b, c)]):
            raise AssertionError(
                "averaged star product failed left-additivity spot-check"
            )

    gens = [G.index(g) for g in G.generators]
    sc = [[G.from_index(dot_idx(i, j)) for j in gens] for i in gens]
    P = PreLieRing(G, sc, name or (f"avg({B.name})" if B.name else ""))
    P.require_verified()
    return P


def brace_to_prelie(B: Brace, name: str = "") -> PreLieRing:
    """The pre-Lie ring associated to a strongly nilpotent brace.

    The averaged star product scaled by -(1 + p + ... + p^{n-1}); the
    scaling makes the degree-1 coefficient exactly 1, so the group of
    flows inverts this construction.
    """
    P = averaged_star_product(B)
    scaled = scale_prelie(P, geometric_scalar(B.group.modulus))
    scaled.name = name or (f"prelie({B.name})" if B.name else "")
    return scaled


class FlowsContext:
    """Exponential data for a left nilpotent pre-Lie ring.

    Carries the truncation depth (the left nilpotency index), the inverse
    factorials below it, and the tabulated bijection exp with its inverse
    log.  Requires n+1 < p and left index < p.
    """

    def __init__(self, P: PreLieRing):
        P.require_verified()
        G = P.group
        p, n = G.modulus.p, G.modulus.n
        if n + 1 >= p:
            raise HypothesisViolated(f"need n+1 < p, got n = {n}, p = {p}")
        left = P.series("left")
        if not left.nilpotent:
            raise HypothesisViolated("group of flows needs a left nilpotent ring")
        k = left.index
        if k >= p:
            raise HypothesisViolated(f"left nilpotency index {k} must be < p = {p}")
        self.prelie = P
        self.truncation = k
        self.inv_factorials = {m: factorial_inverse(m, G.modulus) for m in range(max(k, 1))}

        N = G.order
        T = P.dot_table
        add = G.add_table
        idx = np.arange(N, dtype=np.int32)
        prev = idx.copy()  # L_a^0(a) = a, the m = 1 term
        acc = prev.copy()
        for m in range(2, k):
            prev = T[idx, prev]
            acc = add[acc, G.scalar_table(self.inv_factorials[m])[prev]]
        if len(np.unique(acc)) != N:
            raise AssertionError("exponential map failed to be a bijection")
        log = np.empty_like(acc)
        log[acc] = idx
        self.exp_table = acc
        self.log_table = log

    @property
    def group(self):
        return self.prelie.group


def exp_left_mul(ctx: FlowsContext, x: GroupElement, b: GroupElement) -> GroupElement:
    """e^{L_x}(b) = sum_{m=0}^{k-1} (m!)^{-1} L_x^m(b), exact mod p^n."""
    G = ctx.group
    T = ctx.prelie.dot_table
    add = G.add_table
    xi = G.index(G.element(x))
    acc = prev = G.index(G.element(b))
    for m in range(1, ctx.truncation):
        prev = int(T[xi, prev])
        acc = int(add[acc, G.scalar_table(ctx.inv_factorials[m])[prev]])
    return G.from_index(acc)


def prelie_exp(ctx: FlowsContext, a: GroupElement) -> GroupElement:
    """exp(a) = e^{L_a}(1) - 1; a bijection of A."""
    G = ctx.group
    return G.from_index(int(ctx.exp_table[G.index(G.element(a))]))


def prelie_log(ctx: FlowsContext, a: GroupElement) -> GroupElement:
    """The inverse bijection of exp, read off the tabulated permutation."""
    G = ctx.group
    return G.from_index(int(ctx.log_table[G.index(G.element(a))]))


def log_series_reference(ctx: FlowsContext, a: GroupElement) -> GroupElement:
    """Low-degree closed form log(a) = a - (1/2) a.a + (1/4) (a.a).a + (1/12) a.(a.a).

    Exact when all products of four factors vanish (strong index <= 4);
    used as an independent cross-check of the tabulated inverse.
    """
    P = ctx.prelie
    k = P.strong_index()
    if k > 4:
        raise HypothesisViolated("closed form only covers strong nilpotency index <= 4")
    G = ctx.group
    m = G.modulus
    a = G.element(a)
    aa = P.dot(a, a)
    out = G.add(a, G.scalar_mul(m.value - mod_inverse(2, m), aa))
    if k >= 4:
        out = G.add(out, G.scalar_mul(mod_inverse(4, m), P.dot(aa, a)))
        out = G.add(out, G.scalar_mul(mod_inverse(12, m), P.dot(a, aa)))
    return out


def flows_circle(ctx: FlowsContext, name: str = "") -> Brace:
    """The group of flows: a o b = a + e^{L_{log(a)}}(b), with + unchanged."""
    G = ctx.group
    N = G.order
    T = ctx.prelie.dot_table
    add = G.add_table
    om = ctx.log_table
    cur = np.tile(np.arange(N, dtype=np.int32), (N, 1))  # cur[a, b] = b
    acc = cur.copy()
    for m in range(1, ctx.truncation):
        cur = T[om[:, None], cur]
        acc = add[acc, G.scalar_table(ctx.inv_factorials[m])[cur]]
    table = add[np.arange(N, dtype=np.int32)[:, None], acc]
    B = Brace(G, table, name or (f"flows({ctx.prelie.name})" if ctx.prelie.name else "flows"))
    if not B.verify().passed:
        raise AssertionError("group of flows failed brace verification")
    return B


def group_of_flows(P: PreLieRing, name: str = "") -> Brace:
    """Convenience wrapper: build the context and the circle table."""
    return flows_circle(FlowsContext(P), name)


# -- Baker-Campbell-Hausdorff ---------------------------------------------------


@dataclass(frozen=True)
class LieWord:
    """A right-nested bracket word over two symbols with a rational coefficient.

    word (w1, ..., wd) over {0, 1} denotes [w1, [w2, [..., [w_{d-1}, wd]...]]],
    a single symbol denoting itself.  Degree must stay below p so the
    coefficient denominator is invertible mod p^n.
    """

    word: tuple[int, ...]
    coefficient: Fraction

    @property
    def degree(self) -> int:
        return len(self.word)


def _block_sequences(deg: int):
    """Sequences ((r1,s1),...,(rk,sk)), each block nonzero, letters summing to deg."""
    if deg == 0:
        yield ()
        return
    for first_total in range(1, deg + 1):
        for r in range(first_total + 1):
            s = first_total - r
            for rest in _block_sequences(deg - first_total):
                yield ((r, s),) + rest


@lru_cache(maxsize=None)
def bch_terms(maxdeg: int) -> tuple[LieWord, ...]:
    """Aggregated Dynkin-expansion terms of log(e^x e^y) up to maxdeg.

    Exponentials multiply as operators acting on the left, so the
    degree-2 part is +(1/2)[x, y].
    """
    coeffs: dict[tuple[int, ...], Fraction] = defaultdict(lambda: Fraction(0))
    for deg in range(1, maxdeg + 1):
        for blocks in _block_sequences(deg):
            k = len(blocks)
            word = []
            denom = deg * k
            for r, s in blocks:
                word.extend([0] * r)
                word.extend([1] * s)
                denom *= factorial(r) * factorial(s)
            word = tuple(word)
            if len(word) >= 2 and word[-1] == word[-2]:
                continue  # innermost bracket [w, w] vanishes
            coeffs[word] += Fraction((-1) ** (k - 1), denom)
    terms = [LieWord(w, c) for w, c in coeffs.items() if c != 0]
    terms.sort(key=lambda t: (t.degree, t.word))
    return tuple(terms)


def _evaluate_word(P: PreLieRing, word: tuple[int, ...], x, y) -> GroupElement:
    symbols = (x, y)
    e = symbols[word[-1]]
    for s in reversed(word[:-1]):
        e = P.lie_bracket(symbols[s], e)
    return e


def bch(x: GroupElement, y: GroupElement, P: PreLieRing, maxdeg: int) -> GroupElement:
    """Evaluate log(e^{L_x} e^{L_y}) in A, truncated at maxdeg.

    Exact when maxdeg reaches the class of the associated Lie ring; all
    coefficient denominators stay below p, hence invertible.
    """
    G = P.group
    p = G.modulus.p
    if maxdeg >= p:
        raise HypothesisViolated(f"maxdeg {maxdeg} must be < p = {p}")
    if maxdeg < 1:
        raise ValueError("maxdeg must be >= 1")
    P.require_verified()
    cls = P.lie_class()
    if cls >= p:
        raise HypothesisViolated(f"Lie class {cls} must be < p = {p}")
    depth = min(maxdeg, cls)
    x = G.element(x)
    y = G.element(y)
    out = G.zero
    for term in bch_terms(depth):
        val = _evaluate_word(P, term.word, x, y)
        if val == G.zero:
            continue
        c = term.coefficient
        scalar = c.numerator * mod_inverse(c.denominator, G.modulus)
        out = G.add(out, G.scalar_mul(scalar, val))
    return out


# -- round trips -----------------------------------------------------------------


def roundtrip_prelie_check(P: PreLieRing) -> bool:
    """flows then averaging recovers P with identical structure constants."""
    G = P.group
    p, n = G.modulus.p, G.modulus.n
    k = P.strong_index()
    if k >= p or n + 1 >= p:
        raise HypothesisViolated(f"need index {k} < p and n+1 = {n + 1} < p = {p}")
    B = group_of_flows(P)
    Q = brace_to_prelie(B)
    return Q.sc == P.sc


def roundtrip_brace_check(B: Brace) -> bool:
    """Averaging then flows recovers B with an identical circle table."""
    P = brace_to_prelie(B)
    B2 = group_of_flows(P)
    return bool(np.array_equal(B2.circle_table, B.circle_table))
