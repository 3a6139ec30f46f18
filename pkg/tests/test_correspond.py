"""Brace <-> pre-Lie conversion, exponentials, BCH, round trips."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from braceflows import (
    AbelianPGroup,
    Brace,
    FlowsContext,
    HypothesisViolated,
    Modulus,
    PreLieRing,
    averaged_star_product,
    bch,
    bch_terms,
    brace_to_prelie,
    exp_left_mul,
    flows_circle,
    group_of_flows,
    log_series_reference,
    prelie_exp,
    prelie_log,
    radical_brace,
    roundtrip_brace_check,
    roundtrip_prelie_check,
    scale_prelie,
    teichmueller_xi,
)


# -- brace -> pre-Lie ------------------------------------------------------------


def test_averaged_product_of_trivial_brace_is_zero(Z25):
    P = averaged_star_product(Brace.trivial(Z25))
    assert P.sc == (((0,),),)


def test_averaged_product_matches_raw_sum(B5):
    # independent oracle: evaluate the averaging sum in raw integers
    xi = teichmueller_xi(Modulus(5, 2))
    star = lambda a, b: (5 * a * b) % 25

    def raw_dot(a, b):
        return sum(
            pow(xi, 4 - i, 25) * star(pow(xi, i, 25) * a % 25, b) for i in range(4)
        ) % 25

    assert raw_dot(1, 1) == 20
    P = averaged_star_product(B5)
    assert P.sc == (((20,),),)
    for a, b in itertools.product(range(25), repeat=2):
        assert P.dot((a,), (b,)) == (raw_dot(a, b),)
    assert P.dot((5,), (1,)) == (0,)  # 5 * 20 = 100 = 0 mod 25


def test_averaged_product_is_biadditive_and_prelie(B5, B7):
    for B in (B5, B7):
        P = averaged_star_product(B)
        N = B.group.order
        T = P.dot_table
        add = B.group.add_table
        # biadditivity on all pairs, checked directly on the tables
        assert np.array_equal(T[add, 0], add[T[:, 0][:, None], T[:, 0][None, :]])
        for c in range(0, N, max(N // 8, 1)):
            assert np.array_equal(T[add, c], add[T[:, c][:, None], T[:, c][None, :]])
            assert np.array_equal(T[c, add], add[T[c][:, None], T[c][None, :]])
        assert P.check_identity_exhaustive() is None


def test_brace_to_prelie_values(B5, Z25):
    Q = brace_to_prelie(B5)
    assert Q.sc == (((5,),),)  # 19 * 20 = 380 = 5 mod 25
    assert brace_to_prelie(Brace.trivial(Z25)).sc == (((0,),),)


def test_nilpotency_index_preserved(B5, B7):
    for B in (B5, B7, radical_brace(5, 3), radical_brace(11, 2)):
        Q = brace_to_prelie(B)
        assert Q.strong_index() == B.strong_index()
        assert Q.series("left").index == B.series("left").index


def test_hypothesis_gates():
    G9 = AbelianPGroup(Modulus(3, 2), (2,))
    with pytest.raises(HypothesisViolated):
        averaged_star_product(Brace.trivial(G9))  # n+1 = 3 is not < p = 3
    with pytest.raises(HypothesisViolated):
        FlowsContext(PreLieRing.zero(G9))
    # strong index n+1 = 5 reaches p = 5: conversion must refuse
    G = AbelianPGroup(Modulus(5, 4), (4,))
    idx = np.arange(625, dtype=np.int64)
    table = ((idx[:, None] + idx[None, :] + 5 * idx[:, None] * idx[None, :]) % 625)
    B = Brace(G, table.astype(np.int32))
    with pytest.raises(HypothesisViolated):
        averaged_star_product(B)


# -- exponentials ------------------------------------------------------------------


def test_exp_left_mul(P5):
    ctx = FlowsContext(P5)
    assert exp_left_mul(ctx, (0,), (9,)) == (9,)
    assert exp_left_mul(ctx, (11,), (1,)) == (6,)  # 1 + 55, square term vanishes
    assert exp_left_mul(ctx, (1,), (1,)) == (6,)


def test_prelie_exp_values(P5, zero25, Z25):
    ctx = FlowsContext(P5)
    assert prelie_exp(ctx, (0,)) == (0,)
    assert prelie_exp(ctx, (1,)) == (16,)  # 1 + inverse(2) * 5
    zctx = FlowsContext(zero25)
    for i in range(25):
        assert prelie_exp(zctx, (i,)) == (i,)


def test_prelie_log_inverts_exp(P5, nilpotent_on_Z25, heisenberg):
    for P in [P5, heisenberg] + list(nilpotent_on_Z25):
        ctx = FlowsContext(P)
        G = P.group
        seen = set()
        for i in range(G.order):
            a = G.from_index(i)
            w = prelie_exp(ctx, a)
            seen.add(w)
            assert prelie_log(ctx, w) == a
        assert len(seen) == G.order  # exp is a bijection
    ctx = FlowsContext(P5)
    assert prelie_log(ctx, (0,)) == (0,)
    assert prelie_log(ctx, (16,)) == (1,)
    assert prelie_log(ctx, (1,)) == (11,)


def test_log_series_closed_form(P5, heisenberg):
    # degree <= 3 inverse-series coefficients 1, -1/2, 1/4, 1/12 against the table
    prelie53 = brace_to_prelie(radical_brace(5, 3))  # strong index 4
    for P in (P5, heisenberg, prelie53):
        ctx = FlowsContext(P)
        G = P.group
        for i in range(G.order):
            a = G.from_index(i)
            assert log_series_reference(ctx, a) == prelie_log(ctx, a)


# -- group of flows ------------------------------------------------------------------


def test_flows_of_zero_multiplication_is_trivial(zero25, Z25):
    B = group_of_flows(zero25)
    assert np.array_equal(B.circle_table, Z25.add_table)


def test_flows_reproduces_radical_brace(P5, B5):
    B = group_of_flows(P5)
    assert B.circle((1,), (1,)) == (7,)
    assert np.array_equal(B.circle_table, B5.circle_table)
    assert B.verification.passed
    assert B.series("left").nilpotent


def test_flows_right_nilpotency_equivalence(nilpotent_on_Z25, nilpotent_on_Z5xZ5, heisenberg):
    for P in list(nilpotent_on_Z25) + list(nilpotent_on_Z5xZ5)[:10] + [heisenberg]:
        B = group_of_flows(P)
        assert B.series("right").nilpotent == P.series("right").nilpotent


def test_flows_injective_on_distinct_rings(nilpotent_on_Z25, nilpotent_on_Z5xZ5):
    for family in (nilpotent_on_Z25, nilpotent_on_Z5xZ5):
        tables = {group_of_flows(P).circle_table.tobytes() for P in family}
        assert len(tables) == len(family)


# -- BCH -----------------------------------------------------------------------------


def _mat(rows):
    return [[Fraction(v) for v in row] for row in rows]


def _mmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def _madd(A, B, c=Fraction(1)):
    return [[A[i][j] + c * B[i][j] for j in range(4)] for i in range(4)]


def _mbracket(A, B):
    return _madd(_mmul(A, B), _mmul(B, A), Fraction(-1))


def _mexp(X):
    out = _mat([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    term = [row[:] for row in out]
    for m in range(1, 6):
        term = _mmul(term, X)
        out = _madd(out, term, Fraction(1, math.factorial(m)))
    return out


def _mlog(E):
    I = _mat([[1 if i == j else 0 for j in range(4)] for i in range(4)])
    D = _madd(E, I, Fraction(-1))
    out = _mat([[0] * 4 for _ in range(4)])
    term = I
    for m in range(1, 6):
        term = _mmul(term, D)
        out = _madd(out, term, Fraction((-1) ** (m + 1), m))
    return out


def test_bch_terms_match_matrix_log_oracle():
    # strict upper-triangular 4x4 rational matrices: nilpotency degree 4,
    # so degree <= 3 terms determine log(e^X e^Y) exactly
    X = _mat([[0, 1, 2, 0], [0, 0, 3, 1], [0, 0, 0, 2], [0, 0, 0, 0]])
    Y = _mat([[0, 2, 0, 1], [0, 0, 1, 0], [0, 0, 0, 3], [0, 0, 0, 0]])
    oracle = _mlog(_mmul(_mexp(X), _mexp(Y)))
    acc = _mat([[0] * 4 for _ in range(4)])
    for t in bch_terms(3):
        syms = (X, Y)
        e = syms[t.word[-1]]
        for s in reversed(t.word[:-1]):
            e = _mbracket(syms[s], e)
        acc = _madd(acc, e, t.coefficient)
    assert acc == oracle

    # displayed low-degree form in the left-normed basis:
    # x + y - 1/2 [y,x] + 1/12 [[y,x],x] - 1/12 [[y,x],y]
    disp = _madd(_madd(X, Y), _mbracket(Y, X), Fraction(-1, 2))
    disp = _madd(disp, _mbracket(_mbracket(Y, X), X), Fraction(1, 12))
    disp = _madd(disp, _mbracket(_mbracket(Y, X), Y), Fraction(-1, 12))
    assert acc == disp


def test_bch_term_table_frozen():
    # aggregated Dynkin coefficients, degree <= 2 (verified by the matrix oracle)
    table = {t.word: t.coefficient for t in bch_terms(2)}
    assert table == {
        (0,): Fraction(1),
        (1,): Fraction(1),
        (0, 1): Fraction(1, 4),
        (1, 0): Fraction(-1, 4),
    }
    degrees = {t.degree for t in bch_terms(3)}
    assert degrees == {1, 2, 3}


def test_bch_commutative_is_addition(P5, nilpotent_on_Z25):
    for P in [P5] + list(nilpotent_on_Z25):
        G = P.group
        for a, b in itertools.product(range(0, 25, 3), repeat=2):
            assert bch((a,), (b,), P, 4) == G.add((a,), (b,))


def test_bch_degree2_on_heisenberg(heisenberg):
    # class 2: bch(a, b) = a + b + (1/2)[a, b] exactly, with 2^{-1} = 3 mod 5
    G = heisenberg.group
    rng = random.Random(0)
    for _ in range(100):
        a = G.from_index(rng.randrange(G.order))
        b = G.from_index(rng.randrange(G.order))
        expected = G.add(G.add(a, b), G.scalar_mul(3, heisenberg.lie_bracket(a, b)))
        assert bch(a, b, heisenberg, 4) == expected


def test_exp_is_circle_homomorphism(P5, heisenberg):
    # W(a) o W(b) = W(bch(a, b)); exhaustive on P5, sampled on heisenberg
    ctx = FlowsContext(P5)
    B = flows_circle(ctx)
    exp_of = [prelie_exp(ctx, (i,)) for i in range(25)]
    for a, b in itertools.product(range(25), repeat=2):
        assert B.circle(exp_of[a], exp_of[b]) == prelie_exp(ctx, bch((a,), (b,), P5, 4))
    assert B.circle((16,), (16,)) == (12,) == prelie_exp(ctx, (2,))

    ctx = FlowsContext(heisenberg)
    B = flows_circle(ctx)
    G = heisenberg.group
    rng = random.Random(2)
    for _ in range(400):
        a = G.from_index(rng.randrange(G.order))
        b = G.from_index(rng.randrange(G.order))
        lhs = B.circle(prelie_exp(ctx, a), prelie_exp(ctx, b))
        assert lhs == prelie_exp(ctx, bch(a, b, heisenberg, 4))
    # the argument order matters: swapping breaks on noncommutative rings
    a, b = (1, 0, 0), (0, 1, 0)
    lhs = B.circle(prelie_exp(ctx, a), prelie_exp(ctx, b))
    assert lhs == prelie_exp(ctx, bch(a, b, heisenberg, 4))
    assert lhs != prelie_exp(ctx, bch(b, a, heisenberg, 4))


def test_bch_gates(P5):
    with pytest.raises(HypothesisViolated):
        bch((1,), (1,), P5, 5)  # maxdeg must stay below p
    with pytest.raises(ValueError):
        bch((1,), (1,), P5, 0)


# -- round trips -----------------------------------------------------------------------


def test_roundtrip_braces(B5, B7, Z25):
    assert roundtrip_brace_check(Brace.trivial(Z25))
    assert roundtrip_brace_check(B5)
    assert roundtrip_brace_check(B7)
    assert roundtrip_brace_check(radical_brace(5, 3))


def test_roundtrip_prelie(P5, zero25, heisenberg):
    assert roundtrip_prelie_check(zero25)
    assert roundtrip_prelie_check(P5)
    assert roundtrip_prelie_check(scale_prelie(P5, 2))  # 10ab
    assert roundtrip_prelie_check(heisenberg)


def test_roundtrip_prelie_families(nilpotent_on_Z25, nilpotent_on_Z5xZ5):
    for P in list(nilpotent_on_Z25) + list(nilpotent_on_Z5xZ5):
        assert roundtrip_prelie_check(P), P.name
