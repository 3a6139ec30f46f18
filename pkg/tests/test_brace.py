"""Braces: axioms, derived operations, series, residuals, ideals."""

import numpy as np
import pytest

from braceflows import (
    AbelianPGroup,
    Brace,
    EnumerationBoundExceeded,
    HypothesisViolated,
    Modulus,
    PreLieRing,
    group_of_flows,
)
from braceflows.abelian import Subgroup


@pytest.fixture(scope="module")
def trivial25(Z25):
    return Brace.trivial(Z25)


@pytest.fixture(scope="module")
def unit_circle25(Z25):
    # a o b = a + b + ab: a monoid but not a group (1 + a may be a zero divisor)
    return Brace.from_operation(Z25, lambda a, b: ((a[0] + b[0] + a[0] * b[0]) % 25,))


@pytest.fixture(scope="module")
def flows_noncomm(Z5xZ5):
    # x.y = x_0 y_0 (0,1): nilpotent, noncommutative in the brace it generates
    sc = [[(0, 1), (0, 0)], [(0, 0), (0, 0)]]
    return group_of_flows(PreLieRing(Z5xZ5, sc, name="proj-square"))


def test_trivial_brace_verifies(trivial25):
    rep = trivial25.verify()
    assert rep.passed
    names = {c.name for c in rep.checks}
    assert "circle associativity" in names and "brace compatibility" in names


def test_radical_brace_verifies_and_matches_raw_oracle(B5):
    assert B5.verify().passed
    # independent oracle: raw-integer check of the compatibility law on all triples
    for a in range(25):
        for b in range(25):
            for c in range(25):
                circ = lambda x, y: (x + y + 5 * x * y) % 25
                assert (circ(a, (b + c) % 25) + a) % 25 == (circ(a, b) + circ(a, c)) % 25
    table = B5.circle_table
    assert all(
        table[a, b] == (a + b + 5 * a * b) % 25 for a in range(25) for b in range(25)
    )


def test_unit_circle_fails_on_inverses(unit_circle25):
    rep = unit_circle25.verify()
    assert not rep.passed
    failing = {c.name for c in rep.failures()}
    assert failing == {"circle inverses"}
    # 4 o b = 4 + 5b never reaches 0 mod 25
    assert (4,) in {c.counterexample[0] for c in rep.failures()}


def test_verify_reports_corrupted_entry(Z25, B5):
    table = B5.circle_table.copy()
    table[7, 9] = (table[7, 9] + 1) % 25
    rep = Brace(Z25, table).verify()
    assert not rep.passed
    bad = [c for c in rep.failures() if c.counterexample]
    assert bad, "expected a counterexample triple"


def test_star(trivial25, B5):
    assert trivial25.star((3,), (9,)) == (0,)
    assert B5.star((1,), (1,)) == (5,)
    assert B5.star((5,), (5,)) == (0,)  # 125 = 0 mod 25


def test_lambda_map(B5, trivial25):
    ident_images = trivial25.group.generators
    assert B5.lambda_map((0,)).images == ident_images
    lam1 = B5.lambda_map((1,))
    assert lam1.images == ((6,),)
    composed = lam1.compose(lam1)
    assert composed == B5.lambda_map(B5.circle((1,), (1,)))
    assert composed.images == ((11,),)  # 36 mod 25


def test_series(trivial25, B5):
    assert trivial25.series("strong").index == 2
    for kind in ("left", "right", "strong"):
        rep = B5.series(kind)
        assert rep.sizes() == (25, 5, 1)
        assert rep.index == 3
    with pytest.raises(ValueError):
        B5.series("middle")


def test_series_chain_matches_raw_oracle(B5):
    # independent oracle: span of {a*x} computed with raw integer sets
    star = lambda a, x: (5 * a * x) % 25
    products = {star(a, x) for a in range(25) for x in range(25)}
    span = {0}
    for g in products:
        span |= {(s + k * g) % 25 for s in span for k in range(25)}
    lib = {e[0] for e in B5.series("left").chain[1].elements}
    assert lib == span == {0, 5, 10, 15, 20}


def test_rump_left_nilpotency_bound(B5, B7):
    for B in (B5, B7):
        rep = B.series("left")
        assert rep.nilpotent and rep.index <= B.group.modulus.n + 1


def test_circle_power(B5):
    assert B5.circle_power((7,), 0) == (0,)
    # oracle: iterate the table directly
    acc = 0
    for _ in range(5):
        acc = (acc + 1 + 5 * acc * 1) % 25
    assert acc == 5
    assert B5.circle_power((1,), 5) == (5,)
    assert B5.circle_inverse((1,)) == (4,)  # 1 o 4 = 25 = 0


def test_star_sum_expansion_residual(trivial25, B5):
    assert trivial25.star_sum_expansion_residual((3,), (4,), (5,)) == (0,)
    assert B5.star_sum_expansion_residual((1,), (1,), (1,)) == (0,)
    assert B5.check_star_sum_expansion() is None
    with pytest.raises(ValueError):
        B5.star_sum_expansion_residual((1,), (1,), (1,), s=1)


def test_circle_power_binomial_residual(trivial25, B5):
    assert trivial25.circle_power_binomial_residual((2,), (3,), 1) == (0,)
    assert B5.circle_power_binomial_residual((1,), (1,), 1) == (0,)
    assert B5.circle_power_binomial_residual((2,), (1,), 1) == (0,)
    for i in range(3):
        assert B5.check_circle_power_binomial(i) is None


def test_frobenius_subgroups(B5, trivial25):
    additive, circle_side, equal = B5.frobenius_subgroups(2)
    assert equal and len(additive) == 1 and len(circle_side) == 1
    additive, circle_side, equal = B5.frobenius_subgroups(1)
    assert equal
    assert {e[0] for e in additive.elements} == {0, 5, 10, 15, 20}
    assert additive.indices == circle_side.indices
    additive, _, equal = trivial25.frobenius_subgroups(1)
    assert equal and len(additive) == 5


def test_frobenius_requires_large_p():
    # p = 5, n = 4 violates p > n+1
    G = AbelianPGroup(Modulus(5, 4), (4,))
    idx = np.arange(625, dtype=np.int64)
    table = (idx[:, None] + idx[None, :]) % 625
    B = Brace(G, table.astype(np.int32))
    with pytest.raises(HypothesisViolated):
        B.frobenius_subgroups(1)


def test_ideal_check(B5, Z25, flows_noncomm):
    assert B5.ideal_check(Z25.subgroup_closure(()))
    assert B5.ideal_check(Z25.annihilator(1))
    assert B5.ideal_check(Z25.subgroup_closure([(5,)]))  # pA
    # non-closed input is rejected
    assert not B5.ideal_check(Subgroup(Z25, frozenset({0, 1})))
    # in the flows brace of the projection-square ring, <(1,0)> is not an ideal:
    # (1,0)*(1,0) lands on the (0,1) axis
    S = flows_noncomm.group.subgroup_closure([(1, 0)])
    assert flows_noncomm.star((1, 0), (1, 0)) not in S
    assert not flows_noncomm.ideal_check(S)
    assert flows_noncomm.ideal_check(flows_noncomm.group.subgroup_closure([(0, 1)]))


def test_lambda_homomorphism_exhaustive(B5):
    lam, tab = B5.lambda_table, B5.circle_table
    for a in range(25):
        assert np.array_equal(lam[a][lam], lam[tab[a]])


def test_size_cap():
    G = AbelianPGroup(Modulus(5, 6), (6,))
    with pytest.raises(EnumerationBoundExceeded):
        Brace(G, np.zeros((G.order, G.order), dtype=np.int32))


def test_sampled_verification_mode():
    # |A| = 625 exceeds the default exhaustive limit; sampled mode must
    # still accept a correct brace and record the mode in the detail
    G = AbelianPGroup(Modulus(5, 4), (4,))
    idx = np.arange(625, dtype=np.int64)
    table = ((idx[:, None] + idx[None, :] + 5 * idx[:, None] * idx[None, :]) % 625)
    B = Brace(G, table.astype(np.int32), name="radical(5,4)")
    rep = B.verify()
    assert rep.passed
    assoc = next(c for c in rep.checks if c.name == "circle associativity")
    assert "sampled" in assoc.detail
    full = B.verify(max_exhaustive=625)
    assert full.passed
