"""Abelian p-group layer: elements, subgroups, automorphisms."""

import pytest

from braceflows import (
    AbelianPGroup,
    EndoMap,
    EnumerationBoundExceeded,
    Modulus,
    automorphism_group_order,
    enumerate_automorphisms,
)


@pytest.fixture(scope="module")
def Z25xZ5():
    return AbelianPGroup(Modulus(5, 3), (2, 1))


def test_invariant_validation():
    with pytest.raises(ValueError):
        AbelianPGroup(Modulus(5, 2), (1, 2))  # must be non-increasing
    with pytest.raises(ValueError):
        AbelianPGroup(Modulus(5, 2), (1,))  # must sum to n
    with pytest.raises(ValueError):
        AbelianPGroup(Modulus(5, 2), (2, 0))


def test_element_indexing_roundtrip(Z25xZ5):
    for i in range(Z25xZ5.order):
        assert Z25xZ5.index(Z25xZ5.from_index(i)) == i
    assert Z25xZ5.element((26, 7)) == (1, 2)
    assert Z25xZ5.zero == (0, 0)


def test_scalar_mul(Z25, Z25xZ5):
    assert Z25.scalar_mul(0, (7,)) == (0,)
    assert Z25.scalar_mul(7, (4,)) == (3,)  # 28 mod 25
    # coordinatewise on Z/25 x Z/5
    assert Z25xZ5.scalar_mul(5, (1, 1)) == (5, 0)
    assert Z25.scalar_mul(-1, (7,)) == Z25.neg((7,))


def test_element_order(Z25xZ5):
    assert Z25xZ5.element_order((0, 0)) == 1
    assert Z25xZ5.element_order((5, 0)) == 5
    assert Z25xZ5.element_order((1, 0)) == 25
    assert Z25xZ5.element_order((0, 1)) == 5


def test_subgroup_closure(Z25, Z5xZ5):
    assert Z25.subgroup_closure(()).elements == ((0,),)
    five = Z25.subgroup_closure([(5,)])
    assert five.elements == ((0,), (5,), (10,), (15,), (20,))
    assert len(Z5xZ5.subgroup_closure([(1, 0)])) == 5

    # idempotent and monotone
    again = Z25.subgroup_closure(five.elements)
    assert again == five
    bigger = Z25.subgroup_closure([(5,), (1,)])
    assert five.indices <= bigger.indices
    assert len(bigger) == 25


def test_subgroup_is_closed(Z25):
    assert Z25.subgroup_closure([(5,)]).is_closed()
    from braceflows.abelian import Subgroup

    ragged = Subgroup(Z25, frozenset({0, 5, 11}))
    assert not ragged.is_closed()


def test_annihilator(Z25, Z25xZ5):
    assert Z25.annihilator(0).elements == ((0,),)
    assert Z25.annihilator(1).elements == ((0,), (5,), (10,), (15,), (20,))
    assert len(Z25.annihilator(2)) == 25
    for i in range(3):
        assert Z25xZ5.annihilator(i).indices <= Z25xZ5.annihilator(i + 1).indices
    assert len(Z25xZ5.annihilator(3)) == Z25xZ5.order
    # killed-by-p^i has p^min(i, e_j) solutions per coordinate
    assert len(Z25xZ5.annihilator(1)) == 25


def test_endomap_requires_order_compatibility(Z25xZ5):
    with pytest.raises(ValueError):
        EndoMap(Z25xZ5, ((1, 0), (1, 0)))  # image of the order-5 generator has order 25
    phi = EndoMap(Z25xZ5, ((1, 0), (5, 0)))
    assert phi.apply((0, 1)) == (5, 0)


def test_endomap_compose_and_inverse(Z25):
    phi = EndoMap(Z25, ((7,),))  # multiplication by 7, a unit
    inv = phi.inverse()
    assert phi.compose(inv) == EndoMap.identity(Z25)
    assert inv.compose(phi) == EndoMap.identity(Z25)


def test_automorphism_counts(Z5, Z25, Z5xZ5, Z25xZ5):
    # frozen counts: phi(5), phi(25), |GL_2(F_5)| = (25-1)(25-5), and 2000
    # for Z/25 x Z/5 (direct count: diagonal-unit upper/lower parameters).
    assert len(enumerate_automorphisms(Z5)) == 4
    assert len(enumerate_automorphisms(Z25)) == 20
    assert len(enumerate_automorphisms(Z5xZ5)) == 480
    assert len(enumerate_automorphisms(Z25xZ5)) == 2000
    assert automorphism_group_order(Z5xZ5) == 480
    assert automorphism_group_order(Z25xZ5) == 2000


def test_automorphisms_form_a_group(Z25, Z5xZ5):
    autos = enumerate_automorphisms(Z25)
    ident = EndoMap.identity(Z25)
    assert all(phi.compose(phi.inverse()) == ident for phi in autos)

    autos = enumerate_automorphisms(Z5xZ5)
    lookup = {phi.images for phi in autos}
    import random

    rng = random.Random(0)
    for _ in range(25):
        a, b = rng.choice(autos), rng.choice(autos)
        assert a.compose(b).images in lookup


def test_automorphisms_are_bijective_and_sorted(Z5xZ5):
    autos = enumerate_automorphisms(Z5xZ5)
    assert all(phi.is_bijective() for phi in autos)
    keys = [phi.image_indices() for phi in autos]
    assert keys == sorted(keys)


def test_enumeration_bounds():
    big = AbelianPGroup(Modulus(5, 5), (1,) * 5)
    with pytest.raises(EnumerationBoundExceeded):
        enumerate_automorphisms(big)  # |G| = 3125 > 625
    wide = AbelianPGroup(Modulus(5, 4), (1,) * 4)
    with pytest.raises(EnumerationBoundExceeded):
        enumerate_automorphisms(wide)  # |GL_4(F_5)| overflows the result bound
