"""Regular subgroups of the holomorph as Hopf-Galois structure witnesses.

Pipeline: automorphisms of a pre-Lie ring, coset representatives inside
the full additive automorphism group, twisted multiplications, and for
each twist the regular subgroup {(a, lambda_a)} of Hol(A, +) attached to
the group of flows of the twisted ring.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abelian import (
    DEFAULT_AUTOMORPHISM_BOUND,
    DEFAULT_GROUP_BOUND,
    AbelianPGroup,
    EndoMap,
    GroupElement,
    enumerate_automorphisms,
)
from .brace import Brace
from .correspond import group_of_flows
from .errors import NotAutomorphism
from .prelie import PreLieRing


@dataclass(frozen=True)
class HolomorphElement:
    """A pair (translation, additive automorphism) in Hol(A, +).

    Composition: (a, phi)(b, psi) = (a + phi(b), phi psi).
    """

    translation: GroupElement
    auto: EndoMap

    def __post_init__(self):
        if not self.auto.is_bijective():
            raise NotAutomorphism(f"map with images {self.auto.images} is not bijective")

    def compose(self, other: HolomorphElement) -> HolomorphElement:
        group = self.auto.group
        return HolomorphElement(
            group.add(self.translation, self.auto.apply(other.translation)),
            self.auto.compose(other.auto),
        )

    def act(self, x: GroupElement) -> GroupElement:
        return self.auto.group.add(self.translation, self.auto.apply(x))

    def key(self):
        return (self.translation, self.auto.images)


class RegularSubgroup:
    """A set of holomorph elements with exactly one per translation."""

    def __init__(self, elements):
        elements = tuple(elements)
        if not elements:
            raise ValueError("regular subgroup cannot be empty")
        group = elements[0].auto.group
        by_translation = {}
        for h in elements:
            t = h.translation
            if t in by_translation:
                raise ValueError(f"two elements share translation {t}")
            by_translation[t] = h
        if len(by_translation) != group.order:
            raise ValueError(
                f"need one element per translation: {len(by_translation)} != {group.order}"
            )
        self.group = group
        self.by_translation = by_translation
        self.elements = tuple(
            by_translation[group.from_index(i)] for i in range(group.order)
        )

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, RegularSubgroup)
            and self.group == other.group
            and {h.key() for h in self.elements} == {h.key() for h in other.elements}
        )

    def __hash__(self):
        return hash(frozenset(h.key() for h in self.elements))

    def is_closed(self) -> bool:
        """Exhaustive closure check under holomorph composition.

        Works on stacked automorphism tables: for elements (t1, f) and
        (t2, g) the product must be the stored element at translation
        t1 + f(t2) with table f o g.
        """
        G = self.group
        N = G.order
        add = G.add_table
        tables = np.stack([h.auto.table for h in self.elements])  # M[t] by index
        for t1 in range(N):
            f = tables[t1]
            t3 = add[t1, f]  # translation of the product against each t2
            if not np.array_equal(f[tables], tables[t3]):
                return False
        return True

    def is_regular(self) -> bool:
        """Transitivity on A with trivial stabilizer of 0."""
        zero = self.group.zero
        ident = EndoMap.identity(self.group)
        return (
            len(self.elements) == self.group.order
            and self.by_translation[zero].auto == ident
        )


def prelie_automorphisms(
    P: PreLieRing,
    group_bound: int = DEFAULT_GROUP_BOUND,
    max_results: int = DEFAULT_AUTOMORPHISM_BOUND,
) -> list[EndoMap]:
    """Additive automorphisms that also preserve the multiplication.

    Preservation on generator pairs suffices: both sides are biadditive
    in the arguments.
    """
    P.require_verified()
    G = P.group
    T = P.dot_table
    gen_idx = [G.index(g) for g in G.generators]
    out = []
    for phi in enumerate_automorphisms(G, group_bound, max_results):
        tab = phi.table
        if all(
            int(tab[T[i, j]]) == int(T[tab[i], tab[j]])
            for i in gen_idx
            for j in gen_idx
        ):
            out.append(phi)
    return out


def coset_representatives(
    P: PreLieRing,
    group_bound: int = DEFAULT_GROUP_BOUND,
    max_results: int = DEFAULT_AUTOMORPHISM_BOUND,
) -> list[EndoMap]:
    """One representative per left coset of Aut(A,+,.) in Aut(A,+).

    Representatives are canonical: the smallest automorphism of each
    coset in the generator-image order.
    """
    all_autos = enumerate_automorphisms(P.group, group_bound, max_results)
    ring_autos = prelie_automorphisms(P, group_bound, max_results)
    seen = set()
    reps = []
    for phi in all_autos:  # already sorted canonically
        if phi.images in seen:
            continue
        reps.append(phi)
        for psi in ring_autos:
            seen.add(phi.compose(psi).images)
    assert len(reps) * len(ring_autos) == len(all_autos)
    return reps


def twist(P: PreLieRing, phi: EndoMap, name: str = "") -> PreLieRing:
    """Conjugated multiplication a .' b = phi^{-1}(phi(a) . phi(b))."""
    if phi.group != P.group:
        raise NotAutomorphism("automorphism acts on a different group")
    if not phi.is_bijective():
        raise NotAutomorphism("twist requires an additive automorphism")
    P.require_verified()
    G = P.group
    inv = phi.inverse()
    gens = G.generators
    sc = [
        [inv.apply(P.dot(phi.apply(a), phi.apply(b))) for b in gens]
        for a in gens
    ]
    out = PreLieRing(G, sc, name or f"twist({P.name or 'prelie'})")
    out.require_verified()
    return out


def regular_subgroup(B: Brace) -> RegularSubgroup:
    """{(a, lambda_a) : a in A} inside Hol(A, +); verified closed and regular."""
    B.require_verified()
    G = B.group
    elems = [
        HolomorphElement(G.from_index(i), B.lambda_map(G.from_index(i)))
        for i in range(G.order)
    ]
    sub = RegularSubgroup(elems)
    if not sub.is_closed():
        raise AssertionError("lambda image failed holomorph closure")
    if not sub.is_regular():
        raise AssertionError("lambda image failed regularity")
    return sub


def hopf_galois_structures(
    P: PreLieRing,
    group_bound: int = DEFAULT_GROUP_BOUND,
    max_results: int = DEFAULT_AUTOMORPHISM_BOUND,
) -> list[RegularSubgroup]:
    """One regular subgroup per coset representative; pairwise distinct.

    For each representative: twist the multiplication, take the group of
    flows, and emit its lambda-image inside the holomorph.
    """
    out = []
    for rep in coset_representatives(P, group_bound, max_results):
        twisted = twist(P, rep)
        flows = group_of_flows(twisted)
        out.append(regular_subgroup(flows))
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if out[i] == out[j]:
                raise AssertionError(
                    f"structures {i} and {j} coincide; twists must stay distinct"
                )
    return out
