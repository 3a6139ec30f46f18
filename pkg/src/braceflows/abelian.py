"""Finite abelian p-groups in invariant-factor form.

A group is Z/p^e1 x ... x Z/p^er with e1 >= e2 >= ... >= er and sum(e) = n.
Elements are coordinate tuples; internally every element also has a
row-major index into [0, p^n), and the group caches numpy index tables
(addition, negation, scalar action) so that exhaustive verification loops
can run vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import Modulus
from .errors import EnumerationBoundExceeded

GroupElement = tuple  # coordinate tuple, coordinate i reduced mod p^{e_i}

# Brute-force caps: |G| for any enumeration, and a separate guard on the
# predicted automorphism count (elementary abelian groups of small order
# can still have astronomically many automorphisms).
DEFAULT_GROUP_BOUND = 625
DEFAULT_AUTOMORPHISM_BOUND = 10**6

_CHUNK_ENTRIES = 1 << 22  # table construction works in chunks of ~4M cells


class AbelianPGroup:
    """Z/p^e1 x ... x Z/p^er with fixed standard generators."""

    def __init__(self, modulus: Modulus, invariants):
        invariants = tuple(int(e) for e in invariants)
        if not invariants or any(e < 1 for e in invariants):
            raise ValueError(f"invariants must be positive, got {invariants}")
        if list(invariants) != sorted(invariants, reverse=True):
            raise ValueError(f"invariants must be non-increasing, got {invariants}")
        if sum(invariants) != modulus.n:
            raise ValueError(
                f"invariants {invariants} must sum to n={modulus.n}"
            )
        self.modulus = modulus
        self.invariants = invariants
        self.rank = len(invariants)
        self.coord_moduli = tuple(modulus.p**e for e in invariants)
        self.order = modulus.value
        self._coords = None
        self._add = None
        self._neg = None
        self._smul = {}

    def __repr__(self):
        parts = " x ".join(f"Z/{m}" for m in self.coord_moduli)
        return f"AbelianPGroup({parts})"

    def __eq__(self, other):
        return (
            isinstance(other, AbelianPGroup)
            and self.modulus == other.modulus
            and self.invariants == other.invariants
        )

    def __hash__(self):
        return hash((self.modulus, self.invariants))

    # -- elements ---------------------------------------------------------

    def element(self, coords) -> GroupElement:
        """Normalize coordinates into the canonical tuple form.

        For rank-1 groups a bare int is accepted as the single coordinate.
        """
        if isinstance(coords, int):
            if self.rank != 1:
                raise ValueError("bare int element only valid for rank-1 groups")
            coords = (coords,)
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(c % m for c, m in zip(coords, self.coord_moduli))

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.rank

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        r = self.rank
        return tuple(tuple(1 if j == i else 0 for j in range(r)) for i in range(r))

    def index(self, a: GroupElement) -> int:
        """Row-major index of an element."""
        idx = 0
        for c, m in zip(a, self.coord_moduli):
            idx = idx * m + (c % m)
        return idx

    def from_index(self, idx: int) -> GroupElement:
        coords = []
        for m in reversed(self.coord_moduli):
            coords.append(idx % m)
            idx //= m
        return tuple(reversed(coords))

    def elements(self):
        """All elements in canonical (index) order."""
        return (self.from_index(i) for i in range(self.order))

    # -- arithmetic on tuples ----------------------------------------------

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.coord_moduli))

    def neg(self, a: GroupElement) -> GroupElement:
        return tuple((-x) % m for x, m in zip(a, self.coord_moduli))

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x - y) % m for x, y, m in zip(a, b, self.coord_moduli))

    def scalar_mul(self, c: int, a: GroupElement) -> GroupElement:
        """Coordinatewise c*a, i.e. the sum of c copies of a."""
        return tuple((c % m) * x % m for x, m in zip(a, self.coord_moduli))

    def element_order(self, a: GroupElement) -> int:
        """Additive order: smallest p^j with p^j * a = 0."""
        order = 1
        for c, m in zip(a, self.coord_moduli):
            order = max(order, m // math.gcd(c, m))
        return order

    # -- numpy index tables --------------------------------------------------

    @property
    def coords_array(self):
        """(order, rank) int64 array of all coordinate vectors, index order."""
        if self._coords is None:
            mods = self.coord_moduli
            idx = np.arange(self.order, dtype=np.int64)
            cols = []
            for m in reversed(mods):
                cols.append(idx % m)
                idx = idx // m
            self._coords = np.stack(list(reversed(cols)), axis=1)
        return self._coords

    def encode(self, coords):
        """Encode an (..., rank) coordinate array into element indices."""
        mods = self.coord_moduli
        out = np.zeros(coords.shape[:-1], dtype=np.int64)
        for i, m in enumerate(mods):
            out = out * m + coords[..., i] % m
        return out.astype(np.int32)

    @property
    def add_table(self):
        """(order, order) table of element-index addition."""
        if self._add is None:
            N = self.order
            C = self.coords_array
            mods = np.array(self.coord_moduli, dtype=np.int64)
            out = np.empty((N, N), dtype=np.int32)
            step = max(1, _CHUNK_ENTRIES // N)
            for lo in range(0, N, step):
                hi = min(lo + step, N)
                block = (C[lo:hi, None, :] + C[None, :, :]) % mods
                out[lo:hi] = self.encode(block)
            self._add = out
        return self._add

    @property
    def neg_table(self):
        if self._neg is None:
            mods = np.array(self.coord_moduli, dtype=np.int64)
            self._neg = self.encode((-self.coords_array) % mods)
        return self._neg

    def scalar_table(self, c: int):
        """Index map a -> c*a (cached per reduced scalar)."""
        key = c % self.coord_moduli[0]
        if key not in self._smul:
            mods = np.array(self.coord_moduli, dtype=np.int64)
            cc = np.array([key % m for m in self.coord_moduli], dtype=np.int64)
            self._smul[key] = self.encode((cc * self.coords_array) % mods)
        return self._smul[key]

    # -- subgroups -----------------------------------------------------------

    def subgroup_closure(self, gens) -> Subgroup:
        """Smallest additive subgroup containing gens."""
        return self._closure_from_indices(
            sorted({self.index(self.element(g)) for g in gens})
        )

    def _closure_from_indices(self, gen_indices, generator_indices=None) -> Subgroup:
        gen_idx = tuple(sorted(set(int(g) for g in gen_indices)))
        add = self.add_table
        closed = {0}
        for g in gen_idx:
            # fold in all multiples of g (abelian: S + <g> suffices)
            layer = set(closed)
            x = g
            while x != 0:
                layer.update(int(add[s, x]) for s in closed)
                x = int(add[x, g])
            closed = layer
        if generator_indices is None:
            generator_indices = gen_idx
        return Subgroup(self, frozenset(closed), tuple(generator_indices))

    def annihilator(self, i: int) -> Subgroup:
        """Subgroup of elements killed by p^i."""
        if i < 0:
            raise ValueError("i must be >= 0")
        p = self.modulus.p
        gens = []
        for j, e in enumerate(self.invariants):
            c = p ** max(e - i, 0)
            if c < self.coord_moduli[j]:
                gens.append(self.scalar_mul(c, self.generators[j]))
        return self.subgroup_closure(gens)

    def full_subgroup(self) -> Subgroup:
        return self.subgroup_closure(self.generators)

    def trivial_subgroup(self) -> Subgroup:
        return self.subgroup_closure(())


class Subgroup:
    """An additive subgroup stored as its full element set.

    Full sets (not just generators) are kept because brace series
    computations must range one side of * over every element.
    """

    def __init__(self, parent: AbelianPGroup, indices: frozenset, generator_indices=()):
        self.parent = parent
        self.indices = frozenset(indices)
        self.sorted_indices = tuple(sorted(self.indices))
        self.generator_indices = tuple(generator_indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, elem: GroupElement) -> bool:
        return self.parent.index(self.parent.element(elem)) in self.indices

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.indices == other.indices
        )

    def __hash__(self):
        return hash((self.parent, self.indices))

    def __le__(self, other: Subgroup) -> bool:
        return self.indices <= other.indices

    def __repr__(self):
        return f"Subgroup(order={len(self)})"

    @property
    def elements(self) -> tuple[GroupElement, ...]:
        """Elements in canonical (index-sorted) order."""
        return tuple(self.parent.from_index(i) for i in self.sorted_indices)

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        return tuple(self.parent.from_index(i) for i in self.generator_indices)

    def is_trivial(self) -> bool:
        return self.indices == {0}

    def is_closed(self) -> bool:
        """Exhaustive check of closure under + and negation."""
        add = self.parent.add_table
        neg = self.parent.neg_table
        idx = self.sorted_indices
        if 0 not in self.indices:
            return False
        if any(int(neg[i]) not in self.indices for i in idx):
            return False
        return all(int(add[i, j]) in self.indices for i in idx for j in idx)


@dataclass(frozen=True)
class EndoMap:
    """Additive endomorphism, tabulated on the standard generators."""

    group: AbelianPGroup
    images: tuple  # GroupElement per generator

    def __post_init__(self):
        if len(self.images) != self.group.rank:
            raise ValueError("one image per generator required")
        images = tuple(self.group.element(a) for a in self.images)
        object.__setattr__(self, "images", images)
        for img, m in zip(images, self.group.coord_moduli):
            if self.group.element_order(img) > m:
                raise ValueError(
                    f"image {img} has order exceeding generator order {m}"
                )

    @classmethod
    def identity(cls, group: AbelianPGroup) -> EndoMap:
        return cls(group, group.generators)

    @property
    def table(self):
        """Full index map, built once on demand."""
        tab = getattr(self, "_table", None)
        if tab is None:
            G = self.group
            C = G.coords_array
            mods = np.array(G.coord_moduli, dtype=np.int64)
            acc = np.zeros((G.order, G.rank), dtype=np.int64)
            for u, img in enumerate(self.images):
                acc = (acc + C[:, u, None] * np.array(img, dtype=np.int64)) % mods
            tab = G.encode(acc)
            object.__setattr__(self, "_table", tab)
        return tab

    def apply(self, a: GroupElement) -> GroupElement:
        return self.group.from_index(int(self.table[self.group.index(self.group.element(a))]))

    def __call__(self, a: GroupElement) -> GroupElement:
        return self.apply(a)

    def compose(self, other: EndoMap) -> EndoMap:
        """self after other: (self.compose(other))(x) = self(other(x))."""
        return EndoMap(self.group, tuple(self.apply(img) for img in other.images))

    def is_bijective(self) -> bool:
        return len(np.unique(self.table)) == self.group.order

    def inverse(self) -> EndoMap:
        if not self.is_bijective():
            raise ValueError("endomorphism is not bijective")
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.group.order, dtype=self.table.dtype)
        G = self.group
        images = tuple(G.from_index(int(inv[G.index(g)])) for g in G.generators)
        return EndoMap(G, images)

    def image_indices(self) -> tuple[int, ...]:
        return tuple(self.group.index(a) for a in self.images)

    def __eq__(self, other):
        return (
            isinstance(other, EndoMap)
            and self.group == other.group
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.group, self.images))

    def __lt__(self, other: EndoMap):
        return self.image_indices() < other.image_indices()


def automorphism_group_order(G: AbelianPGroup) -> int:
    """Closed-form |Aut(G)| for a finite abelian p-group.

    Independent oracle for enumerate_automorphisms: with ascending
    invariants f_1 <= ... <= f_r,
        |Aut| = prod_k (p^d_k - p^(k-1)) * prod_j p^(f_j (r-d_j))
                * prod_i p^((f_i - 1)(r - c_i + 1))
    where d_k = max{l : f_l = f_k} and c_k = min{l : f_l = f_k}
    (1-based positions).
    """
    p = G.modulus.p
    f = sorted(G.invariants)
    r = len(f)
    d = [max(l + 1 for l in range(r) if f[l] == f[k]) for k in range(r)]
    c = [min(l + 1 for l in range(r) if f[l] == f[k]) for k in range(r)]
    total = 1
    for k in range(r):
        total *= p ** d[k] - p**k
    for j in range(r):
        total *= p ** (f[j] * (r - d[j]))
    for i in range(r):
        total *= p ** ((f[i] - 1) * (r - c[i] + 1))
    return total


def enumerate_automorphisms(
    G: AbelianPGroup,
    group_bound: int = DEFAULT_GROUP_BOUND,
    max_results: int = DEFAULT_AUTOMORPHISM_BOUND,
) -> list[EndoMap]:
    """All additive automorphisms of G, in canonical (sorted) order.

    Brute-forces generator images with order-compatibility pruning and a
    partial-span injectivity prune, then validates bijectivity.  The count
    is checked against the closed-form automorphism group order.
    """
    if G.order > group_bound:
        raise EnumerationBoundExceeded(
            f"|G| = {G.order} exceeds enumeration bound {group_bound}"
        )
    expected = automorphism_group_order(G)
    if expected > max_results:
        raise EnumerationBoundExceeded(
            f"|Aut(G)| = {expected} exceeds result bound {max_results}"
        )

    # candidate images for generator i: elements of order exactly p^{e_i}
    all_elems = [G.from_index(i) for i in range(G.order)]
    candidates = []
    for m in G.coord_moduli:
        candidates.append([a for a in all_elems if G.element_order(a) == m])

    prefix_sizes = []
    size = 1
    for m in G.coord_moduli:
        size *= m
        prefix_sizes.append(size)

    out: list[EndoMap] = []
    chosen: list[GroupElement] = []

    def extend(i: int):
        if i == G.rank:
            phi = EndoMap(G, tuple(chosen))
            if phi.is_bijective():
                out.append(phi)
            return
        for img in candidates[i]:
            chosen.append(img)
            if len(G.subgroup_closure(chosen)) == prefix_sizes[i]:
                extend(i + 1)
            chosen.pop()

    extend(0)
    out.sort()
    assert len(out) == expected, (
        f"enumeration found {len(out)} automorphisms, closed form gives {expected}"
    )
    return out
