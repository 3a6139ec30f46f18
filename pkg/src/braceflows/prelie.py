"""Pre-Lie rings on abelian p-groups via structure constants.

The multiplication is stored on generator pairs only (it is biadditive,
so this is lossless) and extended to a full index table on demand.  The
ring axiom is the left-symmetry of the associator:
    (x.y).z - x.(y.z) = (y.x).z - y.(x.z).
"""

from __future__ import annotations

import numpy as np

from .abelian import AbelianPGroup, GroupElement, Subgroup
from .brace import SeriesReport
from .errors import NotAnIdeal, NotNilpotent
from .report import VerificationReport

_CHUNK_ENTRIES = 1 << 22


class PreLieRing:
    """An abelian p-group with a biadditive multiplication."""

    def __init__(self, group: AbelianPGroup, sc, name: str = ""):
        r = group.rank
        sc = tuple(tuple(group.element(sc[i][j]) for j in range(r)) for i in range(r))
        self.group = group
        self.sc = sc
        self.name = name
        self._dot = None
        self._series = {}
        self._report = None

    @classmethod
    def zero(cls, group: AbelianPGroup, name: str = "zero multiplication") -> PreLieRing:
        z = group.zero
        return cls(group, [[z] * group.rank for _ in range(group.rank)], name)

    @classmethod
    def from_operation(cls, group: AbelianPGroup, op, name: str = "") -> PreLieRing:
        gens = group.generators
        sc = [[op(a, b) for b in gens] for a in gens]
        return cls(group, sc, name)

    def __repr__(self):
        label = self.name or "prelie"
        return f"PreLieRing({label} on {self.group!r})"

    def __eq__(self, other):
        return (
            isinstance(other, PreLieRing)
            and self.group == other.group
            and self.sc == other.sc
        )

    def __hash__(self):
        return hash((self.group, self.sc))

    # -- multiplication ----------------------------------------------------

    def dot(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """Biadditive extension of the structure constants."""
        G = self.group
        a = G.element(a)
        b = G.element(b)
        out = G.zero
        for u, xu in enumerate(a):
            if xu == 0:
                continue
            for v, yv in enumerate(b):
                if yv == 0:
                    continue
                out = G.add(out, G.scalar_mul(xu * yv, self.sc[u][v]))
        return out

    @property
    def dot_table(self):
        """(order, order) index table of the multiplication."""
        if self._dot is None:
            G = self.group
            N, r = G.order, G.rank
            C = G.coords_array
            mods = np.array(G.coord_moduli, dtype=np.int64)
            sc = np.array(self.sc, dtype=np.int64)  # (r, r, r) coords
            out = np.empty((N, N), dtype=np.int32)
            step = max(1, _CHUNK_ENTRIES // (N * r))
            for lo in range(0, N, step):
                hi = min(lo + step, N)
                acc = np.zeros((hi - lo, N, r), dtype=np.int64)
                for u in range(r):
                    xu = C[lo:hi, u]
                    for v in range(r):
                        coef = xu[:, None] * C[None, :, v]
                        term = (coef[:, :, None] % mods) * sc[u, v] % mods
                        acc = (acc + term) % mods
                out[lo:hi] = G.encode(acc)
            self._dot = out
        return self._dot

    def lie_bracket(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """a.b - b.a, the commutator of the pre-Lie multiplication."""
        return self.group.sub(self.dot(a, b), self.dot(b, a))

    # -- verification --------------------------------------------------------

    def verify(self) -> VerificationReport:
        """Well-definedness plus the left-symmetry identity on generator triples.

        Biadditivity makes the generator-triple check equivalent to the
        identity over all |A|^3 triples.
        """
        G = self.group
        report = VerificationReport(self.name or "prelie")

        ok = True
        bad = None
        for i, mi in enumerate(G.coord_moduli):
            for j, mj in enumerate(G.coord_moduli):
                if G.element_order(self.sc[i][j]) > min(mi, mj):
                    ok = False
                    bad = (i, j)
                    break
            if not ok:
                break
        report.add("structure constants respect generator orders", ok, counterexample=bad)
        if not ok:
            self._report = report
            return report

        gens = G.generators
        bad = None
        for x in gens:
            for y in gens:
                for z in gens:
                    lhs = G.sub(self.dot(self.dot(x, y), z), self.dot(x, self.dot(y, z)))
                    rhs = G.sub(self.dot(self.dot(y, x), z), self.dot(y, self.dot(x, z)))
                    if lhs != rhs:
                        bad = (x, y, z)
                        break
                if bad:
                    break
            if bad:
                break
        report.add("associator left-symmetry (generator triples)", bad is None, counterexample=bad)
        self._report = report
        return report

    @property
    def verification(self) -> VerificationReport:
        if self._report is None:
            self.verify()
        return self._report

    def require_verified(self):
        if not self.verification.passed:
            raise ValueError(
                f"pre-Lie axioms fail: {[c.name for c in self.verification.failures()]}"
            )

    def check_identity_exhaustive(self):
        """Left-symmetry over all |A|^3 triples; counterexample or None.

        Cross-validates the generator-triple verification path.
        """
        G = self.group
        T = self.dot_table
        add, neg = G.add_table, G.neg_table
        for a in range(G.order):
            row_a = T[a]
            lhs = add[T[row_a, :], neg[T[a, T]]]
            rhs = add[T[T[:, a], :], neg[T[:, row_a]]]
            if not np.array_equal(lhs, rhs):
                b, c = map(int, np.argwhere(lhs != rhs)[0])
                return (G.from_index(a), G.from_index(b), G.from_index(c))
        return None

    # -- series ----------------------------------------------------------------

    def _span_pairs(self, left_gens, right_gens) -> Subgroup:
        T = self.dot_table
        li = np.asarray(left_gens, dtype=np.intp)
        ri = np.asarray(right_gens, dtype=np.intp)
        prods = np.unique(T[li[:, None], ri[None, :]])
        return self.group._closure_from_indices(prods.tolist())

    def series(self, kind: str) -> SeriesReport:
        """Left / right / strong chain; biadditivity allows generators on both sides."""
        if kind not in ("left", "right", "strong"):
            raise ValueError(f"kind must be left, right or strong, got {kind!r}")
        if kind not in self._series:
            self.require_verified()
            self._series[kind] = self._compute_series(kind)
        return self._series[kind]

    def _compute_series(self, kind: str) -> SeriesReport:
        G = self.group
        full = G.full_subgroup()
        if full.is_trivial():
            return SeriesReport(kind, (full,), 1)
        gens_A = [G.index(g) for g in G.generators]
        chain = [full]
        while True:
            if kind == "left":
                nxt = self._span_pairs(gens_A, chain[-1].generator_indices or (0,))
            elif kind == "right":
                nxt = self._span_pairs(chain[-1].generator_indices or (0,), gens_A)
            else:
                i = len(chain)
                T = self.dot_table
                pieces = set()
                for j in range(1, i + 1):
                    li = np.asarray(chain[j - 1].generator_indices or (0,), dtype=np.intp)
                    ri = np.asarray(chain[i - j].generator_indices or (0,), dtype=np.intp)
                    pieces.update(np.unique(T[li[:, None], ri[None, :]]).tolist())
                nxt = G._closure_from_indices(sorted(pieces))
            if nxt.is_trivial():
                chain.append(nxt)
                return SeriesReport(kind, tuple(chain), len(chain))
            if nxt.indices == chain[-1].indices:
                return SeriesReport(kind, tuple(chain), None)
            chain.append(nxt)

    def left_index(self) -> int:
        rep = self.series("left")
        if not rep.nilpotent:
            raise NotNilpotent(f"{self!r} is not left nilpotent")
        return rep.index

    def strong_index(self) -> int:
        rep = self.series("strong")
        if not rep.nilpotent:
            raise NotNilpotent(f"{self!r} is not nilpotent")
        return rep.index

    def is_nilpotent(self) -> bool:
        return self.series("strong").nilpotent

    def solvable_series(self) -> SeriesReport:
        """I_1 = A, I_{i+1} = span(I_i . I_i), until 0 or stabilization."""
        self.require_verified()
        G = self.group
        chain = [G.full_subgroup()]
        while True:
            gens = chain[-1].generator_indices or (0,)
            nxt = self._span_pairs(gens, gens)
            if nxt.is_trivial():
                chain.append(nxt)
                return SeriesReport("solvable", tuple(chain), len(chain))
            if nxt.indices == chain[-1].indices:
                return SeriesReport("solvable", tuple(chain), None)
            chain.append(nxt)

    def lie_lower_central_series(self) -> SeriesReport:
        """Lower central series of the associated Lie ring [a,b] = a.b - b.a."""
        self.require_verified()
        G = self.group
        T = self.dot_table
        add, neg = G.add_table, G.neg_table
        gens_A = np.asarray([G.index(g) for g in G.generators], dtype=np.intp)
        chain = [G.full_subgroup()]
        while True:
            li = np.asarray(chain[-1].generator_indices or (0,), dtype=np.intp)
            forward = T[li[:, None], gens_A[None, :]]
            backward = T[gens_A[:, None], li[None, :]].T
            brackets = add[forward, neg[backward]]
            nxt = G._closure_from_indices(np.unique(brackets).tolist())
            if nxt.is_trivial():
                chain.append(nxt)
                return SeriesReport("lie-lower-central", tuple(chain), len(chain))
            if nxt.indices == chain[-1].indices:
                return SeriesReport("lie-lower-central", tuple(chain), None)
            chain.append(nxt)

    def lie_class(self) -> int:
        rep = self.lie_lower_central_series()
        if not rep.nilpotent:
            raise NotNilpotent("associated Lie ring is not nilpotent")
        return rep.index - 1

    # -- ideals -------------------------------------------------------------------

    def socle(self) -> Subgroup:
        """{a : a.A = 0}; always an ideal."""
        self.require_verified()
        G = self.group
        gens_A = [G.index(g) for g in G.generators]
        rows = self.dot_table[:, gens_A]
        idx = np.nonzero((rows == 0).all(axis=1))[0]
        return Subgroup(G, frozenset(int(i) for i in idx), tuple(int(i) for i in idx))

    def ideal_check(self, S: Subgroup) -> bool:
        """True iff S is an additive subgroup with S.A <= S and A.S <= S."""
        self.require_verified()
        if not S.is_closed():
            return False
        G = self.group
        inside = np.zeros(G.order, dtype=bool)
        inside[list(S.indices)] = True
        s_gens = np.asarray(S.generator_indices or S.sorted_indices, dtype=np.intp)
        g_all = np.asarray([G.index(g) for g in G.generators], dtype=np.intp)
        T = self.dot_table
        if not inside[T[s_gens[:, None], g_all[None, :]]].all():
            return False
        return bool(inside[T[g_all[:, None], s_gens[None, :]]].all())

    def product_ideal(self, ideal: Subgroup) -> Subgroup:
        """Additive span of I.A for an ideal I; again an ideal."""
        if not self.ideal_check(ideal):
            raise NotAnIdeal("argument fails the pre-Lie ideal check")
        G = self.group
        gens_I = ideal.generator_indices or ideal.sorted_indices
        gens_A = [G.index(g) for g in G.generators]
        return self._span_pairs(gens_I, gens_A)


def scale_prelie(P: PreLieRing, alpha: int, name: str = "") -> PreLieRing:
    """Multiplication a (.) b = alpha * (a.b); again a pre-Lie ring."""
    P.require_verified()
    G = P.group
    sc = [[G.scalar_mul(alpha, P.sc[i][j]) for j in range(G.rank)] for i in range(G.rank)]
    return PreLieRing(G, sc, name or (f"{P.name} scaled by {alpha}" if P.name else ""))


class DorrohRing:
    """The base ring with a formal two-sided identity adjoined.

    Elements are pairs (r, m) with r in A and the integer coordinate m
    reduced mod p^n; only residues mod p^n ever act on A, and the
    reduction keeps the extension finite.  Multiplication:
        (r, a) . (s, b) = (r.s + a s + b r, a b).
    """

    def __init__(self, base: PreLieRing):
        base.require_verified()
        self.base = base
        self.scalar_modulus = base.group.modulus.value

    @property
    def zero(self):
        return (self.base.group.zero, 0)

    @property
    def one(self):
        return (self.base.group.zero, 1)

    def element(self, r, m):
        return (self.base.group.element(r), m % self.scalar_modulus)

    def elements(self):
        G = self.base.group
        for i in range(G.order):
            r = G.from_index(i)
            for m in range(self.scalar_modulus):
                yield (r, m)

    def add(self, x, y):
        return (
            self.base.group.add(x[0], y[0]),
            (x[1] + y[1]) % self.scalar_modulus,
        )

    def mul(self, x, y):
        G = self.base.group
        r, a = x
        s, b = y
        prod = self.base.dot(r, s)
        prod = G.add(prod, G.scalar_mul(a, s))
        prod = G.add(prod, G.scalar_mul(b, r))
        return (prod, (a * b) % self.scalar_modulus)

    def embed(self, r) -> tuple:
        return (self.base.group.element(r), 0)

    def identity_is_two_sided(self) -> bool:
        one = self.one
        return all(
            self.mul(one, x) == x and self.mul(x, one) == x for x in self.elements()
        )


def dorroh_extend(P: PreLieRing) -> DorrohRing:
    """Adjoin a formal identity (0, 1); verified two-sided on construction."""
    ring = DorrohRing(P)
    if not ring.identity_is_two_sided():
        raise AssertionError("Dorroh identity (0,1) failed to be two-sided")
    return ring


class StrongBoundReport:
    """Nilpotency indices against the recursive and cardinality bounds."""

    def __init__(self, left_index, right_index, strong_index, recursive_bound, cardinality_bound):
        self.left_index = left_index
        self.right_index = right_index
        self.strong_index = strong_index
        self.recursive_bound = recursive_bound
        self.cardinality_bound = cardinality_bound

    @property
    def passed(self) -> bool:
        return (
            self.strong_index <= self.recursive_bound
            and self.strong_index <= self.cardinality_bound
        )

    def __repr__(self):
        return (
            f"StrongBoundReport(left={self.left_index}, right={self.right_index}, "
            f"strong={self.strong_index}, recursive_bound={self.recursive_bound}, "
            f"cardinality_bound={self.cardinality_bound}, passed={self.passed})"
        )


def strong_bound_check(P: PreLieRing) -> StrongBoundReport:
    """Check the strong index against 2(m+1)^n and (n+1)^(n+1).

    m is the left index, n the right index; the recursive bound unrolls
    s_{0,m} = 2, s_{n+1,m} = s_{n,m} (m+1).  The cardinality bound uses
    n = log_p |A|.
    """
    left = P.series("left")
    right = P.series("right")
    if not (left.nilpotent and right.nilpotent):
        raise NotNilpotent("strong bound requires left and right nilpotency")
    m = left.index
    rn = right.index
    strong = P.strong_index()
    recursive = 2 * (m + 1) ** rn
    card = (P.group.modulus.n + 1) ** (P.group.modulus.n + 1)
    return StrongBoundReport(m, rn, strong, recursive, card)
