"""Left braces given by an explicit circle-operation table.

A brace here is an abelian p-group (A, +) together with a full table for
a second group operation (A, o) satisfying a o (b+c) + a = a o b + a o c.
The derived operations a*b = a o b - a - b and lambda_a(b) = a o b - a are
tabulated lazily.  Verification is exhaustive below a configurable size
threshold and switches to documented random sampling above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .abelian import AbelianPGroup, EndoMap, GroupElement, Subgroup
from .errors import (
    EnumerationBoundExceeded,
    HypothesisViolated,
    NotNilpotent,
    NotStronglyNilpotent,
)
from .report import VerificationReport

# O(|A|^3) checks run in full up to this size and are sampled above it;
# braces larger than the hard cap are rejected outright.
DEFAULT_EXHAUSTIVE_LIMIT = 343
DEFAULT_SAMPLES = 50_000
HARD_SIZE_CAP = 3125

NOT_NILPOTENT = "not nilpotent"


@dataclass
class SeriesReport:
    """A descending radical chain and its termination data.

    chain[0] is the whole group (the series' first term); index is the
    smallest 1-based position k with chain[k-1] = 0, or None with the
    marker when the chain stabilizes above 0.
    """

    kind: str
    chain: tuple[Subgroup, ...]
    index: int | None

    @property
    def nilpotent(self) -> bool:
        return self.index is not None

    @property
    def marker(self) -> str | None:
        return None if self.nilpotent else NOT_NILPOTENT

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.chain)


class Brace:
    """A left brace on an abelian p-group, stored as a full o-table."""

    def __init__(self, group: AbelianPGroup, circle_table, name: str = ""):
        if group.order > HARD_SIZE_CAP:
            raise EnumerationBoundExceeded(
                f"|A| = {group.order} exceeds the desk-scale cap {HARD_SIZE_CAP}"
            )
        table = np.asarray(circle_table, dtype=np.int32)
        if table.shape != (group.order, group.order):
            raise ValueError(
                f"circle table must be {group.order}x{group.order}, got {table.shape}"
            )
        self.group = group
        self.circle_table = table
        self.name = name
        self._star = None
        self._lambda = None
        self._series = {}
        self._report = None

    @classmethod
    def from_operation(cls, group: AbelianPGroup, op, name: str = "") -> Brace:
        """Build the table from a callable op(a, b) on coordinate tuples."""
        N = group.order
        table = np.empty((N, N), dtype=np.int32)
        elems = [group.from_index(i) for i in range(N)]
        for i, a in enumerate(elems):
            for j, b in enumerate(elems):
                table[i, j] = group.index(group.element(op(a, b)))
        return cls(group, table, name)

    @classmethod
    def trivial(cls, group: AbelianPGroup, name: str = "trivial") -> Brace:
        """a o b = a + b."""
        return cls(group, group.add_table.copy(), name)

    def __repr__(self):
        label = self.name or "brace"
        return f"Brace({label} on {self.group!r})"

    def __eq__(self, other):
        return (
            isinstance(other, Brace)
            and self.group == other.group
            and np.array_equal(self.circle_table, other.circle_table)
        )

    # -- derived tables ------------------------------------------------------

    @property
    def star_table(self):
        """star[i, j] = index of (e_i o e_j) - e_i - e_j."""
        if self._star is None:
            add = self.group.add_table
            neg = self.group.neg_table
            self._star = add[add[self.circle_table, neg[:, None]], neg[None, :]]
        return self._star

    @property
    def lambda_table(self):
        """lam[i, j] = index of (e_i o e_j) - e_i."""
        if self._lambda is None:
            add = self.group.add_table
            neg = self.group.neg_table
            self._lambda = add[self.circle_table, neg[:, None]]
        return self._lambda

    # -- pointwise operations --------------------------------------------------

    def circle(self, a: GroupElement, b: GroupElement) -> GroupElement:
        G = self.group
        return G.from_index(int(self.circle_table[G.index(G.element(a)), G.index(G.element(b))]))

    def star(self, a: GroupElement, b: GroupElement) -> GroupElement:
        G = self.group
        return G.from_index(int(self.star_table[G.index(G.element(a)), G.index(G.element(b))]))

    def lambda_map(self, a: GroupElement) -> EndoMap:
        """The additive automorphism b -> a o b - a."""
        G = self.group
        row = self.lambda_table[G.index(G.element(a))]
        images = tuple(G.from_index(int(row[G.index(g)])) for g in G.generators)
        phi = EndoMap(G, images)
        assert phi.is_bijective()
        return phi

    def circle_power(self, a: GroupElement, m: int) -> GroupElement:
        """m-fold o-product of a; the empty product is 0."""
        if m < 0:
            raise ValueError("m must be >= 0")
        G = self.group
        tab = self.circle_table
        acc = 0  # index of the o-identity
        base = G.index(G.element(a))
        while m:
            if m & 1:
                acc = int(tab[acc, base])
            base = int(tab[base, base])
            m >>= 1
        return G.from_index(acc)

    def circle_inverse(self, a: GroupElement) -> GroupElement:
        G = self.group
        row = self.circle_table[G.index(G.element(a))]
        hits = np.nonzero(row == 0)[0]
        if len(hits) != 1:
            raise ValueError(f"{a} has no unique o-inverse; brace axioms fail")
        return G.from_index(int(hits[0]))

    # -- verification -----------------------------------------------------------

    def verify(
        self,
        max_exhaustive: int = DEFAULT_EXHAUSTIVE_LIMIT,
        samples: int = DEFAULT_SAMPLES,
        seed: int = 0,
    ) -> VerificationReport:
        """Check all brace axioms; failures become report entries."""
        G = self.group
        N = G.order
        tab = self.circle_table
        add = G.add_table
        report = VerificationReport(self.name or "brace")

        report.add(
            "additive abelian group",
            bool(np.array_equal(add, add.T))
            and bool(np.array_equal(add[0], np.arange(N)))
            and bool(np.all(np.sort(G.neg_table) == np.arange(N))),
        )

        closure_ok = bool(((tab >= 0) & (tab < N)).all())
        report.add("circle closure", closure_ok)
        if not closure_ok:
            self._report = report
            return report

        ident = np.arange(N)
        ok = bool(np.array_equal(tab[0], ident) and np.array_equal(tab[:, 0], ident))
        report.add("circle identity 0", ok)

        row_inv = (tab == 0).any(axis=1)
        col_inv = (tab == 0).any(axis=0)
        ok = bool(row_inv.all() and col_inv.all())
        bad = None
        if not ok:
            a = int(np.nonzero(~(row_inv & col_inv))[0][0])
            bad = (G.from_index(a),)
        report.add("circle inverses", ok, counterexample=bad)

        full = N <= max_exhaustive
        mode = "exhaustive" if full else f"sampled ({samples} triples, seed {seed})"
        if full:
            assoc = self._associativity_counterexample_full()
            compat = self._compatibility_counterexample_full()
        else:
            rng = np.random.default_rng(seed)
            triples = rng.integers(0, N, size=(samples, 3))
            assoc = self._associativity_counterexample_sampled(triples)
            compat = self._compatibility_counterexample_sampled(triples)
        report.add("circle associativity", assoc is None, mode, assoc)
        report.add("brace compatibility", compat is None, mode, compat)

        self._report = report
        return report

    def _associativity_counterexample_full(self):
        G, tab = self.group, self.circle_table
        for a in range(G.order):
            row = tab[a]
            lhs = tab[row, :]
            rhs = row[tab]
            if not np.array_equal(lhs, rhs):
                b, c = map(int, np.argwhere(lhs != rhs)[0])
                return (G.from_index(a), G.from_index(b), G.from_index(c))
        return None

    def _compatibility_counterexample_full(self):
        G, tab, add = self.group, self.circle_table, self.group.add_table
        for a in range(G.order):
            row = tab[a]
            lhs = add[row[add], a]
            rhs = add[row[:, None], row[None, :]]
            if not np.array_equal(lhs, rhs):
                b, c = map(int, np.argwhere(lhs != rhs)[0])
                return (G.from_index(a), G.from_index(b), G.from_index(c))
        return None

    def _associativity_counterexample_sampled(self, triples):
        G, tab = self.group, self.circle_table
        a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
        bad = tab[tab[a, b], c] != tab[a, tab[b, c]]
        if bad.any():
            k = int(np.nonzero(bad)[0][0])
            return tuple(G.from_index(int(x)) for x in triples[k])
        return None

    def _compatibility_counterexample_sampled(self, triples):
        G, tab, add = self.group, self.circle_table, self.group.add_table
        a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
        bad = add[tab[a, add[b, c]], a] != add[tab[a, b], tab[a, c]]
        if bad.any():
            k = int(np.nonzero(bad)[0][0])
            return tuple(G.from_index(int(x)) for x in triples[k])
        return None

    @property
    def verification(self) -> VerificationReport:
        if self._report is None:
            self.verify()
        return self._report

    def require_verified(self):
        if not self.verification.passed:
            raise ValueError(
                f"brace axioms fail: {[c.name for c in self.verification.failures()]}"
            )

    # -- nilpotency series -------------------------------------------------------

    def series(self, kind: str) -> SeriesReport:
        """Left / right / strong radical chain, stopping on 0 or stabilization."""
        if kind not in ("left", "right", "strong"):
            raise ValueError(f"kind must be left, right or strong, got {kind!r}")
        if kind not in self._series:
            self.require_verified()
            self._series[kind] = self._compute_series(kind)
        return self._series[kind]

    def _span_products(self, left, right_gens) -> Subgroup:
        """Additive span of {x * y : x in left, y in right_gens} (index arrays)."""
        star = self.star_table
        prods = np.unique(star[np.asarray(left, dtype=np.intp)[:, None],
                               np.asarray(right_gens, dtype=np.intp)[None, :]])
        return self.group._closure_from_indices(prods.tolist())

    def _compute_series(self, kind: str) -> SeriesReport:
        G = self.group
        full = G.full_subgroup()
        if full.is_trivial():
            return SeriesReport(kind, (full,), 1)
        chain = [full]
        all_idx = list(range(G.order))
        gens_A = [G.index(g) for g in G.generators]
        while True:
            if kind == "left":
                # A * A^i: * is additive on the right, so generators suffice there
                nxt = self._span_products(all_idx, chain[-1].generator_indices or (0,))
            elif kind == "right":
                nxt = self._span_products(chain[-1].sorted_indices, gens_A or (0,))
            else:
                i = len(chain)
                pieces = set()
                for j in range(1, i + 1):
                    left = chain[j - 1].sorted_indices
                    right = chain[i - j].generator_indices or (0,)
                    star = self.star_table
                    pieces.update(
                        np.unique(
                            star[np.asarray(left, dtype=np.intp)[:, None],
                                 np.asarray(right, dtype=np.intp)[None, :]]
                        ).tolist()
                    )
                nxt = G._closure_from_indices(sorted(pieces))
            if nxt.is_trivial():
                chain.append(nxt)
                return SeriesReport(kind, tuple(chain), len(chain))
            if nxt.indices == chain[-1].indices:
                return SeriesReport(kind, tuple(chain), None)
            chain.append(nxt)

    def strong_index(self) -> int:
        rep = self.series("strong")
        if not rep.nilpotent:
            raise NotStronglyNilpotent(f"{self!r} is not strongly nilpotent")
        return rep.index

    def left_index(self) -> int:
        rep = self.series("left")
        if not rep.nilpotent:
            raise NotNilpotent(f"{self!r} is not left nilpotent")
        return rep.index

    # -- residual identities ---------------------------------------------------

    def star_sum_expansion_residual(
        self, a: GroupElement, b: GroupElement, c: GroupElement, s: int | None = None
    ) -> GroupElement:
        """Residual of the inductive expansion of (a+b)*c; must be 0.

        With d_0 = a, d_0' = b, d_{i+1} = d_i + d_i', d_{i+1}' = d_i * d_i',
        computes (a+b)*c - a*c - b*c
                 - sum_{i=0}^{2s} (-1)^{i+1} ((d_i*d_i')*c - d_i*(d_i'*c)).
        """
        if s is None:
            s = self.strong_index()
        elif s < self.strong_index():
            raise ValueError("iteration depth 2s requires s >= strong index")
        G = self.group
        star = self.star_table
        ai = G.index(G.element(a))
        bi = G.index(G.element(b))
        ci = G.index(G.element(c))
        res = int(star[G.add_table[ai, bi], ci])
        res = int(G.add_table[res, G.neg_table[star[ai, ci]]])
        res = int(G.add_table[res, G.neg_table[star[bi, ci]]])
        d, dp = ai, bi
        for i in range(2 * s + 1):
            term = int(G.add_table[star[star[d, dp], ci], G.neg_table[star[d, star[dp, ci]]]])
            if i % 2 == 0:  # (-1)^{i+1} = -1, and we subtract the signed term
                res = int(G.add_table[res, term])
            else:
                res = int(G.add_table[res, G.neg_table[term]])
            d, dp = int(G.add_table[d, dp]), int(star[d, dp])
        return G.from_index(res)

    def check_star_sum_expansion(self, s: int | None = None):
        """Exhaustive residual check over all triples; returns a counterexample or None.

        Vectorized over c for each pair (a, b), since the d-chain depends
        only on (a, b).
        """
        if s is None:
            s = self.strong_index()
        G = self.group
        N = G.order
        star, add, neg = self.star_table, G.add_table, G.neg_table
        for ai in range(N):
            for bi in range(N):
                res = star[add[ai, bi], :].astype(np.int64)
                res = add[res, neg[star[ai, :]]]
                res = add[res, neg[star[bi, :]]]
                d, dp = ai, bi
                for i in range(2 * s + 1):
                    term = add[star[int(star[d, dp]), :], neg[star[d, star[dp, :]]]]
                    res = add[res, term] if i % 2 == 0 else add[res, neg[term]]
                    d, dp = int(add[d, dp]), int(star[d, dp])
                if (res != 0).any():
                    ci = int(np.nonzero(res != 0)[0][0])
                    return (G.from_index(ai), G.from_index(bi), G.from_index(ci))
        return None

    def circle_power_binomial_residual(
        self, a: GroupElement, b: GroupElement, i: int
    ) -> GroupElement:
        """Residual of a^{o p^i} * b = sum_k C(p^i, k) e_k; must be 0.

        e_1 = a*b and e_{k+1} = a*e_k; the sum truncates once e_k = 0,
        which left nilpotency guarantees.
        """
        self.left_index()  # raises NotNilpotent when the chain never reaches 0
        G = self.group
        p = G.modulus.p
        q = p**i
        lhs = self.star(self.circle_power(a, q), b)
        acc = 0
        e = int(self.star_table[G.index(G.element(a)), G.index(G.element(b))])
        star = self.star_table
        ai = G.index(G.element(a))
        k = 1
        while e != 0 and k <= q:
            coeff = math.comb(q, k)
            acc = int(G.add_table[acc, G.scalar_table(coeff)[e]])
            e = int(star[ai, e])
            k += 1
        return G.sub(lhs, G.from_index(acc))

    def check_circle_power_binomial(self, i: int):
        """Exhaustive residual check over all (a, b); counterexample or None."""
        left_idx = self.left_index()
        G = self.group
        N = G.order
        p = G.modulus.p
        q = p**i
        star, add, neg = self.star_table, G.add_table, G.neg_table
        # a -> a^{o p^i} for all a at once
        pw = np.arange(N, dtype=np.int32)
        for _ in range(p - 1):
            pw = self.circle_table[pw, np.arange(N)]
        step = pw.copy()
        for _ in range(i - 1):
            pw = step[pw]
        if i == 0:
            pw = np.arange(N, dtype=np.int32)
        coeffs = [math.comb(q, k) for k in range(1, min(q, left_idx) + 1)]
        for ai in range(N):
            lhs = star[pw[ai], :]
            acc = np.zeros(N, dtype=np.int32)
            e = star[ai, :].copy()
            for coeff in coeffs:
                acc = add[acc, G.scalar_table(coeff)[e]]
                e = star[ai, e]
            res = add[lhs, neg[acc]]
            if (res != 0).any():
                bi = int(np.nonzero(res != 0)[0][0])
                return (G.from_index(ai), G.from_index(bi))
        return None

    # -- ideals ------------------------------------------------------------------

    def frobenius_subgroups(self, i: int):
        """(p^i A, o-subgroup generated by p^i-th o-powers, equality flag).

        Requires p > n+1; both subgroups coincide and are ideals then.
        """
        G = self.group
        p, n = G.modulus.p, G.modulus.n
        if p <= n + 1:
            raise HypothesisViolated(f"need p > n+1, got p={p}, n={n}")
        self.require_verified()
        N = G.order
        q = p**i
        additive = G._closure_from_indices(
            np.unique(G.scalar_table(q)).tolist(),
            generator_indices=[int(G.scalar_table(q)[G.index(g)]) for g in G.generators],
        )
        pw = np.arange(N, dtype=np.int32)
        for _ in range(p - 1):
            pw = self.circle_table[pw, np.arange(N)]
        step = pw.copy()
        if i == 0:
            pw = np.arange(N, dtype=np.int32)
        for _ in range(i - 1):
            pw = step[pw]
        circle_side = self._circle_closure(np.unique(pw).tolist())
        return additive, circle_side, additive.indices == circle_side.indices

    def _circle_closure(self, gen_indices) -> Subgroup:
        """Closure under o only; enough for a subgroup when A is finite."""
        tab = self.circle_table
        closed = {0}
        frontier = [g for g in gen_indices]
        closed.update(frontier)
        while frontier:
            nxt = []
            for x in frontier:
                for y in list(closed):
                    for z in (int(tab[x, y]), int(tab[y, x])):
                        if z not in closed:
                            closed.add(z)
                            nxt.append(z)
            frontier = nxt
        return Subgroup(self.group, frozenset(closed), tuple(sorted(set(gen_indices))))

    def ideal_check(self, S: Subgroup) -> bool:
        """True iff S*A <= S, A*S <= S and lambda_a(S) = S for every a."""
        self.require_verified()
        G = self.group
        if not S.is_closed():
            return False
        star, lam = self.star_table, self.lambda_table
        inside = np.zeros(G.order, dtype=bool)
        inside[list(S.indices)] = True
        s_all = np.asarray(S.sorted_indices, dtype=np.intp)
        s_gens = np.asarray(S.generator_indices or S.sorted_indices, dtype=np.intp)
        g_all = np.asarray([G.index(g) for g in G.generators], dtype=np.intp)
        if not inside[star[s_all[:, None], g_all[None, :]]].all():
            return False
        if not inside[star[:, s_gens]].all():
            return False
        return bool(inside[lam[:, s_gens]].all())
