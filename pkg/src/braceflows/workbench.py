"""Catalog builders, brute-force enumeration, serialization, and the suite.

Serialization is a line-oriented plain-text format, one datum per line,
with '#' comments (structured "# meta k=v" comments carry metadata):

    <kind> p=<p> n=<n> inv=<e1>,<e2>,...      kind in {brace, prelie}
    brace payload:  row <i>: <j0> <j1> ...    index of e_i o e_j per j
    prelie payload: sc <i> <j>: <c1>,<c2>,... coordinates of g_i . g_j
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .abelian import AbelianPGroup, GroupElement
from .arith import Modulus
from .brace import Brace
from .correspond import (
    FlowsContext,
    bch,
    brace_to_prelie,
    flows_circle,
    group_of_flows,
    prelie_exp,
    roundtrip_brace_check,
    roundtrip_prelie_check,
)
from .errors import (
    EnumerationBoundExceeded,
    HypothesisViolated,
    InvariantViolation,
    NotNilpotent,
    ParseError,
)
from .prelie import PreLieRing, dorroh_extend, strong_bound_check
from .report import VerificationReport

DEFAULT_SEARCH_BOUND = 10**7
_ENUM_CHUNK = 1 << 18


# -- catalog ------------------------------------------------------------------


def radical_brace(p: int, n: int) -> Brace:
    """The brace a o b = a + b + p a b on Z/p^n (a Jacobson-radical ring).

    Needs n >= 2 (otherwise the operation degenerates to addition) and
    strong index n+1 < p.  The index is verified on construction.
    """
    if n < 2:
        raise ValueError(f"radical family needs n >= 2, got {n}")
    if n + 1 >= p:
        raise HypothesisViolated(
            f"strong index {n + 1} must be < p = {p} for this family"
        )
    m = Modulus(p, n)
    G = AbelianPGroup(m, (n,))
    idx = np.arange(m.value, dtype=np.int64)
    table = (idx[:, None] + idx[None, :] + p * idx[:, None] * idx[None, :]) % m.value
    B = Brace(G, table.astype(np.int32), name=f"radical({p},{n})")
    if not B.verify().passed:
        raise AssertionError("radical brace failed verification")
    assert B.strong_index() == n + 1
    return B


# -- enumeration ----------------------------------------------------------------


def enumerate_prelie(
    G: AbelianPGroup,
    require_nilpotent: bool = False,
    search_bound: int = DEFAULT_SEARCH_BOUND,
) -> list[PreLieRing]:
    """All structure-constant assignments on G passing verification.

    Labeled count on the fixed group, no isomorphism collapsing.  Entry
    (i, j) ranges over elements killed by p^min(e_i, e_j) (anything else
    breaks well-definedness), and the left-symmetry identity is checked
    vectorized across candidates on generator triples.
    """
    r = G.rank
    pairs = [(i, j) for i in range(r) for j in range(r)]
    allowed = {}
    for i, j in pairs:
        level = min(G.invariants[i], G.invariants[j])
        allowed[i, j] = np.asarray(
            G.annihilator(level).sorted_indices, dtype=np.int64
        )

    space = 1
    for key in pairs:
        space *= len(allowed[key])
    if space > search_bound:
        raise EnumerationBoundExceeded(
            f"search space {space} exceeds bound {search_bound}"
        )

    strides = {}
    acc = 1
    for key in reversed(pairs):
        strides[key] = acc
        acc *= len(allowed[key])

    C = G.coords_array
    mods = np.array(G.coord_moduli, dtype=np.int64)
    survivors: list[int] = []
    for lo in range(0, space, _ENUM_CHUNK):
        hi = min(lo + _ENUM_CHUNK, space)
        cand = np.arange(lo, hi, dtype=np.int64)
        entry = {
            key: allowed[key][(cand // strides[key]) % len(allowed[key])]
            for key in pairs
        }
        coords = {key: C[entry[key]] for key in pairs}

        def right_mul(X, k):
            # X . g_k for an (M, r) coordinate block X
            out = np.zeros_like(X)
            for u in range(r):
                out = (out + X[:, u, None] * coords[u, k]) % mods
            return out

        def left_mul(i, Y):
            # g_i . Y
            out = np.zeros_like(Y)
            for v in range(r):
                out = (out + Y[:, v, None] * coords[i, v]) % mods
            return out

        mask = np.ones(hi - lo, dtype=bool)
        for i in range(r):
            for j in range(i + 1, r):
                for k in range(r):
                    lhs = (right_mul(coords[i, j], k) - left_mul(i, coords[j, k])) % mods
                    rhs = (right_mul(coords[j, i], k) - left_mul(j, coords[i, k])) % mods
                    mask &= (lhs == rhs).all(axis=1)
                if not mask.any():
                    break
        survivors.extend((lo + np.nonzero(mask)[0]).tolist())

    out = []
    for cand in survivors:
        sc = [[None] * r for _ in range(r)]
        for key in pairs:
            e = allowed[key][(cand // strides[key]) % len(allowed[key])]
            sc[key[0]][key[1]] = G.from_index(int(e))
        P = PreLieRing(G, sc, name=f"enum#{cand}")
        if not P.verification.passed:  # defense in depth; the mask already filtered
            continue
        if require_nilpotent and not P.is_nilpotent():
            continue
        out.append(P)
    return out


# -- serialization -----------------------------------------------------------------


@dataclass
class AlgebraDocument:
    """Serializable carrier for one brace or pre-Lie ring."""

    kind: str  # "brace" | "prelie"
    p: int
    n: int
    invariants: tuple[int, ...]
    payload: tuple  # brace: row tuples of indices; prelie: dict (i,j) -> coords
    metadata: dict = field(default_factory=dict)

    def group(self) -> AbelianPGroup:
        return AbelianPGroup(Modulus(self.p, self.n), self.invariants)


def brace_to_document(B: Brace, **metadata) -> AlgebraDocument:
    G = B.group
    payload = tuple(tuple(int(v) for v in row) for row in B.circle_table)
    meta = dict(metadata)
    if B.name and "name" not in meta:
        meta["name"] = B.name
    return AlgebraDocument("brace", G.modulus.p, G.modulus.n, G.invariants, payload, meta)


def prelie_to_document(P: PreLieRing, **metadata) -> AlgebraDocument:
    G = P.group
    payload = {
        (i, j): P.sc[i][j] for i in range(G.rank) for j in range(G.rank)
    }
    meta = dict(metadata)
    if P.name and "name" not in meta:
        meta["name"] = P.name
    return AlgebraDocument("prelie", G.modulus.p, G.modulus.n, G.invariants, payload, meta)


def document_to_brace(doc: AlgebraDocument) -> Brace:
    if doc.kind != "brace":
        raise InvariantViolation(f"expected a brace document, got {doc.kind}")
    G = doc.group()
    table = np.asarray(doc.payload, dtype=np.int32)
    if table.shape != (G.order, G.order):
        raise InvariantViolation(
            f"payload is {table.shape}, group needs {(G.order, G.order)}"
        )
    if table.size and (table.min() < 0 or table.max() >= G.order):
        raise InvariantViolation("table entries out of element-index range")
    return Brace(G, table, name=doc.metadata.get("name", ""))


def document_to_prelie(doc: AlgebraDocument) -> PreLieRing:
    if doc.kind != "prelie":
        raise InvariantViolation(f"expected a prelie document, got {doc.kind}")
    G = doc.group()
    r = G.rank
    sc = [[None] * r for _ in range(r)]
    for (i, j), coords in doc.payload.items():
        if not (0 <= i < r and 0 <= j < r):
            raise InvariantViolation(f"generator pair ({i},{j}) out of range")
        if len(coords) != r:
            raise InvariantViolation(
                f"sc {i} {j} has {len(coords)} coordinates, expected {r}"
            )
        sc[i][j] = G.element(tuple(coords))
    missing = [(i, j) for i in range(r) for j in range(r) if sc[i][j] is None]
    if missing:
        raise InvariantViolation(f"missing sc entries: {missing}")
    return PreLieRing(G, sc, name=doc.metadata.get("name", ""))


def serialize(doc: AlgebraDocument) -> str:
    lines = []
    for key in sorted(doc.metadata):
        lines.append(f"# meta {key}={doc.metadata[key]}")
    inv = ",".join(str(e) for e in doc.invariants)
    lines.append(f"{doc.kind} p={doc.p} n={doc.n} inv={inv}")
    if doc.kind == "brace":
        for i, row in enumerate(doc.payload):
            lines.append(f"row {i}: " + " ".join(str(v) for v in row))
    elif doc.kind == "prelie":
        for (i, j) in sorted(doc.payload):
            coords = ",".join(str(c) for c in doc.payload[i, j])
            lines.append(f"sc {i} {j}: {coords}")
    else:
        raise InvariantViolation(f"unknown kind {doc.kind!r}")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, lineno: int, line: str) -> int:
    try:
        return int(token)
    except ValueError:
        col = line.find(token) + 1
        raise ParseError(f"expected integer, got {token!r}", lineno, max(col, 1)) from None


def deserialize(text: str) -> AlgebraDocument:
    metadata = {}
    header = None
    header_line = 0
    rows: dict[int, tuple[int, ...]] = {}
    sc: dict[tuple[int, int], tuple[int, ...]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("meta "):
                kv = body[5:].split("=", 1)
                if len(kv) == 2:
                    metadata[kv[0].strip()] = kv[1].strip()
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] not in ("brace", "prelie"):
                raise ParseError(
                    "header must be '<kind> p=<p> n=<n> inv=<e1>,...'", lineno
                )
            fields = {}
            for part in parts[1:]:
                if "=" not in part:
                    raise ParseError(f"malformed header field {part!r}", lineno,
                                     raw.find(part) + 1)
                k, v = part.split("=", 1)
                fields[k] = v
            for k in ("p", "n", "inv"):
                if k not in fields:
                    raise ParseError(f"header missing {k}=", lineno)
            p = _parse_int(fields["p"], lineno, raw)
            n = _parse_int(fields["n"], lineno, raw)
            inv = tuple(_parse_int(t, lineno, raw) for t in fields["inv"].split(","))
            header = (parts[0], p, n, inv)
            header_line = lineno
            continue
        kind = header[0]
        if kind == "brace":
            if not line.startswith("row "):
                raise ParseError("expected 'row <i>: ...'", lineno)
            head, _, rest = line.partition(":")
            i = _parse_int(head[4:].strip(), lineno, raw)
            if i in rows:
                raise ParseError(f"duplicate row {i}", lineno)
            rows[i] = tuple(_parse_int(t, lineno, raw) for t in rest.split())
        else:
            if not line.startswith("sc "):
                raise ParseError("expected 'sc <i> <j>: ...'", lineno)
            head, _, rest = line.partition(":")
            bits = head[3:].split()
            if len(bits) != 2:
                raise ParseError("expected 'sc <i> <j>: ...'", lineno)
            i = _parse_int(bits[0], lineno, raw)
            j = _parse_int(bits[1], lineno, raw)
            if (i, j) in sc:
                raise ParseError(f"duplicate sc {i} {j}", lineno)
            sc[i, j] = tuple(
                _parse_int(t.strip(), lineno, raw) for t in rest.split(",") if t.strip()
            )

    if header is None:
        raise ParseError("no header line found", max(header_line, 1))
    kind, p, n, inv = header
    try:
        modulus = Modulus(p, n)
        group = AbelianPGroup(modulus, inv)
    except Exception as exc:
        raise InvariantViolation(f"bad header parameters: {exc}") from exc

    if kind == "brace":
        if sorted(rows) != list(range(group.order)):
            raise InvariantViolation(
                f"need rows 0..{group.order - 1}, got {len(rows)} rows"
            )
        widths = {len(r) for r in rows.values()}
        if widths != {group.order}:
            raise InvariantViolation(f"row widths {widths} != {group.order}")
        payload = tuple(rows[i] for i in range(group.order))
        doc = AlgebraDocument(kind, p, n, inv, payload, metadata)
        document_to_brace(doc)  # validates the index range
        return doc
    payload = dict(sc)
    doc = AlgebraDocument(kind, p, n, inv, payload, metadata)
    document_to_prelie(doc)  # validates shape and coordinate counts
    return doc


def load_document(path: str) -> AlgebraDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return deserialize(fh.read())


# -- suite ------------------------------------------------------------------------


def _exhaustive_lambda_homomorphism(B: Brace):
    """lambda_{a o b} = lambda_a o lambda_b as maps; counterexample or None."""
    lam = B.lambda_table
    tab = B.circle_table
    G = B.group
    for a in range(G.order):
        composed = lam[a][lam]  # (b, x) -> lambda_a(lambda_b(x))
        direct = lam[tab[a]]
        if not np.array_equal(composed, direct):
            b = int(np.argwhere((composed != direct).any(axis=1))[0][0])
            return (G.from_index(a), G.from_index(b))
    return None


def _brace_battery(B: Brace, report: VerificationReport):
    G = B.group
    p, n = G.modulus.p, G.modulus.n
    verification = B.verify()
    report.add("brace axioms", verification.passed,
               "; ".join(c.name for c in verification.failures()))
    if not verification.passed:
        return

    left = B.series("left")
    report.add(
        "left series reaches 0 within n+1 steps",
        left.nilpotent and left.index <= n + 1,
        f"sizes {left.sizes()}",
    )
    bad = _exhaustive_lambda_homomorphism(B)
    report.add("lambda is a circle-to-Aut homomorphism", bad is None, counterexample=bad)

    strong = B.series("strong")
    if strong.nilpotent:
        bad = B.check_star_sum_expansion()
        report.add("star sum-expansion residual vanishes", bad is None, counterexample=bad)
    if left.nilpotent:
        for i in range(0, n + 1):
            bad = B.check_circle_power_binomial(i)
            report.add(
                f"circle-power binomial residual vanishes (i={i})",
                bad is None,
                counterexample=bad,
            )
    if p > n + 1:
        for i in range(0, n + 1):
            additive, circle_side, equal = B.frobenius_subgroups(i)
            report.add(f"p^{i} A equals the o-power subgroup", equal)
            report.add(f"p^{i} A is an ideal", B.ideal_check(additive))
            report.add(f"ann(p^{i}) is an ideal", B.ideal_check(G.annihilator(i)))
    if strong.nilpotent and strong.index < p and n + 1 < p:
        report.add("brace -> pre-Lie -> brace round trip", roundtrip_brace_check(B))


def _prelie_battery(P: PreLieRing, report: VerificationReport):
    G = P.group
    p, n = G.modulus.p, G.modulus.n
    verification = P.verify()
    report.add("pre-Lie axioms (generator triples)", verification.passed,
               "; ".join(c.name for c in verification.failures()))
    if not verification.passed:
        return
    bad = P.check_identity_exhaustive()
    report.add("pre-Lie identity on all triples", bad is None, counterexample=bad)

    soc = P.socle()
    report.add("socle is an ideal", P.ideal_check(soc))
    right = P.series("right")
    term = P.product_ideal(G.full_subgroup())
    report.add("A.A is an ideal", P.ideal_check(term))
    report.add(
        "product ideal of A matches the right series",
        len(right.chain) < 2 or term.indices == right.chain[1].indices,
    )
    report.add("Dorroh identity (0,1) is two-sided",
               dorroh_extend(P).identity_is_two_sided())

    left = P.series("left")
    if left.nilpotent:
        report.add("left index within n+1", left.index <= n + 1,
                   f"sizes {left.sizes()}")
    if left.nilpotent and right.nilpotent:
        bound = strong_bound_check(P)
        report.add(
            "strong index within recursive and cardinality bounds",
            bound.passed,
            repr(bound),
        )
    if left.nilpotent and left.index < p and n + 1 < p:
        flows = group_of_flows(P)
        report.add("group of flows satisfies the brace axioms", flows.verify().passed)
        report.add(
            "flows brace right nilpotent iff ring right nilpotent",
            flows.series("right").nilpotent == right.nilpotent,
        )
        ctx = FlowsContext(P)
        maxdeg = min(p - 1, max(P.lie_class(), 1))
        if G.order <= 125:
            pairs = ((a, b) for a in range(G.order) for b in range(G.order))
            mode = "exhaustive"
        else:
            rng = np.random.default_rng(0)
            pairs = (tuple(int(v) for v in ab)
                     for ab in rng.integers(0, G.order, size=(500, 2)))
            mode = "sampled (500 pairs)"
        bad = None
        exp_of = [prelie_exp(ctx, G.from_index(i)) for i in range(G.order)]
        for ai, bi in pairs:
            a, b = G.from_index(ai), G.from_index(bi)
            lhs = flows.circle(exp_of[ai], exp_of[bi])
            rhs = prelie_exp(ctx, bch(a, b, P, maxdeg))
            if lhs != rhs:
                bad = (a, b)
                break
        report.add("exp intertwines BCH with the circle product", bad is None,
                   mode, counterexample=bad)
        if P.is_nilpotent() and P.strong_index() < p:
            report.add("pre-Lie -> brace -> pre-Lie round trip",
                       roundtrip_prelie_check(P))


def run_suite(targets) -> list[VerificationReport]:
    """Run the invariant battery for each document / brace / ring given."""
    reports = []
    for target in targets:
        if isinstance(target, AlgebraDocument):
            obj = (
                document_to_brace(target)
                if target.kind == "brace"
                else document_to_prelie(target)
            )
        else:
            obj = target
        label = getattr(obj, "name", "") or repr(obj)
        report = VerificationReport(label)
        if isinstance(obj, Brace):
            _brace_battery(obj, report)
        elif isinstance(obj, PreLieRing):
            _prelie_battery(obj, report)
        else:
            raise TypeError(f"cannot run suite on {type(obj).__name__}")
        reports.append(report)
    return reports


def suite_to_machine(reports) -> str:
    """JSON rendering of suite reports (counterexamples included)."""
    payload = []
    for rep in reports:
        payload.append(
            {
                "subject": rep.subject,
                "passed": rep.passed,
                "checks": [
                    {
                        "name": c.name,
                        "passed": c.passed,
                        "detail": c.detail,
                        "counterexample": c.counterexample,
                    }
                    for c in rep.checks
                ],
            }
        )
    return json.dumps(payload, indent=2, default=str)
