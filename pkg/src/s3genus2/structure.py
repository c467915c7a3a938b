"""Structural checks on class polynomials mod p driven by the family scan.

For p = 1 mod 4 the j-invariants of superspecial members are the roots of
the level-3p class polynomial mod p; their multiplicities follow a fixed
ledger (4 for 8000, 2 for 54000 and for each conjugate pair).  For
p = 11 mod 12 the rational roots carry a weighted multigraph with one edge
per superspecial orbit.  Everything here consumes PsiReports and the exact
class-number and class-polynomial routines; at tiny primes the class
polynomial itself is computed over the integers and factored directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .classno import class_number, hilbert_poly
from .family import (
    lambda_record,
    orbit,
    psi_p,
    superspecial_lambdas,
)
from .curves import LegendreCurve, j_invariant
from .fields import QuadExtElement

GRAPH_MIN_PRIME = 11  # the degree/weight pattern needs p > 11


@dataclass(frozen=True)
class RootProfile:
    """Distinct j-invariants of the superspecial members at one prime."""

    p: int
    distinct_js: tuple[QuadExtElement, ...]
    rational_js: tuple[int, ...]
    conjugate_pairs: tuple[tuple[QuadExtElement, QuadExtElement], ...]
    has8000: bool
    has54000: bool


def root_profile(p: int) -> RootProfile:
    """Collect j(E_{Lambda^+-}) over all superspecial lambda and split them."""
    seen: dict[tuple[int, int], QuadExtElement] = {}
    for lam in superspecial_lambdas(p):
        rec = lambda_record(lam, p)
        for t in (rec.lambda_minus, rec.lambda_plus):
            j = j_invariant(LegendreCurve(t, p))
            seen[(j.a, j.b)] = j
    distinct = tuple(seen[k] for k in sorted(seen))
    rational = tuple(j.a for j in distinct if j.in_base_field())
    pairs = []
    for key in sorted(seen):
        j = seen[key]
        if j.in_base_field():
            continue
        conj = j.frobenius()
        if (conj.a, conj.b) not in seen:
            raise ArithmeticError(f"profile not Frobenius-stable at p={p}")
        if (j.a, j.b) <= (conj.a, conj.b):
            pairs.append((j, conj))
    return RootProfile(
        p,
        distinct,
        rational,
        tuple(pairs),
        8000 % p in rational,
        54000 % p in rational,
    )


def closed_form_verdict(p: int) -> bool:
    """psi_p (enumerated) against the closed form for p's congruence class."""
    return psi_p(p).closed_form_ok


@dataclass(frozen=True)
class ShapeVerdict:
    p: int
    ok: bool
    clauses: tuple[bool, bool, bool, bool]
    diagnostics: tuple[str, ...]


def shape_check_3p(p: int) -> ShapeVerdict:
    """The factorization-shape ledger of the level-3p class polynomial mod p.

    (i) 8000 occurs iff p = 5 mod 8; (ii) 54000 occurs iff p = 5, 17 mod 24;
    (iii) multiplicities 4/2/4-per-pair sum to h(-3p); (iv) orbit weights
    6/3/6-per-pair sum to psi_p.  p = 5 is excluded (multiplicity exception).
    """
    if p % 4 != 1:
        raise ValueError("shape check applies to p = 1 mod 4")
    if p <= 5:
        raise ValueError("p = 5 is the special case; use direct_root_check")
    prof = root_profile(p)
    psi = len(superspecial_lambdas(p))
    npairs = len(prof.conjugate_pairs)
    notes = []
    allowed = {8000 % p, 54000 % p}
    if not set(prof.rational_js) <= allowed:
        notes.append(f"unexpected rational roots {sorted(set(prof.rational_js) - allowed)}")
    c1 = prof.has8000 == (p % 8 == 5)
    if not c1:
        notes.append(f"8000 presence {prof.has8000} vs p%8={p % 8}")
    c2 = prof.has54000 == (p % 24 in (5, 17))
    if not c2:
        notes.append(f"54000 presence {prof.has54000} vs p%24={p % 24}")
    c3 = 4 * prof.has8000 + 2 * prof.has54000 + 4 * npairs == class_number(3 * p)
    if not c3:
        notes.append("multiplicity ledger != h(-3p)")
    c4 = psi == 6 * prof.has8000 + 3 * prof.has54000 + 6 * npairs
    if not c4:
        notes.append("weight ledger != psi_p")
    ok = c1 and c2 and c3 and c4 and not notes
    return ShapeVerdict(p, ok, (c1, c2, c3, c4), tuple(notes))


@dataclass(frozen=True)
class GraphGp:
    """Weighted multigraph on the rational superspecial j-invariants."""

    p: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, weight), u <= v

    def degree(self, v: int) -> int:
        d = 0
        for u, w, _ in self.edges:
            if u == v:
                d += 1
            if w == v:
                d += 1
        return d

    def weight_sum(self) -> int:
        return sum(w for _, _, w in self.edges)

    def to_dot(self) -> str:
        lines = [f"graph G_{self.p} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for u, v, w in self.edges:
            lines.append(f'  "{u}" -- "{v}" [label={w}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "vertices": list(self.vertices),
            "edges": [{"u": u, "v": v, "w": w} for u, v, w in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), separators=(",", ":"))


def build_graph(p: int) -> GraphGp:
    """One edge per superspecial orbit, joining the paired j-invariants."""
    if p % 12 != 11:
        raise ValueError("the graph is defined for p = 11 mod 12")
    lambdas = set(superspecial_lambdas(p))
    vertices: set[int] = set()
    edges = []
    while lambdas:
        rep = min(lambdas)
        members = orbit(rep, p)
        lambdas -= members
        rec = lambda_record(rep, p)
        j1 = j_invariant(LegendreCurve(rec.lambda_minus, p))
        j2 = j_invariant(LegendreCurve(rec.lambda_plus, p))
        if not (j1.in_base_field() and j2.in_base_field()):
            raise ArithmeticError(f"irrational j at p={p}, lambda={rep}")
        u, v = sorted((j1.a, j2.a))
        vertices.update((u, v))
        edges.append((u, v, len(members)))
    return GraphGp(p, tuple(sorted(vertices)), tuple(sorted(edges)))


@dataclass(frozen=True)
class GraphVerdict:
    p: int
    ok: bool
    diagnostics: tuple[str, ...]


def check_graph_structure(g: GraphGp) -> GraphVerdict:
    """Degree pattern, loop placement, weights, and the 6n-3 / 2n-1 totals."""
    p = g.p
    if p <= GRAPH_MIN_PRIME:
        raise ValueError("the degree pattern needs p > 11")
    v54, v1728 = 54000 % p, 1728 % p
    notes = []
    loops = [(u, v, w) for u, v, w in g.edges if u == v]
    if [(u, v) for u, v, _ in loops] != [(v54, v54)]:
        notes.append(f"self loops at {[(u) for u, _, _ in loops]}, want only {v54}")
    if any(w != 3 for _, _, w in loops):
        notes.append("self loop weight != 3")
    if any(w != 6 for u, v, w in g.edges if u != v):
        notes.append("non-loop edge weight != 6")
    if v54 not in g.vertices or v1728 not in g.vertices:
        notes.append("special vertices missing")
    for v in g.vertices:
        d = g.degree(v)
        if v == v1728:
            if d != 1:
                notes.append(f"deg(1728)={d}")
        elif v == v54:
            if d != 3:  # self loop (2) plus a single outgoing edge
                notes.append(f"deg(54000)={d}")
        elif d != 2:
            notes.append(f"deg({v})={d}")
    nonloop_at_54 = sum(1 for u, v, w in g.edges if u != v and v54 in (u, v))
    if nonloop_at_54 != 1:
        notes.append(f"54000 has {nonloop_at_54} plain edges, want 1")
    n = len(g.vertices)
    psi = len(superspecial_lambdas(p))
    if g.weight_sum() != psi:
        notes.append("edge weights do not sum to psi_p")
    if psi != 6 * n - 3:
        notes.append(f"psi={psi} != 6n-3 with n={n}")
    if class_number(p) != 2 * n - 1:
        notes.append(f"h(-p)={class_number(p)} != 2n-1 with n={n}")
    # handshake: degree sum counts loops twice
    if sum(g.degree(v) for v in g.vertices) != 2 * len(g.edges):
        notes.append("handshake failure")
    return GraphVerdict(p, not notes, tuple(notes))


# ---------------------------------------------------------------------------
# direct verification at tiny primes


def _poly_root_multiset(coeffs: list[int], p: int) -> dict[tuple[int, int], int]:
    """Roots in F_{p^2} of an F_p polynomial, with multiplicities, by scan."""
    work = [QuadExtElement(c, 0, p) for c in coeffs]
    roots: dict[tuple[int, int], int] = {}
    for a in range(p):
        for b in range(p):
            x = QuadExtElement(a, b, p)
            acc = QuadExtElement(0, 0, p)
            for c in reversed(work):
                acc = acc * x + c
            if not acc.is_zero():
                continue
            mult = 0
            cur = work
            while True:
                # synthetic division by (X - x)
                out = []
                carry = QuadExtElement(0, 0, p)
                for c in reversed(cur):
                    carry = carry * x + c
                    out.append(carry)
                remainder = out.pop()
                if not remainder.is_zero():
                    break
                mult += 1
                cur = out[::-1]
                if len(cur) <= 1 and (not cur or cur[0].is_zero()):
                    break
            roots[(a, b)] = mult
    return roots


def direct_root_check(p: int) -> bool:
    """Compare P_{3p} mod p against the enumerated j-set, with multiplicities.

    Only meaningful at tiny primes where the level-3p class polynomial is
    computable over the integers.  p = 5 expects the single root 0 = 8000 =
    54000 mod 5 with multiplicity 2; elsewhere the multiplicity ledger is
    4 for 8000, 2 for 54000 and 2 for each member of a conjugate pair.
    """
    if p % 4 != 1:
        raise ValueError("direct check applies to p = 1 mod 4")
    poly = hilbert_poly(3 * p)
    roots = _poly_root_multiset(poly.mod(p), p)
    prof = root_profile(p)
    got = set(roots)
    want = {(j.a, j.b) for j in prof.distinct_js}
    if got != want:
        return False
    if poly.degree != class_number(3 * p):
        return False
    if p == 5:
        return roots == {(0, 0): 2}
    for (a, b), mult in roots.items():
        if b == 0 and a == 8000 % p:
            expected = 4
        elif b == 0 and a == 54000 % p:
            expected = 2
        elif b == 0:
            return False
        else:
            expected = 2
        if mult != expected:
            return False
    return True


# ---------------------------------------------------------------------------
# CLI-facing aggregation


@dataclass(frozen=True)
class StructureVerdict:
    p: int
    congruence: str
    psi: int
    h_p: int
    h_3p: int
    closed_form: bool
    shape: bool | None
    graph: bool | None
    notes: tuple[str, ...] = field(default_factory=tuple)

    CSV_HEADER = "p,class,psi,h_p,h_3p,closed_form,shape,graph"

    def to_csv_row(self) -> str:
        def cell(v):
            return "-" if v is None else str(v).lower()

        return (
            f"{self.p},{self.congruence},{self.psi},{self.h_p},{self.h_3p},"
            f"{str(self.closed_form).lower()},{cell(self.shape)},{cell(self.graph)}"
        )

    @property
    def ok(self) -> bool:
        return self.closed_form and self.shape is not False and self.graph is not False

    def to_json(self, graph_data: GraphGp | None = None) -> str:
        payload = {
            "p": self.p,
            "class": self.congruence,
            "psi": self.psi,
            "h_p": self.h_p,
            "h_3p": self.h_3p,
            "closed_form": self.closed_form,
            "shape": self.shape,
            "graph": self.graph,
            "notes": list(self.notes),
        }
        if graph_data is not None:
            payload["graph_data"] = graph_data.as_dict()
        return json.dumps(payload, separators=(",", ":"))


def structure_verdict(p: int) -> tuple[StructureVerdict, GraphGp | None]:
    """Dispatch the per-prime structural checks by congruence class."""
    rep = psi_p(p)
    shape: bool | None = None
    graph_ok: bool | None = None
    notes: list[str] = []
    graph = None
    if p == 5:
        shape = direct_root_check(5)
        notes.append("p=5 special case: root 8000=54000=0 with multiplicity 2")
    elif rep.congruence == "1mod4":
        shape = shape_check_3p(p).ok
    elif rep.congruence == "11mod12":
        graph = build_graph(p)
        if p > GRAPH_MIN_PRIME:
            graph_ok = check_graph_structure(graph).ok
        else:
            notes.append("p=11: degree-pattern checks need p > 11, skipped")
    return (
        StructureVerdict(
            p, rep.congruence, rep.psi, rep.h_p, rep.h_3p,
            rep.closed_form_ok, shape, graph_ok, tuple(notes),
        ),
        graph,
    )
