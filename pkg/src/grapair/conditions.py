"""Nested graph conditions.

The abstract syntax has four constructors: :class:`Truth`, :class:`Exists`,
:class:`Not` and :class:`And`. Everything else (false, universal
quantification, non-existence, disjunction) is sugar built by the helper
functions below and recognised again by :func:`view` and the pretty printer.

Morphisms inside conditions are id-preserving proper inclusions ``A ⊊ C``;
a condition over ``A`` is evaluated at an injective ``p: A ↪ G``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .graph import (
    EMPTY,
    Graph,
    GraphError,
    Morphism,
    fresh_id,
    iter_extensions,
)


class ConditionError(ValueError):
    pass


class NonLinearError(ConditionError):
    """Raised by :func:`to_anf` on conditions containing a conjunction."""


@dataclass(frozen=True)
class Truth:
    context: Graph = EMPTY


@dataclass(frozen=True)
class Exists:
    mor: Morphism
    sub: "Condition" = None

    def __post_init__(self):
        if self.sub is None:
            object.__setattr__(self, "sub", Truth(self.mor.cod))
        if not isinstance(self.mor, Morphism) or not self.mor.is_inclusion():
            raise ConditionError("condition morphisms must be id-preserving inclusions")
        if self.mor.cod.size <= self.mor.dom.size:
            raise ConditionError("condition morphism is not a proper inclusion")
        if self.sub.context != self.mor.cod:
            raise ConditionError("nested condition is not over the codomain")

    @property
    def context(self) -> Graph:
        return self.mor.dom


@dataclass(frozen=True)
class Not:
    sub: "Condition"

    @property
    def context(self) -> Graph:
        return self.sub.context


@dataclass(frozen=True)
class And:
    context: Graph
    subs: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "subs", tuple(self.subs))
        for s in self.subs:
            if s.context != self.context:
                raise ConditionError("conjunct over a different context")


Condition = Truth | Exists | Not | And


# ---------------------------------------------------------------------------
# Sugar


def true(ctx: Graph = EMPTY) -> Condition:
    return Truth(ctx)


def false(ctx: Graph = EMPTY) -> Condition:
    return Not(Truth(ctx))


def neg(c: Condition) -> Condition:
    """Negation that cancels an outer ``¬`` instead of stacking one."""
    return c.sub if isinstance(c, Not) else Not(c)


def _incl(a, c: Graph | None) -> Morphism:
    if isinstance(a, Morphism):
        return a
    return Morphism.inclusion(a, c)


def exists(a, sub: Condition = None, *, cod: Graph = None) -> Exists:
    """``∃(a, sub)``; ``a`` is a morphism, or a context graph with ``cod``."""
    return Exists(_incl(a, cod), sub)


def nexists(a, *, cod: Graph = None) -> Condition:
    return Not(exists(a, cod=cod))


def forall(a, sub: Condition, *, cod: Graph = None) -> Condition:
    return Not(Exists(_incl(a, cod), neg(sub)))


def and_(ctx: Graph, subs) -> Condition:
    return And(ctx, tuple(subs))


def or_(ctx: Graph, subs) -> Condition:
    subs = list(subs)
    if not subs:
        return false(ctx)
    if len(subs) == 1:
        return subs[0]
    return Not(And(ctx, tuple(neg(s) for s in subs)))


@dataclass(frozen=True)
class View:
    """Quantifier-level reading of a condition.

    ``kind`` is one of ``T``, ``F``, ``E``, ``A`` or ``other``; for ``E`` and
    ``A`` the fields ``mor`` and ``sub`` hold ``∃(mor, sub)`` or
    ``∀(mor, sub)``.
    """

    kind: str
    mor: Morphism | None = None
    sub: Condition | None = None


def view(c: Condition) -> View:
    negated = False
    while isinstance(c, Not):
        negated = not negated
        c = c.sub
    if isinstance(c, Truth):
        return View("F" if negated else "T")
    if isinstance(c, Exists):
        if negated:
            return View("A", c.mor, neg(c.sub))
        return View("E", c.mor, c.sub)
    return View("other")


# ---------------------------------------------------------------------------
# Satisfaction


def satisfies(p: Morphism, c: Condition) -> bool:
    """Whether the injective morphism ``p: A ↪ G`` satisfies ``c`` over ``A``."""
    if p.dom != c.context:
        raise ConditionError("context mismatch")
    return _sat(p, c)


def _sat(p: Morphism, c: Condition) -> bool:
    if isinstance(c, Truth):
        return True
    if isinstance(c, Not):
        return not _sat(p, c.sub)
    if isinstance(c, And):
        return all(_sat(p, s) for s in c.subs)
    return any(_sat(q, c.sub) for q in iter_extensions(p, c.mor))


def graph_satisfies(g: Graph, c: Condition) -> bool:
    """``G ⊨ c`` for a constraint ``c`` (a condition over the empty graph)."""
    if not c.context.is_empty():
        raise ConditionError("not a constraint")
    return _sat(Morphism.empty(g), c)


# ---------------------------------------------------------------------------
# Structure


def subconditions(c: Condition) -> Iterator[Condition]:
    yield c
    if isinstance(c, Exists | Not):
        yield from subconditions(c.sub)
    elif isinstance(c, And):
        for s in c.subs:
            yield from subconditions(s)


def depth(c: Condition) -> int:
    """Nesting depth counted in quantifiers."""
    if isinstance(c, Truth):
        return 0
    if isinstance(c, Not):
        return depth(c.sub)
    if isinstance(c, And):
        return max((depth(s) for s in c.subs), default=0)
    return 1 + depth(c.sub)


def labels(c: Condition) -> set[str]:
    out = set(c.context.labels())
    for s in subconditions(c):
        if isinstance(s, Exists):
            out |= s.mor.cod.labels()
    return out


def graphs(c: Condition) -> list[Graph]:
    gs = [c.context]
    for s in subconditions(c):
        if isinstance(s, Exists):
            gs.append(s.mor.cod)
    return gs


def is_linear(c: Condition) -> bool:
    return not any(isinstance(s, And) for s in subconditions(c))


# ---------------------------------------------------------------------------
# Simplification and normal forms


def simplify(c: Condition) -> Condition:
    """Apply the standard equivalences bottom-up until nothing changes.

    Rewrites: ``¬¬c → c``; ``∃(x, false) → false`` (which with double
    negation covers ``∀(x, true) → true``, ``∀(x, false) → ∄x`` and
    ``∀(x, ∃(y, false)) → ∄x``); true conjuncts dropped; a false conjunct
    absorbs; nested conjunctions flattened; duplicate conjuncts removed;
    empty conjunction → true; singleton conjunction → its element.
    """
    while True:
        d = _simp(c)
        if d == c:
            return d
        c = d


def _is_false(c):
    return isinstance(c, Not) and isinstance(c.sub, Truth)


def _simp(c: Condition) -> Condition:
    if isinstance(c, Truth):
        return c
    if isinstance(c, Not):
        s = _simp(c.sub)
        if isinstance(s, Not):
            return s.sub
        return Not(s)
    if isinstance(c, Exists):
        s = _simp(c.sub)
        if _is_false(s):
            return false(c.context)
        return Exists(c.mor, s)
    subs = []
    for s in (_simp(s) for s in c.subs):
        parts = s.subs if isinstance(s, And) else (s,)
        for q in parts:
            if isinstance(q, Truth):
                continue
            if _is_false(q):
                return false(c.context)
            if q not in subs:
                subs.append(q)
    if not subs:
        return Truth(c.context)
    if len(subs) == 1:
        return subs[0]
    return And(c.context, tuple(subs))


def _compose_incl(a: Morphism, b: Morphism) -> Morphism:
    return Morphism.inclusion(a.dom, b.cod)


def quantifier_chain(c: Condition) -> tuple[list[tuple[str, Morphism]], bool]:
    """Read a linear condition as ``Q1(a1, Q2(a2, ... end))`` with ``end``
    a boolean; consecutive equal quantifiers are not merged here."""
    if not is_linear(c):
        raise NonLinearError("condition contains a conjunction")
    chain = []
    negated = False
    while True:
        if isinstance(c, Not):
            negated = not negated
            c = c.sub
        elif isinstance(c, Truth):
            return chain, not negated
        else:
            chain.append(("A" if negated else "E", c.mor))
            c = c.sub


def build_chain(chain, end: bool, ctx: Graph) -> Condition:
    c = None
    for q, mor in reversed(chain):
        inner = c if c is not None else Truth(mor.cod) if end else false(mor.cod)
        c = Exists(mor, inner) if q == "E" else Not(Exists(mor, neg(inner)))
    if c is None:
        return Truth(ctx) if end else false(ctx)
    return c


def to_anf(c: Condition) -> Condition:
    """An equivalent condition with alternating quantifiers.

    Consecutive equal quantifiers are merged by composing their inclusions
    (``∃(a, ∃(b, c)) ≡ ∃(b∘a, c)`` and dually for ``∀``), then trailing
    ``∀(x, true)`` and ``∃(x, false)`` are dropped.
    """
    chain, end = quantifier_chain(c)
    merged = []
    for q, mor in chain:
        if merged and merged[-1][0] == q:
            merged[-1] = (q, _compose_incl(merged[-1][1], mor))
        else:
            merged.append((q, mor))
    while merged:
        q, _ = merged[-1]
        if (q == "A" and end) or (q == "E" and not end):
            merged.pop()
        else:
            break
    # popping may have exposed a pair of equal quantifiers only if the chain
    # was not alternating, which merging already ruled out
    return build_chain(merged, end, c.context)


@dataclass(frozen=True)
class ConditionClass:
    linear: bool
    anf: bool
    proper: bool
    basic: bool


def classify(c: Condition) -> ConditionClass:
    if not is_linear(c):
        return ConditionClass(False, False, False, False)
    kinds = []
    while True:
        v = view(c)
        if v.kind in ("T", "F"):
            end = v.kind == "T"
            break
        kinds.append(v.kind)
        c = v.sub
    anf = all(x != y for x, y in zip(kinds, kinds[1:]))
    proper = anf and (
        (not kinds and end)
        or (kinds and kinds[-1] == "E" and end)
        or (kinds == ["A"] and not end)
        or (kinds == ["E", "A"] and not end)
    )
    basic = proper and ((kinds == ["E"] and end) or (kinds == ["A"] and not end))
    return ConditionClass(True, anf, proper, basic)


# ---------------------------------------------------------------------------
# Shift


def jointly_surjective_overlaps(a: Morphism, b: Morphism) -> list[tuple[Morphism, Morphism]]:
    """All ``(a′: R ↪ E, b′: C ↪ E)`` with ``b′∘a = a′∘b``, both injective
    and jointly surjective, one per isomorphism class.

    ``E`` keeps the ids of ``R`` (so ``a′`` is an inclusion); items of
    ``C`` outside ``a(A)`` are either glued onto unused ``R`` items or
    added under their own id when free. The list is ordered by how many
    items are glued (fewest first), then by the gluing itself.
    """
    if a.dom != b.dom:
        raise GraphError("overlaps: morphisms do not share a domain")
    C, R = a.cod, b.cod
    ainv_n = {w: v for v, w in a.node_map.items()}
    ainv_e = {f: e for e, f in a.edge_map.items()}
    base_n = {c: b.node_map[ainv_n[c]] for c in C._nodes if c in ainv_n}
    base_e = {c: b.edge_map[ainv_e[c]] for c in C._edges if c in ainv_e}
    free_cn = sorted(c for c in C._nodes if c not in ainv_n)
    free_ce = sorted(c for c in C._edges if c not in ainv_e)
    used_rn = set(b.node_map.values())
    used_re = set(b.edge_map.values())
    open_rn = sorted(v for v in R._nodes if v not in used_rn)
    open_re = sorted(e for e in R._edges if e not in used_re)

    results = []

    def node_choices(i, nm, taken):
        if i == len(free_cn):
            yield dict(nm)
            return
        c = free_cn[i]
        nm[c] = None
        yield from node_choices(i + 1, nm, taken)
        for v in open_rn:
            if v not in taken and R._nodes[v] == C._nodes[c]:
                nm[c] = v
                taken.add(v)
                yield from node_choices(i + 1, nm, taken)
                taken.discard(v)
        del nm[c]

    for glue_n in node_choices(0, {}, set()):
        nodes = dict(R._nodes)
        nmap = dict(base_n)
        for c in free_cn:
            if glue_n[c] is not None:
                nmap[c] = glue_n[c]
        for c in free_cn:
            if glue_n[c] is None:
                nid = fresh_id(c, nodes, "c")
                nodes[nid] = C._nodes[c]
                nmap[c] = nid

        def edge_choices(i, em, taken):
            if i == len(free_ce):
                yield dict(em)
                return
            c = free_ce[i]
            s, t, lab = C._edges[c]
            em[c] = None
            yield from edge_choices(i + 1, em, taken)
            for e in open_re:
                if e not in taken and R._edges[e] == (nmap[s], nmap[t], lab):
                    em[c] = e
                    taken.add(e)
                    yield from edge_choices(i + 1, em, taken)
                    taken.discard(e)
            del em[c]

        for glue_e in edge_choices(0, {}, set()):
            edges = dict(R._edges)
            emap = dict(base_e)
            for c in free_ce:
                if glue_e[c] is not None:
                    emap[c] = glue_e[c]
            for c in free_ce:
                if glue_e[c] is None:
                    s, t, lab = C._edges[c]
                    eid = fresh_id(c, edges, "c")
                    edges[eid] = (nmap[s], nmap[t], lab)
                    emap[c] = eid
            E = Graph(nodes, edges, check=False)
            a2 = Morphism.inclusion(R, E)
            b2 = Morphism(C, E, nmap, emap)
            glued = sum(v is not None for v in glue_n.values()) + sum(
                e is not None for e in glue_e.values()
            )
            key = (glued, sorted((k, v or "") for k, v in glue_n.items()),
                   sorted((k, v or "") for k, v in glue_e.items()))
            results.append((key, a2, b2))
    results.sort(key=lambda t: t[0])
    return [(a2, b2) for _, a2, b2 in results]


def shift(b: Morphism, d: Condition) -> Condition:
    """``Shift(b, d)``: a condition over ``b.cod`` with
    ``n ⊨ Shift(b, d) ⟺ n∘b ⊨ d`` for every injective ``n``."""
    if d.context != b.dom:
        raise ConditionError("context mismatch")
    R = b.cod
    if isinstance(d, Truth):
        return Truth(R)
    if isinstance(d, Not):
        return Not(shift(b, d.sub))
    if isinstance(d, And):
        return And(R, tuple(shift(b, s) for s in d.subs))
    parts = []
    for a2, b2 in jointly_surjective_overlaps(d.mor, b):
        inner = shift(b2, d.sub)
        if a2.cod.size == R.size:
            # the overlap adds nothing: ∃(id, c) ≡ c
            parts.append(inner)
        else:
            parts.append(Exists(a2, inner))
    return or_(R, parts)


# ---------------------------------------------------------------------------
# Bounded satisfiability


def _max_multiplicity(c: Condition) -> int:
    m = 1
    for g in graphs(c):
        counts = {}
        for s, t, lab in g.edges.values():
            counts[(s, t, lab)] = counts.get((s, t, lab), 0) + 1
        m = max([m, *counts.values()])
    return m


def iter_graphs(n: int, node_labels, edge_labels, multiplicity: int = 1,
                max_edges: int | None = None) -> Iterator[Graph]:
    """Graphs with node count ``0..n`` over the given labels, by node count
    then edge count. Isomorphic duplicates are not removed."""
    node_labels = sorted(node_labels)
    edge_labels = sorted(edge_labels)
    for k in range(n + 1):
        ids = [str(i + 1) for i in range(k)]
        slots = [(s, t, lab) for s in ids for t in ids for lab in edge_labels]
        top = len(slots) * multiplicity
        if max_edges is not None:
            top = min(top, max_edges)
        for m in range(top + 1):
            for labs in itertools.product(node_labels, repeat=k):
                for combo in itertools.combinations_with_replacement(range(len(slots)), m):
                    if multiplicity < m and any(combo.count(x) > multiplicity for x in set(combo)):
                        continue
                    yield Graph(
                        zip(ids, labs),
                        ((f"e{j + 1}", *slots[x]) for j, x in enumerate(combo)),
                        check=False,
                    )


def is_satisfiable_bounded(c: Condition, n: int, *, limit: int = 200_000):
    """``True`` with a witness if some graph of at most ``n`` nodes satisfies
    the constraint, else ``None`` (unknown). Returns ``(verdict, witness)``.

    The search stops after ``limit`` candidate graphs.
    """
    if not c.context.is_empty():
        raise ConditionError("not a constraint")
    labs = labels(c) or {"a"}
    mult = _max_multiplicity(c)
    for k, g in enumerate(iter_graphs(n, labs, labs, mult)):
        if k >= limit:
            break
        if graph_satisfies(g, c):
            return True, g
    return None, None


# ---------------------------------------------------------------------------
# Printing


def show_graph(g: Graph, default_label: str = "a") -> str:
    def node(v):
        lab = g.nodes[v]
        return v if lab == default_label else f"{v}:{lab}"

    ns = " ".join(node(v) for v in sorted(g.nodes))
    es = []
    for e in sorted(g.edges):
        s, t, lab = g.edges[e]
        es.append(f"{s}->{t}" if lab == default_label else f"{s}-{lab}->{t}")
    return f"[{ns}{' | ' + ' '.join(es) if es else ''}]"


def pretty(c: Condition) -> str:
    """Compact notation using ``∃``, ``∀``, ``∄``, ``∧``, ``∨`` and showing
    only the codomain of each inclusion."""
    v = view(c)
    if v.kind == "T":
        return "true"
    if v.kind == "F":
        return "false"
    if v.kind == "E":
        g = show_graph(v.mor.cod)
        return f"∃{g}" if isinstance(v.sub, Truth) else f"∃({g}, {pretty(v.sub)})"
    if v.kind == "A":
        g = show_graph(v.mor.cod)
        if _is_false(v.sub):
            return f"∄{g}"
        return f"∀({g}, {pretty(v.sub)})"
    if isinstance(c, Not) and isinstance(c.sub, And):
        return "(" + " ∨ ".join(pretty(neg(s)) for s in c.sub.subs) + ")"
    if isinstance(c, And):
        return "(" + " ∧ ".join(pretty(s) for s in c.subs) + ")"
    return f"¬{pretty(c.sub)}"
