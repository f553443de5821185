"""Repairing sets for basic conditions, repair-program synthesis for proper
conditions, and preservation accounting.

Two constructions of repairing sets are provided. ``v1`` adds or removes
the whole difference ``C − A`` in one rule. ``v2`` builds the missing part
one subgraph at a time under application conditions, and deletes one edge
(or, failing that, one node) per step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .conditions import (
    Condition,
    Not,
    Truth,
    and_,
    classify,
    neg,
    nexists,
    shift,
    simplify,
    view,
)
from .graph import Graph, Morphism, compose, extensions
from .programs import Call, Choice, Iterate, Outcome, Program, Skip, Try, seq
from .rules import DELETE, PlainRule, Rule, select, unselect

V1 = "v1"
V2 = "v2"


class NotProperError(ValueError):
    pass


class NotBasicError(ValueError):
    pass


@dataclass(frozen=True)
class RepairingSet:
    """Rules with interface ``A`` repairing ``∃a`` (``kind="exists"``) or
    ``∄a`` (``kind="nexists"``) for ``a: A ↪ C``."""

    kind: str
    a: Morphism
    rules: tuple
    variant: str = V2
    name: str = ""

    @property
    def target(self) -> Condition:
        from .conditions import Exists

        e = Exists(self.a, Truth(self.a.cod))
        return e if self.kind == "exists" else Not(e)

    def program(self) -> Program:
        """``try R_a`` or ``(S′_a)↓``."""
        if self.kind == "exists":
            return Try(Choice(tuple(Call(r) for r in self.rules), tag=self))
        primed = tuple(Call(r.replace(dangling=DELETE, name=r.name + "'")) for r in self.rules)
        return Iterate(Choice(primed, tag=self))


def _basic(target: Condition) -> tuple[str, Morphism]:
    v = view(target)
    if v.kind == "E" and isinstance(v.sub, Truth):
        return "exists", v.mor
    if v.kind == "A" and view(v.sub).kind == "F":
        return "nexists", v.mor
    raise NotBasicError("target is not of the form ∃a or ∄a")


def repairing_set_v1(target: Condition, name: str = "") -> RepairingSet:
    kind, a = _basic(target)
    A, C = a.dom, a.cod
    if kind == "exists":
        r = Rule(PlainRule(A, A, C, "add"), Morphism.identity(A), a, name=f"{name}R1")
    else:
        r = Rule(PlainRule(C, A, A, "del"), a, Morphism.identity(A), name=f"{name}S1")
    return RepairingSet(kind, a, (r,), V1, name)


def intermediate_graphs(A: Graph, C: Graph, proper: bool = True) -> list[Graph]:
    """Id-level subgraphs ``B`` with ``A ⊆ B ⊆ C`` (``B ≠ C`` if ``proper``),
    ordered by size then ids."""
    extra_n = sorted(v for v in C.nodes if v not in A.nodes)
    out = []
    for k in range(len(extra_n) + 1):
        for ns in itertools.combinations(extra_n, k):
            nodes = set(A.nodes) | set(ns)
            avail = sorted(
                e for e in C.edges
                if e not in A.edges and C.src(e) in nodes and C.tgt(e) in nodes
            )
            for j in range(len(avail) + 1):
                for es in itertools.combinations(avail, j):
                    B = C.subgraph(nodes, set(A.edges) | set(es))
                    if proper and B.size == C.size:
                        continue
                    out.append(B)
    out.sort(key=lambda g: (g.size, sorted(g.nodes), sorted(g.edges)))
    return out


def repairing_set_v2(target: Condition, name: str = "") -> RepairingSet:
    kind, a = _basic(target)
    A, C = a.dom, a.cod
    rules = []
    if kind == "exists":
        na = nexists(a)
        for k, B in enumerate(intermediate_graphs(A, C)):
            b = Morphism.inclusion(A, B)
            ac_b = [nexists(Morphism.inclusion(B, B2))
                    for B2 in intermediate_graphs(B, C, proper=False) if B2.size > B.size]
            ac = simplify(and_(B, [shift(b, na), *ac_b]))
            rules.append(Rule(PlainRule(B, B, C, "add"), b, a, ac, name=f"{name}R{k + 1}"))
    else:
        edges_left = len(C.edges) > len(A.edges)
        for B in intermediate_graphs(A, C):
            if edges_left:
                ok = len(B.nodes) == len(C.nodes) and len(B.edges) == len(C.edges) - 1
            else:
                ok = len(B.nodes) == len(C.nodes) - 1
            if ok:
                b = Morphism.inclusion(A, B)
                rules.append(Rule(PlainRule(C, B, B, "del"), a, b, name=f"{name}S{len(rules) + 1}"))
    return RepairingSet(kind, a, tuple(rules), V2, name)


def repairing_set(target: Condition, variant: str = V2, name: str = "") -> RepairingSet:
    if variant == V1:
        return repairing_set_v1(target, name)
    if variant == V2:
        return repairing_set_v2(target, name)
    raise ValueError(f"unknown variant {variant!r}")


def union_repairing(r1: RepairingSet, r2: RepairingSet, b: Morphism | None = None) -> RepairingSet:
    """Union of two repairing sets.

    Without ``b`` both sets must repair the same target. With ``b: A ↪ B``
    the second set repairs ``∃c``/``∄c`` for ``c: B ↪ C`` with
    ``a = c ∘ b``; its rules are moved to interface ``A`` by precomposing
    both interface morphisms with ``b``.
    """
    if r1.kind != r2.kind:
        raise ValueError("repairing sets for different quantifiers")
    if b is None:
        if r1.a != r2.a:
            raise ValueError("repairing sets for different targets")
        moved = r2.rules
    else:
        if b.cod != r2.a.dom or compose(b, r2.a).node_map != r1.a.node_map or \
                compose(b, r2.a).edge_map != r1.a.edge_map or r2.a.cod != r1.a.cod:
            raise ValueError("prefix composition requires a = c ∘ b")
        moved = tuple(r.replace(x=compose(b, r.x), y=compose(b, r.y)) for r in r2.rules)
    rules = list(r1.rules)
    for r in moved:
        if r not in rules:
            rules.append(r)
    return RepairingSet(r1.kind, r1.a, tuple(rules), r1.variant, r1.name)


# ---------------------------------------------------------------------------
# Synthesis


Realize = Callable[[RepairingSet], Program]


def repair_program(d: Condition, variant: str = V2, realize: Realize | None = None,
                   _path: str = "") -> Program:
    """The repair program ``P_d`` for a proper condition ``d``.

    ``realize`` turns each repairing set into the program standing for it;
    by default ``try R_a`` or ``(S′_a)↓``.
    """
    if not classify(d).proper:
        raise NotProperError("repair programs are only defined for proper conditions")
    realize = realize or RepairingSet.program
    A = d.context
    v = view(d)
    if v.kind == "T":
        return Skip(A)
    a = v.mor
    if v.kind == "E" and isinstance(v.sub, Truth):
        return realize(repairing_set(d, variant, _path))
    if v.kind == "A" and view(v.sub).kind == "F":
        return realize(repairing_set(d, variant, _path))
    c = v.sub
    inner = repair_program(c, variant, realize, _path + "c")
    if v.kind == "E":
        from .conditions import Exists

        head = repair_program(Exists(a, Truth(a.cod)), variant, realize, _path)
        return seq(head, Call(select(a)), inner, Call(unselect(a)))
    return Iterate(seq(Call(select(a, neg(c))), inner, Call(unselect(a))))


def repairing_sets_of(p: Program) -> list[RepairingSet]:
    """The repairing sets a synthesized program was built from, in order."""
    from .programs import Seq

    out = []

    def walk(q):
        if isinstance(q, Choice):
            if isinstance(q.tag, RepairingSet):
                out.append(q.tag)
            for o in q.options:
                walk(o)
        elif isinstance(q, Seq):
            walk(q.first)
            walk(q.second)
        elif isinstance(q, Iterate | Try):
            walk(q.body)

    walk(p)
    return out


# ---------------------------------------------------------------------------
# Preservation


def dang(gp: Morphism, a: Morphism) -> int:
    """0 if ``C − A`` contains an edge, else the largest host degree over
    the images of the nodes of ``C − A``."""
    if len(a.cod.edges) > len(a.dom.edges):
        return 0
    G = gp.cod
    deg = {}
    for s, t, _ in G.edges.values():
        deg[s] = deg.get(s, 0) + 1
        if t != s:
            deg[t] = deg.get(t, 0) + 1
    extra = [v for v in a.cod.nodes if v not in a.dom.nodes]
    return max((deg.get(gp.node_map[v], 0) for v in extra), default=0)


def delta(g: Morphism, d: Condition) -> int:
    """Upper bound on the number of items a repair of ``d`` at ``g`` must delete."""
    if not classify(d).proper:
        raise NotProperError("Δ is only defined for proper conditions")
    return _delta(g, d)


def _delta(g: Morphism, d: Condition) -> int:
    v = view(d)
    if v.kind == "T":
        return 0
    if v.kind == "E" and isinstance(v.sub, Truth):
        return 0
    ext = extensions(g, v.mor)
    if v.kind == "A" and view(v.sub).kind == "F":
        return sum(1 + dang(gp, v.mor) for gp in ext)
    if v.kind == "E":
        return max((_delta(gp, v.sub) for gp in ext), default=0)
    return sum(_delta(gp, v.sub) for gp in ext)


def vacuous_delta(g: Morphism, d: Condition) -> bool:
    """Whether ``Δ(g, d)`` passes through an ``∃(a, c)`` with no extension
    of the current morphism along ``a``. The maximum there ranges over
    nothing and contributes 0, although the repair first adds ``a`` and
    may then have to delete items for ``c``; the bound can fail."""
    v = view(d)
    if v.kind == "T" or isinstance(v.sub, Truth) or view(v.sub).kind == "F":
        return False
    ext = extensions(g, v.mor)
    if v.kind == "E" and not ext:
        return True
    return any(vacuous_delta(gp, v.sub) for gp in ext)


@dataclass(frozen=True)
class PreservationReport:
    preserved: int
    size_g: int
    delta: int
    vacuous: bool = False

    @property
    def bound_holds(self) -> bool:
        return self.preserved >= self.size_g - self.delta

    @property
    def slack(self) -> int:
        return self.preserved - (self.size_g - self.delta)

    def as_dict(self) -> dict:
        return {"preserved": self.preserved, "size": self.size_g, "delta": self.delta,
                "bound_holds": self.bound_holds, "vacuous_delta": self.vacuous}


def preservation_report(outcome: Outcome, d: Condition) -> PreservationReport:
    return PreservationReport(outcome.preserved(), outcome.host.size, delta(outcome.g, d),
                              vacuous_delta(outcome.g, d))
