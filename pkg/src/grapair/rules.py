"""Rules with application conditions and interfaces, applied by double pushout."""

from __future__ import annotations

from dataclasses import dataclass, field

from .conditions import Condition, Truth, satisfies
from .graph import (
    Graph,
    GraphError,
    Morphism,
    PartialMorphism,
    compose,
    dangling_edges,
    extensions,
    pushout,
    pushout_complement,
)

STANDARD = "standard"
DELETE = "delete"


@dataclass(frozen=True)
class PlainRule:
    """A span ``L ⟵ K ⟶ R`` of id-preserving inclusions."""

    L: Graph
    K: Graph
    R: Graph
    name: str = ""

    def __post_init__(self):
        if not self.K.is_subgraph_of(self.L) or not self.K.is_subgraph_of(self.R):
            raise GraphError(f"rule {self.name!r}: K must be a subgraph of L and R")

    @property
    def l(self) -> Morphism:
        return Morphism.inclusion(self.K, self.L)

    @property
    def r(self) -> Morphism:
        return Morphism.inclusion(self.K, self.R)

    @classmethod
    def identity(cls, g: Graph, name: str = "id") -> PlainRule:
        return cls(g, g, g, name)

    def is_identity(self) -> bool:
        return self.L == self.K == self.R

    def deleted(self) -> tuple[set, set]:
        return set(self.L.nodes) - set(self.K.nodes), set(self.L.edges) - set(self.K.edges)

    def created(self) -> tuple[set, set]:
        return set(self.R.nodes) - set(self.K.nodes), set(self.R.edges) - set(self.K.edges)


@dataclass(frozen=True, eq=True)
class Rule:
    """``⟨x, L ⟵ K ⟶ R, ac, y⟩`` with interfaces ``X = dom x`` and ``Y = dom y``.

    ``dangling`` selects plain double-pushout application (``"standard"``)
    or the dangling-edges operator (``"delete"``), which first removes the
    host edges that would dangle and then applies the rule.
    """

    plain: PlainRule
    x: Morphism = None
    y: Morphism = None
    ac: Condition = None
    dangling: str = STANDARD
    name: str = ""

    def __post_init__(self):
        p = self.plain
        if self.x is None:
            object.__setattr__(self, "x", Morphism.empty(p.L))
        if self.y is None:
            object.__setattr__(self, "y", Morphism.empty(p.R))
        if self.ac is None:
            object.__setattr__(self, "ac", Truth(p.L))
        if not self.name:
            object.__setattr__(self, "name", p.name)
        if self.x.cod != p.L or self.y.cod != p.R:
            raise GraphError(f"rule {self.name!r}: interface morphisms must end in L and R")
        if self.ac.context != p.L:
            raise GraphError(f"rule {self.name!r}: application condition must be over L")
        if self.dangling not in (STANDARD, DELETE):
            raise GraphError(f"unknown dangling mode {self.dangling!r}")

    @property
    def X(self) -> Graph:
        return self.x.dom

    @property
    def Y(self) -> Graph:
        return self.y.dom

    def interface_relation(self) -> PartialMorphism:
        """``i = y⁻¹ ∘ r ∘ l⁻¹ ∘ x`` as a partial morphism ``X ⇀ Y``."""
        K = self.plain.K
        yinv_n = {w: v for v, w in self.y.node_map.items()}
        yinv_e = {f: e for e, f in self.y.edge_map.items()}
        nm = {}
        for v, w in self.x.node_map.items():
            if w in K.nodes and w in yinv_n:
                nm[v] = yinv_n[w]
        em = {}
        for e, f in self.x.edge_map.items():
            s, t, _ = self.X.edges[e]
            if f in K.edges and f in yinv_e and s in nm and t in nm:
                em[e] = yinv_e[f]
        return PartialMorphism(self.X, self.Y, nm, em, check=False)

    def replace(self, **kw) -> Rule:
        d = dict(plain=self.plain, x=self.x, y=self.y, ac=self.ac,
                 dangling=self.dangling, name=self.name)
        d.update(kw)
        return Rule(**d)

    def __repr__(self):
        return f"Rule({self.name or '?'})"


@dataclass(frozen=True, eq=False)
class DirectTransformation:
    """One application ``G ⇒ H`` with its full double-pushout diagram."""

    rule: Rule
    g: Morphism
    match: Morphism
    host: Graph
    result: Graph
    comatch: Morphism
    h: Morphism
    i: PartialMorphism
    D: Graph
    l_star: Morphism
    r_star: Morphism
    deleted_dangling_edges: tuple = field(default=())

    def track(self) -> PartialMorphism:
        return track_of_step(self)


def _step(rule: Rule, g: Morphism, m: Morphism) -> DirectTransformation | None:
    p = rule.plain
    G = m.cod
    dang = ()
    if dangling_edges(p.l, m):
        if rule.dangling == STANDARD:
            return None
        dang = tuple(sorted({e for e, _ in dangling_edges(p.l, m)}))
        G0 = G.without(edges=dang)
        m = Morphism(p.L, G0, m.node_map, m.edge_map, check=False)
    D, k, _ = pushout_complement(p.l, m)
    H, comatch, r_star = pushout(p.r, k)
    l_star = Morphism.inclusion(D, G)
    h = compose(rule.y, comatch)
    match = Morphism(p.L, G, m.node_map, m.edge_map, check=False)
    return DirectTransformation(
        rule, g, match, G, H, comatch, h, rule.interface_relation(), D, l_star, r_star, dang
    )


def apply_all(rule: Rule, g: Morphism) -> list[DirectTransformation]:
    """Every direct transformation of ``rule`` at ``g: X ↪ G``, in the
    canonical order of the underlying matches."""
    if g.dom != rule.X:
        raise GraphError(f"rule {rule.name!r}: g must start at the left interface")
    out = []
    for m in extensions(g, rule.x):
        if not satisfies(m, rule.ac):
            continue
        t = _step(rule, g, m)
        if t is not None:
            out.append(t)
    return out


def apply_at(rule: Rule, g: Morphism, match: Morphism) -> DirectTransformation | None:
    """Apply at a given match, or ``None`` if it is not admissible."""
    if compose(rule.x, match) != g or not satisfies(match, rule.ac):
        return None
    return _step(rule, g, match)


def apply_plain(rule: Rule | PlainRule, host: Graph) -> list[DirectTransformation]:
    """Apply with empty interfaces on ``host`` (ignoring any declared ones)."""
    if isinstance(rule, PlainRule):
        rule = Rule(rule)
    rule = rule.replace(x=Morphism.empty(rule.plain.L), y=Morphism.empty(rule.plain.R))
    return apply_all(rule, Morphism.empty(host))


def track_of_step(t: DirectTransformation) -> PartialMorphism:
    """``tr(x) = r*(l*⁻¹(x))`` on items of ``D``, undefined elsewhere."""
    linv_n = {w: v for v, w in t.l_star.node_map.items()}
    linv_e = {f: e for e, f in t.l_star.edge_map.items()}
    nm = {x: t.r_star.node_map[v] for x, v in linv_n.items()}
    em = {x: t.r_star.edge_map[e] for x, e in linv_e.items()}
    return PartialMorphism(t.host, t.result, nm, em, check=False)


def with_context(p: PlainRule, c: Morphism) -> PlainRule:
    """Equip ``p`` with context ``c: K ↪ K′`` (pushouts of both legs)."""
    if c.dom != p.K:
        raise GraphError("context must start at K")
    Lp, _, _ = pushout(p.l, c, side="l")
    Rp, _, _ = pushout(p.r, c, side="r")
    return PlainRule(Lp, c.cod, Rp, p.name)


def inverse(p: PlainRule) -> PlainRule:
    return PlainRule(p.R, p.K, p.L, p.name + "⁻¹" if p.name else "")


def derived_rule(t: DirectTransformation) -> PlainRule:
    """The bottom span ``G ⟵ D ⟶ H`` of a step."""
    return PlainRule(t.host, t.D, t.result, f"{t.rule.name}@derived")


def select(x: Morphism, ac: Condition | None = None, name: str = "select") -> Rule:
    """``⟨x, id_C, ac, id_C⟩``: widen the interface from ``A`` to ``C``."""
    C = x.cod
    return Rule(PlainRule.identity(C, name), x, Morphism.identity(C), ac or Truth(C), name=name)


def unselect(x: Morphism, name: str = "unselect") -> Rule:
    """``⟨id_C, id_C, true, x⟩``: narrow the interface from ``C`` to ``A``."""
    C = x.cod
    return Rule(PlainRule.identity(C, name), Morphism.identity(C), x, Truth(C), name=name)


def is_selection(r: Rule) -> bool:
    return r.plain.is_identity()
