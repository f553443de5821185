"""Finite directed labelled multigraphs and injective morphisms between them.

Graphs are immutable values keyed by opaque string ids. Morphisms store
their node and edge maps as plain dicts; the ``check`` flag on the
constructors lets hot loops skip re-validation of maps they built
themselves.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping


class GraphError(ValueError):
    """Raised when a graph or morphism violates its structural invariants."""


class DanglingConditionError(GraphError):
    """The pushout complement does not exist.

    ``pairs`` lists the offending ``(edge_id, node_id)`` pairs: host edges
    outside the match that touch a node scheduled for deletion.
    """

    def __init__(self, pairs):
        self.pairs = tuple(sorted(pairs))
        super().__init__(f"dangling edges: {self.pairs}")


@dataclass(frozen=True)
class Violation:
    reason: str
    ident: str

    def __str__(self):
        return f"{self.reason}: {self.ident}"


class Graph:
    """A finite directed labelled graph.

    ``nodes`` maps node id to label, ``edges`` maps edge id to a
    ``(source, target, label)`` triple. Parallel edges and loops are allowed.
    """

    __slots__ = ("_nodes", "_edges", "_hash", "_index")

    def __init__(self, nodes=(), edges=(), *, check=True):
        if isinstance(nodes, Mapping):
            nodes = nodes.items()
        if isinstance(edges, Mapping):
            edges = ((e, *ste) for e, ste in edges.items())
        self._nodes = {str(v): str(lab) for v, lab in nodes}
        self._edges = {str(e): (str(s), str(t), str(lab)) for e, s, t, lab in edges}
        self._hash = None
        self._index = None
        if check:
            bad = validate(self)
            if bad is not None:
                raise GraphError(str(bad))

    @classmethod
    def build(cls, nodes: Iterable = (), edges: Iterable = ()) -> Graph:
        """Convenience constructor: ``nodes`` as ``(id, label)`` pairs or bare
        ids (label ``"a"``), ``edges`` as ``(id, src, tgt[, label])``."""
        ns = [(v, "a") if isinstance(v, str) else tuple(v) for v in nodes]
        es = [tuple(e) if len(e) == 4 else (*e, "a") for e in edges]
        return cls(ns, es)

    @property
    def nodes(self) -> Mapping[str, str]:
        return MappingProxyType(self._nodes)

    @property
    def edges(self) -> Mapping[str, tuple[str, str, str]]:
        return MappingProxyType(self._edges)

    def label(self, v: str) -> str:
        return self._nodes[v]

    def src(self, e: str) -> str:
        return self._edges[e][0]

    def tgt(self, e: str) -> str:
        return self._edges[e][1]

    def elabel(self, e: str) -> str:
        return self._edges[e][2]

    @property
    def size(self) -> int:
        """Number of items (nodes plus edges)."""
        return len(self._nodes) + len(self._edges)

    def __len__(self):
        return len(self._nodes)

    def is_empty(self) -> bool:
        return not self._nodes and not self._edges

    def labels(self) -> set[str]:
        return set(self._nodes.values()) | {lab for _, _, lab in self._edges.values()}

    def incident(self, v: str) -> list[str]:
        return sorted(e for e, (s, t, _) in self._edges.items() if s == v or t == v)

    def idx(self) -> _Index:
        if self._index is None:
            self._index = _Index(self)
        return self._index

    # -- derived graphs -------------------------------------------------

    def subgraph(self, nodes: Iterable[str], edges: Iterable[str]) -> Graph:
        nodes = set(nodes)
        return Graph(
            {v: self._nodes[v] for v in nodes},
            {e: self._edges[e] for e in edges},
        )

    def without(self, nodes: Iterable[str] = (), edges: Iterable[str] = ()) -> Graph:
        nodes, edges = set(nodes), set(edges)
        return Graph(
            {v: lab for v, lab in self._nodes.items() if v not in nodes},
            {e: ste for e, ste in self._edges.items() if e not in edges},
        )

    def is_subgraph_of(self, other: Graph) -> bool:
        """Id-level inclusion: every item of ``self`` appears in ``other``
        with the same label and endpoints."""
        return all(other._nodes.get(v) == lab for v, lab in self._nodes.items()) and all(
            other._edges.get(e) == ste for e, ste in self._edges.items()
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self is other or (self._nodes == other._nodes and self._edges == other._edges)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._nodes.items()), frozenset(self._edges.items())))
        return self._hash

    def __repr__(self):
        ns = " ".join(f"{v}:{lab}" for v, lab in sorted(self._nodes.items()))
        es = " ".join(f"{s}-{lab}->{t}" for _, (s, t, lab) in sorted(self._edges.items()))
        return f"Graph({ns}{' | ' + es if es else ''})"



class _Index:
    """Adjacency tables used by the matcher."""

    __slots__ = ("by_label", "between", "out_deg", "in_deg", "out_pairs", "in_pairs")

    def __init__(self, g: Graph):
        self.by_label = defaultdict(list)
        for v in sorted(g._nodes):
            self.by_label[g._nodes[v]].append(v)
        self.between = defaultdict(lambda: defaultdict(list))
        self.out_deg = defaultdict(lambda: defaultdict(int))
        self.in_deg = defaultdict(lambda: defaultdict(int))
        # node -> {neighbour: {label: count}}
        self.out_pairs = defaultdict(lambda: defaultdict(lambda: defaultdict(int)))
        self.in_pairs = defaultdict(lambda: defaultdict(lambda: defaultdict(int)))
        for e in sorted(g._edges):
            s, t, lab = g._edges[e]
            self.between[(s, t)][lab].append(e)
            self.out_deg[s][lab] += 1
            self.in_deg[t][lab] += 1
            self.out_pairs[s][t][lab] += 1
            self.in_pairs[t][s][lab] += 1

    def count(self, s, t, lab) -> int:
        d = self.between.get((s, t))
        if d is None:
            return 0
        return len(d.get(lab, ()))


def validate(g) -> Violation | None:
    """Check graph invariants; return the first violation or ``None``.

    Accepts a :class:`Graph` or the raw JSON-style dict
    ``{"nodes": [...], "edges": [...]}``, the latter so duplicate ids can be
    reported before they are collapsed into a mapping.
    """
    if isinstance(g, Mapping):
        seen = set()
        for n in g.get("nodes", []):
            if n["id"] in seen:
                return Violation("duplicate node id", str(n["id"]))
            seen.add(n["id"])
            if not str(n.get("label", "")):
                return Violation("empty label", str(n["id"]))
        nodes = seen
        seen = set()
        for e in g.get("edges", []):
            if e["id"] in seen:
                return Violation("duplicate edge id", str(e["id"]))
            seen.add(e["id"])
            for end in (e["src"], e["tgt"]):
                if end not in nodes:
                    return Violation("dangling endpoint", str(e["id"]))
            if not str(e.get("label", "")):
                return Violation("empty label", str(e["id"]))
        return None
    for v, lab in g._nodes.items():
        if not lab:
            return Violation("empty label", v)
    for e, (s, t, lab) in g._edges.items():
        if s not in g._nodes or t not in g._nodes:
            return Violation("dangling endpoint", e)
        if not lab:
            return Violation("empty label", e)
    return None


EMPTY = Graph()


# ---------------------------------------------------------------------------
# Morphisms


class PartialMorphism:
    """An injective structure-preserving map defined on a subgraph of ``dom``."""

    __slots__ = ("dom", "cod", "node_map", "edge_map", "_hash")

    def __init__(self, dom: Graph, cod: Graph, node_map: Mapping, edge_map: Mapping = None, *, check=True):
        self.dom = dom
        self.cod = cod
        self.node_map = dict(node_map)
        self.edge_map = dict(edge_map or {})
        self._hash = None
        if check:
            self._check()

    def _check(self):
        dom, cod = self.dom, self.cod
        nm, em = self.node_map, self.edge_map
        for v, w in nm.items():
            if v not in dom._nodes or w not in cod._nodes:
                raise GraphError(f"node map {v}->{w} outside graphs")
            if dom._nodes[v] != cod._nodes[w]:
                raise GraphError(f"node map {v}->{w} changes label")
        for e, f in em.items():
            if e not in dom._edges or f not in cod._edges:
                raise GraphError(f"edge map {e}->{f} outside graphs")
            s, t, lab = dom._edges[e]
            s2, t2, lab2 = cod._edges[f]
            if lab != lab2:
                raise GraphError(f"edge map {e}->{f} changes label")
            if s not in nm or t not in nm:
                raise GraphError(f"edge {e} mapped without its endpoints")
            if nm[s] != s2 or nm[t] != t2:
                raise GraphError(f"edge map {e}->{f} breaks incidence")
        if len(set(nm.values())) != len(nm) or len(set(em.values())) != len(em):
            raise GraphError("morphism is not injective")

    def is_total(self) -> bool:
        return len(self.node_map) == len(self.dom._nodes) and len(self.edge_map) == len(self.dom._edges)

    def domain_size(self) -> int:
        return len(self.node_map) + len(self.edge_map)

    def inverse(self) -> PartialMorphism:
        return PartialMorphism(
            self.cod, self.dom,
            {w: v for v, w in self.node_map.items()},
            {f: e for e, f in self.edge_map.items()},
            check=False,
        )

    def then(self, other: PartialMorphism) -> PartialMorphism:
        """Diagrammatic composition: ``other ∘ self``."""
        return compose_partial(self, other)

    def node_image(self) -> set[str]:
        return set(self.node_map.values())

    def edge_image(self) -> set[str]:
        return set(self.edge_map.values())

    def _key(self):
        return (frozenset(self.node_map.items()), frozenset(self.edge_map.items()))

    def __eq__(self, other):
        if not isinstance(other, PartialMorphism):
            return NotImplemented
        return (
            self.node_map == other.node_map
            and self.edge_map == other.edge_map
            and self.dom == other.dom
            and self.cod == other.cod
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._key(), self.dom, self.cod))
        return self._hash

    def __repr__(self):
        nm = ", ".join(f"{v}->{w}" for v, w in sorted(self.node_map.items()))
        em = ", ".join(f"{v}->{w}" for v, w in sorted(self.edge_map.items()))
        return f"{type(self).__name__}({{{nm}}}, {{{em}}})"


class Morphism(PartialMorphism):
    """A total injective morphism."""

    __slots__ = ()

    def _check(self):
        super()._check()
        if not self.is_total():
            raise GraphError("morphism is not total")

    @classmethod
    def identity(cls, g: Graph) -> Morphism:
        return cls(g, g, {v: v for v in g._nodes}, {e: e for e in g._edges}, check=False)

    @classmethod
    def inclusion(cls, sub: Graph, sup: Graph) -> Morphism:
        """The id-preserving morphism ``sub ↪ sup``."""
        if not sub.is_subgraph_of(sup):
            raise GraphError("not a subgraph")
        return cls(sub, sup, {v: v for v in sub._nodes}, {e: e for e in sub._edges}, check=False)

    @classmethod
    def empty(cls, g: Graph) -> Morphism:
        return cls(EMPTY, g, {}, {}, check=False)

    def is_inclusion(self) -> bool:
        return all(v == w for v, w in self.node_map.items()) and all(
            e == f for e, f in self.edge_map.items()
        )

    def is_surjective(self) -> bool:
        return len(self.node_map) == len(self.cod._nodes) and len(self.edge_map) == len(self.cod._edges)

    def is_iso(self) -> bool:
        return self.is_surjective()


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``g ∘ f`` for total morphisms ``f: A → B``, ``g: B → C``."""
    if f.cod != g.dom:
        raise GraphError("cannot compose: codomain/domain mismatch")
    gn, ge = g.node_map, g.edge_map
    return Morphism(
        f.dom, g.cod,
        {v: gn[w] for v, w in f.node_map.items()},
        {e: ge[x] for e, x in f.edge_map.items()},
        check=False,
    )


def compose_partial(f: PartialMorphism, g: PartialMorphism) -> PartialMorphism:
    """``g ∘ f``, defined exactly where both legs are defined."""
    if f.cod != g.dom:
        raise GraphError("cannot compose: codomain/domain mismatch")
    gn, ge = g.node_map, g.edge_map
    nm = {v: gn[w] for v, w in f.node_map.items() if w in gn}
    em = {e: ge[x] for e, x in f.edge_map.items() if x in ge}
    # an edge stays defined only if both its endpoints do
    em = {e: x for e, x in em.items() if f.dom._edges[e][0] in nm and f.dom._edges[e][1] in nm}
    return PartialMorphism(f.dom, g.cod, nm, em, check=False)


def as_total(p: PartialMorphism) -> Morphism | None:
    if not p.is_total():
        return None
    return Morphism(p.dom, p.cod, p.node_map, p.edge_map, check=False)


# ---------------------------------------------------------------------------
# Morphism enumeration


def _match_order(a: Graph, free: list[str], fixed: set[str], gi: _Index) -> list[str]:
    """Order pattern nodes so each one is, where possible, adjacent to one
    already placed; ties broken by host label rarity then pattern degree."""
    ai = a.idx()
    deg = {v: sum(ai.out_deg[v].values()) + sum(ai.in_deg[v].values()) for v in free}
    rarity = {v: len(gi.by_label.get(a._nodes[v], ())) for v in free}
    placed = set(fixed)
    order = []
    remaining = set(free)
    while remaining:
        def key(v):
            linked = sum(
                1 for u in itertools.chain(ai.out_pairs[v], ai.in_pairs[v]) if u in placed
            )
            return (-linked, rarity[v], -deg[v], v)

        v = min(remaining, key=key)
        order.append(v)
        placed.add(v)
        remaining.discard(v)
    return order


def iter_monos(a: Graph, g: Graph, node_fix: Mapping = None, edge_fix: Mapping = None
               ) -> Iterator[tuple[dict, dict]]:
    """Yield ``(node_map, edge_map)`` for every injective morphism ``a → g``
    that agrees with the given partial assignments. Order is unspecified."""
    node_fix = dict(node_fix or {})
    edge_fix = dict(edge_fix or {})
    if len(a._nodes) > len(g._nodes) or len(a._edges) > len(g._edges):
        return
    for v, x in node_fix.items():
        if g._nodes.get(x) != a._nodes[v]:
            return
    if len(set(node_fix.values())) != len(node_fix):
        return
    ai, gi = a.idx(), g.idx()
    free = [v for v in a._nodes if v not in node_fix]
    order = _match_order(a, free, set(node_fix), gi)

    cands = {}
    for v in order:
        od, idg = ai.out_deg[v], ai.in_deg[v]
        cs = []
        for x in gi.by_label.get(a._nodes[v], ()):
            god, gid = gi.out_deg[x], gi.in_deg[x]
            if all(god.get(lab, 0) >= k for lab, k in od.items()) and all(
                gid.get(lab, 0) >= k for lab, k in idg.items()
            ):
                cs.append(x)
        if not cs:
            return
        cands[v] = cs

    assign = dict(node_fix)
    used = set(node_fix.values())

    def fits(v, x):
        for u, labs in ai.out_pairs[v].items():
            y = x if u == v else assign.get(u)
            if y is not None:
                for lab, k in labs.items():
                    if gi.count(x, y, lab) < k:
                        return False
        for u, labs in ai.in_pairs[v].items():
            y = assign.get(u)
            if y is not None and u != v:
                for lab, k in labs.items():
                    if gi.count(y, x, lab) < k:
                        return False
        return True

    # fixed nodes must already be mutually consistent
    for v in node_fix:
        if not fits(v, node_fix[v]):
            return

    free_edges = sorted(e for e in a._edges if e not in edge_fix)
    fixed_used = set(edge_fix.values())

    def edge_maps():
        groups = defaultdict(list)
        for e in free_edges:
            s, t, lab = a._edges[e]
            groups[(assign[s], assign[t], lab)].append(e)
        keys = sorted(groups)
        options = []
        for key in keys:
            s, t, lab = key
            pool = [f for f in gi.between.get((s, t), {}).get(lab, ()) if f not in fixed_used]
            es = groups[key]
            if len(pool) < len(es):
                return
            options.append((es, list(itertools.permutations(pool, len(es)))))
        for combo in itertools.product(*(opts for _, opts in options)):
            em = dict(edge_fix)
            for (es, _), chosen in zip(options, combo):
                em.update(zip(es, chosen))
            yield em

    def rec(k):
        if k == len(order):
            for em in edge_maps():
                yield dict(assign), em
            return
        v = order[k]
        for x in cands[v]:
            if x in used or not fits(v, x):
                continue
            assign[v] = x
            used.add(x)
            yield from rec(k + 1)
            used.discard(x)
            del assign[v]

    yield from rec(0)


def _sort_key(a: Graph):
    ns, es = sorted(a._nodes), sorted(a._edges)
    return lambda m: (tuple(m.node_map[v] for v in ns), tuple(m.edge_map[e] for e in es))


def enumerate_monos(a: Graph, g: Graph) -> list[Morphism]:
    """All injective morphisms ``a → g``, sorted by the image sequence of
    ``a``'s nodes (in id order), then of its edges."""
    ms = [Morphism(a, g, nm, em, check=False) for nm, em in iter_monos(a, g)]
    ms.sort(key=_sort_key(a))
    return ms


def iter_extensions(g: Morphism, a: Morphism) -> Iterator[Morphism]:
    """Injective ``q: a.cod → g.cod`` with ``q ∘ a = g`` (unordered)."""
    node_fix = {a.node_map[v]: w for v, w in g.node_map.items()}
    edge_fix = {a.edge_map[e]: f for e, f in g.edge_map.items()}
    c, host = a.cod, g.cod
    for nm, em in iter_monos(c, host, node_fix, edge_fix):
        yield Morphism(c, host, nm, em, check=False)


def extensions(g: Morphism, a: Morphism) -> list[Morphism]:
    """Sorted list of all ``g'`` with ``g' ∘ a = g``."""
    if g.dom != a.dom:
        raise GraphError("extensions: morphisms do not share a domain")
    ms = list(iter_extensions(g, a))
    ms.sort(key=_sort_key(a.cod))
    return ms


# ---------------------------------------------------------------------------
# Canonical forms and isomorphism


def _refine(g: Graph, colors: dict, ecol: Mapping) -> dict:
    """Colour refinement until stable; colours are returned as dense ints."""
    nodes = g._nodes
    out = defaultdict(list)
    inc = defaultdict(list)
    for e, (s, t, lab) in g._edges.items():
        c = ecol.get(e, "")
        out[s].append((t, lab, c))
        inc[t].append((s, lab, c))
    ncls = -1
    while True:
        sig = {
            v: (
                colors[v],
                tuple(sorted((colors[t], lab, c) for t, lab, c in out[v])),
                tuple(sorted((colors[s], lab, c) for s, lab, c in inc[v])),
            )
            for v in nodes
        }
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        colors = {v: ranks[sig[v]] for v in nodes}
        if len(ranks) == ncls:
            return colors
        ncls = len(ranks)


def canonical_form(g: Graph, node_color: Mapping = None, edge_color: Mapping = None):
    """Canonical key of ``g`` (with optional extra item colours) and a node
    order realising it.

    Two coloured graphs are isomorphic iff their keys are equal. The search
    is exhaustive individualisation over colour classes, so it is exact but
    exponential in the size of symmetric classes.
    """
    node_color = {v: str(c) for v, c in (node_color or {}).items()}
    ecol = {e: str(c) for e, c in (edge_color or {}).items()}
    base = {v: (lab, node_color.get(v, "")) for v, lab in g._nodes.items()}
    init = {v: (base[v], 0) for v in g._nodes}
    best = [None, None]

    def leaf(colors):
        order = sorted(g._nodes, key=colors.__getitem__)
        pos = {v: i for i, v in enumerate(order)}
        key = (
            tuple(base[v] for v in order),
            tuple(sorted((pos[s], pos[t], lab, ecol.get(e, "")) for e, (s, t, lab) in g._edges.items())),
        )
        if best[0] is None or key < best[0]:
            best[0], best[1] = key, order

    def search(colors):
        colors = _refine(g, colors, ecol)
        classes = defaultdict(list)
        for v, c in colors.items():
            classes[c].append(v)
        split = [c for c, vs in classes.items() if len(vs) > 1]
        if not split:
            leaf(colors)
            return
        target = min(split)
        for v in _twin_reps(sorted(classes[target])):
            search({w: (c, 0 if w == v else 1) for w, c in colors.items()})

    edge_bag = Counter((s, t, lab, ecol.get(e, "")) for e, (s, t, lab) in g._edges.items())

    def swaps(v, w):
        sw = {v: w, w: v}
        return Counter((sw.get(s, s), sw.get(t, t), lab, c) for s, t, lab, c in edge_bag.elements()) == edge_bag

    def _twin_reps(vs):
        # swapping twins is an automorphism respecting the current colouring,
        # so their subtrees yield the same leaves
        reps = []
        for v in vs:
            if not any(swaps(r, v) for r in reps):
                reps.append(v)
        return reps

    if g._nodes:
        search(init)
    else:
        leaf({})
    return best[0], best[1]


def _witness(g, og, h, oh, gcol, hcol) -> Morphism:
    nm = dict(zip(og, oh))
    gpos = {v: i for i, v in enumerate(og)}
    hpos = {v: i for i, v in enumerate(oh)}

    def groups(graph, pos, col):
        d = defaultdict(list)
        for e in sorted(graph._edges):
            s, t, lab = graph._edges[e]
            d[(pos[s], pos[t], lab, col.get(e, ""))].append(e)
        return d

    gg, hg = groups(g, gpos, gcol), groups(h, hpos, hcol)
    em = {}
    for k, es in gg.items():
        em.update(zip(es, hg[k]))
    return Morphism(g, h, nm, em)


def find_isomorphism(g: Graph, h: Graph, g_colors=(None, None), h_colors=(None, None)) -> Morphism | None:
    """An isomorphism ``g → h`` respecting optional ``(node, edge)`` colourings."""
    if len(g._nodes) != len(h._nodes) or len(g._edges) != len(h._edges):
        return None
    kg, og = canonical_form(g, *g_colors)
    kh, oh = canonical_form(h, *h_colors)
    if kg != kh:
        return None
    gcol = {e: str(c) for e, c in (g_colors[1] or {}).items()}
    hcol = {e: str(c) for e, c in (h_colors[1] or {}).items()}
    return _witness(g, og, h, oh, gcol, hcol)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


# ---------------------------------------------------------------------------
# Pushouts


def fresh_id(base: str, taken, side: str) -> str:
    """Keep ``base`` if free, else ``side:base``, else ``side:base#k``."""
    if base not in taken:
        return base
    cand = f"{side}:{base}"
    k = 1
    while cand in taken:
        cand = f"{side}:{base}#{k}"
        k += 1
    return cand


def pushout(b: Morphism, d: Morphism, side: str = "r") -> tuple[Graph, Morphism, Morphism]:
    """Glue ``b.cod`` and ``d.cod`` along their common domain.

    Returns ``(H, R → H, D → H)``. Items of ``D`` keep their ids; items of
    ``R`` outside the image of ``b`` get fresh ids via :func:`fresh_id`.
    """
    if b.dom != d.dom:
        raise GraphError("pushout: morphisms do not share a domain")
    R, D = b.cod, d.cod
    binv_n = {w: v for v, w in b.node_map.items()}
    binv_e = {f: e for e, f in b.edge_map.items()}
    nodes = dict(D._nodes)
    edges = dict(D._edges)
    rn = {}
    for v in sorted(R._nodes):
        if v in binv_n:
            rn[v] = d.node_map[binv_n[v]]
        else:
            nid = fresh_id(v, nodes, side)
            nodes[nid] = R._nodes[v]
            rn[v] = nid
    re_ = {}
    for e in sorted(R._edges):
        if e in binv_e:
            re_[e] = d.edge_map[binv_e[e]]
        else:
            s, t, lab = R._edges[e]
            eid = fresh_id(e, edges, side)
            edges[eid] = (rn[s], rn[t], lab)
            re_[e] = eid
    H = Graph(nodes, edges, check=False)
    return (
        H,
        Morphism(R, H, rn, re_, check=False),
        Morphism(D, H, {v: v for v in D._nodes}, {e: e for e in D._edges}, check=False),
    )


def dangling_edges(l: Morphism, m: Morphism) -> list[tuple[str, str]]:
    """``(edge, node)`` pairs violating the dangling condition for deleting
    ``m(L − l(K))`` from ``m.cod``."""
    G = m.cod
    kept_nodes = {m.node_map[w] for w in l.node_map.values()}
    deleted = {x for x in m.node_map.values() if x not in kept_nodes}
    if not deleted:
        return []
    matched = set(m.edge_map.values())
    pairs = []
    for e in sorted(G._edges):
        if e in matched:
            continue
        s, t, _ = G._edges[e]
        for v in {s, t}:
            if v in deleted:
                pairs.append((e, v))
    return pairs


def pushout_complement(l: Morphism, m: Morphism) -> tuple[Graph, Morphism, Morphism]:
    """``(D, K → D, D → G)`` with ``D = G − m(L − l(K))``.

    Raises :class:`DanglingConditionError` when the complement does not exist.
    """
    if l.cod != m.dom:
        raise GraphError("pushout complement: l.cod must equal m.dom")
    pairs = dangling_edges(l, m)
    if pairs:
        raise DanglingConditionError(pairs)
    G = m.cod
    keep_n = {m.node_map[w] for w in l.node_map.values()}
    keep_e = {m.edge_map[f] for f in l.edge_map.values()}
    del_n = [x for x in m.node_map.values() if x not in keep_n]
    del_e = [x for x in m.edge_map.values() if x not in keep_e]
    D = G.without(del_n, del_e)
    k = Morphism(
        l.dom, D,
        {v: m.node_map[w] for v, w in l.node_map.items()},
        {e: m.edge_map[f] for e, f in l.edge_map.items()},
        check=False,
    )
    return D, k, Morphism.inclusion(D, G)
