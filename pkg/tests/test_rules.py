import random

import pytest

import gen
from grapair import railroad as rr
from grapair.conditions import Truth, exists, nexists
from grapair.graph import EMPTY, Graph, GraphError, Morphism, is_isomorphic
from grapair.rules import (
    DELETE,
    PlainRule,
    Rule,
    apply_all,
    apply_plain,
    derived_rule,
    inverse,
    select,
    track_of_step,
    unselect,
    with_context,
)

B = Graph.build
ONE = B(["1"])
EDGE12 = B(["1", "2"], [("e", "1", "2")])
STAR = B(["1", "2", "3"], [("e", "1", "2"), ("f", "1", "3")])


def add_edge(x=True, y=True):
    p = PlainRule(ONE, ONE, EDGE12, "AddEdge")
    return Rule(p, Morphism.identity(ONE) if x else None,
                Morphism.inclusion(ONE, EDGE12) if y else None)


class TestPlainRule:
    def test_k_must_be_subgraph(self):
        with pytest.raises(GraphError):
            PlainRule(ONE, B(["9"]), ONE)

    def test_created_deleted(self):
        p = rr.move_rule()
        assert p.deleted() == (set(), {"z"}) and p.created() == (set(), {"z2"})

    def test_ac_over_l(self):
        with pytest.raises(GraphError):
            Rule(PlainRule(ONE, ONE, ONE), ac=Truth(EDGE12))


class TestApply:
    def test_interface_star(self):
        G = B(["1", "3"], [("f", "1", "3")])
        g = Morphism(ONE, G, {"1": "1"})
        (t,) = apply_all(add_edge(), g)
        assert is_isomorphic(t.result, STAR)
        assert t.i.is_total() and t.h.node_map == {"1": "1"}
        tr = track_of_step(t)
        assert tr.is_total()

    def test_identity_rule(self):
        G = gen.graph(random.Random(1), 4)
        r = Rule(PlainRule.identity(EMPTY))
        (t,) = apply_all(r, Morphism.empty(G))
        assert t.result == G and t.i.is_total()

    def test_dangling_modes(self):
        L = B(["n"])
        r = Rule(PlainRule(L, EMPTY, EMPTY, "del"))
        G = EDGE12
        standard = [t for t in apply_all(r, Morphism.empty(G))]
        # only node 2's deletion is blocked too: both nodes touch the edge
        assert standard == []
        delete = apply_all(r.replace(dangling=DELETE), Morphism.empty(G))
        assert len(delete) == 2
        assert all(t.deleted_dangling_edges == ("e",) for t in delete)
        assert all(len(t.result.nodes) == 1 and not t.result.edges for t in delete)

    def test_dangling_deletes_exactly_the_dangling_edges(self):
        L = B(["n"])
        r = Rule(PlainRule(L, EMPTY, EMPTY, "del"), dangling=DELETE)
        G = B(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "3")])
        for t in apply_all(r, Morphism.empty(G)):
            v = t.match.node_map["n"]
            assert set(t.deleted_dangling_edges) == set(G.incident(v))
            assert set(t.result.edges) == set(G.edges) - set(G.incident(v))

    def test_ac_filters(self):
        sink_only = select(Morphism.empty(ONE), nexists(Morphism.inclusion(ONE, EDGE12)))
        path = B(["p", "q", "r"], [("a", "p", "q"), ("b", "q", "r")])
        ts = apply_all(sink_only, Morphism.empty(path))
        assert [t.h.node_map["1"] for t in ts] == ["r"]

    def test_standard_never_deletes_outside_match(self):
        rng = random.Random(7)
        for _ in range(100):
            K = gen.graph(rng, 1, prefix="k")
            L = gen.extend(rng, K, 2, tag="l")
            if L is None:
                continue
            r = Rule(PlainRule(L, K, K))
            G = gen.extend(rng, L, 4, tag="g") or L
            for t in apply_all(r, Morphism.empty(G)):
                removed = (set(G.nodes) - set(t.D.nodes)) | (set(G.edges) - set(t.D.edges))
                assert removed == set(t.match.node_map[v] for v in L.nodes if v not in K.nodes) | \
                    set(t.match.edge_map[e] for e in L.edges if e not in K.edges)

    def test_inverse_step_recovers_host(self):
        rng = random.Random(9)
        n = 0
        for _ in range(100):
            K = gen.graph(rng, 2, prefix="k")
            R = gen.extend(rng, K, 3, tag="r")
            if R is None:
                continue
            p = PlainRule(K, K, R, "grow")
            G = gen.graph(rng, 3)
            for t in apply_plain(p, G):
                back = apply_all(Rule(inverse(p)).replace(), Morphism.empty(t.result))
                back = [b for b in back if b.match.node_map == t.comatch.node_map
                        and b.match.edge_map == t.comatch.edge_map]
                assert len(back) == 1 and is_isomorphic(back[0].result, G)
                n += 1
        assert n > 20

    def test_commuting_squares(self):
        (t,) = apply_all(add_edge(), Morphism(ONE, EDGE12, {"1": "2"}))
        assert t.g == Morphism(ONE, EDGE12, {"1": "2"})
        assert t.h.node_map == {"1": t.comatch.node_map["1"]}


class TestContext:
    def test_identity_context(self):
        p = rr.build_rule()
        assert with_context(p, Morphism.identity(p.K)) == p

    def test_build_with_train(self):
        p = rr.build_rule()
        K2 = Graph(p.K.nodes.items(), [("z", "1", "2", rr.TRAIN)])
        q = with_context(p, Morphism.inclusion(p.K, K2))
        assert "z" in q.L.edges and "z" in q.R.edges
        assert len(q.R.edges) == 3 and len(q.L.edges) == 1

    def test_spectator_node(self):
        p = PlainRule(EMPTY, EMPTY, ONE, "mk")
        q = with_context(p, Morphism.inclusion(EMPTY, B(["s"])))
        assert set(q.L.nodes) == {"s"} and len(q.R.nodes) == 2


class TestInverseDerived:
    def test_inverse_involution(self):
        p = rr.move_rule()
        assert inverse(inverse(p)).L == p.L and inverse(inverse(p)).R == p.R

    def test_derived_identity(self):
        G = EDGE12
        (t,) = apply_plain(PlainRule.identity(EMPTY), G)
        d = derived_rule(t)
        assert d.L == d.K == d.R == G

    def test_derived_interface_step(self):
        G = B(["1", "3"], [("f", "1", "3")])
        (t,) = apply_all(add_edge(), Morphism(ONE, G, {"1": "1"}))
        d = derived_rule(t)
        assert d.L == G and d.K == G and is_isomorphic(d.R, STAR)


class TestSelect:
    def test_select_identity_is_skip(self):
        G = EDGE12
        r = select(Morphism.identity(EDGE12))
        ts = apply_all(r, Morphism.identity(G))
        assert len(ts) == 1 and ts[0].result == G and ts[0].i.is_total()

    def test_select_unselect(self):
        x = Morphism.empty(ONE)
        s, u = select(x), unselect(x)
        (t1,) = apply_all(s, Morphism.empty(ONE))
        (t2,) = apply_all(u, t1.h)
        assert t2.result == ONE and t2.h.dom == EMPTY

    def test_select_with_exists(self):
        r = select(Morphism.empty(ONE), exists(ONE, cod=EDGE12))
        path = B(["p", "q", "r"], [("a", "p", "q"), ("b", "q", "r")])
        assert sorted(t.h.node_map["1"] for t in apply_all(r, Morphism.empty(path))) == ["p", "q"]
