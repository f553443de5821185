import random

import pytest

import gen
import oracles
from grapair.conditions import (
    And,
    ConditionError,
    exists,
    forall,
    graph_satisfies,
    nexists,
    satisfies,
    true,
)
from grapair.graph import EMPTY, Graph, Morphism, enumerate_monos
from grapair.programs import Budget, Iterate, Seq, Skip, Try, run_all, run_graph
from grapair.repair import (
    V1,
    V2,
    NotBasicError,
    NotProperError,
    PreservationReport,
    dang,
    delta,
    intermediate_graphs,
    preservation_report,
    repair_program,
    repairing_set,
    repairing_set_v1,
    repairing_set_v2,
    repairing_sets_of,
    union_repairing,
)

B = Graph.build
ONE = B(["1"])
TWO = B(["1", "2"])
EDGE12 = B(["1", "2"], [("e", "1", "2")])
THREE = B(["1", "2", "3"], [("e", "1", "2")])
CYCLE = B(["1", "2"], [("e", "1", "2"), ("f", "2", "1")])

has_out = exists(Morphism.inclusion(ONE, EDGE12))
no_cycle = nexists(Morphism.inclusion(ONE, CYCLE))
no_out = nexists(Morphism.inclusion(ONE, EDGE12))  # ∀(•1, ∄…) is not proper


def hosts_with(ctx: Graph, n: int, seed: int = 0):
    rng = random.Random(seed)
    for k in range(n):
        H = gen.extend(rng, ctx, 4, tag="h") if rng.random() < 0.7 else None
        H = H or gen.graph(rng, 4, prefix="g")
        yield H


def same_on(ctx, c1, c2, n=60):
    """Semantic agreement of two conditions over ``ctx`` on sampled hosts."""
    for H in hosts_with(ctx, n):
        for g in enumerate_monos(ctx, H):
            assert satisfies(g, c1) == satisfies(g, c2), (H, g)


class TestV1:
    def test_exists_edge(self):
        rs = repairing_set_v1(has_out)
        (r,) = rs.rules
        assert (r.plain.L, r.plain.K, r.plain.R) == (ONE, ONE, EDGE12)
        assert r.x == Morphism.identity(ONE) and r.y == Morphism.inclusion(ONE, EDGE12)

    def test_nexists_cycle(self):
        (r,) = repairing_set_v1(no_cycle).rules
        assert (r.plain.L, r.plain.K, r.plain.R) == (CYCLE, ONE, ONE)

    def test_identity_rejected(self):
        # A ⊂ C must be strict; the condition itself refuses a = id
        with pytest.raises(ConditionError):
            repairing_set_v1(exists(Morphism.identity(ONE)))

    def test_not_basic(self):
        nested = exists(Morphism.inclusion(ONE, EDGE12), nexists(Morphism.inclusion(EDGE12, THREE)))
        with pytest.raises(NotBasicError):
            repairing_set_v1(nested)
        with pytest.raises(NotBasicError):
            repairing_set_v2(true(ONE))


class TestV2:
    def test_exists_edge_two_rules(self):
        rs = repairing_set_v2(has_out)
        r1, r2 = rs.rules
        assert r1.plain.L == ONE and r2.plain.L == TWO
        assert all(r.plain.R == EDGE12 for r in rs.rules)
        # no second node at all
        same_on(ONE, r1.ac, nexists(Morphism.inclusion(ONE, TWO)))
        # neither the edge 1→2 nor any edge leaving 1
        out13 = B(["1", "2", "x"], [("o", "1", "x")])
        same_on(TWO, r2.ac, And(TWO, (nexists(Morphism.inclusion(TWO, EDGE12)),
                                       nexists(Morphism.inclusion(TWO, out13)))))

    def test_nexists_cycle_single_edges(self):
        rs = repairing_set_v2(no_cycle)
        assert len(rs.rules) == 2
        for r in rs.rules:
            assert r.plain.L == CYCLE and r.plain.K.nodes == CYCLE.nodes
            assert len(r.plain.K.edges) == 1 and r.plain.R == r.plain.K

    def test_single_edge_difference(self):
        for target in (exists(Morphism.inclusion(TWO, EDGE12)), nexists(Morphism.inclusion(TWO, EDGE12))):
            assert len(repairing_set_v2(target).rules) == 1

    def test_node_deletion_when_no_edges(self):
        (r,) = repairing_set_v2(nexists(Morphism.inclusion(ONE, TWO))).rules
        assert r.plain.K == ONE

    def test_intermediate_graphs(self):
        assert intermediate_graphs(ONE, EDGE12) == [ONE, TWO]
        assert intermediate_graphs(ONE, EDGE12, proper=False)[-1] == EDGE12
        assert len(intermediate_graphs(EMPTY, CYCLE)) == 6

    def test_no_duplicate_rules(self):
        rng = random.Random(3)
        for _ in range(40):
            A = gen.graph(rng, 2)
            a = gen.inclusion(rng, A, 3)
            if a is None:
                continue
            for c in (exists(a), nexists(a)):
                rules = repairing_set_v2(c).rules
                assert len({(r.plain.L, r.plain.K, r.plain.R) for r in rules}) == len(rules)


def _basic_targets(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        A = gen.graph(rng, 2)
        a = gen.inclusion(rng, A, 3)
        if a is not None:
            out.append(exists(a) if rng.random() < 0.5 else nexists(a))
    return out


@pytest.mark.parametrize("variant", [V1, V2])
def test_repairing_set_contract(variant):
    budget = Budget(max_steps=60)
    for k, target in enumerate(_basic_targets(40, 11)):
        p = repairing_set(target, variant).program()
        A = target.context
        for H in hosts_with(A, 4, seed=k):
            for g in enumerate_monos(A, H):
                run = run_all(p, g, budget)
                assert not run.exhausted
                for o in run.outcomes:
                    assert oracles.satisfies(o.comatch().node_map, o.comatch().edge_map, target, o.result)


class TestUnion:
    def test_same_target(self):
        u = union_repairing(repairing_set_v2(has_out), repairing_set_v1(has_out))
        assert len(u.rules) == 3
        for H in hosts_with(ONE, 20):
            for g in enumerate_monos(ONE, H):
                for o in run_all(u.program(), g).outcomes:
                    assert satisfies(o.comatch(), has_out)

    def test_prefix_identity_is_plain_union(self):
        r1, r2 = repairing_set_v1(has_out), repairing_set_v2(has_out)
        assert union_repairing(r1, r2, Morphism.identity(ONE)).rules == union_repairing(r1, r2).rules

    def test_prefix_reinterfaces(self):
        a = Morphism.inclusion(EMPTY, EDGE12)
        c = Morphism.inclusion(ONE, EDGE12)
        b = Morphism.inclusion(EMPTY, ONE)
        u = union_repairing(repairing_set_v1(exists(a)), repairing_set_v1(exists(c)), b)
        assert len(u.rules) == 2 and all(r.X == EMPTY for r in u.rules)
        for o in run_graph(u.program(), B(["p"])).outcomes:
            assert graph_satisfies(o.result, exists(a))

    def test_mismatch(self):
        with pytest.raises(ValueError):
            union_repairing(repairing_set_v1(has_out), repairing_set_v1(no_cycle))
        with pytest.raises(ValueError):
            union_repairing(repairing_set_v1(has_out),
                            repairing_set_v1(exists(Morphism.inclusion(ONE, TWO))))


class TestProgram:
    def test_true_is_skip(self):
        assert repair_program(true()) == Skip(EMPTY)

    def test_not_proper(self):
        with pytest.raises(NotProperError):
            repair_program(forall(Morphism.inclusion(EMPTY, ONE), no_out))

    def test_exists_then_nexists_shape(self):
        d = exists(Morphism.inclusion(EMPTY, ONE), no_cycle)
        p = repair_program(d)
        assert isinstance(p, Seq) and isinstance(p.first, Try)
        rest = p.second
        assert rest.first.rule.name == "select"
        assert isinstance(rest.second.first, Iterate)
        assert rest.second.second.rule.name == "unselect"
        assert [s.kind for s in repairing_sets_of(p)] == ["exists", "nexists"]

    def test_forall_shape(self):
        d = forall(Morphism.inclusion(EMPTY, ONE), has_out)
        p = repair_program(d)
        assert isinstance(p, Iterate)
        sel = p.body.first.rule
        assert sel.name == "select" and sel.X == EMPTY and sel.Y == ONE

    def test_forall_on_path(self):
        d = forall(Morphism.inclusion(EMPTY, ONE), has_out)
        path = B(["1", "2", "3"], [("e1", "1", "2"), ("e2", "2", "3")])
        run = run_graph(repair_program(d, V2), path, Budget(max_steps=50))
        assert run.outcomes and not run.exhausted
        for o in run.outcomes:
            H = o.result
            assert graph_satisfies(H, d)
            assert len(H.edges) == 3 and H.nodes == path.nodes
            (new,) = set(H.edges) - set(path.edges)
            assert H.src(new) == "3"
        # v1 always adds a fresh node, which is a fresh sink
        assert run_graph(repair_program(d, V1), path, Budget(max_steps=50)).exhausted

    def test_fact3_witness(self):
        rng = random.Random(5)
        for _ in range(60):
            d = gen.proper(rng)
            run = run_graph(repair_program(d, V2), EMPTY)
            assert run.outcomes and not run.exhausted
            assert all(oracles.graph_satisfies(o.result, d) for o in run.outcomes)

    def test_soundness_small(self):
        rng = random.Random(8)
        for _ in range(30):
            d = gen.proper(rng)
            for variant in (V1, V2):
                p = repair_program(d, variant)
                for k in range(3):
                    G = gen.graph(rng, 4)
                    run = run_graph(p, G, Budget(max_steps=40))
                    for o in run.outcomes:
                        assert graph_satisfies(o.result, d)


class TestDelta:
    def test_true_and_exists(self):
        G = EDGE12
        assert delta(Morphism.empty(G), true()) == 0
        assert delta(Morphism.empty(G), exists(Morphism.inclusion(EMPTY, CYCLE))) == 0

    def test_edge_pattern(self):
        d = nexists(Morphism.inclusion(EMPTY, EDGE12))
        assert delta(Morphism.empty(EDGE12), d) == 1

    def test_node_with_three_edges(self):
        G = Graph([("c", "b"), ("p", "a"), ("q", "a"), ("r", "a")],
                  [("e1", "c", "p", "a"), ("e2", "q", "c", "a"), ("e3", "c", "r", "a")])
        d = nexists(Morphism.inclusion(EMPTY, Graph([("v", "b")])))
        assert delta(Morphism.empty(G), d) == 4
        (gp,) = enumerate_monos(Graph([("v", "b")]), G)
        assert dang(gp, Morphism.inclusion(EMPTY, Graph([("v", "b")]))) == 3

    def test_loop_counted_once(self):
        G = B(["1"], [("l", "1", "1")])
        d = nexists(Morphism.inclusion(EMPTY, ONE))
        assert delta(Morphism.empty(G), d) == 2

    def test_not_proper(self):
        with pytest.raises(NotProperError):
            delta(Morphism.empty(EMPTY), forall(Morphism.inclusion(EMPTY, ONE), no_out))


class TestPreservation:
    def test_skip(self):
        (o,) = run_graph(Skip(EMPTY), CYCLE).outcomes
        rep = preservation_report(o, true())
        assert rep == PreservationReport(4, 4, 0) and rep.bound_holds

    def test_v2_tight(self):
        g = Morphism(ONE, CYCLE, {"1": "1"})
        outs = run_all(repair_program(no_cycle, V2), g).outcomes
        assert len(outs) == 2
        for o in outs:
            rep = preservation_report(o, no_cycle)
            assert (rep.preserved, rep.size_g, rep.delta) == (3, 4, 1)
            assert rep.bound_holds and rep.slack == 0 and not rep.vacuous

    def test_v1_can_fail(self):
        g = Morphism(ONE, CYCLE, {"1": "1"})
        (o,) = run_all(repair_program(no_cycle, V1), g).outcomes
        rep = preservation_report(o, no_cycle)
        assert rep.preserved == 1 and not rep.bound_holds

    def test_as_dict(self):
        assert PreservationReport(3, 4, 1).as_dict() == {
            "preserved": 3, "size": 4, "delta": 1, "bound_holds": True, "vacuous_delta": False}

    def test_vacuous_exists(self):
        # a b-node with a loop; d asks for an a-node with a loop and no
        # other b-node. Δ is 0 at the start, yet two items must go.
        one_loop = B(["u"], [("l", "u", "u")])
        extra = Graph([("u", "a"), ("v", "b")], [("l", "u", "u", "a")])
        d = exists(Morphism.inclusion(EMPTY, one_loop), nexists(Morphism.inclusion(one_loop, extra)))
        G = Graph([("1", "b")], [("x", "1", "1", "a")])
        outs = run_graph(repair_program(d, V2), G).outcomes
        assert outs
        for o in outs:
            rep = preservation_report(o, d)
            assert graph_satisfies(o.result, d)
            assert rep.delta == 0 and rep.preserved == 0 and rep.vacuous and not rep.bound_holds
