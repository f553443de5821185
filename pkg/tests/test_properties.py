"""Randomised properties; hypothesis draws the seeds, the shared
generators build the objects."""

import random

from hypothesis import given, settings, strategies as st

import gen
import oracles
from grapair.conditions import classify, is_linear, satisfies, shift, simplify, to_anf
from grapair.graph import (
    Graph,
    Morphism,
    canonical_form,
    enumerate_monos,
    find_isomorphism,
    is_isomorphic,
)
from grapair.programs import Budget, run_graph
from grapair.repair import V2, preservation_report, repair_program
from grapair.rules import PlainRule, Rule, apply_all, derived_rule, inverse

seeds = st.integers(0, 2**32 - 1)
FAST = settings(max_examples=60, deadline=None)


def rename(g: Graph, rng) -> Graph:
    ids = list(g.nodes)
    perm = dict(zip(ids, rng.sample([f"r{k}" for k in range(len(ids))], len(ids))))
    return Graph([(perm[v], lab) for v, lab in g.nodes.items()],
                 [("x" + e, perm[s], perm[t], lab) for e, (s, t, lab) in g.edges.items()])


@FAST
@given(seeds)
def test_canonical_form_invariant(seed):
    rng = random.Random(seed)
    g = gen.graph(rng, 5)
    h = rename(g, rng)
    assert canonical_form(g)[0] == canonical_form(h)[0]
    iso = find_isomorphism(g, h)
    assert iso is not None and iso.is_iso()


@FAST
@given(seeds)
def test_canonical_form_separates(seed):
    rng = random.Random(seed)
    g, h = gen.graph(rng, 4), gen.graph(rng, 4)
    assert (canonical_form(g)[0] == canonical_form(h)[0]) == oracles.is_iso(g, h)


@FAST
@given(seeds)
def test_monos_match_oracle(seed):
    rng = random.Random(seed)
    a, g = gen.graph(rng, 3, prefix="p"), gen.graph(rng, 4)
    mine = sorted((tuple(sorted(m.node_map.items())), tuple(sorted(m.edge_map.items())))
                  for m in enumerate_monos(a, g))
    assert mine == oracles.mono_keys(a, g)


@FAST
@given(seeds)
def test_step_is_undone_by_inverse(seed):
    rng = random.Random(seed)
    L = gen.graph(rng, 2, prefix="l")
    K = L.subgraph([v for v in L.nodes if rng.random() < 0.7], [])
    K = L.subgraph(K.nodes, [e for e in L.edges
                             if L.src(e) in K.nodes and L.tgt(e) in K.nodes and rng.random() < 0.5])
    R = gen.extend(rng, K, 3, tag="n") or K
    p = PlainRule(L, K, R)
    G = gen.graph(rng, 4)
    for s in apply_all(Rule(p), Morphism.empty(G)):
        dn, de = p.deleted()
        cn, ce = p.created()
        assert s.result.size == G.size - len(dn) - len(de) + len(cn) + len(ce)
        back = [t for t in apply_all(Rule(inverse(p)), Morphism.empty(s.result)) if t.match == s.comatch]
        assert len(back) == 1 and is_isomorphic(back[0].result, G)
        d = derived_rule(s)
        assert d.L == G and d.R == s.result


@FAST
@given(seeds)
def test_shift_agrees_with_oracle(seed):
    rng = random.Random(seed)
    A = gen.graph(rng, 2, prefix="a")
    b = gen.inclusion(rng, A, 3, tag="r")
    if b is None:
        return
    d = gen.condition(rng, A, 2, max_nodes=3, tag="q")
    s = shift(b, d)
    H = gen.extend(rng, b.cod, 4, tag="h") or b.cod
    for n in enumerate_monos(b.cod, H):
        nb = {v: n.node_map[b.node_map[v]] for v in A.nodes}
        eb = {e: n.edge_map[b.edge_map[e]] for e in A.edges}
        assert oracles.satisfies(nb, eb, d, H) == satisfies(n, s)


@FAST
@given(seeds)
def test_simplify_and_anf_preserve_meaning(seed):
    rng = random.Random(seed)
    ctx = gen.graph(rng, 1, prefix="c")
    c = gen.condition(rng, ctx, 3, max_nodes=3)
    forms = [simplify(c)]
    if is_linear(c):
        a = to_anf(c)
        assert classify(a).anf
        forms.append(a)
    for _ in range(4):
        H = gen.extend(rng, ctx, 4, tag="h") or ctx
        for g in enumerate_monos(ctx, H):
            want = satisfies(g, c)
            assert all(satisfies(g, f) == want for f in forms)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_v2_repair_sound_and_preserving(seed):
    rng = random.Random(seed)
    d = gen.proper(rng)
    G = gen.graph(rng, 4)
    run = run_graph(repair_program(d, V2), G, Budget(max_steps=200))
    assert not run.exhausted and run.outcomes
    for o in run.outcomes:
        assert oracles.graph_satisfies(o.result, d)
        rep = preservation_report(o, d)
        assert rep.bound_holds or rep.vacuous
