"""Repair programs built only from a user-supplied rule set.

A repairing rule is replaced by a transformation through the rule set
whose derived span agrees with it (same preserved part, isomorphic
result). The transformation is compiled into a program of selections,
context-extended rules and unselections, and substituted into the
synthesized repair program.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conditions import Condition, shift
from .graph import (
    EMPTY,
    Graph,
    Morphism,
    PartialMorphism,
    canonical_form,
    compose,
    compose_partial,
    enumerate_monos,
    find_isomorphism,
)
from .programs import (
    Budget,
    Call,
    Choice,
    Iterate,
    Program,
    Skip,
    Try,
    run_all,
    seq,
)
from .repair import V2, RepairingSet, repair_program, repairing_sets_of
from .rules import (
    DELETE,
    STANDARD,
    PlainRule,
    Rule,
    apply_all,
    derived_rule,
    select,
    track_of_step,
    unselect,
)


class IncompatibleRuleSet(Exception):
    def __init__(self, evidence: "CompatibilityEvidence"):
        self.evidence = evidence
        super().__init__(evidence.summary())


@dataclass(frozen=True)
class RuleSet:
    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise ValueError("rule names must be unique")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def by_name(self, name: str) -> PlainRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass(frozen=True, eq=False)
class Transformation:
    """A chain of direct transformations starting at ``start``."""

    start: Graph
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        G = self.start
        for s in self.steps:
            if s.host != G:
                raise ValueError("steps are not chained")
            G = s.result

    @property
    def end(self) -> Graph:
        return self.steps[-1].result if self.steps else self.start

    def track(self) -> PartialMorphism:
        G = self.start
        tr = PartialMorphism(G, G, {v: v for v in G.nodes}, {e: e for e in G.edges}, check=False)
        for s in self.steps:
            tr = compose_partial(tr, track_of_step(s))
        return tr

    def rule_names(self) -> list[str]:
        return [s.rule.name for s in self.steps]


# ---------------------------------------------------------------------------
# Transformations to programs


def program_of_transformation(t: Transformation) -> Program:
    """One ``⟨select(g′∘x, Shift(g′, ac)); G ⇒ H; unselect(h′∘y)⟩`` per
    step, in sequence; ``Skip`` for the empty transformation."""
    if not t.steps:
        return Skip(EMPTY)
    parts = []
    for k, s in enumerate(t.steps):
        rho = s.rule
        G, H = s.host, s.result
        sel = select(compose(rho.x, s.match), shift(s.match, rho.ac), name=f"select{k + 1}")
        bar = Rule(derived_rule(s), Morphism.identity(G), Morphism.identity(H),
                   name=f"{rho.name}̄{k + 1}")
        uns = unselect(compose(rho.y, s.comatch), name=f"unselect{k + 1}")
        parts.append(seq(Call(sel), Call(bar), Call(uns)))
    return seq(*parts)


# ---------------------------------------------------------------------------
# Certificate search


@dataclass(frozen=True, eq=False)
class Certificate:
    rule: Rule
    transformation: Transformation
    psi: Morphism  # end graph of the transformation ≅ R, fixing K


@dataclass(frozen=True)
class NotFound:
    rule: Rule
    depth: int
    label_gap: tuple = ()

    @property
    def proven(self) -> bool:
        return bool(self.label_gap)


def _kind_labels(g: Graph, nodes, edges):
    return ({("node", g.nodes[v]) for v in nodes} | {("edge", g.edges[e][2]) for e in edges})


def label_gap(r: Rule, rs: RuleSet) -> tuple:
    """Labels ``r`` creates (or deletes) that no rule of ``rs`` creates (or
    deletes). Non-empty means no transformation via ``rs`` can match ``r``."""
    p = r.plain
    cn, ce = p.created()
    dn, de = p.deleted()
    need_c = _kind_labels(p.R, cn, ce)
    need_d = _kind_labels(p.L, dn, de)
    have_c, have_d = set(), set()
    for q in rs:
        qn, qe = q.created()
        have_c |= _kind_labels(q.R, qn, qe)
        qn, qe = q.deleted()
        have_d |= _kind_labels(q.L, qn, qe)
    gap = sorted(("create", *x) for x in need_c - have_c)
    gap += sorted(("delete", *x) for x in need_d - have_d)
    return tuple(gap)


def _tracked_colours(track: PartialMorphism):
    ncol = {w: "k" + v for v, w in track.node_map.items()}
    ecol = {f: "k" + e for e, f in track.edge_map.items()}
    return ncol, ecol


def _certify(p: PlainRule, G: Graph, track: PartialMorphism) -> Morphism | None:
    K, R = p.K, p.R
    if set(track.node_map) != set(K.nodes) or set(track.edge_map) != set(K.edges):
        return None
    hn, he = _tracked_colours(track)
    rn = {v: "k" + v for v in K.nodes}
    re_ = {e: "k" + e for e in K.edges}
    return find_isomorphism(G, R, (hn, he), (rn, re_))


def search_equivalent_transformation(r: Rule, rs: RuleSet, depth: int = 3,
                                     max_states: int = 5000) -> Certificate | NotFound:
    """Breadth-first search for ``L ⇒* H′`` via ``rs`` whose composed track
    is defined exactly on ``K`` and whose end graph is isomorphic to ``R``
    with ``K`` fixed."""
    gap = label_gap(r, rs)
    if gap:
        return NotFound(r, depth, gap)
    p = r.plain
    L = p.L
    start = Transformation(L)
    psi = _certify(p, L, start.track())
    if psi is not None:
        return Certificate(r, start, psi)
    plain = [Rule(q) for q in rs]
    frontier = [start]
    seen = set()
    for _ in range(depth):
        nxt = []
        for t in frontier:
            G = t.end
            tr = t.track()
            for q in plain:
                for s in apply_all(q, Morphism.empty(G)):
                    t2 = Transformation(L, t.steps + (s,))
                    tr2 = compose_partial(tr, track_of_step(s))
                    psi = _certify(p, s.result, tr2)
                    if psi is not None:
                        return Certificate(r, t2, psi)
                    ncol, ecol = _tracked_colours(tr2)
                    key = canonical_form(s.result, ncol, ecol)[0]
                    if key in seen:
                        continue
                    seen.add(key)
                    nxt.append(t2)
                    if len(seen) > max_states:
                        return NotFound(r, depth)
        frontier = nxt
    return NotFound(r, depth)


def repl(c: Certificate) -> Program:
    """``⟨select(x, ac); steps; unselect(ψ⁻¹ ∘ y)⟩`` with every step the
    context-extended rule of the certificate, in the rule's dangling mode."""
    r = c.rule
    parts = [Call(select(r.x, r.ac, name=f"select[{r.name}]"))]
    for k, s in enumerate(c.transformation.steps):
        G, H = s.host, s.result
        parts.append(Call(Rule(derived_rule(s), Morphism.identity(G), Morphism.identity(H),
                               dangling=r.dangling, name=f"{s.rule.name}̄[{r.name}.{k + 1}]")))
    y = compose(r.y, c.psi.inverse())
    parts.append(Call(unselect(y, name=f"unselect[{r.name}]")))
    return seq(*parts)


# ---------------------------------------------------------------------------
# Compatibility


@dataclass
class SetEvidence:
    repairing_set: RepairingSet
    entries: list  # Certificate | NotFound per rule

    @property
    def certified(self) -> list[Certificate]:
        return [e for e in self.entries if isinstance(e, Certificate)]

    @property
    def compatible(self) -> bool:
        if self.repairing_set.kind == "nexists":
            # every rule of a deletion set starts from the same pattern C,
            # so any non-empty subset still removes all occurrences
            return bool(self.certified)
        return all(isinstance(e, Certificate) for e in self.entries)


@dataclass
class CompatibilityEvidence:
    program: Program
    sets: list = field(default_factory=list)

    @property
    def compatible(self) -> bool:
        return all(s.compatible for s in self.sets)

    def rows(self) -> list[dict]:
        out = []
        for s in self.sets:
            for e in s.entries:
                row = {"set": s.repairing_set.name or "d", "kind": s.repairing_set.kind,
                       "rule": e.rule.name}
                if isinstance(e, Certificate):
                    row["status"] = "certified"
                    row["via"] = e.transformation.rule_names()
                else:
                    row["status"] = "label-gap" if e.proven else "not-found"
                    row["depth"] = e.depth
                    if e.label_gap:
                        row["label_gap"] = [list(g) for g in e.label_gap]
                out.append(row)
        return out

    def summary(self) -> str:
        bad = [r for r in self.rows() if r["status"] != "certified"]
        verdict = "compatible" if self.compatible else "incompatible"
        return f"{verdict}; {len(bad)} uncertified repairing rule(s)"


def check_compatibility(rs: RuleSet, d: Condition, variant: str = V2,
                        depth: int = 3) -> CompatibilityEvidence:
    prog = repair_program(d, variant)
    ev = CompatibilityEvidence(prog)
    for s in repairing_sets_of(prog):
        entries = [search_equivalent_transformation(r, rs, depth) for r in s.rules]
        ev.sets.append(SetEvidence(s, entries))
    return ev


def rule_based_repair(rs: RuleSet, d: Condition, variant: str = V2, depth: int = 3) -> Program:
    """``P_d[repl]``; raises :class:`IncompatibleRuleSet` with the evidence
    when some repairing set cannot be expressed through ``rs``."""
    ev = check_compatibility(rs, d, variant, depth)
    if not ev.compatible:
        raise IncompatibleRuleSet(ev)
    by_key = {}
    for s in ev.sets:
        by_key[(s.repairing_set.kind, s.repairing_set.a, s.repairing_set.name)] = s.certified

    def realize(rset: RepairingSet) -> Program:
        cs = by_key[(rset.kind, rset.a, rset.name)]
        opts = tuple(repl(c) for c in cs)
        if rset.kind == "exists":
            return Try(Choice(opts, tag=rset))
        return Iterate(Choice(opts, tag=rset))

    return repair_program(d, variant, realize)


def is_rule_based(p: Program, rs: RuleSet) -> bool:
    """Every non-selection rule of ``p`` is the context extension of a rule
    of ``rs``: its span is a pushout of that rule along some ``K ↪ K′``."""
    from .programs import rules_of

    for r in rules_of(p):
        if r.plain.is_identity():
            continue
        if not any(_is_context_extension(q, r.plain) for q in rs):
            return False
    return True


def _is_context_extension(q: PlainRule, p: PlainRule) -> bool:
    # p = q with context iff some match of q's L into p's L, with
    # q's deleted part exactly p's deleted part, reproduces p up to iso
    for m in enumerate_monos(q.L, p.L):
        rule = Rule(q)
        for s in apply_all(rule, Morphism.empty(p.L)):
            if s.match != m:
                continue
            if set(s.D.nodes) == set(p.K.nodes) and set(s.D.edges) == set(p.K.edges):
                pin = ({v: v for v in p.K.nodes}, {e: e for e in p.K.edges})
                if find_isomorphism(s.result, p.R, pin, pin) is not None:
                    return True
    return False


# ---------------------------------------------------------------------------
# Extension surrogate


def _outcome_keys(prog: Program, g: Morphism, budget: Budget):
    run = run_all(prog, g, budget)
    keys = set()
    for o in run.outcomes:
        ncol = {v: "f" + y for y, v in o.h.node_map.items()}
        ecol = {e: "f" + y for y, e in o.h.edge_map.items()}
        keys.add(canonical_form(o.result, ncol, ecol)[0])
    return keys, run.exhausted


def extension_check(c: Certificate, hosts, budget: Budget | None = None) -> list:
    """Compare ``r`` with its compiled replacement on every embedding of
    the rule's left interface into each host. Returns mismatching
    ``(host, g)`` pairs (empty means the surrogate holds)."""
    budget = budget or Budget(max_steps=50, max_outcomes=2000)
    r = c.rule
    direct = Call(r)
    compiled = repl(c)
    bad = []
    for H in hosts:
        for g in enumerate_monos(r.X, H):
            k1, _ = _outcome_keys(direct, g, budget)
            k2, _ = _outcome_keys(compiled, g, budget)
            if k1 != k2:
                bad.append((H, g))
    return bad


__all__ = [
    "Certificate",
    "CompatibilityEvidence",
    "IncompatibleRuleSet",
    "NotFound",
    "RuleSet",
    "Transformation",
    "check_compatibility",
    "extension_check",
    "is_rule_based",
    "label_gap",
    "program_of_transformation",
    "repl",
    "rule_based_repair",
    "search_equivalent_transformation",
    "DELETE",
    "STANDARD",
]
