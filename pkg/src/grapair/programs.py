"""Graph programs and their nondeterministic triple semantics.

A program maps a start morphism ``g: X ↪ G`` to a set of triples
``⟨g, h, i⟩``. :func:`run_all` enumerates that set (up to isomorphism)
under a :class:`Budget`; :func:`run_one` draws a single outcome with a
seeded random walk through the same semantics.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from typing import Iterator

from .graph import (
    Graph,
    GraphError,
    Morphism,
    PartialMorphism,
    as_total,
    canonical_form,
    compose,
    compose_partial,
)
from .rules import DirectTransformation, Rule, apply_all, apply_at, track_of_step


class ProgramError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Syntax


@dataclass(frozen=True)
class Skip:
    X: Graph


@dataclass(frozen=True)
class Call:
    rule: Rule


@dataclass(frozen=True)
class Choice:
    options: tuple
    # provenance marker, e.g. the repairing set a choice was built from
    tag: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))
        if not self.options:
            raise ProgramError("empty choice")
        ls = {left(p) for p in self.options}
        rs = {right(p) for p in self.options}
        if len(ls) != 1 or len(rs) != 1:
            raise ProgramError("choice branches have different interfaces")


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"

    def __post_init__(self):
        if right(self.first) != left(self.second):
            raise ProgramError("sequence interfaces do not match")


@dataclass(frozen=True)
class Iterate:
    body: "Program"

    def __post_init__(self):
        if left(self.body) != right(self.body):
            raise ProgramError("iterated program must keep its interface")


@dataclass(frozen=True)
class Try:
    body: "Program"

    def __post_init__(self):
        if left(self.body) != right(self.body):
            raise ProgramError("try body must keep its interface")


Program = Skip | Call | Choice | Seq | Iterate | Try


def left(p: Program) -> Graph:
    if isinstance(p, Skip):
        return p.X
    if isinstance(p, Call):
        return p.rule.X
    if isinstance(p, Choice):
        return left(p.options[0])
    if isinstance(p, Seq):
        return left(p.first)
    return left(p.body)


def right(p: Program) -> Graph:
    if isinstance(p, Skip):
        return p.X
    if isinstance(p, Call):
        return p.rule.Y
    if isinstance(p, Choice):
        return right(p.options[0])
    if isinstance(p, Seq):
        return right(p.second)
    return right(p.body)


def seq(*ps: Program) -> Program:
    if not ps:
        raise ProgramError("empty sequence")
    out = ps[-1]
    for p in reversed(ps[:-1]):
        out = Seq(p, out)
    return out


def choice(ps, tag=None) -> Program:
    ps = tuple(ps)
    if len(ps) == 1 and tag is None:
        return ps[0]
    return Choice(ps, tag)


def rules_of(p: Program) -> Iterator[Rule]:
    if isinstance(p, Call):
        yield p.rule
    elif isinstance(p, Choice):
        for q in p.options:
            yield from rules_of(q)
    elif isinstance(p, Seq):
        yield from rules_of(p.first)
        yield from rules_of(p.second)
    elif isinstance(p, Iterate | Try):
        yield from rules_of(p.body)


def transform(p: Program, fn) -> Program:
    """Bottom-up rewrite: ``fn`` sees each node after its children."""
    if isinstance(p, Choice):
        p = Choice(tuple(transform(q, fn) for q in p.options), p.tag)
    elif isinstance(p, Seq):
        p = Seq(transform(p.first, fn), transform(p.second, fn))
    elif isinstance(p, Iterate):
        p = Iterate(transform(p.body, fn))
    elif isinstance(p, Try):
        p = Try(transform(p.body, fn))
    return fn(p)


def pretty(p: Program, indent: int = 0) -> str:
    if isinstance(p, Skip):
        return "Skip"
    if isinstance(p, Call):
        return p.rule.name or "rule"
    if isinstance(p, Choice):
        return "{" + ", ".join(pretty(q) for q in p.options) + "}"
    if isinstance(p, Seq):
        parts = []
        q = p
        while isinstance(q, Seq):
            parts.append(q.first)
            q = q.second
        parts.append(q)
        return "⟨" + "; ".join(pretty(q) for q in parts) + "⟩"
    if isinstance(p, Iterate):
        return pretty(p.body) + "↓"
    return "try " + pretty(p.body)


# ---------------------------------------------------------------------------
# Budgets and outcomes


@dataclass(frozen=True)
class Budget:
    """Resource limits. ``max_steps`` bounds the length of a trace
    (selections included), ``max_outcomes`` the number of states held at
    once, and ``max_graph_size`` the item count of any intermediate graph."""

    max_steps: int = 200
    max_outcomes: int = 20_000
    max_graph_size: int = 64

    def __post_init__(self):
        if min(self.max_steps, self.max_outcomes, self.max_graph_size) <= 0:
            raise ValueError("budget limits must be positive")

    @classmethod
    def parse(cls, text: str, base: Budget | None = None) -> Budget:
        """Parse ``"steps=50,outcomes=1000,size=40"``; missing keys keep
        the values of ``base``."""
        base = base or cls()
        names = {"steps": "max_steps", "outcomes": "max_outcomes", "size": "max_graph_size"}
        kw = {}
        for part in filter(None, (s.strip() for s in text.split(","))):
            k, _, v = part.partition("=")
            k = names.get(k.strip(), k.strip())
            if k not in names.values():
                raise ValueError(f"unknown budget key {k!r}")
            kw[k] = int(v)
        return cls(**{**base.__dict__, **kw})

    @classmethod
    def from_env(cls) -> Budget:
        text = os.environ.get("GRAPAIR_BUDGET", "")
        return cls.parse(text) if text else cls()


@dataclass(frozen=True, eq=False)
class Outcome:
    g: Morphism
    h: Morphism
    i: PartialMorphism
    trace: tuple
    track: PartialMorphism

    @property
    def result(self) -> Graph:
        return self.h.cod

    @property
    def host(self) -> Graph:
        return self.g.cod

    def comatch(self) -> PartialMorphism:
        """``h ∘ i``, the morphism a repair program is judged by."""
        return compose_partial(self.i, self.h)

    def preserved(self) -> int:
        return self.track.domain_size()


@dataclass
class Run:
    outcomes: list
    exhausted: bool


@dataclass(frozen=True, eq=False)
class _State:
    focus: Morphism
    rel: PartialMorphism
    trace: tuple
    track: PartialMorphism


def _identity_partial(g: Graph) -> PartialMorphism:
    return PartialMorphism(g, g, {v: v for v in g.nodes}, {e: e for e in g.edges}, check=False)


def _advance(s: _State, t: DirectTransformation) -> _State:
    return _State(
        t.h,
        compose_partial(s.rel, t.i),
        s.trace + (t,),
        compose_partial(s.track, track_of_step(t)),
    )


def _key(s: _State):
    """Isomorphism-invariant identity of a state: the interface relation,
    and the result graph coloured by focus and by preserved-item marks."""
    H = s.focus.cod
    ncol = {}
    for y, v in s.focus.node_map.items():
        ncol.setdefault(v, []).append("f" + y)
    for v in s.track.node_map.values():
        ncol.setdefault(v, []).append("~")
    ecol = {}
    for y, e in s.focus.edge_map.items():
        ecol.setdefault(e, []).append("f" + y)
    for e in s.track.edge_map.values():
        ecol.setdefault(e, []).append("~")
    ncol = {v: ",".join(sorted(c)) for v, c in ncol.items()}
    ecol = {e: ",".join(sorted(c)) for e, c in ecol.items()}
    key, _ = canonical_form(H, ncol, ecol)
    return (
        frozenset(s.rel.node_map.items()),
        frozenset(s.rel.edge_map.items()),
        key,
    )


class _Ctx:
    def __init__(self, budget: Budget):
        self.budget = budget


def _fits(s: _State, b: Budget) -> bool:
    return len(s.trace) <= b.max_steps and s.focus.cod.size <= b.max_graph_size


def _dedup(states):
    seen = {}
    for s in states:
        seen.setdefault(_key(s), s)
    return list(seen.values())


def _eval(p: Program, s: _State, ctx: _Ctx) -> tuple[list, bool]:
    """Return ``(states, cut)``; ``cut`` records that some branch was
    abandoned because of the budget, so the list may be incomplete."""
    b = ctx.budget
    if isinstance(p, Skip):
        return [s], False
    if isinstance(p, Call):
        out, cut = [], False
        for t in apply_all(p.rule, s.focus):
            n = _advance(s, t)
            if _fits(n, b):
                out.append(n)
            else:
                cut = True
        return out, cut
    if isinstance(p, Choice):
        out, cut = [], False
        for q in p.options:
            o, c = _eval(q, s, ctx)
            out.extend(o)
            cut |= c
        return _cap(_dedup(out), b, cut)
    if isinstance(p, Seq):
        mid, cut = _eval(p.first, s, ctx)
        out = []
        for m in mid:
            o, c = _eval(p.second, m, ctx)
            out.extend(o)
            cut |= c
        return _cap(_dedup(out), b, cut)
    if isinstance(p, Try):
        out, cut = _eval(p.body, s, ctx)
        if not out and not cut:
            return [s], False
        return out, cut
    return _iterate(p.body, s, ctx)


def _cap(states, b: Budget, cut: bool):
    if len(states) > b.max_outcomes:
        return states[: b.max_outcomes], True
    return states, cut


def _fix_successors(body: Program, s: _State, ctx: _Ctx) -> tuple[list, bool]:
    """Outcomes of ``Fix(body)`` at the focus of ``s``, appended to ``s``'s
    history. Body outcomes whose interface relation is partial do not
    give a total ``h∘i`` and are dropped."""
    X = s.focus.dom
    sub = _State(s.focus, _identity_partial(X), (), _identity_partial(s.focus.cod))
    outs, cut = _eval(body, sub, ctx)
    succ = []
    for o in outs:
        i = as_total(o.rel)
        if i is None:
            continue
        focus = compose(i, o.focus)
        succ.append(_State(focus, s.rel, s.trace + o.trace, compose_partial(s.track, o.track)))
    return succ, cut


def _iterate(body: Program, s: _State, ctx: _Ctx) -> tuple[list, bool]:
    b = ctx.budget
    results, cut = [], False
    seen = {_key(s)}
    frontier = [s]
    while frontier:
        nxt = []
        for st in frontier:
            succ, c = _fix_successors(body, st, ctx)
            if not succ:
                if c:
                    cut = True
                else:
                    results.append(st)
                continue
            cut |= c
            for n in succ:
                if not _fits(n, b):
                    cut = True
                    continue
                k = _key(n)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append(n)
            if len(seen) > b.max_outcomes:
                return results, True
        frontier = nxt
    return results, cut


def _start(g: Morphism) -> _State:
    return _State(g, _identity_partial(g.dom), (), _identity_partial(g.cod))


def _outcome(g: Morphism, s: _State) -> Outcome:
    return Outcome(g, s.focus, s.rel, s.trace, s.track)


def check_start(p: Program, g: Morphism):
    if g.dom != left(p):
        raise ProgramError("start morphism does not match the program's left interface")


def run_all(p: Program, g: Morphism, budget: Budget | None = None) -> Run:
    """All outcomes of ``p`` at ``g``, de-duplicated up to isomorphism."""
    check_start(p, g)
    ctx = _Ctx(budget or Budget.from_env())
    states, cut = _eval(p, _start(g), ctx)
    states = _dedup(states)
    return Run([_outcome(g, s) for s in states], cut)


def run_graph(p: Program, G: Graph, budget: Budget | None = None) -> Run:
    return run_all(p, Morphism.empty(G), budget)


# ---------------------------------------------------------------------------
# Sampling


class _Walk:
    def __init__(self, rng: random.Random, budget: Budget):
        self.rng = rng
        self.budget = budget
        self.cut = False
        self.visited = 0

    def tick(self) -> bool:
        self.visited += 1
        if self.visited > self.budget.max_outcomes:
            self.cut = True
            return False
        return True


def _walk(p: Program, s: _State, w: _Walk) -> Iterator[_State]:
    b = w.budget
    if not w.tick():
        return
    if isinstance(p, Skip):
        yield s
    elif isinstance(p, Call):
        ts = apply_all(p.rule, s.focus)
        w.rng.shuffle(ts)
        for t in ts:
            n = _advance(s, t)
            if _fits(n, b):
                yield n
            else:
                w.cut = True
    elif isinstance(p, Choice):
        opts = list(p.options)
        w.rng.shuffle(opts)
        for q in opts:
            yield from _walk(q, s, w)
    elif isinstance(p, Seq):
        for m in _walk(p.first, s, w):
            yield from _walk(p.second, m, w)
    elif isinstance(p, Try):
        before = w.cut
        w.cut = False
        found = False
        for n in _walk(p.body, s, w):
            found = True
            yield n
        cut_here = w.cut
        w.cut = before or cut_here
        if not found and not cut_here:
            yield s
    else:
        yield from _walk_iter(p.body, s, w, set())


def _walk_iter(body: Program, s: _State, w: _Walk, path: set) -> Iterator[_State]:
    X = s.focus.dom
    sub = _State(s.focus, _identity_partial(X), (), _identity_partial(s.focus.cod))
    before = w.cut
    w.cut = False
    found = False
    key = _key(s)
    path = path | {key}
    for o in _walk(body, sub, w):
        i = as_total(o.rel)
        if i is None:
            continue
        found = True
        n = _State(compose(i, o.focus), s.rel, s.trace + o.trace, compose_partial(s.track, o.track))
        if not _fits(n, w.budget):
            w.cut = True
            continue
        if _key(n) in path:
            continue
        yield from _walk_iter(body, n, w, path)
    cut_here = w.cut
    w.cut = before or cut_here
    if not found and not cut_here:
        yield s


@dataclass
class RunOne:
    outcome: Outcome | None
    exhausted: bool


def run_one(p: Program, g: Morphism, seed: int = 0, budget: Budget | None = None) -> RunOne:
    """One outcome chosen by a seeded random walk; ``outcome`` is ``None``
    when the walk found none (``exhausted`` tells whether the budget
    intervened)."""
    check_start(p, g)
    w = _Walk(random.Random(seed), budget or Budget.from_env())
    for s in _walk(p, _start(g), w):
        return RunOne(_outcome(g, s), False)
    return RunOne(None, w.cut)


def replay(o: Outcome) -> Graph:
    """Re-apply every recorded step at its recorded match and return the
    final graph; raises if a step is no longer admissible."""
    G = o.host
    for t in o.trace:
        if t.host != G:
            raise GraphError("trace is not chained")
        again = apply_at(t.rule, t.g, t.match)
        if again is None:
            raise GraphError(f"step {t.rule.name!r} is not admissible at its match")
        G = again.result
    return G
