"""JSON encodings for graphs, morphisms, conditions, rules and programs, and
DOT export."""

from __future__ import annotations

import json
from pathlib import Path

from .conditions import (
    And,
    Condition,
    Exists,
    Not,
    Truth,
    false,
    forall,
    nexists,
    or_,
)
from .graph import EMPTY, Graph, GraphError, Morphism, PartialMorphism, validate
from .programs import Call, Choice, Iterate, Program, Seq, Skip, Try
from .rules import STANDARD, PlainRule, Rule
from .rulebased import RuleSet


class FormatError(ValueError):
    """Malformed input document."""


def _need(obj, key, what):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{what}: missing {key!r}")
    return obj[key]


# -- graphs and morphisms ----------------------------------------------------


def graph_to_json(g: Graph) -> dict:
    return {
        "nodes": [{"id": v, "label": g.nodes[v]} for v in sorted(g.nodes)],
        "edges": [
            {"id": e, "src": s, "tgt": t, "label": lab}
            for e, (s, t, lab) in sorted(g.edges.items())
        ],
    }


def graph_from_json(obj) -> Graph:
    if not isinstance(obj, dict):
        raise FormatError("graph: expected an object")
    try:
        bad = validate(obj)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"graph: malformed record ({exc})") from None
    if bad is not None:
        raise FormatError(f"graph: {bad}")
    nodes = [(n["id"], n["label"]) for n in obj.get("nodes", [])]
    edges = [(e["id"], e["src"], e["tgt"], e["label"]) for e in obj.get("edges", [])]
    return Graph(nodes, edges)


def morphism_to_json(m: PartialMorphism) -> dict:
    return {
        "dom": graph_to_json(m.dom),
        "cod": graph_to_json(m.cod),
        "nodes": dict(sorted(m.node_map.items())),
        "edges": dict(sorted(m.edge_map.items())),
    }


def morphism_from_json(obj, dom: Graph | None = None, cod: Graph | None = None,
                       partial: bool = False) -> PartialMorphism:
    """Parse a morphism. ``dom``/``cod`` may be supplied by the enclosing
    document; a morphism given without maps is read as the inclusion."""
    if not isinstance(obj, dict):
        raise FormatError("morphism: expected an object")
    d = graph_from_json(obj["dom"]) if "dom" in obj else dom
    c = graph_from_json(obj["cod"]) if "cod" in obj else cod
    if d is None or c is None:
        raise FormatError("morphism: domain or codomain missing")
    try:
        if "nodes" not in obj and "edges" not in obj:
            return Morphism.inclusion(d, c)
        cls = PartialMorphism if partial else Morphism
        return cls(d, c, obj.get("nodes", {}), obj.get("edges", {}))
    except GraphError as exc:
        raise FormatError(f"morphism: {exc}") from None


# -- conditions ----------------------------------------------------------------


def condition_to_json(c: Condition, top: bool = True) -> dict:
    out = {"ctx": graph_to_json(c.context)} if top else {}
    if isinstance(c, Truth):
        out["kind"] = "true"
    elif isinstance(c, Not):
        out.update(kind="not", sub=condition_to_json(c.sub, False))
    elif isinstance(c, And):
        out.update(kind="and", subs=[condition_to_json(s, False) for s in c.subs])
    else:
        out.update(kind="exists", mor=morphism_to_json(c.mor), sub=condition_to_json(c.sub, False))
    return out


def condition_from_json(obj, ctx: Graph | None = None) -> Condition:
    if not isinstance(obj, dict):
        raise FormatError("condition: expected an object")
    if "ctx" in obj:
        ctx = graph_from_json(obj["ctx"])
    ctx = EMPTY if ctx is None else ctx
    kind = _need(obj, "kind", "condition")
    try:
        if kind == "true":
            return Truth(ctx)
        if kind == "false":
            return false(ctx)
        if kind in ("not", "and", "or"):
            if kind == "not":
                return Not(condition_from_json(_need(obj, "sub", "not"), ctx))
            subs = [condition_from_json(s, ctx) for s in _need(obj, "subs", kind)]
            return And(ctx, tuple(subs)) if kind == "and" else or_(ctx, subs)
        if kind in ("exists", "forall", "nexists"):
            mor = morphism_from_json(_need(obj, "mor", kind), dom=ctx)
            if mor.dom != ctx:
                raise FormatError(f"{kind}: morphism does not start at the context")
            if kind == "nexists":
                return nexists(mor)
            sub = obj.get("sub")
            sub = condition_from_json(sub, mor.cod) if sub is not None else Truth(mor.cod)
            if kind == "forall":
                return forall(mor, sub)
            return Exists(mor, sub)
    except (GraphError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"condition: {exc}") from None
    raise FormatError(f"condition: unknown kind {kind!r}")


# -- rules -------------------------------------------------------------------------


def plain_rule_to_json(p: PlainRule) -> dict:
    return {"name": p.name, "L": graph_to_json(p.L), "K": graph_to_json(p.K), "R": graph_to_json(p.R)}


def rule_to_json(r: Rule) -> dict:
    out = plain_rule_to_json(r.plain)
    out["name"] = r.name
    if r.plain.name != r.name:
        out["plain_name"] = r.plain.name
    out["ac"] = condition_to_json(r.ac)
    out["x"] = morphism_to_json(r.x)
    out["y"] = morphism_to_json(r.y)
    out["dangling"] = r.dangling
    return out


def rule_from_json(obj) -> Rule:
    name = obj.get("name", "") if isinstance(obj, dict) else ""
    L = graph_from_json(_need(obj, "L", "rule"))
    K = graph_from_json(_need(obj, "K", "rule"))
    R = graph_from_json(_need(obj, "R", "rule"))
    try:
        plain = PlainRule(L, K, R, obj.get("plain_name", name))
        x = morphism_from_json(obj["x"], cod=L) if "x" in obj else Morphism.empty(L)
        y = morphism_from_json(obj["y"], cod=R) if "y" in obj else Morphism.empty(R)
        ac = condition_from_json(obj["ac"], L) if "ac" in obj else Truth(L)
        return Rule(plain, x, y, ac, obj.get("dangling", STANDARD), name)
    except GraphError as exc:
        raise FormatError(f"rule {name!r}: {exc}") from None


def ruleset_from_json(obj) -> RuleSet:
    items = obj.get("rules") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise FormatError("rule set: expected a list of rules")
    try:
        return RuleSet(tuple(rule_from_json(r).plain for r in items))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"rule set: {exc}") from None


def ruleset_to_json(rs: RuleSet) -> dict:
    return {"rules": [plain_rule_to_json(p) for p in rs]}


# -- programs ------------------------------------------------------------------------


def program_to_json(p: Program) -> dict:
    if isinstance(p, Skip):
        return {"kind": "skip", "X": graph_to_json(p.X)}
    if isinstance(p, Call):
        return {"kind": "rule", "rule": rule_to_json(p.rule)}
    if isinstance(p, Choice):
        return {"kind": "choice", "options": [program_to_json(q) for q in p.options]}
    if isinstance(p, Seq):
        return {"kind": "seq", "first": program_to_json(p.first), "second": program_to_json(p.second)}
    if isinstance(p, Iterate):
        return {"kind": "iterate", "body": program_to_json(p.body)}
    return {"kind": "try", "body": program_to_json(p.body)}


def program_from_json(obj) -> Program:
    kind = _need(obj, "kind", "program")
    try:
        if kind == "skip":
            return Skip(graph_from_json(obj.get("X", {"nodes": [], "edges": []})))
        if kind == "rule":
            return Call(rule_from_json(_need(obj, "rule", "program")))
        if kind == "choice":
            return Choice(tuple(program_from_json(q) for q in _need(obj, "options", "choice")))
        if kind == "seq":
            if "steps" in obj:
                steps = [program_from_json(q) for q in obj["steps"]]
                out = steps[-1]
                for q in reversed(steps[:-1]):
                    out = Seq(q, out)
                return out
            return Seq(program_from_json(_need(obj, "first", "seq")),
                       program_from_json(_need(obj, "second", "seq")))
        if kind == "iterate":
            return Iterate(program_from_json(_need(obj, "body", "iterate")))
        if kind == "try":
            return Try(program_from_json(_need(obj, "body", "try")))
    except (GraphError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"program: {exc}") from None
    raise FormatError(f"program: unknown kind {kind!r}")


# -- files -----------------------------------------------------------------------


def load_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


# -- DOT ---------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Graph, name: str = "G", highlight_nodes=(), highlight_edges=()) -> str:
    hn, he = set(highlight_nodes), set(highlight_edges)
    lines = [f"digraph {_q(name)} {{"]
    for v in sorted(g.nodes):
        attrs = f'label={_q(v + ":" + g.nodes[v])}'
        if v in hn:
            attrs += ", color=red, penwidth=2"
        lines.append(f"  {_q(v)} [{attrs}];")
    for e, (s, t, lab) in sorted(g.edges.items()):
        attrs = f"label={_q(lab)}"
        if e in he:
            attrs += ", color=red, penwidth=2"
        lines.append(f"  {_q(s)} -> {_q(t)} [{attrs}, id={_q(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_trace_dot(outcome, directory) -> list[Path]:
    """One DOT file per step of an outcome's trace (plus the start graph),
    highlighting the match in each host."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    p = d / "step00.dot"
    p.write_text(to_dot(outcome.host, "start"))
    paths.append(p)
    for k, t in enumerate(outcome.trace, 1):
        p = d / f"step{k:02d}.dot"
        p.write_text(to_dot(t.result, f"{k}:{t.rule.name}",
                            t.comatch.node_map.values(), t.comatch.edge_map.values()))
        paths.append(p)
    return paths
