"""The railroad fixtures: waypoints, tracks and trains.

Waypoints are nodes labelled ``wp``. A bidirectional track between two
waypoints is a pair of opposite ``track`` edges, and a train is a ``train``
edge whose source is its position and whose target its heading.
"""

from __future__ import annotations

from .conditions import Condition, exists, nexists
from .graph import EMPTY, Graph, Morphism
from .rules import PlainRule
from .rulebased import RuleSet

WP = "wp"
TRACK = "track"
TRAIN = "train"
STATION = "station"


def _tracks(*pairs):
    out = []
    for u, v in pairs:
        out.append((f"t{u}{v}", u, v, TRACK))
        out.append((f"t{v}{u}", v, u, TRACK))
    return out


def net(n_nodes: int, tracks, trains=()) -> Graph:
    """Waypoints ``1..n``, tracks as id pairs, trains as ``(id, src, tgt)``."""
    nodes = [(str(k), WP) for k in range(1, n_nodes + 1)]
    edges = _tracks(*((str(u), str(v)) for u, v in tracks))
    edges += [(z, str(s), str(t), TRAIN) for z, s, t in trains]
    return Graph(nodes, edges)


def delete_rule() -> PlainRule:
    L = net(2, [(1, 2)], [("z", 1, 2)])
    K = net(2, [(1, 2)])
    return PlainRule(L, K, K, "Delete")


def move_rule() -> PlainRule:
    L = net(3, [(1, 2), (2, 3)], [("z", 1, 2)])
    K = net(3, [(1, 2), (2, 3)])
    R = net(3, [(1, 2), (2, 3)], [("z2", 2, 3)])
    return PlainRule(L, K, R, "Move")


def build_rule() -> PlainRule:
    K = net(2, [])
    return PlainRule(K, K, net(2, [(1, 2)]), "build")


def notwo() -> Condition:
    """No two trains on the same piece of track."""
    return nexists(Morphism.empty(net(2, [(1, 2)], [("z1", 1, 2), ("z2", 1, 2)])))


def station() -> Condition:
    """There exists a train station."""
    return exists(Morphism.empty(Graph([("s", STATION)])))


def two_trains() -> Graph:
    """One track carrying two trains heading the same way."""
    return net(2, [(1, 2)], [("z1", 1, 2), ("z2", 1, 2)])


def line(n: int, trains=()) -> Graph:
    """``n`` waypoints on a line."""
    return net(n, [(k, k + 1) for k in range(1, n)], trains)


RULES = {"Move": move_rule, "Delete": delete_rule, "build": build_rule}


def ruleset(*names: str) -> RuleSet:
    return RuleSet(tuple(RULES[n]() for n in names))


__all__ = [
    "EMPTY", "build_rule", "delete_rule", "line", "move_rule", "net", "notwo",
    "ruleset", "station", "two_trains",
]


def fixture_documents() -> dict:
    """The shipped fixture files, by file name."""
    from . import io
    from .conditions import forall, exists as ex
    from .graph import Graph as G

    one = G([("1", "a")])
    out_edge = G([("1", "a"), ("2", "a")], [("e", "1", "2", "a")])
    every_out = forall(Morphism.empty(one), ex(Morphism.inclusion(one, out_edge)))
    rules = lambda *ps: {"rules": [io.plain_rule_to_json(p) for p in ps]}  # noqa: E731
    return {
        "tworail.json": io.graph_to_json(two_trains()),
        "line3.json": io.graph_to_json(line(3, [("z1", 1, 2), ("z2", 1, 2)])),
        "path3.json": io.graph_to_json(G([("1", "a"), ("2", "a"), ("3", "a")],
                                         [("e1", "1", "2", "a"), ("e2", "2", "3", "a")])),
        "notwo.json": io.condition_to_json(notwo()),
        "station.json": io.condition_to_json(station()),
        "every_out.json": io.condition_to_json(every_out),
        "move.json": io.plain_rule_to_json(move_rule()),
        "delete.json": io.plain_rule_to_json(delete_rule()),
        "build.json": io.plain_rule_to_json(build_rule()),
        "moveDelete.json": rules(move_rule(), delete_rule()),
        "delete-only.json": rules(delete_rule()),
    }


def write_fixtures(directory) -> list:
    from pathlib import Path
    from .io import dumps

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, doc in sorted(fixture_documents().items()):
        (d / name).write_text(dumps(doc) + "\n")
        out.append(d / name)
    return out


def fixture_path(name: str):
    from pathlib import Path

    return Path(__file__).parent / "fixtures" / name
