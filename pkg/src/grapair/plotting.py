"""Matplotlib renderings of graphs and repair traces, written to image files."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graph import Graph  # noqa: E402

_PALETTE = ["#4C72B0", "#DD8452", "#55A868", "#C44E52", "#8172B3", "#937860", "#DA8BC3"]


def _layout(g: Graph) -> dict:
    vs = sorted(g.nodes)
    n = len(vs)
    if n == 1:
        return {vs[0]: (0.0, 0.0)}
    return {v: (math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k, v in enumerate(vs)}


def _colour(label: str, seen: dict) -> str:
    if label not in seen:
        seen[label] = _PALETTE[len(seen) % len(_PALETTE)]
    return seen[label]


def draw_graph(g: Graph, ax, title: str = "", highlight=(), colours: dict | None = None,
               pos: dict | None = None):
    """Draw ``g`` on ``ax``. Parallel edges are bent apart, loops drawn as
    small circles; highlighted items are drawn in red."""
    colours = {} if colours is None else colours
    pos = pos or _layout(g)
    hl = set(highlight)
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()
    ax.set_aspect("equal")
    ax.set_xlim(-1.6, 1.6)
    ax.set_ylim(-1.6, 1.6)
    bundles = {}
    for e in sorted(g.edges):
        s, t, _ = g.edges[e]
        bundles.setdefault(frozenset((s, t)), []).append(e)
    for group in bundles.values():
        for k, e in enumerate(group):
            s, t, lab = g.edges[e]
            col = "red" if e in hl else _colour(lab, colours)
            x0, y0 = pos[s]
            if s == t:
                r = 0.18 + 0.07 * k
                ax.add_patch(plt.Circle((x0 + r, y0 + r), r, fill=False, color=col, lw=1.2))
                continue
            # spread bundle members symmetrically in the frame of the lower
            # node id; arc3 bends relative to direction, so flip reversed edges
            rad = 0.25 * (k - (len(group) - 1) / 2) + (0.12 if len(group) == 1 else 0)
            if s > t:
                rad = -rad
            ax.annotate("", xy=pos[t], xytext=pos[s],
                        arrowprops=dict(arrowstyle="-|>", color=col, lw=1.2,
                                        shrinkA=9, shrinkB=9,
                                        connectionstyle=f"arc3,rad={rad}"))
    for v in sorted(g.nodes):
        x, y = pos[v]
        col = "red" if v in hl else _colour("node:" + g.nodes[v], colours)
        ax.scatter([x], [y], s=260, color=col, zorder=3, edgecolors="black", linewidths=0.6)
        ax.text(x, y, v, ha="center", va="center", fontsize=7, color="white", zorder=4)
    return colours


def _legend(fig, colours):
    handles = [plt.Line2D([0], [0], color=c, lw=2, label=lab.removeprefix("node:"))
               for lab, c in colours.items()]
    if handles:
        fig.legend(handles=handles, loc="lower center", ncol=min(6, len(handles)),
                   fontsize=7, frameon=False)


def save_graph(g: Graph, path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(3.2, 3.4))
    colours = draw_graph(g, ax, title)
    _legend(fig, colours)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def save_trace(outcome, path, title: str = "") -> Path:
    """A strip of panels: the start graph, then the result of every step
    with the created items highlighted."""
    steps = [t for t in outcome.trace if not t.rule.plain.is_identity()]
    panels = [(outcome.host, "start", ())]
    for t in steps:
        created = set(t.comatch.node_map.values()) | set(t.comatch.edge_map.values())
        kept = set(t.r_star.node_map.values()) | set(t.r_star.edge_map.values())
        panels.append((t.result, t.rule.name, created - kept))
    n = len(panels)
    fig, axes = plt.subplots(1, n, figsize=(2.6 * n, 3.0), squeeze=False)
    colours = {}
    nodes = set()
    for g, _, _ in panels:
        nodes |= set(g.nodes)
    union = Graph([(v, "x") for v in nodes])
    pos = _layout(union)
    for ax, (g, name, hl) in zip(axes[0], panels):
        draw_graph(g, ax, name, hl, colours, pos)
    _legend(fig, colours)
    if title:
        fig.suptitle(title, fontsize=10)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    return path
