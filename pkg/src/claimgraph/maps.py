"""Concept maps: a focus node with motivation and impact sides, plus exports.

The map is data; layout conventions (motivation left, impact right) are
encoded as side tags and a dot rank hint so renderers never recompute
direction themselves.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

SIDE_FOCUS = "focus"
SIDE_MOTIVATION = "motivation"
SIDE_IMPACT = "impact"

STATUS_ASSERTED = "asserted"
STATUS_INFERRED = "inferred"

_SIDE_ORDER = {SIDE_FOCUS: 0, SIDE_MOTIVATION: 1, SIDE_IMPACT: 2}


class MapFormatError(ValueError):
    """Unknown export format or malformed map document."""


@dataclass(frozen=True)
class MapNode:
    id: str
    kind: str
    side: str


@dataclass(frozen=True)
class MapEdge:
    source: str
    link: str
    target: str
    status: str
    claim: str


@dataclass(frozen=True)
class ConceptMap:
    focus: str
    nodes: tuple[MapNode, ...]
    edges: tuple[MapEdge, ...]

    def side_ids(self, side: str) -> list[str]:
        return sorted(n.id for n in self.nodes if n.side == side)


def normalized(focus: str, nodes, edges) -> ConceptMap:
    node_tuple = tuple(sorted(set(nodes), key=lambda n: (_SIDE_ORDER[n.side], n.id)))
    edge_tuple = tuple(sorted(set(edges), key=lambda e: (e.source, e.link, e.target, e.claim)))
    return ConceptMap(focus=focus, nodes=node_tuple, edges=edge_tuple)


def map_to_json(m: ConceptMap) -> str:
    doc = {
        "focus": m.focus,
        "nodes": [{"id": n.id, "kind": n.kind, "side": n.side} for n in m.nodes],
        "edges": [
            {
                "source": e.source,
                "link": e.link,
                "target": e.target,
                "status": e.status,
                "claim": e.claim,
            }
            for e in m.edges
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def map_from_json(text: str) -> ConceptMap:
    try:
        doc = json.loads(text)
        nodes = [MapNode(n["id"], n["kind"], n["side"]) for n in doc["nodes"]]
        edges = [
            MapEdge(e["source"], e["link"], e["target"], e["status"], e["claim"])
            for e in doc["edges"]
        ]
        return normalized(doc["focus"], nodes, edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise MapFormatError(f"malformed map document: {exc}") from None


def map_to_dot(m: ConceptMap) -> str:
    lines = ["digraph concept_map {", "  rankdir=LR;"]
    for node in m.nodes:
        lines.append(f'  "{node.id}" [label="{node.id}\\n({node.kind})"];')
    motivation = m.side_ids(SIDE_MOTIVATION)
    impact = m.side_ids(SIDE_IMPACT)
    if motivation:
        lines.append("  { rank=min; " + " ".join(f'"{n}";' for n in motivation) + " }")
    if impact:
        lines.append("  { rank=max; " + " ".join(f'"{n}";' for n in impact) + " }")
    for e in m.edges:
        style = ", style=dashed" if e.status == STATUS_INFERRED else ""
        lines.append(f'  "{e.source}" -> "{e.target}" [label="{e.link}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_map(m: ConceptMap, format: str) -> str:
    if format == "json":
        return map_to_json(m)
    if format == "dot":
        return map_to_dot(m)
    raise MapFormatError(f"unknown map format {format!r}")
