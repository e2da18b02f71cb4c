/**
 * Concept-map layout. The server's map JSON already carries a side tag per
 * node (motivation / focus / impact); the view places motivation in the
 * left column, the focus in the middle, impact on the right, and renders
 * inferred edges dashed. Direction is never recomputed client-side.
 */

export interface MapNodeJson {
  id: string;
  kind: string;
  side: "motivation" | "focus" | "impact";
}

export interface MapEdgeJson {
  source: string;
  link: string;
  target: string;
  status: "asserted" | "inferred";
  claim: string;
}

export interface MapJson {
  focus: string;
  nodes: MapNodeJson[];
  edges: MapEdgeJson[];
}

export interface PlacedNode extends MapNodeJson {
  x: number;
  y: number;
}

export interface PlacedEdge extends MapEdgeJson {
  dashed: boolean;
}

export interface MapLayout {
  columns: { motivation: MapNodeJson[]; focus: MapNodeJson[]; impact: MapNodeJson[] };
  nodes: PlacedNode[];
  edges: PlacedEdge[];
  width: number;
  height: number;
}

const COLUMN_X: Record<MapNodeJson["side"], number> = {
  motivation: 0,
  focus: 1,
  impact: 2,
};

const COL_WIDTH = 260;
const ROW_HEIGHT = 56;
const PADDING = 24;

export function layoutMap(map: MapJson): MapLayout {
  const columns = {
    motivation: map.nodes.filter((n) => n.side === "motivation"),
    focus: map.nodes.filter((n) => n.side === "focus"),
    impact: map.nodes.filter((n) => n.side === "impact"),
  };
  const rows = Math.max(columns.motivation.length, columns.impact.length, 1);
  const nodes: PlacedNode[] = [];
  for (const side of ["motivation", "focus", "impact"] as const) {
    const col = columns[side];
    col.forEach((node, i) => {
      const y =
        side === "focus"
          ? PADDING + (rows - 1) * ROW_HEIGHT * 0.5
          : PADDING + i * ROW_HEIGHT;
      nodes.push({ ...node, x: PADDING + COLUMN_X[side] * COL_WIDTH, y });
    });
  }
  const known = new Set(map.nodes.map((n) => n.id));
  const edges: PlacedEdge[] = map.edges
    .filter((e) => known.has(e.source) && known.has(e.target))
    .map((e) => ({ ...e, dashed: e.status === "inferred" }));
  return {
    columns,
    nodes,
    edges,
    width: PADDING * 2 + 3 * COL_WIDTH,
    height: PADDING * 2 + rows * ROW_HEIGHT,
  };
}

function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Minimal SVG rendering of a laid-out map. */
export function mapToSvg(layout: MapLayout): string {
  const pos = new Map(layout.nodes.map((n) => [n.id, n]));
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${layout.width}" height="${layout.height}" ` +
      `viewBox="0 0 ${layout.width} ${layout.height}">`,
  ];
  for (const edge of layout.edges) {
    const a = pos.get(edge.source)!;
    const b = pos.get(edge.target)!;
    const dash = edge.dashed ? ' stroke-dasharray="6 4"' : "";
    parts.push(
      `<line x1="${a.x + 90}" y1="${a.y + 14}" x2="${b.x + 90}" y2="${b.y + 14}" ` +
        `stroke="#666"${dash} data-link="${esc(edge.link)}" data-claim="${esc(edge.claim)}"/>`
    );
  }
  for (const node of layout.nodes) {
    const weight = node.side === "focus" ? "bold" : "normal";
    parts.push(
      `<g data-node="${esc(node.id)}" data-side="${node.side}">` +
        `<rect x="${node.x}" y="${node.y}" width="180" height="28" rx="6" ` +
        `fill="${node.side === "focus" ? "#ffe9a8" : "#eef3fb"}" stroke="#88a"/>` +
        `<text x="${node.x + 90}" y="${node.y + 18}" text-anchor="middle" ` +
        `font-size="11" font-weight="${weight}">${esc(node.id)}</text></g>`
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
