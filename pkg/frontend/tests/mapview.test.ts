import { describe, expect, it } from "vitest";

import { layoutMap, MapJson, mapToSvg } from "../src/mapview.js";

const MAP: MapJson = {
  focus: "model",
  nodes: [
    { id: "model", kind: "theory-model", side: "focus" },
    { id: "roots", kind: "problem", side: "motivation" },
    { id: "notation", kind: "language", side: "motivation" },
    { id: "extension", kind: "theory-model", side: "impact" },
  ],
  edges: [
    { source: "model", link: "addresses", target: "roots", status: "asserted", claim: "c1" },
    { source: "model", link: "uses-applies", target: "notation", status: "asserted", claim: "c2" },
    {
      source: "extension",
      link: "modifies-extends",
      target: "model",
      status: "asserted",
      claim: "c3",
    },
    {
      source: "model",
      link: "may-be-challenged",
      target: "extension",
      status: "inferred",
      claim: "c4",
    },
  ],
};

describe("layoutMap", () => {
  it("places motivation left, focus center, impact right", () => {
    const layout = layoutMap(MAP);
    const x = new Map(layout.nodes.map((n) => [n.id, n.x]));
    expect(x.get("roots")).toBeLessThan(x.get("model")!);
    expect(x.get("notation")).toBeLessThan(x.get("model")!);
    expect(x.get("model")).toBeLessThan(x.get("extension")!);
    expect(layout.columns.motivation.map((n) => n.id)).toEqual(["roots", "notation"]);
  });

  it("keeps every edge from the map and marks inferred ones dashed", () => {
    const layout = layoutMap(MAP);
    expect(layout.edges).toHaveLength(MAP.edges.length);
    const byClaim = new Map(layout.edges.map((e) => [e.claim, e.dashed]));
    expect(byClaim.get("c3")).toBe(false);
    expect(byClaim.get("c4")).toBe(true);
  });

  it("drops edges whose endpoints are not on the map", () => {
    const layout = layoutMap({
      ...MAP,
      edges: [
        ...MAP.edges,
        { source: "ghost", link: "supports", target: "model", status: "asserted", claim: "c9" },
      ],
    });
    expect(layout.edges.every((e) => e.claim !== "c9")).toBe(true);
  });
});

describe("mapToSvg", () => {
  it("renders one group per node and dashes inferred edges", () => {
    const svg = mapToSvg(layoutMap(MAP));
    expect(svg.match(/data-node=/g)).toHaveLength(4);
    expect(svg.match(/stroke-dasharray/g)).toHaveLength(1);
    expect(svg).toContain('data-side="focus"');
  });
});
