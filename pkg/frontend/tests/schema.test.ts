import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { SchemaModel, SchemaUnreachableError } from "../src/schema.js";

const DOC = readFileSync(new URL("./fixtures/schema.scl", import.meta.url), "utf-8");

describe("SchemaModel.parse", () => {
  it("reads the server schema document", () => {
    const schema = SchemaModel.parse(DOC);
    expect(schema.nodeKinds.has("theory-model")).toBe(true);
    expect(schema.linkKinds.size).toBe(11);
    expect(schema.resolveLink("envisages")?.id).toBe("predicts-envisages");
  });

  it("raises schema-unreachable on an empty document", () => {
    expect(() => SchemaModel.parse("")).toThrow(SchemaUnreachableError);
  });
});

describe("validateEdge", () => {
  const schema = SchemaModel.parse(DOC);

  it("accepts constrained targets", () => {
    expect(schema.validateEdge("addresses", "software", "problem")).toBeNull();
    expect(schema.validateEdge("modifies-extends", "software", "software")).toBeNull();
  });

  it("rejects range violations", () => {
    expect(schema.validateEdge("modifies-extends", "software", "problem")).not.toBeNull();
    expect(schema.validateEdge("addresses", "software", "idea")).not.toBeNull();
  });
});

describe("picker options", () => {
  const schema = SchemaModel.parse(DOC);

  it("offers the ten relation links (describes belongs to the article section)", () => {
    const options = schema.relationLinkOptions();
    expect(options).toHaveLength(10);
    expect(options).not.toContain("describes");
    expect(options).toContain("modifies-extends");
  });

  it("restricts target kinds to the link's range", () => {
    expect(schema.targetKindOptions("modifies-extends", "software")).toEqual(["software"]);
    expect(schema.targetKindOptions("addresses", "software")).toEqual(["problem"]);
    expect(schema.targetKindOptions("uses-applies", "software")).toEqual(
      schema.elementKindOptions()
    );
  });
});
