/**
 * Menu-driven query building. A selection is turned into the exact query
 * text the CLI accepts, so UI queries and `cg query` hit identical code
 * paths server-side.
 */
import { canonicalizeId } from "./scl.js";

export type QuerySelection =
  | { variant: "find"; kind: string; link: string; target: string }
  | { variant: "impact"; target: string }
  | { variant: "contradictions"; target: string }
  | { variant: "applying"; method: string; domains: string[] }
  | { variant: "perspectives"; seed: string; threshold?: number }
  | { variant: "claims-about"; target: string };

export function queryText(sel: QuerySelection): string {
  switch (sel.variant) {
    case "find":
      return `find ${canonicalizeId(sel.kind)} where ${canonicalizeId(sel.link)} ${canonicalizeId(sel.target)}`;
    case "impact":
      return `impact ${canonicalizeId(sel.target)}`;
    case "contradictions":
      return `contradictions about ${canonicalizeId(sel.target)}`;
    case "applying":
      return `applying ${canonicalizeId(sel.method)} to ${sel.domains.map(canonicalizeId).join(" ")}`;
    case "perspectives": {
      const base = `perspectives on ${canonicalizeId(sel.seed)}`;
      return sel.threshold === undefined ? base : `${base} threshold ${sel.threshold}`;
    }
    case "claims-about":
      return `claims about ${canonicalizeId(sel.target)}`;
  }
}

/**
 * Drill-down targets for a result row: every id a user can click through
 * to its claims or to a concept map.
 */
export function rowDrillTargets(row: Record<string, unknown>): string[] {
  const out: string[] = [];
  if (typeof row.id === "string") out.push(row.id);
  if (typeof row.target === "string") out.push(row.target);
  if (typeof row.source === "string") out.push(row.source);
  if (Array.isArray(row.articles)) out.push(...(row.articles as string[]));
  return out;
}
