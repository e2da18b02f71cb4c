/**
 * Canonical .scl serialization.
 *
 * The server's event log stores submissions verbatim, so the client must
 * emit exactly the bytes the server-side canonical printer would: same
 * field order, same sorting, same escapes, same whitespace. Anything less
 * breaks log-record parity between UI submissions and CLI ingests.
 */

export interface RelationDecl {
  link: string;
  target: string;
}

export interface ElementDecl {
  kind: string;
  id: string;
  relations: RelationDecl[];
}

export interface ArticleDecl {
  id: string;
  title: string;
  authors: string[];
  publicationDetails: string;
  url: string | null;
  domains: string[];
  subjectCodes: string[];
  describes: string[];
}

export interface ClaimDecl {
  authors: string[];
  source: string;
  link: string;
  target: string;
  because: string;
}

export interface Submission {
  articles: ArticleDecl[];
  elements: ElementDecl[];
  claims: ClaimDecl[];
}

export class EmptyNameError extends Error {}

const ALNUM = /[\p{L}\p{N}]/u;

/** Lowercase; runs of punctuation/whitespace collapse to single hyphens. */
export function canonicalizeId(name: string): string {
  const out: string[] = [];
  let pending = false;
  for (const ch of name.toLowerCase()) {
    if (ALNUM.test(ch)) {
      if (pending && out.length > 0) out.push("-");
      pending = false;
      out.push(ch);
    } else {
      pending = true;
    }
  }
  if (out.length === 0) {
    throw new EmptyNameError(`name ${JSON.stringify(name)} has no identifier characters`);
  }
  return out.join("");
}

const ESCAPES: Record<string, string> = {
  "\\": "\\\\",
  '"': '\\"',
  "\n": "\\n",
  "\t": "\\t",
};

export function escapeString(text: string): string {
  let out = "";
  for (const ch of text) out += ESCAPES[ch] ?? ch;
  return out;
}

/** Code-point comparison, matching server-side lexicographic sorting. */
export function cmp(a: string, b: string): number {
  const xs = Array.from(a);
  const ys = Array.from(b);
  const n = Math.min(xs.length, ys.length);
  for (let i = 0; i < n; i++) {
    const xa = xs[i].codePointAt(0)!;
    const yb = ys[i].codePointAt(0)!;
    if (xa !== yb) return xa - yb;
  }
  return xs.length - ys.length;
}

function sortedUnique(values: string[]): string[] {
  return Array.from(new Set(values)).sort(cmp);
}

function printArticle(art: ArticleDecl): string {
  const lines = [`(article ${art.id}`];
  if (art.title) lines.push(`  (has-title "${escapeString(art.title)}")`);
  if (art.authors.length) lines.push(`  (has-author ${art.authors.join(" ")})`);
  if (art.publicationDetails) {
    lines.push(`  (publication-details "${escapeString(art.publicationDetails)}")`);
  }
  if (art.url !== null) lines.push(`  (has-url "${escapeString(art.url)}")`);
  if (art.domains.length) {
    lines.push(`  (concerns-domain ${sortedUnique(art.domains).join(" ")})`);
  }
  if (art.subjectCodes.length) {
    const codes = sortedUnique(art.subjectCodes).map((c) => `"${escapeString(c)}"`);
    lines.push(`  (subject-code ${codes.join(" ")})`);
  }
  if (art.describes.length) {
    lines.push(`  (describes ${sortedUnique(art.describes).join(" ")})`);
  }
  return lines.join("\n") + ")";
}

function printElement(elem: ElementDecl): string {
  if (elem.relations.length === 0) return `(${elem.kind} ${elem.id})`;
  const groups = new Map<string, string[]>();
  for (const rel of elem.relations) {
    const bucket = groups.get(rel.link) ?? [];
    if (!bucket.includes(rel.target)) bucket.push(rel.target);
    groups.set(rel.link, bucket);
  }
  const lines = [`(${elem.kind} ${elem.id}`];
  for (const link of Array.from(groups.keys()).sort(cmp)) {
    lines.push(`  (${link} ${groups.get(link)!.slice().sort(cmp).join(" ")})`);
  }
  return lines.join("\n") + ")";
}

function printClaim(claim: ClaimDecl): string {
  const by = sortedUnique(claim.authors).join(" ");
  return (
    `(claim (by ${by}) ` +
    `(assert ${claim.source} ${claim.link} ${claim.target}) ` +
    `(because "${escapeString(claim.because)}"))`
  );
}

export function printSubmission(sub: Submission): string {
  const chunks: string[] = [];
  for (const art of sub.articles) chunks.push(printArticle(art));
  for (const elem of sub.elements) chunks.push(printElement(elem));
  for (const claim of sub.claims) chunks.push(printClaim(claim));
  return chunks.length ? chunks.join("\n\n") + "\n" : "";
}
