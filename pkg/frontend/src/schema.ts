/**
 * Client-side view of the server schema, parsed from GET /schema.
 *
 * The client duplicates only endpoint-kind checks (enough to drive the
 * pickers and block obviously invalid rows before any network call); all
 * other semantics stay server-side.
 */
import { canonicalizeId, cmp } from "./scl.js";

export const ROOT_ELEMENT_KIND = "scholarly-contribution-element";
export const ARTICLE_KIND = "article";
export const CLAIM_PSEUDO_KIND = "claim";

export interface NodeKind {
  id: string;
  name: string;
  parent: string | null;
}

export interface LinkKind {
  id: string;
  name: string;
  category: string;
  domainKinds: string[];
  rangeKinds: string[];
  aliases: string[];
  sameKind: boolean;
}

export class SchemaUnreachableError extends Error {}

export class SchemaParseError extends Error {}

type Atom = { type: "id" | "string"; value: string };
type Form = Array<Atom | Form>;

function tokenizeForms(text: string): Form[] {
  const forms: Form[] = [];
  const stack: Form[] = [];
  let i = 0;
  const n = text.length;
  while (i < n) {
    const ch = text[i];
    if (ch === ";") {
      while (i < n && text[i] !== "\n") i++;
    } else if (ch === "(") {
      const form: Form = [];
      if (stack.length) stack[stack.length - 1].push(form);
      else forms.push(form);
      stack.push(form);
      i++;
    } else if (ch === ")") {
      if (!stack.length) throw new SchemaParseError("unbalanced parenthesis");
      stack.pop();
      i++;
    } else if (ch === '"') {
      i++;
      let buf = "";
      while (i < n && text[i] !== '"') {
        if (text[i] === "\\" && i + 1 < n) {
          const esc = text[i + 1];
          buf += esc === "n" ? "\n" : esc === "t" ? "\t" : esc;
          i += 2;
        } else {
          buf += text[i++];
        }
      }
      if (i >= n) throw new SchemaParseError("unterminated string");
      i++;
      if (!stack.length) throw new SchemaParseError("stray string");
      stack[stack.length - 1].push({ type: "string", value: buf });
    } else if (" \t\r\n".includes(ch)) {
      i++;
    } else {
      let j = i;
      while (j < n && !' \t\r\n();"'.includes(text[j])) j++;
      if (!stack.length) throw new SchemaParseError("stray token");
      stack[stack.length - 1].push({ type: "id", value: text.slice(i, j) });
      i = j;
    }
  }
  if (stack.length) throw new SchemaParseError("missing closing parenthesis");
  return forms;
}

function atomValue(item: Atom | Form | undefined, what: string): string {
  if (!item || Array.isArray(item)) throw new SchemaParseError(`expected ${what}`);
  return item.value;
}

export class SchemaModel {
  nodeKinds = new Map<string, NodeKind>();
  linkKinds = new Map<string, LinkKind>();
  private aliasMap = new Map<string, string>();

  static parse(document: string): SchemaModel {
    const model = new SchemaModel();
    for (const form of tokenizeForms(document)) {
      const head = atomValue(form[0], "form head");
      if (head === "node-kind") model.addNodeKind(form);
      else if (head === "link-kind") model.addLinkKind(form);
      else throw new SchemaParseError(`unknown schema form ${head}`);
    }
    if (model.nodeKinds.size === 0) {
      throw new SchemaUnreachableError("schema document carries no kinds");
    }
    return model;
  }

  private fields(form: Form): Map<string, Form> {
    const out = new Map<string, Form>();
    for (const item of form.slice(2)) {
      if (!Array.isArray(item)) throw new SchemaParseError("expected a field");
      out.set(atomValue(item[0], "field name"), item);
    }
    return out;
  }

  private addNodeKind(form: Form): void {
    const id = canonicalizeId(atomValue(form[1], "kind id"));
    const fields = this.fields(form);
    const nameField = fields.get("name");
    const parentField = fields.get("parent");
    this.nodeKinds.set(id, {
      id,
      name: nameField ? atomValue(nameField[1], "name") : id,
      parent: parentField ? canonicalizeId(atomValue(parentField[1], "parent")) : null,
    });
  }

  private addLinkKind(form: Form): void {
    const id = canonicalizeId(atomValue(form[1], "link id"));
    const fields = this.fields(form);
    const idList = (key: string): string[] => {
      const field = fields.get(key);
      if (!field) return [];
      return field.slice(1).map((v) => canonicalizeId(atomValue(v, key)));
    };
    const nameField = fields.get("name");
    const categoryField = fields.get("category");
    const link: LinkKind = {
      id,
      name: nameField ? atomValue(nameField[1], "name") : id,
      category: categoryField ? atomValue(categoryField[1], "category") : "non-argumentation",
      domainKinds: idList("domain"),
      rangeKinds: idList("range"),
      aliases: idList("aliases"),
      sameKind: fields.has("same-kind"),
    };
    this.linkKinds.set(id, link);
    for (const alias of link.aliases) this.aliasMap.set(alias, id);
  }

  resolveLink(nameOrAlias: string): LinkKind | null {
    const id = canonicalizeId(nameOrAlias);
    return this.linkKinds.get(this.aliasMap.get(id) ?? id) ?? null;
  }

  ancestors(kindId: string): string[] {
    const chain: string[] = [];
    let cur: string | null = kindId;
    while (cur !== null) {
      if (chain.includes(cur)) throw new SchemaParseError(`kind parent cycle at ${cur}`);
      const kind = this.nodeKinds.get(cur);
      if (!kind) throw new SchemaParseError(`unknown node kind ${cur}`);
      chain.push(cur);
      cur = kind.parent;
    }
    return chain;
  }

  /** Null when the endpoint kinds satisfy the link; else a reason string. */
  validateEdge(linkId: string, sourceKind: string, targetKind: string): string | null {
    const link = this.resolveLink(linkId);
    if (!link) return `unknown link ${linkId}`;
    const src = new Set(this.ancestors(sourceKind));
    if (!link.domainKinds.some((k) => src.has(k))) {
      return `${sourceKind} is not an allowed source for ${link.id}`;
    }
    if (targetKind === CLAIM_PSEUDO_KIND) {
      return link.rangeKinds.includes(CLAIM_PSEUDO_KIND)
        ? null
        : `${link.id} cannot target a claim`;
    }
    const tgt = new Set(this.ancestors(targetKind));
    if (!link.rangeKinds.some((k) => tgt.has(k))) {
      return `${targetKind} is not an allowed target for ${link.id}`;
    }
    if (link.sameKind) {
      const roots = new Set([ROOT_ELEMENT_KIND, ARTICLE_KIND]);
      const shared = this.ancestors(sourceKind).some(
        (k) => !roots.has(k) && tgt.has(k)
      );
      if (!shared) return `${link.id} requires source and target of the same kind`;
    }
    return null;
  }

  /** Concrete element kinds for pickers (no article, no abstract root). */
  elementKindOptions(): string[] {
    return Array.from(this.nodeKinds.keys())
      .filter((k) => k !== ARTICLE_KIND && k !== ROOT_ELEMENT_KIND)
      .sort(cmp);
  }

  /**
   * Links offered in the relation menu. `describes` is carried by the
   * article section of the form, not by relation rows.
   */
  relationLinkOptions(): string[] {
    return Array.from(this.linkKinds.keys())
      .filter((id) => id !== "describes")
      .sort(cmp);
  }

  /** Target kinds a picker may offer once a link and source kind are set. */
  targetKindOptions(linkId: string, sourceKind: string): string[] {
    return this.elementKindOptions().filter(
      (kind) => this.validateEdge(linkId, sourceKind, kind) === null
    );
  }
}
