/**
 * Submission form model: article fields plus element rows whose relation
 * menus are derived from the live schema. Validation mirrors the server's
 * endpoint-kind checks so a bad row blocks submission before any network
 * traffic; the serialized text is the canonical .scl byte stream.
 */
import {
  ArticleDecl,
  ElementDecl,
  EmptyNameError,
  RelationDecl,
  Submission,
  canonicalizeId,
  cmp,
  printSubmission,
} from "./scl.js";
import { SchemaModel } from "./schema.js";

export interface RelationRow {
  link: string;
  targetKind: string;
  targetName: string;
}

export interface ElementRow {
  kind: string;
  name: string;
  relations: RelationRow[];
}

export interface ArticleFields {
  citationId: string;
  title: string;
  authors: string[];
  publicationDetails: string;
  url: string | null;
  domains: string[];
  subjectCodes: string[];
}

export interface RowIssue {
  element: number;
  relation: number | null;
  message: string;
}

export function emptyArticle(): ArticleFields {
  return {
    citationId: "",
    title: "",
    authors: [],
    publicationDetails: "",
    url: null,
    domains: [],
    subjectCodes: [],
  };
}

export class FormModel {
  schema: SchemaModel;
  article: ArticleFields = emptyArticle();
  elements: ElementRow[] = [];

  constructor(schema: SchemaModel) {
    this.schema = schema;
  }

  /** Build from a GET /schema response body. */
  static fromSchemaDocument(document: string): FormModel {
    return new FormModel(SchemaModel.parse(document));
  }

  addElement(kind: string, name: string): ElementRow {
    const row: ElementRow = { kind, name, relations: [] };
    this.elements.push(row);
    return row;
  }

  addRelation(element: ElementRow, link: string, targetKind: string, targetName: string): void {
    element.relations.push({ link, targetKind, targetName });
  }

  relationOptions(): string[] {
    return this.schema.relationLinkOptions();
  }

  elementKindOptions(): string[] {
    return this.schema.elementKindOptions();
  }

  targetKindOptions(link: string, sourceKind: string): string[] {
    return this.schema.targetKindOptions(link, sourceKind);
  }

  rowIssue(element: ElementRow, row: RelationRow): string | null {
    const link = this.schema.resolveLink(row.link);
    if (!link) return `unknown link ${row.link}`;
    return this.schema.validateEdge(row.link, element.kind, row.targetKind);
  }

  /** All issues blocking submission; empty means the form may be sent. */
  validate(): RowIssue[] {
    const issues: RowIssue[] = [];
    if (!this.article.citationId.trim()) {
      issues.push({ element: -1, relation: null, message: "article needs a citation id" });
    }
    if (this.article.authors.length === 0) {
      issues.push({ element: -1, relation: null, message: "article needs at least one author" });
    }
    this.elements.forEach((elem, ei) => {
      if (!this.schema.nodeKinds.has(elem.kind)) {
        issues.push({ element: ei, relation: null, message: `unknown kind ${elem.kind}` });
        return;
      }
      try {
        canonicalizeId(elem.name);
      } catch (err) {
        if (err instanceof EmptyNameError) {
          issues.push({ element: ei, relation: null, message: "element needs a name" });
          return;
        }
        throw err;
      }
      elem.relations.forEach((row, ri) => {
        const problem = this.rowIssue(elem, row);
        if (problem !== null) {
          issues.push({ element: ei, relation: ri, message: problem });
        }
      });
    });
    return issues;
  }

  toSubmission(): Submission {
    const elements: ElementDecl[] = this.elements.map((elem) => {
      const relations: RelationDecl[] = elem.relations.map((row) => ({
        link: this.schema.resolveLink(row.link)?.id ?? row.link,
        target: canonicalizeId(row.targetName),
      }));
      relations.sort((a, b) =>
        a.link === b.link ? cmp(a.target, b.target) : cmp(a.link, b.link)
      );
      return { kind: elem.kind, id: canonicalizeId(elem.name), relations };
    });
    const article: ArticleDecl = {
      id: canonicalizeId(this.article.citationId),
      title: this.article.title,
      authors: this.article.authors.map(canonicalizeId),
      publicationDetails: this.article.publicationDetails,
      url: this.article.url,
      domains: this.article.domains.map(canonicalizeId),
      subjectCodes: [...this.article.subjectCodes],
      describes: elements.map((e) => e.id),
    };
    return { articles: [article], elements, claims: [] };
  }

  /** Canonical .scl bytes; identical to the server-side printer's output. */
  toScl(): string {
    return printSubmission(this.toSubmission());
  }
}
