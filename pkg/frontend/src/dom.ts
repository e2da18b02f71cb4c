/**
 * DOM wiring for the three workflows: submission form, query builder, map
 * explorer. All state lives in the pure models; this layer only renders
 * and forwards events.
 */
import { ApiClient, IngestReportJson, ResultSetJson } from "./api.js";
import { ElementRow, FormModel } from "./form.js";
import { layoutMap, MapJson, mapToSvg } from "./mapview.js";
import { QuerySelection, queryText, rowDrillTargets } from "./queries.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function option(value: string, label = value): HTMLOptionElement {
  return el("option", { value }, label);
}

export class App {
  client: ApiClient;
  form: FormModel | null = null;
  root: HTMLElement;

  constructor(client: ApiClient, root: HTMLElement) {
    this.client = client;
    this.root = root;
  }

  async start(): Promise<void> {
    let document_: string;
    try {
      document_ = await this.client.schemaDocument();
      this.form = FormModel.fromSchemaDocument(document_);
    } catch (err) {
      this.root.append(
        el("div", { class: "banner error" }, `schema unreachable: ${String(err)}`)
      );
      return;
    }
    this.renderForm();
    this.renderQueryBuilder();
    this.root.append(el("section", { id: "results" }), el("section", { id: "map" }));
  }

  private renderForm(): void {
    const form = this.form!;
    const section = el("section", { id: "submission" }, el("h2", {}, "Describe a document"));

    const citation = el("input", { placeholder: "citation id (e.g. smith-2024-article)" });
    const title = el("input", { placeholder: "title" });
    const authors = el("input", { placeholder: "authors, comma separated" });
    const details = el("input", { placeholder: "publication details" });
    const domain = el("input", { placeholder: "domain tag" });
    section.append(citation, title, authors, details, domain);

    const rows = el("div", { id: "element-rows" });
    section.append(rows);

    const addElement = el("button", {}, "Add contribution element");
    addElement.addEventListener("click", () => {
      const row = form.addElement(form.elementKindOptions()[0] ?? "idea", "");
      rows.append(this.elementRow(row));
    });
    const status = el("div", { id: "form-status" });
    const submit = el("button", {}, "Submit");
    submit.addEventListener("click", () => {
      form.article.citationId = citation.value;
      form.article.title = title.value;
      form.article.authors = authors.value.split(",").map((a) => a.trim()).filter(Boolean);
      form.article.publicationDetails = details.value;
      form.article.domains = domain.value ? [domain.value] : [];
      void this.submitForm(status);
    });
    section.append(addElement, submit, status);
    this.root.append(section);
  }

  private elementRow(row: ElementRow): HTMLElement {
    const form = this.form!;
    const kindPick = el("select", {}, ...form.elementKindOptions().map((k) => option(k)));
    kindPick.addEventListener("change", () => (row.kind = kindPick.value));
    const name = el("input", { placeholder: "element name" });
    name.addEventListener("input", () => (row.name = name.value));

    const relations = el("div", { class: "relations" });
    const addRelation = el("button", {}, "Add relationship");
    addRelation.addEventListener("click", () => {
      const linkPick = el("select", {}, ...form.relationOptions().map((l) => option(l)));
      const kindOptions = () => form.targetKindOptions(linkPick.value, row.kind);
      const targetKind = el("select", {}, ...kindOptions().map((k) => option(k)));
      linkPick.addEventListener("change", () => {
        targetKind.replaceChildren(...kindOptions().map((k) => option(k)));
        rel.link = linkPick.value;
        rel.targetKind = targetKind.value;
      });
      targetKind.addEventListener("change", () => (rel.targetKind = targetKind.value));
      const target = el("input", { placeholder: "target concept" });
      const hint = el("span", { class: "hint" });
      const rel = {
        link: linkPick.value,
        targetKind: targetKind.value ?? "",
        targetName: "",
      };
      target.addEventListener("input", () => (rel.targetName = target.value));
      target.addEventListener("change", () => {
        void this.client.conceptLookup(target.value).then((found) => {
          hint.textContent = found
            ? `reuses existing concept ${found.id} (${found.claims.length} claim(s))`
            : "new concept";
        });
      });
      row.relations.push(rel);
      relations.append(el("div", { class: "relation" }, linkPick, targetKind, target, hint));
    });
    return el("div", { class: "element" }, kindPick, name, addRelation, relations);
  }

  async submitForm(status: HTMLElement): Promise<void> {
    const form = this.form!;
    const issues = form.validate();
    if (issues.length > 0) {
      status.textContent = issues.map((i) => i.message).join("; ");
      status.className = "error";
      return;
    }
    const { status: code, report } = await this.client.submit(form.toScl());
    status.className = code === 201 ? "ok" : "error";
    status.textContent = this.reportLine(code, report);
  }

  private reportLine(code: number, report: IngestReportJson): string {
    if (code !== 201) return `rejected: ${report.errors.join("; ")}`;
    return (
      `accepted: ${report.articles} article(s), ${report.concepts} concept(s), ` +
      `${report.relation_claims} relation claim(s)`
    );
  }

  private renderQueryBuilder(): void {
    const section = el("section", { id: "query" }, el("h2", {}, "Ask the literature"));
    const variant = el(
      "select",
      {},
      ...["find", "impact", "contradictions", "applying", "perspectives", "claims-about"].map(
        (v) => option(v)
      )
    );
    const kind = el("select", {}, ...this.form!.elementKindOptions().map((k) => option(k)));
    const link = el("select", {}, ...this.form!.relationOptions().map((l) => option(l)));
    const target = el("input", { placeholder: "concept id" });
    const run = el("button", {}, "Run");
    run.addEventListener("click", () => {
      const sel = this.selection(variant.value, kind.value, link.value, target.value);
      void this.runQuery(sel);
    });
    section.append(variant, kind, link, target, run);
    this.root.append(section);
  }

  private selection(variant: string, kind: string, link: string, target: string): QuerySelection {
    switch (variant) {
      case "find":
        return { variant, kind, link, target };
      case "impact":
        return { variant, target };
      case "contradictions":
        return { variant, target };
      case "applying":
        return { variant: "applying", method: target, domains: [kind] };
      case "perspectives":
        return { variant: "perspectives", seed: target };
      default:
        return { variant: "claims-about", target };
    }
  }

  async runQuery(sel: QuerySelection): Promise<void> {
    const results = this.root.querySelector("#results")!;
    results.replaceChildren(el("h2", {}, "Results"));
    let rs: ResultSetJson;
    try {
      rs = await this.client.query(queryText(sel));
    } catch (err) {
      results.append(el("div", { class: "error" }, String(err)));
      if ((err as { error?: string }).error === "unknown-id" && "target" in sel) {
        const found = await this.client.conceptLookup((sel as { target: string }).target);
        results.append(
          el(
            "div",
            { class: "hint" },
            found ? `did you mean ${found.id}?` : "no matching concept is stored yet"
          )
        );
      }
      return;
    }
    if (rs.impact) {
      results.append(el("pre", {}, JSON.stringify(rs.impact, null, 2)));
      return;
    }
    if (rs.rows.length === 0) {
      results.append(
        el("div", { class: "empty" }, "no claims yet - be the first to submit one")
      );
      return;
    }
    for (const row of rs.rows) {
      const line = el("div", { class: "row" }, JSON.stringify(row));
      for (const id of rowDrillTargets(row)) {
        const jump = el("button", {}, `map ${id}`);
        jump.addEventListener("click", () => void this.showMap(id));
        line.append(jump);
      }
      results.append(line);
    }
  }

  async showMap(id: string): Promise<void> {
    const section = this.root.querySelector("#map")!;
    section.replaceChildren(el("h2", {}, `Concept map: ${id}`));
    try {
      const doc = JSON.parse(await this.client.conceptMap(id, 1)) as MapJson;
      const holder = el("div", {});
      holder.innerHTML = mapToSvg(layoutMap(doc));
      section.append(holder);
    } catch (err) {
      section.append(el("div", { class: "error" }, String(err)));
    }
  }
}
