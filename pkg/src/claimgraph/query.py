"""Structural queries over a KB snapshot and concept-map extraction.

`execute` is the production evaluator; `naive_execute` answers the same
contract by exhaustive enumeration over the claim list with no indexes
and no shared traversal helpers. It exists so tests can require
execute == naive_execute on randomized knowledge bases.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import inference, maps
from .dsl import (
    ApplyingQuery,
    ClaimsAboutQuery,
    ContradictionsQuery,
    FindQuery,
    ImpactQuery,
    PerspectivesQuery,
    QueryAST,
    query_to_text,
)
from .kb import Claim, KnowledgeBase, UnknownIdError
from .schema import SchemaError

# Map expansion link sets. Motivation follows what the focus builds on
# (its outgoing relationships except predictions); impact follows what
# later work points at the focus with.
MOTIVATION_LINKS = frozenset(
    {
        "addresses",
        "uses-applies",
        "analyses",
        "modifies-extends",
        "sub-problem-of",
        "variation-on",
        "supports",
        "raises-issues-with",
        "refutes",
    }
)
IMPACT_LINKS = frozenset(
    {"modifies-extends", "uses-applies", "supports", "raises-issues-with", "refutes"}
)


class UnsupportedVariantError(Exception):
    pass


@dataclass
class ResultSet:
    query: QueryAST
    rows: list[dict]
    impact: inference.ImpactReport | None = None

    def to_dict(self) -> dict:
        return {
            "query": query_to_text(self.query),
            "rows": self.rows,
            "impact": self.impact.to_dict() if self.impact is not None else None,
        }


def _claim_dict(claim: Claim) -> dict:
    return {
        "claim": claim.id,
        "authors": list(claim.authors),
        "source": claim.assertion.source,
        "link": claim.assertion.link,
        "target": claim.assertion.target,
        "justification": {"form": claim.justification.form, "value": claim.justification.value},
        "timestamp": claim.timestamp,
    }


# --------------------------------------------------------------------------
# production evaluator


def execute(
    kb: KnowledgeBase,
    q: QueryAST,
    params: inference.InferenceParams | None = None,
) -> ResultSet:
    params = params if params is not None else inference.InferenceParams()
    if isinstance(q, FindQuery):
        return _execute_find(kb, q)
    if isinstance(q, ClaimsAboutQuery):
        if not kb.exists(q.target):
            raise UnknownIdError(f"unknown id {q.target!r}")
        rows = [_claim_dict(c) for c in kb.claims_about(q.target)]
        return ResultSet(query=q, rows=rows)
    if isinstance(q, ImpactQuery):
        report = inference.compute_impact(kb, q.target, weights=params.impact_weights)
        return ResultSet(query=q, rows=[], impact=report)
    if isinstance(q, ApplyingQuery):
        return _execute_applying(kb, q)
    if isinstance(q, ContradictionsQuery):
        return _execute_contradictions(kb, q)
    if isinstance(q, PerspectivesQuery):
        threshold = q.threshold if q.threshold is not None else params.perspective_threshold
        found = inference.detect_perspectives(kb, q.seed, threshold)
        rows = [
            {"authors": list(p.authors), "shared": {k: list(v) for k, v in p.shared.items()}}
            for p in found
        ]
        return ResultSet(query=q, rows=rows)
    raise UnsupportedVariantError(f"unsupported query variant {type(q).__name__}")


def _resolve_link(kb: KnowledgeBase, name: str) -> str:
    try:
        return kb.schema.resolve_link(name).id
    except SchemaError:
        raise UnknownIdError(f"unknown link {name!r}") from None


def _execute_find(kb: KnowledgeBase, q: FindQuery) -> ResultSet:
    link = _resolve_link(kb, q.link)
    if q.kind not in kb.schema.node_kinds:
        raise UnknownIdError(f"unknown kind {q.kind!r}")
    if not kb.exists(q.target):
        raise UnknownIdError(f"unknown id {q.target!r}")
    targets = {q.target}
    if not q.direct:
        targets = inference.extension_chain(kb, q.target) if q.target in kb.concepts else targets
    rows = []
    for xid in sorted(kb.concepts):
        if xid == q.target:
            continue
        if not kb.schema.is_kind(kb.concepts[xid].kind, q.kind):
            continue
        via = sorted(
            cid
            for (lnk, other, cid) in kb.neighbors(xid, "out", link_filter={link})
            if other in targets
        )
        if via:
            rows.append({"id": xid, "via": via})
    return ResultSet(query=q, rows=rows)


def _articles_applying(kb: KnowledgeBase, method: str) -> set[str]:
    """Articles with a described element that directly uses-applies the method."""
    users = {
        kb.claims[cid].assertion.source
        for cid in kb.claim_order
        if kb.claims[cid].assertion.link == "uses-applies"
        and kb.claims[cid].assertion.target == method
    }
    return {
        aid
        for aid, article in kb.articles.items()
        if any(e in users for e in article.described_elements)
    }


def _execute_applying(kb: KnowledgeBase, q: ApplyingQuery) -> ResultSet:
    if not kb.exists(q.method):
        raise UnknownIdError(f"unknown id {q.method!r}")
    applying = _articles_applying(kb, q.method)
    per_domain: list[dict] = []
    for domain in q.domains:
        found = sorted(a for a in applying if domain in kb.articles[a].domains)
        if not found:
            return ResultSet(query=q, rows=[])
        per_domain.append({"domain": domain, "articles": found})
    return ResultSet(query=q, rows=per_domain)


def _builds_on(kb: KnowledgeBase, target: str) -> set[str]:
    """Articles with a described element reaching target via use/extend edges."""
    incoming: dict[str, set[str]] = {}
    for cid in kb.claim_order:
        a = kb.claims[cid].assertion
        if a.link in inference.USE_LINKS and a.source in kb.concepts and a.target in kb.concepts:
            incoming.setdefault(a.target, set()).add(a.source)
    reaches: set[str] = set()
    frontier = [target]
    while frontier:
        node = frontier.pop()
        for src in incoming.get(node, ()):
            if src not in reaches and src != target:
                reaches.add(src)
                frontier.append(src)
    return {
        aid
        for aid, article in kb.articles.items()
        if any(e in reaches for e in article.described_elements)
    }


def _execute_contradictions(kb: KnowledgeBase, q: ContradictionsQuery) -> ResultSet:
    if not kb.exists(q.target):
        raise UnknownIdError(f"unknown id {q.target!r}")
    builders = sorted(_builds_on(kb, q.target))
    claims_of = {
        aid: [
            kb.claims[cid]
            for cid in kb.claim_order
            if kb.claims[cid].justification.form == "document"
            and kb.claims[cid].justification.value == aid
        ]
        for aid in builders
    }
    rows = []
    for i, a in enumerate(builders):
        for b in builders[i + 1 :]:
            witness: set[str] = set()
            for c1, c2 in ((x, y) for x in claims_of[a] for y in claims_of[b]):
                for refuter, refuted in ((c1, c2), (c2, c1)):
                    if refuter.assertion.link != "refutes":
                        continue
                    hit = refuter.assertion.target == refuted.id or (
                        refuted.assertion.link == "predicts-envisages"
                        and refuter.assertion.target == refuted.assertion.target
                    )
                    if hit:
                        witness.update((refuter.id, refuted.id))
            if witness:
                rows.append({"articles": [a, b], "witness": sorted(witness)})
    return ResultSet(query=q, rows=rows)


# --------------------------------------------------------------------------
# naive reference evaluator (test oracle)


def naive_execute(kb: KnowledgeBase, q: QueryAST, params=None) -> ResultSet:
    """Same contract as execute, by plain scans of the claim list."""
    params = params if params is not None else inference.InferenceParams()
    all_claims = [kb.claims[cid] for cid in kb.claim_order]

    if isinstance(q, FindQuery):
        link = _resolve_link(kb, q.link)
        if q.kind not in kb.schema.node_kinds:
            raise UnknownIdError(f"unknown kind {q.kind!r}")
        if not kb.exists(q.target):
            raise UnknownIdError(f"unknown id {q.target!r}")
        targets = {q.target}
        if not q.direct and q.target in kb.concepts:
            changed = True
            while changed:
                changed = False
                for c in all_claims:
                    if (
                        c.assertion.link == "modifies-extends"
                        and c.assertion.target in targets
                        and c.assertion.source in kb.concepts
                        and c.assertion.source not in targets
                    ):
                        targets.add(c.assertion.source)
                        changed = True
        rows = []
        for xid in sorted(kb.concepts):
            if xid == q.target or q.kind not in kb.schema.ancestors(kb.concepts[xid].kind):
                continue
            via = sorted(
                c.id
                for c in all_claims
                if c.assertion.source == xid
                and c.assertion.link == link
                and c.assertion.target in targets
            )
            if via:
                rows.append({"id": xid, "via": via})
        return ResultSet(query=q, rows=rows)

    if isinstance(q, ClaimsAboutQuery):
        if not kb.exists(q.target):
            raise UnknownIdError(f"unknown id {q.target!r}")
        found = sorted(
            (c for c in all_claims if c.assertion.target == q.target),
            key=lambda c: (c.timestamp, c.seq),
        )
        return ResultSet(query=q, rows=[_claim_dict(c) for c in found])

    if isinstance(q, ImpactQuery):
        if q.target not in kb.concepts:
            raise UnknownIdError(f"unknown concept {q.target!r}")
        chain = {q.target}
        changed = True
        while changed:
            changed = False
            for c in all_claims:
                if (
                    c.assertion.link == "modifies-extends"
                    and c.assertion.target in chain
                    and c.assertion.source in kb.concepts
                    and c.assertion.source not in chain
                ):
                    chain.add(c.assertion.source)
                    changed = True
        users = {
            c.assertion.source
            for c in all_claims
            if c.assertion.link in ("modifies-extends", "uses-applies")
            and c.assertion.target in chain
            and c.assertion.source in kb.concepts
            and c.assertion.source != q.target
        }
        docs = sorted(
            aid
            for aid, art in kb.articles.items()
            if any(e in users for e in art.described_elements)
        )
        described = {e for aid in docs for e in kb.articles[aid].described_elements if e in users}
        domains = sorted({d for aid in docs for d in kb.articles[aid].domains})
        problems = sorted(
            {
                c.assertion.target
                for c in all_claims
                if c.assertion.link == "addresses" and c.assertion.source in described
            }
        )
        report = inference.ImpactReport(
            target=q.target,
            doc_ids=tuple(docs),
            domain_tags=tuple(domains),
            problem_ids=tuple(problems),
            weights=params.impact_weights,
        )
        return ResultSet(query=q, rows=[], impact=report)

    if isinstance(q, ApplyingQuery):
        if not kb.exists(q.method):
            raise UnknownIdError(f"unknown id {q.method!r}")
        rows = []
        for domain in q.domains:
            found = []
            for aid in sorted(kb.articles):
                art = kb.articles[aid]
                if domain not in art.domains:
                    continue
                hits = any(
                    c.assertion.link == "uses-applies"
                    and c.assertion.target == q.method
                    and c.assertion.source in art.described_elements
                    for c in all_claims
                )
                if hits:
                    found.append(aid)
            if not found:
                return ResultSet(query=q, rows=[])
            rows.append({"domain": domain, "articles": found})
        return ResultSet(query=q, rows=rows)

    if isinstance(q, ContradictionsQuery):
        if not kb.exists(q.target):
            raise UnknownIdError(f"unknown id {q.target!r}")
        use_pairs = {
            (c.assertion.source, c.assertion.target)
            for c in all_claims
            if c.assertion.link in ("modifies-extends", "uses-applies")
            and c.assertion.source in kb.concepts
            and c.assertion.target in kb.concepts
        }
        reaches = {src for src, tgt in use_pairs if tgt == q.target and src != q.target}
        changed = True
        while changed:
            changed = False
            for src, tgt in use_pairs:
                if tgt in reaches and src not in reaches and src != q.target:
                    reaches.add(src)
                    changed = True
        builders = sorted(
            aid
            for aid, art in kb.articles.items()
            if any(e in reaches for e in art.described_elements)
        )
        rows = []
        for i, a in enumerate(builders):
            for b in builders[i + 1 :]:
                witness: set[str] = set()
                for c1 in all_claims:
                    if not (c1.justification.form == "document" and c1.justification.value == a):
                        continue
                    for c2 in all_claims:
                        if not (
                            c2.justification.form == "document" and c2.justification.value == b
                        ):
                            continue
                        for x, y in ((c1, c2), (c2, c1)):
                            if x.assertion.link != "refutes":
                                continue
                            if x.assertion.target == y.id or (
                                y.assertion.link == "predicts-envisages"
                                and x.assertion.target == y.assertion.target
                            ):
                                witness.update((x.id, y.id))
                if witness:
                    rows.append({"articles": [a, b], "witness": sorted(witness)})
        return ResultSet(query=q, rows=rows)

    if isinstance(q, PerspectivesQuery):
        threshold = q.threshold if q.threshold is not None else params.perspective_threshold
        found = _naive_perspectives(kb, q.seed, threshold)
        return ResultSet(query=q, rows=found)

    raise UnsupportedVariantError(f"unsupported query variant {type(q).__name__}")


def _naive_perspectives(kb: KnowledgeBase, seed: str | None, threshold: float) -> list[dict]:
    if not (0.0 < threshold <= 1.0):
        raise ValueError("similarity threshold must be in (0, 1]")
    all_claims = [kb.claims[cid] for cid in kb.claim_order]
    neighborhood = None
    if seed is not None:
        if not kb.exists(seed):
            raise UnknownIdError(f"unknown id {seed!r}")
        neighborhood = {seed}
        for c in all_claims:
            if c.assertion.source == seed:
                neighborhood.add(c.assertion.target)
            if c.assertion.target == seed:
                neighborhood.add(c.assertion.source)

    def qualifies(concept: str) -> str | None:
        if concept not in kb.concepts:
            return None
        for base in ("theory-model", "methodology", "language", "evidence"):
            if base in kb.schema.ancestors(kb.concepts[concept].kind):
                return base
        return None

    sigs: dict[str, set[str]] = {}
    for c in all_claims:
        for author in c.authors:
            sigs.setdefault(author, set())
        if c.assertion.link in ("supports", "uses-applies") and qualifies(c.assertion.target):
            if neighborhood is None or c.assertion.target in neighborhood:
                for author in c.authors:
                    sigs[author].add(c.assertion.target)

    clusters = [((a,), set(sigs[a])) for a in sorted(sigs)]
    while len(clusters) > 1:
        best_key = None
        best_pair = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                union = clusters[i][1] | clusters[j][1]
                sim = (len(clusters[i][1] & clusters[j][1]) / len(union)) if union else 0.0
                if sim < threshold:
                    continue
                key = (-sim, (clusters[i][0][0], clusters[j][0][0]))
                if best_key is None or key < best_key:
                    best_key = key
                    best_pair = (i, j)
        if best_pair is None:
            break
        i, j = best_pair
        merged = (
            tuple(sorted(clusters[i][0] + clusters[j][0])),
            clusters[i][1] | clusters[j][1],
        )
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0][0])

    rows = []
    for members, _ in sorted(clusters, key=lambda c: c[0][0]):
        shared = None
        for m in members:
            shared = set(sigs[m]) if shared is None else shared & sigs[m]
        grouped: dict[str, list[str]] = {}
        for concept in sorted(shared or ()):
            base = qualifies(concept)
            if base:
                grouped.setdefault(base, []).append(concept)
        rows.append({"authors": list(members), "shared": {k: v for k, v in sorted(grouped.items())}})
    return rows


# --------------------------------------------------------------------------
# concept maps


def extract_concept_map(
    kb: KnowledgeBase,
    focus: str,
    depth: int,
    include_inferred: bool = False,
    params: inference.InferenceParams | None = None,
) -> maps.ConceptMap:
    """Focus-centered subgraph: what it builds on, and what built on it.

    Motivation nodes are found by walking the focus's outgoing
    relationship edges (addresses, uses-applies, analyses, ...); impact
    nodes by walking edges that point at the focus (modifies-extends,
    uses-applies, argumentation). Nodes reachable both ways count as
    motivation. Only concepts appear; inferred may-be-challenged edges are
    added when asked for and both endpoints are already on the map.
    """
    if focus not in kb.concepts:
        raise UnknownIdError(f"unknown concept {focus!r}")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    params = params if params is not None else inference.InferenceParams()

    def expand(frontier: set[str], outgoing: bool, links: frozenset[str]) -> set[str]:
        found: set[str] = set()
        for node in frontier:
            direction = "out" if outgoing else "in"
            for lnk, other, _cid in kb.neighbors(node, direction, link_filter=links):
                if other in kb.concepts:
                    found.add(other)
        return found

    motivation: set[str] = set()
    frontier = {focus}
    for _ in range(depth):
        frontier = expand(frontier, True, MOTIVATION_LINKS) - motivation - {focus}
        if not frontier:
            break
        motivation |= frontier

    # impact traversal runs over the full reverse graph; the motivation-wins
    # rule only affects the final side label, not reachability
    impact_seen: set[str] = set()
    frontier = {focus}
    for _ in range(depth):
        frontier = expand(frontier, False, IMPACT_LINKS) - impact_seen - {focus}
        if not frontier:
            break
        impact_seen |= frontier
    impact = impact_seen - motivation

    node_ids = {focus} | motivation | impact
    nodes = [maps.MapNode(id=focus, kind=kb.concepts[focus].kind, side=maps.SIDE_FOCUS)]
    nodes += [
        maps.MapNode(id=n, kind=kb.concepts[n].kind, side=maps.SIDE_MOTIVATION)
        for n in motivation
    ]
    nodes += [maps.MapNode(id=n, kind=kb.concepts[n].kind, side=maps.SIDE_IMPACT) for n in impact]

    edges = []
    for cid in kb.claim_order:
        a = kb.claims[cid].assertion
        if a.source in node_ids and a.target in node_ids:
            edges.append(maps.MapEdge(a.source, a.link, a.target, maps.STATUS_ASSERTED, cid))

    if include_inferred:
        facts = inference.propagate_challenges(
            kb,
            params.max_depth,
            via_modifies_extends=params.challenge_via_modifies_extends,
            via_uses_applies=params.challenge_via_uses_applies,
        )
        for fact in facts:
            parent = fact.path[-2]
            if fact.element in node_ids and parent in node_ids:
                edges.append(
                    maps.MapEdge(
                        parent,
                        "may-be-challenged",
                        fact.element,
                        maps.STATUS_INFERRED,
                        fact.provenance[0],
                    )
                )

    return maps.normalized(focus, nodes, edges)


# Re-exported here because map export is part of this module's surface.
export_map = maps.export_map
import_map = maps.map_from_json
