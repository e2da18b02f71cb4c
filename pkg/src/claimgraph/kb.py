"""The knowledge base: interned concepts, articles, and author-attributed claims.

The claim store is append-only. Disagreement is expressed by adding
refutes / raises-issues-with claims, never by deleting anything, so many
contradictory claims about the same target coexist. Adjacency indexes are
maintained incrementally and are always rebuildable from the claim list.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

from .ids import canonicalize_id
from .schema import (
    ARTICLE_KIND,
    CLAIM_PSEUDO_KIND,
    SchemaRegistry,
    builtin_schema,
)


class KbError(Exception):
    """Base class for knowledge-base errors."""


class UnknownIdError(KbError):
    pass


class UnknownEndpointError(KbError):
    pass


class KindConflictError(KbError):
    pass


class MissingAuthorsError(KbError):
    pass


class DanglingElementError(KbError):
    pass


class DuplicateArticleError(KbError):
    pass


class SchemaViolationError(KbError):
    pass


class EmptyJustificationError(KbError):
    pass


@dataclass(frozen=True)
class Justification:
    """Either the document embodying the claim or free text standing in for one."""

    form: str  # "document" | "text"
    value: str

    @classmethod
    def document(cls, article_id: str) -> Justification:
        return cls("document", article_id)

    @classmethod
    def text(cls, body: str) -> Justification:
        return cls("text", body)


@dataclass(frozen=True)
class Assertion:
    source: str
    link: str
    target: str


@dataclass(frozen=True)
class Claim:
    id: str
    authors: tuple[str, ...]  # sorted, nonempty
    assertion: Assertion
    justification: Justification
    timestamp: int
    seq: int


@dataclass
class Concept:
    id: str
    display_name: str
    kind: str
    created_by: str


@dataclass(frozen=True)
class Article:
    id: str
    title: str
    authors: tuple[str, ...]
    publication_details: str = ""
    url: str | None = None
    domains: tuple[str, ...] = ()
    subject_codes: tuple[str, ...] = ()
    described_elements: tuple[str, ...] = ()


def claim_id(authors: tuple[str, ...], assertion: Assertion) -> str:
    """Content hash identifying a claim: the author set plus the triple."""
    payload = "|".join((*sorted(authors), assertion.source, assertion.link, assertion.target))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


class KnowledgeBase:
    def __init__(self, schema: SchemaRegistry | None = None) -> None:
        self.schema = schema if schema is not None else builtin_schema()
        self.concepts: dict[str, Concept] = {}
        self.articles: dict[str, Article] = {}
        self.claims: dict[str, Claim] = {}
        self.claim_order: list[str] = []
        self._by_source: dict[str, list[str]] = {}
        self._by_target: dict[str, list[str]] = {}
        self._by_link: dict[str, list[str]] = {}

    # -- basic lookup ------------------------------------------------------

    def exists(self, node_id: str) -> bool:
        return node_id in self.concepts or node_id in self.articles or node_id in self.claims

    def kind_of(self, node_id: str) -> str:
        """Schema kind of any id: concept kind, "article", or "claim"."""
        if node_id in self.concepts:
            return self.concepts[node_id].kind
        if node_id in self.articles:
            return ARTICLE_KIND
        if node_id in self.claims:
            return CLAIM_PSEUDO_KIND
        raise UnknownIdError(f"unknown id {node_id!r}")

    # -- mutations -----------------------------------------------------------

    def intern_concept(self, name: str, kind: str, *, created_by: str = "import:direct") -> str:
        """Return the concept id for name, creating it if needed.

        Re-interning with the same kind (or an ancestor of the stored kind)
        returns the existing concept; interning with a more specific kind
        narrows the stored kind in place. Unrelated kinds conflict.
        """
        self.schema.node_kind(kind)
        cid = canonicalize_id(name)
        if cid in self.articles:
            raise KindConflictError(f"{cid!r} already names an article")
        existing = self.concepts.get(cid)
        if existing is not None:
            if existing.kind == kind or kind in self.schema.ancestors(existing.kind):
                return cid
            if existing.kind in self.schema.ancestors(kind):
                existing.kind = kind  # refinement: unclassified node gets its declared kind
                return cid
            raise KindConflictError(
                f"{cid!r} already interned as {existing.kind!r}, not {kind!r}"
            )
        self.concepts[cid] = Concept(id=cid, display_name=name, kind=kind, created_by=created_by)
        return cid

    def add_article(self, meta: Article, *, timestamp: int = 0) -> str:
        """Store an article and record one describes claim per described element."""
        if not meta.authors:
            raise MissingAuthorsError(f"article {meta.id!r} has no authors")
        aid = canonicalize_id(meta.id)
        authors = tuple(canonicalize_id(a) for a in meta.authors)
        described = tuple(sorted(canonicalize_id(e) for e in set(meta.described_elements)))
        for elem in described:
            if elem not in self.concepts:
                raise DanglingElementError(f"article {aid!r} describes unknown element {elem!r}")
        record = replace(
            meta,
            id=aid,
            authors=authors,
            domains=tuple(sorted(set(meta.domains))),
            subject_codes=tuple(sorted(set(meta.subject_codes))),
            described_elements=described,
        )
        if aid in self.concepts:
            raise KindConflictError(f"{aid!r} already names a concept")
        existing = self.articles.get(aid)
        if existing is not None:
            if existing == record:
                return aid
            raise DuplicateArticleError(f"article {aid!r} already stored with different metadata")
        self.articles[aid] = record
        for elem in described:
            self.assert_claim(
                authors,
                Assertion(source=aid, link="describes", target=elem),
                Justification.document(aid),
                timestamp=timestamp,
            )
        return aid

    def assert_claim(
        self,
        authors,
        assertion: Assertion,
        justification: Justification,
        *,
        timestamp: int = 0,
    ) -> str:
        """Append a claim; a duplicate (authors, assertion) returns the stored id."""
        author_tuple = tuple(sorted({canonicalize_id(a) for a in authors}))
        if not author_tuple:
            raise MissingAuthorsError("a claim needs at least one author")
        if not self.exists(assertion.source) or assertion.source in self.claims:
            raise UnknownEndpointError(f"unknown claim source {assertion.source!r}")
        if not self.exists(assertion.target):
            raise UnknownEndpointError(f"unknown claim target {assertion.target!r}")
        if justification.form == "text":
            if not justification.value.strip():
                raise EmptyJustificationError(
                    "a claim without a document needs textual justification"
                )
        elif justification.value not in self.articles:
            raise UnknownEndpointError(
                f"justification document {justification.value!r} is not a stored article"
            )
        reason = self.schema.validate_edge(
            assertion.link, self.kind_of(assertion.source), self.kind_of(assertion.target)
        )
        if reason is not None:
            raise SchemaViolationError(reason)
        link_id = self.schema.resolve_link(assertion.link).id
        assertion = replace(assertion, link=link_id)
        cid = claim_id(author_tuple, assertion)
        if cid in self.claims:
            return cid
        claim = Claim(
            id=cid,
            authors=author_tuple,
            assertion=assertion,
            justification=justification,
            timestamp=timestamp,
            seq=len(self.claim_order),
        )
        self.claims[cid] = claim
        self.claim_order.append(cid)
        self._by_source.setdefault(assertion.source, []).append(cid)
        self._by_target.setdefault(assertion.target, []).append(cid)
        self._by_link.setdefault(assertion.link, []).append(cid)
        return cid

    # -- reads ---------------------------------------------------------------

    def claims_about(self, target: str) -> list[Claim]:
        """All claims whose assertion targets the given id, oldest first."""
        if not self.exists(target):
            raise UnknownIdError(f"unknown id {target!r}")
        found = [self.claims[cid] for cid in self._by_target.get(target, ())]
        return sorted(found, key=lambda c: (c.timestamp, c.seq))

    def neighbors(
        self,
        node: str,
        direction: str = "both",
        link_filter=None,
    ) -> list[tuple[str, str, str]]:
        """Adjacent (link, other, claim id) triples, sorted."""
        if not self.exists(node):
            raise UnknownIdError(f"unknown id {node!r}")
        if direction not in ("in", "out", "both"):
            raise ValueError(f"bad direction {direction!r}")
        links = set(link_filter) if link_filter is not None else None
        out: set[tuple[str, str, str]] = set()
        if direction in ("out", "both"):
            for cid in self._by_source.get(node, ()):
                claim = self.claims[cid]
                if links is None or claim.assertion.link in links:
                    out.add((claim.assertion.link, claim.assertion.target, cid))
        if direction in ("in", "both"):
            for cid in self._by_target.get(node, ()):
                claim = self.claims[cid]
                if links is None or claim.assertion.link in links:
                    out.add((claim.assertion.link, claim.assertion.source, cid))
        return sorted(out)

    # -- maintenance -----------------------------------------------------------

    def rebuild_indexes(self) -> dict[str, dict[str, list[str]]]:
        """Recompute adjacency from the claim list (index soundness checks)."""
        by_source: dict[str, list[str]] = {}
        by_target: dict[str, list[str]] = {}
        by_link: dict[str, list[str]] = {}
        for cid in self.claim_order:
            a = self.claims[cid].assertion
            by_source.setdefault(a.source, []).append(cid)
            by_target.setdefault(a.target, []).append(cid)
            by_link.setdefault(a.link, []).append(cid)
        return {"by_source": by_source, "by_target": by_target, "by_link": by_link}

    def indexes(self) -> dict[str, dict[str, list[str]]]:
        return {
            "by_source": self._by_source,
            "by_target": self._by_target,
            "by_link": self._by_link,
        }

    def copy(self) -> KnowledgeBase:
        dup = KnowledgeBase(self.schema.copy())
        dup.concepts = {cid: replace(c) for cid, c in self.concepts.items()}
        dup.articles = dict(self.articles)
        dup.claims = dict(self.claims)
        dup.claim_order = list(self.claim_order)
        dup._by_source = {k: list(v) for k, v in self._by_source.items()}
        dup._by_target = {k: list(v) for k, v in self._by_target.items()}
        dup._by_link = {k: list(v) for k, v in self._by_link.items()}
        return dup

    def content_hash(self) -> str:
        """Hash of all stored content; equal hashes mean equal knowledge bases."""
        h = hashlib.sha256()

        def feed(*parts: str) -> None:
            h.update("|".join(parts).encode("utf-8"))
            h.update(b"\n")

        for kid in sorted(self.schema.node_kinds):
            k = self.schema.node_kinds[kid]
            feed("K", k.id, k.name, k.parent or "")
        for lid in sorted(self.schema.link_kinds):
            link = self.schema.link_kinds[lid]
            feed(
                "L",
                link.id,
                link.name,
                link.category,
                ",".join(link.domain_kinds),
                ",".join(link.range_kinds),
                ",".join(link.aliases),
                str(link.same_kind),
            )
        for cid in sorted(self.concepts):
            c = self.concepts[cid]
            feed("N", c.id, c.display_name, c.kind, c.created_by)
        for aid in sorted(self.articles):
            a = self.articles[aid]
            feed(
                "A",
                a.id,
                a.title,
                ",".join(a.authors),
                a.publication_details,
                a.url or "",
                ",".join(a.domains),
                ",".join(a.subject_codes),
                ",".join(a.described_elements),
            )
        for cid in self.claim_order:
            c = self.claims[cid]
            feed(
                "C",
                c.id,
                ",".join(c.authors),
                c.assertion.source,
                c.assertion.link,
                c.assertion.target,
                c.justification.form,
                c.justification.value,
                str(c.timestamp),
            )
        return h.hexdigest()
