"""Registry of node kinds and link kinds with endpoint constraints.

Nodes are contribution elements (ideas, problems, software, ...) or
articles; links are the typed relationships between them, split into
argumentation links and non-argumentation links. Communities extend the
scheme by registering specialized node kinds: a link that admits a kind
also admits every kind descending from it.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ids import canonicalize_id

# Pseudo-targets and roots. The element root is a real, registered kind so
# unclassified concepts can be interned under it; "claim" never is.
ROOT_ELEMENT_KIND = "scholarly-contribution-element"
ARTICLE_KIND = "article"
CLAIM_PSEUDO_KIND = "claim"

ARGUMENTATION = "argumentation"
NON_ARGUMENTATION = "non-argumentation"


class SchemaError(Exception):
    """Base class for registry errors."""


class DuplicateKindError(SchemaError):
    pass


class UnknownParentError(SchemaError):
    pass


class UnknownKindError(SchemaError):
    pass


class UnknownLinkError(SchemaError):
    pass


@dataclass(frozen=True)
class NodeKind:
    id: str
    name: str
    parent: str | None = None


@dataclass(frozen=True)
class LinkKind:
    id: str
    name: str
    category: str
    # Declared order matters: the first concrete range kind doubles as the
    # default kind for targets that were never declared as elements.
    domain_kinds: tuple[str, ...]
    range_kinds: tuple[str, ...]
    aliases: tuple[str, ...] = ()
    same_kind: bool = False


class SchemaRegistry:
    """Mutable registry; every mutation bumps a monotone version.

    Readers that need a stable view take a `.copy()` and keep it; the copy
    never changes underneath them.
    """

    def __init__(self) -> None:
        self.node_kinds: dict[str, NodeKind] = {}
        self.link_kinds: dict[str, LinkKind] = {}
        self.version = 0
        self._alias_map: dict[str, str] = {}

    # -- construction ----------------------------------------------------

    def register_node_kind(self, name: str, parent: str | None = None) -> str:
        kid = canonicalize_id(name)
        if kid in self.node_kinds:
            raise DuplicateKindError(f"node kind {kid!r} already registered")
        if parent is None and kid not in (ROOT_ELEMENT_KIND, ARTICLE_KIND):
            parent = ROOT_ELEMENT_KIND
        if parent is not None and parent not in self.node_kinds:
            raise UnknownParentError(f"unknown parent kind {parent!r}")
        self.node_kinds[kid] = NodeKind(id=kid, name=name, parent=parent)
        self.version += 1
        return kid

    def register_link_kind(
        self,
        name: str,
        *,
        category: str = NON_ARGUMENTATION,
        domain_kinds: tuple[str, ...],
        range_kinds: tuple[str, ...],
        aliases: tuple[str, ...] = (),
        same_kind: bool = False,
    ) -> str:
        lid = canonicalize_id(name)
        if lid in self.link_kinds or lid in self._alias_map:
            raise DuplicateKindError(f"link kind {lid!r} already registered")
        if not domain_kinds or not range_kinds:
            raise SchemaError(f"link kind {lid!r} needs nonempty domain and range")
        for kid in (*domain_kinds, *range_kinds):
            if kid == CLAIM_PSEUDO_KIND:
                continue
            if kid not in self.node_kinds:
                raise UnknownKindError(f"link kind {lid!r} references unknown kind {kid!r}")
        canon_aliases = tuple(canonicalize_id(a) for a in aliases)
        link = LinkKind(
            id=lid,
            name=name,
            category=category,
            domain_kinds=tuple(domain_kinds),
            range_kinds=tuple(range_kinds),
            aliases=canon_aliases,
            same_kind=same_kind,
        )
        self.link_kinds[lid] = link
        for alias in canon_aliases:
            if alias in self.link_kinds or alias in self._alias_map:
                raise DuplicateKindError(f"alias {alias!r} collides with an existing link")
            self._alias_map[alias] = lid
        self.version += 1
        return lid

    def copy(self) -> SchemaRegistry:
        dup = SchemaRegistry()
        dup.node_kinds = dict(self.node_kinds)
        dup.link_kinds = dict(self.link_kinds)
        dup._alias_map = dict(self._alias_map)
        dup.version = self.version
        return dup

    # -- lookup ----------------------------------------------------------

    def node_kind(self, kind_id: str) -> NodeKind:
        try:
            return self.node_kinds[kind_id]
        except KeyError:
            raise UnknownKindError(f"unknown node kind {kind_id!r}") from None

    def resolve_link(self, name_or_alias: str) -> LinkKind:
        lid = canonicalize_id(name_or_alias)
        lid = self._alias_map.get(lid, lid)
        try:
            return self.link_kinds[lid]
        except KeyError:
            raise UnknownLinkError(f"unknown link kind {name_or_alias!r}") from None

    def ancestors(self, kind_id: str) -> tuple[str, ...]:
        """Kind id followed by its parent chain up to its root."""
        chain: list[str] = []
        cur: str | None = kind_id
        while cur is not None:
            if cur in chain:
                raise SchemaError(f"kind parent cycle at {cur!r}")
            chain.append(cur)
            cur = self.node_kind(cur).parent
        return tuple(chain)

    def is_kind(self, kind_id: str, base: str) -> bool:
        """True iff kind_id is base or descends from it."""
        return base in self.ancestors(kind_id)

    # -- validation ------------------------------------------------------

    def validate_edge(self, link_id: str, source_kind: str, target_kind: str) -> str | None:
        """None when the endpoint kinds satisfy the link, else a reason.

        Unknown link or kind ids raise; a constraint miss is a value, not
        an error, so callers can report it alongside positions.
        """
        link = self.resolve_link(link_id)
        src_anc = set(self.ancestors(source_kind))
        if not src_anc & set(link.domain_kinds):
            return f"{source_kind} is not an allowed source for {link.id}"
        if target_kind == CLAIM_PSEUDO_KIND:
            if CLAIM_PSEUDO_KIND not in link.range_kinds:
                return f"{link.id} cannot target a claim"
            return None
        tgt_anc = set(self.ancestors(target_kind))
        if not tgt_anc & set(link.range_kinds):
            return f"{target_kind} is not an allowed target for {link.id}"
        if link.same_kind:
            roots = {ROOT_ELEMENT_KIND, ARTICLE_KIND}
            if not (src_anc - roots) & (tgt_anc - roots):
                return f"{link.id} requires source and target of the same kind"
        return None

    def infer_target_kind(self, link_id: str, source_kind: str) -> str:
        """Default kind for a relation target that was never declared."""
        link = self.resolve_link(link_id)
        if link.same_kind:
            return source_kind
        for kid in link.range_kinds:
            if kid != CLAIM_PSEUDO_KIND:
                return kid
        return ROOT_ELEMENT_KIND

    def structurally_equal(self, other: SchemaRegistry) -> bool:
        return (
            self.node_kinds == other.node_kinds
            and self.link_kinds == other.link_kinds
        )


ARGUMENTATION_LINKS = ("supports", "raises-issues-with", "refutes")
CHALLENGE_LINKS = ("refutes", "raises-issues-with")

_ELEMENT_KINDS = (
    "Idea",
    "Problem",
    "Theory/Model",
    "Methodology",
    "Software",
    "Language",
    "Evidence",
    "Phenomenon",
)


def builtin_schema() -> SchemaRegistry:
    """The built-in scheme: 10 node kinds (incl. the element root) and 11 links."""
    reg = SchemaRegistry()
    reg.register_node_kind("Scholarly Contribution Element")
    for name in _ELEMENT_KINDS:
        reg.register_node_kind(name, parent=ROOT_ELEMENT_KIND)
    reg.register_node_kind("Article")

    root = ROOT_ELEMENT_KIND
    any_element = (root,)
    reg.register_link_kind(
        "Addresses", domain_kinds=any_element, range_kinds=("problem",)
    )
    reg.register_link_kind(
        "Uses/Applies", domain_kinds=any_element, range_kinds=any_element
    )
    reg.register_link_kind(
        "Modifies/Extends",
        domain_kinds=any_element,
        range_kinds=any_element,
        same_kind=True,
    )
    reg.register_link_kind(
        "Analyses", domain_kinds=any_element, range_kinds=any_element
    )
    reg.register_link_kind(
        "Predicts/Envisages",
        domain_kinds=any_element,
        range_kinds=("software", "phenomenon", "idea"),
        aliases=("predicts", "envisages"),
    )
    arg_domain = (root, ARTICLE_KIND)
    arg_range = (root, CLAIM_PSEUDO_KIND)
    reg.register_link_kind(
        "Supports", category=ARGUMENTATION, domain_kinds=arg_domain, range_kinds=arg_range
    )
    reg.register_link_kind(
        "Raises Issues With",
        category=ARGUMENTATION,
        domain_kinds=arg_domain,
        range_kinds=arg_range,
    )
    reg.register_link_kind(
        "Refutes", category=ARGUMENTATION, domain_kinds=arg_domain, range_kinds=arg_range
    )
    reg.register_link_kind(
        "Describes", domain_kinds=(ARTICLE_KIND,), range_kinds=any_element
    )
    reg.register_link_kind(
        "Sub-Problem Of", domain_kinds=("problem",), range_kinds=("problem",)
    )
    reg.register_link_kind(
        "Variation On",
        domain_kinds=any_element,
        range_kinds=any_element,
        same_kind=True,
    )
    return reg
