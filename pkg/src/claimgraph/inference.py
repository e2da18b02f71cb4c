"""Forward-chaining rule services over a knowledge-base snapshot.

Every operation here is read-only: inferred facts live in the returned
values, never in the claim store, and recomputing from the same snapshot
reproduces the identical fact list (outputs are sorted by canonical id).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import maps
from .kb import Claim, KnowledgeBase, UnknownIdError
from .schema import CHALLENGE_LINKS

USE_LINKS = ("modifies-extends", "uses-applies")
SIGNATURE_BASE_KINDS = ("theory-model", "methodology", "language", "evidence")
SIGNATURE_CLAIM_LINKS = ("supports", "uses-applies")


@dataclass(frozen=True)
class InferenceParams:
    max_depth: int = 5
    impact_weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    perspective_threshold: float = 0.5
    challenge_via_modifies_extends: bool = True
    challenge_via_uses_applies: bool = True


@dataclass(frozen=True)
class InconsistentPosition:
    """An author appears in both a supporting and a refuting claim for the same target."""

    author: str
    subject: str
    provenance: tuple[str, ...]


@dataclass(frozen=True)
class MayBeChallenged:
    """Element that builds on a challenged element; path runs seed -> element."""

    element: str
    path: tuple[str, ...]
    provenance: tuple[str, ...]


@dataclass
class Perspective:
    authors: tuple[str, ...]
    shared: dict[str, tuple[str, ...]]
    provenance: tuple[str, ...]


@dataclass(frozen=True)
class SchoolOfThought:
    clusters: tuple[tuple[str, tuple[str, ...]], ...]  # (target, doc ids) per condition
    provenance: tuple[str, ...]


@dataclass
class ImpactReport:
    target: str
    doc_ids: tuple[str, ...]
    domain_tags: tuple[str, ...]
    problem_ids: tuple[str, ...]
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    @property
    def domain_count(self) -> int:
        return len(self.domain_tags)

    @property
    def problem_count(self) -> int:
        return len(self.problem_ids)

    @property
    def scalar(self) -> float:
        w1, w2, w3 = self.weights
        return w1 * self.doc_count + w2 * self.domain_count + w3 * self.problem_count

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "docs": {"count": self.doc_count, "ids": list(self.doc_ids)},
            "domains": {"count": self.domain_count, "tags": list(self.domain_tags)},
            "problems": {"count": self.problem_count, "ids": list(self.problem_ids)},
            "weights": list(self.weights),
            "scalar": self.scalar,
        }


@dataclass(frozen=True)
class ProfileCondition:
    link: str  # schema link id or the pseudo-link "challenges"
    target: str  # concept id or "?var"
    min_count: int


@dataclass(frozen=True)
class InterestProfile:
    id: str
    conditions: tuple[ProfileCondition, ...]

    def __post_init__(self) -> None:
        if not self.conditions:
            raise ValueError("a profile needs at least one condition")
        if any(c.min_count < 1 for c in self.conditions):
            raise ValueError("profile thresholds must be positive")


@dataclass
class ProfileAlert:
    profile_id: str
    matched: tuple[tuple[str, tuple[str, ...]], ...]  # (bound target, doc ids) per condition
    map: maps.ConceptMap
    fact: SchoolOfThought


# --------------------------------------------------------------------------
# rule: inconsistent positions


def detect_inconsistent_positions(kb: KnowledgeBase) -> list[InconsistentPosition]:
    supports: dict[str, list[Claim]] = {}
    refutes: dict[str, list[Claim]] = {}
    for cid in kb.claim_order:
        claim = kb.claims[cid]
        if claim.assertion.link == "supports":
            supports.setdefault(claim.assertion.target, []).append(claim)
        elif claim.assertion.link == "refutes":
            refutes.setdefault(claim.assertion.target, []).append(claim)
    facts: dict[tuple[str, str], set[str]] = {}
    for target in supports.keys() & refutes.keys():
        for sup in supports[target]:
            for ref in refutes[target]:
                for author in set(sup.authors) & set(ref.authors):
                    facts.setdefault((author, target), set()).update((sup.id, ref.id))
    return [
        InconsistentPosition(author=a, subject=t, provenance=tuple(sorted(prov)))
        for (a, t), prov in sorted(facts.items())
    ]


# --------------------------------------------------------------------------
# rule: challenge propagation


def _challenge_seeds(kb: KnowledgeBase) -> dict[str, list[str]]:
    """Concepts directly targeted by a refutes / raises-issues-with claim."""
    seeds: dict[str, list[str]] = {}
    for cid in kb.claim_order:
        claim = kb.claims[cid]
        if claim.assertion.link in CHALLENGE_LINKS and claim.assertion.target in kb.concepts:
            seeds.setdefault(claim.assertion.target, []).append(cid)
    return seeds


def propagate_challenges(
    kb: KnowledgeBase,
    max_depth: int = 5,
    *,
    via_modifies_extends: bool = True,
    via_uses_applies: bool = True,
) -> list[MayBeChallenged]:
    """Fixpoint along reversed modifies-extends / uses-applies edges.

    Seeds are the directly challenged elements; an element drawing on a
    challenged one (up to max_depth hops) may be challenged too. Facts
    carry the shortest witnessing path and never touch asserted claims.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    links = set()
    if via_modifies_extends:
        links.add("modifies-extends")
    if via_uses_applies:
        links.add("uses-applies")
    seeds = _challenge_seeds(kb)
    reverse: dict[str, list[tuple[str, str]]] = {}
    for cid in kb.claim_order:
        a = kb.claims[cid].assertion
        if a.link in links and a.source in kb.concepts and a.target in kb.concepts:
            reverse.setdefault(a.target, []).append((a.source, cid))

    # breadth-first from all seeds at once; sorted expansion keeps the
    # discovered parent (and therefore the witnessing path) deterministic.
    best: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {}
    frontier: list[str] = sorted(seeds)
    paths: dict[str, tuple[str, ...]] = {s: (s,) for s in frontier}
    provs: dict[str, tuple[str, ...]] = {s: tuple(sorted(seeds[s])) for s in frontier}
    visited: set[str] = set(frontier)
    for _ in range(max_depth):
        next_frontier: list[str] = []
        for node in frontier:
            for src, cid in sorted(reverse.get(node, ())):
                if src in visited:
                    continue
                visited.add(src)
                paths[src] = paths[node] + (src,)
                provs[src] = provs[node] + (cid,)
                if src not in seeds:
                    best[src] = (paths[src], provs[src])
                next_frontier.append(src)
        if not next_frontier:
            break
        frontier = sorted(set(next_frontier))
    return [
        MayBeChallenged(element=e, path=path, provenance=tuple(sorted(set(prov))))
        for e, (path, prov) in sorted(best.items())
    ]


# --------------------------------------------------------------------------
# rule: impact


def extension_chain(kb: KnowledgeBase, target: str) -> set[str]:
    """target plus every concept with a modifies-extends path down to it."""
    chain = {target}
    queue = deque([target])
    incoming: dict[str, list[str]] = {}
    for cid in kb.claim_order:
        a = kb.claims[cid].assertion
        if a.link == "modifies-extends" and a.source in kb.concepts:
            incoming.setdefault(a.target, []).append(a.source)
    while queue:
        node = queue.popleft()
        for src in incoming.get(node, ()):
            if src not in chain:
                chain.add(src)
                queue.append(src)
    return chain


def compute_impact(
    kb: KnowledgeBase,
    target: str,
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> ImpactReport:
    """Documents drawing on the target, the domains they span, and the problems they address.

    Use is counted through modifies-extends chains: a document whose
    element applies an extension of the target still draws on the target.
    """
    if target not in kb.concepts:
        raise UnknownIdError(f"unknown concept {target!r}")
    chain = extension_chain(kb, target)
    users: set[str] = set()
    for cid in kb.claim_order:
        a = kb.claims[cid].assertion
        if a.link in USE_LINKS and a.target in chain and a.source in kb.concepts:
            if a.source != target:
                users.add(a.source)
    doc_ids = sorted(
        aid
        for aid, article in kb.articles.items()
        if any(e in users for e in article.described_elements)
    )
    described_users = {
        e for aid in doc_ids for e in kb.articles[aid].described_elements if e in users
    }
    domain_tags = sorted({d for aid in doc_ids for d in kb.articles[aid].domains})
    problem_ids = sorted(
        {
            kb.claims[cid].assertion.target
            for cid in kb.claim_order
            if kb.claims[cid].assertion.link == "addresses"
            and kb.claims[cid].assertion.source in described_users
        }
    )
    return ImpactReport(
        target=target,
        doc_ids=tuple(doc_ids),
        domain_tags=tuple(domain_tags),
        problem_ids=tuple(problem_ids),
        weights=weights,
    )


# --------------------------------------------------------------------------
# rule: interest profiles


def _condition_links(kb: KnowledgeBase, link: str) -> set[str]:
    if link == "challenges":
        return set(CHALLENGE_LINKS)
    return {kb.schema.resolve_link(link).id}


def _condition_matches(
    kb: KnowledgeBase, link: str, target: str
) -> tuple[set[str], set[str]]:
    """(documents, claim ids) matching one bound profile condition.

    A document counts when one of its claims (justified by it, or sourced
    at the article itself) bears the link toward the target or anything
    extending the target.
    """
    links = _condition_links(kb, link)
    tset = extension_chain(kb, target) if target in kb.concepts else {target}
    docs: set[str] = set()
    witnesses: set[str] = set()
    for cid in kb.claim_order:
        claim = kb.claims[cid]
        if claim.assertion.link not in links or claim.assertion.target not in tset:
            continue
        doc = None
        if claim.justification.form == "document":
            doc = claim.justification.value
        elif claim.assertion.source in kb.articles:
            doc = claim.assertion.source
        if doc is not None:
            docs.add(doc)
            witnesses.add(cid)
    return docs, witnesses


def evaluate_profile(kb: KnowledgeBase, profile: InterestProfile) -> ProfileAlert | None:
    """Fire when every condition reaches its distinct-document threshold."""
    variables = sorted(
        {c.target for c in profile.conditions if c.target.startswith("?")}
    )
    candidates = sorted(kb.concepts)

    def check(binding: dict[str, str]):
        matched = []
        witnesses: set[str] = set()
        for cond in profile.conditions:
            target = binding.get(cond.target, cond.target)
            docs, claims = _condition_matches(kb, cond.link, target)
            if len(docs) < cond.min_count:
                return None
            matched.append((target, tuple(sorted(docs))))
            witnesses |= claims
        return matched, witnesses

    solutions: list[tuple[list, set[str]]] = []
    if not variables:
        result = check({})
        if result:
            solutions.append(result)
    else:
        bindings = [{}]
        for var in variables:
            bindings = [dict(b, **{var: c}) for b in bindings for c in candidates]
        for binding in bindings:
            result = check(binding)
            if result:
                solutions.append(result)
    if not solutions:
        return None

    matched: dict[tuple[str, tuple[str, ...]], None] = {}
    witnesses: set[str] = set()
    for sol_matched, sol_claims in solutions:
        for entry in sol_matched:
            matched.setdefault(entry)
        witnesses |= sol_claims
    matched_tuple = tuple(matched)
    alert_map = _alert_map(kb, matched_tuple, witnesses)
    fact = SchoolOfThought(clusters=matched_tuple, provenance=tuple(sorted(witnesses)))
    return ProfileAlert(
        profile_id=profile.id, matched=matched_tuple, map=alert_map, fact=fact
    )


def _alert_map(kb, matched, witnesses) -> maps.ConceptMap:
    focus = matched[0][0]
    node_ids: set[str] = set()
    edges: list[maps.MapEdge] = []
    for cid in sorted(witnesses):
        a = kb.claims[cid].assertion
        for endpoint in (a.source, a.target):
            if endpoint in kb.concepts:
                node_ids.add(endpoint)
        if a.source in kb.concepts and a.target in kb.concepts:
            edges.append(
                maps.MapEdge(a.source, a.link, a.target, maps.STATUS_ASSERTED, cid)
            )
    node_ids.add(focus)
    points_at_focus = {e.source for e in edges if e.target == focus}
    nodes = []
    for nid in node_ids:
        if nid == focus:
            side = maps.SIDE_FOCUS
        elif nid in points_at_focus:
            side = maps.SIDE_IMPACT
        else:
            side = maps.SIDE_MOTIVATION
        nodes.append(maps.MapNode(id=nid, kind=kb.kind_of(nid), side=side))
    return maps.normalized(focus, nodes, edges)


# --------------------------------------------------------------------------
# rule: perspectives


def _signature_kind(kb: KnowledgeBase, concept_id: str) -> str | None:
    ancestors = kb.schema.ancestors(kb.concepts[concept_id].kind)
    for base in SIGNATURE_BASE_KINDS:
        if base in ancestors:
            return base
    return None


def detect_perspectives(
    kb: KnowledgeBase,
    seed_problem: str | None = None,
    similarity_threshold: float = 0.5,
) -> list[Perspective]:
    """Group authors by the theory/method/language/evidence base they share.

    Per-author signatures collect the qualifying concepts they support or
    use-apply; greedy agglomerative merging joins clusters while the best
    Jaccard similarity stays at or above the threshold. Ties break on the
    lexicographically smallest member pair.
    """
    if not (0.0 < similarity_threshold <= 1.0):
        raise ValueError("similarity threshold must be in (0, 1]")
    neighborhood: set[str] | None = None
    if seed_problem is not None:
        if not kb.exists(seed_problem):
            raise UnknownIdError(f"unknown id {seed_problem!r}")
        neighborhood = {seed_problem}
        for cid in kb.claim_order:
            a = kb.claims[cid].assertion
            if a.source == seed_problem:
                neighborhood.add(a.target)
            if a.target == seed_problem:
                neighborhood.add(a.source)

    signatures: dict[str, set[str]] = {}
    provenance: dict[str, set[str]] = {}
    for cid in kb.claim_order:
        claim = kb.claims[cid]
        for author in claim.authors:
            signatures.setdefault(author, set())
            provenance.setdefault(author, set()).add(cid)
        a = claim.assertion
        if a.link not in SIGNATURE_CLAIM_LINKS or a.target not in kb.concepts:
            continue
        if neighborhood is not None and a.target not in neighborhood:
            continue
        if _signature_kind(kb, a.target) is None:
            continue
        for author in claim.authors:
            signatures[author].add(a.target)

    clusters: list[tuple[tuple[str, ...], set[str]]] = [
        ((author,), set(signatures[author])) for author in sorted(signatures)
    ]

    def jaccard(x: set[str], y: set[str]) -> float:
        union = x | y
        if not union:
            return 0.0
        return len(x & y) / len(union)

    while len(clusters) > 1:
        best: tuple[float, tuple[str, str]] | None = None
        best_pair: tuple[int, int] | None = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                sim = jaccard(clusters[i][1], clusters[j][1])
                if sim < similarity_threshold:
                    continue
                key = (-sim, (clusters[i][0][0], clusters[j][0][0]))
                if best is None or key < best:
                    best = key
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

    out: list[Perspective] = []
    for members, _ in sorted(clusters, key=lambda c: c[0][0]):
        shared_all: set[str] | None = None
        for member in members:
            sig = signatures[member]
            shared_all = set(sig) if shared_all is None else shared_all & sig
        shared_all = shared_all or set()
        grouped: dict[str, list[str]] = {}
        for concept in sorted(shared_all):
            base = _signature_kind(kb, concept)
            if base is not None:
                grouped.setdefault(base, []).append(concept)
        prov = sorted(set().union(*(provenance[m] for m in members)))
        out.append(
            Perspective(
                authors=members,
                shared={k: tuple(v) for k, v in sorted(grouped.items())},
                provenance=tuple(prov),
            )
        )
    return out
