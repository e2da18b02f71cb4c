from __future__ import annotations

import random
from pathlib import Path

import pytest

from claimgraph import dsl, service
from claimgraph.kb import Article, Assertion, Justification, KbError, KnowledgeBase

FIXTURES = Path(__file__).parent / "fixtures"

DEXTER = "dexter-ht-ref-model"
DEXTER_ARTICLE = "dexter-htxt-ref-model-article"
ANALYSED_SYSTEMS = (
    "augment",
    "concordia",
    "hypercard",
    "hyperties",
    "intermedia",
    "kms-zog",
    "neptune-ham",
    "notecards",
)


@pytest.fixture
def dexter_text() -> str:
    return (FIXTURES / "dexter.scl").read_text(encoding="utf-8")


@pytest.fixture
def extensions_text() -> str:
    return (FIXTURES / "dexter_extensions.scl").read_text(encoding="utf-8")


@pytest.fixture
def dexter_kb(dexter_text) -> KnowledgeBase:
    kb = KnowledgeBase()
    report = service.apply_submission(kb, dsl.parse_submission(dexter_text), timestamp=1)
    assert report.accepted
    return kb


@pytest.fixture
def extended_kb(dexter_text, extensions_text) -> KnowledgeBase:
    kb = KnowledgeBase()
    for ts, text in enumerate((dexter_text, extensions_text), start=1):
        report = service.apply_submission(kb, dsl.parse_submission(text), timestamp=ts)
        assert report.accepted
    return kb


# ---------------------------------------------------------------------------
# randomized KB construction (seeded, deterministic)

DOMAIN_POOL = ("alpha-domain", "beta-domain", "gamma-domain", "delta-domain")
AUTHOR_POOL = tuple(f"author-{i}" for i in range(8))


def random_kb(
    rng: random.Random,
    max_nodes: int = 40,
    max_claims: int = 120,
) -> KnowledgeBase:
    """Build a valid KB by attempting random mutations and discarding rejects."""
    kb = KnowledgeBase()
    kinds = [k for k in kb.schema.node_kinds if k != "article"]
    n_articles = rng.randint(0, 5)
    n_concepts = rng.randint(2, max(2, max_nodes - n_articles))
    ts = 0
    for i in range(n_concepts):
        kb.intern_concept(f"node {i}", rng.choice(kinds))
    concepts = sorted(kb.concepts)
    for i in range(n_articles):
        ts += 1
        described = rng.sample(concepts, k=rng.randint(1, min(3, len(concepts))))
        kb.add_article(
            Article(
                id=f"paper {i}",
                title=f"Paper {i}",
                authors=tuple(
                    rng.sample(AUTHOR_POOL, k=rng.randint(1, min(3, len(AUTHOR_POOL))))
                ),
                domains=tuple(rng.sample(DOMAIN_POOL, k=rng.randint(0, 2))),
                described_elements=tuple(described),
            ),
            timestamp=ts,
        )
    articles = sorted(kb.articles)
    links = sorted(kb.schema.link_kinds)
    for _ in range(max_claims):
        ts += 1
        link = rng.choice(links)
        sources = concepts + (articles if rng.random() < 0.3 else [])
        source = rng.choice(sources)
        claim_targets = sorted(kb.claims)
        if claim_targets and rng.random() < 0.15:
            target = rng.choice(claim_targets)
        else:
            target = rng.choice(concepts)
        authors = tuple(rng.sample(AUTHOR_POOL, k=rng.randint(1, 3)))
        if rng.random() < 0.5 and articles:
            justification = Justification.document(rng.choice(articles))
        else:
            justification = Justification.text(f"note {ts}")
        try:
            kb.assert_claim(
                authors,
                Assertion(source=source, link=link, target=target),
                justification,
                timestamp=ts,
            )
        except KbError:
            continue
    return kb
