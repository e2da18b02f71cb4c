"""Acceptance suite: one test per release criterion, one PASS line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines.
"""
from __future__ import annotations

import json
import random
import time

from claimgraph import dsl, inference, query, service
from claimgraph.cli import main as cg
from claimgraph.dsl import parse_submission, print_submission
from claimgraph.kb import Assertion, Justification, KnowledgeBase

import oracles
from conftest import ANALYSED_SYSTEMS, DEXTER, FIXTURES, random_kb
from test_inference import schools_kb, TWO_SCHOOLS
from test_query import random_queries, result_key


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = cg([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


# 1 ---------------------------------------------------------------------------


def test_reference_fixture_round_trip(tmp_path, capsys):
    started = time.perf_counter()
    data = tmp_path / "store"
    code, out = run_cli(capsys, "--data", data, "ingest", FIXTURES / "dexter.scl")
    assert code == 0

    kb = service.replay(data)
    assert len(kb.articles) == 1
    assert sum(1 for c in kb.concepts.values() if c.kind == "theory-model") == 1
    relation_claims = [
        c for c in kb.claims.values() if c.assertion.link != "describes"
    ]
    assert len(relation_claims) == 11
    by_link = {}
    for c in relation_claims:
        by_link[c.assertion.link] = by_link.get(c.assertion.link, 0) + 1
    assert by_link == {
        "addresses": 1,
        "analyses": 8,
        "predicts-envisages": 1,
        "uses-applies": 1,
    }

    code, out = run_cli(capsys, "--data", data, "query", f"claims about {DEXTER}", "--json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [(r["source"], r["link"]) for r in rows] == [
        ("dexter-htxt-ref-model-article", "describes")
    ]

    code, out = run_cli(
        capsys, "--data", data, "map", DEXTER, "--depth", "1", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    motivation = sorted(n["id"] for n in doc["nodes"] if n["side"] == "motivation")
    assert motivation == sorted(["absence-of-standards", "z", *ANALYSED_SYSTEMS])
    assert [n["id"] for n in doc["nodes"] if n["side"] == "impact"] == []

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"round trip took {elapsed:.2f}s"
    print(f"PASS criterion 1: reference fixture round trip ({elapsed*1000:.0f} ms)")


# 2 ---------------------------------------------------------------------------


def test_query_battery_on_extended_fixture(tmp_path, capsys):
    data = tmp_path / "store"
    code, _ = run_cli(
        capsys,
        "--data", data,
        "ingest", FIXTURES / "dexter.scl", FIXTURES / "dexter_extensions.scl",
    )
    assert code == 0

    code, out = run_cli(
        capsys, "--data", data, "query",
        f"find theory-model where modifies-extends {DEXTER}", "--json",
    )
    assert code == 0
    extensions = {r["id"] for r in json.loads(out)["rows"]}
    assert extensions == {"dexter-based-architecture", "cooperative-hypermedia-model"}

    code, out = run_cli(
        capsys, "--data", data, "query",
        f"find software where uses-applies {DEXTER}", "--json",
    )
    assert code == 0
    users = {r["id"] for r in json.loads(out)["rows"]}
    assert users == {"devise-hypermedia-system"}
    print("PASS criterion 2: extension-chain query battery (exact sets)")


# 3 ---------------------------------------------------------------------------


def test_inconsistent_position_rule():
    def build(support_authors, refute_authors):
        kb = KnowledgeBase()
        for cid in ("x", "w", "y", "z"):
            kb.intern_concept(cid, "idea")
        kb.assert_claim(
            support_authors, Assertion("x", "supports", "y"), Justification.text("pro"), timestamp=1
        )
        kb.assert_claim(
            refute_authors, Assertion("w", "refutes", "y"), Justification.text("con"), timestamp=2
        )
        kb.assert_claim(
            {"bystander"}, Assertion("w", "supports", "z"), Justification.text("other"), timestamp=3
        )
        return kb

    both = build({"a1", "a2"}, {"a1", "a3"})
    facts = inference.detect_inconsistent_positions(both)
    assert len(facts) == 1
    assert (facts[0].author, facts[0].subject) == ("a1", "y")

    assert inference.detect_inconsistent_positions(build({"a2"}, {"a1", "a3"})) == []
    assert inference.detect_inconsistent_positions(build({"a1", "a2"}, {"a3"})) == []
    print("PASS criterion 3: inconsistent-position rule (1 fact; 0 after author removal)")


# 4 ---------------------------------------------------------------------------


def test_school_of_thought_boundary():
    kb = schools_kb(3)
    fire = inference.evaluate_profile(kb, dsl.parse_profile(TWO_SCHOOLS))
    assert fire is not None
    hold = inference.evaluate_profile(
        kb, dsl.parse_profile(TWO_SCHOOLS.replace("min 3", "min 4"))
    )
    assert hold is None
    print("PASS criterion 4: interest profile fires at threshold 3, holds at 4")


# 5 ---------------------------------------------------------------------------


def test_oracle_equivalence_battery():
    started = time.perf_counter()
    kbs = 0
    checks = 0
    mismatches = 0
    for seed in range(200):
        rng = random.Random(seed * 7 + 1)
        kb = random_kb(rng, max_nodes=40, max_claims=120)
        kbs += 1

        for q in random_queries(kb, rng):
            got = result_key(query.execute(kb, q))
            ref = result_key(query.naive_execute(kb, q))
            checks += 1
            if got != ref:
                mismatches += 1

        inc = {(f.author, f.subject) for f in inference.detect_inconsistent_positions(kb)}
        if inc != oracles.inconsistent_pairs(kb):
            mismatches += 1
        checks += 1

        chal = {f.element: len(f.path) - 1 for f in inference.propagate_challenges(kb, 5)}
        if chal != oracles.challenged_distances(kb, 5):
            mismatches += 1
        checks += 1

        target = sorted(kb.concepts)[0]
        report = inference.compute_impact(kb, target)
        docs, domains, problems = oracles.impact_counts(kb, target)
        if (list(report.doc_ids), list(report.domain_tags), list(report.problem_ids)) != (
            docs,
            domains,
            problems,
        ):
            mismatches += 1
        checks += 1

        link = rng.choice(["supports", "challenges", "uses-applies"])
        got_docs, _ = inference._condition_matches(kb, link, target)
        if got_docs != oracles.profile_condition_docs(kb, link, target):
            mismatches += 1
        checks += 1

    elapsed = time.perf_counter() - started
    assert kbs >= 200
    assert mismatches == 0
    assert elapsed < 60.0, f"battery took {elapsed:.1f}s"
    print(
        f"PASS criterion 5: oracle equivalence on {kbs} random KBs, "
        f"{checks} checks, 0 mismatches ({elapsed:.1f} s)"
    )


# 6 ---------------------------------------------------------------------------


def _random_submission(rng: random.Random) -> dsl.Submission:
    kinds = ["idea", "problem", "software", "theory-model", "language", "methodology"]
    links = ["addresses", "uses-applies", "modifies-extends", "analyses", "supports", "refutes"]

    def ident() -> str:
        return "-".join(
            "".join(rng.choice("abcdefghijklmnopqrstuvwxyz0123456789") for _ in range(rng.randint(1, 5)))
            for _ in range(rng.randint(1, 2))
        ).lstrip("0123456789-") or "x"

    def texty() -> str:
        pool = 'abc xyz "quoted" \\slash\t tab\n line 0'
        return "".join(rng.choice(pool) for _ in range(rng.randint(0, 20)))

    elements = []
    for _ in range(rng.randint(0, 3)):
        pairs = sorted({(rng.choice(links), ident()) for _ in range(rng.randint(0, 4))})
        elements.append(
            dsl.ElementDecl(
                kind=rng.choice(kinds),
                id=ident(),
                relations=[dsl.RelationDecl(link=l, target=t) for l, t in pairs],
            )
        )
    articles = []
    for i in range(rng.randint(0, 2)):
        articles.append(
            dsl.ArticleDecl(
                id=f"art-{i}-{ident()}",
                title=texty(),
                authors=[ident() for _ in range(rng.randint(0, 2))],
                publication_details=texty(),
                url=None if rng.random() < 0.5 else texty(),
                domains=sorted({ident() for _ in range(rng.randint(0, 2))}),
                subject_codes=sorted({texty() for _ in range(rng.randint(0, 2))}),
                describes=sorted({ident() for _ in range(rng.randint(0, 2))}),
            )
        )
    claims = [
        dsl.ClaimDecl(
            authors=sorted({ident() for _ in range(rng.randint(1, 3))}),
            source=ident(),
            link=rng.choice(links),
            target=ident(),
            because=texty(),
        )
        for _ in range(rng.randint(0, 2))
    ]
    return dsl.Submission(articles=articles, elements=elements, claims=claims)


def test_parser_properties():
    started = time.perf_counter()
    rng = random.Random(424242)
    count = 0
    for _ in range(1000):
        sub = _random_submission(rng)
        printed = print_submission(sub)
        assert parse_submission(printed) == sub
        assert print_submission(parse_submission(printed)) == printed
        count += 1
    assert count == 1000

    seed_text = (FIXTURES / "dexter.scl").read_text(encoding="utf-8")
    pool = '()"\\abz-; \n\t0回'
    crashes = 0
    fuzzed = 0
    for _ in range(10_000):
        chars = list(seed_text)
        for _ in range(rng.randint(1, 4)):
            op = rng.randrange(3)
            pos = rng.randrange(len(chars)) if chars else 0
            if op == 0 and chars:
                chars[pos] = rng.choice(pool)
            elif op == 1:
                chars.insert(pos, rng.choice(pool))
            elif chars:
                del chars[pos]
        fuzzed += 1
        try:
            parse_submission("".join(chars))
        except dsl.DslError as exc:
            assert exc.line >= 1 and exc.col >= 1
        except Exception:
            crashes += 1
    assert fuzzed == 10_000
    assert crashes == 0
    elapsed = time.perf_counter() - started
    print(
        f"PASS criterion 6: 1000 print/parse round trips, 10000 fuzzed inputs, "
        f"0 crashes ({elapsed:.1f} s)"
    )


# 7 ---------------------------------------------------------------------------


def _mutation_stream(rng: random.Random, n: int):
    """n submissions over a shared id pool, some reusing earlier content."""
    kinds = ["idea", "problem", "software", "theory-model", "language"]
    links = ["addresses", "uses-applies", "modifies-extends", "analyses", "supports"]
    for i in range(n):
        elem_id = f"c-{rng.randrange(60)}"
        elem = dsl.ElementDecl(kind=rng.choice(kinds), id=elem_id)
        pairs = sorted({(rng.choice(links), f"c-{rng.randrange(60)}") for _ in range(rng.randrange(3))})
        elem.relations = [dsl.RelationDecl(link=l, target=t) for l, t in pairs]
        art = dsl.ArticleDecl(
            id=f"art-{i}",
            title=f"Entry {i}",
            authors=[f"au-{rng.randrange(9)}"],
            domains=sorted({rng.choice(["d-a", "d-b", "d-c", "d-d"])}),
            describes=[elem_id],
        )
        yield print_submission(dsl.Submission(articles=[art], elements=[elem]))


def test_determinism_and_persistence(tmp_path):
    started = time.perf_counter()
    rng = random.Random(31337)
    repo = service.Repository(
        service.ServerConfig(data_dir=str(tmp_path / "store"), lax=True)
    )
    accepted = 0
    hashes = []
    for text in _mutation_stream(rng, 500):
        report = repo.ingest_text(text, lax=True)
        accepted += bool(report.accepted)
        hashes.append(repo.kb.content_hash())
    assert accepted == 500

    rebuilt = service.replay(repo.data_dir)
    assert rebuilt.content_hash() == repo.kb.content_hash()

    # kill mid-append: cut the log anywhere inside the final record
    log_path = repo.data_dir / "events.log"
    full = log_path.read_bytes()
    records = repo.log.read()
    assert len(records) == 500
    # find the byte offset where the last record begins
    marker = f"%%record seq={records[-1].seq} ".encode()
    last_start = full.rindex(marker)
    for cut in (last_start + 1, last_start + len(marker) + 3, len(full) - 2):
        log_path.write_bytes(full[:cut])
        recovered = service.replay(repo.data_dir, allow_partial_tail=True)
        assert recovered.content_hash() == hashes[-2]
    log_path.write_bytes(full)
    assert service.replay(repo.data_dir).content_hash() == hashes[-1]
    elapsed = time.perf_counter() - started
    print(
        f"PASS criterion 7: 500-mutation replay hash match; mid-append kill "
        f"loses only the in-flight submission ({elapsed:.1f} s)"
    )
