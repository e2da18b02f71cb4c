"""Persistence and the submission pipeline.

The store is an append-only event log of raw .scl submissions. Replaying
the log on an empty knowledge base reproduces the live one bit for bit
(claim timestamps are the record sequence numbers, so replay is fully
deterministic). Each submission is applied to a copy of the KB first and
committed only after the log append succeeds, which makes ingest atomic
per submission and the log valid by construction.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import dsl
from .inference import InferenceParams, InterestProfile, ProfileAlert, evaluate_profile
from .kb import Article, Assertion, Justification, KbError, KnowledgeBase
from .schema import SchemaRegistry, builtin_schema

LOG_FILE = "events.log"
PROFILES_FILE = "profiles.scl"
SCHEMA_FILE = "schema.scl"


class ServiceError(Exception):
    pass


class CorruptRecordError(ServiceError):
    def __init__(self, seq: int, reason: str) -> None:
        super().__init__(f"corrupt record {seq}: {reason}")
        self.seq = seq
        self.reason = reason


@dataclass(frozen=True)
class EventRecord:
    seq: int
    timestamp: int
    source: str
    lax: bool
    text: str


@dataclass
class IngestError:
    message: str
    line: int = 0
    col: int = 0

    def __str__(self) -> str:
        if self.line:
            return f"{self.line}:{self.col}: {self.message}"
        return self.message


@dataclass
class IngestReport:
    accepted: bool = True
    articles: int = 0
    concepts: int = 0
    external_concepts: int = 0
    relation_claims: int = 0
    describes_claims: int = 0
    standalone_claims: int = 0
    errors: list[IngestError] = field(default_factory=list)
    skipped: list[IngestError] = field(default_factory=list)

    @property
    def claims(self) -> int:
        return self.relation_claims + self.describes_claims + self.standalone_claims

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "articles": self.articles,
            "concepts": self.concepts,
            "external_concepts": self.external_concepts,
            "relation_claims": self.relation_claims,
            "describes_claims": self.describes_claims,
            "standalone_claims": self.standalone_claims,
            "errors": [str(e) for e in self.errors],
            "skipped": [str(e) for e in self.skipped],
        }

    def summary(self) -> str:
        if not self.accepted:
            lines = ["rejected"] + [f"  error: {e}" for e in self.errors]
            return "\n".join(lines)
        parts = (
            f"{self.articles} article(s), {self.concepts} concept(s), "
            f"{self.external_concepts} external concept(s), "
            f"{self.relation_claims} relation claim(s), "
            f"{self.describes_claims} describes claim(s), "
            f"{self.standalone_claims} standalone claim(s)"
        )
        lines = ["accepted: " + parts]
        lines += [f"  skipped: {e}" for e in self.skipped]
        return "\n".join(lines)


# --------------------------------------------------------------------------
# applying a parsed submission to a KB


def apply_submission(
    kb: KnowledgeBase,
    sub: dsl.Submission,
    *,
    timestamp: int,
    source_tag: str = "direct",
    lax: bool = False,
) -> IngestReport:
    """Mutates kb; callers wanting atomicity pass a copy and commit on success.

    Strict mode raises on the first violation. Lax mode skips the broken
    assertion (or element) and reports it, keeping the rest.
    """
    report = IngestReport()
    created_marker = f"import:{source_tag}"
    concepts_at_entry = len(kb.concepts)

    def fail(exc: Exception, line: int = 0, col: int = 0) -> None:
        err = IngestError(str(exc), line, col)
        if lax and isinstance(exc, KbError):
            report.skipped.append(err)
        else:
            report.errors.append(err)
            report.accepted = False
            raise IngestAbort() from exc

    class IngestAbort(Exception):
        pass

    dead_elements: set[str] = set()
    try:
        for elem in sub.elements:
            before = elem.id in kb.concepts
            try:
                kb.intern_concept(elem.id, elem.kind, created_by=created_marker)
            except KbError as exc:
                dead_elements.add(elem.id)
                fail(exc, elem.line, elem.col)
                continue
            if not before:
                report.concepts += 1

        dead_articles: set[str] = set()
        for art in sub.articles:
            meta = Article(
                id=art.id,
                title=art.title,
                authors=tuple(art.authors),
                publication_details=art.publication_details,
                url=art.url,
                domains=tuple(art.domains),
                subject_codes=tuple(art.subject_codes),
                described_elements=tuple(art.describes),
            )
            claims_before = len(kb.claim_order)
            try:
                kb.add_article(meta, timestamp=timestamp)
                report.articles += 1
                report.describes_claims += len(kb.claim_order) - claims_before
            except KbError as exc:
                dead_articles.add(art.id)
                fail(exc, art.line, art.col)

        for elem in sub.elements:
            if not elem.relations:
                continue
            if elem.id in dead_elements:
                continue
            # relationship groups are the describing document's declarations
            art = sub.describing_article(elem.id)
            if art is None or art.id in dead_articles:
                fail(
                    KbError(
                        f"element {elem.id!r} declares relationships but no article "
                        "in this submission describes it"
                    ),
                    elem.line,
                    elem.col,
                )
                continue
            authors = kb.articles[art.id].authors
            justification = Justification.document(art.id)
            for rel in elem.relations:
                try:
                    target = _resolve_target(kb, rel.link, elem.id, rel.target, created_marker)
                    before = len(kb.claim_order)
                    kb.assert_claim(
                        authors,
                        Assertion(source=elem.id, link=rel.link, target=target),
                        justification,
                        timestamp=timestamp,
                    )
                    if len(kb.claim_order) > before:
                        report.relation_claims += 1
                except KbError as exc:
                    fail(exc, rel.line, rel.col)

        for claim in sub.claims:
            try:
                before = len(kb.claim_order)
                kb.assert_claim(
                    claim.authors,
                    Assertion(source=claim.source, link=claim.link, target=claim.target),
                    Justification.text(claim.because),
                    timestamp=timestamp,
                )
                if len(kb.claim_order) > before:
                    report.standalone_claims += 1
            except KbError as exc:
                fail(exc, claim.line, claim.col)
    except IngestAbort:
        return report
    report.external_concepts = max(
        0, (len(kb.concepts) - concepts_at_entry) - report.concepts
    )
    return report


def _resolve_target(
    kb: KnowledgeBase, link: str, source_id: str, target: str, created_marker: str
) -> str:
    """Relation targets may be known concepts, claims, or brand-new ids.

    A new id is interned with the kind implied by the link: same-kind links
    inherit the source's kind, otherwise the first concrete range kind.
    """
    if kb.exists(target):
        return target
    kind = kb.schema.infer_target_kind(link, kb.kind_of(source_id))
    kb.intern_concept(target, kind, created_by=created_marker)
    return target


# --------------------------------------------------------------------------
# event log


class EventLog:
    """Framed append-only log; each record carries its own checksum."""

    def __init__(self, path: Path) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if not self.path.exists():
            self.path.touch()
        self._next_seq: int | None = None

    def next_seq(self) -> int:
        if self._next_seq is None:
            last = 0
            for record in self.read(allow_partial_tail=True):
                last = record.seq
            self._next_seq = last + 1
        return self._next_seq

    def append(self, text: str, *, source: str, lax: bool, timestamp: int | None = None) -> EventRecord:
        seq = self.next_seq()
        ts = int(time.time()) if timestamp is None else timestamp
        payload = text.encode("utf-8")
        digest = hashlib.sha256(payload).hexdigest()
        header = (
            f"%%record seq={seq} ts={ts} source={source} "
            f"lax={'1' if lax else '0'} bytes={len(payload)} sha256={digest}\n"
        )
        with open(self.path, "ab") as fh:
            fh.write(header.encode("utf-8"))
            fh.write(payload)
            fh.write(b"\n%%end\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._next_seq = seq + 1
        return EventRecord(seq=seq, timestamp=ts, source=source, lax=lax, text=text)

    def read(self, *, allow_partial_tail: bool = False) -> list[EventRecord]:
        records: list[EventRecord] = []
        data = self.path.read_bytes()
        pos = 0
        expected_seq = 1
        while pos < len(data):
            end = data.find(b"\n", pos)
            if end == -1:
                if allow_partial_tail:
                    break
                raise CorruptRecordError(expected_seq, "truncated header")
            header = data[pos:end].decode("utf-8", errors="replace")
            fields = _parse_header(header, expected_seq)
            body_start = end + 1
            body_end = body_start + fields["bytes"]
            trailer = data[body_end : body_end + len(b"\n%%end\n")]
            if body_end + len(b"\n%%end\n") > len(data):
                if allow_partial_tail:
                    break
                raise CorruptRecordError(fields["seq"], "truncated payload")
            payload = data[body_start:body_end]
            if hashlib.sha256(payload).hexdigest() != fields["sha256"]:
                raise CorruptRecordError(fields["seq"], "checksum mismatch")
            if trailer != b"\n%%end\n":
                raise CorruptRecordError(fields["seq"], "missing record trailer")
            if fields["seq"] != expected_seq:
                raise CorruptRecordError(expected_seq, f"sequence gap (found {fields['seq']})")
            records.append(
                EventRecord(
                    seq=fields["seq"],
                    timestamp=fields["ts"],
                    source=fields["source"],
                    lax=fields["lax"],
                    text=payload.decode("utf-8"),
                )
            )
            expected_seq += 1
            pos = body_end + len(b"\n%%end\n")
        return records


def _parse_header(header: str, seq_hint: int) -> dict:
    if not header.startswith("%%record "):
        raise CorruptRecordError(seq_hint, "bad record header")
    out: dict = {}
    for part in header[len("%%record ") :].split(" "):
        if "=" not in part:
            raise CorruptRecordError(seq_hint, f"bad header field {part!r}")
        key, value = part.split("=", 1)
        out[key] = value
    try:
        return {
            "seq": int(out["seq"]),
            "ts": int(out["ts"]),
            "source": out["source"],
            "lax": out["lax"] == "1",
            "bytes": int(out["bytes"]),
            "sha256": out["sha256"],
        }
    except (KeyError, ValueError) as exc:
        raise CorruptRecordError(seq_hint, f"bad header: {exc}") from None


# --------------------------------------------------------------------------
# replay


def replay(
    data_dir: str | Path,
    *,
    registry: SchemaRegistry | None = None,
    allow_partial_tail: bool = False,
) -> KnowledgeBase:
    """Rebuild the KB from the log alone; strict about mid-log corruption."""
    data_dir = Path(data_dir)
    registry = registry if registry is not None else _load_schema(data_dir)
    log = EventLog(data_dir / LOG_FILE)
    kb = KnowledgeBase(registry.copy())
    for record in log.read(allow_partial_tail=allow_partial_tail):
        try:
            sub = dsl.parse_submission(record.text, kb.schema)
            report = apply_submission(
                kb, sub, timestamp=record.seq, source_tag=record.source, lax=record.lax
            )
        except dsl.DslError as exc:
            raise CorruptRecordError(record.seq, f"unparseable submission: {exc}") from None
        if not report.accepted:
            raise CorruptRecordError(
                record.seq, f"logged submission no longer applies: {report.errors[0]}"
            )
    return kb


def _load_schema(data_dir: Path) -> SchemaRegistry:
    schema_path = data_dir / SCHEMA_FILE
    if schema_path.exists():
        return dsl.import_schema(schema_path.read_text(encoding="utf-8"))
    return builtin_schema()


# --------------------------------------------------------------------------
# repository: live KB + log + profiles behind one writer lock


@dataclass
class ServerConfig:
    port: int = 8011
    data_dir: str = "data"
    schema_file: str | None = None
    params: InferenceParams = field(default_factory=InferenceParams)
    lax: bool = False


class Repository:
    """Single-writer store: serialized mutations, snapshot reads."""

    def __init__(self, config: ServerConfig) -> None:
        self.config = config
        self.data_dir = Path(config.data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        if config.schema_file and not (self.data_dir / SCHEMA_FILE).exists():
            schema_text = Path(config.schema_file).read_text(encoding="utf-8")
            dsl.import_schema(schema_text)  # validate before adopting
            (self.data_dir / SCHEMA_FILE).write_text(schema_text, encoding="utf-8")
        self.log = EventLog(self.data_dir / LOG_FILE)
        self._lock = threading.Lock()
        self._kb = replay(self.data_dir, allow_partial_tail=True)
        self.profiles: list[InterestProfile] = []
        self._load_profiles()

    # reads take the current reference; ingest swaps it atomically
    @property
    def kb(self) -> KnowledgeBase:
        return self._kb

    def ingest_text(self, text: str, *, source: str = "cli", lax: bool | None = None) -> IngestReport:
        lax = self.config.lax if lax is None else lax
        with self._lock:
            try:
                sub = dsl.parse_submission(text, self._kb.schema)
            except dsl.DslError as exc:
                return IngestReport(
                    accepted=False, errors=[IngestError(exc.message, exc.line, exc.col)]
                )
            scratch = self._kb.copy()
            report = apply_submission(
                scratch, sub, timestamp=self.log.next_seq(), source_tag=source, lax=lax
            )
            if not report.accepted:
                return report
            self.log.append(text, source=source, lax=lax)
            self._kb = scratch
            return report

    def ingest_file(self, path: str | Path, *, lax: bool | None = None) -> IngestReport:
        return self.ingest_text(
            Path(path).read_text(encoding="utf-8"), source="cli", lax=lax
        )

    def add_profile(self, text: str) -> InterestProfile:
        with self._lock:
            profile = dsl.parse_profile(text, self._kb.schema)
            if any(p.id == profile.id for p in self.profiles):
                raise ServiceError(f"profile {profile.id!r} already registered")
            with open(self.data_dir / PROFILES_FILE, "a", encoding="utf-8") as fh:
                fh.write(dsl.print_profile(profile) + "\n")
            self.profiles.append(profile)
            return profile

    def _load_profiles(self) -> None:
        path = self.data_dir / PROFILES_FILE
        if not path.exists():
            return
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                self.profiles.append(dsl.parse_profile(line, self._kb.schema))

    def alerts(self) -> list[ProfileAlert]:
        kb = self._kb
        fired = []
        for profile in self.profiles:
            alert = evaluate_profile(kb, profile)
            if alert is not None:
                fired.append(alert)
        return fired


# --------------------------------------------------------------------------
# bulk import of conventional repository metadata


def convert_preprint_records(text: str) -> str:
    """Convert JSON-lines article metadata into .scl article forms.

    Expected keys per line: id, title, authors (list); optional url,
    details, keywords (stored verbatim as subject codes).
    """
    forms: list[str] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        art = dsl.ArticleDecl(
            id=dsl.canonicalize_id(str(rec["id"])),
            title=str(rec.get("title", "")),
            authors=[dsl.canonicalize_id(a) for a in rec["authors"]],
            publication_details=str(rec.get("details", "")),
            url=rec.get("url"),
            subject_codes=sorted(str(k) for k in rec.get("keywords", ())),
        )
        forms.append(dsl.print_submission(dsl.Submission(articles=[art])).strip())
    return "\n\n".join(forms) + ("\n" if forms else "")
