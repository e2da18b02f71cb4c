"""Parser and printer for the .scl interchange format and the query language.

Submission grammar (one UTF-8 document, ``;`` comments to end of line)::

    submission := form+
    form       := article | element | claim
    article    := "(article" ID field* ")"
    field      := "(" KEY atom+ ")"
    element    := "(" KIND ID relation* ")"
    relation   := "(" LINK target+ ")"
    claim      := "(claim (by" ID+ ") (assert" ID LINK ID ") (because" STRING "))"

Article KEYs: has-title, has-author, publication-details, has-url,
concerns-domain, subject-code, describes. Strings are double-quoted with
backslash escapes; identifiers are bare tokens, canonicalized on parse.
Link names may be schema aliases. Multi-target relation groups flatten to
one (link, target) pair each; parsing normalizes relation order, so
parse(print(s)) == s and printing is a canonicalization fixpoint.

Query grammar (one query per line)::

    "find" KIND "where" LINK ID | "impact" ID | "contradictions about" ID
    | "applying" ID "to" ID+ | "perspectives on" ID ["threshold" FLOAT]
    | "claims about" ID

Interest profiles and schema documents reuse the same surface syntax:
``(profile ID (when LINK ID min N)+)`` and one ``(node-kind ...)`` or
``(link-kind ...)`` form per registered kind.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ids import EmptyNameError, canonicalize_id
from .inference import InterestProfile, ProfileCondition
from .schema import (
    ARGUMENTATION,
    NON_ARGUMENTATION,
    SchemaError,
    SchemaRegistry,
    builtin_schema,
)

MAX_NESTING = 32

ARTICLE_FIELD_KEYS = (
    "has-title",
    "has-author",
    "publication-details",
    "has-url",
    "concerns-domain",
    "subject-code",
    "describes",
)

PROFILE_CHALLENGE_LINK = "challenges"


class DslError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0) -> None:
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


class DslSyntaxError(DslError):
    pass


class UnbalancedParensError(DslSyntaxError):
    pass


class UnknownLinkName(DslError):
    pass


class UnknownKindName(DslError):
    pass


class UnknownQueryVariant(DslError):
    pass


# --------------------------------------------------------------------------
# tokenizer


@dataclass(frozen=True)
class Token:
    type: str  # "(" | ")" | "id" | "string"
    value: str
    line: int
    col: int


_DELIMS = set(' \t\r\n();"')
_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
        elif ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            buf: list[str] = []
            while True:
                if i >= n:
                    raise DslSyntaxError("unterminated string", start_line, start_col)
                ch = text[i]
                if ch == "\\":
                    if i + 1 >= n:
                        raise DslSyntaxError("unterminated escape", line, col)
                    esc = text[i + 1]
                    if esc not in _ESCAPES:
                        raise DslSyntaxError(f"unknown escape \\{esc}", line, col)
                    buf.append(_ESCAPES[esc])
                    i += 2
                    col += 2
                elif ch == '"':
                    i += 1
                    col += 1
                    break
                elif ch == "\n":
                    buf.append(ch)
                    i += 1
                    line += 1
                    col = 1
                else:
                    buf.append(ch)
                    i += 1
                    col += 1
            tokens.append(Token("string", "".join(buf), start_line, start_col))
        else:
            start_line, start_col = line, col
            j = i
            while j < n and text[j] not in _DELIMS:
                j += 1
            tokens.append(Token("id", text[i:j], start_line, start_col))
            col += j - i
            i = j
    return tokens


def _escape(text: str) -> str:
    return "".join(_UNESCAPES.get(ch, ch) for ch in text)


# --------------------------------------------------------------------------
# generic forms


@dataclass(frozen=True)
class Form:
    """One parenthesized group: items are Tokens or nested Forms."""

    items: tuple
    line: int
    col: int


def parse_forms(text: str) -> list[Form]:
    tokens = tokenize(text)
    forms: list[Form] = []
    pos = 0

    def parse_one(depth: int) -> Form:
        nonlocal pos
        open_tok = tokens[pos]
        if depth > MAX_NESTING:
            raise DslSyntaxError("too deeply nested", open_tok.line, open_tok.col)
        pos += 1
        items: list = []
        while True:
            if pos >= len(tokens):
                raise UnbalancedParensError(
                    "missing closing parenthesis", open_tok.line, open_tok.col
                )
            tok = tokens[pos]
            if tok.type == ")":
                pos += 1
                return Form(items=tuple(items), line=open_tok.line, col=open_tok.col)
            if tok.type == "(":
                items.append(parse_one(depth + 1))
            else:
                items.append(tok)
                pos += 1

    while pos < len(tokens):
        tok = tokens[pos]
        if tok.type == "(":
            forms.append(parse_one(1))
        elif tok.type == ")":
            raise UnbalancedParensError("unexpected closing parenthesis", tok.line, tok.col)
        else:
            raise DslSyntaxError("expected a parenthesized form", tok.line, tok.col)
    return forms


def _head(form: Form) -> Token:
    if not form.items or not isinstance(form.items[0], Token) or form.items[0].type != "id":
        raise DslSyntaxError("form must start with a name", form.line, form.col)
    return form.items[0]


def _canon(token: Token) -> str:
    try:
        return canonicalize_id(token.value)
    except EmptyNameError:
        raise DslSyntaxError(f"bad identifier {token.value!r}", token.line, token.col) from None


def _want_id(item, what: str) -> Token:
    if not isinstance(item, Token) or item.type != "id":
        raise DslSyntaxError(f"expected {what}", item.line, item.col)
    return item


def _want_string(item, what: str) -> Token:
    if not isinstance(item, Token) or item.type != "string":
        raise DslSyntaxError(f"expected {what}", item.line, item.col)
    return item


# --------------------------------------------------------------------------
# submission AST


@dataclass
class RelationDecl:
    link: str
    target: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass
class ElementDecl:
    kind: str
    id: str
    relations: list[RelationDecl] = field(default_factory=list)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass
class ArticleDecl:
    id: str
    title: str = ""
    authors: list[str] = field(default_factory=list)
    publication_details: str = ""
    url: str | None = None
    domains: list[str] = field(default_factory=list)
    subject_codes: list[str] = field(default_factory=list)
    describes: list[str] = field(default_factory=list)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass
class ClaimDecl:
    authors: list[str]
    source: str
    link: str
    target: str
    because: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass
class Submission:
    articles: list[ArticleDecl] = field(default_factory=list)
    elements: list[ElementDecl] = field(default_factory=list)
    claims: list[ClaimDecl] = field(default_factory=list)

    @property
    def article(self) -> ArticleDecl | None:
        """The single article of a one-entry submission, if any."""
        return self.articles[0] if self.articles else None

    def describing_article(self, element_id: str) -> ArticleDecl | None:
        """The first article in this submission that describes the element."""
        for art in self.articles:
            if element_id in art.describes:
                return art
        return None


def parse_submission(text: str, registry: SchemaRegistry | None = None) -> Submission:
    reg = registry if registry is not None else builtin_schema()
    sub = Submission()
    seen_articles: set[str] = set()
    for form in parse_forms(text):
        head = _head(form)
        name = _canon(head)
        if name == "article":
            art = _parse_article(form)
            if art.id in seen_articles:
                raise DslSyntaxError(f"duplicate article {art.id!r}", head.line, head.col)
            seen_articles.add(art.id)
            sub.articles.append(art)
        elif name == "claim":
            sub.claims.append(_parse_claim(form, reg))
        elif name == "profile":
            raise DslSyntaxError("profile forms are not part of submissions", head.line, head.col)
        else:
            sub.elements.append(_parse_element(form, reg, name))
    return sub


def _parse_article(form: Form) -> ArticleDecl:
    items = form.items
    if len(items) < 2:
        raise DslSyntaxError("article needs an id", form.line, form.col)
    ident = _want_id(items[1], "article id")
    art = ArticleDecl(id=_canon(ident), line=form.line, col=form.col)
    seen: set[str] = set()
    for item in items[2:]:
        if not isinstance(item, Form):
            raise DslSyntaxError("expected an article field", item.line, item.col)
        key_tok = _head(item)
        key = _canon(key_tok)
        if key not in ARTICLE_FIELD_KEYS:
            raise DslSyntaxError(f"unknown article field {key!r}", key_tok.line, key_tok.col)
        values = item.items[1:]
        if not values:
            raise DslSyntaxError(f"field {key} needs a value", key_tok.line, key_tok.col)
        if key in ("has-title", "publication-details", "has-url"):
            if key in seen:
                raise DslSyntaxError(f"duplicate field {key}", key_tok.line, key_tok.col)
            seen.add(key)
            if len(values) != 1:
                raise DslSyntaxError(f"field {key} takes one value", key_tok.line, key_tok.col)
            value = _want_string(values[0], f"string for {key}").value
            if key == "has-title":
                art.title = value
            elif key == "publication-details":
                art.publication_details = value
            else:
                art.url = value
        elif key == "subject-code":
            art.subject_codes.extend(_want_string(v, "subject code string").value for v in values)
        elif key == "has-author":
            art.authors.extend(_canon(_want_id(v, "author id")) for v in values)
        elif key == "concerns-domain":
            art.domains.extend(_canon(_want_id(v, "domain id")) for v in values)
        else:  # describes
            art.describes.extend(_canon(_want_id(v, "element id")) for v in values)
    art.domains = sorted(set(art.domains))
    art.subject_codes = sorted(set(art.subject_codes))
    art.describes = sorted(set(art.describes))
    return art


def _parse_element(form: Form, reg: SchemaRegistry, kind: str) -> ElementDecl:
    head = _head(form)
    if kind not in reg.node_kinds:
        raise UnknownKindName(f"unknown node kind {head.value!r}", head.line, head.col)
    if len(form.items) < 2:
        raise DslSyntaxError("element needs an id", form.line, form.col)
    ident = _want_id(form.items[1], "element id")
    elem = ElementDecl(kind=kind, id=_canon(ident), line=form.line, col=form.col)
    pairs: set[tuple[str, str]] = set()
    for item in form.items[2:]:
        if not isinstance(item, Form):
            raise DslSyntaxError("expected a relation group", item.line, item.col)
        link_tok = _head(item)
        try:
            link = reg.resolve_link(link_tok.value).id
        except SchemaError:
            raise UnknownLinkName(
                f"unknown link {link_tok.value!r}", link_tok.line, link_tok.col
            ) from None
        targets = item.items[1:]
        if not targets:
            raise DslSyntaxError("relation group needs a target", link_tok.line, link_tok.col)
        for tgt in targets:
            tgt_tok = _want_id(tgt, "relation target id")
            pair = (link, _canon(tgt_tok))
            if pair not in pairs:
                pairs.add(pair)
                elem.relations.append(
                    RelationDecl(link=pair[0], target=pair[1], line=tgt_tok.line, col=tgt_tok.col)
                )
    elem.relations.sort(key=lambda r: (r.link, r.target))
    return elem


def _parse_claim(form: Form, reg: SchemaRegistry) -> ClaimDecl:
    items = form.items
    if len(items) != 4 or not all(isinstance(x, Form) for x in items[1:]):
        raise DslSyntaxError(
            "claim form is (claim (by ...) (assert ...) (because ...))", form.line, form.col
        )
    by, assrt, because = items[1], items[2], items[3]
    if _canon(_head(by)) != "by" or len(by.items) < 2:
        raise DslSyntaxError("claim needs (by AUTHOR...)", by.line, by.col)
    authors = sorted({_canon(_want_id(v, "author id")) for v in by.items[1:]})
    if _canon(_head(assrt)) != "assert" or len(assrt.items) != 4:
        raise DslSyntaxError("claim needs (assert SOURCE LINK TARGET)", assrt.line, assrt.col)
    src = _canon(_want_id(assrt.items[1], "assertion source"))
    link_tok = _want_id(assrt.items[2], "assertion link")
    try:
        link = reg.resolve_link(link_tok.value).id
    except SchemaError:
        raise UnknownLinkName(
            f"unknown link {link_tok.value!r}", link_tok.line, link_tok.col
        ) from None
    tgt = _canon(_want_id(assrt.items[3], "assertion target"))
    if _canon(_head(because)) != "because" or len(because.items) != 2:
        raise DslSyntaxError('claim needs (because "TEXT")', because.line, because.col)
    text = _want_string(because.items[1], "justification string").value
    return ClaimDecl(
        authors=authors, source=src, link=link, target=tgt, because=text,
        line=form.line, col=form.col,
    )


# --------------------------------------------------------------------------
# canonical printing


def print_submission(sub: Submission) -> str:
    chunks: list[str] = []
    for art in sub.articles:
        chunks.append(_print_article(art))
    for elem in sub.elements:
        chunks.append(_print_element(elem))
    for claim in sub.claims:
        chunks.append(_print_claim(claim))
    return "\n\n".join(chunks) + ("\n" if chunks else "")


def _print_article(art: ArticleDecl) -> str:
    lines = [f"(article {art.id}"]
    if art.title:
        lines.append(f'  (has-title "{_escape(art.title)}")')
    if art.authors:
        lines.append(f"  (has-author {' '.join(art.authors)})")
    if art.publication_details:
        lines.append(f'  (publication-details "{_escape(art.publication_details)}")')
    if art.url is not None:
        lines.append(f'  (has-url "{_escape(art.url)}")')
    if art.domains:
        lines.append(f"  (concerns-domain {' '.join(sorted(set(art.domains)))})")
    if art.subject_codes:
        codes = " ".join(f'"{_escape(c)}"' for c in sorted(set(art.subject_codes)))
        lines.append(f"  (subject-code {codes})")
    if art.describes:
        lines.append(f"  (describes {' '.join(sorted(set(art.describes)))})")
    return "\n".join(lines) + ")"


def _print_element(elem: ElementDecl) -> str:
    if not elem.relations:
        return f"({elem.kind} {elem.id})"
    groups: dict[str, list[str]] = {}
    for rel in elem.relations:
        bucket = groups.setdefault(rel.link, [])
        if rel.target not in bucket:
            bucket.append(rel.target)
    lines = [f"({elem.kind} {elem.id}"]
    for link in sorted(groups):
        lines.append(f"  ({link} {' '.join(sorted(groups[link]))})")
    return "\n".join(lines) + ")"


def _print_claim(claim: ClaimDecl) -> str:
    by = " ".join(sorted(set(claim.authors)))
    return (
        f"(claim (by {by}) "
        f"(assert {claim.source} {claim.link} {claim.target}) "
        f'(because "{_escape(claim.because)}"))'
    )


# --------------------------------------------------------------------------
# queries


@dataclass(frozen=True)
class FindQuery:
    kind: str
    link: str
    target: str
    direct: bool = False


@dataclass(frozen=True)
class ImpactQuery:
    target: str


@dataclass(frozen=True)
class ContradictionsQuery:
    target: str


@dataclass(frozen=True)
class ApplyingQuery:
    method: str
    domains: tuple[str, ...]


@dataclass(frozen=True)
class PerspectivesQuery:
    seed: str
    threshold: float | None = None


@dataclass(frozen=True)
class ClaimsAboutQuery:
    target: str


QueryAST = (
    FindQuery
    | ImpactQuery
    | ContradictionsQuery
    | ApplyingQuery
    | PerspectivesQuery
    | ClaimsAboutQuery
)


def _query_words(text: str) -> list[Token]:
    words: list[Token] = []
    col = 1
    for raw in text.split(" "):
        if raw.strip():
            words.append(Token("id", raw.strip(), 1, col))
        col += len(raw) + 1
    return words


def parse_query(text: str) -> QueryAST:
    if "\n" in text.strip():
        raise DslSyntaxError("one query per line", 1, 1)
    words = _query_words(text)
    if not words:
        raise DslSyntaxError("empty query", 1, 1)
    head = words[0].value.lower()

    def want(i: int, keyword: str) -> None:
        if len(words) <= i or words[i].value.lower() != keyword:
            tok = words[min(i, len(words) - 1)]
            raise DslSyntaxError(f"expected {keyword!r}", tok.line, tok.col)

    def ident(i: int, what: str) -> str:
        if len(words) <= i:
            raise DslSyntaxError(f"missing {what}", 1, len(text) + 1)
        return _canon(words[i])

    def exactly(n: int) -> None:
        if len(words) != n:
            tok = words[min(n, len(words) - 1)]
            raise DslSyntaxError("unexpected trailing words", tok.line, tok.col)

    if head == "find":
        want(2, "where")
        exactly(5)
        return FindQuery(kind=ident(1, "kind"), link=ident(3, "link"), target=ident(4, "target"))
    if head == "impact":
        exactly(2)
        return ImpactQuery(target=ident(1, "target"))
    if head == "contradictions":
        want(1, "about")
        exactly(3)
        return ContradictionsQuery(target=ident(2, "target"))
    if head == "applying":
        want(2, "to")
        if len(words) < 4:
            raise DslSyntaxError("applying needs at least one domain", 1, len(text) + 1)
        return ApplyingQuery(
            method=ident(1, "method"),
            domains=tuple(ident(i, "domain") for i in range(3, len(words))),
        )
    if head == "perspectives":
        want(1, "on")
        seed = ident(2, "seed id")
        if len(words) == 3:
            return PerspectivesQuery(seed=seed)
        want(3, "threshold")
        exactly(5)
        try:
            threshold = float(words[4].value)
        except ValueError:
            raise DslSyntaxError(
                f"bad threshold {words[4].value!r}", words[4].line, words[4].col
            ) from None
        return PerspectivesQuery(seed=seed, threshold=threshold)
    if head == "claims":
        want(1, "about")
        exactly(3)
        return ClaimsAboutQuery(target=ident(2, "target"))
    raise UnknownQueryVariant(f"unknown query variant {head!r}", words[0].line, words[0].col)


def query_to_text(q: QueryAST) -> str:
    if isinstance(q, FindQuery):
        return f"find {q.kind} where {q.link} {q.target}"
    if isinstance(q, ImpactQuery):
        return f"impact {q.target}"
    if isinstance(q, ContradictionsQuery):
        return f"contradictions about {q.target}"
    if isinstance(q, ApplyingQuery):
        return f"applying {q.method} to {' '.join(q.domains)}"
    if isinstance(q, PerspectivesQuery):
        if q.threshold is None:
            return f"perspectives on {q.seed}"
        return f"perspectives on {q.seed} threshold {q.threshold}"
    if isinstance(q, ClaimsAboutQuery):
        return f"claims about {q.target}"
    raise TypeError(f"not a query: {q!r}")


# --------------------------------------------------------------------------
# interest profiles


def parse_profile(text: str, registry: SchemaRegistry | None = None) -> InterestProfile:
    """Parse ``(profile ID (when LINK TARGET min N)+)``.

    LINK may be any schema link (or alias) or the pseudo-link
    ``challenges``; TARGET is an id or a ``?var`` placeholder bound
    consistently across the profile's conditions.
    """
    reg = registry if registry is not None else builtin_schema()
    forms = parse_forms(text)
    if len(forms) != 1:
        raise DslSyntaxError("expected exactly one profile form", 1, 1)
    form = forms[0]
    head = _head(form)
    if _canon(head) != "profile":
        raise DslSyntaxError("expected a profile form", head.line, head.col)
    if len(form.items) < 3:
        raise DslSyntaxError("profile needs an id and at least one condition", form.line, form.col)
    pid = _canon(_want_id(form.items[1], "profile id"))
    conditions: list[ProfileCondition] = []
    for item in form.items[2:]:
        if not isinstance(item, Form):
            raise DslSyntaxError("expected a (when ...) condition", item.line, item.col)
        when = _head(item)
        if _canon(when) != "when" or len(item.items) != 5:
            raise DslSyntaxError("condition is (when LINK TARGET min N)", item.line, item.col)
        link_tok = _want_id(item.items[1], "condition link")
        if canonicalize_id(link_tok.value) == PROFILE_CHALLENGE_LINK:
            link = PROFILE_CHALLENGE_LINK
        else:
            try:
                link = reg.resolve_link(link_tok.value).id
            except SchemaError:
                raise UnknownLinkName(
                    f"unknown link {link_tok.value!r}", link_tok.line, link_tok.col
                ) from None
        tgt_tok = _want_id(item.items[2], "condition target")
        if tgt_tok.value.startswith("?"):
            try:
                target = "?" + canonicalize_id(tgt_tok.value[1:])
            except EmptyNameError:
                raise DslSyntaxError("empty variable name", tgt_tok.line, tgt_tok.col) from None
        else:
            target = _canon(tgt_tok)
        want_min = _want_id(item.items[3], "the word min")
        if _canon(want_min) != "min":
            raise DslSyntaxError("expected 'min'", want_min.line, want_min.col)
        count_tok = _want_id(item.items[4], "condition count")
        try:
            min_count = int(count_tok.value)
        except ValueError:
            raise DslSyntaxError(
                f"bad count {count_tok.value!r}", count_tok.line, count_tok.col
            ) from None
        if min_count < 1:
            raise DslSyntaxError("min count must be positive", count_tok.line, count_tok.col)
        conditions.append(ProfileCondition(link=link, target=target, min_count=min_count))
    return InterestProfile(id=pid, conditions=tuple(conditions))


def print_profile(profile: InterestProfile) -> str:
    conds = " ".join(
        f"(when {c.link} {c.target} min {c.min_count})" for c in profile.conditions
    )
    return f"(profile {profile.id} {conds})"


# --------------------------------------------------------------------------
# schema documents


def export_schema(reg: SchemaRegistry) -> str:
    """One form per kind, parents before children, links after nodes."""
    lines: list[str] = []
    emitted: set[str] = set()

    def emit_node(kid: str) -> None:
        if kid in emitted:
            return
        kind = reg.node_kinds[kid]
        if kind.parent is not None:
            emit_node(kind.parent)
        parent = f" (parent {kind.parent})" if kind.parent is not None else ""
        lines.append(f'(node-kind {kind.id} (name "{_escape(kind.name)}"){parent})')
        emitted.add(kid)

    for kid in reg.node_kinds:
        emit_node(kid)
    for link in reg.link_kinds.values():
        parts = [
            f"(link-kind {link.id}",
            f'(name "{_escape(link.name)}")',
            f"(category {link.category})",
            f"(domain {' '.join(link.domain_kinds)})",
            f"(range {' '.join(link.range_kinds)})",
        ]
        if link.aliases:
            parts.append(f"(aliases {' '.join(link.aliases)})")
        if link.same_kind:
            parts.append("(same-kind)")
        lines.append(" ".join(parts) + ")")
    return "\n".join(lines) + "\n"


def import_schema(text: str) -> SchemaRegistry:
    reg = SchemaRegistry()
    for form in parse_forms(text):
        head = _head(form)
        kind = _canon(head)
        if kind == "node-kind":
            _import_node_kind(reg, form)
        elif kind == "link-kind":
            _import_link_kind(reg, form)
        else:
            raise DslSyntaxError(f"unknown schema form {kind!r}", head.line, head.col)
    return reg


def _fields_of(form: Form, skip: int) -> dict[str, Form]:
    out: dict[str, Form] = {}
    for item in form.items[skip:]:
        if not isinstance(item, Form):
            raise DslSyntaxError("expected a field", item.line, item.col)
        out[_canon(_head(item))] = item
    return out


def _import_node_kind(reg: SchemaRegistry, form: Form) -> None:
    if len(form.items) < 2:
        raise DslSyntaxError("node-kind needs an id", form.line, form.col)
    kid = _canon(_want_id(form.items[1], "kind id"))
    fields = _fields_of(form, 2)
    name = kid
    if "name" in fields:
        name = _want_string(fields["name"].items[1], "kind name").value
    parent = None
    if "parent" in fields:
        parent = _canon(_want_id(fields["parent"].items[1], "parent id"))
    try:
        got = reg.register_node_kind(name, parent=parent)
    except SchemaError as exc:
        raise DslSyntaxError(str(exc), form.line, form.col) from None
    if got != kid:
        raise DslSyntaxError(f"kind name {name!r} does not canonicalize to {kid!r}", form.line, form.col)


def _import_link_kind(reg: SchemaRegistry, form: Form) -> None:
    if len(form.items) < 2:
        raise DslSyntaxError("link-kind needs an id", form.line, form.col)
    lid = _canon(_want_id(form.items[1], "link id"))
    fields = _fields_of(form, 2)
    for required in ("domain", "range"):
        if required not in fields:
            raise DslSyntaxError(f"link-kind needs ({required} ...)", form.line, form.col)
    name = lid
    if "name" in fields:
        name = _want_string(fields["name"].items[1], "link name").value
    category = NON_ARGUMENTATION
    if "category" in fields:
        category = _canon(_want_id(fields["category"].items[1], "category"))
        if category not in (ARGUMENTATION, NON_ARGUMENTATION):
            tok = fields["category"].items[1]
            raise DslSyntaxError(f"bad category {category!r}", tok.line, tok.col)

    def id_list(key: str) -> tuple[str, ...]:
        if key not in fields:
            return ()
        return tuple(_canon(_want_id(v, "kind id")) for v in fields[key].items[1:])

    try:
        got = reg.register_link_kind(
            name,
            category=category,
            domain_kinds=id_list("domain"),
            range_kinds=id_list("range"),
            aliases=id_list("aliases"),
            same_kind="same-kind" in fields,
        )
    except SchemaError as exc:
        raise DslSyntaxError(str(exc), form.line, form.col) from None
    if got != lid:
        raise DslSyntaxError(f"link name {name!r} does not canonicalize to {lid!r}", form.line, form.col)
