"""Command-line front end: cg ingest | query | map | check | serve | replay."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import dsl, inference, query, service
from .kb import KbError


def _data_dir(args) -> str:
    if args.data:
        return args.data
    return os.environ.get("CG_DATA", "data")


def _repo(args) -> service.Repository:
    return service.Repository(service.ServerConfig(data_dir=_data_dir(args)))


def cmd_ingest(args) -> int:
    repo = _repo(args)
    status = 0
    for path in args.files:
        report = repo.ingest_file(path, lax=args.lax or None)
        print(f"{path}: {report.summary()}")
        if not report.accepted:
            status = 1
    return status


def cmd_query(args) -> int:
    repo = _repo(args)
    try:
        ast = dsl.parse_query(args.query)
    except dsl.DslError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.direct and isinstance(ast, dsl.FindQuery):
        ast = dsl.FindQuery(kind=ast.kind, link=ast.link, target=ast.target, direct=True)
    try:
        result = query.execute(repo.kb, ast, params=repo.config.params)
    except (KbError, ValueError, query.UnsupportedVariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(result.to_dict(), indent=2, ensure_ascii=False))
        return 0
    if result.impact is not None:
        rep = result.impact
        print(f"impact of {rep.target}: scalar {rep.scalar}")
        print(f"  documents ({rep.doc_count}): {', '.join(rep.doc_ids) or '-'}")
        print(f"  domains ({rep.domain_count}): {', '.join(rep.domain_tags) or '-'}")
        print(f"  problems ({rep.problem_count}): {', '.join(rep.problem_ids) or '-'}")
        return 0
    if not result.rows:
        print("no results")
        return 0
    for row in result.rows:
        print(_format_row(row))
    return 0


def _format_row(row: dict) -> str:
    if "id" in row:
        return f"{row['id']}  (claims: {', '.join(row['via'])})"
    if "claim" in row:
        just = row["justification"]
        how = just["value"] if just["form"] == "document" else f'"{just["value"]}"'
        return (
            f"[{row['claim']}] {row['source']} {row['link']} {row['target']} "
            f"by {', '.join(row['authors'])} ({just['form']} {how})"
        )
    if "articles" in row and "domain" in row:
        return f"{row['domain']}: {', '.join(row['articles'])}"
    if "articles" in row:
        return f"{row['articles'][0]} vs {row['articles'][1]} (claims: {', '.join(row['witness'])})"
    if "authors" in row:
        shared = "; ".join(f"{k}: {', '.join(v)}" for k, v in row.get("shared", {}).items())
        return f"{', '.join(row['authors'])}  [{shared or 'nothing shared'}]"
    return json.dumps(row, ensure_ascii=False)


def cmd_map(args) -> int:
    repo = _repo(args)
    try:
        cmap = query.extract_concept_map(
            repo.kb, args.id, args.depth, include_inferred=args.include_inferred
        )
        print(query.export_map(cmap, args.format), end="")
    except (KbError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_check(args) -> int:
    repo = _repo(args)
    kb = repo.kb
    inconsistent = inference.detect_inconsistent_positions(kb)
    challenged = inference.propagate_challenges(kb, args.max_depth)
    if args.json:
        print(
            json.dumps(
                {
                    "inconsistent_positions": [
                        {"author": f.author, "subject": f.subject, "claims": list(f.provenance)}
                        for f in inconsistent
                    ],
                    "may_be_challenged": [
                        {"element": f.element, "path": list(f.path), "claims": list(f.provenance)}
                        for f in challenged
                    ],
                },
                indent=2,
            )
        )
        return 0
    for fact in inconsistent:
        print(
            f"inconsistent-position: {fact.author} both supports and refutes "
            f"{fact.subject} (claims: {', '.join(fact.provenance)})"
        )
    for fact in challenged:
        print(
            f"may-be-challenged: {fact.element} via {' <- '.join(fact.path)} "
            f"(claims: {', '.join(fact.provenance)})"
        )
    if not inconsistent and not challenged:
        print("no findings")
    return 0


def cmd_serve(args) -> int:
    from . import api

    config = service.ServerConfig(
        port=args.port,
        data_dir=_data_dir(args),
        schema_file=args.schema,
        lax=args.lax,
    )
    api.serve(config)
    return 0


def cmd_replay(args) -> int:
    try:
        kb = service.replay(args.dir, allow_partial_tail=args.tolerate_partial)
    except service.CorruptRecordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    info = {
        "concepts": len(kb.concepts),
        "articles": len(kb.articles),
        "claims": len(kb.claim_order),
        "content_hash": kb.content_hash(),
    }
    if args.json:
        print(json.dumps(info, indent=2))
    else:
        print(
            f"replayed {info['claims']} claim(s), {info['concepts']} concept(s), "
            f"{info['articles']} article(s)"
        )
        print(f"content hash: {info['content_hash']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cg", description="typed claim network tool")
    parser.add_argument("--data", help="data directory (default: $CG_DATA or ./data)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse, validate, and store .scl submissions")
    p.add_argument("files", nargs="+")
    p.add_argument("--lax", action="store_true", help="skip invalid assertions instead of rejecting")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", help="run one query")
    p.add_argument("query")
    p.add_argument("--direct", action="store_true", help="match exact edges only (find queries)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("map", help="extract a concept map around a focus")
    p.add_argument("id")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--include-inferred", action="store_true")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("check", help="run the inconsistency and challenge rules")
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=8011)
    p.add_argument("--schema", help="schema .scl adopted on first start")
    p.add_argument("--lax", action="store_true")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="rebuild a KB from an event log and report its hash")
    p.add_argument("dir")
    p.add_argument("--tolerate-partial", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (service.ServiceError, dsl.DslError, KbError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
