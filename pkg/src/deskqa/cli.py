"""Operator command line.

Subcommands: ingest, index, serve, skill, test, search. Exit codes: 0 on
success, 1 on usage errors, 2 on runtime errors (module error codes are
printed verbatim). Every subcommand takes --json for machine-readable
output that matches the underlying operation's wire form byte for byte.
"""

import argparse
import json
import os
import sys

from .behave import figures, load_suite_file
from .core import Platform, skill_from_wire
from .datastore import serialize
from .datastore.documents import Document
from .errors import ParseError, QAError
from .skills import Principal

DEFAULT_DATA_DIR = "deskqa-data"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; the CLI contract wants 1
    def error(self, message):
        raise UsageError(message)


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deskqa", description="Desk-scale question answering platform")
    parser.add_argument("--data-dir", default=os.environ.get("DESKQA_DATA", DEFAULT_DATA_DIR))
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="upsert a JSON-Lines corpus into a datastore")
    p_ingest.add_argument("--datastore", required=True)
    p_ingest.add_argument("file")
    p_ingest.add_argument("--create", action="store_true", help="create the datastore if missing")

    p_index = sub.add_parser("index", help="index management")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)
    p_build = index_sub.add_parser("build", help="build a retrieval index")
    p_build.add_argument("--datastore", required=True)
    p_build.add_argument("--type", required=True, choices=["sparse", "dense"])
    p_build.add_argument("--k1", type=float, default=1.2)
    p_build.add_argument("--b", type=float, default=0.75)
    p_build.add_argument("--embedder")
    p_build.add_argument("--dim", type=int)
    p_build.add_argument("--nlist", type=int)
    p_build.add_argument("--quantizer", choices=["sq8", "none"], default="sq8")
    p_build.add_argument("--metric", choices=["inner-product", "euclidean"], default="inner-product")
    p_build.add_argument("--seed", type=int, default=0)

    p_serve = sub.add_parser("serve", help="run the HTTP gateway")
    p_serve.add_argument("--config", required=True)

    p_skill = sub.add_parser("skill", help="skill management")
    skill_sub = p_skill.add_subparsers(dest="skill_command", required=True)
    p_register = skill_sub.add_parser("register", help="register a skill from a JSON file")
    p_register.add_argument("--file", required=True)
    p_register.add_argument("--principal", default="operator")

    p_test = sub.add_parser("test", help="behavioural testing")
    test_sub = p_test.add_subparsers(dest="test_command", required=True)
    p_run = test_sub.add_parser("run", help="run a suite against a skill")
    p_run.add_argument("--skill", required=True)
    p_run.add_argument("--suite", required=True, help="suite JSON file")
    p_run.add_argument("--out", required=True, help="report output path")
    p_run.add_argument("--figure", help="failure-rate chart path (default: <out>.png)")
    p_run.add_argument("--no-figure", action="store_true")
    p_run.add_argument("--principal", default="operator")

    p_search = sub.add_parser("search", help="query a datastore index")
    p_search.add_argument("--datastore", required=True)
    p_search.add_argument("--index", required=True, choices=["sparse", "dense", "exact"])
    p_search.add_argument("--query", required=True)
    p_search.add_argument("-k", type=int, default=10)
    p_search.add_argument("--nprobe", type=int)

    return parser


def _load_corpus(path: str) -> list[Document]:
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        ordinal = 0
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            ordinal += 1
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, line=lineno) from exc
            if not isinstance(obj, dict) or "text" not in obj:
                raise ParseError("each line needs an object with a 'text' field", line=lineno)
            doc_id = obj.get("id") or f"doc-{ordinal}"
            docs.append(Document(id=str(doc_id), title=str(obj.get("title", "")), text=str(obj["text"])))
    return docs


def cmd_ingest(args, platform: Platform) -> int:
    docs = _load_corpus(args.file)
    if args.create:
        try:
            platform.datastores.get(args.datastore)
        except QAError:
            platform.create_datastore(args.datastore)
    added = platform.upsert_documents(args.datastore, docs)
    platform.save()
    if args.json:
        print(_canonical({"added": added, "datastore": platform.datastores.get(args.datastore).info()}))
    else:
        print(f"added {added} documents")
    return 0


def cmd_index_build(args, platform: Platform) -> int:
    if args.type == "sparse":
        index = platform.build_sparse_index(args.datastore, k1=args.k1, b=args.b)
        platform.save()
        payload = {"built": "sparse", "doc_count": index.doc_count, "avg_doc_len": index.avg_doc_len}
    else:
        if not args.embedder or args.dim is None:
            raise UsageError("index build --type dense requires --embedder and --dim")
        index = platform.build_dense_index(
            args.datastore,
            embedder=args.embedder,
            dim=args.dim,
            nlist=args.nlist,
            quantizer=args.quantizer,
            metric=args.metric,
            seed=args.seed,
        )
        platform.save()
        payload = {
            "built": "dense",
            "nlist": index.nlist,
            "quantizer": index.index.quantizer,
            "metric": index.index.metric,
            "size": index.index.size,
        }
    if args.json:
        print(_canonical(payload))
    else:
        print(f"built {args.type} index on {args.datastore}")
    return 0


def cmd_serve(args, platform_unused) -> int:
    import uvicorn

    from .gateway import bootstrap, create_app, load_config

    config = load_config(args.config)
    platform = Platform.open(config.data_dir) if config.data_dir else Platform()
    bootstrap(platform, config)
    platform.save()
    app = create_app(platform, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def cmd_skill_register(args, platform: Platform) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    owner = raw.get("owner") or args.principal
    skill = platform.register_skill(skill_from_wire(raw), Principal(owner))
    platform.save()
    if args.json:
        print(_canonical(skill.to_wire()))
    else:
        print(f"registered skill {skill.id} ({skill.name})")
    return 0


def cmd_test_run(args, platform: Platform) -> int:
    suite = load_suite_file(args.suite)
    platform.add_suite(suite)
    report = platform.run_suite(args.skill, suite, Principal(args.principal))
    data = platform.report_bytes(args.skill, suite.suite_name)
    with open(args.out, "wb") as fh:
        fh.write(data)
    platform.save()

    figure_path = None
    if not args.no_figure:
        figure_path = args.figure or os.path.splitext(args.out)[0] + ".png"
        figures.render_report_figure(report, figure_path)

    if args.json:
        print(data.decode("utf-8"))
    else:
        for t in report.tests:
            rate = f"{t.failure_rate:.2f}"
            print(f"{t.name}\t{t.type}\t{t.capability}\t{t.failures}/{t.total}\t{rate}%")
        print(f"report written to {args.out}" + (f", figure to {figure_path}" if figure_path else ""))
    return 0


def cmd_search(args, platform: Platform) -> int:
    if args.k < 1:
        raise UsageError("-k must be >= 1")
    if args.index == "sparse":
        results = platform.sparse_search(args.datastore, args.query, args.k)
    elif args.index == "dense":
        results = platform.dense_search(args.datastore, args.query, args.k, nprobe=args.nprobe)
    else:
        results = platform.exact_search(args.datastore, args.query, args.k)
    if args.json:
        print(_canonical({"results": [r.to_wire() for r in results]}))
    else:
        for r in results:
            print(f"{r.doc_id}\t{r.score:.6f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "serve":
            return cmd_serve(args, None)
        platform = Platform.open(args.data_dir)
        if args.command == "ingest":
            return cmd_ingest(args, platform)
        if args.command == "index":
            return cmd_index_build(args, platform)
        if args.command == "skill":
            return cmd_skill_register(args, platform)
        if args.command == "test":
            return cmd_test_run(args, platform)
        if args.command == "search":
            return cmd_search(args, platform)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except QAError as exc:
        print(f"error {exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error io: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
