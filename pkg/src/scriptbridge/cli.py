"""``scriptbridge`` command line: one binary, one subcommand per tool."""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .cka import POOLINGS, CkaError, average_per_language, averages_to_tsv, load_manifest, pairwise_layer_cka
from .corpus import CorpusPipeline, FilterConfig
from .schemes import SCRIPT_CODES, load_scheme
from .script_detect import UNICODE_VERSION, dominance
from .stats import (
    Alternative,
    MwuConfig,
    PMethod,
    SampleGroup,
    batch_to_tsv,
    compare,
    compare_batch,
    read_batch_tsv,
)
from .tokenizer import EmptyCorpusError, SubwordVocab, tokenizer_stats, train_bpe
from .transliterate import TransliterationReport, transliterate, transliterate_auto

log = logging.getLogger("scriptbridge")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
# filter fails when more than this share of records is malformed
MALFORMED_LIMIT = 0.10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _std(stream):
    # force UTF-8 on real console streams; leave test doubles alone
    if hasattr(stream, "reconfigure"):
        stream.reconfigure(encoding="utf-8", newline="")
    return contextlib.nullcontext(stream)


def _open_in(path):
    if path in (None, "-"):
        return _std(sys.stdin)
    return open(path, encoding="utf-8", newline="")


def _open_out(path):
    if path in (None, "-"):
        return _std(sys.stdout)
    return open(path, "w", encoding="utf-8", newline="")


def _dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=False) + "\n"


def _write_json(path, obj):
    Path(path).write_text(_dump_json(obj), encoding="utf-8")


def _echo(args) -> dict:
    """Arguments relevant to a report, for provenance."""
    skip = {"func", "verbose"}
    return {
        "toolkit_version": __version__,
        "unicode_version": UNICODE_VERSION,
        "arguments": {k: v for k, v in sorted(vars(args).items()) if k not in skip},
    }


def _split_eol(line: str):
    body = line.rstrip("\r\n")
    return body, line[len(body):]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_detect(args) -> int:
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for line in src:
            body, _ = _split_eol(line)
            dst.write(json.dumps(dominance(body).to_dict(), ensure_ascii=False) + "\n")
    return EXIT_OK


def cmd_translit(args) -> int:
    report = TransliterationReport()
    scheme = None if args.script == "auto" else load_scheme(args.script)
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for line in src:
            body, eol = _split_eol(line)
            if scheme is None:
                out, rep = transliterate_auto(body, keep_danda=args.keep_danda)
            else:
                out, rep = transliterate(body, scheme, keep_danda=args.keep_danda)
            report.merge(rep)
            dst.write(out + eol)
    unmapped = sum(report.unmapped_counts.values())
    if unmapped:
        log.info("%d unmapped codepoint occurrence(s)", unmapped)
    if args.report:
        _write_json(args.report, {"config": _echo(args), **report.to_dict()})
    return EXIT_OK


def cmd_filter(args) -> int:
    if args.config:
        cfg = FilterConfig.from_dict(json.loads(Path(args.config).read_text(encoding="utf-8")))
    else:
        cfg = FilterConfig()
    if args.transliterate:
        cfg.transliterate = True

    rejects = open(args.rejects, "w", encoding="utf-8") if args.rejects else None

    def on_drop(index, doc, reason):
        if rejects is not None:
            rec = {"index": index, "id": doc.id, "lang": doc.lang, "reason": reason.value}
            rejects.write(json.dumps(rec, ensure_ascii=False) + "\n")

    pipeline = CorpusPipeline(cfg, on_drop=on_drop)
    try:
        with _open_in(args.input) as src, _open_out(args.output) as dst:
            lines = (line for line in src if line.strip())
            for doc in pipeline.process(lines):
                dst.write(doc.to_json() + "\n")
    finally:
        if rejects is not None:
            rejects.close()
    report = pipeline.report
    for msg in report.errors:
        log.warning("%s", msg)
    if args.report:
        _write_json(args.report, {"cli": _echo(args), **report.to_dict()})
    if report.malformed_fraction > MALFORMED_LIMIT:
        log.error(
            "%d of %d records malformed (limit %.0f%%)",
            report.malformed, report.records_read, 100 * MALFORMED_LIMIT,
        )
        return EXIT_DATA
    return EXIT_OK


def cmd_bpe_train(args) -> int:
    with _open_in(args.input) as src:
        vocab = train_bpe(src, args.vocab_size, continuation_marker=args.marker)
    vocab.save(args.out)
    log.info("wrote %d pieces to %s", len(vocab), args.out)
    return EXIT_OK


def cmd_tok_metrics(args) -> int:
    vocab = SubwordVocab.load(args.vocab)
    with _open_in(args.input) as src:
        stats = tokenizer_stats(src, vocab)
    with _open_out(args.output) as dst:
        dst.write(_dump_json({**stats.to_dict(), "config": _echo(args)}))
    return EXIT_OK


def read_group_file(path, column: str | None = None) -> list:
    """Numbers from a one-per-line file or a headed TSV.

    In a TSV the ``column`` (default ``metric``, else ``value``, else the
    last column) is used. Blank lines and ``#`` comments are skipped.
    """
    with _open_in(path) as fh:
        rows = [ln.rstrip("\r\n") for ln in fh]
    rows = [r for r in rows if r.strip() and not r.lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{path}: no values")
    first = rows[0].split("\t")
    try:
        [float(x) for x in first]
        header = None
    except ValueError:
        header = first
        rows = rows[1:]
    if header is None:
        col = 0 if column is None else int(column)
    elif column is not None:
        col = header.index(column)
    else:
        col = next((header.index(c) for c in ("metric", "value") if c in header), len(header) - 1)
    values = []
    for lineno, r in enumerate(rows, start=2 if header else 1):
        cell = r.split("\t")[col]
        try:
            values.append(float(cell))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: {cell!r} is not a number") from None
    return values


def cmd_mwu(args) -> int:
    cfg = MwuConfig(alpha=args.alpha, alternative=args.alternative, p_method=args.method)
    if args.batch:
        with _open_in(args.batch) as fh:
            rows = read_batch_tsv(fh)
        outcomes = compare_batch(rows, cfg, group1=args.label1, group2=args.label2)
        for o in outcomes:
            if o.error:
                log.warning("%s/%s: %s", o.task, o.language, o.error)
        with _open_out(args.output) as dst:
            if args.format == "tsv":
                dst.write(batch_to_tsv(outcomes))
            else:
                payload = {
                    "config": _echo(args),
                    "results": [
                        {"task": o.task, "language": o.language,
                         **(o.result.to_dict() if o.result else {"error": o.error})}
                        for o in outcomes
                    ],
                }
                dst.write(_dump_json(payload))
        return EXIT_OK
    if not (args.group1 and args.group2):
        raise UsageError("mwu needs --group1 and --group2, or --batch")
    g1 = SampleGroup(args.label1, read_group_file(args.group1, args.column))
    g2 = SampleGroup(args.label2, read_group_file(args.group2, args.column))
    result = compare(g1, g2, cfg)
    with _open_out(args.output) as dst:
        dst.write(_dump_json({**result.to_dict(), "config": _echo(args)}))
    return EXIT_OK


def cmd_cka(args) -> int:
    mats, manifest = load_manifest(args.manifest, pooling=args.pooling)
    table = pairwise_layer_cka(mats)
    for a, b, layer in table.gaps:
        log.info("no score for %s-%s at layer %d", a, b, layer)
    payload = {"config": {**_echo(args), "manifest": manifest.to_dict()}, **table.to_dict()}
    _write_json(args.out, payload)
    if args.tsv:
        Path(args.tsv).write_text(averages_to_tsv(average_per_language(table)), encoding="utf-8")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scriptbridge", description=__doc__)
    p.add_argument(
        "--version",
        action="version",
        version=f"scriptbridge {__version__} (Unicode tables {UNICODE_VERSION})",
    )
    p.add_argument("-v", "--verbose", action="count", default=0, help="more log output on stderr")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    io_opts = _Parser(add_help=False)
    io_opts.add_argument("-i", "--input", default="-", help="input file (default: stdin)")
    io_opts.add_argument("-o", "--output", default="-", help="output file (default: stdout)")

    s = sub.add_parser("detect", parents=[io_opts], help="per-line script histogram and dominant script")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("translit", parents=[io_opts], help="romanise Brahmic text line by line")
    s.add_argument("--script", choices=("auto",) + tuple(SCRIPT_CODES), default="auto")
    s.add_argument("--report", help="write a JSON report of unmapped codepoints")
    s.add_argument("--keep-danda", action="store_true", help="leave danda and double danda as they are")
    s.set_defaults(func=cmd_translit)

    s = sub.add_parser("filter", parents=[io_opts], help="script-filter and normalise a JSONL corpus")
    s.add_argument("--config", help="JSON filter configuration")
    s.add_argument("--transliterate", action="store_true", help="romanise kept documents")
    s.add_argument("--report", help="write the pipeline report as JSON")
    s.add_argument("--rejects", help="write dropped record ids and reasons as JSONL")
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("bpe-train", parents=[io_opts], help="train a BPE vocabulary")
    s.add_argument("--vocab-size", type=int, required=True)
    s.add_argument("--out", required=True, help="vocabulary JSON path")
    s.add_argument("--marker", default="##", help="continuation marker")
    s.set_defaults(func=cmd_bpe_train)

    s = sub.add_parser("tok-metrics", parents=[io_opts], help="fertility and unbroken ratio")
    s.add_argument("--vocab", required=True)
    s.set_defaults(func=cmd_tok_metrics)

    s = sub.add_parser("mwu", help="Mann-Whitney U test with effect sizes")
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--group1")
    s.add_argument("--group2")
    s.add_argument("--column", help="TSV column holding the values")
    s.add_argument("--batch", help="TSV with task, language, seed, model, metric columns")
    s.add_argument("--format", choices=("json", "tsv"), default="json", help="batch output format")
    s.add_argument("--label1", default="uni-script")
    s.add_argument("--label2", default="multi-script")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--method", choices=[m.value for m in PMethod], default="auto")
    s.add_argument("--alternative", choices=[a.value for a in Alternative], default="two-sided")
    s.set_defaults(func=cmd_mwu)

    s = sub.add_parser("cka", help="pairwise linear CKA from activation files")
    s.add_argument("--manifest", required=True)
    s.add_argument("--out", required=True, help="CKA table JSON path")
    s.add_argument("--pooling", choices=POOLINGS, default="mean")
    s.add_argument("--tsv", help="per-language per-layer averages as TSV")
    s.set_defaults(func=cmd_cka)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(name)s: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"scriptbridge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, CkaError, EmptyCorpusError) as exc:
        print(f"scriptbridge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
