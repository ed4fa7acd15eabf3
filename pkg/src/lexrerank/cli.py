"""Command-line front end.

Exit codes: 0 success, 1 computation error, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .align import TrainConfig, TranslationTable, read_model, train, viterbi_align, write_model
from .bpe import BpeModel, apply_bpe, de_bpe, learn_bpe, read_bpe, write_bpe
from .config import DEFAULTS, read_config
from .corpus import (build_vocab, domain_stats, format_stats_table, load_parallel,
                     read_sentences, sample_sentences)
from .errors import InputFormatError, ToolkitError
from .metrics import CLI_METRIC_NAMES, MetricKind, corpus_bleu, corpus_meteor_lite
from .rerank import format_annotated, parse_nbest, rerank, select_top
from .shortlist import (build_shortlist, coverage, export_triples, read_shortlist,
                        write_shortlist)

INPUT_OPTIONS = {"source", "target", "model_file", "target_counts", "shortlist", "nbest",
                 "hyp", "ref", "baseline", "reference", "bpe", "input"}


class UsageError(Exception):
    pass


def _write(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _lines(items) -> str:
    return "".join(f"{x}\n" for x in items)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) in (None, [], ""):
            raise UsageError(f"missing required option --{name.replace('_', '-')}")


def _bool(text: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


# --- subcommands -----------------------------------------------------------

def cmd_train_align(args):
    _require(args, "source", "target", "output")
    corpus = load_parallel(args.source, args.target)
    if args.reverse:
        corpus = corpus.swapped()
    cfg = TrainConfig(iterations=args.iterations, model=args.model,
                      null_prob=args.null_prob, tension_init=args.tension,
                      learn_tension=not args.fixed_tension, tension_step=args.tension_step,
                      smoothing_alpha=args.alpha)
    write_model(train(corpus, cfg), args.output)


def cmd_align(args):
    _require(args, "model_file", "source", "target")
    model = read_model(args.model_file)
    corpus = load_parallel(args.source, args.target)
    out = []
    for src, tgt in corpus:
        if not src or not tgt:
            out.append("")
        else:
            out.append(viterbi_align(model, src, tgt, unseen=args.unseen).pharaoh())
    _write(_lines(out), args.output)


def cmd_build_shortlist(args):
    _require(args, "model_file")
    if args.output is None and args.export is None:
        raise UsageError("give --output and/or --export")
    table: TranslationTable = read_model(args.model_file).ttable
    if args.direction == "t2s":
        table = table.transpose()
    counts = build_vocab(read_sentences(args.target_counts)) if args.target_counts else None
    sl = build_shortlist(table, args.k, args.f, counts)
    if args.output:
        write_shortlist(sl, args.output)
    if args.export:
        export_triples(sl, args.export)


def cmd_coverage(args):
    _require(args, "shortlist", "source", "target")
    report = coverage(read_shortlist(args.shortlist), load_parallel(args.source, args.target))
    text = "reachable\ttotal\tcoverage\n"
    text += f"{report.reachable_tokens}\t{report.total_tokens}\t{report.coverage:.6f}\n"
    if args.per_sentence:
        text += _lines(f"{i}\t{c:.6f}" for i, c in enumerate(report.per_sentence))
    _write(text, args.output)


def cmd_rerank(args):
    _require(args, "nbest")
    lists = parse_nbest(args.nbest, args.beam)
    metric = MetricKind(args.metric)
    best = select_top(lists, metric, passthrough=args.passthrough)
    _write(_lines(" ".join(s) for s in best), args.output)
    if args.annotated:
        lines = []
        for nb in lists:
            lines.extend(format_annotated(nb, rerank(nb, metric)))
        _write(_lines(lines), args.annotated)


def _breakdown_row(hyps, refs):
    b = corpus_bleu(hyps, refs)
    return b, corpus_meteor_lite(hyps, refs)


def cmd_score(args):
    _require(args, "hyp", "ref")
    refs = [de_bpe(s) for s in read_sentences(args.ref)]
    hyps = [de_bpe(s) for s in read_sentences(args.hyp)]
    b, meteor = _breakdown_row(hyps, refs)
    header = ["p1", "p2", "p3", "p4", "BP", "BLEU", "METEOR"]
    row = [f"{100 * p:.4f}" for p in b.precisions]
    row += [f"{b.brevity_penalty:.4f}", f"{100 * b.bleu:.4f}", f"{meteor:.4f}"]
    if args.baseline:
        base_b, base_meteor = _breakdown_row([de_bpe(s) for s in read_sentences(args.baseline)], refs)
        header += ["BLEU_delta", "METEOR_delta"]
        row += [f"{100 * (b.bleu - base_b.bleu):+.4f}", f"{meteor - base_meteor:+.4f}"]
    text = "\t".join(header) + "\n" + "\t".join(row) + "\n"
    if b.degenerate:
        sys.stderr.write("warning: empty hypothesis side; BP and BLEU set to 0\n")
    _write(text, args.output)


def _named_paths(items, what):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name or not value:
            raise UsageError(f"{what} must look like NAME=VALUE, got {item!r}")
        out[name] = value
    return out


def cmd_stats(args):
    _require(args, "reference")
    corpora = _named_paths(args.corpus, "--corpus")
    samples = {k: float(v) for k, v in _named_paths(args.sample, "--sample").items()}
    for name in corpora:
        if not Path(corpora[name]).exists():
            raise FileNotFoundError(f"no such file: {corpora[name]}")
    unknown = set(samples) - set(corpora) - {args.reference_name}
    if unknown:
        raise UsageError(f"--sample names unknown corpus: {', '.join(sorted(unknown))}")
    bpe = read_bpe(args.bpe) if args.bpe else BpeModel(())

    def load(name, path):
        sents = read_sentences(path)
        if name in samples:
            sents = sample_sentences(sents, samples[name], args.seed)
        return sents

    reference = load(args.reference_name, args.reference)
    ref_vocab = build_vocab(reference, args.min_count)
    rows = {args.reference_name: domain_stats(reference, bpe, ref_vocab, args.min_count)}
    for name, path in corpora.items():
        rows[name] = domain_stats(load(name, path), bpe, ref_vocab, args.min_count)
    _write(format_stats_table(rows, args.min_count), args.output)


def cmd_bpe_learn(args):
    _require(args, "input", "output")
    sentences = []
    for path in args.input:
        sentences.extend(read_sentences(path))
    write_bpe(learn_bpe(sentences, args.merges, args.min_frequency), args.output)


def cmd_bpe_apply(args):
    _require(args, "model_file", "input")
    model = read_bpe(args.model_file)
    _write(_lines(" ".join(apply_bpe(model, s)) for s in read_sentences(args.input)), args.output)


# --- parser ----------------------------------------------------------------

STDOUT = "output file (stdout if omitted)"


class _HelpFormatter(argparse.ArgumentDefaultsHelpFormatter):
    """Show defaults, except the uninformative None/False ones."""

    def _get_help_string(self, action):
        if action.default is None or action.default is False:
            return action.help
        return super()._get_help_string(action)


def build_parser() -> argparse.ArgumentParser:
    d = DEFAULTS
    fmt = _HelpFormatter
    parser = argparse.ArgumentParser(
        prog="lexrerank", formatter_class=fmt,
        description="Alignment-based lexical shortlists, n-best agreement re-ranking, "
                    "metric breakdowns and corpus statistics.",
        epilog=f"decoder provenance: beam={d.beam}, length normalisation={d.length_normalisation}")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="INI file with one [section] per subcommand")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        p.set_defaults(func=func)
        return p

    p = add("train-align", cmd_train_align, "train an IBM1 or diagonal alignment model with EM")
    p.add_argument("--source", help="source side, one sentence per line")
    p.add_argument("--target", help="target side, line-parallel to --source")
    p.add_argument("--output", help="model file to write")
    p.add_argument("--model", choices=["ibm1", "diagonal"], default=d.train.model,
                   help="alignment prior")
    p.add_argument("--iterations", type=int, default=d.train.iterations, help="EM iterations")
    p.add_argument("--null-prob", type=float, default=d.train.null_prob,
                   help="prior mass on the NULL source word")
    p.add_argument("--tension", type=float, default=d.train.tension_init, help="initial tension")
    p.add_argument("--fixed-tension", action="store_true", default=not d.train.learn_tension,
                   help="do not learn the tension")
    p.add_argument("--tension-step", type=float, default=d.train.tension_step,
                   help="step size of the tension update")
    p.add_argument("--alpha", type=float, default=d.train.smoothing_alpha,
                   help="add-alpha smoothing of expected counts")
    p.add_argument("--reverse", action="store_true", default=False,
                   help="train p(source | target) instead")

    p = add("align", cmd_align, "Viterbi word alignments in i-j (target-source) format")
    p.add_argument("--model-file", help="model written by train-align")
    p.add_argument("--source", help="source side to align")
    p.add_argument("--target", help="target side, line-parallel to --source")
    p.add_argument("--unseen", choices=["floor", "error"], default="floor",
                   help="how to treat tokens missing from the model")
    p.add_argument("--output", help=STDOUT)

    p = add("build-shortlist", cmd_build_shortlist, "extract a top-k lexical shortlist")
    p.add_argument("--model-file", help="model written by train-align")
    p.add_argument("-k", type=int, default=d.shortlist_k, help="candidates per source token")
    p.add_argument("-f", type=int, default=d.shortlist_f,
                   help="most frequent target tokens always allowed")
    p.add_argument("--target-counts", help="target-side text to count frequencies (needed for -f)")
    p.add_argument("--direction", choices=["s2t", "t2s"], default="s2t",
                   help="s2t ranks by p(target|source); t2s reads a --reverse model")
    p.add_argument("--output", help="shortlist file (canonical format)")
    p.add_argument("--export", help="also write bare 'source target prob' triples here")

    p = add("coverage", cmd_coverage, "share of reference tokens reachable through a shortlist")
    p.add_argument("--shortlist", help="file written by build-shortlist")
    p.add_argument("--source", help="source side of the evaluation set")
    p.add_argument("--target", help="reference target side, line-parallel to --source")
    p.add_argument("--per-sentence", action="store_true", default=False,
                   help="also write one row per sentence")
    p.add_argument("--output", help=STDOUT)

    p = add("rerank", cmd_rerank, "re-rank n-best lists by inter-hypothesis agreement")
    p.add_argument("--nbest", help="'id ||| text ||| features ||| score' file")
    p.add_argument("--metric", choices=list(CLI_METRIC_NAMES), default=d.rerank_metric,
                   help="similarity used for agreement")
    p.add_argument("--beam", type=int, default=d.beam, help="maximum hypotheses per sentence")
    p.add_argument("--passthrough", action="store_true", default=False,
                   help="keep the decoder's 1-best (baseline)")
    p.add_argument("--annotated", help="also write re-ranked n-best with agreement scores")
    p.add_argument("--output", help=STDOUT)

    p = add("score", cmd_score, "BLEU breakdown row: p1 p2 p3 p4 BP BLEU METEOR")
    p.add_argument("--hyp", help="hypotheses, one per line (BPE markers are removed)")
    p.add_argument("--ref", help="references, line-parallel to --hyp")
    p.add_argument("--baseline", help="hypotheses to report BLEU/METEOR deltas against")
    p.add_argument("--output", help=STDOUT)

    p = add("stats", cmd_stats, "corpus length, vocabulary and overlap statistics")
    p.add_argument("--reference", help="in-domain corpus side to compare against")
    p.add_argument("--reference-name", default="reference",
                   help="column name of the reference corpus")
    p.add_argument("--corpus", action="append", metavar="NAME=PATH",
                   help="another corpus side to describe; repeatable")
    p.add_argument("--bpe", help="BPE merges file; without it every character is a piece")
    p.add_argument("--min-count", type=int, default=d.stats_min_count,
                   help="vocabulary threshold; 21 means 'more than 20 occurrences'")
    p.add_argument("--sample", action="append", metavar="NAME=FRACTION",
                   help="down-sample a corpus before counting; repeatable")
    p.add_argument("--seed", type=int, default=d.seed, help="random seed for --sample")
    p.add_argument("--output", help=STDOUT)

    p = add("bpe-learn", cmd_bpe_learn, "learn BPE merges (joint over all inputs)")
    p.add_argument("--input", action="append", help="training text; repeatable")
    p.add_argument("--merges", type=int, default=d.bpe_merges, help="number of merge operations")
    p.add_argument("--min-frequency", type=int, default=2,
                   help="stop when the best pair is rarer than this")
    p.add_argument("--output", help="merges file to write")

    p = add("bpe-apply", cmd_bpe_apply, "segment text with learned merges")
    p.add_argument("--model-file", help="merges file written by bpe-learn")
    p.add_argument("--input", help="text to segment")
    p.add_argument("--output", help=STDOUT)
    return parser


def _apply_config(parser, argv, args):
    sections = read_config(args.config)
    values = sections.get(args.command, {})
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or key in ("help", "func"):
            raise UsageError(f"[{args.command}] unknown key {key!r} in {args.config}")
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = _bool(raw)
        elif isinstance(action, argparse._AppendAction):
            defaults[key] = raw.split()
        else:
            try:
                defaults[key] = action.type(raw) if action.type else raw
            except ValueError as exc:
                raise UsageError(f"[{args.command}] {key}: {exc}") from None
            if action.choices is not None and defaults[key] not in action.choices:
                raise UsageError(f"[{args.command}] {key}: {raw!r} not in {list(action.choices)}")
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        for name in INPUT_OPTIONS:
            value = getattr(args, name, None)
            for path in value if isinstance(value, list) else [value]:
                if path is not None and not Path(path).exists():
                    raise FileNotFoundError(f"no such file: {path}")
        args.func(args)
    except (UsageError, FileNotFoundError, IsADirectoryError, PermissionError,
            InputFormatError) as exc:
        print(f"lexrerank {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ToolkitError, ValueError, ArithmeticError) as exc:
        print(f"lexrerank {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0
