"""Command-line driver.

    segmsa align SEQS.fa SEGMENTS.tsv [-o OUT] [--dump-dir DIR] [options]
    segmsa scores | distances | tree SEQS.fa SEGMENTS.tsv [options]
    segmsa eval TEST.afa REF.afa [FLAGS.txt]

Exit status: 0 success, 2 input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .evaluation import ReferenceAlignment, evaluate, flagged_from_lines
from .guide_tree import neighbor_joining
from .io import format_msa, format_phylip, parse_aligned_fasta
from .matrices import read_matrix
from .neighborhoods import DEFAULT_CURVE, read_threshold_curve
from .pipeline import Config, align, build_segment_model
from .progressive import InvariantError
from .sequences import InputError, format_segment_annotations, read_fasta, read_segment_annotations

log = logging.getLogger("segmsa")

EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("fasta", type=Path)
    p.add_argument("annotations", type=Path)
    p.add_argument("--alpha", type=float, default=6.0, help="informative weight threshold (default 6)")
    p.add_argument("--min-seg-len", type=int, default=5)
    p.add_argument("--merge-gap", type=int, default=4)
    p.add_argument("--pair-scheme", choices=["progressive", "linear", "quadratic"], default="linear")
    p.add_argument("--gap-scheme", choices=["zero", "max"], default="max")
    p.add_argument("--threshold-curve", type=Path, metavar="FILE")
    p.add_argument("--matrix", type=Path, metavar="FILE", help="NCBI-format substitution matrix")
    p.add_argument("--gap-open", type=float, default=11)
    p.add_argument("--gap-extend", type=float, default=1)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--log-k", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)


def _config(args) -> Config:
    kw = dict(
        alpha=args.alpha,
        min_seg_len=args.min_seg_len,
        merge_gap=args.merge_gap,
        pair_scheme=args.pair_scheme,
        gap_scheme=args.gap_scheme,
        curve=read_threshold_curve(args.threshold_curve) if args.threshold_curve else DEFAULT_CURVE,
        matrix=read_matrix(args.matrix) if args.matrix else None,
        gap_open=args.gap_open,
        gap_extend=args.gap_extend,
        threads=args.threads,
        out_format=getattr(args, "out", "fasta"),
    )
    if args.lam is not None:
        kw["lam"] = args.lam
    if args.log_k is not None:
        kw["log_k"] = args.log_k
    try:
        return Config(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _load(args):
    seqs = read_fasta(args.fasta)
    return read_segment_annotations(args.annotations, seqs)


def _write(path, text) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_align(args) -> int:
    config = _config(args)
    seqs = _load(args)
    try:
        result = align(seqs, config)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _write(args.output, format_msa(result.msa, args.out))
    if args.tree:
        _write(args.tree, result.tree.newick() + "\n")
    if args.distances:
        _write(args.distances, format_phylip(result.distances, result.names))
    if args.report:
        _write(args.report, result.report())
    if args.dump_dir:
        d = Path(args.dump_dir)
        d.mkdir(parents=True, exist_ok=True)
        informative = [s.with_segments(v.informative_segments) for s, v in zip(seqs, result.views)]
        (d / "informative.tsv").write_text(format_segment_annotations(informative))
        (d / "scores.tsv").write_text(result.table.to_tsv() if result.table else "")
        (d / "distances.phy").write_text(format_phylip(result.distances, result.names))
        (d / "tree.nwk").write_text(result.tree.newick() + "\n")
        (d / "report.txt").write_text(result.report())
    for note in result.notes:
        log.warning(note)
    return 0


def cmd_stage(args) -> int:
    config = _config(args)
    seqs = _load(args)
    try:
        model = build_segment_model(seqs, config)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.command == "scores":
        _write(args.output, model.table.to_tsv())
    elif args.command == "distances":
        _write(args.output, format_phylip(model.distances, model.names))
    else:
        _write(args.output, neighbor_joining(model.distances, model.names).newick() + "\n")
    return 0


def cmd_eval(args) -> int:
    test = parse_aligned_fasta(args.test.read_bytes())
    ref_msa = parse_aligned_fasta(args.reference.read_bytes())
    if args.flags is None:
        log.warning("no flags file given; treating every reference column as conserved")
        ref = ReferenceAlignment.all_columns(ref_msa)
    else:
        ref = ReferenceAlignment(ref_msa, flagged_from_lines(args.flags.read_text().splitlines()))
    matrix = read_matrix(args.matrix) if args.matrix else None
    report = evaluate(test, ref, matrix, args.gap_penalty)
    _write(args.output, report.as_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="segmsa", description="Template-guided progressive alignment")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("align", help="build the multiple alignment")
    _add_config_args(p)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--out", choices=["fasta", "clustal"], default="fasta", help="alignment format")
    p.add_argument("--tree", metavar="FILE", help="write the guide tree (Newick)")
    p.add_argument("--distances", metavar="FILE", help="write the distance matrix (PHYLIP)")
    p.add_argument("--report", metavar="FILE", help="write stage timings and counters")
    p.add_argument("--dump-dir", metavar="DIR", help="write every intermediate artifact here")
    p.set_defaults(func=cmd_align)

    for name, text in (
        ("scores", "segment score table (TSV)"),
        ("distances", "pairwise distance matrix (PHYLIP)"),
        ("tree", "guide tree (Newick)"),
    ):
        p = sub.add_parser(name, help=text)
        _add_config_args(p)
        p.add_argument("-o", "--output", default="-")
        p.set_defaults(func=cmd_stage)

    p = sub.add_parser("eval", help="score an alignment against a reference")
    p.add_argument("test", type=Path)
    p.add_argument("reference", type=Path)
    p.add_argument("flags", type=Path, nargs="?")
    p.add_argument("--matrix", type=Path, metavar="FILE")
    p.add_argument("--gap-penalty", type=float, default=4)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="segmsa: %(message)s")
    try:
        return args.func(args)
    except (InputError, OSError, UnicodeDecodeError) as exc:
        print(f"segmsa: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError) as exc:
        print(f"segmsa: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
