"""Batch command line for corpus analysis.

Subcommands: analyze (per-utterance trace), stats (distribution tables plus
chi-square), resolve (zero-to-antecedent listing), validate (format check),
eval (gold comparison). Exit codes: 0 success, 1 format/validation problem,
2 internal fault.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, corpus as corpus_io
from .engine import EngineConfig, run_corpus
from .model import Discourse, validate_discourse


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centering",
        description="Centering-based discourse coherence and zero resolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, engine: bool = True) -> None:
        p.add_argument("files", nargs="+", metavar="FILE", help="corpus file(s)")
        p.add_argument(
            "--format",
            choices=("text", "machine"),
            default="text",
            help="output format (default: text)",
        )
        if engine:
            p.add_argument("--beam", type=int, default=4, help="hypothesis beam width")
            p.add_argument(
                "--no-zta",
                action="store_true",
                help="disable zero topic promotion (ablation)",
            )
            p.add_argument(
                "--no-global",
                action="store_true",
                help="disable former-center retrieval (ablation)",
            )

    add_common(sub.add_parser("analyze", help="per-utterance centering trace"))
    add_common(sub.add_parser("stats", help="distribution tables and chi-square"))
    add_common(sub.add_parser("resolve", help="zero-to-antecedent listing"))
    add_common(sub.add_parser("validate", help="check corpus well-formedness"), engine=False)
    add_common(sub.add_parser("eval", help="compare against gold annotations"))
    return parser


def _load(paths: Sequence[str]) -> list[Discourse]:
    discourses: list[Discourse] = []
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        discourses.extend(corpus_io.parse_corpus(text))
    return discourses


def _config(args: argparse.Namespace) -> EngineConfig:
    return EngineConfig(
        beam=args.beam,
        zta_enabled=not args.no_zta,
        global_enabled=not args.no_global,
    )


def _cmd_analyze(args: argparse.Namespace) -> int:
    discourses = _load(args.files)
    reports = run_corpus(discourses, _config(args))
    sys.stdout.write(corpus_io.serialize_reports(reports, args.format))
    return 0


def _cmd_resolve(args: argparse.Namespace) -> int:
    discourses = _load(args.files)
    reports = run_corpus(discourses, _config(args))
    lines = []
    for rep in reports:
        for u in rep.utterances:
            for pos, value in u.resolutions:
                if args.format == "machine":
                    lines.append(
                        json.dumps(
                            {
                                "discourse": rep.discourse_id,
                                "utterance": u.index,
                                "pos": pos,
                                "antecedent": value
                                if value is None or isinstance(value, str)
                                else sorted(value),
                                "cues": list(u.cues),
                            },
                            sort_keys=True,
                        )
                    )
                else:
                    shown = (
                        "UNRESOLVED"
                        if value is None
                        else value
                        if isinstance(value, str)
                        else "{" + "+".join(sorted(value)) + "}"
                    )
                    cue = f"  cue={'+'.join(u.cues)}" if u.cues else ""
                    lines.append(
                        f"{rep.discourse_id} u{u.index} zero@{pos} -> {shown}{cue}"
                    )
    sys.stdout.write("\n".join(lines) + ("\n" if lines else ""))
    return 0


def _fmt_row(label: str, cells: Sequence[int]) -> str:
    return f"{label:>14} | " + " | ".join(f"{c:>12}" for c in cells)


def _cmd_stats(args: argparse.Namespace) -> int:
    discourses = _load(args.files)
    reports = run_corpus(discourses, _config(args))
    table = analysis.tabulate_transitions(reports)
    cues = analysis.tabulate_disambiguation(reports)
    a, b, c, d = table.continue_vs_rest()
    chi = analysis.chi_square_2x2(a, b, c, d) if table.grand_total else None

    if args.format == "machine":
        sys.stdout.write(
            json.dumps(
                {
                    "columns": list(analysis.COLUMNS),
                    "with_zero": list(table.with_zero),
                    "without_zero": list(table.without_zero),
                    "totals": list(table.totals),
                    "chi_square_continue_vs_rest": chi,
                    "disambiguation": cues,
                },
                sort_keys=True,
            )
            + "\n"
        )
        return 0

    header = f"{'':>14} | " + " | ".join(f"{c:>12}" for c in analysis.COLUMNS)
    out = [
        "Distribution of centering transitions by zero use",
        header,
        _fmt_row("with zero", table.with_zero),
        _fmt_row("without zero", table.without_zero),
        _fmt_row("total", table.totals),
        "",
        f"chi-square (continue vs rest x zero): "
        + (f"{chi:.3f}" if chi is not None else "undefined"),
        "",
        "Disambiguation cues for rough-shift with zeros",
        "  "
        + "  ".join(f"{name}={cues[name]}" for name in ("LEXICAL", "TENSE", "AGREEMENT")),
    ]
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    discourses = _load(args.files)
    violations = []
    for d in discourses:
        violations.extend(validate_discourse(d))
    if args.format == "machine":
        for v in violations:
            sys.stdout.write(
                json.dumps(
                    {"code": v.code, "location": v.location, "message": v.message},
                    sort_keys=True,
                )
                + "\n"
            )
    else:
        for v in violations:
            sys.stdout.write(str(v) + "\n")
        sys.stdout.write(
            f"{len(discourses)} discourse(s), {len(violations)} violation(s)\n"
        )
    return 1 if violations else 0


def _cmd_eval(args: argparse.Namespace) -> int:
    discourses = _load(args.files)
    reports = run_corpus(discourses, _config(args))
    summary = analysis.evaluate_gold(reports, discourses)
    if args.format == "machine":
        sys.stdout.write(
            json.dumps(
                {
                    "correct": summary.correct,
                    "incorrect": summary.incorrect,
                    "unresolved": summary.unresolved,
                    "ungolded": summary.ungolded,
                    "accuracy": summary.accuracy,
                    "by_transition": {
                        k: list(v) for k, v in summary.by_transition.items()
                    },
                },
                sort_keys=True,
            )
            + "\n"
        )
        return 0
    if not summary.has_gold:
        sys.stdout.write("no gold annotations\n")
        return 0
    acc = summary.accuracy
    lines = [
        f"zeros scored: {summary.scored} (ungolded: {summary.ungolded})",
        f"correct: {summary.correct}  incorrect: {summary.incorrect}  "
        f"unresolved: {summary.unresolved}",
        f"accuracy: {acc:.1%}" if acc is not None else "accuracy: n/a",
        "by transition:",
    ]
    for label, (ok, bad, miss) in summary.by_transition.items():
        lines.append(f"  {label:>13}: correct={ok} incorrect={bad} unresolved={miss}")
    for detail in summary.details:
        if detail.status == "incorrect":
            lines.append(
                f"  MISMATCH {detail.discourse_id} u{detail.utterance_index} "
                f"zero@{detail.position}: predicted={detail.predicted} gold={detail.gold}"
            )
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "stats": _cmd_stats,
    "resolve": _cmd_resolve,
    "validate": _cmd_validate,
    "eval": _cmd_eval,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (corpus_io.CorpusFormatError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, corpus_io.CorpusFormatError):
            for diag in exc.diagnostics:
                print(f"  {diag}", file=sys.stderr)
        return 1
    except Exception as exc:  # internal fault
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
