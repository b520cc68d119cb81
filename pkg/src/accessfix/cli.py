"""Command-line entry point: scan, fix, bench, and report subcommands."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import corrector, dom, harness, rules, scoring
from .config import load_config
from .errors import AccessfixError, ConfigError
from .providers import make_provider
from .scoring import AuditReport, BenchmarkResult

_STRATEGY_NAMES = {
    "react": "react",
    "few-shot": "few_shot",
    "cot": "chain_of_thought",
}


def _add_source_args(parser):
    parser.add_argument("sources", nargs="+",
                        help="HTML file paths or http(s) URLs")
    parser.add_argument("--rules", default=None,
                        help="comma-separated rule ids (default: all)")
    parser.add_argument("--config", default=None, help="INI config file")
    parser.add_argument("--cache-dir", default=None,
                        help="cache directory for fetched URLs")
    parser.add_argument("--refresh", action="store_true",
                        help="refetch URLs even when cached")


def _add_provider_args(parser):
    parser.add_argument("--provider", required=True,
                        choices=("heuristic", "remote", "replay"))
    parser.add_argument("--strategy", default="react",
                        choices=tuple(_STRATEGY_NAMES))
    parser.add_argument("--model", default=None)
    parser.add_argument("--endpoint", default=None)
    parser.add_argument("--transcript", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accessfix",
        description="Audit HTML for accessibility violations, correct them "
                    "via a fix provider, and score the improvement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="audit sources and emit dataset rows")
    _add_source_args(scan)
    scan.add_argument("--out", default=None,
                      help="write rows to this .csv or .json file")

    fix = sub.add_parser("fix", help="audit, correct, and save corrected HTML")
    _add_source_args(fix)
    _add_provider_args(fix)
    fix.add_argument("--out-dir", default="corrected",
                     help="directory for corrected documents")

    bench = sub.add_parser(
        "bench", help="full scan->fix->rescan benchmark with a report"
    )
    _add_source_args(bench)
    _add_provider_args(bench)
    bench.add_argument("--report", default="summary",
                       choices=("summary", "rates", "distribution", "json"))
    bench.add_argument("--rows", default=None,
                       help="also write dataset rows to this .csv/.json file")
    bench.add_argument("--workers", type=int, default=1)

    report = sub.add_parser("report", help="render a report from a rows file")
    report.add_argument("rows_file")
    report.add_argument("--style", default="summary",
                        choices=("summary", "rates", "distribution", "json"))
    report.add_argument("--config", default=None)
    return parser


def _setup(args):
    config = load_config(args.config)
    ruleset = None
    if args.rules:
        ruleset = tuple(r.strip() for r in args.rules.split(",") if r.strip())
    entries = harness.ingest(args.sources, cache_dir=args.cache_dir,
                             refresh=args.refresh)
    return config, ruleset, entries


def _provider_from_args(args, config):
    cfg = config.provider
    cfg.kind = args.provider
    if args.model:
        cfg.model_name = args.model
    if args.endpoint:
        cfg.endpoint_url = args.endpoint
    if args.transcript:
        cfg.transcript_path = args.transcript
    return make_provider(cfg)


def _fmt_for(path: str) -> str:
    return "json" if path.endswith(".json") else "csv"


def _cmd_scan(args) -> int:
    config, ruleset, entries = _setup(args)
    rows = []
    for entry in entries:
        if entry.error:
            print(f"error: {entry.source_id}: {entry.error}", file=sys.stderr)
            continue
        doc = dom.parse_html(entry.html_text)
        violations = rules.audit(doc, ruleset, web_url=entry.source_id,
                                 impacts=config.impacts,
                                 thresholds=config.thresholds)
        score = scoring.url_score(violations, config.weights)
        rows.extend(harness.rows_for_entry(
            entry, violations, score, doc.serialize()
        ))
        print(f"{entry.source_id}: {len(violations)} violations, score {score}")
    if args.out:
        harness.export_rows(rows, _fmt_for(args.out), args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
    return 2 if any(e.error for e in entries) else 0


def _cmd_fix(args) -> int:
    config, ruleset, entries = _setup(args)
    provider = _provider_from_args(args, config)
    strategy = _STRATEGY_NAMES[args.strategy]
    os.makedirs(args.out_dir, exist_ok=True)
    summaries = []
    for entry in entries:
        if entry.error:
            print(f"error: {entry.source_id}: {entry.error}", file=sys.stderr)
            continue
        doc = dom.parse_html(entry.html_text)
        violations = rules.audit(doc, ruleset, web_url=entry.source_id,
                                 impacts=config.impacts,
                                 thresholds=config.thresholds)
        corrected, records = corrector.correct_document(
            doc, violations, provider, strategy
        )
        name = os.path.splitext(os.path.basename(entry.source_id))[0] or "page"
        out_path = os.path.join(args.out_dir, f"{name}.html")
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(corrected.serialize())
        applied = sum(1 for r in records if r.outcome == corrector.APPLIED)
        summaries.append({
            "source": entry.source_id,
            "corrected": out_path,
            "violations": len(violations),
            "applied": applied,
            "outcomes": {r.outcome: sum(
                1 for x in records if x.outcome == r.outcome
            ) for r in records},
        })
        print(f"{entry.source_id}: applied {applied}/{len(violations)} "
              f"fixes -> {out_path}")
    with open(os.path.join(args.out_dir, "records.json"), "w",
              encoding="utf-8") as handle:
        json.dump(summaries, handle, indent=2)
        handle.write("\n")
    return 2 if any(e.error for e in entries) else 0


def _cmd_bench(args) -> int:
    config, ruleset, entries = _setup(args)
    provider = _provider_from_args(args, config)
    strategy = _STRATEGY_NAMES[args.strategy]
    result, rows, _, failures = harness.run_benchmark(
        entries, provider, ruleset=ruleset, strategy=strategy,
        impacts=config.impacts, thresholds=config.thresholds,
        weights=config.weights, model_name=args.model or args.provider,
        workers=args.workers,
    )
    print(harness.render_report(result, args.report))
    if args.rows:
        harness.export_rows(rows, _fmt_for(args.rows), args.rows)
    for source, error in failures:
        print(f"error: {source}: {error}", file=sys.stderr)
    return 2 if failures else 0


def _cmd_report(args) -> int:
    config = load_config(args.config)
    rows = harness.import_rows(args.rows_file)
    by_url = {}
    for row in rows:
        by_url.setdefault(row.web_url, []).append(row)
    initial_reports, final_reports = [], []
    all_before, all_after = [], []
    for url in sorted(by_url):
        url_rows = by_url[url]
        score = url_rows[0].initial_score
        initial_reports.append(AuditReport(url, [], len(url_rows), score))
        corrected_text = url_rows[0].dom_corrected or url_rows[0].dom
        after = rules.audit(dom.parse_html(corrected_text), web_url=url,
                            impacts=config.impacts,
                            thresholds=config.thresholds)
        final_reports.append(
            AuditReport.from_violations(url, after, config.weights)
        )
        all_after.extend(after)
        all_before.extend(url_rows)
    m = len(initial_reports)
    total_initial = sum(r.score for r in initial_reports)
    total_final = sum(r.score for r in final_reports)
    r_initial = Fraction(total_initial, m) if m else Fraction(0)
    r_final = Fraction(total_final, m) if m else Fraction(0)

    class _RowViolation:
        def __init__(self, rule_id):
            self.rule_id = rule_id

    before_v = [_RowViolation(r.rule_id) for r in all_before]
    result = BenchmarkResult(
        m=m,
        total_initial=total_initial,
        total_final=total_final,
        r_initial=r_initial,
        r_final=r_final,
        improvement_percent=(
            scoring.improvement_percent(r_initial, r_final)
            if r_initial > 0 else Fraction(0)
        ),
        per_rule_correction_rate=scoring.per_rule_correction_rate(
            before_v, all_after
        ),
        rule_distribution=scoring.rule_distribution(before_v),
        model_name="recorded",
        strategy="",
    )
    print(harness.render_report(result, args.style))
    return 0


_COMMANDS = {
    "scan": _cmd_scan,
    "fix": _cmd_fix,
    "bench": _cmd_bench,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, AccessfixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
