"""Corpus ingestion, the scan->fix->rescan benchmark, and report rendering."""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import corrector, dom, rules, scoring
from .errors import SchemaError
from .prompts import build_prompt
from .providers import Transcript, heuristic_fix, request_hash
from .scoring import AuditReport, BenchmarkResult, fmt2, fmt3

ROW_COLUMNS = (
    "webURL", "numViolations", "id", "initialScore",
    "description", "help", "html", "DOM", "DOMCorrected",
)


@dataclass
class CorpusEntry:
    source_id: str
    fetched_at: float
    html_text: str
    content_hash: str
    error: str = ""

    @classmethod
    def from_text(cls, source_id, text, fetched_at=0.0):
        return cls(
            source_id=source_id,
            fetched_at=fetched_at,
            html_text=text,
            content_hash=hashlib.sha256(text.encode("utf-8")).hexdigest(),
        )


def _default_fetch(url, timeout, user_agent):
    request = urllib.request.Request(url, headers={"User-Agent": user_agent})
    with urllib.request.urlopen(request, timeout=timeout) as response:
        return response.read().decode("utf-8", errors="replace")


def ingest(sources, cache_dir=None, fetch=None, refresh=False,
           timeout=30.0, user_agent="accessfix/0.1") -> list:
    """Read local paths and fetch URLs (cached by source) into corpus entries.

    Unreachable sources yield entries with ``error`` set; the run continues.
    """
    fetch = fetch or _default_fetch
    entries = []
    for source in sources:
        if source.startswith(("http://", "https://")):
            cache_path = None
            if cache_dir:
                os.makedirs(cache_dir, exist_ok=True)
                key = hashlib.sha256(source.encode("utf-8")).hexdigest()[:24]
                cache_path = os.path.join(cache_dir, key + ".html")
            if cache_path and os.path.exists(cache_path) and not refresh:
                with open(cache_path, encoding="utf-8") as handle:
                    entries.append(CorpusEntry.from_text(source, handle.read()))
                continue
            try:
                text = fetch(source, timeout, user_agent)
            except Exception as exc:  # noqa: BLE001 - isolation per source
                entries.append(CorpusEntry(source, time.time(), "", "",
                                           error=str(exc)))
                continue
            if cache_path:
                with open(cache_path, "w", encoding="utf-8") as handle:
                    handle.write(text)
            entries.append(CorpusEntry.from_text(source, text, time.time()))
        else:
            try:
                with open(source, encoding="utf-8") as handle:
                    text = handle.read()
            except OSError as exc:
                entries.append(CorpusEntry(source, time.time(), "", "",
                                           error=str(exc)))
                continue
            entries.append(CorpusEntry.from_text(source, text))
    return entries


@dataclass
class DatasetRow:
    web_url: str
    num_violations: int
    rule_id: str
    initial_score: int
    description: str
    help: str
    html: str
    dom: str
    dom_corrected: str = ""

    def to_record(self) -> dict:
        return {
            "webURL": self.web_url,
            "numViolations": self.num_violations,
            "id": self.rule_id,
            "initialScore": self.initial_score,
            "description": self.description,
            "help": self.help,
            "html": self.html,
            "DOM": self.dom,
            "DOMCorrected": self.dom_corrected,
        }

    @classmethod
    def from_record(cls, record: dict, where: str) -> "DatasetRow":
        for column in ROW_COLUMNS:
            if column not in record:
                raise SchemaError(f"{where}: missing column '{column}'")
        try:
            num_violations = int(record["numViolations"])
            initial_score = int(record["initialScore"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{where}: non-integer count or score") from exc
        return cls(
            web_url=record["webURL"],
            num_violations=num_violations,
            rule_id=record["id"],
            initial_score=initial_score,
            description=record["description"],
            help=record["help"],
            html=record["html"],
            dom=record["DOM"],
            dom_corrected=record["DOMCorrected"] or "",
        )


def rows_for_entry(entry, violations, score, dom_text,
                   dom_corrected="") -> list:
    return [
        DatasetRow(
            web_url=entry.source_id,
            num_violations=len(violations),
            rule_id=v.rule_id,
            initial_score=score,
            description=v.description,
            help=v.help,
            html=v.html_snippet,
            dom=dom_text,
            dom_corrected=dom_corrected,
        )
        for v in violations
    ]


def _bench_one(entry, ruleset, provider, strategy, impacts, thresholds,
               weights):
    doc = dom.parse_html(entry.html_text)
    dom_text = doc.serialize()
    before = rules.audit(doc, ruleset, web_url=entry.source_id,
                         impacts=impacts, thresholds=thresholds)
    initial = AuditReport.from_violations(entry.source_id, before, weights)
    corrected, records = corrector.correct_document(
        doc, before, provider, strategy
    )
    corrected_text = corrected.serialize()
    after = rules.audit(corrected, ruleset, web_url=entry.source_id,
                        impacts=impacts, thresholds=thresholds)
    final = AuditReport.from_violations(entry.source_id, after, weights)
    rows = rows_for_entry(entry, before, initial.score, dom_text,
                          corrected_text)
    return initial, final, rows, records


def run_benchmark(entries, provider, ruleset=None, strategy: str = "react",
                  impacts=None, thresholds=None, weights=None,
                  model_name: str = "", workers: int = 1):
    """Audit, correct, and re-audit every corpus entry.

    Returns (BenchmarkResult, rows, records, failures); failures are
    (source_id, error) pairs for entries that could not be ingested.
    Aggregation is an ordered reduce over source ids, so the worker count
    never changes the output.
    """
    failures = [(e.source_id, e.error) for e in entries if e.error]
    usable = sorted(
        (e for e in entries if not e.error), key=lambda e: e.source_id
    )

    def work(entry):
        return _bench_one(entry, ruleset, provider, strategy, impacts,
                          thresholds, weights)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, usable))
    else:
        results = [work(entry) for entry in usable]

    all_before, all_after, rows, records = [], [], [], []
    initial_reports, final_reports = [], []
    for initial, final, entry_rows, entry_records in results:
        initial_reports.append(initial)
        final_reports.append(final)
        all_before.extend(initial.violations)
        all_after.extend(final.violations)
        rows.extend(entry_rows)
        records.extend(entry_records)

    m = len(initial_reports)
    total_initial = sum(r.score for r in initial_reports)
    total_final = sum(r.score for r in final_reports)
    r_initial = Fraction(total_initial, m) if m else Fraction(0)
    r_final = Fraction(total_final, m) if m else Fraction(0)
    improvement = (
        scoring.improvement_percent(r_initial, r_final)
        if r_initial > 0 else Fraction(0)
    )
    result = BenchmarkResult(
        m=m,
        total_initial=total_initial,
        total_final=total_final,
        r_initial=r_initial,
        r_final=r_final,
        improvement_percent=improvement,
        per_rule_correction_rate=scoring.per_rule_correction_rate(
            all_before, all_after
        ),
        rule_distribution=scoring.rule_distribution(all_before),
        model_name=model_name or getattr(provider, "provider_id", ""),
        strategy=strategy,
    )
    return result, rows, records, failures


def export_rows(rows, fmt: str, path) -> None:
    """Write dataset rows as CSV or JSON."""
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=ROW_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow(row.to_record())
    elif fmt == "json":
        with open(path, "w", encoding="utf-8") as handle:
            json.dump([row.to_record() for row in rows], handle, indent=2)
            handle.write("\n")
    else:
        raise SchemaError(f"unknown export format: {fmt}")


def import_rows(path, fmt=None) -> list:
    """Read dataset rows back, validating the schema row by row."""
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "csv"
    rows = []
    if fmt == "csv":
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            for column in ROW_COLUMNS:
                if column not in header:
                    raise SchemaError(f"header: missing column '{column}'")
            for i, record in enumerate(reader):
                rows.append(DatasetRow.from_record(record, f"row {i + 1}"))
    elif fmt == "json":
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        if not isinstance(data, list):
            raise SchemaError("JSON dataset must be an array of objects")
        for i, record in enumerate(data):
            rows.append(DatasetRow.from_record(record, f"row {i + 1}"))
    else:
        raise SchemaError(f"unknown import format: {fmt}")
    return rows


def build_replay_transcript(entries, ruleset=None, strategy: str = "react",
                            impacts=None, thresholds=None) -> Transcript:
    """Record heuristic-oracle responses for every violation in the corpus,
    keyed by request hash, for later replay runs."""
    transcript = Transcript()
    for entry in entries:
        if entry.error:
            continue
        doc = dom.parse_html(entry.html_text)
        violations = rules.audit(doc, ruleset, web_url=entry.source_id,
                                 impacts=impacts, thresholds=thresholds)
        for v in violations:
            bundle = build_prompt(v, strategy)
            transcript.record(
                request_hash(bundle.messages()), heuristic_fix(v).raw_response
            )
    return transcript


def render_report(result: BenchmarkResult, style: str = "summary") -> str:
    """Render a benchmark result as one of the aggregate table styles."""
    if style == "json":
        return json.dumps(result.to_json_dict(), indent=2)
    if style == "summary":
        header = (
            f"{'Model':<24} {'Prompt':<18} {'Initial / Avg':<16} "
            f"{'Final / Avg':<16} {'% Score Decrease'}"
        )
        initial = f"{result.total_initial} / {fmt2(result.r_initial)}"
        final = f"{result.total_final} / {fmt2(result.r_final)}"
        row = (
            f"{result.model_name or '-':<24} {result.strategy or '-':<18} "
            f"{initial:<16} {final:<16} {fmt3(result.improvement_percent)}%"
        )
        return header + "\n" + row
    if style == "rates":
        lines = ["Error ID                        Percentage Corrected"]
        ordered = sorted(
            result.per_rule_correction_rate.items(),
            key=lambda item: (-item[1], item[0]),
        )
        for rule, rate in ordered:
            lines.append(f"{rule:<32}{float(rate):.0f}%")
        return "\n".join(lines)
    if style == "distribution":
        lines = ["Error Type                      Percentage"]
        ordered = sorted(
            result.rule_distribution.items(),
            key=lambda item: (-item[1], item[0]),
        )
        for rule, share in ordered:
            lines.append(f"{rule:<32}{float(share):.2f}%")
        return "\n".join(lines)
    raise SchemaError(f"unknown report style: {style}")
