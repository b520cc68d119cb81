import json

from accessfix.cli import main
from accessfix.harness import import_rows

PAGE = (
    '<html lang="en"><body>'
    '<header><a href="#m">Skip to content</a></header>'
    '<main id="m"><h1>Title</h1><img src="cart-icon.png"></main>'
    "</body></html>"
)

CLEAN = (
    '<html lang="en"><head><meta name="viewport" content="width=device-width">'
    "</head><body>"
    '<header><a href="#m">Skip to content</a></header>'
    '<main id="m"><h1>Title</h1><p>All good.</p></main>'
    "</body></html>"
)


def write_page(tmp_path, name="page.html", text=PAGE):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_scan_writes_rows(tmp_path, capsys):
    page = write_page(tmp_path)
    out = tmp_path / "rows.csv"
    assert main(["scan", page, "--out", str(out)]) == 0
    rows = import_rows(out)
    assert len(rows) == 1
    assert rows[0].rule_id == "image-alt"
    assert "1 violations" in capsys.readouterr().out


def test_scan_clean_page_yields_no_rows(tmp_path):
    page = write_page(tmp_path, text=CLEAN)
    out = tmp_path / "rows.json"
    assert main(["scan", page, "--out", str(out)]) == 0
    assert import_rows(out) == []


def test_scan_rule_filter(tmp_path):
    page = write_page(tmp_path, text="<html><body><img src='x.png'></body></html>")
    out = tmp_path / "rows.json"
    assert main(["scan", page, "--rules", "html-has-lang",
                 "--out", str(out)]) == 0
    rows = import_rows(out)
    assert [r.rule_id for r in rows] == ["html-has-lang"]


def test_fix_heuristic_writes_corrected_html(tmp_path, capsys):
    page = write_page(tmp_path)
    out_dir = tmp_path / "fixed"
    assert main(["fix", page, "--provider", "heuristic",
                 "--out-dir", str(out_dir)]) == 0
    corrected = (out_dir / "page.html").read_text("utf-8")
    assert 'alt="cart icon"' in corrected
    summaries = json.loads((out_dir / "records.json").read_text("utf-8"))
    assert summaries[0]["applied"] == summaries[0]["violations"] == 1


def test_bench_prints_report_and_rows(tmp_path, capsys, corpus_paths):
    rows_path = tmp_path / "rows.json"
    argv = (["bench"] + [str(p) for p in corpus_paths]
            + ["--provider", "heuristic", "--rows", str(rows_path)])
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "614 / 24.56" in out
    assert len(import_rows(rows_path)) == 171


def test_report_from_rows_file(tmp_path, capsys, corpus_paths):
    rows_path = tmp_path / "rows.json"
    main(["bench"] + [str(p) for p in corpus_paths[:5]]
         + ["--provider", "heuristic", "--rows", str(rows_path)])
    capsys.readouterr()
    assert main(["report", str(rows_path)]) == 0
    assert "% Score Decrease" in capsys.readouterr().out


def test_unreadable_source_exit_code_2(tmp_path, capsys):
    good = write_page(tmp_path)
    assert main(["scan", str(tmp_path / "missing.html"), good]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_rule_exit_code_1(tmp_path, capsys):
    page = write_page(tmp_path)
    assert main(["scan", page, "--rules", "no-such-rule"]) == 1
    assert "error:" in capsys.readouterr().err


def test_bad_config_exit_code_1(tmp_path, capsys):
    page = write_page(tmp_path)
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[weights]\ncritical = banana\n", encoding="utf-8")
    assert main(["scan", page, "--config", str(cfg)]) == 1
    assert "error:" in capsys.readouterr().err


def test_config_overrides_apply(tmp_path, capsys):
    page = write_page(tmp_path)
    cfg = tmp_path / "heavy.ini"
    cfg.write_text("[weights]\ncritical = 50\n", encoding="utf-8")
    assert main(["scan", page, "--config", str(cfg)]) == 0
    assert "score 50" in capsys.readouterr().out
