from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from wordship import cli
from wordship.errors import InvariantError


@pytest.fixture()
def workdir(tmp_path, golden_dir):
    for path in golden_dir.iterdir():
        shutil.copy(path, tmp_path / path.name)
    return tmp_path


def test_analyze_golden(workdir, capsys):
    code = cli.cli_main(["analyze", "--input", str(workdir / "corpus.csv"), "--config", str(workdir / "wordship.json"),
                         "--out", str(workdir / "report")])
    assert code == 0
    out = capsys.readouterr().out
    assert "distinct words: 18" in out
    assert (workdir / "report" / "report.md").is_file()
    assert (workdir / "report" / "series" / "fig1_categories.csv").is_file()
    warnings = (workdir / "report" / "warnings.txt").read_text()
    assert "unresolved words" not in warnings


def test_analyze_lists_missing_cache_entries(workdir, capsys):
    cache = workdir / "contexts.ndjson"
    lines = [l for l in cache.read_text().splitlines() if '"word": "gap"' not in l or '"dictionary"' not in l]
    cache.write_text("\n".join(lines) + "\n")
    code = cli.cli_main(["analyze", "--input", str(workdir / "corpus.csv"), "--config", str(workdir / "wordship.json"),
                         "--out", str(workdir / "report")])
    assert code == 0
    warnings = (workdir / "report" / "warnings.txt").read_text()
    assert "[unresolved words] gap (providers: dictionary)" in warnings
    md = (workdir / "report" / "report.md").read_text()
    assert "### Unresolved words" in md and "- gap (providers: dictionary)" in md
    assert "gap" in capsys.readouterr().err


def test_analyze_single_format_and_saved_corpus(workdir):
    code = cli.cli_main(["analyze", "--input", str(workdir / "corpus.csv"), "--config", str(workdir / "wordship.json"),
                         "--out", str(workdir / "r"), "--format", "json", "--save-corpus", str(workdir / "c.json")])
    assert code == 0
    assert sorted(p.name for p in (workdir / "r").iterdir()) == ["report.json", "warnings.txt"]
    assert json.loads((workdir / "c.json").read_text())["schema_version"] == 1


def test_tokenize_prints_groups(capsys, golden_dir):
    config = golden_dir / "wordship.json"
    assert cli.cli_main(["tokenize", "Aharonov-Bohm effect", "--config", str(config)]) == 0
    lines = capsys.readouterr().out.splitlines()
    tokens = [l for l in lines if l[:1].isdigit()]
    assert tokens == ["1\taharonov\tgroup=1\tEW", "2\tbohm\tgroup=1\tEW", "3\teffect\tgroup=-\tSW"]


def test_fetch_contexts_from_config_provider(workdir, capsys):
    (workdir / "contexts.ndjson").unlink()
    (workdir / "words.txt").write_text("relaxation\ngap\n# comment\ngap\n")
    args = ["fetch-contexts", "--input", str(workdir / "words.txt"), "--provider", "encyclopedia",
            "--config", str(workdir / "wordship.json"), "--rate-limit", "1000", "--retries", "0"]
    assert cli.cli_main(args) == 0
    assert "fetched 2" in capsys.readouterr().out
    assert cli.cli_main(args) == 0
    assert "already cached 2" in capsys.readouterr().out
    assert len((workdir / "contexts.ndjson").read_text().splitlines()) == 2


def test_fetch_contexts_with_lexicon_file_and_explicit_cache(workdir, capsys):
    cache = workdir / "other.ndjson"
    code = cli.cli_main(["fetch-contexts", "--input", str(workdir / "corpus.csv"), "--provider",
                         str(workdir / "dictionary.tsv"), "--cache", str(cache)])
    assert code == 0
    # no config, so no eponym lexicon: aharonov and bohm count as semantic words
    assert len(cache.read_text().splitlines()) == 17


def test_validate_lexicons(workdir, capsys):
    assert cli.cli_main(["validate-lexicons", "--config", str(workdir / "wordship.json")]) == 0
    assert "eponyms: 2" in capsys.readouterr().out
    (workdir / "bad.txt").write_text("of\n")
    assert cli.cli_main(["validate-lexicons", "--eponyms", str(workdir / "bad.txt")]) == 1
    assert "not disjoint" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["analyze", "--bogus"],
    ["frobnicate"],
    [],
    ["fetch-contexts", "--input", "x"],
])
def test_usage_errors_exit_one(argv, capsys):
    assert cli.cli_main(argv) == 1
    assert "usage:" in capsys.readouterr().err


def test_input_errors_exit_one(tmp_path, capsys):
    (tmp_path / "empty.csv").write_text("article_id,year,volume,keyword\n")
    assert cli.cli_main(["analyze", "--input", str(tmp_path / "empty.csv"), "--out", str(tmp_path / "o")]) == 1
    assert "empty corpus" in capsys.readouterr().err
    assert cli.cli_main(["analyze", "--input", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "o")]) == 1
    (tmp_path / "c.json").write_text("{not json")
    assert cli.cli_main(["tokenize", "x", "--config", str(tmp_path / "c.json")]) == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_invariant_violation_exits_two(workdir, monkeypatch, capsys):
    def broken(*args, **kwargs):
        raise InvariantError("boom")

    monkeypatch.setattr(cli, "check_invariants", broken)
    code = cli.cli_main(["analyze", "--input", str(workdir / "corpus.csv"), "--config", str(workdir / "wordship.json"),
                         "--out", str(workdir / "report")])
    assert code == 2
    assert "internal error: boom" in capsys.readouterr().err


def test_help_and_version_exit_zero(capsys):
    assert cli.cli_main(["--help"]) == 0
    assert cli.cli_main(["--version"]) == 0


def test_module_entry_point(golden_dir):
    proc = subprocess.run([sys.executable, "-m", "wordship", "tokenize", "Surface of acoustic-wave"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "wordship: 3" in proc.stdout
