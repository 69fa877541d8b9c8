import pytest
from click.testing import CliRunner

from mechforge import data
from mechforge.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def workspace(tmp_path, monkeypatch, runner):
    """An MF_DATA_DIR with catalog and rules built from the bundled corpus."""
    monkeypatch.setenv("MF_DATA_DIR", str(tmp_path))
    result = runner.invoke(main, ["ingest"])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, ["mine"])
    assert result.exit_code == 0, result.output
    return tmp_path


def test_ingest_writes_catalog(workspace):
    assert (workspace / "catalog.mfc").is_file()
    assert (workspace / "rules.mfr").is_file()


def test_ingest_reports_counts(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("MF_DATA_DIR", str(tmp_path))
    result = runner.invoke(main, ["ingest"])
    assert result.exit_code == 0
    assert "11 games" in result.output


def test_mine_rejects_out_of_range_support(runner, workspace):
    result = runner.invoke(main, ["mine", "--min-support", "1.5"])
    assert result.exit_code == 2
    assert "min_support" in result.output

    result = runner.invoke(main, ["mine", "--min-support", "nonsense"])
    assert result.exit_code == 2


def test_mine_accepts_fraction_strings(runner, workspace):
    result = runner.invoke(main, ["mine", "--min-support", "2/11",
                                  "--min-confidence", "0.25"])
    assert result.exit_code == 0
    assert "min_support=2/11" in result.output
    assert "min_confidence=1/4" in result.output


def test_recommend_on_corpus_game(runner, workspace):
    design = data.corpus_dir() / "frogger.vgd"
    result = runner.invoke(main, ["recommend", "--design", str(design),
                                  "--kind", "element", "--limit", "5"])
    assert result.exit_code == 0, result.output
    assert "element recommendations:" in result.output
    # frogger already holds most co-occurring items; list may be short but
    # every line shows a percentage and provenance
    for line in result.output.splitlines()[1:]:
        if line.strip().startswith(tuple("123456789")):
            assert "%" in line and "seen in:" in line


def test_recommend_partial_design_finds_costars(runner, workspace, tmp_path):
    design = tmp_path / "partial.vgd"
    design.write_text("SpriteSet\n    hopper > MovingAvatar\n")
    result = runner.invoke(main, ["recommend", "--design", str(design),
                                  "--kind", "element", "--limit", "4"])
    assert result.exit_code == 0, result.output
    assert "100.0%" in result.output


def test_grade_single_file_prints_total(runner, workspace):
    target = data.corpus_dir() / "space_invaders.vgd"
    result = runner.invoke(main, ["grade", str(target)])
    assert result.exit_code == 0, result.output
    assert "total 12 / 12" in result.output


def test_grade_directory_emits_csv_and_summary(runner, workspace, tmp_path, si_source):
    submissions = tmp_path / "submissions"
    submissions.mkdir()
    (submissions / "good.vgd").write_text(si_source)
    (submissions / "bad.vgd").write_text("???\n")
    result = runner.invoke(main, ["grade", str(submissions)])
    assert result.exit_code == 0, result.output
    assert "filename,runnable,total,max" in result.output
    assert "bad.vgd,false,0,12" in result.output
    assert "good.vgd,true,12,12" in result.output
    assert "mean score:" in result.output

    out_csv = tmp_path / "scores.csv"
    result = runner.invoke(main, ["grade", str(submissions), "--csv", str(out_csv)])
    assert result.exit_code == 0
    assert out_csv.read_text().startswith("filename,runnable,total,max")


def test_grade_unknown_rubric_fails_cleanly(runner, workspace, si_source, tmp_path):
    target = tmp_path / "x.vgd"
    target.write_text(si_source)
    result = runner.invoke(main, ["grade", str(target), "--rubric", "pinball"])
    assert result.exit_code == 1
    assert "pinball" in result.output


def test_recommend_refuses_stale_rules(runner, workspace, tmp_path, monkeypatch):
    # re-ingest a smaller corpus so the catalog changes but rules do not
    small = tmp_path / "small_corpus"
    small.mkdir()
    (small / "only.vgd").write_text(
        (data.corpus_dir() / "frogger.vgd").read_text())
    result = runner.invoke(main, ["ingest", "--corpus", str(small)])
    assert result.exit_code == 0
    design = data.corpus_dir() / "frogger.vgd"
    result = runner.invoke(main, ["recommend", "--design", str(design)])
    assert result.exit_code == 1
    assert "re-run mining" in result.output


def test_usage_errors_exit_two(runner):
    result = runner.invoke(main, ["recommend"])  # --design is required
    assert result.exit_code == 2
    result = runner.invoke(main, ["grade", "/nonexistent/path.vgd"])
    assert result.exit_code == 2
