"""Command line front end: corpus ingestion, offline mining, one-shot
recommendations, grading, and the HTTP service.

MF_DATA_DIR (default: current directory) is the root for catalog.mfc,
rules.mfr and rubrics/; the bundled corpus and rubrics are the fallback.
"""
from __future__ import annotations

import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import data
from .catalog import (
    Catalog,
    CatalogFormatError,
    DuplicateGameName,
    ingest_corpus,
    load_catalog,
    load_corpus_dir,
    save_catalog,
)
from .grader import Rubric, RubricFormatError, grade, grade_batch, load_rubric
from .miner import (
    EmptyTransactionList,
    MinerConfig,
    RebuildRequired,
    RuleBase,
    RulesFormatError,
    default_config,
    load_rulebases,
    mine_rulebase,
    save_rulebases,
)
from .recommender import DesignSession
from .vgdl import ParseError, parse_description


def data_root() -> Path:
    return Path(os.environ.get("MF_DATA_DIR", "."))


def _default_corpus() -> Path:
    local = data_root() / "corpus"
    return local if local.is_dir() else data.corpus_dir()


def _fraction_option(value: str | None) -> Fraction | None:
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"not a fraction or decimal: {value!r}")


def _load_catalog_checked(path: Path) -> Catalog:
    try:
        return load_catalog(path)
    except CatalogFormatError as exc:
        raise click.ClickException(str(exc))


def _load_rules_checked(path: Path, catalog: Catalog) -> tuple[RuleBase, RuleBase]:
    try:
        return load_rulebases(path, expected_fingerprint=catalog.fingerprint)
    except (RulesFormatError, RebuildRequired) as exc:
        raise click.ClickException(str(exc))


def _resolve_rubric(name_or_path: str) -> Rubric:
    candidates = [Path(name_or_path),
                  data_root() / "rubrics" / f"{name_or_path}.mfg",
                  data.rubric_path(name_or_path)]
    for candidate in candidates:
        if candidate.is_file():
            try:
                return load_rubric(candidate)
            except RubricFormatError as exc:
                raise click.ClickException(str(exc))
    raise click.ClickException(f"no rubric named {name_or_path!r}")


@click.group()
@click.version_option(package_name="mechforge")
def main():
    """Mine game-mechanic association rules and recommend design moves."""


@main.command()
@click.option("--corpus", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="Directory of .vgd files (default: MF_DATA_DIR/corpus "
                                 "or the bundled corpus).")
@click.option("--catalog", "catalog_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Output catalog file (default: MF_DATA_DIR/catalog.mfc).")
def ingest(corpus: Path | None, catalog_path: Path | None):
    """Encode a corpus directory into a catalog file."""
    corpus = corpus or _default_corpus()
    catalog_path = catalog_path or data_root() / "catalog.mfc"
    try:
        games = load_corpus_dir(corpus)
        built = ingest_corpus(games)
    except (ParseError, DuplicateGameName) as exc:
        raise click.ClickException(str(exc))
    save_catalog(built, catalog_path)
    click.echo(f"cataloged {len(built.games)} games: "
               f"{len(built.element_items)} element types, "
               f"{len(built.interaction_items)} interaction types -> {catalog_path}")


@main.command()
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None)
@click.option("--rules", "rules_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Output rules file (default: MF_DATA_DIR/rules.mfr).")
@click.option("--min-support", default=None, help="Fraction or decimal, e.g. 2/11 or 0.2.")
@click.option("--min-confidence", default=None, help="Fraction or decimal.")
@click.option("--max-itemset-size", default=4, show_default=True, type=int)
def mine(catalog_path, rules_path, min_support, min_confidence, max_itemset_size):
    """Mine both rule bases from a catalog (run offline, ahead of design time)."""
    catalog_path = catalog_path or data_root() / "catalog.mfc"
    rules_path = rules_path or data_root() / "rules.mfr"
    catalog = _load_catalog_checked(catalog_path)
    defaults = default_config(len(catalog.games))
    try:
        config = MinerConfig(
            min_support=_fraction_option(min_support) or defaults.min_support,
            min_confidence=_fraction_option(min_confidence) or defaults.min_confidence,
            max_itemset_size=max_itemset_size,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    try:
        element_rules, interaction_rules = mine_rulebase(catalog, config)
    except EmptyTransactionList as exc:
        raise click.ClickException(str(exc))
    save_rulebases(element_rules, interaction_rules, rules_path)
    click.echo(f"mined {len(element_rules.rules)} element rules and "
               f"{len(interaction_rules.rules)} interaction rules "
               f"(min_support={config.min_support}, "
               f"min_confidence={config.min_confidence}) -> {rules_path}")


@main.command()
@click.option("--design", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="A .vgd design, possibly incomplete.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None)
@click.option("--rules", "rules_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None)
@click.option("--kind", type=click.Choice(["element", "interaction", "both"]),
              default="both", show_default=True)
@click.option("--limit", default=10, show_default=True, type=click.IntRange(min=1))
def recommend(design, catalog_path, rules_path, kind, limit):
    """Rank catalog items against a design, highest confidence first."""
    catalog_path = catalog_path or data_root() / "catalog.mfc"
    rules_path = rules_path or data_root() / "rules.mfr"
    catalog = _load_catalog_checked(catalog_path)
    element_rules, interaction_rules = _load_rules_checked(rules_path, catalog)
    try:
        parsed = parse_description(design.read_bytes(), name=design.stem)
    except ParseError as exc:
        raise click.ClickException(str(exc))
    session = DesignSession("cli", catalog, element_rules, interaction_rules, design=parsed)
    kinds = ["element", "interaction"] if kind == "both" else [kind]
    for which in kinds:
        recs = (session.recommend_elements(limit) if which == "element"
                else session.recommend_interactions(limit))
        click.echo(f"{which} recommendations:")
        if not recs:
            click.echo("  (none)")
        for rank, rec in enumerate(recs, start=1):
            origin = "" if rec.origin == "rule" else f" [{rec.origin}]"
            click.echo(f"  {rank:>2}. {float(rec.confidence) * 100:5.1f}%  "
                       f"{rec.item.label()}  "
                       f"(support {rec.support}, seen in: {', '.join(rec.provenance)})"
                       f"{origin}")


@main.command(name="grade")
@click.argument("target", type=click.Path(exists=True, path_type=Path))
@click.option("--rubric", "rubric_name", default="space_invaders", show_default=True,
              help="Rubric name or path to a .mfg file.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Write the score table to a file instead of stdout.")
def grade_cmd(target: Path, rubric_name: str, csv_path: Path | None):
    """Grade one description file or a directory of submissions."""
    rubric = _resolve_rubric(rubric_name)
    if target.is_file():
        report = grade(target.read_bytes(), rubric)
        click.echo(f"{target.name}: total {report.total} / {report.max_score} "
                   f"(runnable: {str(report.runnable).lower()})")
        if report.failure:
            click.echo(f"  failure: {report.failure}")
        for outcome in report.per_rule:
            mark = "+" if outcome.matched else "-"
            via = f"  ({outcome.matched_by})" if outcome.matched_by else ""
            click.echo(f"  {mark} {outcome.rule_label}{via}")
        return
    batch = grade_batch(target, rubric)
    if csv_path is not None:
        csv_path.write_text(batch.to_csv(), encoding="utf-8")
        click.echo(f"wrote {len(batch.rows)} rows -> {csv_path}")
    else:
        click.echo(batch.to_csv(), nl=False)
    click.echo(batch.summary_text())


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None)
@click.option("--rules", "rules_path", type=click.Path(exists=True, dir_okay=False,
              path_type=Path), default=None)
@click.option("--corpus", type=click.Path(exists=True, file_okay=False, path_type=Path),
              default=None, help="If given, verify the catalog was built from this corpus.")
@click.option("--ui", "ui_dir", type=click.Path(exists=True, file_okay=False,
              path_type=Path), default=None, help="Static assets to serve at /.")
@click.option("--session-ttl", default=3600.0, show_default=True, type=float,
              help="Idle session expiry in seconds.")
def serve(port, host, catalog_path, rules_path, corpus, ui_dir, session_ttl):
    """Serve the design-session API (and optionally the panel UI)."""
    import uvicorn

    from .service import create_app

    catalog_path = catalog_path or data_root() / "catalog.mfc"
    rules_path = rules_path or data_root() / "rules.mfr"
    catalog = _load_catalog_checked(catalog_path)
    if corpus is not None:
        rebuilt = ingest_corpus(load_corpus_dir(corpus))
        if rebuilt.fingerprint != catalog.fingerprint:
            raise click.ClickException(
                "catalog does not match the corpus directory; re-run ingest")
    element_rules, interaction_rules = _load_rules_checked(rules_path, catalog)
    app = create_app(catalog, element_rules, interaction_rules,
                     rubrics=_bundled_rubrics(), session_ttl=session_ttl,
                     ui_dir=str(ui_dir) if ui_dir else None)
    uvicorn.run(app, host=host, port=port)


def _bundled_rubrics() -> dict[str, Rubric]:
    rubrics = {}
    for directory in (data.rubrics_dir(), data_root() / "rubrics"):
        if directory.is_dir():
            for path in sorted(directory.glob("*.mfg")):
                rubrics[path.stem] = load_rubric(path)
    return rubrics


if __name__ == "__main__":
    sys.exit(main())
