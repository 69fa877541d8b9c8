"""Bundled fixture corpus and rubrics."""
from pathlib import Path

_ROOT = Path(__file__).parent


def corpus_dir() -> Path:
    return _ROOT / "corpus"


def rubrics_dir() -> Path:
    return _ROOT / "rubrics"


def rubric_path(name: str) -> Path:
    return rubrics_dir() / f"{name}.mfg"
