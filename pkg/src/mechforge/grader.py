"""Rubric-based scoring of submitted game descriptions.

One all-or-nothing point per rubric rule. A submission that does not
parse (or breaks referential integrity) is treated as not runnable and
scores zero. Matching is a maximum bipartite matching between submission
rules and rubric rules, so a duplicated submission line can never claim
two points for one rubric rule and line order never affects the score.
Termination sets are ignored.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import (
    ElementItem,
    design_element_types,
    resolve_collider,
)
from .vgdl import (
    GameDescription,
    ParseError,
    Scalar,
    SPRITE_REF_KEYS,
    parse_description,
)

RUBRIC_VERSION = "v1"


class RubricFormatError(Exception):
    pass


@dataclass(frozen=True)
class ElementPattern:
    """Behavior plus the params a submission element must carry. Params
    are compared in canonical space; extra params on the submission side
    are ignored."""
    behavior: str
    params: tuple[tuple[str, Scalar], ...] = ()

    def matches(self, item: ElementItem) -> bool:
        if item.behavior != self.behavior:
            return False
        have = item.params_dict()
        return all(k in have and have[k] == v for k, v in self.params)

    def label(self) -> str:
        if not self.params:
            return self.behavior
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.behavior}({inner})"


@dataclass(frozen=True)
class SpriteRule:
    element: ElementPattern

    def label(self) -> str:
        return f"sprite {self.element.label()}"


@dataclass(frozen=True)
class InteractionRule:
    first: ElementPattern
    second: ElementPattern
    effect: str
    params: tuple[tuple[str, Scalar], ...] = ()

    def label(self) -> str:
        suffix = "".join(f" {k}={v}" for k, v in self.params)
        return f"interaction {self.first.label()} {self.second.label()} > {self.effect}{suffix}"


@dataclass(frozen=True)
class Rubric:
    name: str
    sprite_rules: tuple[SpriteRule, ...]
    interaction_rules: tuple[InteractionRule, ...]

    @property
    def max_score(self) -> int:
        return len(self.sprite_rules) + len(self.interaction_rules)


@dataclass
class RuleOutcome:
    rule_label: str
    matched: bool
    matched_by: str | None


@dataclass
class ScoreReport:
    total: int
    max_score: int
    runnable: bool
    per_rule: list[RuleOutcome] = field(default_factory=list)
    failure: str | None = None


def grade(submission: str | bytes, rubric: Rubric) -> ScoreReport:
    try:
        game = parse_description(submission, name="submission")
    except ParseError as exc:
        outcomes = [RuleOutcome(r.label(), False, None)
                    for r in rubric.sprite_rules + rubric.interaction_rules]
        return ScoreReport(0, rubric.max_score, False, outcomes, failure=str(exc))
    return grade_description(game, rubric)


def grade_description(game: GameDescription, rubric: Rubric) -> ScoreReport:
    types = design_element_types(game)

    sprite_candidates = [(s.identifier, types[s.identifier]) for s in game.sprites]
    sprite_edges = [
        [j for j, rule in enumerate(rubric.sprite_rules) if rule.element.matches(item)]
        for _, item in sprite_candidates
    ]
    sprite_match = _max_matching(sprite_edges, len(rubric.sprite_rules))

    behavior_by_id = {s.identifier: s.behavior for s in game.sprites}
    inter_candidates = []
    for inter in game.interactions:
        first = resolve_collider(game, inter.first, types)
        second = resolve_collider(game, inter.second, types)
        canonical_params = {
            k: (behavior_by_id.get(v, v) if k in SPRITE_REF_KEYS and isinstance(v, str) else v)
            for k, v in inter.params.items()
        }
        inter_candidates.append((inter, first, second, canonical_params))
    inter_edges = [
        [
            j for j, rule in enumerate(rubric.interaction_rules)
            if rule.effect == inter.effect
            and rule.first.matches(first)
            and rule.second.matches(second)
            and all(k in params and params[k] == v for k, v in rule.params)
        ]
        for inter, first, second, params in inter_candidates
    ]
    inter_match = _max_matching(inter_edges, len(rubric.interaction_rules))

    outcomes = []
    for j, rule in enumerate(rubric.sprite_rules):
        left = sprite_match.get(j)
        outcomes.append(RuleOutcome(
            rule.label(), left is not None,
            sprite_candidates[left][0] if left is not None else None))
    for j, rule in enumerate(rubric.interaction_rules):
        left = inter_match.get(j)
        matched_by = None
        if left is not None:
            inter = inter_candidates[left][0]
            matched_by = f"{inter.first} {inter.second} > {inter.effect}"
        outcomes.append(RuleOutcome(rule.label(), left is not None, matched_by))

    total = len(sprite_match) + len(inter_match)
    return ScoreReport(total, rubric.max_score, True, outcomes)


def _max_matching(edges: list[list[int]], n_right: int) -> dict[int, int]:
    """Kuhn's augmenting paths; returns right-index -> left-index."""
    match_right = [-1] * n_right

    def try_assign(left: int, visited: set[int]) -> bool:
        for right in edges[left]:
            if right in visited:
                continue
            visited.add(right)
            if match_right[right] == -1 or try_assign(match_right[right], visited):
                match_right[right] = left
                return True
        return False

    for left in range(len(edges)):
        try_assign(left, set())
    return {r: l for r, l in enumerate(match_right) if l != -1}


# ── batch grading ─────────────────────────────────────────────────────


@dataclass
class BatchReport:
    rows: list[tuple[str, ScoreReport]]
    max_score: int

    @property
    def histogram(self) -> Counter:
        return Counter(report.total for _, report in self.rows)

    @property
    def mean(self) -> float:
        if not self.rows:
            return 0.0
        return sum(r.total for _, r in self.rows) / len(self.rows)

    @property
    def max_score_count(self) -> int:
        return sum(1 for _, r in self.rows if r.total == self.max_score)

    @property
    def zero_count(self) -> int:
        return sum(1 for _, r in self.rows if r.total == 0)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["filename", "runnable", "total", "max"])
        for filename, report in self.rows:
            writer.writerow([filename, str(report.runnable).lower(),
                             report.total, report.max_score])
        return buffer.getvalue()

    def summary_text(self) -> str:
        lines = [
            f"submissions: {len(self.rows)}",
            f"mean score: {self.mean:.2f} / {self.max_score}",
            f"max-score submissions: {self.max_score_count}",
            f"zero-score submissions: {self.zero_count}",
            "histogram:",
        ]
        for score in sorted(self.histogram):
            lines.append(f"  {score:>3}: {self.histogram[score]}")
        return "\n".join(lines)


def grade_batch(directory: str | Path, rubric: Rubric) -> BatchReport:
    """Grade every .vgd file in a directory, in filename order. Unreadable
    files are recorded as not runnable; the batch always completes."""
    rows = []
    for path in sorted(Path(directory).glob("*.vgd")):
        try:
            source = path.read_bytes()
        except OSError as exc:
            report = ScoreReport(0, rubric.max_score, False, failure=f"unreadable: {exc}")
        else:
            report = grade(source, rubric)
        rows.append((path.name, report))
    return BatchReport(rows, rubric.max_score)


# ── rubric persistence ────────────────────────────────────────────────


def _pattern_from_payload(entry: dict) -> ElementPattern:
    return ElementPattern(entry["behavior"], tuple(sorted(entry.get("params", {}).items())))


def load_rubric(source: str | Path) -> Rubric:
    try:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RubricFormatError(f"unreadable rubric file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != "mechforge-rubric":
        raise RubricFormatError("not a rubric file")
    if payload.get("version") != RUBRIC_VERSION:
        raise RubricFormatError(
            f"unsupported rubric version {payload.get('version')!r}, expected {RUBRIC_VERSION!r}")
    sprite_rules = tuple(
        SpriteRule(_pattern_from_payload(entry)) for entry in payload["sprite_rules"])
    interaction_rules = tuple(
        InteractionRule(
            _pattern_from_payload(entry["first"]),
            _pattern_from_payload(entry["second"]),
            entry["effect"],
            tuple(sorted(entry.get("params", {}).items())),
        )
        for entry in payload["interaction_rules"]
    )
    return Rubric(payload["name"], sprite_rules, interaction_rules)


def save_rubric(rubric: Rubric, destination: str | Path) -> None:
    payload = {
        "format": "mechforge-rubric",
        "version": RUBRIC_VERSION,
        "name": rubric.name,
        "sprite_rules": [
            {"behavior": r.element.behavior, "params": dict(r.element.params)}
            for r in rubric.sprite_rules
        ],
        "interaction_rules": [
            {
                "first": {"behavior": r.first.behavior, "params": dict(r.first.params)},
                "second": {"behavior": r.second.behavior, "params": dict(r.second.params)},
                "effect": r.effect,
                "params": dict(r.params),
            }
            for r in rubric.interaction_rules
        ],
    }
    Path(destination).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
