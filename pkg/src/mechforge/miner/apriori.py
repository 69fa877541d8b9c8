"""Frequent-itemset mining and association-rule generation.

Supports and confidences are exact rationals held as integer count pairs;
thresholds are Fractions, so threshold comparisons carry no float
ambiguity. Candidate generation is the classic join-and-prune over
(k-1)-itemsets; candidate counting goes through a pluggable kernel.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from ..catalog import Catalog
from . import _kernels

RULES_VERSION = "v1"


class EmptyTransactionList(Exception):
    pass


class RebuildRequired(Exception):
    """The rule base was mined from a different catalog."""


class RulesFormatError(Exception):
    pass


def as_fraction(value) -> Fraction:
    """Floats are read with decimal-literal intent (0.2 means 1/5)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class MinerConfig:
    min_support: Fraction
    min_confidence: Fraction
    max_itemset_size: int = 4

    def __post_init__(self):
        object.__setattr__(self, "min_support", as_fraction(self.min_support))
        object.__setattr__(self, "min_confidence", as_fraction(self.min_confidence))
        if not 0 < self.min_support <= 1:
            raise ValueError(f"min_support must be in (0, 1], got {self.min_support}")
        if not 0 < self.min_confidence <= 1:
            raise ValueError(f"min_confidence must be in (0, 1], got {self.min_confidence}")
        if self.max_itemset_size < 2:
            raise ValueError(f"max_itemset_size must be >= 2, got {self.max_itemset_size}")


def default_config(n_transactions: int) -> MinerConfig:
    """An association must recur (two transactions) to count, and the
    confidence floor stays low so weak suggestions remain visible."""
    support = min(Fraction(2, n_transactions), Fraction(1)) if n_transactions else Fraction(1)
    return MinerConfig(min_support=support, min_confidence=Fraction(1, 10))


@dataclass(frozen=True)
class Itemset:
    items: tuple[int, ...]
    count: int
    total: int

    @property
    def support(self) -> Fraction:
        return Fraction(self.count, self.total)


@dataclass(frozen=True)
class AssociationRule:
    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    count_union: int
    count_antecedent: int
    total: int

    @property
    def support(self) -> Fraction:
        return Fraction(self.count_union, self.total)

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.count_union, self.count_antecedent)


def mine_frequent_itemsets(
    transactions: Sequence[Iterable[int]],
    config: MinerConfig,
    kernel: str | None = None,
) -> list[Itemset]:
    """All itemsets of size <= max_itemset_size with support >= min_support,
    each with its exact transaction count."""
    txns = [frozenset(t) for t in transactions]
    if not txns:
        raise EmptyTransactionList("mining requires at least one transaction")
    total = len(txns)
    ms_num, ms_den = config.min_support.numerator, config.min_support.denominator

    def frequent_enough(count: int) -> bool:
        return count * ms_den >= ms_num * total

    codes = sorted({item for txn in txns for item in txn})
    index_of = {code: idx for idx, code in enumerate(codes)}
    dense_txns = [frozenset(index_of[i] for i in txn) for txn in txns]

    singleton_counts = [0] * len(codes)
    for txn in dense_txns:
        for idx in txn:
            singleton_counts[idx] += 1

    found: dict[tuple[int, ...], int] = {}
    level = []
    for idx, count in enumerate(singleton_counts):
        if frequent_enough(count):
            found[(idx,)] = count
            level.append((idx,))

    counter = None
    size = 2
    while level and size <= config.max_itemset_size:
        candidates = _join_and_prune(level, size)
        if not candidates:
            break
        if counter is None:
            counter = _kernels.make_counter(dense_txns, len(codes), kernel)
        counts = counter.count(candidates)
        level = []
        for candidate, count in zip(candidates, counts):
            if frequent_enough(count):
                found[candidate] = count
                level.append(candidate)
        size += 1

    itemsets = [
        Itemset(tuple(codes[i] for i in dense_items), count, total)
        for dense_items, count in found.items()
    ]
    itemsets.sort(key=lambda s: (len(s.items), s.items))
    return itemsets


def _join_and_prune(level: list[tuple[int, ...]], size: int) -> list[tuple[int, ...]]:
    """Join (k-1)-itemsets sharing a (k-2)-prefix, prune candidates with
    an infrequent (k-1)-subset (the Apriori property)."""
    previous = set(level)
    candidates = []
    ordered = sorted(level)
    for a_pos, first in enumerate(ordered):
        for second in ordered[a_pos + 1:]:
            if first[:-1] != second[:-1]:
                break
            candidate = first + (second[-1],)
            if all(candidate[:cut] + candidate[cut + 1:] in previous
                   for cut in range(size - 2)):
                candidates.append(candidate)
    return candidates


def derive_rules(frequent: list[Itemset], config: MinerConfig) -> list[AssociationRule]:
    """Every A => B with A ∪ B frequent and exact confidence
    support(A ∪ B) / support(A) at or above the floor. Requires
    downward-closed input (what mine_frequent_itemsets produces)."""
    count_of = {s.items: s.count for s in frequent}
    mc_num, mc_den = config.min_confidence.numerator, config.min_confidence.denominator
    rules = []
    for itemset in frequent:
        if len(itemset.items) < 2:
            continue
        members = itemset.items
        for antecedent_size in range(1, len(members)):
            for antecedent in combinations(members, antecedent_size):
                count_antecedent = count_of[antecedent]
                if itemset.count * mc_den < mc_num * count_antecedent:
                    continue
                consequent = tuple(i for i in members if i not in antecedent)
                rules.append(AssociationRule(
                    antecedent, consequent, itemset.count, count_antecedent, itemset.total))
    rules.sort(key=lambda r: (-r.confidence, -r.support, r.antecedent, r.consequent))
    return rules


@dataclass
class RuleBase:
    kind: str  # "element" | "interaction"
    rules: list[AssociationRule]
    config: MinerConfig
    fingerprint: str
    total_transactions: int = field(default=0)


def mine_rulebase(
    catalog: Catalog,
    config: MinerConfig | None = None,
    kernel: str | None = None,
) -> tuple[RuleBase, RuleBase]:
    """Mine both tables offline so suggestions are ready at design time."""
    games = catalog.games
    if not games:
        raise EmptyTransactionList("catalog contains no games")
    if config is None:
        config = default_config(len(games))
    fingerprint = catalog.fingerprint

    bases = []
    for kind, table in (("element", catalog.element_transactions),
                        ("interaction", catalog.interaction_transactions)):
        transactions = [table[name] for name in games]
        frequent = mine_frequent_itemsets(transactions, config, kernel)
        rules = derive_rules(frequent, config)
        bases.append(RuleBase(kind, rules, config, fingerprint, len(games)))
    return bases[0], bases[1]


def _rule_payload(rule: AssociationRule) -> dict:
    return {
        "antecedent": list(rule.antecedent),
        "consequent": list(rule.consequent),
        "count_union": rule.count_union,
        "count_antecedent": rule.count_antecedent,
    }


def save_rulebases(element: RuleBase, interaction: RuleBase, destination: str | Path) -> None:
    payload = {
        "format": "mechforge-rules",
        "version": RULES_VERSION,
        "fingerprint": element.fingerprint,
        "total_transactions": element.total_transactions,
        "config": {
            "min_support": str(element.config.min_support),
            "min_confidence": str(element.config.min_confidence),
            "max_itemset_size": element.config.max_itemset_size,
        },
        "element_rules": [_rule_payload(r) for r in element.rules],
        "interaction_rules": [_rule_payload(r) for r in interaction.rules],
    }
    Path(destination).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_rulebases(
    source: str | Path,
    expected_fingerprint: str | None = None,
) -> tuple[RuleBase, RuleBase]:
    try:
        payload = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise RulesFormatError(f"unreadable rules file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != "mechforge-rules":
        raise RulesFormatError("not a rules file")
    if payload.get("version") != RULES_VERSION:
        raise RulesFormatError(
            f"unsupported rules version {payload.get('version')!r}, expected {RULES_VERSION!r}")
    fingerprint = payload["fingerprint"]
    if expected_fingerprint is not None and fingerprint != expected_fingerprint:
        raise RebuildRequired(
            "rule base was mined from a different catalog; re-run mining")
    config = MinerConfig(
        min_support=Fraction(payload["config"]["min_support"]),
        min_confidence=Fraction(payload["config"]["min_confidence"]),
        max_itemset_size=payload["config"]["max_itemset_size"],
    )
    total = payload["total_transactions"]

    def rules_from(key: str) -> list[AssociationRule]:
        return [
            AssociationRule(
                tuple(r["antecedent"]), tuple(r["consequent"]),
                r["count_union"], r["count_antecedent"], total)
            for r in payload[key]
        ]

    return (
        RuleBase("element", rules_from("element_rules"), config, fingerprint, total),
        RuleBase("interaction", rules_from("interaction_rules"), config, fingerprint, total),
    )
