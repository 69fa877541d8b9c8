"""Exhaustive enumeration oracle for the miner, plus output validators.

Independent of the mining path on purpose: every subset of the item
universe up to the size cap is counted by direct subset tests against the
transaction list, with exact integer counts throughout.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from mechforge.miner import MinerConfig


def enumerate_counts(transactions, max_size: int) -> dict[tuple[int, ...], int]:
    txns = [frozenset(t) for t in transactions]
    universe = sorted({item for txn in txns for item in txn})
    counts: dict[tuple[int, ...], int] = {}
    for size in range(1, max_size + 1):
        for combo in combinations(universe, size):
            as_set = frozenset(combo)
            counts[combo] = sum(1 for txn in txns if as_set <= txn)
    return counts


def brute_force_itemsets(transactions, config: MinerConfig) -> dict[tuple[int, ...], int]:
    """items -> transaction count, for every frequent itemset."""
    total = len(transactions)
    counts = enumerate_counts(transactions, config.max_itemset_size)
    return {
        items: count for items, count in counts.items()
        if Fraction(count, total) >= config.min_support
    }


def brute_force_rules(transactions, config: MinerConfig) -> set[tuple]:
    """(antecedent, consequent, count_union, count_antecedent) tuples."""
    counts = enumerate_counts(transactions, config.max_itemset_size)
    frequent = brute_force_itemsets(transactions, config)
    rules = set()
    for items, count_union in frequent.items():
        if len(items) < 2:
            continue
        for a_size in range(1, len(items)):
            for antecedent in combinations(items, a_size):
                count_antecedent = counts[antecedent]
                if Fraction(count_union, count_antecedent) >= config.min_confidence:
                    consequent = tuple(i for i in items if i not in antecedent)
                    rules.add((antecedent, consequent, count_union, count_antecedent))
    return rules


def validate_downward_closure(itemsets, config: MinerConfig) -> None:
    """Asserts the Apriori property and threshold conformance on a mining
    result: every subset present, counts monotone, supports at threshold."""
    count_of = {s.items: s.count for s in itemsets}
    for itemset in itemsets:
        assert itemset.items == tuple(sorted(set(itemset.items)))
        assert Fraction(itemset.count, itemset.total) >= config.min_support, (
            f"{itemset.items} below min_support")
        for size in range(1, len(itemset.items)):
            for subset in combinations(itemset.items, size):
                assert subset in count_of, (
                    f"subset {subset} of frequent {itemset.items} missing")
                assert count_of[subset] >= itemset.count, (
                    f"support not monotone: {subset} vs {itemset.items}")


def validate_rules(rules, config: MinerConfig) -> None:
    seen = set()
    for rule in rules:
        assert set(rule.antecedent) & set(rule.consequent) == set()
        assert rule.antecedent and rule.consequent
        assert 0 < rule.confidence <= 1
        assert rule.support <= rule.confidence
        assert rule.support >= config.min_support
        assert rule.confidence >= config.min_confidence
        key = (rule.antecedent, rule.consequent)
        assert key not in seen, f"duplicate rule {key}"
        seen.add(key)
