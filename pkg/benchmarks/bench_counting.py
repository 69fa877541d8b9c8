"""Compares the compiled counting kernel against the pure-Python fallback.

The counting of candidate itemsets against the transaction list is the
inner loop of mining; everything else (candidate generation, rule
derivation) is identical between the two paths.

Run: python benchmarks/bench_counting.py [--rounds N]
"""
from __future__ import annotations

import argparse
import random
import time
from itertools import combinations

from mechforge.miner import compiled_kernel_available, make_counter, MinerConfig
from mechforge.miner import mine_frequent_itemsets


def synthetic_transactions(rng, n_txns, n_items, basket):
    return [frozenset(rng.sample(range(n_items), basket)) for _ in range(n_txns)]


def bench_counter(kernel, transactions, n_items, candidates, rounds):
    best = float("inf")
    counter = make_counter(transactions, n_items, kernel=kernel)
    for _ in range(rounds):
        started = time.perf_counter()
        counts = counter.count(candidates)
        best = min(best, time.perf_counter() - started)
    return best, counts


def bench_mining(kernel, transactions, config, rounds):
    best = float("inf")
    for _ in range(rounds):
        started = time.perf_counter()
        result = mine_frequent_itemsets(transactions, config, kernel=kernel)
        best = min(best, time.perf_counter() - started)
    return best, len(result)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=3,
                        help="repetitions per measurement (best-of)")
    parser.add_argument("--seed", type=int, default=8)
    args = parser.parse_args()

    if not compiled_kernel_available():
        raise SystemExit("compiled kernel not built; run pip install -e . first")

    rng = random.Random(args.seed)
    print(f"{'scenario':<44} {'python':>10} {'cython':>10} {'speedup':>8}")

    # raw candidate counting at a few scales
    for n_txns, n_items, basket, cand_size in [
            (512, 64, 12, 2),
            (2048, 128, 16, 2),
            (2048, 128, 16, 3),
            (8192, 256, 20, 2),
            (16384, 256, 48, 3),
            (32768, 128, 32, 4)]:
        transactions = synthetic_transactions(rng, n_txns, n_items, basket)
        pool = rng.sample(range(n_items), min(40, n_items))
        candidates = [tuple(sorted(c)) for c in combinations(pool, cand_size)][:4000]
        py_time, py_counts = bench_counter("python", transactions, n_items,
                                           candidates, args.rounds)
        cy_time, cy_counts = bench_counter("cython", transactions, n_items,
                                           candidates, args.rounds)
        assert py_counts == cy_counts, "kernels disagree"
        label = (f"count {len(candidates)} size-{cand_size} candidates, "
                 f"{n_txns}x{n_items}")
        print(f"{label:<44} {py_time * 1e3:>8.2f}ms {cy_time * 1e3:>8.2f}ms "
              f"{py_time / cy_time:>7.1f}x")

    # whole mining runs
    for n_txns, n_items, basket, support in [
            (256, 48, 10, "0.02"),
            (1024, 96, 14, "0.01")]:
        transactions = synthetic_transactions(rng, n_txns, n_items, basket)
        config = MinerConfig(min_support=support, min_confidence="0.2",
                             max_itemset_size=3)
        py_time, py_n = bench_mining("python", transactions, config, args.rounds)
        cy_time, cy_n = bench_mining("cython", transactions, config, args.rounds)
        assert py_n == cy_n
        label = f"mine {n_txns}x{n_items} (min_support={support}, {py_n} itemsets)"
        print(f"{label:<44} {py_time * 1e3:>8.2f}ms {cy_time * 1e3:>8.2f}ms "
              f"{py_time / cy_time:>7.1f}x")


if __name__ == "__main__":
    main()
