"""Pure-Python candidate counting, used when the compiled kernel is
unavailable or explicitly selected via MF_KERNEL=python."""
from __future__ import annotations


class PythonCounter:
    """Per-item transaction bitmasks as arbitrary-precision ints; a
    candidate's support is the popcount of the intersection."""

    name = "python"

    def __init__(self, transactions, n_items: int):
        masks = [0] * n_items
        for t_index, txn in enumerate(transactions):
            bit = 1 << t_index
            for item in txn:
                masks[item] |= bit
        self._masks = masks

    def count(self, candidates) -> list[int]:
        masks = self._masks
        counts = []
        for candidate in candidates:
            acc = masks[candidate[0]]
            for item in candidate[1:]:
                acc &= masks[item]
                if not acc:
                    break
            counts.append(acc.bit_count())
        return counts
