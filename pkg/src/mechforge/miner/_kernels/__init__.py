"""Counting kernel selection.

The compiled kernel is preferred when importable; the pure-Python one is
the fallback. MF_KERNEL=python|cython forces a choice.
"""
from __future__ import annotations

import os

from ._counting_py import PythonCounter

try:
    from . import _counting_cy
except ImportError:
    _counting_cy = None


class CythonCounter:
    name = "cython"

    def __init__(self, transactions, n_items: int):
        import numpy as np

        self._words = _counting_cy.pack_transactions(list(transactions), max(n_items, 1))
        self._np = np

    def count(self, candidates) -> list[int]:
        if not candidates:
            return []
        array = self._np.asarray(candidates, dtype=self._np.int64)
        return _counting_cy.count_candidates(self._words, array).tolist()


def compiled_kernel_available() -> bool:
    return _counting_cy is not None


def default_kernel() -> str:
    forced = os.environ.get("MF_KERNEL")
    if forced:
        return forced
    return "cython" if compiled_kernel_available() else "python"


def make_counter(transactions, n_items: int, kernel: str | None = None):
    kind = kernel or default_kernel()
    if kind == "cython":
        if _counting_cy is None:
            raise RuntimeError("compiled counting kernel is not built")
        return CythonCounter(transactions, n_items)
    if kind == "python":
        return PythonCounter(transactions, n_items)
    raise ValueError(f"unknown kernel {kind!r} (expected 'cython' or 'python')")
