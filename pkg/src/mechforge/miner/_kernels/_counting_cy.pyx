# cython: boundscheck=False, wraparound=False
"""Bit-packed candidate support counting over uint64 words."""

import numpy as np

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #  define MF_POPCOUNT64(x) __builtin_popcountll(x)
    #else
    static int MF_POPCOUNT64(unsigned long long v) {
        int c = 0;
        while (v) { v &= v - 1; c++; }
        return c;
    }
    #endif
    """
    int MF_POPCOUNT64(unsigned long long x) nogil


def pack_transactions(transactions, Py_ssize_t n_items):
    """(n_items, n_words) uint64 matrix; bit t of row i set when
    transaction t contains item i."""
    cdef Py_ssize_t n_txns = len(transactions)
    cdef Py_ssize_t n_words = (n_txns + 63) // 64 if n_txns else 1
    words = np.zeros((n_items, n_words), dtype=np.uint64)
    cdef unsigned long long[:, ::1] view = words
    cdef Py_ssize_t t_index, item
    for t_index, txn in enumerate(transactions):
        for item in txn:
            view[item, t_index >> 6] |= (<unsigned long long> 1) << (t_index & 63)
    return words


def count_candidates(unsigned long long[:, ::1] item_words,
                     long long[:, ::1] candidates):
    cdef Py_ssize_t n_cands = candidates.shape[0]
    cdef Py_ssize_t width = candidates.shape[1]
    cdef Py_ssize_t n_words = item_words.shape[1]
    counts = np.zeros(n_cands, dtype=np.int64)
    if n_cands == 0 or item_words.shape[0] == 0:
        return counts
    scratch = np.zeros(n_words, dtype=np.uint64)
    cdef long long[::1] out = counts
    cdef unsigned long long[::1] buf = scratch
    cdef unsigned long long *rows = &item_words[0, 0]
    cdef unsigned long long *row
    cdef Py_ssize_t i, j, w
    cdef unsigned long long nonzero
    cdef long long total
    with nogil:
        for i in range(n_cands):
            row = rows + candidates[i, 0] * n_words
            if width == 1:
                total = 0
                for w in range(n_words):
                    total += MF_POPCOUNT64(row[w])
                out[i] = total
                continue
            nonzero = 0
            for w in range(n_words):
                buf[w] = row[w]
            j = 1
            while j < width:
                row = rows + candidates[i, j] * n_words
                nonzero = 0
                for w in range(n_words):
                    buf[w] &= row[w]
                    nonzero |= buf[w]
                if nonzero == 0:
                    break
                j += 1
            total = 0
            if nonzero != 0:
                for w in range(n_words):
                    total += MF_POPCOUNT64(buf[w])
            out[i] = total
    return counts
