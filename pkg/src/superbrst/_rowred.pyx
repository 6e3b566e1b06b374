# cython: language_level=3
"""Compiled fraction-free row reduction kernel.

Semantics are identical to ``_rowred_py.row_reduce`` (same pivot rule, same
gcd normalisation); entries stay Python ints so arbitrary precision is
preserved.  The speedup comes from compiled loop and dict dispatch, which
dominates on the small-entry sparse systems produced by the cochain blocks.
"""

from math import gcd

BACKEND = "c"


def row_reduce(rows, Py_ssize_t ncols):
    """See ``_rowred_py.row_reduce``; this is its compiled twin."""
    cdef Py_ssize_t col, k, best_at, nactive
    cdef list active = []
    cdef list nxt, pivot_cols, echelon
    cdef dict row, prow, new
    cdef object v, x, y, pval, g

    k = 0
    for r in rows:
        if r:
            active.append((k, dict(r)))
        k += 1
    pivot_cols = []
    echelon = []
    for col in range(ncols):
        best_key = None
        best_at = -1
        nactive = len(active)
        for k in range(nactive):
            idx, row = active[k]
            v = row.get(col)
            if v:
                key = (len(row), idx)
                if best_key is None or key < best_key:
                    best_key = key
                    best_at = k
        if best_at < 0:
            continue
        pidx, prow = active.pop(best_at)
        pval = prow[col]
        nxt = []
        for idx, row in active:
            v = row.get(col)
            if not v:
                nxt.append((idx, row))
                continue
            new = {}
            for c, x in row.items():
                if c != col:
                    new[c] = x * pval
            for c, x in prow.items():
                if c == col:
                    continue
                y = new.get(c, 0) - x * v
                if y:
                    new[c] = y
                elif c in new:
                    del new[c]
            if new:
                g = 0
                for x in new.values():
                    g = gcd(g, x)
                    if g == 1:
                        break
                if g > 1:
                    for c in new:
                        new[c] //= g
                nxt.append((idx, new))
        active = nxt
        pivot_cols.append(col)
        echelon.append(prow)
    return pivot_cols, echelon
