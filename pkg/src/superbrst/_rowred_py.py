"""Pure-Python fraction-free row reduction over arbitrary-precision integers.

This is the fallback twin of the compiled kernel in ``_rowred.pyx``.  The two
implementations must stay algorithmically identical (same pivot choices, same
gcd normalisation) so that every downstream report is byte-for-byte
reproducible whichever one is loaded.
"""

from math import gcd

BACKEND = "python"


def row_reduce(rows, ncols):
    """Bring integer rows (dicts col -> nonzero int) into echelon form.

    Columns are eliminated left to right.  The pivot row is the active row
    with the fewest nonzero entries in the pivot column's support, ties broken
    by original row index, which makes the reduction deterministic.  Each
    updated row is rescaled by the gcd of its entries so coefficient growth
    stays bounded without ever leaving the integers.

    Returns ``(pivot_cols, echelon)`` where ``echelon[k]`` has its leading
    nonzero entry in column ``pivot_cols[k]`` and ``pivot_cols`` is strictly
    increasing.
    """
    active = [(i, dict(r)) for i, r in enumerate(rows) if r]
    pivot_cols = []
    echelon = []
    for col in range(ncols):
        best_key = None
        best_at = -1
        for k in range(len(active)):
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
