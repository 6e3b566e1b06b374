"""Exact sparse rational linear algebra and per-block cohomology reports.

Everything here is over the rationals with `fractions.Fraction`; no floats.
Rank/kernel computations clear denominators column by column and then run a
fraction-free integer elimination (compiled kernel when available, pure-Python
twin otherwise).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

if os.environ.get("SUPERBRST_PURE") == "1":
    from . import _rowred_py as _rowred
else:
    try:
        from . import _rowred  # type: ignore[attr-defined]
    except ImportError:
        from . import _rowred_py as _rowred

#: which row-reduction kernel was selected at import ("c" or "python")
ROWRED_BACKEND = _rowred.BACKEND


class ConsistencyError(RuntimeError):
    """An internal invariant failed (e.g. consecutive differentials do not
    compose to zero).  Distinct from configuration errors."""


class SparseRationalMatrix:
    """Immutable-ish sparse matrix over Q; absent entries are zero."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        ent = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise ValueError(f"entry ({i},{j}) outside {rows}x{cols}")
                v = Fraction(v)
                if v:
                    ent[(i, j)] = v
        self.entries = ent

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def get(self, i, j):
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, SparseRationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        raise TypeError("unhashable")

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            w = ent.get(k, Fraction(0)) + v
            if w:
                ent[k] = w
            elif k in ent:
                del ent[k]
        return SparseRationalMatrix(self.rows, self.cols, ent)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SparseRationalMatrix(self.rows, self.cols, {})
        return SparseRationalMatrix(
            self.rows, self.cols, {k: c * v for k, v in self.entries.items()}
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (i, k), v in other.entries.items():
            by_row.setdefault(i, []).append((k, v))
        ent = {}
        for (i, j), v in self.entries.items():
            for k, w in by_row.get(j, ()):
                key = (i, k)
                s = ent.get(key, Fraction(0)) + v * w
                if s:
                    ent[key] = s
                elif key in ent:
                    del ent[key]
        return SparseRationalMatrix(self.rows, other.cols, ent)

    def apply(self, vec):
        """Matrix times a column vector given as a sequence of Fractions."""
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return out

    def column(self, j):
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def nnz(self):
        return len(self.entries)

    def __repr__(self):
        return f"SparseRationalMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def _integer_rows(mat):
    """Clear denominators per column; returns (row dicts, column scalings)."""
    den = [1] * mat.cols
    for (_, j), v in mat.entries.items():
        den[j] = lcm(den[j], v.denominator)
    rows = [dict() for _ in range(mat.rows)]
    for (i, j), v in mat.entries.items():
        rows[i][j] = int(v * den[j])
    return rows, den


def rank_kernel(mat):
    """Exact rank and right-kernel basis of a sparse rational matrix.

    Kernel vectors are returned as tuples of Fractions in reduced echelon
    form: vector k has entry 1 at its free column and 0 at every other free
    column, so the output is deterministic.
    """
    rows, den = _integer_rows(mat)
    pivot_cols, echelon = _rowred.row_reduce(rows, mat.cols)
    rank = len(pivot_cols)
    pivot_set = set(pivot_cols)
    kernel = []
    for f in range(mat.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * mat.cols
        v[f] = Fraction(1)
        for k in range(rank - 1, -1, -1):
            pc = pivot_cols[k]
            row = echelon[k]
            s = Fraction(0)
            for c, x in row.items():
                if c != pc:
                    s += x * v[c]
            v[pc] = -s / row[pc]
        # undo the column scaling, then renormalise to 1 at the free column
        w = [den[j] * v[j] for j in range(mat.cols)]
        scale = w[f]
        kernel.append(tuple(x / scale for x in w))
    return rank, kernel


def rank(mat):
    rows, _ = _integer_rows(mat)
    pivot_cols, _ = _rowred.row_reduce(rows, mat.cols)
    return len(pivot_cols)


class _Echelon:
    """Incremental reduced echelon form over Q, for span membership tests."""

    def __init__(self, n):
        self.n = n
        self.rows = {}  # pivot index -> vector (list of Fractions)

    def reduce(self, vec):
        v = list(vec)
        for p in sorted(self.rows):
            if v[p]:
                c = v[p]
                row = self.rows[p]
                for i in range(self.n):
                    if row[i]:
                        v[i] -= c * row[i]
        return v

    def insert(self, vec):
        """Reduce and insert; returns the pivot index or None if dependent."""
        v = self.reduce(vec)
        for p in range(self.n):
            if v[p]:
                inv = v[p]
                v = [x / inv for x in v]
                for q, row in self.rows.items():
                    if row[p]:
                        c = row[p]
                        self.rows[q] = [row[i] - c * v[i] for i in range(self.n)]
                self.rows[p] = v
                return p
        return None

    def contains(self, vec):
        return not any(self.reduce(vec))

    def dim(self):
        return len(self.rows)


def span_dimension(vectors, n):
    ech = _Echelon(n)
    for v in vectors:
        ech.insert(v)
    return ech.dim()


def quotient_basis(kernel_vectors, image_vectors, n):
    """Explicit representatives of (span kernel)/(span image).

    The image must be contained in the kernel span; raises ConsistencyError
    otherwise.  This is the independent path for dim H: it builds an actual
    quotient basis instead of subtracting ranks.
    """
    ker = _Echelon(n)
    for v in kernel_vectors:
        ker.insert(v)
    img = _Echelon(n)
    for v in image_vectors:
        if not ker.contains(v):
            raise ConsistencyError("image vector outside the kernel span")
        img.insert(v)
    reps = []
    combined = _Echelon(n)
    for v in img.rows.values():
        combined.insert(v)
    for v in kernel_vectors:
        if combined.insert(v) is not None:
            reps.append(tuple(v))
    return reps


DimH = Union[int, tuple, None]


@dataclass
class BettiRow:
    """One (block, degree) line of a cohomology report.

    ``dim_h`` is an int when the entry is stable, an interval ``(lo, hi)``
    when truncation may have lowered the computed ranks, or None when even
    the cochain dimension is truncated.
    """

    block_id: object
    degree: int
    dim_c: int
    rank_out: int
    rank_in: int
    dim_h: DimH
    stable: bool


@dataclass
class BettiReport:
    descriptor: dict
    rows: list = field(default_factory=list)

    def row(self, block_id, degree):
        for r in self.rows:
            if r.block_id == block_id and r.degree == degree:
                return r
        return None

    def sorted_rows(self):
        return sorted(self.rows, key=lambda r: (repr(r.block_id), r.degree))


def betti(diffs, block_id=None, boundary_complete=True, check_zero=True):
    """Betti rows for one block from its consecutive differential matrices.

    ``diffs`` is a list of DifferentialMatrix-like objects (``.source`` /
    ``.target`` blocks with ``degree``, ``basis``, ``complete`` attributes and
    a ``.matrix``), ordered by degree and consecutive: the target of each is
    the source of the next.  Composition of consecutive matrices must vanish,
    otherwise a ConsistencyError is raised (that always signals an upstream
    sign bug, never bad input data).
    """
    if not diffs:
        return []
    blocks = {}
    mats = {}
    for d in diffs:
        blocks[d.source.degree] = d.source
        blocks[d.target.degree] = d.target
        mats[d.source.degree] = d.matrix
    degrees = sorted(blocks)
    for p, q in zip(degrees, degrees[1:]):
        if q != p + 1:
            raise ValueError("differentials must cover consecutive degrees")
    if check_zero:
        for p in degrees[:-1]:
            m1 = mats.get(p)
            m2 = mats.get(p + 1)
            if m1 is None or m2 is None:
                continue
            # through a truncated middle block the composite of the
            # truncated matrices need not vanish even when d^2 = 0 does
            if not getattr(blocks[p + 1], "complete", True):
                continue
            if not (m2 @ m1).is_zero():
                raise ConsistencyError(
                    f"consecutive differentials at degrees {p},{p + 1} "
                    "do not compose to zero"
                )
    ranks = {p: rank(m) for p, m in mats.items()}
    rows = []
    for p in degrees:
        blk = blocks[p]
        dim_c = len(blk.basis)
        r_out = ranks.get(p, 0)
        r_in = ranks.get(p - 1, 0)
        complete_here = getattr(blk, "complete", True)
        nb_lo = blocks.get(p - 1)
        nb_hi = blocks.get(p + 1)
        complete_lo = (
            getattr(nb_lo, "complete", True) if nb_lo is not None else boundary_complete
        )
        complete_hi = (
            getattr(nb_hi, "complete", True) if nb_hi is not None else boundary_complete
        )
        stable = complete_here and complete_lo and complete_hi
        if stable:
            dim_h = dim_c - r_out - r_in
            if dim_h < 0:
                raise ConsistencyError("negative cohomology dimension")
        elif complete_here:
            dim_h = (0, dim_c - r_out - r_in)
        else:
            dim_h = None
        rows.append(BettiRow(block_id, p, dim_c, r_out, r_in, dim_h, stable))
    if all(r.stable for r in rows) and boundary_complete:
        eul_c = sum((-1) ** r.degree * r.dim_c for r in rows)
        eul_h = sum((-1) ** r.degree * r.dim_h for r in rows)
        if eul_c != eul_h:
            raise ConsistencyError("Euler characteristic mismatch on stable block")
    return rows


def euler_identity_holds(rows):
    """Check sum (-1)^p dim C^p == sum (-1)^p dim H^p over stable rows."""
    if not rows or not all(r.stable for r in rows):
        return False
    eul_c = sum((-1) ** r.degree * r.dim_c for r in rows)
    eul_h = sum((-1) ** r.degree * r.dim_h for r in rows)
    return eul_c == eul_h


def weight_character(report, degree):
    """Multiset of torus weights in H^degree, from a weight-mode report.

    Rejects rows produced in degree-window mode (their block id is not a
    weight vector, so the character is ill-defined across the window cut).
    """
    char = {}
    for r in report.rows if isinstance(report, BettiReport) else report:
        if r.degree != degree:
            continue
        if not isinstance(r.block_id, tuple):
            raise ValueError("weight characters require weight-block mode")
        if not r.stable:
            raise ValueError("weight character on an unstable entry")
        if r.dim_h:
            char[r.block_id] = char.get(r.block_id, 0) + r.dim_h
    return char
