"""Chevalley-Eilenberg differential on super-alternating multilinear cochains.

This is the independent oracle path: cochains are stored as value tables on
sorted basis tuples and the differential is computed from the evaluation
formulas

    (d1 g)(A_0,...,A_p) = sum_r (-1)^{r + S(r-1,r)} A_r g(...omit A_r...),
    (d2 g)(A_0,...,A_p) = sum_{r<s} (-1)^{s + S(r,s) - S(s-1,s)}
                             g(A_0,...,A_{r-1},[A_r,A_s],A_{r+1},...,omit A_s,...),

with S(k, l) = [A_l] ([g] + sum_{i<=k} [A_i]).  Nothing here touches the
Weyl-superalgebra machinery, so agreement with the Fock-side differential is
a genuine two-route check.

A degree-p cochain basis element is indexed by a sorted tuple of basis ids
(strictly increasing at even ids, repetitions allowed at odd ids) together
with a module basis index; its value on the matching sorted tuple is that
module vector and it vanishes on the other sorted tuples.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .homology import SparseRationalMatrix


def basis_tuples(alg, p):
    """Sorted p-tuples of basis ids: nondecreasing, strictly increasing at
    ids of even parity (those directions are alternating)."""
    out = []

    def rec(start, tup):
        if len(tup) == p:
            out.append(tuple(tup))
            return
        for a in range(start, alg.dim):
            tup.append(a)
            rec(a + 1 if alg.parity(a) == 0 else a, tup)
            tup.pop()

    rec(0, [])
    return out


def ce_basis(alg, module, p):
    """Ordered basis [(tuple, module index), ...] of the degree-p cochains."""
    return [(t, i) for t in basis_tuples(alg, p) for i in range(module.dim)]


def sort_tuple(alg, tup):
    """Sort a tuple of basis ids with the super-alternating sign.

    Swapping adjacent entries u, v multiplies by -(-1)^{[u][v]}; a repeated
    id of even parity makes the cochain value vanish.  Returns (sign, sorted
    tuple) or None.
    """
    t = list(tup)
    sign = 1
    n = len(t)
    for i in range(1, n):
        j = i
        while j > 0 and t[j - 1] > t[j]:
            sign *= -((-1) ** (alg.parity(t[j - 1]) * alg.parity(t[j])))
            t[j - 1], t[j] = t[j], t[j - 1]
            j -= 1
    for i in range(1, n):
        if t[i - 1] == t[i] and alg.parity(t[i]) == 0:
            return None
    return sign, tuple(t)


def eval_indicator(alg, T, tup):
    """Value of the indicator cochain of sorted tuple T on an arbitrary
    tuple of basis ids (scalar: 0 or +-1)."""
    res = sort_tuple(alg, tup)
    if res is None:
        return Fraction(0)
    sign, sorted_t = res
    if sorted_t != T:
        return Fraction(0)
    return Fraction(sign)


def tuple_parity(alg, T):
    return sum(alg.parity(a) for a in T) % 2


def ce_d_matrix(module, p, include_d1=True, include_d2=True):
    """Matrix of the degree-p differential (or of its d1/d2 part alone) on
    the indicator-tuple basis, mapping degree p to degree p+1."""
    alg = module.algebra
    src = ce_basis(alg, module, p)
    dst = ce_basis(alg, module, p + 1)
    dst_index = {bt: k for k, bt in enumerate(dst)}
    entries = {}

    def add(row, col, val):
        if not val:
            return
        key = (row, col)
        w = entries.get(key, Fraction(0)) + val
        if w:
            entries[key] = w
        elif key in entries:
            del entries[key]

    targets = basis_tuples(alg, p + 1)
    for col, (T, vi) in enumerate(src):
        gpar = (tuple_parity(alg, T) + module.carrier_parity(vi)) % 2
        for Tp in targets:
            pars = [alg.parity(a) for a in Tp]
            prefix = [0]
            for q in pars:
                prefix.append(prefix[-1] + q)

            def sig(k, l):
                # S(k, l) = [A_l] ([g] + sum_{i<=k} [A_i]); k may be -1
                return pars[l] * (gpar + prefix[k + 1])

            if include_d1:
                for r in range(p + 1):
                    c = eval_indicator(alg, T, Tp[:r] + Tp[r + 1 :])
                    if not c:
                        continue
                    sgn = Fraction((-1) ** (r + sig(r - 1, r)))
                    mat = module.matrix(Tp[r])
                    for (i, j), v in mat.entries.items():
                        if j == vi:
                            add(dst_index[(Tp, i)], col, sgn * c * v)
            if include_d2:
                for r in range(p + 1):
                    for s in range(r + 1, p + 1):
                        sgn = Fraction((-1) ** (s + sig(r, s) - sig(s - 1, s)))
                        for cid, coeff in alg.bracket(Tp[r], Tp[s]).items():
                            sub = (
                                Tp[:r]
                                + (cid,)
                                + Tp[r + 1 : s]
                                + Tp[s + 1 :]
                            )
                            c = eval_indicator(alg, T, sub)
                            if c:
                                add(
                                    dst_index[(Tp, vi)],
                                    col,
                                    sgn * coeff * c,
                                )
    return SparseRationalMatrix(len(dst), len(src), entries)


def ce_differential_matrix(module, p):
    """The full degree-p differential d^p = d^p_1 + d^p_2 (oracle path)."""
    return ce_d_matrix(module, p, True, True)


def iota_coefficient(alg, T, vparity):
    """Diagonal coefficient of the comparison isomorphism from indicator
    cochains to Fock monomials.

    The convention sends the indicator of the sorted tuple T with module
    vector v to gamma * X_T tensor v with

        gamma = (-1)^{h(T) + P(T) [v]} / prod_c mult_c(T)!,
        h(T)  = sum_{i<j} [E_{t_i}] ([E_{t_j}] + 1),  P(T) = sum_i [E_{t_i}].

    Any consistent normalisation is acceptable; this one makes the two
    differentials agree entrywise, which iota_compare certifies.
    """
    pars = [alg.parity(a) for a in T]
    h = 0
    for i in range(len(T)):
        for j in range(i + 1, len(T)):
            h += pars[i] * (pars[j] + 1)
    ptot = sum(pars) % 2
    mult = Fraction(1)
    run = 1
    for i in range(1, len(T) + 1):
        if i < len(T) and T[i] == T[i - 1]:
            run += 1
        else:
            mult *= factorial(run)
            run = 1
    return Fraction((-1) ** ((h + ptot * vparity) % 2)) / mult
