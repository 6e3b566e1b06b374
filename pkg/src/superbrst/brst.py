"""Differentials as exact matrices on finite blocks of mixed cochain spaces.

The cochain space is F(S) tensor V for a mixing set S and module V, graded by
the Fock degree.  Finite blocks come in two flavours:

* weight-block mode: a torus weight is assigned to every X generator and to
  every module basis vector; a block collects all basis tensors of one total
  weight.  Finiteness needs the effective generator weights (weight of X_a
  for a outside S, minus that for a in S) to generate a pointed monoid, which
  is checked exactly before any enumeration.
* degree-window mode: all monomials of total degree up to a bound; entries
  whose neighbouring blocks are truncated are flagged unstable.

The differential is assembled from operator terms (Weyl element) tensor
(module matrix): applying a term to a basis tensor m (x) v multiplies the
module factor past the Fock monomial with the Koszul sign
(-1)^{parity(module slot) * parity(m)}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import ce as _ce
from .homology import ConsistencyError, SparseRationalMatrix, betti as _betti
from .homology import BettiReport
from .supercore import Representation
from .weylrep import (
    D,
    FockMonomial,
    MixingSet,
    WeylElement,
    X,
    fock_apply,
    gamma,
    xparity,
)


class GradingError(ValueError):
    """A grading scheme cannot produce finite complete blocks."""


@dataclass(eq=False)
class GradingScheme:
    """Block strategy: "weight" needs weight_map (X generator id -> integer
    weight vector); "window" bounds the total monomial degree.  ``bound`` is
    the truncation bound in window mode and the seed bound for which weights
    get reported in weight mode."""

    mode: str
    weight_map: dict = None
    bound: int = 6

    def __post_init__(self):
        if self.mode not in ("weight", "window"):
            raise ValueError(f"unknown grading mode {self.mode!r}")
        if self.mode == "weight" and not self.weight_map:
            raise ValueError("weight-block mode requires a weight map")


@dataclass(eq=False)
class CochainBlock:
    """One finite block: ordered basis of (FockMonomial, module index)."""

    mixing: MixingSet
    module: Representation
    degree: int
    basis: tuple
    block_id: object
    complete: bool
    scheme: GradingScheme
    _index: dict = field(default=None, repr=False)

    def index(self):
        if self._index is None:
            self._index = {bt: k for k, bt in enumerate(self.basis)}
        return self._index

    @property
    def dim(self):
        return len(self.basis)


@dataclass(eq=False)
class DifferentialMatrix:
    source: CochainBlock
    target: CochainBlock
    matrix: SparseRationalMatrix
    truncated: bool = False


# ---------------------------------------------------------------------------
# pointedness: exact Fourier-Motzkin feasibility for a positive functional

def _fm_solve(constraints, nvars):
    """Solve sum_j c_j x_j >= rhs over Q; returns a point or None."""
    if nvars == 0:
        for _, rhs in constraints:
            if rhs > 0:
                return None
        return []
    lowers, uppers, passed = [], [], []
    for coeffs, rhs in constraints:
        c = coeffs[-1]
        rest = coeffs[:-1]
        if c > 0:
            lowers.append((rest, rhs, c))
        elif c < 0:
            uppers.append((rest, rhs, c))
        else:
            passed.append((rest, rhs))
    new = list(passed)
    for lrest, lr, lc in lowers:
        for urest, ur, uc in uppers:
            coeffs = tuple(
                lc * urest[i] - uc * lrest[i] for i in range(nvars - 1)
            )
            new.append((coeffs, lc * ur - uc * lr))
    sol = _fm_solve(new, nvars - 1)
    if sol is None:
        return None

    def val(rest):
        return sum(Fraction(rest[i]) * sol[i] for i in range(nvars - 1))

    los = [(Fraction(lr) - val(lrest)) / lc for lrest, lr, lc in lowers]
    ups = [(Fraction(ur) - val(urest)) / uc for urest, ur, uc in uppers]
    if los and ups:
        x = (max(los) + min(ups)) / 2
    elif los:
        x = max(los)
    elif ups:
        x = min(ups)
    else:
        x = Fraction(0)
    return sol + [x]


def positive_functional(vectors):
    """A rational functional phi with phi . v >= 1 for every v, or None.

    Existence is equivalent (Gordan) to: no nontrivial nonnegative rational
    combination of the vectors vanishes, i.e. the generated monoid is
    pointed.
    """
    vecs = [tuple(v) for v in vectors]
    if not vecs:
        return ()
    dim = len(vecs[0])
    constraints = [(v, 1) for v in vecs]
    sol = _fm_solve(constraints, dim)
    if sol is None:
        return None
    return tuple(sol)


def effective_generators(mixing, weight_map=None):
    """Legal generators with parity and (optionally) effective weight: the X
    weight for multiplication generators, its negative for derivatives."""
    alg = mixing.algebra
    out = []
    for kind, a in mixing.legal_generators():
        w = None
        if weight_map is not None:
            wa = weight_map[a]
            w = tuple(wa) if kind == X else tuple(-x for x in wa)
        out.append((kind, a, xparity(alg, a), w))
    return out


def pointedness_witness(mixing, weight_map):
    """Check pointedness of the effective generator weights; returns the
    positive functional, or raises GradingError pointing at window mode."""
    gens = effective_generators(mixing, weight_map)
    phi = positive_functional([w for (_, _, _, w) in gens])
    if phi is None:
        raise GradingError(
            "effective generator weights admit a vanishing nonnegative "
            "combination, so weight blocks are not finite; use degree-window "
            "mode instead"
        )
    return phi


# ---------------------------------------------------------------------------
# basis enumeration

def window_monomials(mixing, bound, degree=None):
    """All legal Fock monomials with total degree <= bound (optionally of a
    fixed Fock degree), in deterministic sorted order."""
    alg = mixing.algebra
    gens = effective_generators(mixing)
    out = []

    def rec(k, total, xs, ds):
        if k == len(gens):
            m = FockMonomial(tuple(xs), tuple(ds))
            if degree is None or m.degree() == degree:
                out.append(m)
            return
        kind, a, par, _ = gens[k]
        cap = 1 if par else bound - total
        for e in range(cap + 1):
            if e:
                (xs if kind == X else ds).append((a, e))
            rec(k + 1, total + e, xs, ds)
            if e:
                (xs if kind == X else ds).pop()

    rec(0, 0, [], [])
    out.sort(key=lambda m: m.sort_key())
    return out


def _max_total_degree(mixing, p):
    """Largest total degree a legal monomial of Fock degree p can have, or
    None when the degree-p slice is infinite-dimensional."""
    alg = mixing.algebra
    cap_x = 0
    cap_d = 0
    inf_x = inf_d = False
    for kind, a, par, _ in effective_generators(mixing):
        if kind == X:
            if par:
                cap_x += 1
            else:
                inf_x = True
        else:
            if par:
                cap_d += 1
            else:
                inf_d = True
    # |xs| - |ds| = p, total = p + 2 |ds|, |ds| <= cap_d, |xs| <= cap_x
    if inf_d and inf_x:
        return None
    if inf_d:
        hi_ds = cap_x - p if not inf_x else None
        if hi_ds is None:
            return None
        ds = hi_ds
    elif inf_x:
        ds = cap_d
    else:
        ds = min(cap_d, cap_x - p)
    if ds < 0 or (not inf_x and p + ds > cap_x):
        return p  # empty slice: any bound is complete
    return p + 2 * ds


def _weight_solutions(mixing, weight_map, phi, target):
    """All legal monomials of total effective weight ``target``; complete by
    pointedness (the positive functional bounds every exponent)."""
    gens = effective_generators(mixing, weight_map)
    dim = len(target)
    out = []

    def phi_dot(w):
        return sum(phi[i] * w[i] for i in range(dim))

    def rec(k, residual, xs, ds):
        budget = phi_dot(residual)
        if budget < 0:
            return
        if k == len(gens):
            if not any(residual):
                out.append(FockMonomial(tuple(xs), tuple(ds)))
            return
        kind, a, par, w = gens[k]
        cost = phi_dot(w)
        cap = 1 if par else int(budget / cost)
        for e in range(cap + 1):
            if e:
                (xs if kind == X else ds).append((a, e))
            rec(
                k + 1,
                tuple(residual[i] - e * w[i] for i in range(dim)),
                xs,
                ds,
            )
            if e:
                (xs if kind == X else ds).pop()

    rec(0, tuple(target), [], [])
    out.sort(key=lambda m: m.sort_key())
    return out


def _module_weights(module):
    if module.weights is None:
        raise GradingError(
            "weight-block mode requires module weights on the carrier"
        )
    return module.weights


def enumerate_block(mixing, module, p, scheme, block_id=None):
    """Complete, duplicate-free ordered basis of one block.

    In window mode ``block_id`` is ignored (the block is the degree-p window
    slice).  In weight mode ``block_id`` is the total weight vector.
    """
    if scheme.mode == "window":
        monos = window_monomials(mixing, scheme.bound, degree=p)
        basis = tuple(
            (m, vi) for m in monos for vi in range(module.dim)
        )
        mt = _max_total_degree(mixing, p)
        complete = mt is not None and mt <= scheme.bound
        return CochainBlock(
            mixing, module, p, basis, "window", complete, scheme
        )
    if block_id is None:
        raise ValueError("weight-block mode requires a block id (weight)")
    phi = pointedness_witness(mixing, scheme.weight_map)
    wmod = _module_weights(module)
    pairs = []
    for vi in range(module.dim):
        residual = tuple(
            block_id[i] - wmod[vi][i] for i in range(len(block_id))
        )
        for m in _weight_solutions(mixing, scheme.weight_map, phi, residual):
            if m.degree() == p:
                pairs.append((m, vi))
    pairs.sort(key=lambda t: (t[0].sort_key(), t[1]))
    return CochainBlock(
        mixing, module, p, tuple(pairs), tuple(block_id), True, scheme
    )


# ---------------------------------------------------------------------------
# operators

@dataclass(eq=False)
class OperatorTerm:
    """One summand (Weyl element) tensor (module matrix); matrix None means
    the identity.  ``module_parity`` drives the Koszul sign past the Fock
    factor."""

    wel: WeylElement
    module_matrix: object
    module_parity: int


def delta1_terms(mixing, module):
    alg = mixing.algebra
    terms = []
    for a in range(alg.dim):
        mat = module.matrix(a)
        if mat.is_zero():
            continue
        wel = WeylElement.generator(alg, X, a, Fraction((-1) ** alg.parity(a)))
        terms.append(OperatorTerm(wel, mat, alg.parity(a)))
    return terms


def delta2_terms(mixing):
    alg = mixing.algebra
    wel = WeylElement.zero(alg)
    for a in range(alg.dim):
        xa = WeylElement.generator(alg, X, a, Fraction((-1) ** alg.parity(a), 2))
        wel = wel + xa * gamma(alg, a)
    if wel.is_zero():
        return []
    return [OperatorTerm(wel, None, 0)]


def delta_terms(mixing, module):
    return delta1_terms(mixing, module) + delta2_terms(mixing)


def _matrix_columns(mat):
    cols = {}
    for (i, j), v in mat.entries.items():
        cols.setdefault(j, []).append((i, v))
    return cols


def apply_terms(terms, mixing, module, vec):
    """Apply an operator (sum of terms) to a vector, a dict mapping
    (FockMonomial, module index) -> Fraction.  Exact: no truncation."""
    alg = mixing.algebra
    colcache = {}
    out = {}
    for (m, vi), c in vec.items():
        pm = m.parity(alg)
        for t in terms:
            sgn = Fraction((-1) ** (t.module_parity * pm)) * c
            fv = fock_apply(t.wel, m, mixing)
            if not fv:
                continue
            if t.module_matrix is None:
                tcol = ((vi, Fraction(1)),)
            else:
                key = id(t.module_matrix)
                if key not in colcache:
                    colcache[key] = _matrix_columns(t.module_matrix)
                tcol = colcache[key].get(vi, ())
            for m2, c2 in fv.items():
                for i, v in tcol:
                    k = (m2, i)
                    w = out.get(k, Fraction(0)) + sgn * c2 * v
                    if w:
                        out[k] = w
                    elif k in out:
                        del out[k]
    return out


def apply_terms_basis(terms, block):
    """Columns of an operator on a block's basis, as exact vectors."""
    return [
        apply_terms(terms, block.mixing, block.module, {bt: Fraction(1)})
        for bt in block.basis
    ]


def matrix_into(columns, source, target):
    """Assemble exact operator columns into a matrix with the target block's
    basis.  Image components outside the target are dropped only when the
    target is incomplete (window truncation); otherwise they signal an
    enumeration bug and raise."""
    index = target.index()
    entries = {}
    truncated = False
    for j, col in enumerate(columns):
        for key, v in col.items():
            i = index.get(key)
            if i is None:
                if target.complete:
                    m, vi = key
                    raise ConsistencyError(
                        f"image term {m}|{vi} missing from complete target "
                        f"block {target.block_id} degree {target.degree}"
                    )
                truncated = True
                continue
            entries[(i, j)] = v
    mat = SparseRationalMatrix(target.dim, source.dim, entries)
    return mat, truncated


def _target_block(src):
    """The degree p+1 block matching a source block."""
    bid = None if src.scheme.mode == "window" else src.block_id
    return enumerate_block(
        src.mixing, src.module, src.degree + 1, src.scheme, block_id=bid
    )


def delta1_matrix(src, target=None):
    """Matrix of the ghost-times-action part of the differential."""
    if target is None:
        target = _target_block(src)
    cols = apply_terms_basis(delta1_terms(src.mixing, src.module), src)
    mat, trunc = matrix_into(cols, src, target)
    return DifferentialMatrix(src, target, mat, trunc)


def delta2_matrix(src, target=None):
    """Matrix of the bracket part (carries the exact factor 1/2)."""
    if target is None:
        target = _target_block(src)
    cols = apply_terms_basis(delta2_terms(src.mixing), src)
    mat, trunc = matrix_into(cols, src, target)
    return DifferentialMatrix(src, target, mat, trunc)


def delta_matrix(src, target=None):
    """Matrix of the full degree-raising differential."""
    if target is None:
        target = _target_block(src)
    cols = apply_terms_basis(delta_terms(src.mixing, src.module), src)
    mat, trunc = matrix_into(cols, src, target)
    return DifferentialMatrix(src, target, mat, trunc)


# ---------------------------------------------------------------------------
# the comparison isomorphism with the multilinear-cochain oracle

def _fock_tuple(mono):
    t = []
    for a, e in mono.xs:
        t.extend([a] * e)
    return tuple(t)


def iota_compare(module, p, parts=("delta1", "delta2")):
    """Check that each differential part on F_p tensor V coincides with the
    conjugated multilinear-cochain differential at S = 0.

    Returns (ok, report).  The report lists the worst entry discrepancy per
    part; any nonzero discrepancy means a sign-convention bug.
    """
    alg = module.algebra
    mixing = MixingSet.none(alg)
    scheme = GradingScheme("window", bound=p + 1)
    src = enumerate_block(mixing, module, p, scheme)
    dst = enumerate_block(mixing, module, p + 1, scheme)
    if not src.complete or not dst.complete:
        raise ValueError("window too small for the comparison")

    ce_src = _ce.ce_basis(alg, module, p)
    ce_dst = _ce.ce_basis(alg, module, p + 1)
    src_map = {(_fock_tuple(m), vi): k for k, (m, vi) in enumerate(src.basis)}
    dst_map = {(_fock_tuple(m), vi): k for k, (m, vi) in enumerate(dst.basis)}
    if len(src_map) != len(ce_src) or len(dst_map) != len(ce_dst):
        raise ConsistencyError("cochain bases do not match across the paths")

    gam_src = [
        _ce.iota_coefficient(alg, T, module.carrier_parity(vi))
        for (T, vi) in ce_src
    ]
    gam_dst = [
        _ce.iota_coefficient(alg, T, module.carrier_parity(vi))
        for (T, vi) in ce_dst
    ]

    report = {}
    ok = True
    for part in parts:
        if part == "delta1":
            dm = delta1_matrix(src, dst).matrix
            cm = _ce.ce_d_matrix(module, p, True, False)
        elif part == "delta2":
            dm = delta2_matrix(src, dst).matrix
            cm = _ce.ce_d_matrix(module, p, False, True)
        else:
            raise ValueError(f"unknown part {part!r}")
        worst = Fraction(0)
        bad = 0
        for row_ce, (Tr, vr) in enumerate(ce_dst):
            ri = dst_map[(Tr, vr)]
            for col_ce, (Tc, vc) in enumerate(ce_src):
                ci = src_map[(Tc, vc)]
                lhs = dm.get(ri, ci) * gam_src[col_ce]
                rhs = gam_dst[row_ce] * cm.get(row_ce, col_ce)
                if lhs != rhs:
                    bad += 1
                    worst = max(worst, abs(lhs - rhs))
        report[part] = {"mismatches": bad, "max_discrepancy": worst}
        if bad:
            ok = False
    return ok, report


# ---------------------------------------------------------------------------
# equivariance

@dataclass(eq=False)
class SymmetryGenerator:
    """An outer symmetry of the complex: its parity, its adjoint-type action
    on the generator index set (entries (b, c) -> coefficient of E_b in
    [A, E_c]) and its action matrix on the module."""

    label: str
    parity: int
    ad_entries: dict
    module_matrix: object


def gamma_from_ad(alg, ad_entries, parity):
    """The ghost bilinear of an outer symmetry, from its ad-type entries."""
    terms = {}
    for (b, c), v in ad_entries.items():
        coeff = -Fraction((-1) ** (parity * alg.parity(c))) * v
        if not coeff:
            continue
        key = (((c, 1),), ((b, 1),))
        w = terms.get(key, Fraction(0)) + coeff
        if w:
            terms[key] = w
        elif key in terms:
            del terms[key]
    return WeylElement(alg, terms)


def algebra_symmetrizers(mixing, module):
    alg = mixing.algebra
    out = []
    for a in range(alg.dim):
        out.append(
            SymmetryGenerator(
                alg.label(a),
                alg.parity(a),
                alg.ad_entries({a: Fraction(1)}),
                module.matrix(a),
            )
        )
    return out


def equivariance_check(mixing, module, degrees, bound, symmetrizers=None):
    """Check that every symmetry generator graded-commutes with the
    differential, applying both composites exactly to every basis tensor of
    Fock degree in ``degrees`` and total degree <= bound.

    Also scans whether each generator preserves the left ideal cutting out
    the mixed Fock space: generators moving a mixed direction out of the
    span are reported as violators (the commutator identity itself holds
    regardless, so the scan is what detects a mixing set that is not a
    submodule).

    Returns (ok, violators) where violators is a list of generator labels.
    """
    alg = mixing.algebra
    if symmetrizers is None:
        symmetrizers = algebra_symmetrizers(mixing, module)
    S = mixing.members
    violators = []
    for g in symmetrizers:
        for (b, c), v in g.ad_entries.items():
            if v and b in S and c not in S:
                violators.append(g.label)
                break
    dterms = delta_terms(mixing, module)
    ok = True
    failing = []
    for g in symmetrizers:
        rho = [
            OperatorTerm(gamma_from_ad(alg, g.ad_entries, g.parity), None, 0)
        ]
        if g.module_matrix is not None and not g.module_matrix.is_zero():
            rho.append(
                OperatorTerm(WeylElement.one(alg), g.module_matrix, g.parity)
            )
        sign = Fraction((-1) ** g.parity)
        for p in degrees:
            for m in window_monomials(mixing, bound, degree=p):
                for vi in range(module.dim):
                    x = {(m, vi): Fraction(1)}
                    lhs = apply_terms(
                        rho, mixing, module, apply_terms(dterms, mixing, module, x)
                    )
                    rhs = apply_terms(
                        dterms, mixing, module, apply_terms(rho, mixing, module, x)
                    )
                    diff = dict(lhs)
                    for k, v in rhs.items():
                        w = diff.get(k, Fraction(0)) - sign * v
                        if w:
                            diff[k] = w
                        elif k in diff:
                            del diff[k]
                    if diff:
                        ok = False
                        if g.label not in failing:
                            failing.append(g.label)
    return ok and not failing, violators + [f for f in failing if f not in violators]


# ---------------------------------------------------------------------------
# complex drivers

@dataclass(eq=False)
class ComplexResult:
    report: BettiReport
    blocks: dict
    diffs: dict

    def kernel_vectors(self, block_id, p):
        from .homology import rank_kernel

        d = self.diffs.get((block_id, p))
        if d is None:
            blk = self.blocks.get((block_id, p))
            if blk is None:
                return []
            return [
                tuple(
                    Fraction(1) if i == k else Fraction(0)
                    for i in range(blk.dim)
                )
                for k in range(blk.dim)
            ]
        return rank_kernel(d.matrix)[1]


def _seed_weights(mixing, module, scheme):
    wmod = _module_weights(module)
    seeds = set()
    for m in window_monomials(mixing, scheme.bound):
        wm = m.weight(scheme.weight_map)
        for vi in range(module.dim):
            wv = wmod[vi]
            if wm is None:
                seeds.add(tuple(wv))
            else:
                seeds.add(tuple(wm[i] + wv[i] for i in range(len(wv))))
    return sorted(seeds)


def build_complex(mixing, module, scheme, p_lo, p_hi, descriptor=None):
    """Enumerate blocks, assemble differentials and compute Betti rows.

    Weight mode computes every seeded weight block over its full degree
    support (so every entry is stable and the per-block Euler identity is
    checked); window mode computes the degree slices in [p_lo-1, p_hi+1] and
    flags truncation-affected entries.
    """
    report = BettiReport(descriptor or {})
    blocks = {}
    diffs = {}
    if scheme.mode == "weight":
        phi = pointedness_witness(mixing, scheme.weight_map)
        wmod = _module_weights(module)
        for w in _seed_weights(mixing, module, scheme):
            # full degree support of this weight block
            degs = set()
            per_deg = {}
            for vi in range(module.dim):
                residual = tuple(
                    w[i] - wmod[vi][i] for i in range(len(w))
                )
                for m in _weight_solutions(
                    mixing, scheme.weight_map, phi, residual
                ):
                    per_deg.setdefault(m.degree(), []).append((m, vi))
                    degs.add(m.degree())
            if not degs:
                continue
            lo, hi = min(degs), max(degs)
            wblocks = {}
            for p in range(lo, hi + 2):
                pairs = sorted(
                    per_deg.get(p, []), key=lambda t: (t[0].sort_key(), t[1])
                )
                wblocks[p] = CochainBlock(
                    mixing, module, p, tuple(pairs), tuple(w), True, scheme
                )
            dlist = []
            terms = delta_terms(mixing, module)
            for p in range(lo, hi + 1):
                cols = apply_terms_basis(terms, wblocks[p])
                mat, trunc = matrix_into(cols, wblocks[p], wblocks[p + 1])
                dlist.append(
                    DifferentialMatrix(wblocks[p], wblocks[p + 1], mat, trunc)
                )
            rows = _betti(dlist, block_id=tuple(w), boundary_complete=True)
            for r in rows:
                if p_lo <= r.degree <= p_hi and r.dim_c:
                    report.rows.append(r)
            for p, blk in wblocks.items():
                blocks[(tuple(w), p)] = blk
            for dm in dlist:
                diffs[(tuple(w), dm.source.degree)] = dm
        report.rows.sort(key=lambda r: (r.block_id, r.degree))
        return ComplexResult(report, blocks, diffs)

    # window mode
    wblocks = {
        p: enumerate_block(mixing, module, p, scheme)
        for p in range(p_lo - 1, p_hi + 2)
    }
    terms = delta_terms(mixing, module)
    dlist = []
    for p in range(p_lo - 1, p_hi + 1):
        cols = apply_terms_basis(terms, wblocks[p])
        mat, trunc = matrix_into(cols, wblocks[p], wblocks[p + 1])
        dlist.append(DifferentialMatrix(wblocks[p], wblocks[p + 1], mat, trunc))
    rows = _betti(dlist, block_id="window", boundary_complete=False)
    for r in rows:
        if p_lo <= r.degree <= p_hi and r.dim_c:
            report.rows.append(r)
    for p, blk in wblocks.items():
        blocks[("window", p)] = blk
    for dm in dlist:
        diffs[("window", dm.source.degree)] = dm
    return ComplexResult(report, blocks, diffs)
