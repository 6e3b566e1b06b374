"""Constructors for the concrete general-linear objects: gl(m|n) from matrix
units, the two abelian nilradicals with their Levi subalgebras, natural and
Kac coefficient modules, diagonal-torus weights, the rank-(1|1) operator
quadruple on Kac cochains, and the truncated completion demonstration for
gl(1|2).

Index conventions: row/column indices run over 1..m+n; indices up to m are
even, the rest odd.  Matrix units E_ij are ordered row-major, labelled
"E_ij" with concatenated digits (desk scale keeps m+n below 10).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .brst import (
    GradingScheme,
    SymmetryGenerator,
    delta_matrix,
    enumerate_block,
)
from .homology import SparseRationalMatrix, rank_kernel, span_dimension
from .supercore import BasisIndex, LieSuperalgebra, Representation
from .weylrep import MixingSet


@dataclass(frozen=True)
class GLmnSpec:
    """The general linear superalgebra gl(m|n) in its matrix-unit basis."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n == 0:
            raise ValueError("need m + n >= 1 with m, n >= 0")

    @property
    def size(self):
        return self.m + self.n

    def index_parity(self, i):
        return 0 if i <= self.m else 1

    def pairs(self):
        r = range(1, self.size + 1)
        return [(i, j) for i in r for j in r]


def _unit_label(i, j):
    return f"E_{i}{j}"


def build_glmn(m, n):
    """gl(m|n) with structure constants from supermatrix commutators:
    [E_ij, E_kl] = delta_jk E_il - (-1)^{[E_ij][E_kl]} delta_li E_kj."""
    spec = GLmnSpec(m, n)
    pairs = spec.pairs()
    pos = {ij: k for k, ij in enumerate(pairs)}
    basis = tuple(
        BasisIndex(
            k,
            (spec.index_parity(i) + spec.index_parity(j)) % 2,
            _unit_label(i, j),
        )
        for k, (i, j) in enumerate(pairs)
    )
    structure = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            v = {}
            if j == k:
                c = pos[(i, l)]
                v[c] = v.get(c, Fraction(0)) + 1
            if l == i:
                s = (-1) ** (basis[a].parity * basis[b].parity)
                c = pos[(k, j)]
                v[c] = v.get(c, Fraction(0)) - s
            v = {c: Fraction(x) for c, x in v.items() if x}
            if v:
                structure[(a, b)] = v
    return LieSuperalgebra(basis, structure)


def unit_weight(spec, i, j):
    """Torus weight of E_ij under the diagonal Cartan: e_i - e_j."""
    w = [0] * spec.size
    w[i - 1] += 1
    w[j - 1] -= 1
    return tuple(w)


def glmn_weights(spec):
    """Weights of the matrix-unit basis, aligned with build_glmn's order."""
    return tuple(unit_weight(spec, i, j) for (i, j) in spec.pairs())


@dataclass(eq=False)
class Nilradical:
    """An abelian nilradical as a standalone algebra, plus its embedding
    into gl(m|n) and the complementary Levi."""

    spec: GLmnSpec
    variant: str
    m1: int
    algebra: LieSuperalgebra
    embedding: tuple  # u index -> gl(m|n) basis id
    levi_pairs: tuple  # (i, j) pairs spanning the Levi

    def x_weight_map(self):
        """Weight of the dual generator attached to each u basis element:
        minus the weight of the element itself."""
        g_pairs = self.spec.pairs()
        out = {}
        for k, gid in enumerate(self.embedding):
            i, j = g_pairs[gid]
            out[k] = tuple(-x for x in unit_weight(self.spec, i, j))
        return out


def build_nilradical(spec, variant, m1=None):
    """The nilpotent ideal of one of the two parabolic families.

    Variant "A": span of E_ij with i even-range and j odd-range (purely odd).
    Variant "B": span of E_ij with i <= m1 < j for 1 <= m1 < m (mixed
    parity).  Both are abelian; this is asserted at construction.
    """
    g_pairs = spec.pairs()
    pos = {ij: k for k, ij in enumerate(g_pairs)}
    if variant == "A":
        upairs = [
            (i, j)
            for i in range(1, spec.m + 1)
            for j in range(spec.m + 1, spec.size + 1)
        ]
        levi = [
            (i, j)
            for (i, j) in g_pairs
            if spec.index_parity(i) == spec.index_parity(j)
        ]
    elif variant == "B":
        if m1 is None or not 1 <= m1 < spec.m:
            raise ValueError("variant B needs 1 <= m1 < m")
        upairs = [
            (i, j)
            for i in range(1, m1 + 1)
            for j in range(m1 + 1, spec.size + 1)
        ]
        levi = [
            (i, j)
            for (i, j) in g_pairs
            if (i <= m1) == (j <= m1)
        ]
    else:
        raise ValueError(f"unknown parabolic variant {variant!r}")
    basis = tuple(
        BasisIndex(
            k,
            (spec.index_parity(i) + spec.index_parity(j)) % 2,
            _unit_label(i, j),
        )
        for k, (i, j) in enumerate(upairs)
    )
    g = build_glmn(spec.m, spec.n)
    embedding = tuple(pos[ij] for ij in upairs)
    sub = set(embedding)
    for a in embedding:
        for b in embedding:
            br = g.bracket(a, b)
            if br:
                raise ValueError("nilradical is not abelian")
    u = LieSuperalgebra(basis, {})
    return Nilradical(spec, variant, m1 or 0, u, embedding, tuple(levi))


def natural_module(spec, alg=None, embedding=None):
    """The natural module C^{m|n} with E_ij v_k = delta_jk v_i.

    With ``alg``/``embedding`` the action is restricted to a subalgebra
    (e.g. a nilradical); the carrier and weights are unchanged.
    """
    size = spec.size
    carrier = tuple(
        BasisIndex(k, spec.index_parity(k + 1), f"v{k + 1}") for k in range(size)
    )
    weights = tuple(
        tuple(1 if t == k else 0 for t in range(size)) for k in range(size)
    )
    g_pairs = spec.pairs()
    if alg is None:
        alg = build_glmn(spec.m, spec.n)
        ids = list(range(len(g_pairs)))
    else:
        ids = list(embedding)
    action = {}
    for k, gid in enumerate(ids):
        i, j = g_pairs[gid]
        action[k] = SparseRationalMatrix(
            size, size, {(i - 1, j - 1): Fraction(1)}
        )
    return Representation(alg, carrier, action, weights)


def trivial_module_glmn(spec, alg):
    """One-dimensional module with the zero weight of the diagonal torus."""
    carrier = (BasisIndex(0, 0, "1"),)
    return Representation(alg, carrier, {}, ((0,) * spec.size,))


def adjoint_module_glmn(spec, alg):
    """Adjoint module of gl(m|n) with matrix-unit weights attached."""
    from .supercore import adjoint_module

    return adjoint_module(alg, glmn_weights(spec))


def kac_module(nil, lowest_dim=1):
    """Coefficients free over the nilradical: the Grassmann algebra on the
    (purely odd) variant-A generators tensored with a multiplicity space of
    the given dimension, the generators acting by signed left multiplication.

    Carrier basis: (subset mask, multiplicity index), masks in binary order
    over the u basis; weights are the subset sums of generator weights (the
    multiplicity space sits at weight zero, its internal structure is not
    modelled).
    """
    if nil.variant != "A":
        raise ValueError("free coefficient modules are built over variant A")
    u = nil.algebra
    k = u.dim
    if any(u.parity(a) == 0 for a in range(k)):
        raise ValueError("variant-A generators must be odd")
    spec = nil.spec
    g_pairs = spec.pairs()
    gen_weights = [
        unit_weight(spec, *g_pairs[gid]) for gid in nil.embedding
    ]
    nmask = 1 << k
    carrier = []
    weights = []
    for mask in range(nmask):
        bits = [a for a in range(k) if mask >> a & 1]
        lab = "".join(u.label(a) for a in bits) or "1"
        w = [0] * spec.size
        for a in bits:
            for t in range(spec.size):
                w[t] += gen_weights[a][t]
        for t in range(lowest_dim):
            suffix = f"|{t}" if lowest_dim > 1 else ""
            carrier.append(
                BasisIndex(
                    mask * lowest_dim + t, len(bits) % 2, lab + suffix
                )
            )
            weights.append(tuple(w))
    action = {}
    dim = nmask * lowest_dim
    for a in range(k):
        ent = {}
        for mask in range(nmask):
            if mask >> a & 1:
                continue
            sign = (-1) ** sum(1 for b in range(a) if mask >> b & 1)
            for t in range(lowest_dim):
                ent[((mask | 1 << a) * lowest_dim + t, mask * lowest_dim + t)] = (
                    Fraction(sign)
                )
        action[a] = SparseRationalMatrix(dim, dim, ent)
    return Representation(u, tuple(carrier), action, tuple(weights))


def top_monomial_weight(nil):
    """Weight of the product of all variant-A generators (the harmonic line)."""
    spec = nil.spec
    g_pairs = spec.pairs()
    w = [0] * spec.size
    for gid in nil.embedding:
        i, j = g_pairs[gid]
        for t in range(spec.size):
            w[t] += unit_weight(spec, i, j)[t]
    return tuple(w)


def levi_symmetrizers(nil, module=None):
    """The Levi generators as outer symmetries of the nilradical complex.

    For each Levi pair (i, j): the ad-type entries on the u index set
    (coefficient of u-basis b in [E_ij, u-basis c], which stays inside u
    since the Levi normalises it) and the action matrix on the module.
    """
    spec = nil.spec
    g = build_glmn(spec.m, spec.n)
    g_pairs = spec.pairs()
    pos = {ij: k for k, ij in enumerate(g_pairs)}
    back = {gid: k for k, gid in enumerate(nil.embedding)}
    out = []
    for (i, j) in nil.levi_pairs:
        a = pos[(i, j)]
        ad = {}
        for k, gid in enumerate(nil.embedding):
            for c_g, v in g.bracket(a, gid).items():
                b = back.get(c_g)
                if b is None:
                    raise ValueError("Levi does not normalise the nilradical")
                ad[(b, k)] = v
        mat = None
        if module is not None:
            mat = module_action_matrix_for(module, spec, i, j)
        out.append(
            SymmetryGenerator(_unit_label(i, j), g.basis[a].parity, ad, mat)
        )
    return out


def module_action_matrix_for(module, spec, i, j):
    """Action of E_ij on a natural-type carrier of dimension m+n."""
    if module.dim != spec.size:
        raise ValueError("expected the natural carrier")
    return SparseRationalMatrix(
        module.dim, module.dim, {(i - 1, j - 1): Fraction(1)}
    )


# ---------------------------------------------------------------------------
# the rank-(1|1) operator quadruple on free-coefficient cochains

@dataclass(eq=False)
class Gl11Witness:
    """Matrices e, f, h1, h2 on the windowed cochain carrier, the window
    basis (stacked degree blocks), and verification results."""

    dual: bool
    basis: list
    e: SparseRationalMatrix
    f: SparseRationalMatrix
    h1: SparseRationalMatrix
    h2: SparseRationalMatrix
    relation_ok: bool
    delta_sign: int
    delta_ok: bool


def _witness_blocks(nil, module, bound, dual):
    u = nil.algebra
    mixing = MixingSet.all(u) if dual else MixingSet.none(u)
    scheme = GradingScheme("window", bound=bound + 1)
    degrees = range(-bound - 1, 1) if dual else range(0, bound + 2)
    blocks = {p: enumerate_block(mixing, module, p, scheme) for p in degrees}
    return mixing, blocks


def gl11_witness(nil, lowest_dim=1, bound=4, dual=False):
    """Build e, f, h1, h2 on the free-coefficient cochain window and verify

        ef + fe = h1 - h2   (standard)  /  ef + fe = h1 + h2   (dual),

    plus that the differential equals e tensor identity up to a global sign
    (standard: -1, dual: +1).  The anticommutator is compared only on
    columns whose compositions stay inside the window; a window too small to
    hold any such column is rejected.
    """
    if bound < 1:
        raise ValueError("witness window bound must be at least 1")
    module = kac_module(nil, lowest_dim)
    u = nil.algebra
    k = u.dim
    mn = k
    mixing, blocks = _witness_blocks(nil, module, bound, dual)
    degrees = sorted(blocks)
    basis = []
    offsets = {}
    for p in degrees:
        offsets[p] = len(basis)
        basis.extend((p, bt) for bt in blocks[p].basis)
    N = len(basis)
    pos = {key: t for t, key in enumerate(basis)}

    lowdim = lowest_dim

    def mask_of(vi):
        return vi // lowdim

    def mult_of(vi):
        return vi % lowdim

    def gen_sign(mask, a):
        return (-1) ** sum(1 for b in range(a) if mask >> b & 1)

    e_ent = {}
    f_ent = {}
    h1_ent = {}
    h2_ent = {}
    for t, (p, (m, vi)) in enumerate(basis):
        mask = mask_of(vi)
        xexp = dict(m.xs) if not dual else dict(m.ds)
        xdeg = sum(xexp.values())
        if dual:
            h1_ent[(t, t)] = Fraction(bin(mask).count("1"))
            h2_ent[(t, t)] = Fraction(xdeg)
        else:
            h1_ent[(t, t)] = Fraction(mn + xdeg)
            h2_ent[(t, t)] = Fraction(bin(mask).count("1"))
        for a in range(k):
            if not dual:
                # e: multiply by x_a and by the generator; f: d/dx_a then
                # the Grassmann derivative
                if not mask >> a & 1:
                    m2 = dict(xexp)
                    m2[a] = m2.get(a, 0) + 1
                    key = (p + 1, (_mono_x(m2), (mask | 1 << a) * lowdim + mult_of(vi)))
                    tt = pos.get(key)
                    if tt is not None:
                        e_ent[(tt, t)] = e_ent.get((tt, t), Fraction(0)) + gen_sign(
                            mask, a
                        )
                if mask >> a & 1 and xexp.get(a, 0):
                    m2 = dict(xexp)
                    m2[a] -= 1
                    key = (p - 1, (_mono_x(m2), (mask & ~(1 << a)) * lowdim + mult_of(vi)))
                    tt = pos.get(key)
                    if tt is not None:
                        f_ent[(tt, t)] = f_ent.get((tt, t), Fraction(0)) + Fraction(
                            xexp[a] * gen_sign(mask & ~(1 << a), a)
                        )
            else:
                # e: generator times d/dy_a; f: y_a times Grassmann derivative
                if not mask >> a & 1 and xexp.get(a, 0):
                    m2 = dict(xexp)
                    m2[a] -= 1
                    key = (p + 1, (_mono_d(m2), (mask | 1 << a) * lowdim + mult_of(vi)))
                    tt = pos.get(key)
                    if tt is not None:
                        e_ent[(tt, t)] = e_ent.get((tt, t), Fraction(0)) + Fraction(
                            xexp[a] * gen_sign(mask, a)
                        )
                if mask >> a & 1:
                    m2 = dict(xexp)
                    m2[a] = m2.get(a, 0) + 1
                    key = (p - 1, (_mono_d(m2), (mask & ~(1 << a)) * lowdim + mult_of(vi)))
                    tt = pos.get(key)
                    if tt is not None:
                        f_ent[(tt, t)] = f_ent.get((tt, t), Fraction(0)) + Fraction(
                            gen_sign(mask & ~(1 << a), a)
                        )
    e = SparseRationalMatrix(N, N, e_ent)
    f = SparseRationalMatrix(N, N, f_ent)
    h1 = SparseRationalMatrix(N, N, h1_ent)
    h2 = SparseRationalMatrix(N, N, h2_ent)

    anti = (e @ f) + (f @ e)
    want = (h1 + h2) if dual else (h1 - h2)
    relation_ok = True
    checked = 0
    for t, (p, (m, vi)) in enumerate(basis):
        xdeg = sum(e2 for _, e2 in (m.xs if not dual else m.ds))
        if xdeg > bound - 1:
            continue  # composite can leave the window for this column
        checked += 1
        for s in range(N):
            if anti.get(s, t) != want.get(s, t):
                relation_ok = False
    if not checked:
        raise ValueError("window bound too small; need bound >= 1 plus room")

    # differential comparison: delta = sign * (e tensor identity) blockwise
    sign = 1 if dual else -1
    delta_ok = True
    for p in degrees[:-1]:
        src = blocks[p]
        dst = blocks[p + 1]
        dm = delta_matrix(src, dst).matrix
        esub = {}
        for (r, c), v in e.entries.items():
            if (
                offsets[p] <= c < offsets[p] + src.dim
                and offsets[p + 1] <= r < offsets[p + 1] + dst.dim
            ):
                esub[(r - offsets[p + 1], c - offsets[p])] = sign * v
        if dm.entries != esub:
            delta_ok = False
    return Gl11Witness(
        dual, basis, e, f, h1, h2, relation_ok, sign, delta_ok
    )


def _mono_x(exps):
    from .weylrep import FockMonomial

    return FockMonomial.make(xs=exps)


def _mono_d(exps):
    from .weylrep import FockMonomial

    return FockMonomial.make(ds=exps)


# ---------------------------------------------------------------------------
# truncated completion demonstration for gl(1|2)

def gl12_completion_demo(order):
    """Kernel/image bookkeeping for the mixed complex of the purely odd
    two-generator nilradical of gl(1|2) on the natural module, with one
    direction mixed, truncated at the given total degree.

    Per Fock degree p the report compares three numbers for the kernel
    component supported on the odd carrier vectors: the matrix kernel of the
    truncated differential, an independent brute-force solve of the
    truncated relation x f2 = (d/d ybar) f3, and the dimension of the
    closed-form solution family truncated to the same order.  It also checks
    that the image fills exactly the reachable span over the first carrier
    vector.  Raises ConsistencyError on any mismatch.
    """
    if order < 2:
        raise ValueError("truncation order must be at least 2")
    from .homology import ConsistencyError, _Echelon

    spec = GLmnSpec(1, 2)
    nil = build_nilradical(spec, "A")  # u basis: 0 = E_12, 1 = E_13
    u = nil.algebra
    module = natural_module(spec, u, nil.embedding)
    mixing = MixingSet.of(u, [1])  # mix the second direction: x -> x, y -> ybar
    rows = []
    for p in range(-order, order + 1):
        src_scheme = GradingScheme("window", bound=order)
        dst_scheme = GradingScheme("window", bound=order + 1)
        src = enumerate_block(mixing, module, p, src_scheme)
        dst = enumerate_block(mixing, module, p + 1, dst_scheme)
        dm = delta_matrix(src, dst)
        if dm.truncated:
            raise ConsistencyError("image left the enlarged target window")
        rnk, kernel = rank_kernel(dm.matrix)
        n_v1 = sum(1 for (_, vi) in src.basis if vi == 0)
        dim23 = len(kernel) - n_v1
        oracle = _pde_kernel_dim(p, order)
        family = _family_dim(p, order)
        image_ok, image_dim, reach_dim = _image_matches_reachable(
            dm, p, order
        )
        if not (dim23 == oracle == family):
            raise ConsistencyError(
                f"kernel mismatch at degree {p}: matrix {dim23}, "
                f"solver {oracle}, family {family}"
            )
        if not image_ok:
            raise ConsistencyError(f"image mismatch at degree {p}")
        rows.append(
            {
                "degree": p,
                "kernel_odd_component": dim23,
                "pde_kernel": oracle,
                "family_dim": family,
                "image_dim": image_dim,
                "reachable_dim": reach_dim,
            }
        )
    return rows


def _monos(p, order):
    """Exponent pairs (a, b) for x^a ybar^b with a - b = p, a + b <= order."""
    out = []
    for b in range(order + 1):
        a = p + b
        if a >= 0 and a + b <= order:
            out.append((a, b))
    return out


def _pde_kernel_dim(p, order):
    """Brute-force kernel of (f2, f3) -> x f2 - d/dybar f3 at degree p."""
    src = [(2, ab) for ab in _monos(p, order)] + [(3, ab) for ab in _monos(p, order)]
    tgt = {ab: k for k, ab in enumerate(_monos(p + 1, order + 1))}
    ent = {}
    for j, (comp, (a, b)) in enumerate(src):
        if comp == 2:
            ent[(tgt[(a + 1, b)], j)] = Fraction(1)
        else:
            if b:
                ent[(tgt[(a, b - 1)], j)] = Fraction(-b)
    mat = SparseRationalMatrix(len(tgt), len(src), ent)
    return len(rank_kernel(mat)[1])


def _family_dim(p, order):
    """Closed-form solution count at degree p, truncated to the order.

    Nonnegative p: series P with x^p (x ybar)^k, k <= (order - p)/2, so
    floor((order - p)/2) + 1 solutions when p <= order.  Negative p: series
    without constant term, ybar^{-p} (x ybar)^k with k >= 1, giving
    max(0, floor((order + p)/2)) solutions.
    """
    if p >= 0:
        return (order - p) // 2 + 1 if p <= order else 0
    return max(0, (order + p) // 2)


def _image_matches_reachable(dm, p, order):
    """The image must equal the span of first-carrier monomials reachable at
    this truncation: x-degree >= 1 with total <= order + 1, or total <=
    order - 1."""
    dst = dm.target
    reach = set()
    for a, b in _monos(p + 1, order + 1):
        if (a >= 1 and a + b <= order + 1) or (a + b <= order - 1):
            reach.add((a, b))
    reach_idx = set()
    for t, (m, vi) in enumerate(dst.basis):
        if vi != 0:
            continue
        a = dict(m.xs).get(0, 0)
        b = dict(m.ds).get(1, 0)
        if (a, b) in reach:
            reach_idx.add(t)
    cols = {}
    for (i, j), v in dm.matrix.entries.items():
        cols.setdefault(j, {})[i] = v
    ok = True
    vecs = []
    for j, col in cols.items():
        if not set(col) <= reach_idx:
            ok = False
        vecs.append(
            tuple(col.get(i, Fraction(0)) for i in range(dst.dim))
        )
    image_dim = span_dimension(vecs, dst.dim)
    if image_dim != len(reach_idx):
        ok = False
    return ok, image_dim, len(reach_idx)
