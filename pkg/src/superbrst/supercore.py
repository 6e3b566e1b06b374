"""Sign-exact foundations: parities, indexed homogeneous bases, Lie
superalgebras given by structure constants, and finite-dimensional modules
with their duals and parity shifts.

Conventions used throughout the package:

* a parity is an int in {0, 1}; every sign anywhere is (-1) raised to a sum
  or product of parities (the Koszul rule);
* coefficients are exact ``fractions.Fraction``; no floats in the core;
* structure constants and action matrices are sparse, absent entries are 0;
* basis ordering is by integer id; parity is carried per index, no odd-first
  or even-first ordering is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .homology import SparseRationalMatrix

EVEN = 0
ODD = 1


@dataclass(frozen=True)
class BasisIndex:
    """One homogeneous basis vector: dense id, parity, display label."""

    id: int
    parity: int
    label: str


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def _vec(mapping):
    out = {}
    for k, v in mapping.items():
        v = _frac(v)
        if v:
            out[k] = v
    return out


class LieSuperalgebra:
    """A finite-dimensional Lie superalgebra by sparse structure constants.

    ``structure[(a, b)]`` maps c -> coefficient of E_c in [E_a, E_b]; pairs
    with zero bracket may be omitted.  Validity (parity consistency, graded
    antisymmetry, graded Jacobi) is checked by ``validate_superjacobi``, not
    enforced at construction.
    """

    def __init__(self, basis, structure):
        basis = tuple(basis)
        if [b.id for b in basis] != list(range(len(basis))):
            raise ValueError("basis ids must be dense and in order")
        if len({b.label for b in basis}) != len(basis):
            raise ValueError("basis labels must be unique")
        self.basis = basis
        st = {}
        for (a, b), coeffs in structure.items():
            v = _vec(coeffs)
            if v:
                st[(a, b)] = v
        self.structure = st

    @property
    def dim(self):
        return len(self.basis)

    def parity(self, a):
        return self.basis[a].parity

    def bracket(self, a, b):
        """[E_a, E_b] as a sparse coefficient vector over the basis."""
        return dict(self.structure.get((a, b), {}))

    def bracket_vec(self, u, v):
        """Bracket of two coefficient vectors, extended bilinearly."""
        out = {}
        for a, ca in u.items():
            if not ca:
                continue
            for b, cb in v.items():
                if not cb:
                    continue
                for c, s in self.structure.get((a, b), {}).items():
                    w = out.get(c, Fraction(0)) + ca * cb * s
                    if w:
                        out[c] = w
                    elif c in out:
                        del out[c]
        return out

    def ad_entries(self, coeffs):
        """Adjoint action of A = sum coeffs[a] E_a as entries (b, c) -> Q,
        meaning the coefficient of E_b in [A, E_c]."""
        out = {}
        for a, ca in coeffs.items():
            if not ca:
                continue
            for c in range(self.dim):
                for b, s in self.structure.get((a, c), {}).items():
                    key = (b, c)
                    w = out.get(key, Fraction(0)) + ca * s
                    if w:
                        out[key] = w
                    elif key in out:
                        del out[key]
        return out

    def vector_parity(self, coeffs):
        """Parity of a homogeneous coefficient vector; raises if mixed."""
        pars = {self.parity(a) for a, c in coeffs.items() if c}
        if not pars:
            return EVEN
        if len(pars) > 1:
            raise ValueError("coefficient vector is not parity-homogeneous")
        return pars.pop()

    def label(self, a):
        return self.basis[a].label


def validate_superjacobi(alg):
    """Check parity consistency, graded antisymmetry and the graded Jacobi
    identity on all basis triples.  Returns (ok, violations); each violation
    is a tuple (kind, indices...)."""
    violations = []
    n = alg.dim
    for (a, b), coeffs in alg.structure.items():
        pab = (alg.parity(a) + alg.parity(b)) % 2
        for c, v in coeffs.items():
            if v and alg.parity(c) != pab:
                violations.append(("parity", a, b, c))
    for a in range(n):
        for b in range(n):
            lhs = alg.bracket(a, b)
            rhs = alg.bracket(b, a)
            sign = -(-1) ** (alg.parity(a) * alg.parity(b))
            for c in set(lhs) | set(rhs):
                if lhs.get(c, Fraction(0)) != sign * rhs.get(c, Fraction(0)):
                    violations.append(("antisymmetry", a, b, c))
                    break
    for a in range(n):
        for b in range(n):
            sab = (-1) ** (alg.parity(a) * alg.parity(b))
            for c in range(n):
                # [a,[b,c]] = [[a,b],c] + (-1)^{[a][b]} [b,[a,c]]
                lhs = alg.bracket_vec({a: Fraction(1)}, alg.bracket(b, c))
                r1 = alg.bracket_vec(alg.bracket(a, b), {c: Fraction(1)})
                r2 = alg.bracket_vec({b: Fraction(1)}, alg.bracket(a, c))
                ok = True
                for e in set(lhs) | set(r1) | set(r2):
                    if lhs.get(e, Fraction(0)) != r1.get(e, Fraction(0)) + sab * r2.get(
                        e, Fraction(0)
                    ):
                        ok = False
                        break
                if not ok:
                    violations.append(("jacobi", a, b, c))
    return (not violations, violations)


@dataclass
class Representation:
    """A finite-dimensional graded module: carrier basis plus one sparse
    action matrix per algebra basis element (column convention: entry (i, j)
    is the coefficient of carrier[i] in E_a . carrier[j]).

    ``weights`` optionally assigns an integer torus weight vector to each
    carrier element; weight-block grading requires it.
    """

    algebra: LieSuperalgebra
    carrier: tuple
    action: dict
    weights: tuple = None

    def __post_init__(self):
        n = len(self.carrier)
        for a, mat in self.action.items():
            if not isinstance(mat, SparseRationalMatrix):
                raise TypeError("action values must be SparseRationalMatrix")
            if mat.rows != n or mat.cols != n:
                raise ValueError(
                    f"action matrix for generator {a} is {mat.rows}x{mat.cols}, "
                    f"carrier has dimension {n}"
                )
        if self.weights is not None and len(self.weights) != n:
            raise ValueError("one weight vector per carrier element required")

    @property
    def dim(self):
        return len(self.carrier)

    def matrix(self, a):
        m = self.action.get(a)
        if m is None:
            m = SparseRationalMatrix(self.dim, self.dim, {})
        return m

    def carrier_parity(self, i):
        return self.carrier[i].parity


def validate_representation(rep):
    """Check parity homogeneity of the action matrices and the graded
    commutation relation rho([a,b]) = rho(a)rho(b) - (-1)^{[a][b]}
    rho(b)rho(a) on all basis pairs.  Returns (ok, violating pairs)."""
    alg = rep.algebra
    violations = []
    for a in range(alg.dim):
        pa = alg.parity(a)
        for (i, j), v in rep.matrix(a).entries.items():
            if v and (rep.carrier_parity(i) - rep.carrier_parity(j) - pa) % 2:
                violations.append(("parity", a, i, j))
                break
    for a in range(alg.dim):
        ma = rep.matrix(a)
        for b in range(alg.dim):
            mb = rep.matrix(b)
            sign = Fraction((-1) ** (alg.parity(a) * alg.parity(b)))
            lhs = (ma @ mb) - (mb @ ma).scale(sign)
            rhs = SparseRationalMatrix(rep.dim, rep.dim, {})
            for c, s in alg.bracket(a, b).items():
                rhs = rhs + rep.matrix(c).scale(s)
            if lhs != rhs:
                violations.append(("commutation", a, b))
    return (not violations, violations)


def dual_module(rep):
    """The dual module on the dual basis: (A f)(v) = -(-1)^{[A][f]} f(A v).

    On matrices this reads rho*(A)_{ij} = -(-1)^{[A][j]} rho(A)_{ji}.  The
    double dual is the original conjugated by the canonical identification,
    a diagonal parity-sign matrix; equivalently the double-dual matrices are
    (-1)^{[A]} rho(A).
    """
    alg = rep.algebra
    carrier = tuple(
        BasisIndex(b.id, b.parity, b.label + "*") for b in rep.carrier
    )
    action = {}
    for a in range(alg.dim):
        pa = alg.parity(a)
        ent = {}
        for (i, j), v in rep.matrix(a).entries.items():
            s = -((-1) ** (pa * rep.carrier_parity(i)))
            ent[(j, i)] = s * v
        if ent:
            action[a] = SparseRationalMatrix(rep.dim, rep.dim, ent)
    weights = None
    if rep.weights is not None:
        weights = tuple(tuple(-x for x in w) for w in rep.weights)
    return Representation(alg, carrier, action, weights)


def parity_reverse_module(rep):
    """Carrier parities flipped; action matrices scaled by (-1)^{[a]} per
    A.pi(v) = (-1)^{[A]} pi(A.v).  Involutive on the nose."""
    alg = rep.algebra
    carrier = tuple(
        BasisIndex(b.id, b.parity ^ 1, "P" + b.label) for b in rep.carrier
    )
    action = {}
    for a, mat in rep.action.items():
        action[a] = mat.scale(Fraction((-1) ** alg.parity(a)))
    return Representation(alg, carrier, action, rep.weights)


def adjoint_module(alg, weights=None):
    """The adjoint module on the algebra's own basis."""
    carrier = tuple(alg.basis)
    n = alg.dim
    action = {}
    for a in range(n):
        ent = {}
        for b in range(n):
            for c, v in alg.bracket(a, b).items():
                ent[(c, b)] = v
        if ent:
            action[a] = SparseRationalMatrix(n, n, ent)
    return Representation(alg, carrier, action, weights)


def trivial_module(alg, parity=EVEN, weight=None):
    """The one-dimensional module with zero action."""
    carrier = (BasisIndex(0, parity, "1"),)
    weights = (tuple(weight),) if weight is not None else None
    return Representation(alg, carrier, {}, weights)


def restrict_representation(rep, sub_alg, embedding):
    """Restrict a module along an embedding of sub_alg into rep.algebra.

    ``embedding[k]`` is the id in rep.algebra of sub_alg's basis element k;
    parities must match.
    """
    if len(embedding) != sub_alg.dim:
        raise ValueError("embedding must cover the subalgebra basis")
    for k, g in enumerate(embedding):
        if sub_alg.parity(k) != rep.algebra.parity(g):
            raise ValueError("embedding does not preserve parity")
    action = {}
    for k, g in enumerate(embedding):
        m = rep.matrix(g)
        if not m.is_zero():
            action[k] = m
    return Representation(sub_alg, rep.carrier, action, rep.weights)
