"""The Weyl superalgebra over the parity-reversed dual of a Lie superalgebra.

Generators come in pairs X_a, d_a (one pair per algebra basis element E_a)
with parity [X_a] = [E_a] + 1 mod 2 and the graded canonical relations

    X_a X_b = (-1)^{[X_a][X_b]} X_b X_a,
    d_a d_b = (-1)^{[X_a][X_b]} d_b d_a,
    d_a X_b - (-1)^{[X_a][X_b]} X_b d_a = delta_{ab}.

Normal form: all X factors left of all d factors, each side sorted by index
ascending, odd generators with exponent at most 1; the sorting sign is
accumulated into the coefficient.

A mixing set S picks the simple module F(S): the vacuum is killed by X_a for
a in S and by d_a for a not in S, so the module basis consists of monomials
in the X_a with a outside S and the d_a with a inside S, applied to the
vacuum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .supercore import LieSuperalgebra

X = "X"
D = "D"


def xparity(alg, a):
    """Parity of X_a (and of d_a): opposite to the parity of E_a."""
    return alg.parity(a) ^ 1


def _bump(part, b, delta):
    """Adjust the exponent of index b in a sorted ((id, exp), ...) tuple."""
    out = []
    done = False
    for a, e in part:
        if a == b:
            e += delta
            done = True
        if e:
            out.append((a, e))
    if not done and delta:
        out.append((b, delta))
        out.sort()
    return tuple(out)


class WeylElement:
    """Finite rational combination of normal-ordered monomials.

    Monomial keys are pairs (xs, ds) of sorted ((index, exponent), ...)
    tuples.  Elements are immutable in use: all operations return new ones.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms=None):
        self.alg = alg
        t = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    t[m] = c
        self.terms = t

    @classmethod
    def zero(cls, alg):
        return cls(alg, {})

    @classmethod
    def one(cls, alg, coeff=1):
        return cls(alg, {((), ()): Fraction(coeff)})

    @classmethod
    def generator(cls, alg, kind, a, coeff=1):
        if kind == X:
            return cls(alg, {(((a, 1),), ()): Fraction(coeff)})
        if kind == D:
            return cls(alg, {((), ((a, 1),)): Fraction(coeff)})
        raise ValueError(f"unknown generator kind {kind!r}")

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, WeylElement)
            and self.alg is other.alg
            and self.terms == other.terms
        )

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            w = t.get(m, Fraction(0)) + c
            if w:
                t[m] = w
            elif m in t:
                del t[m]
        return WeylElement(self.alg, t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return WeylElement.zero(self.alg)
        return WeylElement(self.alg, {m: c * v for m, v in self.terms.items()})

    def monomial_parity(self, mono):
        xs, ds = mono
        p = 0
        for a, e in xs:
            p += xparity(self.alg, a) * e
        for a, e in ds:
            p += xparity(self.alg, a) * e
        return p % 2

    def parity(self):
        """Z2-parity of a homogeneous element; raises on mixed terms."""
        pars = {self.monomial_parity(m) for m in self.terms}
        if not pars:
            return 0
        if len(pars) > 1:
            raise ValueError("element is not parity-homogeneous")
        return pars.pop()

    def zdegrees(self):
        return {
            sum(e for _, e in xs) - sum(e for _, e in ds)
            for (xs, ds) in self.terms
        }

    def _mul_gen(self, mono, coeff, kind, b, out):
        """Multiply one normal monomial by a single generator on the right,
        accumulating the (at most two) resulting normal terms into ``out``."""
        alg = self.alg
        pb = xparity(alg, b)
        xs, ds = mono
        if kind == D:
            # d_b joins the d block from the right: cross factors with
            # larger index, kill odd squares
            sign = 1
            for a, e in ds:
                if a > b:
                    sign = sign * (-1) ** (pb * xparity(alg, a) * e)
                elif a == b and pb:
                    return
            key = (xs, _bump(ds, b, 1))
            c = coeff * sign
            w = out.get(key, Fraction(0)) + c
            if w:
                out[key] = w
            elif key in out:
                del out[key]
            return
        # kind == X: main term crosses the whole d block, the contraction
        # term (when d_b is present) crosses only the tail beyond b
        main_sign = 1
        tail_sign = 1
        kb = 0
        for a, e in ds:
            s = (-1) ** (pb * xparity(alg, a) * e)
            main_sign *= s
            if a > b:
                tail_sign *= s
            elif a == b:
                kb = e
        if kb:
            contr = Fraction(1) if pb else Fraction(kb)
            key = (xs, _bump(ds, b, -1))
            c = coeff * tail_sign * contr
            w = out.get(key, Fraction(0)) + c
            if w:
                out[key] = w
            elif key in out:
                del out[key]
        # main term: X_b enters the x block from the right
        ok = True
        sign = main_sign
        for a, e in xs:
            if a > b:
                sign = sign * (-1) ** (pb * xparity(alg, a) * e)
            elif a == b and pb:
                ok = False
                break
        if ok:
            key = (_bump(xs, b, 1), ds)
            c = coeff * sign
            w = out.get(key, Fraction(0)) + c
            if w:
                out[key] = w
            elif key in out:
                del out[key]

    def mul_gen(self, kind, b):
        out = {}
        for mono, c in self.terms.items():
            self._mul_gen(mono, c, kind, b, out)
        return WeylElement(self.alg, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if other.alg is not self.alg:
            raise ValueError("elements over different algebras")
        result = {}
        for (xs, ds), cb in other.terms.items():
            acc = self.scale(cb)
            for a, e in xs:
                for _ in range(e):
                    acc = acc.mul_gen(X, a)
            for a, e in ds:
                for _ in range(e):
                    acc = acc.mul_gen(D, a)
            for m, c in acc.terms.items():
                w = result.get(m, Fraction(0)) + c
                if w:
                    result[m] = w
                elif m in result:
                    del result[m]
        return WeylElement(self.alg, result)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (xs, ds) in sorted(self.terms):
            c = self.terms[(xs, ds)]
            facs = []
            for a, e in xs:
                facs.append(f"X{a}" + (f"^{e}" if e > 1 else ""))
            for a, e in ds:
                facs.append(f"d{a}" + (f"^{e}" if e > 1 else ""))
            body = "*".join(facs) if facs else "1"
            bits.append(f"({c})*{body}")
        return " + ".join(bits)

    __repr__ = __str__


def normal_order(alg, word, coeff=1):
    """Normal-order a formal product of generators.

    ``word`` is a sequence of (kind, index) pairs with kind "X" or "D",
    multiplied left to right with the given coefficient.
    """
    acc = WeylElement.one(alg, coeff)
    for kind, a in word:
        acc = acc.mul_gen(kind, a)
    return acc


def graded_commutator(A, B):
    """[A, B] = AB - (-1)^{[A][B]} BA for parity-homogeneous A, B."""
    pa = A.parity()
    pb = B.parity()
    return (A * B) - (B * A).scale((-1) ** (pa * pb))


def gamma(alg, A):
    """Degree-zero realization of the algebra inside the Weyl superalgebra:

        Gamma(A) = - sum_{b,c} (-1)^{[A][E_c]} X_c ad(A)_{bc} d_b,

    where ad(A)_{bc} is the coefficient of E_b in [A, E_c].  A may be a basis
    id or a parity-homogeneous coefficient vector.
    """
    if isinstance(A, int):
        A = {A: Fraction(1)}
    pa = alg.vector_parity(A)
    terms = {}
    for (b, c), v in alg.ad_entries(A).items():
        coeff = -Fraction((-1) ** (pa * alg.parity(c))) * v
        key = (((c, 1),), ((b, 1),))
        w = terms.get(key, Fraction(0)) + coeff
        if w:
            terms[key] = w
        elif key in terms:
            del terms[key]
    return WeylElement(alg, terms)


def g_action_on_weyl(alg, A, f):
    """The action A.f = [Gamma(A), f]; a graded derivation of the algebra."""
    return graded_commutator(gamma(alg, A), f)


@dataclass(frozen=True)
class MixingSet:
    """The subset S of basis indices whose X generators kill the vacuum."""

    algebra: LieSuperalgebra
    members: frozenset

    def __post_init__(self):
        for a in self.members:
            if not 0 <= a < self.algebra.dim:
                raise ValueError(f"mixing index {a} out of range")

    @classmethod
    def none(cls, alg):
        return cls(alg, frozenset())

    @classmethod
    def all(cls, alg):
        return cls(alg, frozenset(range(alg.dim)))

    @classmethod
    def of(cls, alg, ids):
        return cls(alg, frozenset(ids))

    def sorted_members(self):
        return sorted(self.members)

    def legal_generators(self):
        """The generators acting freely on the vacuum: X_a for a outside S,
        d_a for a in S; deterministic order."""
        gens = []
        for a in range(self.algebra.dim):
            if a not in self.members:
                gens.append((X, a))
        for a in self.sorted_members():
            gens.append((D, a))
        return gens


@dataclass(frozen=True)
class FockMonomial:
    """Basis monomial of F(S): exponents of legal X and d generators, stored
    as sorted ((index, exponent), ...) tuples."""

    xs: tuple
    ds: tuple

    @classmethod
    def make(cls, xs=(), ds=()):
        xs = tuple(sorted((a, e) for a, e in dict(xs).items() if e))
        ds = tuple(sorted((a, e) for a, e in dict(ds).items() if e))
        return cls(xs, ds)

    def degree(self):
        return sum(e for _, e in self.xs) - sum(e for _, e in self.ds)

    def total_degree(self):
        return sum(e for _, e in self.xs) + sum(e for _, e in self.ds)

    def parity(self, alg):
        p = 0
        for a, e in self.xs:
            p += xparity(alg, a) * e
        for a, e in self.ds:
            p += xparity(alg, a) * e
        return p % 2

    def weight(self, weight_map):
        """Torus weight: + weight of X_a per x factor, - per d factor."""
        acc = None
        for part, s in ((self.xs, 1), (self.ds, -1)):
            for a, e in part:
                w = weight_map[a]
                if acc is None:
                    acc = [0] * len(w)
                for i, x in enumerate(w):
                    acc[i] += s * e * x
        if acc is None:
            return None
        return tuple(acc)

    def sort_key(self):
        return (self.xs, self.ds)

    def legal_for(self, mixing):
        S = mixing.members
        return all(a not in S for a, _ in self.xs) and all(
            a in S for a, _ in self.ds
        )

    def label(self, alg):
        bits = []
        for a, e in self.xs:
            bits.append(f"x({alg.label(a)})" + (f"^{e}" if e > 1 else ""))
        for a, e in self.ds:
            bits.append(f"d({alg.label(a)})" + (f"^{e}" if e > 1 else ""))
        return "*".join(bits) if bits else "vac"


VACUUM = FockMonomial((), ())


def apply_gen(alg, mixing, kind, b, mono):
    """Left action of one generator on a Fock basis monomial.

    Returns (coefficient, monomial) or None when the result is zero.  Each
    generator produces at most one term: legal generators multiply into the
    monomial, illegal ones contract against it and the remainder kills the
    vacuum.
    """
    S = mixing.members
    pb = xparity(alg, b)
    xs, ds = mono.xs, mono.ds
    if kind == X and b not in S:
        sign = 1
        for a, e in xs:
            if a < b:
                sign = sign * (-1) ** (pb * xparity(alg, a) * e)
            elif a == b and pb:
                return None
        return Fraction(sign), FockMonomial(_bump(xs, b, 1), ds)
    if kind == X:
        # X_b with b in S: crosses the whole x block and the d factors below
        # b, then contracts one d_b; without d_b it annihilates the vacuum
        kb = 0
        sign = 1
        for a, e in xs:
            sign = sign * (-1) ** (pb * xparity(alg, a) * e)
        for a, e in ds:
            if a < b:
                sign = sign * (-1) ** (pb * xparity(alg, a) * e)
            elif a == b:
                kb = e
        if not kb:
            return None
        coeff = Fraction(1) if pb else Fraction(-kb)
        return sign * coeff, FockMonomial(xs, _bump(ds, b, -1))
    if kind == D and b in S:
        sign = 1
        for a, e in xs:
            sign = sign * (-1) ** (pb * xparity(alg, a) * e)
        for a, e in ds:
            if a < b:
                sign = sign * (-1) ** (pb * xparity(alg, a) * e)
            elif a == b and pb:
                return None
        return Fraction(sign), FockMonomial(xs, _bump(ds, b, 1))
    if kind == D:
        # d_b with b not in S: graded derivative in X_b
        nb = 0
        sign = 1
        for a, e in xs:
            if a < b:
                sign = sign * (-1) ** (pb * xparity(alg, a) * e)
            elif a == b:
                nb = e
        if not nb:
            return None
        coeff = Fraction(1) if pb else Fraction(nb)
        return sign * coeff, FockMonomial(_bump(xs, b, -1), ds)
    raise ValueError(f"unknown generator kind {kind!r}")


def fock_apply(w, mono, mixing):
    """The class of w . mono in F(S), as a dict FockMonomial -> Fraction."""
    if not mono.legal_for(mixing):
        raise ValueError("monomial is not legal for this mixing set")
    alg = w.alg
    out = {}
    for (xs, ds), c in w.terms.items():
        word = []
        for a, e in xs:
            word.extend((X, a) for _ in range(e))
        for a, e in ds:
            word.extend((D, a) for _ in range(e))
        cur_c = c
        cur_m = mono
        dead = False
        for kind, b in reversed(word):
            res = apply_gen(alg, mixing, kind, b, cur_m)
            if res is None:
                dead = True
                break
            s, cur_m = res
            cur_c *= s
        if dead:
            continue
        v = out.get(cur_m, Fraction(0)) + cur_c
        if v:
            out[cur_m] = v
        elif cur_m in out:
            del out[cur_m]
    return out
