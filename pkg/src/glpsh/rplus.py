"""The monomial ring R_+(G).

A basis element is the G-conjugacy class of a pair (H, phi) with phi a linear
character of H.  Pairs are canonicalized to the conjugate whose sorted
element tuple, then exponent vector, is least.  Products follow the double
coset formula, ``b_map`` sends a pair to its induced character, and
``brauer_induction`` solves the adjunction against Boltje's form.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import linalg
from .classfn import ClassFunction, induce_character, schur_inner
from .cyclo import Cyclotomic
from .groups import (
    DEFAULT_SUBGROUP_CAP,
    GroupError,
    LinearCharacter,
    MatrixGroup,
    Subgroup,
    double_cosets,
    intersect,
    is_subconjugate,
    linear_characters,
    subgroups,
)


class MonomialPair:
    """A canonical representative (H, phi) of a conjugacy class of pairs."""

    __slots__ = ("group", "H", "phi", "key")

    def __init__(self, H: Subgroup, phi: LinearCharacter, key):
        self.group = H.group
        self.H = H
        self.phi = phi
        self.key = key

    @property
    def order(self) -> int:
        return self.H.order

    def __eq__(self, other):
        return isinstance(other, MonomialPair) and self.group is other.group and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __repr__(self):
        return f"<Pair |H|={self.H.order} N={self.phi.N} {self.key_string}>"

    @property
    def key_string(self) -> str:
        elems, N, exps = self.key
        h1 = hashlib.sha1(repr(elems).encode()).hexdigest()[:8]
        if N == 1:
            return f"H{len(elems)}.{h1}"
        h2 = hashlib.sha1(repr(exps).encode()).hexdigest()[:6]
        return f"H{len(elems)}.{h1}.z{N}.{h2}"

    def is_central(self, phibar: LinearCharacter | None = None) -> bool:
        """Z(G) <= H and phi agrees with phibar (default trivial) on Z(G)."""
        Z = self.group.center
        if not Z.set <= self.H.set:
            return False
        for z in Z.elements:
            want = 0 if phibar is None else Fraction(phibar.exp(z), phibar.N)
            if Fraction(self.phi.exp(z), self.phi.N) != want:
                return False
        return True

    def to_json(self) -> dict:
        G = self.group
        gens = self.H.generators()
        return {
            "key": self.key_string,
            "order": self.H.order,
            "gens": [list(G.elements[g]) for g in gens],
            "N": self.phi.N,
            "exps": [self.phi.exp(g) for g in gens],
        }


def sort_key(p: MonomialPair):
    """Basis order: |H| descending, then the canonical key."""
    return (-p.H.order, p.key)


def _pair_key(elems, N, exps):
    return (tuple(elems), N, tuple(exps))


def _least_conjugate(imgs, ex):
    order = np.argsort(imgs, axis=1, kind="stable")
    simg = np.take_along_axis(imgs, order, axis=1)
    sexp = ex[order]
    # least sorted element tuple, ties broken by the exponent vector
    rank = np.lexsort(np.concatenate([simg, sexp], axis=1).T[::-1])
    best = int(rank[0])
    return tuple(simg[best].tolist()), tuple(sexp[best].tolist())


def _small_generating_set(G: MatrixGroup, H: np.ndarray) -> list:
    gens, span = [], np.array([G.identity], dtype=np.int64)
    for x in H:
        if not np.isin(x, span):
            gens.append(int(x))
            span = G.generate(gens)
            if len(span) == len(H):
                break
    return gens


def _conjugate_rows(G: MatrixGroup, gs: np.ndarray, H: np.ndarray) -> np.ndarray:
    return G.mul_many(G.mul_many(gs[:, None], H[None, :]), G.inv[gs][:, None])


@lru_cache(maxsize=200000)
def _canonical(G: MatrixGroup, elems: tuple, N: int, exps: tuple):
    H = np.array(elems, dtype=np.int64)
    ex = np.array(exps, dtype=np.int64)
    if G.table is not None and G.order <= 2000:
        return _least_conjugate(G.conj_table[:, H], ex)
    # Without a table, conjugating all of H by every g is too slow.  The
    # normalizer comes cheaply from generator images; one conjugation per
    # coset g N(H) fixes the subgroup, then the exponents are minimized over
    # the winning coset.
    allg = np.arange(G.order, dtype=np.int64)
    gens = _small_generating_set(G, H)
    in_norm = np.ones(G.order, dtype=bool)
    for s in gens:
        img = _conjugate_rows(G, allg, np.array([s]))[:, 0]
        in_norm &= np.isin(img, H)
    Nrm = np.flatnonzero(in_norm).astype(np.int64)
    assigned = np.zeros(G.order, dtype=bool)
    reps = []
    for g in range(G.order):
        if not assigned[g]:
            reps.append(g)
            assigned[G.mul_many(g, Nrm)] = True
    reps = np.array(reps, dtype=np.int64)
    imgs = np.sort(_conjugate_rows(G, reps, H), axis=1)
    best = reps[int(np.lexsort(imgs.T[::-1])[0])]
    coset = G.mul_many(best, Nrm)
    return _least_conjugate(_conjugate_rows(G, coset, H), ex)


def canonicalize_pair(H: Subgroup, phi: LinearCharacter) -> MonomialPair:
    if phi.subgroup != H:
        raise GroupError("character does not live on H")
    G = H.group
    elems, exps = _canonical(G, tuple(H.elements), phi.N, phi.exps)
    return _make_pair(G, elems, phi.N, exps)


@lru_cache(maxsize=200000)
def _make_pair(G, elems, N, exps):
    H = Subgroup(G, elems)
    return MonomialPair(H, LinearCharacter(H, N, exps), _pair_key(elems, N, exps))


def pair(H: Subgroup, phi: LinearCharacter | None = None) -> MonomialPair:
    return canonicalize_pair(H, phi if phi is not None else LinearCharacter.trivial(H))


def trivial_pair(G: MatrixGroup) -> MonomialPair:
    return pair(G.whole)


# -- basis ----------------------------------------------------------------------


@lru_cache(maxsize=64)
def _basis(G: MatrixGroup, cap: int, central: bool, phibar):
    lat = subgroups(G, cap)
    found = {}
    for pos in lat.canonical:
        H = lat.subgroups[pos]
        for phi in linear_characters(H):
            p = canonicalize_pair(H, phi)
            if central and not p.is_central(phibar):
                continue
            found.setdefault(p.key, p)
    return tuple(sorted(found.values(), key=sort_key))


def basis(
    G: MatrixGroup,
    cap: int = DEFAULT_SUBGROUP_CAP,
    central: bool = False,
    phibar: LinearCharacter | None = None,
) -> tuple:
    """Canonical basis of R_+(G) ordered by (|H| descending, key).

    With ``central`` only pairs with Z(G) <= H and phi = phibar on Z(G)
    (phibar defaults to the trivial character).
    """
    return _basis(G, cap, central, phibar)


# -- elements -------------------------------------------------------------------


class MonomialSum:
    """A finite Z- (or Q-) combination of canonical pairs of one group."""

    __slots__ = ("group", "terms")

    def __init__(self, group: MatrixGroup, terms=None):
        self.group = group
        clean = {}
        for p, c in (terms or {}).items():
            if p.group is not group:
                raise GroupError("pair from another group")
            if c:
                clean[p] = clean.get(p, 0) + c
        self.terms = {p: c for p, c in sorted(clean.items(), key=lambda kv: sort_key(kv[0])) if c}

    @classmethod
    def of(cls, p: MonomialPair, c=1) -> "MonomialSum":
        return cls(p.group, {p: c})

    @classmethod
    def zero(cls, G: MatrixGroup) -> "MonomialSum":
        return cls(G)

    @classmethod
    def one(cls, G: MatrixGroup) -> "MonomialSum":
        return cls.of(trivial_pair(G))

    def _check(self, other):
        if not isinstance(other, MonomialSum) or other.group is not self.group:
            raise GroupError("monomial sums over different groups")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        t = dict(self.terms)
        for p, c in other.terms.items():
            t[p] = t.get(p, 0) + c
        return MonomialSum(self.group, t)

    __radd__ = __add__

    def __neg__(self):
        return MonomialSum(self.group, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MonomialSum":
        return MonomialSum(self.group, {p: c * v for p, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MonomialSum):
            return rplus_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialSum)
            and other.group is self.group
            and self.terms == other.terms
        )

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        inner = " + ".join(f"{c}*{p.key_string}" for p, c in self.terms.items()) or "0"
        return f"<MonomialSum on {self.group.label}: {inner}>"

    def to_json(self) -> list:
        return [{"coeff": str(c), **p.to_json()} for p, c in self.terms.items()]


# -- product --------------------------------------------------------------------


@lru_cache(maxsize=100000)
def _mul_pairs(x: MonomialPair, y: MonomialPair) -> tuple:
    """(K, phi) . (H, psi) = sum over w in K\\G/H of (w^-1 K w meet H, w*(phi) psi)."""
    G = x.group
    K, phi = x.H, x.phi
    H, psi = y.H, y.phi
    out = {}
    for w in double_cosets(K, H).reps:
        wi = int(G.inv[w])
        tw = phi.twist(wi)  # on w^-1 K w, value phi(w z w^-1)
        I = intersect(tw.subgroup, H)
        chi = tw.restrict(I) * psi.restrict(I)
        p = canonicalize_pair(I, chi)
        out[p] = out.get(p, 0) + 1
    return tuple(out.items())


def rplus_mul(x: MonomialSum, y: MonomialSum) -> MonomialSum:
    x._check(y)
    acc = {}
    for p, a in x.items():
        for r, b in y.items():
            for s, c in _mul_pairs(p, r):
                acc[s] = acc.get(s, 0) + a * b * c
    return MonomialSum(x.group, acc)


# -- b, Boltje's form, explicit Brauer induction --------------------------------


@lru_cache(maxsize=100000)
def b_pair(p: MonomialPair) -> ClassFunction:
    return induce_character(p.H, p.phi)


def b_map(x: MonomialSum) -> ClassFunction:
    G = x.group
    acc = ClassFunction.zero(G)
    for p, c in x.items():
        acc = acc + b_pair(p) * c
    return acc


@lru_cache(maxsize=200000)
def _form_pairs(x: MonomialPair, y: MonomialPair) -> int:
    if x.H.order > y.H.order or y.H.order % x.H.order:
        return 0
    count = 0
    for g in double_cosets(x.H, y.H).reps:
        ok, _ = is_subconjugate(x.H, x.phi, g, y.H, y.phi)
        count += ok
    return count


def boltje_form(x, y) -> int:
    """[x, y]: count of g in H\\G/H' with (H, phi) <= (g H' g^-1, phi'(g^-1 . g))."""
    if isinstance(x, MonomialPair):
        x = MonomialSum.of(x)
    if isinstance(y, MonomialPair):
        y = MonomialSum.of(y)
    x._check(y)
    return sum(a * b * _form_pairs(p, r) for p, a in x.items() for r, b in y.items())


@dataclass
class MarkMatrix:
    group: MatrixGroup
    basis: tuple
    matrix: list  # matrix[i][j] = [basis_i, basis_j]

    @property
    def size(self) -> int:
        return len(self.basis)

    def is_lower_triangular(self) -> bool:
        return all(self.matrix[i][j] == 0 for i in range(self.size) for j in range(i + 1, self.size))

    def diagonal_positive(self) -> bool:
        return all(self.matrix[i][i] >= 1 for i in range(self.size))

    def rank_report(self) -> dict:
        res = linalg.solve(self.matrix, [0] * self.size)
        return {
            "size": self.size,
            "rank": res.rank,
            "kernel": [[str(v) for v in vec] for vec in res.kernel],
        }


@lru_cache(maxsize=16)
def _mark_matrix(G: MatrixGroup, cap: int, central: bool, phibar=None) -> MarkMatrix:
    B = basis(G, cap, central, phibar)
    M = [[_form_pairs(x, y) for y in B] for x in B]
    return MarkMatrix(G, B, M)


def mark_matrix(
    G: MatrixGroup, cap: int = DEFAULT_SUBGROUP_CAP, central: bool = False, phibar=None
) -> MarkMatrix:
    return _mark_matrix(G, cap, central, phibar)


class BrauerError(GroupError):
    pass


@dataclass
class BrauerResult:
    element: MonomialSum
    rank: int
    kernel: list
    in_image: bool  # b(element) == rho
    integral: bool


def brauer_induction(
    rho: ClassFunction, cap: int = DEFAULT_SUBGROUP_CAP, central: bool = False, phibar=None
) -> BrauerResult:
    """The unique a with [tau_i, a] = <b(tau_i), rho> for every basis element tau_i."""
    G = rho.group
    mm = mark_matrix(G, cap, central, phibar)
    rhs = []
    for tau in mm.basis:
        v = schur_inner(b_pair(tau), rho)
        if not v.is_rational():
            raise BrauerError("right-hand side is not rational; rho is not a virtual character over Q")
        rhs.append(v.to_fraction())
    res = linalg.solve(mm.matrix, rhs)
    if res.solution is None or res.kernel:
        raise BrauerError(
            f"mark matrix of rank {res.rank} < {mm.size}; kernel vectors: "
            f"{[[str(c) for c in v] for v in res.kernel]}"
        )
    terms = {}
    for p, c in zip(mm.basis, res.solution):
        if c:
            terms[p] = int(c) if c.denominator == 1 else c
    a = MonomialSum(G, terms)
    return BrauerResult(
        a,
        res.rank,
        res.kernel,
        b_map(a) == rho,
        all(Fraction(c).denominator == 1 for c in terms.values()),
    )


def induced_sum_oracle(H: Subgroup, phi: LinearCharacter) -> ClassFunction:
    """Ind_H^G(phi) by the defining sum (1/|H|) sum_x phi(x^-1 g x), element by element."""
    G = H.group
    vals = []
    for g in G.class_reps.tolist():
        acc = Cyclotomic.zero()
        conj = G.mul_many(G.mul_many(G.inv, g), np.arange(G.order))
        for y in conj.tolist():
            if y in H.set:
                acc = acc + Cyclotomic.zeta(phi.N, phi.exp(y))
        vals.append(acc / H.order)
    return ClassFunction(G, vals)
