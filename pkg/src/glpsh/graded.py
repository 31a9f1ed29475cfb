"""Graded rings R_n and R_+,n with parabolic product and fixed-point coproduct.

A homogeneous component of degree (a_1, ..., a_n) is a class function (or a
monomial sum) on G(a_1) x ... x G(a_n), realized as the block product group.
The product m induces from the parabolic with Levi blocks (a_1, b_1, a_2,
b_2, ...), the coproduct m* averages over the unipotent radical, and the
shuffle tau moves between the interleaved block order and the split order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .classfn import (
    ClassFunction,
    external_product,
    hc_restriction_map,
    parabolic_induction_map,
    transport,
)
from .field import block_embed_flat, block_extract_flat
from .groups import (
    GroupError,
    LinearCharacter,
    Subgroup,
    block_parabolic,
    product_group,
)
from .indmod import line_orbits
from .rplus import MonomialSum, b_map, canonicalize_pair


@dataclass(frozen=True)
class ShuffleTau:
    """(1, ..., 2n) -> (1, n+1, 2, n+2, ..., n, 2n), as a 0-based block order."""

    n: int

    @property
    def perm(self) -> tuple:
        return tuple(x for i in range(self.n) for x in (i, self.n + i))

    @property
    def inverse(self) -> tuple:
        p = self.perm
        inv = [0] * len(p)
        for i, x in enumerate(p):
            inv[x] = i
        return tuple(inv)


def _check_q(a, b):
    if a.group.q != b.group.q:
        raise GroupError("components over different fields")


class GradedRElement:
    """Finite map from degree tuples to class functions on the product group."""

    def __init__(self, n: int, q: int, comps=None):
        self.n = n
        self.q = q
        self.comps = {}
        for deg, f in (comps or {}).items():
            deg = tuple(deg)
            if len(deg) != n:
                raise GroupError(f"degree {deg} has the wrong number of factors")
            if f.group is not product_group(deg, q):
                raise GroupError(f"component of degree {deg} lives on the wrong group")
            if not f.is_zero():
                self.comps[deg] = self.comps[deg] + f if deg in self.comps else f
        self.comps = {d: self.comps[d] for d in sorted(self.comps)}

    @classmethod
    def homogeneous(cls, f: ClassFunction) -> "GradedRElement":
        return cls(len(f.group.parts), f.group.q, {f.group.parts: f})

    @classmethod
    def unit(cls, n: int, q: int) -> "GradedRElement":
        deg = (0,) * n
        return cls(n, q, {deg: ClassFunction.trivial(product_group(deg, q))})

    def __add__(self, other):
        out = dict(self.comps)
        for d, f in other.comps.items():
            out[d] = out[d] + f if d in out else f
        return GradedRElement(self.n, self.q, out)

    def __eq__(self, other):
        return (
            isinstance(other, GradedRElement)
            and self.n == other.n
            and self.comps.keys() == other.comps.keys()
            and all(self.comps[d] == other.comps[d] for d in self.comps)
        )

    __hash__ = None

    def __repr__(self):
        return f"<GradedRElement n={self.n} degrees={list(self.comps)}>"


class GradedRPlusElement:
    def __init__(self, n: int, q: int, comps=None):
        self.n = n
        self.q = q
        self.comps = {}
        for deg, x in (comps or {}).items():
            deg = tuple(deg)
            if x.group is not product_group(deg, q):
                raise GroupError(f"component of degree {deg} lives on the wrong group")
            if not x.is_zero():
                self.comps[deg] = self.comps[deg] + x if deg in self.comps else x
        self.comps = {d: self.comps[d] for d in sorted(self.comps)}

    @classmethod
    def homogeneous(cls, x: MonomialSum) -> "GradedRPlusElement":
        return cls(len(x.group.parts), x.group.q, {x.group.parts: x})

    def b(self) -> GradedRElement:
        return GradedRElement(self.n, self.q, {d: b_map(x) for d, x in self.comps.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GradedRPlusElement)
            and self.comps.keys() == other.comps.keys()
            and all(self.comps[d] == other.comps[d] for d in self.comps)
        )

    __hash__ = None


# -- m and m* on class functions -------------------------------------------------


def parabolic_product(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    """Factorwise Ind_P Inf of f x g, for f on prod G(a_i) and g on prod G(b_i)."""
    _check_q(f, g)
    a, b = f.group.parts, g.group.parts
    if len(a) != len(b):
        raise GroupError("factor-count mismatch")
    n = len(a)
    fg = external_product(f, g)
    if n > 1:
        fg = transport(fg, ShuffleTau(n).perm)
    target = product_group(tuple(x + y for x, y in zip(a, b)), f.group.q)
    splits = tuple((x, y) for x, y in zip(a, b))
    return parabolic_induction_map(target, splits)(fg)


def m_R(x: GradedRElement, y: GradedRElement) -> GradedRElement:
    if x.n != y.n or x.q != y.q:
        raise GroupError("factor-count mismatch")
    out = GradedRElement(x.n, x.q)
    for f in x.comps.values():
        for g in y.comps.values():
            out = out + GradedRElement.homogeneous(parabolic_product(f, g))
    return out


def hc_component(f: ClassFunction, alphas) -> ClassFunction:
    """Split degree a_i into (alpha_i, a_i - alpha_i) and average over U.

    The result lives on G(alpha_1) x ... x G(alpha_n) x G(a_1 - alpha_1) x ...,
    i.e. the interleaved Levi blocks reordered by tau^-1.
    """
    G = f.group
    alphas = tuple(alphas)
    if len(alphas) != len(G.parts) or any(not 0 <= al <= a for al, a in zip(alphas, G.parts)):
        raise GroupError(f"split {alphas} does not fit {G.parts}")
    splits = tuple((al, a - al) for al, a in zip(alphas, G.parts))
    h = hc_restriction_map(G, splits)(f)
    n = len(G.parts)
    if n > 1:
        h = transport(h, ShuffleTau(n).inverse)
    return h


def m_star_R(x: GradedRElement) -> dict:
    """{(left degree, right degree): class function on the concatenated product}."""
    out = {}
    for deg, f in x.comps.items():
        for alphas in itertools.product(*(range(a + 1) for a in deg)):
            left = tuple(alphas)
            right = tuple(a - al for a, al in zip(deg, alphas))
            h = hc_component(f, alphas)
            key = (left, right)
            out[key] = out[key] + h if key in out else h
    return out


def counit(x: GradedRElement):
    """Projection to the all-zero degree, as a rational number."""
    deg = (0,) * x.n
    if deg not in x.comps:
        return 0
    return x.comps[deg].values[0].to_fraction()


# -- m_plus and m*_plus -----------------------------------------------------------


def _interleave_index(L, A, B, a_el, b_el):
    """Levi-group index of the interleaved block matrix of (a_el, b_el)."""
    na = len(A.parts)
    ba = block_extract_flat(A.elements[a_el], A.parts, A.n)
    bb = block_extract_flat(B.elements[b_el], B.parts, B.n)
    blocks = [m for i in range(na) for m in (ba[i], bb[i])]
    return L.index[block_embed_flat(blocks, L.parts, L.n)]


def m_plus_pair(p, r, literal: bool = False):
    """(U_{a,b} x| (H x K), inflation of phi psi) on G(a+b), factorwise.

    With ``literal`` the unipotent radical is dropped: (H x K, phi psi).
    """
    A, B = p.group, r.group
    if len(A.parts) != len(B.parts) or A.q != B.q:
        raise GroupError("factor-count mismatch")
    target = product_group(tuple(x + y for x, y in zip(A.parts, B.parts)), A.q)
    splits = tuple((x, y) for x, y in zip(A.parts, B.parts))
    pd = block_parabolic(target, splits)
    L = pd.levi_group
    H, phi, K, psi = p.H, p.phi, r.H, r.phi
    N = np.lcm(phi.N, psi.N).item()
    levi_elems, levi_exps = [], []
    for h in H.elements:
        for k in K.elements:
            levi_elems.append(int(pd.levi_to_ambient[_interleave_index(L, A, B, h, k)]))
            levi_exps.append(phi.exp_at(h, N) + psi.exp_at(k, N))
    levi_elems = np.array(levi_elems, dtype=np.int64)
    levi_exps = np.array(levi_exps, dtype=np.int64)
    if literal:
        elems, exps = levi_elems, levi_exps
    else:
        U = pd.U.array
        elems = target.mul_many(U[:, None], levi_elems[None, :]).ravel()
        exps = np.broadcast_to(levi_exps[None, :], (len(U), len(levi_elems))).ravel()
    order = np.argsort(elems)
    Q = Subgroup(target, elems[order])
    if Q.order != len(elems):
        raise AssertionError("U x (H x K) is not a semidirect product")
    return canonicalize_pair(Q, LinearCharacter(Q, N, exps[order]))


def m_plus(x: MonomialSum, y: MonomialSum, literal: bool = False) -> MonomialSum:
    acc = None
    for p, a in x.items():
        for r, b in y.items():
            term = MonomialSum.of(m_plus_pair(p, r, literal), a * b)
            acc = term if acc is None else acc + term
    if acc is None:
        target = product_group(
            tuple(u + v for u, v in zip(x.group.parts, y.group.parts)), x.group.q
        )
        return MonomialSum.zero(target)
    return acc


def m_star_plus(x: MonomialSum, splits, sl_intersect: bool = False) -> MonomialSum:
    """Line-orbit comultiplication for one parabolic; lands in R_+ of its Levi group."""
    G = x.group
    pd = block_parabolic(G, tuple(tuple(s) for s in splits))
    acc = MonomialSum.zero(pd.levi_group)
    for p, c in x.items():
        acc = acc + line_orbits(p.H, p.phi, pd, sl_intersect).m_star_plus().scale(c)
    return acc


# -- the diagram checks ------------------------------------------------------------


@dataclass
class SquareOutcome:
    instance: dict
    equal: bool
    witness: dict | None = None


def hopf_square(f: ClassFunction, g: ClassFunction):
    """Compare m* m with (m x m)(1 x T x 1)(m* x m*) for f on G(a), g on G(b).

    Yields one outcome per total s = gamma + delta in 0..a+b, where the right
    side is summed over gamma.
    """
    a, b = f.group.parts[0], g.group.parts[0]
    q = f.group.q
    prod = parabolic_product(f, g)
    mf = m_star_R(GradedRElement.homogeneous(f))
    mg = m_star_R(GradedRElement.homogeneous(g))
    for s in range(a + b + 1):
        lhs = hc_component(prod, (s,))
        target = product_group((s, a + b - s), q)
        rhs = ClassFunction.zero(target)
        terms = []
        for gamma in range(max(0, s - b), min(a, s) + 1):
            delta = s - gamma
            f1 = mf[((gamma,), (a - gamma,))]
            g1 = mg[((delta,), (b - delta,))]
            # G(gamma) x G(a-gamma) x G(delta) x G(b-delta) -> swap the middle
            four = transport(external_product(f1, g1), (0, 2, 1, 3))
            splits = ((gamma, delta), (a - gamma, b - delta))
            rhs = rhs + parabolic_induction_map(target, splits)(four)
            terms.append(gamma)
        witness = None
        if lhs != rhs:
            witness = {
                "lhs": lhs.to_json(),
                "rhs": rhs.to_json(),
            }
        yield SquareOutcome({"s": s, "gammas": terms}, lhs == rhs, witness)


def coassociativity(p, parts3, sl_intersect: bool = False):
    """Two-step versus direct line comultiplication for a three-block split of G(a).

    Returns (direct, via_left, via_right) monomial sums on G(x) x G(y) x G(z).
    """
    G = p.group
    if len(G.parts) != 1:
        raise GroupError("coassociativity check expects a single factor")
    al, be, ga = parts3
    x = MonomialSum.of(p)
    direct = m_star_plus(x, ((al, be, ga),), sl_intersect)
    first = m_star_plus(x, ((al, be + ga),), sl_intersect)
    left = m_star_plus(first, ((al,), (be, ga)), sl_intersect)
    first = m_star_plus(x, ((al + be, ga),), sl_intersect)
    right = m_star_plus(first, ((al, be), (ga,)), sl_intersect)
    return direct, left, right
