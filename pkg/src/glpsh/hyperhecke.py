"""The hyperHecke algebra of a finite group, realized on induced modules.

A pair (H, phi) is represented by its :class:`LinearCharacter` (which knows
its subgroup).  A triple [(K, psi), g, (H, phi)] is valid when K <= g^-1 H g
and psi(k) = phi(g k g^-1); it acts Ind_K(psi) -> Ind_H(phi) by
g' (x) v |-> g' g^-1 (x) v.  The relations

    [(K, psi), g k, (H, phi)] = psi(k^-1) [(K, psi), g, (H, phi)]
    [(K, psi), h g, (H, phi)] = phi(h^-1) [(K, psi), g, (H, phi)]

are used to move g to the least element of H g K.  Scalars are roots of
unity, so they are carried as a pair (exponent, level) until they meet a sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclo import Cyclotomic
from .field import block_embed_flat, block_extract_flat
from .groups import (
    GroupError,
    LinearCharacter,
    MatrixGroup,
    Subgroup,
    block_parabolic,
    double_cosets,
    is_subconjugate,
    product_group,
)
from .indmod import build_induced, line_orbits


class InvalidTriple(GroupError):
    def __init__(self, reason: str, witness):
        super().__init__(f"invalid triple: {reason} fails at element {witness}")
        self.reason = reason
        self.witness = witness


def pair_json(phi: LinearCharacter) -> dict:
    G = phi.subgroup.group
    gens = phi.subgroup.generators()
    return {
        "order": phi.subgroup.order,
        "gens": [list(G.elements[g]) for g in gens],
        "N": phi.N,
        "exps": [phi.exp(g) for g in gens],
    }


@dataclass(frozen=True)
class HHTriple:
    source: LinearCharacter  # (K, psi)
    g: int
    target: LinearCharacter  # (H, phi)

    @property
    def group(self) -> MatrixGroup:
        return self.target.subgroup.group

    def __repr__(self):
        return (
            f"[(|K|={self.source.subgroup.order}, N={self.source.N}), g={self.g}, "
            f"(|H|={self.target.subgroup.order}, N={self.target.N})]"
        )

    def to_json(self) -> dict:
        G = self.group
        return {
            "source": pair_json(self.source),
            "g": list(G.elements[self.g]),
            "target": pair_json(self.target),
        }


def check_triple(psi: LinearCharacter, g: int, phi: LinearCharacter):
    """(ok, witness): K <= g^-1 H g and psi(k) = phi(g k g^-1)."""
    G = phi.subgroup.group
    return is_subconjugate(psi.subgroup, psi, int(G.inv[g]), phi.subgroup, phi)


def triple_make(psi: LinearCharacter, g: int, phi: LinearCharacter) -> HHTriple:
    if psi.subgroup.group is not phi.subgroup.group:
        raise GroupError("pairs live in different groups")
    ok, wit = check_triple(psi, g, phi)
    if not ok:
        raise InvalidTriple(*wit)
    return HHTriple(psi, int(g), phi)


def _level(*chars) -> int:
    return math.lcm(*(c.N for c in chars))


@lru_cache(maxsize=200000)
def _normalize(t: HHTriple):
    G = t.group
    H, K = t.target.subgroup, t.source.subgroup
    hg = G.mul_many(H.array, t.g)
    hgk = G.mul_many(hg[:, None], K.array[None, :])
    g0 = int(hgk.min())
    hi, ki = np.argwhere(hgk == g0)[0]
    # g = h g0 k with h = H[hi]^-1, k = K[ki]^-1, so [g] = phi(H[hi]) psi(K[ki]) [g0]
    N = _level(t.source, t.target)
    e = t.target.exp_at(int(H.array[hi]), N) + t.source.exp_at(int(K.array[ki]), N)
    return (e % N, N), HHTriple(t.source, g0, t.target)


def triple_normalize(t: HHTriple):
    """(scalar, canonical triple) with the canonical g the least element of H g K."""
    (e, N), t0 = _normalize(t)
    return Cyclotomic.zeta(N, e), t0


def root_of_unity(e: int, N: int) -> Cyclotomic:
    return Cyclotomic.zeta(N, e)


class HHElement:
    """A finite combination of normalized triples with cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc = {}
        for t, c in (terms or {}).items():
            s, t0 = triple_normalize(t)
            c = c * s if isinstance(c, Cyclotomic) else s * c
            acc[t0] = acc[t0] + c if t0 in acc else c
        self.terms = {t: c for t, c in sorted(acc.items(), key=lambda kv: _tkey(kv[0])) if c}

    @classmethod
    def of(cls, t: HHTriple, c=1) -> "HHElement":
        return cls({t: Cyclotomic.rational(c) if not isinstance(c, Cyclotomic) else c})

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return HHElement._raw(t)

    @classmethod
    def _raw(cls, terms):
        x = cls.__new__(cls)
        x.terms = {t: c for t, c in sorted(terms.items(), key=lambda kv: _tkey(kv[0])) if c}
        return x

    def scale(self, c) -> "HHElement":
        return HHElement._raw({t: v * c for t, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HHElement):
            return compose(self, other)
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HHElement) or self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[t] == other.terms[t] for t in self.terms)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return "HHElement(" + " + ".join(f"{c}*{t}" for t, c in self.terms.items()) + ")"

    def to_json(self) -> list:
        return [{"coeff": c.to_json(), **t.to_json()} for t, c in self.terms.items()]


def _tkey(t: HHTriple):
    return (t.source.subgroup.elements, t.source.key, t.g, t.target.subgroup.elements, t.target.key)


def compose(x: HHElement, y: HHElement) -> HHElement:
    """x . y: [(H,phi), g1, (J,mu)] . [(K,psi), g2, (H,phi)] = [(K,psi), g1 g2, (J,mu)]."""
    acc = {}
    for t1, c1 in x.terms.items():
        for t2, c2 in y.terms.items():
            if t1.source != t2.target:
                continue
            G = t1.group
            t = HHTriple(t2.source, G.mul(t1.g, t2.g), t1.target)
            s, t0 = triple_normalize(t)
            c = c1 * c2 * s
            acc[t0] = acc[t0] + c if t0 in acc else c
    return HHElement._raw(acc)


# -- module maps ------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialMap:
    """e_i |-> zeta_N^exps[i] e_targets[i]; a target of -1 means e_i |-> 0."""

    targets: tuple
    exps: tuple
    N: int
    dim_out: int

    def at_level(self, M: int) -> "MonomialMap":
        if M % self.N:
            raise ValueError("level must be a multiple")
        f = M // self.N
        return MonomialMap(self.targets, tuple(e * f for e in self.exps), M, self.dim_out)

    def then(self, other: "MonomialMap") -> "MonomialMap":
        """other o self."""
        N = math.lcm(self.N, other.N)
        a, b = self.at_level(N), other.at_level(N)
        tg, ex = [], []
        for t, e in zip(a.targets, a.exps):
            if t < 0 or b.targets[t] < 0:
                tg.append(-1)
                ex.append(0)
            else:
                tg.append(b.targets[t])
                ex.append((e + b.exps[t]) % N)
        return MonomialMap(tuple(tg), tuple(ex), N, b.dim_out)

    def scaled(self, e: int, N: int) -> "MonomialMap":
        L = math.lcm(self.N, N)
        a = self.at_level(L)
        k = e * (L // N)
        return MonomialMap(a.targets, tuple((x + k) % L if t >= 0 else 0 for t, x in zip(a.targets, a.exps)), L, a.dim_out)

    def normal(self) -> "MonomialMap":
        """Reduce to the least level that carries the exponents."""
        g = math.gcd(self.N, *[e for t, e in zip(self.targets, self.exps) if t >= 0])
        exps = tuple((e // g) if t >= 0 else 0 for t, e in zip(self.targets, self.exps))
        return MonomialMap(self.targets, exps, self.N // g, self.dim_out)

    def __eq__(self, other):
        if not isinstance(other, MonomialMap):
            return NotImplemented
        a, b = self.normal(), other.normal()
        return (a.targets, a.exps, a.N, a.dim_out) == (b.targets, b.exps, b.N, b.dim_out)

    def __hash__(self):
        a = self.normal()
        return hash((a.targets, a.exps, a.N))

    def dense(self):
        """Row-major matrix of Cyclotomic entries (rows = output basis)."""
        rows = [[Cyclotomic.zero() for _ in self.targets] for _ in range(self.dim_out)]
        for i, (t, e) in enumerate(zip(self.targets, self.exps)):
            if t >= 0:
                rows[t][i] = Cyclotomic.zeta(self.N, e)
        return rows


def to_module_map(t: HHTriple) -> MonomialMap:
    """Matrix of g' (x) v |-> g' g^-1 (x) v from Ind_K(psi) to Ind_H(phi)."""
    src = build_induced(t.source.subgroup, t.source)
    tgt = build_induced(t.target.subgroup, t.target)
    G = t.group
    x = G.mul_many(src.reps, int(G.inv[t.g]))
    j = tgt.labels[x]
    h = G.mul_many(G.inv[tgt.reps[j]], x)
    e = tgt._phi_full[h]
    return MonomialMap(tuple(j.tolist()), tuple(e.tolist()), tgt.N, tgt.dim)


def action_map(phi: LinearCharacter, g: int) -> MonomialMap:
    M = build_induced(phi.subgroup, phi)
    tg, e = M.act(g)
    return MonomialMap(tuple(tg.tolist()), tuple(e.tolist()), M.N, M.dim)


def element_module_map(x: HHElement):
    """Dense matrix of a general element (all terms must share source and target)."""
    mats = None
    for t, c in x.terms.items():
        d = to_module_map(t).dense()
        if mats is None:
            mats = [[v * c for v in row] for row in d]
        else:
            mats = [[a + v * c for a, v in zip(r1, r2)] for r1, r2 in zip(mats, d)]
    return mats


def is_equivariant(t: HHTriple) -> bool:
    T = to_module_map(t)
    for s in t.group.generators:
        if action_map(t.source, s).then(T) != T.then(action_map(t.target, s)):
            return False
    return True


# -- enumeration ------------------------------------------------------------------


def valid_reps(psi: LinearCharacter, phi: LinearCharacter) -> list:
    """Least elements g of the double cosets H g K carrying a valid triple."""
    H, K = phi.subgroup, psi.subgroup
    out = []
    for g in double_cosets(H, K).reps:
        if check_triple(psi, g, phi)[0]:
            out.append(int(g))
    return out


def canonical_triples(pairs) -> list:
    """All canonical triples between the given (canonical) pairs."""
    out = []
    for a in pairs:
        for b in pairs:
            for g in valid_reps(a, b):
                out.append(HHTriple(a, g, b))
    return out


def composable_pairs(triples):
    """(x, y) with x . y defined, i.e. x.source == y.target."""
    by_target = {}
    for y in triples:
        by_target.setdefault(y.target, []).append(y)
    for x in triples:
        for y in by_target.get(x.source, ()):
            yield x, y


def factorization(t: HHTriple):
    """[(K,psi), g, (H,phi)] = [(g^-1 H g, g*phi), g, (H,phi)] . [(K,psi), 1, (g^-1 H g, g*phi)]."""
    G = t.group
    mid = t.target.twist(int(G.inv[t.g]))  # on g^-1 H g, x |-> phi(g x g^-1)
    left = triple_make(mid, t.g, t.target)
    right = triple_make(t.source, G.identity, mid)
    return left, right


# -- comultiplication ---------------------------------------------------------------


@dataclass
class HHMatrix:
    """Entries in H(Levi) between line orbits: entries[(row, col)] with row a
    target orbit position and col a source orbit position."""

    levi: MatrixGroup
    rows: tuple  # target orbit pairs (LinearCharacter on the Levi group)
    cols: tuple  # source orbit pairs
    entries: dict

    def __eq__(self, other):
        if not isinstance(other, HHMatrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        keys = set(self.entries) | set(other.entries)
        zero = HHElement()
        return all(self.entries.get(k, zero) == other.entries.get(k, zero) for k in keys)

    __hash__ = None

    def __matmul__(self, other: "HHMatrix") -> "HHMatrix":
        """self o other: other maps cols -> middle, self maps middle -> rows."""
        if self.cols != other.rows:
            raise GroupError("inner orbit systems differ")
        acc = {}
        for (r, m), x in self.entries.items():
            for (m2, c), y in other.entries.items():
                if m2 != m:
                    continue
                z = compose(x, y)
                acc[(r, c)] = acc[(r, c)] + z if (r, c) in acc else z
        return HHMatrix(self.levi, self.rows, other.cols, {k: v for k, v in acc.items() if not v.is_zero()})

    def scale(self, c) -> "HHMatrix":
        return HHMatrix(self.levi, self.rows, self.cols, {k: v.scale(c) for k, v in self.entries.items()})

    def is_zero(self) -> bool:
        return not self.entries

    def to_json(self) -> dict:
        return {
            "rows": [pair_json(p) for p in self.rows],
            "cols": [pair_json(p) for p in self.cols],
            "entries": [
                {"row": r, "col": c, "value": v.to_json()} for (r, c), v in sorted(self.entries.items())
            ],
        }


def _orbit_pairs(ls):
    return tuple(o.character for o in ls.orbits)


def hh_comul(t: HHTriple, splits, sl_intersect: bool = False) -> HHMatrix:
    """Restrict the module map of t to valid lines, project to valid lines, and
    read it off as Levi hyperHecke triples between line orbits."""
    G = t.group
    pd = block_parabolic(G, tuple(tuple(s) for s in splits))
    L = pd.levi_group
    src = line_orbits(t.source.subgroup, t.source, pd, sl_intersect)
    tgt = line_orbits(t.target.subgroup, t.target, pd, sl_intersect)
    T = to_module_map(t)
    tgt_orbit = {}
    for pos, o in enumerate(tgt.orbits):
        for m in o.members:
            tgt_orbit[m] = pos
    entries = {}
    for col, o in enumerate(src.orbits):
        d = T.targets[o.chosen]
        lam = T.exps[o.chosen]
        if d not in tgt_orbit:
            continue  # image line is not valid: projected away
        row = tgt_orbit[d]
        o2 = tgt.orbits[row]
        y, kappa = o2.transversal[d]
        N = math.lcm(T.N, o2.character.N, o.character.N)
        e = lam * (N // T.N) - kappa * (N // T.N)
        tri = HHTriple(o.character, int(L.inv[y]), o2.character)
        ok, wit = check_triple(tri.source, tri.g, tri.target)
        if not ok:
            raise AssertionError(f"comultiplied entry is not a valid Levi triple: {wit}")
        entries[(row, col)] = HHElement.of(tri, Cyclotomic.zeta(N, e))
    return HHMatrix(L, _orbit_pairs(tgt), _orbit_pairs(src), entries)


def hh_comul_element(x: HHElement, splits, sl_intersect: bool = False) -> HHMatrix | None:
    """Linear extension; every term must share one source and one target."""
    acc = None
    for t, c in x.terms.items():
        m = hh_comul(t, splits, sl_intersect).scale(c)
        if acc is None:
            acc = m
        else:
            keys = set(acc.entries) | set(m.entries)
            zero = HHElement()
            ent = {k: acc.entries.get(k, zero) + m.entries.get(k, zero) for k in keys}
            acc = HHMatrix(acc.levi, acc.rows, acc.cols, {k: v for k, v in ent.items() if not v.is_zero()})
    return acc


def root_exponent(c: Cyclotomic, N: int):
    """k with c == zeta_N^k, or None."""
    for k in range(N):
        if c == Cyclotomic.zeta(N, k):
            return k
    return None


def as_root(c: Cyclotomic):
    """(k, N) with c == zeta_N^k, or None.

    Roots of unity in Q(zeta_N) are the +-zeta_N^k, so levels N and 2N suffice.
    """
    n = max(c.N, 1)
    for N in (n, 2 * n):
        k = root_exponent(c, N)
        if k is not None:
            return k, N
    return None


def element_matches_map(x: HHElement, M: MonomialMap) -> bool:
    """Does x act on induced modules exactly as the monomial map M?"""
    if len(x.terms) == 1:
        ((t, c),) = x.terms.items()
        r = as_root(c)
        if r is not None:
            return to_module_map(t).scaled(*r) == M
    if not x.terms:
        return False
    return element_module_map(x) == M.dense()


def reconstruct_line_map(mat: HHMatrix, t: HHTriple, splits, sl_intersect: bool = False):
    """Rebuild the map on valid source lines from the matrix entries alone.

    Source orbit j' is identified with Ind_{S'}(chi') through l (x) 1 |-> l e_c'.
    An entry c [(S', chi'), x, (S'', chi'')] then sends e_c' to c x^-1 e_c''.
    Returns {source line: (target line, exponent)} at the level of the target
    module, for comparison with the projected module map of t.
    """
    G = t.group
    pd = block_parabolic(G, tuple(tuple(s) for s in splits))
    L = pd.levi_group
    src = line_orbits(t.source.subgroup, t.source, pd, sl_intersect)
    tgt = line_orbits(t.target.subgroup, t.target, pd, sl_intersect)
    M2 = tgt.module
    out = {}
    for (row, col), x in mat.entries.items():
        for tri, c in x.terms.items():
            o, o2 = src.orbits[col], tgt.orbits[row]
            N = math.lcm(M2.N, src.module.N, *(ch.N for ch in (tri.source, tri.target)), 1)
            for lev in range(1, 5):
                kc = root_exponent(c, N * lev)
                if kc is not None:
                    N = N * lev
                    break
            else:
                raise AssertionError("entry coefficient is not a root of unity")
            for m in o.members:
                y1, k1 = o.transversal[m]
                amb = int(pd.levi_to_ambient[L.mul(y1, int(L.inv[tri.g]))])
                d, e = M2.act_on(amb, o2.chosen)
                k = (kc - k1 * (N // src.module.N) + e * (N // M2.N)) % N
                out[m] = (d, k, N)
    return out


def projected_line_map(t: HHTriple, splits, sl_intersect: bool = False):
    """The module map of t on valid source lines, dropping invalid images."""
    G = t.group
    pd = block_parabolic(G, tuple(tuple(s) for s in splits))
    src = line_orbits(t.source.subgroup, t.source, pd, sl_intersect)
    tgt = line_orbits(t.target.subgroup, t.target, pd, sl_intersect)
    T = to_module_map(t)
    valid = set(tgt.valid_lines)
    return {
        m: (T.targets[m], T.exps[m], T.N)
        for m in src.valid_lines
        if T.targets[m] in valid
    }


def same_line_maps(a: dict, b: dict) -> bool:
    if a.keys() != b.keys():
        return False
    for m in a:
        (d1, k1, n1), (d2, k2, n2) = a[m], b[m]
        if d1 != d2 or Fraction(k1, n1) % 1 != Fraction(k2, n2) % 1:
            return False
    return True


def check_condition(t: HHTriple, splits, sl_intersect: bool = False) -> list:
    """Per source double coset s in U\\G/K: (source condition, target condition).

    Source: psi trivial on s^-1 U s meet K.  Target: phi trivial on
    (s g^-1)^-1 U (s g^-1) meet H, i.e. the image line is valid.
    """
    G = t.group
    pd = block_parabolic(G, tuple(tuple(s) for s in splits))
    src = line_orbits(t.source.subgroup, t.source, pd, sl_intersect)
    tgt = line_orbits(t.target.subgroup, t.target, pd, sl_intersect)
    T = to_module_map(t)
    valid_tgt = set(tgt.valid_lines)
    M = src.module
    out = []
    for c in src.cosets:
        i = int(M.labels[c.t])
        out.append((c.t, c.valid, T.targets[i] in valid_tgt))
    return out


# -- parabolic product of triples -----------------------------------------------------


def _join_pairs(a: LinearCharacter, b: LinearCharacter, C: MatrixGroup, idx):
    N = math.lcm(a.N, b.N)
    elems, exps = [], []
    for x in a.subgroup.elements:
        for y in b.subgroup.elements:
            elems.append(int(idx(x, y)))
            exps.append(a.exp_at(x, N) + b.exp_at(y, N))
    order = np.argsort(elems)
    S = Subgroup(C, np.array(elems)[order])
    return LinearCharacter(S, N, np.array(exps)[order])


def _block_join_index(A: MatrixGroup, B: MatrixGroup, C: MatrixGroup, promote_to: MatrixGroup | None):
    def idx(x, y):
        blocks = block_extract_flat(A.elements[x], A.parts, A.n) + block_extract_flat(
            B.elements[y], B.parts, B.n
        )
        flat = block_embed_flat(blocks, C.parts, C.n)
        if promote_to is not None:
            return promote_to.index[flat]
        return C.index[flat]

    return idx


def hh_join(x: HHTriple, y: HHTriple, promote: bool = False) -> HHTriple:
    """[(K x K', psi psi'), (g, g'), (H x H', phi phi')] on G(a) x G(b), or in G(a+b)."""
    A, B = x.group, y.group
    if A.q != B.q:
        raise GroupError("different fields")
    C = product_group(A.parts + B.parts, A.q)
    target = gl_sum(C) if promote else None
    idx = _block_join_index(A, B, C, target)
    D = target if promote else C
    src = _join_pairs(x.source, y.source, D, idx)
    tgt = _join_pairs(x.target, y.target, D, idx)
    return triple_make(src, idx(x.g, y.g), tgt)


def gl_sum(C: MatrixGroup) -> MatrixGroup:
    return product_group((sum(C.parts),), C.q)


def hh_parabolic_mul(xs, ys, promote: bool = True):
    """Blockwise join of r-fold and s-fold tensors of triples; None (zero) when r != s."""
    if len(xs) != len(ys):
        return None
    return [hh_join(x, y, promote) for x, y in zip(xs, ys)]


def join_element(x: HHElement, y: HHElement, promote: bool = False) -> HHElement:
    acc = HHElement()
    for t1, c1 in x.terms.items():
        for t2, c2 in y.terms.items():
            acc = acc + HHElement.of(hh_join(t1, t2, promote), c1 * c2)
    return acc
