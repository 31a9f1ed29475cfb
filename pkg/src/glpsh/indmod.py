"""Induced modules Ind_H^G(phi) in the monomial basis r_i (x) 1, and lines.

The basis is indexed by left cosets r_i H, with r_i the least element of its
coset.  Every group element acts monomially: g . (r_i (x) 1) = phi(h) r_j (x) 1
where g r_i = r_j h.  Scalars are kept as exponents of zeta_N with N the
order of phi, so action data stays integral.

For a parabolic P = U Levi, each basis vector spans a line.  The line of r_i H
lies over the double coset U r_i H, which is valid when phi is trivial on
r_i^-1 U r_i meet H.  The Levi permutes the valid lines (up to scalars); its
orbits, stabilizers and stabilizer characters give the line decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import kernels
from .classfn import ClassFunction, induce_character
from .cyclo import Cyclotomic
from .groups import (
    GroupError,
    LinearCharacter,
    Subgroup,
    block_parabolic,
    double_cosets,
    left_cosets,
)
from .rplus import MonomialSum, canonicalize_pair


class InducedModule:
    def __init__(self, H: Subgroup, phi: LinearCharacter):
        if phi.subgroup != H:
            raise GroupError("character does not live on H")
        self.G = H.group
        self.H = H
        self.phi = phi
        self.N = phi.N
        reps, labels = left_cosets(H)
        self.reps = np.array(reps, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        # phi exponent of every ambient element, -1 off H
        full = np.full(self.G.order, -1, dtype=np.int64)
        full[H.array] = phi.exps
        self._phi_full = full

    @property
    def dim(self) -> int:
        return len(self.reps)

    def act(self, g: int):
        """(targets, exps): g e_i = zeta_N^exps[i] e_targets[i]."""
        G = self.G
        x = G.mul_many(int(g), self.reps)
        tgt = self.labels[x]
        h = G.mul_many(G.inv[self.reps[tgt]], x)
        e = self._phi_full[h]
        assert (e >= 0).all()
        return tgt, e

    def act_on(self, g: int, i: int):
        G = self.G
        x = G.mul(int(g), int(self.reps[i]))
        j = int(self.labels[x])
        h = G.mul(int(G.inv[self.reps[j]]), x)
        return j, int(self._phi_full[h])

    def act_many(self, gs, i: int):
        """Images of the single basis vector e_i under each g in ``gs``."""
        G = self.G
        x = G.mul_many(np.asarray(gs, dtype=np.int64), int(self.reps[i]))
        tgt = self.labels[x]
        h = G.mul_many(G.inv[self.reps[tgt]], x)
        return tgt, self._phi_full[h]

    @cached_property
    def generator_action(self) -> dict:
        return {int(g): self.act(g) for g in self.G.generators}

    def trace(self, g: int) -> Cyclotomic:
        tgt, e = self.act(g)
        fixed = np.flatnonzero(tgt == np.arange(self.dim))
        return Cyclotomic.from_counts(self.N, np.bincount(e[fixed], minlength=self.N))

    def character(self) -> ClassFunction:
        return ClassFunction(self.G, [self.trace(int(r)) for r in self.G.class_reps])

    def coset_of(self, g: int) -> int:
        return int(self.labels[g])


@lru_cache(maxsize=4096)
def build_induced(H: Subgroup, phi: LinearCharacter) -> InducedModule:
    return InducedModule(H, phi)


# -- valid double cosets and lines ---------------------------------------------


@dataclass
class ValidCoset:
    t: int  # least element of U t H
    valid: bool
    lines: tuple  # basis indices of the lines u t H
    cap_order: int  # |U meet t H t^-1|


@dataclass
class LineOrbit:
    j: int
    chosen: int  # least basis index in the orbit
    members: tuple
    stabilizer: Subgroup  # subgroup of the Levi group
    character: LinearCharacter  # scalar action of the stabilizer on the chosen line
    transversal: dict  # member line -> (Levi-group element y, exponent k) with y e_chosen = z^k e_member
    cosets: tuple  # representatives t of the double cosets the orbit meets
    pair: object = None  # canonical MonomialPair of (stabilizer, character)
    mu: int = 0

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class LineSystem:
    module: InducedModule
    pd: object  # ParabolicData
    cosets: list  # ValidCoset per U\G/H, in representative order
    line_coset: np.ndarray  # basis index -> position in ``cosets``
    valid_lines: tuple
    orbits: list = field(default_factory=list)

    @property
    def total_lines(self) -> int:
        return len(self.valid_lines)

    @property
    def valid_cosets(self) -> list:
        return [c for c in self.cosets if c.valid]

    def orbit_of_line(self) -> dict:
        return {m: o for o in self.orbits for m in o.members}

    def m_star_plus(self) -> MonomialSum:
        L = self.pd.levi_group
        acc = {}
        for o in self.orbits:
            acc[o.pair] = acc.get(o.pair, 0) + 1
        return MonomialSum(L, acc)

    def stabilizer_characters_trivial(self) -> bool:
        return all(o.character.is_trivial for o in self.orbits)

    def orbit_sum(self) -> int:
        """Sum of mu(j) [Levi : G(j)] over orbit classes; equals the total line count."""
        L = self.pd.levi_group
        seen = {}
        for o in self.orbits:
            seen.setdefault(o.pair, (o.mu, L.order // o.stabilizer.order))
        return sum(mu * idx for mu, idx in seen.values())


def _restricted_U(pd, sl_intersect: bool):
    if not sl_intersect:
        return pd.U
    G = pd.ambient
    F = G.field
    keep = [u for u in pd.U.elements if _block_dets_one(G, u, F)]
    return Subgroup(G, keep)


def _block_dets_one(G, x, F):
    from .field import block_extract_flat, det_flat

    for blk, a in zip(block_extract_flat(G.elements[x], G.parts, G.n), G.parts):
        if a and det_flat(F, blk, a) != 1:
            return False
    return True


def valid_double_cosets(H: Subgroup, phi: LinearCharacter, pd, sl_intersect: bool = False) -> list:
    """All t in U\\G/H with the validity flag (phi trivial on t^-1 U t meet H)."""
    return _line_system(H, phi, pd, sl_intersect).cosets


def _line_system(H, phi, pd, sl_intersect=False) -> LineSystem:
    return _line_system_cached(H, phi, pd.ambient, pd.splits, sl_intersect)


@lru_cache(maxsize=4096)
def _line_system_cached(H, phi, G, splits, sl_intersect) -> LineSystem:
    pd = block_parabolic(G, splits)
    M = build_induced(H, phi)
    U = _restricted_U(pd, sl_intersect)
    dc = double_cosets(U, H)
    coset_pos = dc.labels[M.reps]
    cosets = []
    for pos, t in enumerate(dc.reps):
        ti = int(G.inv[t])
        conj = G.mul_many(G.mul_many(ti, U.array), t)  # t^-1 U t
        inH = conj[np.isin(conj, H.array)]
        valid = bool((M._phi_full[inH] == 0).all())
        lines = tuple(np.flatnonzero(coset_pos == pos).tolist())
        cosets.append(ValidCoset(int(t), valid, lines, len(inH)))
    valid_lines = tuple(i for c in cosets if c.valid for i in c.lines)
    ls = LineSystem(M, pd, cosets, coset_pos, valid_lines)
    ls.orbits = _orbits(ls)
    return ls


def _orbits(ls: LineSystem) -> list:
    M, pd = ls.module, ls.pd
    L = pd.levi_group
    l2a = pd.levi_to_ambient
    if not ls.valid_lines:
        return []
    gens = [int(l2a[g]) for g in L.generators]
    if gens:
        perms = np.stack([M.act(g)[0] for g in gens])
        labels = kernels.orbit_labels(perms)
    else:
        labels = np.arange(M.dim)
    valid = set(ls.valid_lines)
    chosen_lines = sorted({int(labels[i]) for i in ls.valid_lines})
    out = []
    allL = np.arange(L.order)
    for j, c in enumerate(chosen_lines):
        tgt, e = M.act_many(l2a, c)
        stab = np.flatnonzero(tgt == c)
        S = Subgroup(L, stab)
        chi = LinearCharacter(S, M.N, e[stab])
        trans = {}
        for y in allL.tolist():  # least y per member line
            d = int(tgt[y])
            if d not in trans:
                trans[d] = (y, int(e[y]))
        members = tuple(sorted(trans))
        assert set(members) <= valid
        cos = tuple(sorted({ls.cosets[int(ls.line_coset[m])].t for m in members}))
        out.append(LineOrbit(j, c, members, S, chi, trans, cos))
    counts = {}
    for o in out:
        o.pair = canonicalize_pair(o.stabilizer, o.character)
        counts[o.pair] = counts.get(o.pair, 0) + 1
    for o in out:
        o.mu = counts[o.pair]
    return out


def line_orbits(H: Subgroup, phi: LinearCharacter, pd, sl_intersect: bool = False) -> LineSystem:
    """Levi orbits on the valid lines of Ind_H^G(phi) for the parabolic ``pd``."""
    return _line_system(H, phi, pd, sl_intersect)


# -- U-fixed vectors ------------------------------------------------------------


@dataclass
class FixedSubspace:
    system: LineSystem
    basis: list  # per valid coset: {line: exponent}, v_t = m_t sum z^e e_line
    multiplicities: list  # m_t = |U meet t H t^-1|
    coset_index: dict  # ValidCoset.t -> position in ``basis``

    @property
    def dim(self) -> int:
        return len(self.basis)

    def levi_action(self, l_amb: int):
        """l v_t = z^k v_t' as a list of (t position, t' position, k)."""
        M = self.system.module
        tgt, e = M.act(l_amb)
        out = []
        for pos, vec in enumerate(self.basis):
            i0 = min(vec)
            j0 = int(tgt[i0])
            pos2 = self._pos_of_line[j0]
            target = self.basis[pos2]
            ks = {(vec[i] + int(e[i]) - target[int(tgt[i])]) % M.N for i in vec}
            if len(ks) != 1 or len(vec) != len(target):
                raise AssertionError("Levi action does not map fixed vectors to multiples")
            out.append((pos, pos2, ks.pop()))
        return out

    @cached_property
    def _pos_of_line(self) -> dict:
        return {i: p for p, vec in enumerate(self.basis) for i in vec}

    def character(self) -> ClassFunction:
        pd = self.system.pd
        L = pd.levi_group
        N = self.system.module.N
        vals = []
        for r in L.class_reps.tolist():
            counts = np.zeros(N, dtype=np.int64)
            for pos, pos2, k in self.levi_action(int(pd.levi_to_ambient[r])):
                if pos == pos2:
                    counts[k] += 1
            vals.append(Cyclotomic.from_counts(N, counts))
        return ClassFunction(L, vals)


def u_fixed_subspace(M: InducedModule, pd, sl_intersect: bool = False) -> FixedSubspace:
    """Basis v_t = sum_u u (t (x) 1) over valid t, with the Levi action on it."""
    ls = _line_system(M.H, M.phi, pd, sl_intersect)
    U = _restricted_U(pd, sl_intersect)
    basis, mults, index = [], [], {}
    for c in ls.cosets:
        if not c.valid:
            continue
        i_t = int(M.labels[c.t])
        tgt, e = M.act_many(U.array, i_t)
        vec = {}
        for d, k in zip(tgt.tolist(), e.tolist()):
            if d in vec and vec[d] != k:
                raise AssertionError("valid coset produced cancelling contributions")
            vec[d] = k
        index[c.t] = len(basis)
        basis.append(vec)
        mults.append(U.order // len(vec))
    return FixedSubspace(ls, basis, mults, index)


# -- line-span characters ---------------------------------------------------------


def line_span_levi_character(ls: LineSystem) -> ClassFunction:
    """Character of the Levi on the span of the valid lines."""
    M, pd = ls.module, ls.pd
    L = pd.levi_group
    valid = np.array(ls.valid_lines, dtype=np.int64)
    vals = []
    for r in L.class_reps.tolist():
        tgt, e = M.act(int(pd.levi_to_ambient[r]))
        fixed = valid[tgt[valid] == valid]
        vals.append(Cyclotomic.from_counts(M.N, np.bincount(e[fixed], minlength=M.N)))
    return ClassFunction(L, vals)


def line_span_hc_character(ls: LineSystem, sl_intersect: bool = False) -> ClassFunction:
    """(1/|U|) sum_u trace(l u) on the span of the valid lines, for l in the Levi."""
    M, pd = ls.module, ls.pd
    L = pd.levi_group
    U = _restricted_U(pd, sl_intersect)
    G = M.G
    valid = np.array(ls.valid_lines, dtype=np.int64)
    vals = []
    for r in L.class_reps.tolist():
        l = int(pd.levi_to_ambient[r])
        counts = np.zeros(M.N, dtype=np.int64)
        for lu in G.mul_many(l, U.array).tolist():
            tgt, e = M.act(lu)
            fixed = valid[tgt[valid] == valid]
            counts += np.bincount(e[fixed], minlength=M.N)
        vals.append(Cyclotomic.from_counts(M.N, counts, Fraction(1, U.order)))
    return ClassFunction(L, vals)


def b_of_m_star_plus(ls: LineSystem) -> ClassFunction:
    L = ls.pd.levi_group
    acc = ClassFunction.zero(L)
    for o in ls.orbits:
        acc = acc + induce_character(o.stabilizer, o.character)
    return acc
