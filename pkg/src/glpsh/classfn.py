"""Class functions with exact cyclotomic values: the ambient R(G).

Values are indexed by the conjugacy classes of the group, in the order of
``group.class_reps``.  The linear maps used repeatedly (induction from a
subgroup, inflation followed by parabolic induction, Harish-Chandra
restriction) are precomputed as sparse rational class-to-class matrices.
"""

from __future__ import annotations

from collections import defaultdict
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
    product_group,
    regroup_blocks,
)


class ClassFunction:
    __slots__ = ("group", "values")

    def __init__(self, group: MatrixGroup, values):
        values = tuple(v if isinstance(v, Cyclotomic) else Cyclotomic.rational(v) for v in values)
        if len(values) != group.num_classes:
            raise GroupError(f"{len(values)} values for {group.num_classes} classes")
        self.group = group
        self.values = values

    @classmethod
    def constant(cls, G: MatrixGroup, c) -> "ClassFunction":
        return cls(G, [Cyclotomic.rational(c)] * G.num_classes)

    @classmethod
    def trivial(cls, G: MatrixGroup) -> "ClassFunction":
        return cls.constant(G, 1)

    @classmethod
    def zero(cls, G: MatrixGroup) -> "ClassFunction":
        return cls.constant(G, 0)

    @classmethod
    def regular(cls, G: MatrixGroup) -> "ClassFunction":
        vals = [Cyclotomic.rational(G.order if r == G.identity else 0) for r in G.class_reps]
        return cls(G, vals)

    @classmethod
    def from_element_function(cls, G: MatrixGroup, f) -> "ClassFunction":
        return cls(G, [f(int(r)) for r in G.class_reps])

    @classmethod
    def from_linear_character(cls, phi: LinearCharacter) -> "ClassFunction":
        """phi as a class function on ``phi.subgroup.as_group()``."""
        H = phi.subgroup
        HG = H.as_group()
        return cls(HG, [Cyclotomic.zeta(phi.N, phi.exps[int(r)]) for r in HG.class_reps])

    def __call__(self, x: int) -> Cyclotomic:
        return self.values[int(self.group.class_of[x])]

    @property
    def degree(self) -> Cyclotomic:
        return self(self.group.identity)

    def _check(self, other):
        if not isinstance(other, ClassFunction) or other.group is not self.group:
            raise GroupError("class functions on different groups")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    __radd__ = __add__

    def __sub__(self, other):
        self._check(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, [a.conj() for a in self.values])

    def __eq__(self, other):
        return (
            isinstance(other, ClassFunction)
            and other.group is self.group
            and all(a == b for a, b in zip(self.values, other.values))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def __repr__(self):
        return f"<ClassFunction on {self.group.label}: {list(self.values)}>"

    def to_json(self) -> list:
        G = self.group
        return [
            {"rep": list(G.elements[int(r)]), **v.to_json()}
            for r, v in zip(G.class_reps, self.values)
        ]

    @classmethod
    def from_json(cls, G: MatrixGroup, data) -> "ClassFunction":
        vals = [None] * G.num_classes
        for item in data:
            x = G.index[tuple(item["rep"])]
            vals[int(G.class_of[x])] = Cyclotomic.from_json(item)
        if any(v is None for v in vals):
            raise GroupError("class function JSON does not cover every class")
        return cls(G, vals)


class ClassMap:
    """A linear map of class functions given by a sparse rational matrix."""

    def __init__(self, source: MatrixGroup, target: MatrixGroup, rows):
        self.source = source
        self.target = target
        self.rows = rows  # per target class: list of (source class, Fraction)

    def __call__(self, f: ClassFunction) -> ClassFunction:
        if f.group is not self.source:
            raise GroupError(f"map expects a class function on {self.source.label}")
        out = []
        for row in self.rows:
            acc = Cyclotomic.zero()
            for j, c in row:
                acc = acc + f.values[j] * c
            out.append(acc)
        return ClassFunction(self.target, out)


def _rows_from_counts(counts, scales):
    rows = []
    for i, row in enumerate(counts):
        rows.append([(j, Fraction(int(c)) * scales[i]) for j, c in row.items() if c])
    return rows


# -- induction ------------------------------------------------------------------


@lru_cache(maxsize=512)
def induction_map(H: Subgroup) -> ClassMap:
    """Ind from H (as ``H.as_group()``) to its ambient group."""
    G = H.group
    HG = H.as_group()
    counts = [defaultdict(int) for _ in range(G.num_classes)]
    gcls = G.class_of[H.array]
    for x, (gc, hc) in enumerate(zip(gcls.tolist(), HG.class_of.tolist())):
        counts[gc][hc] += 1
    scales = [Fraction(G.order, H.order * int(s)) for s in G.class_sizes]
    return ClassMap(HG, G, _rows_from_counts(counts, scales))


def induce_character(H: Subgroup, f, G: MatrixGroup | None = None) -> ClassFunction:
    """Ind_H^G f for a linear character or a class function on ``H.as_group()``.

    Value at g: (1/|H|) sum over x in G with x^-1 g x in H of f(x^-1 g x),
    evaluated class-wise as |G|/(|H| |g^G|) * sum of f over H meet g^G.
    """
    if G is not None and G is not H.group:
        raise GroupError("H is not a subgroup of G")
    G = H.group
    if isinstance(f, LinearCharacter):
        if f.subgroup != H:
            raise GroupError("character lives on another subgroup")
        counts = [defaultdict(int) for _ in range(G.num_classes)]
        for x, gc in zip(f.exps, G.class_of[H.array].tolist()):
            counts[gc][x] += 1
        return ClassFunction(
            G,
            [
                Cyclotomic.from_counts(f.N, counts[c], Fraction(G.order, H.order * int(s)))
                for c, s in enumerate(G.class_sizes)
            ],
        )
    return induction_map(H)(f)


def restrict(f: ClassFunction, H: Subgroup) -> ClassFunction:
    """Res to H, as a class function on ``H.as_group()``."""
    if H.group is not f.group:
        raise GroupError("H is not a subgroup of the class function's group")
    HG = H.as_group()
    return ClassFunction(HG, [f(H.elements[int(r)]) for r in HG.class_reps])


def tensor(f1: ClassFunction, f2: ClassFunction) -> ClassFunction:
    return f1 * f2


def external_product(f1: ClassFunction, f2: ClassFunction) -> ClassFunction:
    """f1 x f2 on A x B realized as the block group with parts A.parts + B.parts."""
    A, B = f1.group, f2.group
    if A.q != B.q:
        raise GroupError("groups over different fields")
    C = product_group(A.parts + B.parts, A.q)
    na = len(A.parts)
    vals = []
    for r in C.class_reps:
        blocks = block_extract_flat(C.elements[int(r)], C.parts, C.n)
        a = A.index[block_embed_flat(blocks[:na], A.parts, A.n)]
        b = B.index[block_embed_flat(blocks[na:], B.parts, B.n)]
        vals.append(f1(a) * f2(b))
    return ClassFunction(C, vals)


def schur_inner(f1: ClassFunction, f2: ClassFunction) -> Cyclotomic:
    """(1/|G|) sum_g f1(g) conj(f2(g))."""
    if f1.group is not f2.group:
        raise GroupError("class functions on different groups")
    G = f1.group
    acc = Cyclotomic.zero()
    for a, b, s in zip(f1.values, f2.values, G.class_sizes.tolist()):
        if a and b:
            acc = acc + a * b.conj() * s
    return acc / G.order


def transport(f: ClassFunction, perm) -> ClassFunction:
    """Move f along the block reordering ``perm`` of a product group."""
    H, idx = regroup_blocks(f.group, perm)
    inv = np.empty_like(idx)
    inv[idx] = np.arange(len(idx))
    return ClassFunction(H, [f(int(inv[r])) for r in H.class_reps])


# -- parabolic induction and Harish-Chandra restriction --------------------------


@lru_cache(maxsize=256)
def parabolic_induction_map(G: MatrixGroup, splits) -> ClassMap:
    """Ind_P^G Inf_L^P, from class functions on the Levi of ``splits``."""
    pd = block_parabolic(G, splits)
    L = pd.levi_group
    counts = [defaultdict(int) for _ in range(G.num_classes)]
    gcls = G.class_of[pd.P.array].tolist()
    lcls = L.class_of[pd.P_levi_parts].tolist()
    for gc, lc in zip(gcls, lcls):
        counts[gc][lc] += 1
    scales = [Fraction(G.order, pd.P.order * int(s)) for s in G.class_sizes]
    return ClassMap(L, G, _rows_from_counts(counts, scales))


def inflate(f: ClassFunction, pd) -> ClassFunction:
    """Inflation from the Levi to P through P/U; a class function on ``pd.P.as_group()``."""
    if f.group is not pd.levi_group:
        raise GroupError("class function does not live on this Levi")
    PG = pd.P.as_group()
    parts = pd.P_levi_parts
    return ClassFunction(PG, [f(int(parts[int(r)])) for r in PG.class_reps])


@lru_cache(maxsize=256)
def hc_restriction_map(G: MatrixGroup, splits) -> ClassMap:
    pd = block_parabolic(G, splits)
    L = pd.levi_group
    rows = []
    for r in L.class_reps:
        a = int(pd.levi_to_ambient[r])
        cls = G.class_of[G.mul_many(a, pd.U.array)]
        counts = np.bincount(cls, minlength=G.num_classes)
        rows.append(
            [(j, Fraction(int(c), pd.U.order)) for j, c in enumerate(counts.tolist()) if c]
        )
    return ClassMap(G, L, rows)


def hc_restrict(chi: ClassFunction, alpha=None, splits=None) -> ClassFunction:
    """Character of the U-fixed vectors as a Levi character.

    For a single factor G(a), ``alpha`` gives the split (alpha, a - alpha);
    for products pass ``splits`` (one composition per factor).  The value at
    a Levi element l is (1/|U|) sum_u chi(l u).
    """
    G = chi.group
    if splits is None:
        if len(G.parts) != 1:
            raise GroupError("products need explicit splits")
        a = G.parts[0]
        if alpha is None or not 0 <= alpha <= a:
            raise GroupError(f"alpha = {alpha} out of range for G({a})")
        splits = ((alpha, a - alpha),)
    return hc_restriction_map(G, tuple(tuple(s) for s in splits))(chi)
