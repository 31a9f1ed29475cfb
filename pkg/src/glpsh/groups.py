"""Finite matrix groups over F_q given by their full element lists.

A :class:`MatrixGroup` holds its elements as flat row-major tuples sorted by
matrix key, so element index order is the lexicographic order on entries.
Subgroups are sorted tuples of element indices of their ambient group.
Products G(a_1) x ... x G(a_r) are realized block-diagonally inside
GL(a_1 + ... + a_r); zero parts stand for the trivial group G(0).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce

import numpy as np

from . import kernels
from .field import (
    FieldError,
    DEFAULT_ORDER_CAP,
    FiniteField,
    block_embed_flat,
    field_for_order,
    gl_enumerate,
    gl_order,
    identity_flat,
    inverse_flat,
    matmul_flat,
    matrix_key,
)

TABLE_LIMIT = 5000
DEFAULT_SUBGROUP_CAP = 400


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    pass


class MatrixGroup:
    """A finite group of invertible n x n matrices, enumerated."""

    def __init__(self, field: FiniteField, parts, elements, label: str):
        self.field = field
        self.q = field.q
        self.parts = tuple(parts)
        self.n = sum(self.parts)
        self.label = label
        n2 = self.n * self.n
        keys = [matrix_key(e, self.q) for e in elements]
        order = sorted(range(len(elements)), key=keys.__getitem__)
        self.elements = [tuple(elements[i]) for i in order]
        self.keys = np.array([keys[i] for i in order], dtype=np.int64)
        if len(set(self.keys.tolist())) != len(self.keys):
            raise GroupError("duplicate elements")
        self.mats = np.array(self.elements, dtype=np.int64).reshape(len(self.elements), n2)
        self.index = {e: i for i, e in enumerate(self.elements)}
        try:
            self.identity = self.index[identity_flat(self.n)]
        except KeyError:
            raise GroupError("element list does not contain the identity") from None

    def __repr__(self):
        return f"<MatrixGroup {self.label} order={self.order}>"

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    # -- multiplication ------------------------------------------------------

    @cached_property
    def table(self):
        if self.order > TABLE_LIMIT:
            return None
        return kernels.mul_table(
            self.mats, self.keys, self.q, self.field.add, self.field.mul, self.n
        )

    def lookup_keys(self, keys) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        if not np.array_equal(self.keys[idx], keys):
            raise GroupError(f"matrix not in {self.label}")
        return idx

    def keys_of_mats(self, mats) -> np.ndarray:
        n2 = self.n * self.n
        mats = np.asarray(mats, dtype=np.int64)
        if n2 == 0:
            return np.zeros(mats.shape[0], dtype=np.int64)
        weights = self.q ** np.arange(n2 - 1, -1, -1, dtype=np.int64)
        return mats.reshape(-1, n2) @ weights

    def _matmul_many(self, A, B):
        n = self.n
        F = self.field
        A = A.reshape(-1, n, n)
        B = B.reshape(-1, n, n)
        if F.prime:
            return np.einsum("kij,kjl->kil", A, B) % F.p
        acc = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        for t in range(n):
            acc = F.add[acc, F.mul[A[:, :, t, None], B[:, None, t, :]]]
        return acc

    def mul_many(self, a, b) -> np.ndarray:
        """Elementwise products of index arrays (broadcasting)."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self.table is not None:
            return self.table[a, b].astype(np.int64)
        shape = a.shape
        if self.n == 0:
            return np.zeros(shape, dtype=np.int64)
        prod = self._matmul_many(self.mats[a.ravel()], self.mats[b.ravel()])
        return self.lookup_keys(self.keys_of_mats(prod)).reshape(shape)

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        e = matmul_flat(self.field, self.elements[a], self.elements[b], self.n)
        return self.index[e]

    def prod(self, *xs) -> int:
        return reduce(self.mul, xs, self.identity)

    @cached_property
    def inv(self) -> np.ndarray:
        if self.table is not None:
            return np.argmax(self.table == self.identity, axis=1).astype(np.int64)
        return np.array(
            [self.index[inverse_flat(self.field, e, self.n)] for e in self.elements],
            dtype=np.int64,
        )

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), int(self.inv[g]))

    def conj_perm(self, g: int) -> np.ndarray:
        allx = np.arange(self.order)
        return self.mul_many(self.mul_many(g, allx), self.inv[g])

    @cached_property
    def conj_table(self) -> np.ndarray:
        """conj_table[g, x] = g x g^-1 (only for tabulated groups)."""
        if self.table is None:
            raise GroupError("conjugation table needs a multiplication table")
        return self.table[self.table, self.inv[:, None]].astype(np.int64)

    def element_order(self, x: int) -> int:
        y, k = x, 1
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    @cached_property
    def element_orders(self) -> np.ndarray:
        return np.array([self.element_order(x) for x in range(self.order)], dtype=np.int64)

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, self.element_orders.tolist(), 1)

    # -- structure -----------------------------------------------------------

    def generate(self, gens) -> np.ndarray:
        gens = np.asarray(list(gens), dtype=np.int64)
        if self.table is not None:
            return kernels.closure(self.table, gens, self.identity)
        seen = np.zeros(self.order, dtype=bool)
        seen[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        while frontier.size and gens.size:
            nxt = np.unique(self.mul_many(frontier[:, None], gens[None, :]).ravel())
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen).astype(np.int64)

    @cached_property
    def generators(self) -> tuple:
        """A small generating set, greedy by element order then index."""
        order = sorted(range(self.order), key=lambda x: (-int(self.element_orders[x]), x))
        gens, span = [], np.zeros(self.order, dtype=bool)
        span[self.identity] = True
        for x in order:
            if span.all():
                break
            if not span[x]:
                gens.append(x)
                span[:] = False
                span[self.generate(gens)] = True
        return tuple(gens)

    @cached_property
    def class_of(self) -> np.ndarray:
        if not self.generators:
            return np.zeros(self.order, dtype=np.int64)
        perms = np.stack([self.conj_perm(s) for s in self.generators])
        labels = kernels.orbit_labels(perms)
        reps = np.unique(labels)
        return np.searchsorted(reps, labels).astype(np.int64)

    @cached_property
    def class_reps(self) -> np.ndarray:
        c = self.class_of
        reps = np.full(int(c.max()) + 1, -1, dtype=np.int64)
        for x in range(self.order - 1, -1, -1):
            reps[c[x]] = x
        return reps

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.class_of).astype(np.int64)

    @property
    def num_classes(self) -> int:
        return len(self.class_reps)

    def conjugacy_classes(self):
        c = self.class_of
        return [
            ConjClass(int(r), tuple(np.flatnonzero(c == i).tolist()))
            for i, r in enumerate(self.class_reps)
        ]

    # -- subgroups -----------------------------------------------------------

    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, elements)

    def subgroup_generated(self, gens) -> "Subgroup":
        return Subgroup(self, self.generate(gens))

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, [self.identity])

    @cached_property
    def center(self) -> "Subgroup":
        return centralizer(self.whole, self.whole)


@dataclass(frozen=True)
class ConjClass:
    representative: int
    members: tuple


class Subgroup:
    """A subgroup of a :class:`MatrixGroup` as a sorted tuple of indices."""

    __slots__ = ("group", "elements", "_set", "_arr", "_local", "_hash", "__weakref__")

    def __init__(self, group: MatrixGroup, elements):
        self.group = group
        self.elements = tuple(sorted(int(x) for x in elements))
        self._set = None
        self._arr = None
        self._local = None
        self._hash = None

    def __repr__(self):
        return f"<Subgroup of {self.group.label} order={self.order}>"

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def set(self) -> frozenset:
        if self._set is None:
            self._set = frozenset(self.elements)
        return self._set

    @property
    def array(self) -> np.ndarray:
        if self._arr is None:
            self._arr = np.array(self.elements, dtype=np.int64)
        return self._arr

    def __contains__(self, x) -> bool:
        return int(x) in self.set

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and other.elements == self.elements
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.group), self.elements))
        return self._hash

    def __le__(self, other: "Subgroup") -> bool:
        return self.set <= other.set

    def is_closed(self) -> bool:
        a = self.array
        prods = self.group.mul_many(a[:, None], a[None, :])
        return set(np.unique(prods).tolist()) <= self.set

    def as_group(self) -> MatrixGroup:
        """This subgroup as a standalone group; local index i is element i.

        Equal subgroups share one local group, and the whole group is its own.
        """
        if self._local is None:
            self._local = _local_group(self.group, tuple(self.elements))
        return self._local

    def local_index(self, x: int) -> int:
        return self.elements.index(int(x))

    def generators(self) -> list:
        return [self.elements[i] for i in self.as_group().generators]


@lru_cache(maxsize=8192)
def _local_group(G: MatrixGroup, elems: tuple) -> MatrixGroup:
    if len(elems) == G.order:
        return G
    return MatrixGroup(G.field, G.parts, [G.elements[x] for x in elems], f"{G.label}[{len(elems)}]")


# -- group constructors -------------------------------------------------------


def product_group(parts, q: int, cap: int = DEFAULT_ORDER_CAP) -> MatrixGroup:
    """G(a_1) x ... x G(a_r) block-diagonally in GL(sum a_i, q)."""
    parts = tuple(int(a) for a in parts)
    order = math.prod(gl_order(a, q) for a in parts)
    if order > cap:
        raise CapExceeded(f"order {order} exceeds order cap {cap}")
    return _product_group(parts, q)


@lru_cache(maxsize=None)
def _product_group(parts, q):
    F = field_for_order(q)
    n = sum(parts)
    factors = [gl_enumerate(a, F, cap=10**9) for a in parts]
    elements = [block_embed_flat(blocks, parts, n) for blocks in itertools.product(*factors)]
    label = "x".join(f"GL({a},{q})" for a in parts) or f"GL(0,{q})"
    return MatrixGroup(F, parts, elements, label)


def gl(n: int, q: int, cap: int = DEFAULT_ORDER_CAP) -> MatrixGroup:
    return product_group((n,), q, cap)


def parse_group_spec(spec: str, cap: int = DEFAULT_ORDER_CAP) -> MatrixGroup:
    """Parse ``gl:<n>:<q>`` or a comma-joined product of such factors."""
    parts, qs = [], set()
    for tok in spec.split(","):
        bits = tok.strip().split(":")
        if len(bits) != 3 or bits[0].lower() != "gl":
            raise GroupError(f"malformed group specifier {tok!r}")
        try:
            n, q = int(bits[1]), int(bits[2])
        except ValueError:
            raise GroupError(f"malformed group specifier {tok!r}") from None
        if n < 0 or q < 2:
            raise GroupError(f"malformed group specifier {tok!r}")
        parts.append(n)
        qs.add(q)
    if len(qs) != 1:
        raise GroupError("all factors must share one field")
    q = qs.pop()
    try:
        field_for_order(q)
    except FieldError as exc:
        raise GroupError(f"malformed group specifier {spec!r}: {exc}") from None
    return product_group(tuple(parts), q, cap)


# -- subgroup-level operations ------------------------------------------------


def conjugate(H: Subgroup, g: int) -> Subgroup:
    """g H g^-1."""
    G = H.group
    return Subgroup(G, G.mul_many(G.mul_many(g, H.array), G.inv[g]))


def normalizer(H: Subgroup) -> Subgroup:
    G = H.group
    out = []
    for g in range(G.order):
        img = G.mul_many(G.mul_many(g, H.array), G.inv[g])
        if H.set.issuperset(img.tolist()):
            out.append(g)
    return Subgroup(G, out)


def centralizer(S: Subgroup, within: Subgroup | None = None) -> Subgroup:
    G = S.group
    cand = within.array if within is not None else np.arange(G.order)
    s = S.array
    left = G.mul_many(cand[:, None], s[None, :])
    right = G.mul_many(s[None, :], cand[:, None])
    return Subgroup(G, cand[(left == right).all(axis=1)])


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.group, A.set & B.set)


@dataclass(frozen=True)
class DoubleCosetDecomp:
    left: Subgroup
    right: Subgroup
    reps: tuple
    sizes: tuple
    labels: np.ndarray

    def __len__(self):
        return len(self.reps)


def double_cosets(K: Subgroup, H: Subgroup) -> DoubleCosetDecomp:
    """K\\G/H with the least element index of each double coset as its representative."""
    if K.group is not H.group:
        raise GroupError("subgroups live in different groups")
    G = K.group
    if G.table is not None:
        labels, reps = kernels.double_cosets(G.table, K.array, H.array)
    else:
        labels = np.full(G.order, -1, dtype=np.int64)
        reps = []
        for g in range(G.order):
            if labels[g] >= 0:
                continue
            kg = G.mul_many(K.array, g)
            labels[np.unique(G.mul_many(kg[:, None], H.array[None, :]))] = len(reps)
            reps.append(g)
        reps = np.array(reps, dtype=np.int64)
    sizes = np.bincount(labels, minlength=len(reps))
    return DoubleCosetDecomp(K, H, tuple(int(r) for r in reps), tuple(int(s) for s in sizes), labels)


def left_cosets(H: Subgroup):
    """G/H: (representatives, label of each element); representative = least index."""
    G = H.group
    dc = double_cosets(G.trivial, H)
    return dc.reps, dc.labels


def derived_subgroup(H: Subgroup) -> Subgroup:
    G = H.group
    a = H.array
    xy = G.mul_many(a[:, None], a[None, :])
    yx = G.mul_many(a[None, :], a[:, None])
    comm = np.unique(G.mul_many(xy, G.inv[yx]).ravel())
    return Subgroup(G, G.generate(comm))


def is_abelian(H: Subgroup) -> bool:
    a = H.array
    G = H.group
    return bool((G.mul_many(a[:, None], a[None, :]) == G.mul_many(a[None, :], a[:, None])).all())


@dataclass(frozen=True)
class Abelianization:
    """H/[H,H] ~ Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... and a projection."""

    subgroup: Subgroup
    derived: Subgroup
    orders: tuple
    basis: tuple  # elements of H projecting onto the cyclic generators
    projection: dict  # element of H -> exponent vector

    @property
    def order(self) -> int:
        return math.prod(self.orders)


def abelianization(H: Subgroup) -> Abelianization:
    G = H.group
    D = derived_subgroup(H)
    # coset label of each element of H modulo D
    label = {}
    reps = []
    for x in H.elements:
        if x in label:
            continue
        for y in G.mul_many(x, D.array).tolist():
            label[y] = len(reps)
        reps.append(x)
    m = len(reps)

    def qmul(i, j):
        return label[G.mul(reps[i], reps[j])]

    ident = label[G.identity]

    def span(gens):
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = qmul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    qorder = {}
    for i in range(m):
        k, y = 1, i
        while y != ident:
            y = qmul(y, i)
            k += 1
        qorder[i] = k

    def search(chosen, current):
        if len(current) == m:
            return chosen
        free = [i for i in range(m) if not (span([i]) & current) - {ident}]
        if not free:
            return None
        best = max(qorder[i] for i in free)
        for i in free:
            if qorder[i] != best:
                continue
            new = span(chosen + [i])
            if len(new) != len(current) * best:
                continue
            out = search(chosen + [i], new)
            if out is not None:
                return out
        return None

    chosen = search([], {ident}) if m > 1 else []
    if chosen is None:
        raise GroupError("failed to decompose abelian quotient")
    chosen = list(reversed(chosen))  # ascending orders
    orders = [qorder[i] for i in chosen]
    assert all(b % a == 0 for a, b in zip(orders, orders[1:])), orders
    # exponent vector of each coset
    vec = {}
    for exps in itertools.product(*(range(d) for d in orders)):
        x = ident
        for g, e in zip(chosen, exps):
            for _ in range(e):
                x = qmul(x, g)
        vec[x] = exps
    projection = {x: vec[label[x]] for x in H.elements}
    return Abelianization(H, D, tuple(orders), tuple(reps[i] for i in chosen), projection)


class LinearCharacter:
    """A homomorphism H -> mu_N; ``exps[i]`` is the exponent at H.elements[i].

    The level N is always the order of the character, so equal characters have
    equal (N, exps).
    """

    __slots__ = ("subgroup", "N", "exps", "_map")

    def __init__(self, subgroup: Subgroup, N: int, exps):
        exps = [int(e) % N for e in exps]
        g = reduce(math.gcd, exps, N)
        self.subgroup = subgroup
        self.N = N // g
        self.exps = tuple(e // g for e in exps)
        self._map = None

    @classmethod
    def trivial(cls, H: Subgroup) -> "LinearCharacter":
        return cls(H, 1, [0] * H.order)

    @classmethod
    def from_function(cls, H: Subgroup, N: int, f) -> "LinearCharacter":
        return cls(H, N, [f(x) for x in H.elements])

    def __repr__(self):
        return f"<LinearCharacter N={self.N} on order {self.subgroup.order}>"

    @property
    def map(self) -> dict:
        if self._map is None:
            self._map = dict(zip(self.subgroup.elements, self.exps))
        return self._map

    def exp(self, x: int) -> int:
        """Exponent e with value zeta_N^e at the ambient element x."""
        return self.map[int(x)]

    def exp_at(self, x: int, level: int) -> int:
        return self.map[int(x)] * (level // self.N)

    def angle(self, x: int):
        from fractions import Fraction

        return Fraction(self.map[int(x)], self.N)

    @property
    def is_trivial(self) -> bool:
        return self.N == 1

    @property
    def key(self) -> tuple:
        return (self.N, self.exps)

    def __eq__(self, other):
        return (
            isinstance(other, LinearCharacter)
            and self.subgroup == other.subgroup
            and self.key == other.key
        )

    def __hash__(self):
        return hash((self.subgroup, self.key))

    def __mul__(self, other: "LinearCharacter") -> "LinearCharacter":
        if self.subgroup != other.subgroup:
            raise GroupError("characters on different subgroups")
        L = math.lcm(self.N, other.N)
        return LinearCharacter(
            self.subgroup,
            L,
            [a * (L // self.N) + b * (L // other.N) for a, b in zip(self.exps, other.exps)],
        )

    def inverse(self) -> "LinearCharacter":
        return LinearCharacter(self.subgroup, self.N, [-e for e in self.exps])

    def restrict(self, K: Subgroup) -> "LinearCharacter":
        return LinearCharacter(K, self.N, [self.map[x] for x in K.elements])

    def twist(self, g: int) -> "LinearCharacter":
        """The character x -> phi(g^-1 x g) on g H g^-1."""
        H = self.subgroup
        G = H.group
        gi = int(G.inv[g])
        img = conjugate(H, g)
        pre = G.mul_many(G.mul_many(gi, img.array), g)
        return LinearCharacter(img, self.N, [self.map[int(y)] for y in pre])

    def is_homomorphism(self) -> bool:
        G = self.subgroup.group
        for x in self.subgroup.elements:
            for y in self.subgroup.elements:
                if (self.map[x] + self.map[y] - self.map[G.mul(x, y)]) % self.N:
                    return False
        return True


def linear_characters(H: Subgroup, ab: Abelianization | None = None) -> list:
    """All |H/[H,H]| linear characters, ordered by their exponent vectors."""
    ab = ab or abelianization(H)
    N = ab.orders[-1] if ab.orders else 1
    out = []
    for c in itertools.product(*(range(d) for d in ab.orders)):
        exps = [
            sum(ci * ei * (N // d) for ci, ei, d in zip(c, ab.projection[x], ab.orders))
            for x in H.elements
        ]
        out.append(LinearCharacter(H, N, exps))
    return out


def character_from_generators(G: MatrixGroup, gens, N: int, exps) -> LinearCharacter:
    """The linear character of <gens> sending gens[i] to zeta_N^exps[i].

    Raises GroupError when the assignment does not extend to a homomorphism.
    """
    gens = [int(g) for g in gens]
    if len(gens) != len(exps):
        raise GroupError("one exponent per generator is required")
    if N <= 0:
        raise GroupError("character level must be positive")
    val = {G.identity: 0}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, e in zip(gens, exps):
                y = G.mul(x, s)
                v = (val[x] + int(e)) % N
                if y in val:
                    if val[y] != v:
                        raise GroupError("generator values do not define a character")
                else:
                    val[y] = v
                    nxt.append(y)
        frontier = nxt
    H = Subgroup(G, sorted(val))
    return LinearCharacter(H, N, [val[x] for x in H.elements])


def is_subconjugate(K: Subgroup, psi: LinearCharacter, g: int, H: Subgroup, phi: LinearCharacter):
    """(K, psi) <= (g H g^-1, phi(g^-1 . g)).  Returns (ok, witness-or-None).

    The witness is ("containment", k) when k in K lies outside g H g^-1, or
    ("character", k) when psi(k) != phi(g^-1 k g).
    """
    G = H.group
    if K.group is not G:
        raise GroupError("subgroups live in different groups")
    gi = int(G.inv[g])
    pre = G.mul_many(G.mul_many(gi, K.array), g)
    for k, y in zip(K.elements, pre.tolist()):
        if y not in H.set:
            return False, ("containment", k)
    L = math.lcm(psi.N, phi.N)
    for k, y in zip(K.elements, pre.tolist()):
        if psi.exp_at(k, L) != phi.exp_at(y, L):
            return False, ("character", k)
    return True, None


# -- subgroup lattice ---------------------------------------------------------


@dataclass
class SubgroupLattice:
    group: MatrixGroup
    subgroups: list  # ordered by (order, elements)
    classes: list  # lists of positions into ``subgroups``
    canonical: list  # canonical representative position per class

    def class_of(self, H: Subgroup) -> int:
        for i, members in enumerate(self.classes):
            if any(self.subgroups[j] == H for j in members):
                return i
        raise GroupError("subgroup not in the lattice")


def _canonical_conjugate(G: MatrixGroup, elems: np.ndarray) -> tuple:
    if G.table is not None and G.order <= 2000:
        imgs = np.sort(G.conj_table[:, elems], axis=1)
        best = np.lexsort(imgs.T[::-1])[0]
        return tuple(imgs[best].tolist())
    best = None
    for g in range(G.order):
        img = tuple(sorted(G.mul_many(G.mul_many(g, elems), G.inv[g]).tolist()))
        if best is None or img < best:
            best = img
    return best


def canonical_subgroup(H: Subgroup) -> Subgroup:
    """Least sorted element tuple over the conjugation orbit of H."""
    return Subgroup(H.group, _canonical_conjugate(H.group, H.array))


def cyclic_subgroups(G: MatrixGroup) -> dict:
    """Map sorted element tuple -> least generating element."""
    out = {}
    for g in range(G.order):
        elems = tuple(G.generate([g]).tolist())
        out.setdefault(elems, g)
    return out


@lru_cache(maxsize=32)
def _subgroups_cached(G: MatrixGroup, cap: int) -> SubgroupLattice:
    if G.order > cap:
        raise CapExceeded(f"|{G.label}| = {G.order} exceeds subgroup-enumeration cap {cap}")
    cyc = cyclic_subgroups(G)
    gens_of = {elems: [g] for elems, g in cyc.items()}
    extenders = sorted(cyc.values())
    frontier = list(gens_of)
    while frontier:
        new = []
        for elems in frontier:
            members = set(elems)
            for c in extenders:
                if c in members:
                    continue
                gens = gens_of[elems] + [c]
                T = tuple(G.generate(gens).tolist())
                if T not in gens_of:
                    gens_of[T] = gens
                    new.append(T)
        frontier = new
    gens_of.setdefault((G.identity,), [])
    gens_of.setdefault(tuple(range(G.order)), list(G.generators))
    ordered = sorted(gens_of, key=lambda e: (len(e), e))
    subs = [Subgroup(G, e) for e in ordered]
    canon = {}
    for i, H in enumerate(subs):
        canon.setdefault(_canonical_conjugate(G, H.array), []).append(i)
    classes = sorted(canon.values(), key=lambda members: (len(subs[members[0]]), min(members)))
    reps = [min(members, key=lambda j: subs[j].elements) for members in classes]
    return SubgroupLattice(G, subs, classes, reps)


def subgroups(G: MatrixGroup, cap: int = DEFAULT_SUBGROUP_CAP) -> SubgroupLattice:
    return _subgroups_cached(G, cap)


# -- parabolic subgroups -----------------------------------------------------


@dataclass
class ParabolicData:
    """P = U x| Levi for a block refinement of a product group.

    ``splits[i]`` is a composition of the i-th factor's degree; the fine block
    structure is their concatenation.  ``levi_group`` is the block-diagonal
    product group on the fine blocks, with ``levi_to_ambient`` sending its
    indices to ambient indices.
    """

    ambient: MatrixGroup
    splits: tuple
    fine: tuple
    P: Subgroup
    U: Subgroup
    levi: Subgroup
    levi_group: MatrixGroup
    levi_to_ambient: np.ndarray
    ambient_to_levi: dict

    def levi_part(self, p: int) -> int:
        """Levi-group index of the block-diagonal part of p in P."""
        return int(self._levi_part_many(np.array([p]))[0])

    def _levi_part_many(self, ps) -> np.ndarray:
        G = self.ambient
        n = G.n
        mats = G.mats[np.asarray(ps)].reshape(-1, n, n).copy()
        mats *= _block_diag_mask(self.fine)[None]
        return self.levi_group.lookup_keys(G.keys_of_mats(mats))

    @cached_property
    def P_levi_parts(self) -> np.ndarray:
        return self._levi_part_many(self.P.array)


@lru_cache(maxsize=None)
def _block_diag_mask(fine):
    n = sum(fine)
    m = np.zeros((n, n), dtype=np.int64)
    off = 0
    for a in fine:
        m[off : off + a, off : off + a] = 1
        off += a
    return m


def _lower_mask(fine):
    n = sum(fine)
    m = np.zeros((n, n), dtype=bool)
    off = 0
    for a in fine:
        m[off + a :, off : off + a] = True
        off += a
    return m


@lru_cache(maxsize=None)
def block_parabolic(G: MatrixGroup, splits) -> ParabolicData:
    splits = tuple(tuple(int(x) for x in s) for s in splits)
    if len(splits) != len(G.parts) or any(sum(s) != a for s, a in zip(splits, G.parts)):
        raise GroupError(f"splits {splits} do not refine {G.parts}")
    if any(x < 0 for s in splits for x in s):
        raise GroupError("negative block")
    fine = tuple(x for s in splits for x in s)
    n = G.n
    mats = G.mats.reshape(-1, n, n)
    lower = _lower_mask(fine)
    diag = _block_diag_mask(fine).astype(bool)
    eye = np.eye(n, dtype=np.int64)
    in_P = ~(mats[:, lower].any(axis=1)) if lower.any() else np.ones(G.order, dtype=bool)
    is_blockdiag = ~(mats[:, ~diag].any(axis=1)) if (~diag).any() else np.ones(G.order, dtype=bool)
    unip_diag = (mats[:, diag] == eye[diag]).all(axis=1)
    P = Subgroup(G, np.flatnonzero(in_P))
    U = Subgroup(G, np.flatnonzero(in_P & unip_diag))
    levi = Subgroup(G, np.flatnonzero(is_blockdiag))
    LG = product_group(fine, G.q)
    l2a = G.lookup_keys(LG.keys)
    return ParabolicData(
        G, splits, fine, P, U, levi, LG, l2a, {int(a): i for i, a in enumerate(l2a.tolist())}
    )


def parabolic(n: int, q: int, alpha: int) -> ParabolicData:
    if not 1 <= alpha <= n - 1:
        raise GroupError(f"alpha = {alpha} out of range 1..{n - 1}")
    return block_parabolic(gl(n, q), ((alpha, n - alpha),))


def regroup_blocks(G: MatrixGroup, perm) -> tuple:
    """Reorder the diagonal blocks of a product group.

    Returns ``(H, index_map)`` where H is the product group on
    ``[G.parts[i] for i in perm]`` and ``index_map[x]`` is the image of x.
    """
    from .field import block_extract_flat

    perm = tuple(perm)
    parts = tuple(G.parts[i] for i in perm)
    H = product_group(parts, G.q)
    out = np.empty(G.order, dtype=np.int64)
    for x, e in enumerate(G.elements):
        blocks = block_extract_flat(e, G.parts, G.n)
        out[x] = H.index[block_embed_flat([blocks[i] for i in perm], parts, H.n)]
    return H, out


def embed_product(G: MatrixGroup, A: MatrixGroup, B: MatrixGroup) -> np.ndarray:
    """Index table of G = A x B: out[a, b] = index of diag(a, b)."""
    if G.parts != A.parts + B.parts:
        raise GroupError("shape mismatch in product embedding")
    out = np.empty((A.order, B.order), dtype=np.int64)
    from .field import block_extract_flat

    na = len(A.parts)
    for x, e in enumerate(G.elements):
        blocks = block_extract_flat(e, G.parts, G.n)
        a = A.index[block_embed_flat(blocks[:na], A.parts, A.n)]
        b = B.index[block_embed_flat(blocks[na:], B.parts, B.n)]
        out[a, b] = x
    return out
