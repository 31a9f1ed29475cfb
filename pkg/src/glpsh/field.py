"""Finite fields F_q and dense matrices over them.

Field elements are plain integers ``0 .. q-1``.  For ``q = p`` the index is the
residue itself; for ``q = p**k`` with ``k > 1`` the index ``sum c_i p**i``
encodes the polynomial ``sum c_i x**i`` modulo a fixed irreducible polynomial
(the Conway polynomial for that ``q``), so element numbering is reproducible.

Matrices are stored row-major as flat tuples of field indices.  Their integer
*key* ``sum e_i q**(n*n-1-i)`` orders matrices lexicographically by entries,
which is the canonical element order used everywhere else in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

DEFAULT_FIELD_CAP = 16

# Conway polynomials, coefficients listed from x**0 upward (monic, leading 1 omitted).
IRREDUCIBLE = {
    4: (1, 1),  # x^2 + x + 1
    8: (1, 1, 0),  # x^3 + x + 1
    9: (2, 2),  # x^2 + 2x + 2
    16: (1, 1, 0, 0),  # x^4 + x + 1
}


class FieldError(ValueError):
    pass


class MatrixError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True, eq=False)
class FiniteField:
    """Addition and multiplication tables for F_q with q = p**k."""

    p: int
    k: int
    q: int
    add: np.ndarray = dc_field(repr=False)
    mul: np.ndarray = dc_field(repr=False)
    neg: tuple = dc_field(repr=False)
    inv: tuple = dc_field(repr=False)
    generator: int = 0

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.q == other.q

    def __hash__(self):
        return hash(("F", self.q))

    @property
    def prime(self) -> bool:
        return self.k == 1

    def element_order(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        x, n = a, 1
        while x != 1:
            x = int(self.mul[x, a])
            n += 1
        return n


def _poly_tables(p: int, k: int):
    q = p**k
    modulus = IRREDUCIBLE[q]
    digits = [[(a // p**i) % p for i in range(k)] for a in range(q)]

    def encode(c):
        return sum(ci * p**i for i, ci in enumerate(c))

    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = encode([(x + y) % p for x, y in zip(digits[a], digits[b])])
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(digits[a]):
                for j, y in enumerate(digits[b]):
                    prod[i + j] = (prod[i + j] + x * y) % p
            # reduce using x^k = -sum modulus_i x^i
            for d in range(2 * k - 2, k - 1, -1):
                c = prod[d]
                if c:
                    prod[d] = 0
                    for i, m in enumerate(modulus):
                        prod[d - k + i] = (prod[d - k + i] - c * m) % p
            mul[a, b] = encode(prod[:k])
    return add, mul


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1, cap: int = DEFAULT_FIELD_CAP) -> FiniteField:
    """Build F_{p**k}; extension fields only for q in {4, 8, 9, 16}."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    q = p**k
    if q > cap:
        raise FieldError(f"q = {q} exceeds field cap {cap}")
    if k == 1:
        r = np.arange(p, dtype=np.int64)
        add = (r[:, None] + r[None, :]) % p
        mul = (r[:, None] * r[None, :]) % p
    else:
        if q not in IRREDUCIBLE:
            raise FieldError(f"no fixed irreducible polynomial for q = {q}")
        add, mul = _poly_tables(p, k)
    neg = tuple(int(np.flatnonzero(add[a] == 0)[0]) for a in range(q))
    inv = (0,) + tuple(int(np.flatnonzero(mul[a] == 1)[0]) for a in range(1, q))
    add.setflags(write=False)
    mul.setflags(write=False)
    F = FiniteField(p, k, q, add, mul, neg, inv)
    gen = next(a for a in range(1, q) if F.element_order(a) == q - 1)
    object.__setattr__(F, "generator", gen)
    return F


def field_for_order(q: int, cap: int = DEFAULT_FIELD_CAP) -> FiniteField:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return field_make(p, k, cap)
    raise FieldError(f"{q} is not a prime power")


# -- flat matrix helpers ------------------------------------------------------


def identity_flat(n: int) -> tuple:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def matmul_flat(F: FiniteField, a: tuple, b: tuple, n: int) -> tuple:
    out = []
    if F.prime:
        p = F.p
        for i in range(n):
            row = a[i * n : (i + 1) * n]
            for j in range(n):
                out.append(sum(row[t] * b[t * n + j] for t in range(n)) % p)
        return tuple(out)
    add, mul = F.add, F.mul
    for i in range(n):
        for j in range(n):
            s = 0
            for t in range(n):
                s = add[s, mul[a[i * n + t], b[t * n + j]]]
            out.append(int(s))
    return tuple(out)


def rank_flat(F: FiniteField, a: tuple, n: int) -> int:
    rows = [list(a[i * n : (i + 1) * n]) for i in range(n)]
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pinv = F.inv[rows[rank][col]]
        rows[rank] = [int(F.mul[pinv, x]) for x in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][col]:
                c = F.neg[rows[r][col]]
                rows[r] = [int(F.add[x, F.mul[c, y]]) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def inverse_flat(F: FiniteField, a: tuple, n: int) -> tuple:
    aug = [list(a[i * n : (i + 1) * n]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise MatrixError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pinv = F.inv[aug[col][col]]
        aug[col] = [int(F.mul[pinv, x]) for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = F.neg[aug[r][col]]
                aug[r] = [int(F.add[x, F.mul[c, y]]) for x, y in zip(aug[r], aug[col])]
    return tuple(x for row in aug for x in row[n:])


def det_flat(F: FiniteField, a: tuple, n: int) -> int:
    rows = [list(a[i * n : (i + 1) * n]) for i in range(n)]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = F.neg[det]
        det = int(F.mul[det, rows[col][col]])
        pinv = F.inv[rows[col][col]]
        for r in range(col + 1, n):
            if rows[r][col]:
                c = int(F.mul[F.neg[rows[r][col]], pinv])
                rows[r] = [int(F.add[x, F.mul[c, y]]) for x, y in zip(rows[r], rows[col])]
    return det


def matrix_key(entries, q: int) -> int:
    key = 0
    for e in entries:
        key = key * q + int(e)
    return key


def key_to_entries(key: int, q: int, n: int) -> tuple:
    out = []
    for _ in range(n * n):
        key, r = divmod(key, q)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class Mat:
    """An n x n matrix over a finite field, entries as field indices."""

    n: int
    entries: tuple
    field: FiniteField

    def __post_init__(self):
        if len(self.entries) != self.n * self.n:
            raise MatrixError("entry count does not match dimension")
        if any(not 0 <= int(e) < self.field.q for e in self.entries):
            raise MatrixError("entry index out of range for the field")
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows, field: FiniteField) -> "Mat":
        return cls(len(rows), tuple(x for r in rows for x in r), field)

    @classmethod
    def identity(cls, n: int, field: FiniteField) -> "Mat":
        return cls(n, identity_flat(n), field)

    def rows(self):
        n = self.n
        return [list(self.entries[i * n : (i + 1) * n]) for i in range(n)]

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def det(self) -> int:
        return det_flat(self.field, self.entries, self.n)


def mat_mul(A: Mat, B: Mat) -> Mat:
    if A.n != B.n or A.field != B.field:
        raise MatrixError("dimension or field mismatch")
    return Mat(A.n, matmul_flat(A.field, A.entries, B.entries, A.n), A.field)


def mat_inv(A: Mat) -> Mat:
    return Mat(A.n, inverse_flat(A.field, A.entries, A.n), A.field)


# -- general linear groups ----------------------------------------------------

DEFAULT_ORDER_CAP = 25_000


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def gl_enumerate(n: int, F: FiniteField, cap: int = DEFAULT_ORDER_CAP) -> list:
    """All of GL_n(F_q) as flat tuples in row-major lexicographic order."""
    order = gl_order(n, F.q)
    if order > cap:
        raise FieldError(f"|GL({n},{F.q})| = {order} exceeds order cap {cap}")
    if n == 0:
        return [()]
    out = [
        entries
        for entries in itertools.product(range(F.q), repeat=n * n)
        if rank_flat(F, entries, n) == n
    ]
    assert len(out) == order
    return out


@dataclass(frozen=True)
class BlockShape:
    """A composition (a_1, ..., a_r); zero parts mark trivial G(0) factors."""

    parts: tuple

    def __post_init__(self):
        if any(int(a) < 0 for a in self.parts):
            raise ValueError("block sizes must be non-negative")
        object.__setattr__(self, "parts", tuple(int(a) for a in self.parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def offsets(self):
        out, s = [], 0
        for a in self.parts:
            out.append(s)
            s += a
        return out


def block_embed_flat(blocks, parts, n: int) -> tuple:
    """Assemble a block-diagonal n x n matrix from per-block flat matrices."""
    if len(blocks) != len(parts):
        raise MatrixError("block count does not match shape")
    m = [0] * (n * n)
    off = 0
    for blk, a in zip(blocks, parts):
        if len(blk) != a * a:
            raise MatrixError(f"block of size {len(blk)} does not fit part {a}")
        for i in range(a):
            for j in range(a):
                m[(off + i) * n + off + j] = blk[i * a + j]
        off += a
    return tuple(m)


def block_extract_flat(entries, parts, n: int) -> list:
    """Inverse of :func:`block_embed_flat` on the diagonal blocks."""
    out, off = [], 0
    for a in parts:
        out.append(tuple(entries[(off + i) * n + off + j] for i in range(a) for j in range(a)))
        off += a
    return out


def block_embed(mats, field: FiniteField | None = None) -> Mat:
    """Block-diagonal join of matrices g_1 in G(a_1), ..., g_r in G(a_r)."""
    mats = list(mats)
    if not mats and field is None:
        raise MatrixError("need a field for an empty block list")
    F = field or mats[0].field
    if any(m.field != F for m in mats):
        raise MatrixError("field mismatch between blocks")
    parts = [m.n for m in mats]
    n = sum(parts)
    return Mat(n, block_embed_flat([m.entries for m in mats], parts, n), F)
