"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A value at level N is stored as integer numerators over a common positive
denominator, in the power basis 1, z, ..., z^(phi(N)-1) of Q(z) with z a
primitive N-th root of unity.  Reduction is modulo the cyclotomic polynomial,
which is obtained by exact division of x^N - 1 by the Phi_d for d | N, d < N.
Mixed-level operations coerce both sides to the lcm of their levels.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def _poly_divmod(num, den):
    """Exact division of integer polynomials (coefficients low -> high), den monic."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    rem = num[: len(den) - 1]
    return out, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple:
    """Coefficients of Phi_N, lowest degree first."""
    poly = [-1] + [0] * (N - 1) + [1]
    for d in range(1, N):
        if N % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not any(rem), (N, d)
    return tuple(poly)


@lru_cache(maxsize=None)
def _level(N: int):
    phi_poly = cyclotomic_polynomial(N)
    phi = len(phi_poly) - 1
    # powers[k] = x^k mod Phi_N, as a dense list of length phi
    limit = max(N, 2 * phi - 1, 1)
    powers = []
    cur = [1] + [0] * (phi - 1) if phi else []
    for _ in range(limit):
        powers.append(tuple(cur))
        # multiply by x
        top = cur[-1] if phi else 0
        nxt = [0] + cur[:-1]
        if top:
            nxt = [a - top * c for a, c in zip(nxt, phi_poly[:-1])]
        cur = nxt
    sparse = [tuple((i, c) for i, c in enumerate(p) if c) for p in powers]
    return phi, sparse


def phi_of(N: int) -> int:
    return _level(N)[0]


class Cyclotomic:
    __slots__ = ("N", "num", "den")

    def __init__(self, N: int, num, den: int = 1):
        phi = phi_of(N)
        num = [int(x) for x in num]
        if len(num) != phi:
            raise ValueError(f"level {N} needs {phi} coefficients, got {len(num)}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den, num = -den, [-x for x in num]
        g = math.gcd(den, *num)
        if g > 1:
            den //= g
            num = [x // g for x in num]
        self.N = N
        self.num = tuple(num)
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def rational(cls, r, N: int = 1) -> "Cyclotomic":
        r = Fraction(r)
        phi = phi_of(N)
        return cls(N, [r.numerator] + [0] * (phi - 1), r.denominator)

    @classmethod
    def zero(cls, N: int = 1) -> "Cyclotomic":
        return cls(N, [0] * phi_of(N))

    @classmethod
    def one(cls, N: int = 1) -> "Cyclotomic":
        return cls.rational(1, N)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "Cyclotomic":
        """zeta_N ** k."""
        phi, powers = _level(N)
        vec = [0] * phi
        for i, c in powers[k % N]:
            vec[i] += c
        return cls(N, vec)

    @classmethod
    def from_counts(cls, N: int, counts, scale=1) -> "Cyclotomic":
        """scale * sum_k counts[k] zeta_N^k; ``counts`` is a sequence or dict over k."""
        phi, powers = _level(N)
        vec = [0] * phi
        items = counts.items() if isinstance(counts, dict) else enumerate(counts)
        for k, c in items:
            c = int(c)
            if c:
                for i, a in powers[k % N]:
                    vec[i] += c * a
        scale = Fraction(scale)
        return cls(N, [v * scale.numerator for v in vec], scale.denominator)

    # -- coercion ------------------------------------------------------------

    def at_level(self, M: int) -> "Cyclotomic":
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot coerce level {self.N} to {M}")
        step = M // self.N
        phi, powers = _level(M)
        vec = [0] * phi
        for k, c in enumerate(self.num):
            if c:
                for i, a in powers[k * step]:
                    vec[i] += c * a
        return Cyclotomic(M, vec, self.den)

    @staticmethod
    def _coerce(a, b):
        if not isinstance(b, Cyclotomic):
            b = Cyclotomic.rational(b, a.N)
        if a.N == b.N:
            return a, b
        M = math.lcm(a.N, b.N)
        return a.at_level(M), b.at_level(M)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) or isinstance(other, Cyclotomic):
            a, b = self._coerce(self, other)
            d = a.den * b.den // math.gcd(a.den, b.den)
            fa, fb = d // a.den, d // b.den
            return Cyclotomic(a.N, [x * fa + y * fb for x, y in zip(a.num, b.num)], d)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.N, [-x for x in self.num], self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            r = Fraction(other)
            return Cyclotomic(self.N, [x * r.numerator for x in self.num], self.den * r.denominator)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._coerce(self, other)
        phi, powers = _level(a.N)
        prod = [0] * max(2 * phi - 1, 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        vec = list(prod[:phi])
        for k in range(phi, len(prod)):
            c = prod[k]
            if c:
                for i, v in powers[k]:
                    vec[i] += c * v
        return Cyclotomic(a.N, vec, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            r = Fraction(other)
            if r == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / r)
        if isinstance(other, Cyclotomic):
            if other.is_rational():
                return self / other.to_fraction()
            return self * other.inverse()
        return NotImplemented

    def galois(self, k: int) -> "Cyclotomic":
        """The automorphism zeta_N -> zeta_N^k (k coprime to N)."""
        if math.gcd(k, self.N) != 1:
            raise ValueError("k must be coprime to the level")
        counts = {}
        for i, c in enumerate(self.num):
            if c:
                counts[(i * k) % self.N] = counts.get((i * k) % self.N, 0) + c
        return Cyclotomic.from_counts(self.N, counts, Fraction(1, self.den))

    def inverse(self) -> "Cyclotomic":
        """1/x as the product of the other Galois conjugates over the norm."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        others = Cyclotomic.one(self.N)
        for k in range(2, self.N):
            if math.gcd(k, self.N) == 1:
                others = others * self.galois(k)
        norm = (self * others).to_fraction()
        return others / norm

    def conj(self) -> "Cyclotomic":
        """Complex conjugation z -> z^-1."""
        phi, powers = _level(self.N)
        vec = [0] * phi
        for k, c in enumerate(self.num):
            if c:
                for i, a in powers[(-k) % self.N]:
                    vec[i] += c * a
        return Cyclotomic(self.N, vec, self.den)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0] if self.num else 0, self.den)

    def is_integer(self) -> bool:
        return self.den == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._coerce(self, other)
        return a.num == b.num and a.den == b.den

    __hash__ = None

    def __complex__(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.N)
        return sum(c * z**k for k, c in enumerate(self.num)) / self.den

    def __repr__(self):
        if self.is_rational():
            return f"Cyclotomic({self.to_fraction()})"
        terms = [f"{Fraction(c, self.den)}*z{self.N}^{k}" for k, c in enumerate(self.num) if c]
        return "Cyclotomic(" + " + ".join(terms) + ")"

    def to_json(self) -> dict:
        return {"level": self.N, "coeffs": [str(Fraction(c, self.den)) for c in self.num]}

    @classmethod
    def from_json(cls, d) -> "Cyclotomic":
        fr = [Fraction(c) for c in d["coeffs"]]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return cls(int(d["level"]), [f.numerator * (den // f.denominator) for f in fr], den)
