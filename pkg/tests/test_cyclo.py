from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glpsh.cyclo import Cyclotomic, cyclotomic_polynomial, phi_of

LEVELS = [1, 2, 3, 4, 5, 6, 8, 9, 12, 24]


def mobius(n):
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


@st.composite
def cyclos(draw, levels=LEVELS):
    N = draw(st.sampled_from(levels))
    counts = draw(st.lists(st.integers(-4, 4), min_size=N, max_size=N))
    den = draw(st.integers(1, 5))
    return Cyclotomic.from_counts(N, counts, Fraction(1, den))


def close(a, b):
    return abs(complex(a) - complex(b)) < 1e-9


@pytest.mark.parametrize("N", LEVELS)
def test_cyclotomic_polynomial_degree(N):
    assert len(cyclotomic_polynomial(N)) - 1 == phi_of(N)


@pytest.mark.parametrize("N", LEVELS)
def test_roots_of_unity(N):
    z = Cyclotomic.zeta(N)
    acc = Cyclotomic.one(N)
    for _ in range(N):
        acc = acc * z
    assert acc == 1
    primitive = [k for k in range(N) if __import__("math").gcd(k, N) == 1]
    s = sum((Cyclotomic.zeta(N, k) for k in primitive), Cyclotomic.zero(N))
    assert s == mobius(N)


def test_small_identities():
    assert Cyclotomic.zeta(4, 2) == -1
    assert Cyclotomic.zeta(3) + Cyclotomic.zeta(3, 2) == -1
    assert Cyclotomic.zeta(6) * Cyclotomic.zeta(4) == Cyclotomic.zeta(12, 5)
    assert Cyclotomic.zeta(2) == Cyclotomic.rational(-1)


@given(cyclos(), cyclos())
def test_ring_operations_match_complex_values(a, b):
    assert close(a + b, complex(a) + complex(b))
    assert close(a * b, complex(a) * complex(b))
    assert close(a - b, complex(a) - complex(b))
    assert a + b == b + a and a * b == b * a


@given(cyclos())
def test_division_and_conjugation(a):
    assert close(a.conj(), complex(a).conjugate())
    if not a.is_zero():
        assert (a / a) == 1
        assert close(Cyclotomic.one() / a, 1 / complex(a))


@given(cyclos())
def test_json_roundtrip(a):
    assert Cyclotomic.from_json(a.to_json()) == a


def test_level_mismatch_and_validation():
    with pytest.raises(ValueError):
        Cyclotomic(5, [1, 2])
    with pytest.raises(ZeroDivisionError):
        Cyclotomic(1, [1], 0)
    a = Cyclotomic.zeta(3)
    assert a.at_level(6) == a
    assert Cyclotomic.rational(Fraction(3, 4), 8).to_fraction() == Fraction(3, 4)
    assert not Cyclotomic.zeta(3).is_rational()


@given(cyclos(levels=[5, 8, 12]))
def test_galois_is_a_ring_map(a):
    b = Cyclotomic.zeta(a.N, 1) + 2
    for k in (1, a.N - 1):
        assert (a * b).galois(k) == a.galois(k) * b.galois(k)
    assert a.galois(a.N - 1) == a.conj()
