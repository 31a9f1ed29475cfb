import itertools
import random
from fractions import Fraction

import pytest

from glpsh.classfn import ClassFunction, schur_inner
from glpsh.groups import (
    CapExceeded,
    GroupError,
    LinearCharacter,
    Subgroup,
    gl,
    linear_characters,
    parse_group_spec,
    subgroups,
)
from glpsh.rplus import (
    MonomialSum,
    b_map,
    b_pair,
    basis,
    boltje_form,
    brauer_induction,
    canonicalize_pair,
    induced_sum_oracle,
    mark_matrix,
    pair,
    rplus_mul,
    trivial_pair,
)


def brute_subgroups(G):
    found = set()
    for x, y in itertools.combinations_with_replacement(range(G.order), 2):
        found.add(tuple(G.generate([x, y]).tolist()))
    return [Subgroup(G, e) for e in found]


def pair_set(G, H, phi):
    return frozenset((x, Fraction(phi.exp(x), phi.N)) for x in H.elements)


def conj_pair_set(G, ps, g):
    return frozenset((G.conj(g, x), v) for x, v in ps)


def brute_pair_orbits(G, central=False):
    Z = set(G.center.elements)
    seen, count = set(), 0
    for H in brute_subgroups(G):
        for phi in linear_characters(H):
            if central and not (Z <= H.set and all(phi.exp(z) == 0 for z in Z)):
                continue
            ps = pair_set(G, H, phi)
            if ps in seen:
                continue
            count += 1
            seen |= {conj_pair_set(G, ps, g) for g in range(G.order)}
    return count


@pytest.mark.parametrize(
    "spec,central,size",
    [("gl:2:2", False, 7), ("gl:2:3", False, 43), ("gl:2:3", True, 25), ("gl:1:3,gl:1:3", False, 11)],
)
def test_basis_size_matches_orbit_count(spec, central, size):
    G = parse_group_spec(spec)
    B = basis(G, central=central)
    assert len(B) == size
    assert brute_pair_orbits(G, central) == size


def test_basis_order_and_trivial_first(g23):
    B = basis(g23)
    assert B[0] == trivial_pair(g23) or B[0].H.order == g23.order
    orders = [p.H.order for p in B]
    assert orders == sorted(orders, reverse=True)


def test_central_pairs_are_central(g23):
    for p in basis(g23, central=True):
        assert p.is_central()


def test_canonical_invariant_under_conjugation(g23):
    rng = random.Random(5)
    lat = subgroups(g23)
    for H in rng.sample(lat.subgroups, 12):
        for phi in linear_characters(H):
            p = canonicalize_pair(H, phi)
            g = rng.randrange(g23.order)
            tw = phi.twist(g)
            assert canonicalize_pair(tw.subgroup, tw) == p


def brute_canonical(G, H, phi):
    best = None
    for g in range(G.order):
        items = sorted((G.conj(g, x), phi.exp(x)) for x in H.elements)
        key = (tuple(x for x, _ in items), tuple(e for _, e in items))
        if best is None or key < best:
            best = key
    return best


def test_untabled_fast_path_matches_brute():
    G = gl(3, 3)
    assert G.table is None
    rng = random.Random(11)
    for _ in range(3):
        H = Subgroup(G, G.generate([rng.randrange(G.order)]))
        phi = linear_characters(H)[-1]
        p = canonicalize_pair(H, phi)
        elems, exps = brute_canonical(G, H, phi)
        assert p.H.elements == elems
        assert p.phi == LinearCharacter(p.H, phi.N, exps)


def test_subgroup_cap_on_gl33():
    with pytest.raises(CapExceeded):
        basis(gl(3, 3))


def test_character_must_live_on_subgroup(g22):
    H = g22.whole
    K = g22.trivial
    with pytest.raises(GroupError):
        canonicalize_pair(H, LinearCharacter.trivial(K))


def test_unit_commutative_associative(g23):
    B = basis(g23)
    one = MonomialSum.one(g23)
    rng = random.Random(2)
    for p in B:
        x = MonomialSum.of(p)
        assert rplus_mul(one, x) == x
    for p, r in rng.sample(list(itertools.product(B, B)), 60):
        x, y = MonomialSum.of(p), MonomialSum.of(r)
        assert rplus_mul(x, y) == rplus_mul(y, x)
    for p, r, s in rng.sample(list(itertools.product(B, B, B)), 25):
        x, y, z = MonomialSum.of(p), MonomialSum.of(r), MonomialSum.of(s)
        assert rplus_mul(rplus_mul(x, y), z) == rplus_mul(x, rplus_mul(y, z))


def test_product_degree_count(g22):
    # [G:K][G:H] = sum over the product of [G:I]
    for p, r in itertools.product(basis(g22), repeat=2):
        prod = rplus_mul(MonomialSum.of(p), MonomialSum.of(r))
        lhs = (g22.order // p.H.order) * (g22.order // r.H.order)
        assert lhs == sum(c * (g22.order // s.H.order) for s, c in prod.items())


def test_sum_arithmetic(g22):
    B = basis(g22)
    x = MonomialSum.of(B[0], 2) + MonomialSum.of(B[1])
    assert (x - x).is_zero()
    assert -(-x) == x
    assert x.scale(3) == x + x + x
    assert len(x) == 2


def test_b_pair_matches_oracle(g23):
    for p in basis(g23)[::5]:
        assert b_pair(p) == induced_sum_oracle(p.H, p.phi)


def test_b_is_multiplicative_on_gl32_sample(g32):
    B = basis(g32)
    rng = random.Random(3)
    for p, r in rng.sample(list(itertools.product(B, B)), 15):
        lhs = b_map(rplus_mul(MonomialSum.of(p), MonomialSum.of(r)))
        assert lhs == induced_sum_oracle(p.H, p.phi) * induced_sum_oracle(r.H, r.phi)


def brute_form(G, x, y):
    # sum over g in G satisfying the condition of |H cap gH'g^-1| / (|H| |H'|)
    total = Fraction(0)
    for g in range(G.order):
        gi = int(G.inv[g])
        ok = True
        for k in x.H.elements:
            y_el = G.mul(G.mul(gi, k), g)
            if y_el not in y.H.set or Fraction(x.phi.exp(k), x.phi.N) != Fraction(y.phi.exp(y_el), y.phi.N):
                ok = False
                break
        if ok:
            inter = sum(1 for h in y.H.elements if G.conj(g, h) in x.H.set)
            total += Fraction(inter, x.H.order * y.H.order)
    assert total.denominator == 1
    return int(total)


def test_boltje_form_matches_brute(g22):
    for x, y in itertools.product(basis(g22), repeat=2):
        assert boltje_form(x, y) == brute_form(g22, x, y)


def test_mark_matrix_shape(g23):
    mm = mark_matrix(g23)
    assert mm.is_lower_triangular()
    assert mm.diagonal_positive()
    assert mm.rank_report()["rank"] == mm.size


def test_brauer_of_linear_character_is_itself(g23):
    for phi in linear_characters(g23.whole):
        rho = ClassFunction.from_linear_character(phi)
        res = brauer_induction(rho)
        assert res.element == MonomialSum.of(pair(g23.whole, phi))
        assert res.in_image and res.integral


def test_brauer_of_regular(g22):
    # a(rho) is defined by adjunction, so the regular character does not come
    # back as the single pair (1, 1)
    rho = ClassFunction.regular(g22)
    res = brauer_induction(rho)
    assert res.in_image and res.integral
    assert res.element != MonomialSum.of(pair(g22.trivial))
    for t in basis(g22):
        assert boltje_form(t, res.element) == schur_inner(b_pair(t), rho)


def test_brauer_adjunction_on_gl32_sample(g32):
    B = basis(g32)
    for s in B[::7]:
        rho = b_pair(s)
        a = brauer_induction(rho).element
        assert b_map(a) == rho
        for t in B[::5]:
            assert boltje_form(t, a) == schur_inner(b_pair(t), rho)


def test_sum_json(g22):
    x = MonomialSum.of(basis(g22)[2], 3)
    data = x.to_json()
    assert isinstance(data, list) and len(data) == 1
