import pytest

from glpsh.classfn import (
    ClassFunction,
    external_product,
    hc_restrict,
    hc_restriction_map,
    induce_character,
    induction_map,
    inflate,
    parabolic_induction_map,
    restrict,
    schur_inner,
    transport,
)
from glpsh.cyclo import Cyclotomic
from glpsh.groups import block_parabolic, gl, linear_characters, product_group, subgroups


def brute_induced(H, phi):
    """(1/|H|) sum over x in G with x^-1 g x in H of phi(x^-1 g x), per class rep."""
    G = H.group
    vals = []
    for r in G.class_reps:
        acc = Cyclotomic.zero()
        for x in range(G.order):
            y = G.conj(int(G.inv[x]), int(r))
            if y in H.set:
                acc = acc + Cyclotomic.zeta(phi.N, phi.exp(y))
        vals.append(acc / H.order)
    return ClassFunction(G, vals)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3)])
def test_induction_matches_brute_force(n, q):
    G = gl(n, q)
    lat = subgroups(G)
    for pos in lat.canonical[::2]:
        H = lat.subgroups[pos]
        for phi in linear_characters(H)[:3]:
            assert induce_character(H, phi) == brute_induced(H, phi)


def test_frobenius_reciprocity(g23):
    lat = subgroups(g23)
    chis = [induce_character(g23.whole, p) for p in linear_characters(g23.whole)]
    chis.append(ClassFunction.regular(g23))
    for pos in lat.canonical:
        H = lat.subgroups[pos]
        for phi in linear_characters(H)[:2]:
            f = ClassFunction.from_linear_character(phi)
            ind = induction_map(H)(f)
            assert ind == induce_character(H, phi)
            for chi in chis:
                assert schur_inner(ind, chi) == schur_inner(f, restrict(chi, H))


def test_regular_and_trivial(g32):
    reg = ClassFunction.regular(g32)
    assert reg.degree == g32.order
    assert schur_inner(reg, reg) == g32.order
    one = ClassFunction.trivial(g32)
    assert schur_inner(one, one) == 1
    assert induce_character(g32.trivial, ClassFunction.trivial(g32.trivial.as_group())) == reg


def test_borel_induction_gl23(g23):
    pd = block_parabolic(g23, ((1, 1),))
    chi = induce_character(pd.P, ClassFunction.trivial(pd.P.as_group()))
    assert schur_inner(chi, chi) == 2
    h = hc_restrict(chi, 1)
    assert h == ClassFunction.constant(h.group, 2)


@pytest.mark.parametrize("n,q,alpha", [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2)])
def test_harish_chandra_adjunction(n, q, alpha):
    """<R f, chi>_G = <f, *R chi>_L for parabolic induction R and its adjoint *R."""
    G = gl(n, q)
    splits = ((alpha, n - alpha),)
    pd = block_parabolic(G, splits)
    L = pd.levi_group
    lat = subgroups(G)
    chis = [induce_character(lat.subgroups[p], linear_characters(lat.subgroups[p])[-1]) for p in lat.canonical[::3]]
    fs = [ClassFunction.regular(L), ClassFunction.trivial(L)] + [
        ClassFunction.from_linear_character(phi) for phi in linear_characters(L.whole)
    ]
    R = parabolic_induction_map(G, splits)
    S = hc_restriction_map(G, splits)
    for f in fs:
        for chi in chis:
            assert schur_inner(R(f), chi) == schur_inner(f, S(chi))


def test_parabolic_induction_is_induction_of_inflation(g32):
    pd = block_parabolic(g32, ((1, 2),))
    L = pd.levi_group
    for phi in linear_characters(L.whole):
        f = ClassFunction.from_linear_character(phi)
        direct = parabolic_induction_map(g32, ((1, 2),))(f)
        assert direct == induction_map(pd.P)(inflate(f, pd))
        assert direct.degree == f.degree * (g32.order // pd.P.order)


def test_external_product_and_transport():
    A, B = gl(1, 3), gl(2, 2)
    with pytest.raises(Exception):
        external_product(ClassFunction.trivial(A), ClassFunction.trivial(B))
    A, B = gl(1, 3), gl(2, 3)
    f = ClassFunction.from_linear_character(linear_characters(A.whole)[1])
    g = ClassFunction.regular(B)
    fg = external_product(f, g)
    assert fg.group is product_group((1, 2), 3)
    gf = transport(fg, (1, 0))
    assert gf == external_product(g, f)
    assert transport(gf, (1, 0)) == fg


def test_json_roundtrip(g23):
    f = induce_character(subgroups(g23).subgroups[7], linear_characters(subgroups(g23).subgroups[7])[-1])
    assert ClassFunction.from_json(g23, f.to_json()) == f
