import itertools
import random

import numpy as np
import pytest

from glpsh.classfn import schur_inner
from glpsh.cyclo import Cyclotomic
from glpsh.groups import gl
from glpsh.hyperhecke import (
    HHElement,
    HHTriple,
    InvalidTriple,
    action_map,
    as_root,
    canonical_triples,
    check_condition,
    composable_pairs,
    compose,
    element_matches_map,
    factorization,
    hh_comul,
    hh_comul_element,
    hh_join,
    hh_parabolic_mul,
    is_equivariant,
    join_element,
    to_module_map,
    triple_make,
    triple_normalize,
    valid_reps,
)
from glpsh.rplus import b_pair, basis, pair


def cdense(M):
    A = np.zeros((M.dim_out, len(M.targets)), dtype=complex)
    for i, (t, e) in enumerate(zip(M.targets, M.exps)):
        if t >= 0:
            A[t, i] = np.exp(2j * np.pi * e / M.N)
    return A


def element_dense(x):
    acc = None
    for t, c in x.terms.items():
        m = cdense(to_module_map(t)) * complex(c)
        acc = m if acc is None else acc + m
    return acc


@pytest.fixture(scope="module")
def chars22():
    return [p.phi for p in basis(gl(2, 2))]


@pytest.fixture(scope="module")
def triples22(chars22):
    return canonical_triples(chars22)


def brute_valid(psi, g, phi):
    G = phi.subgroup.group
    for k in psi.subgroup.elements:
        y = G.conj(g, k)  # g k g^-1
        if y not in phi.subgroup.set:
            return False
        if psi.angle(k) != phi.angle(y):
            return False
    return True


def test_validity_matches_brute(chars22):
    G = gl(2, 2)
    for psi, phi in itertools.product(chars22, repeat=2):
        for g in range(G.order):
            ok = brute_valid(psi, g, phi)
            if ok:
                assert triple_make(psi, g, phi).g == g
            else:
                with pytest.raises(InvalidTriple) as err:
                    triple_make(psi, g, phi)
                assert err.value.reason in ("containment", "character")


def test_valid_reps_against_brute_double_cosets():
    for G in (gl(2, 2), gl(2, 3)):
        chars = [p.phi for p in basis(G)][::4]
        for psi, phi in itertools.product(chars, repeat=2):
            H, K = phi.subgroup, psi.subgroup
            cosets = set()
            for g in range(G.order):
                if brute_valid(psi, g, phi):
                    cosets.add(min(G.prod(h, g, k) for h in H.elements for k in K.elements))
            assert valid_reps(psi, phi) == sorted(cosets)


def test_triples_sit_inside_the_intertwiners(g23):
    # distinct triples give independent intertwiners, so they never outnumber them
    chars = [p.phi for p in basis(g23)][::3]
    for psi, phi in itertools.product(chars, repeat=2):
        inner = schur_inner(b_pair(pair(psi.subgroup, psi)), b_pair(pair(phi.subgroup, phi)))
        n = len(valid_reps(psi, phi))
        assert n <= inner.to_fraction()


def test_module_maps_are_equivariant_and_independent(chars22, triples22):
    G = gl(2, 2)
    for t in triples22:
        assert is_equivariant(t)
        T = cdense(to_module_map(t))
        for s in range(G.order):
            A = cdense(action_map(t.source, s))
            B = cdense(action_map(t.target, s))
            assert np.allclose(T @ A, B @ T)
    for psi, phi in itertools.product(chars22, repeat=2):
        ts = [t for t in triples22 if t.source == psi and t.target == phi]
        if ts:
            stack = np.stack([cdense(to_module_map(t)).ravel() for t in ts])
            assert np.linalg.matrix_rank(stack) == len(ts)


def test_normalization_scalar_against_maps(triples22):
    G = gl(2, 2)
    rng = random.Random(9)
    for t in triples22:
        H, K = t.target.subgroup, t.source.subgroup
        for _ in range(4):
            h, k = rng.choice(H.elements), rng.choice(K.elements)
            t2 = HHTriple(t.source, G.prod(h, t.g, k), t.target)
            scalar, t0 = triple_normalize(t2)
            assert t0 == t
            assert np.allclose(cdense(to_module_map(t2)), complex(scalar) * cdense(to_module_map(t)))


def test_compose_matches_matrix_product(triples22):
    for x, y in composable_pairs(triples22):
        z = compose(HHElement.of(x), HHElement.of(y))
        expected = cdense(to_module_map(x)) @ cdense(to_module_map(y))
        assert np.allclose(element_dense(z), expected)
        assert element_matches_map(z, to_module_map(y).then(to_module_map(x)))


def test_compose_needs_matching_pairs(triples22):
    x = next(t for t in triples22 if t.source != t.target)
    y = next(t for t in triples22 if t.target != x.source)
    assert compose(HHElement.of(x), HHElement.of(y)).is_zero()


def test_factorization(triples22):
    for t in triples22:
        left, right = factorization(t)
        assert right.g == t.group.identity
        assert compose(HHElement.of(left), HHElement.of(right)) == HHElement.of(t)


def test_as_root():
    assert as_root(Cyclotomic.zeta(6, 1)) is not None
    assert as_root(-Cyclotomic.one()) == (1, 2)
    assert as_root(Cyclotomic.one() + Cyclotomic.one()) is None


def test_identity_triples_comultiply_to_identity(chars22):
    G = gl(2, 2)
    for phi in chars22:
        t = HHTriple(phi, G.identity, phi)
        m = hh_comul(t, ((1, 1),))
        assert m.rows == m.cols
        for (r, c), x in m.entries.items():
            assert r == c
            ((tri, coef),) = x.terms.items()
            assert tri.source == tri.target and coef == Cyclotomic.one()


def test_comultiplication_is_multiplicative(triples22):
    for x, y in composable_pairs(triples22):
        z = compose(HHElement.of(x), HHElement.of(y))
        assert hh_comul_element(z, ((1, 1),)) == hh_comul(x, ((1, 1),)) @ hh_comul(y, ((1, 1),))


@pytest.mark.parametrize("n,q,central", [(2, 2, False), (2, 3, True)])
def test_condition_target_implies_source(n, q, central):
    G = gl(n, q)
    triples = canonical_triples([p.phi for p in basis(G, central=central)])
    converse = 0
    for t in triples:
        for _, src, tgt in check_condition(t, ((1, 1),)):
            assert src or not tgt
            converse += src and not tgt
    if (n, q) == (2, 3):
        assert converse > 0


def test_parabolic_mul_and_join():
    G1 = gl(1, 3)
    chars = [p.phi for p in basis(G1)]
    ts = canonical_triples(chars)
    assert hh_parabolic_mul([ts[0]], [ts[1], ts[2]]) is None
    for x, y in itertools.product(ts[:4], repeat=2):
        j = hh_join(x, y, promote=True)
        assert j.group is gl(2, 3)
        (out,) = hh_parabolic_mul([x], [y])
        assert out == j
    for (x1, x2), (x3, x4) in itertools.product(list(composable_pairs(ts))[:6], repeat=2):
        a = join_element(compose(HHElement.of(x1), HHElement.of(x2)), compose(HHElement.of(x3), HHElement.of(x4)))
        b = compose(HHElement.of(hh_join(x1, x3)), HHElement.of(hh_join(x2, x4)))
        assert a == b


def test_element_arithmetic(triples22):
    t = triples22[3]
    x = HHElement.of(t, 2)
    assert (x + x.scale(-1)).is_zero()
    assert x.scale(Cyclotomic.zeta(3, 1)) != x
    assert x.to_json()
