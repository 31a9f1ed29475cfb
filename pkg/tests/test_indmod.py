import random

import numpy as np
import pytest

from glpsh.classfn import hc_restrict
from glpsh.groups import GroupError, LinearCharacter, block_parabolic, gl, parabolic
from glpsh.indmod import (
    b_of_m_star_plus,
    build_induced,
    line_orbits,
    line_span_hc_character,
    line_span_levi_character,
    u_fixed_subspace,
    valid_double_cosets,
)
from glpsh.rplus import b_pair, basis, induced_sum_oracle


def dense(M, g):
    tgt, e = M.act(g)
    A = np.zeros((M.dim, M.dim), dtype=complex)
    for i, (j, k) in enumerate(zip(tgt.tolist(), e.tolist())):
        A[j, i] = np.exp(2j * np.pi * k / M.N)
    return A


def test_module_character_is_b(g23):
    for p in basis(g23)[::3]:
        M = build_induced(p.H, p.phi)
        assert M.dim == g23.order // p.H.order
        assert M.character() == b_pair(p) == induced_sum_oracle(p.H, p.phi)


def test_action_is_a_homomorphism(g23):
    rng = random.Random(4)
    for p in basis(g23)[5:40:6]:
        M = build_induced(p.H, p.phi)
        for _ in range(5):
            g, h = rng.randrange(g23.order), rng.randrange(g23.order)
            assert np.allclose(dense(M, g23.mul(g, h)), dense(M, g) @ dense(M, h))


def test_character_must_live_on_subgroup(g22):
    with pytest.raises(GroupError):
        build_induced(g22.whole, LinearCharacter.trivial(g22.trivial))


def brute_fixed_dim(M, U):
    P = sum(dense(M, u) for u in U.elements) / U.order
    return int(np.linalg.matrix_rank(P, tol=1e-8))


def brute_valid(G, H, phi, U, t):
    ti = int(G.inv[t])
    for u in U.elements:
        y = G.mul(G.mul(ti, u), t)
        if y in H.set and phi.exp(y) != 0:
            return False
    return True


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2)])
def test_fixed_subspace_and_validity_against_brute(n, q):
    G = gl(n, q)
    B = basis(G)
    for alpha in range(1, n):
        pd = parabolic(n, q, alpha)
        for p in B[:: max(1, len(B) // 12)]:
            M = build_induced(p.H, p.phi)
            cos = valid_double_cosets(p.H, p.phi, pd)
            for c in cos:
                assert c.valid == brute_valid(G, p.H, p.phi, pd.U, c.t)
            fixed = u_fixed_subspace(M, pd)
            assert fixed.dim == sum(c.valid for c in cos) == brute_fixed_dim(M, pd.U)
            assert fixed.character() == hc_restrict(b_pair(p), alpha)


@pytest.mark.parametrize("n,q", [(2, 2), (3, 2)])
def test_line_bookkeeping(n, q):
    G = gl(n, q)
    for alpha in range(1, n):
        pd = parabolic(n, q, alpha)
        for p in basis(G):
            ls = line_orbits(p.H, p.phi, pd)
            assert ls.orbit_sum() == ls.total_lines
            assert sum(o.size for o in ls.orbits) == ls.total_lines
            for o in ls.orbits:
                assert pd.levi_group.order // o.stabilizer.order == o.size
            assert line_span_levi_character(ls) == b_of_m_star_plus(ls)
            assert line_span_hc_character(ls) == hc_restrict(b_pair(p), alpha)


def test_mu_counts_orbits_per_class(g32):
    pd = parabolic(3, 2, 1)
    for p in basis(g32):
        ls = line_orbits(p.H, p.phi, pd)
        for o in ls.orbits:
            assert o.mu == sum(1 for r in ls.orbits if r.pair == o.pair)


def test_nontrivial_stabilizer_character_exists(g23):
    # the stabilizer of a line can act on it by a nontrivial character
    pd = parabolic(2, 3, 1)
    found = False
    for p in basis(g23, central=True):
        ls = line_orbits(p.H, p.phi, pd)
        if not ls.stabilizer_characters_trivial():
            found = True
            break
    assert found


def test_sl_flag_is_a_no_op_on_unipotent(g32):
    for alpha in (1, 2):
        pd = parabolic(3, 2, alpha)
        for p in basis(g32)[::4]:
            a = line_orbits(p.H, p.phi, pd)
            b = line_orbits(p.H, p.phi, pd, sl_intersect=True)
            assert [c.valid for c in a.cosets] == [c.valid for c in b.cosets]
            assert a.m_star_plus() == b.m_star_plus()


def test_three_block_parabolic(g32):
    pd = block_parabolic(g32, ((1, 1, 1),))
    for p in basis(g32)[::5]:
        ls = line_orbits(p.H, p.phi, pd)
        assert ls.orbit_sum() == ls.total_lines
        fixed = u_fixed_subspace(build_induced(p.H, p.phi), pd)
        assert fixed.dim == len(ls.valid_cosets)
