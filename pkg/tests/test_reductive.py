"""Reductive layer: isotypic decompositions, e-split Levis, closures, iota/delta."""

import numpy as np
import pytest

from brownlevi import groups, posets
from brownlevi import reductive as rd
from brownlevi.errors import DefiningCharacteristic, NotAbelian, NotEClosed
from brownlevi.fields import mat_pow
from brownlevi.numtheory import cyclotomic_poly


def test_connected_centralizer_trivial(gl24):
    L = rd.connected_centralizer(gl24, groups.trivial_subgroup(gl24.group))
    assert [(b.d, b.m) for b in L.blocks] == [(1, 2)]
    assert L.subgroup.order == 180


def test_connected_centralizer_torus(gl24):
    P5 = groups.sylow_subgroup(gl24.group, 5)
    L = rd.connected_centralizer(gl24, P5)
    assert [(b.d, b.m) for b in L.blocks] == [(2, 1)]
    assert L.subgroup.order == 15
    assert L.subgroup == groups.centralizer_in(gl24.group, P5)


def test_connected_centralizer_scalars(gl24):
    Z3 = gl24.center_ell_part(3)
    L = rd.connected_centralizer(gl24, Z3)
    assert [(b.d, b.m) for b in L.blocks] == [(1, 2)]
    assert L.subgroup.order == 180


def test_connected_centralizer_errors(gl24, gl42):
    P9 = groups.sylow_subgroup(groups.perm_group(4), 2)  # wrong ambient; build local
    D8 = groups.sylow_subgroup(gl42.group, 2)
    with pytest.raises(NotAbelian):
        rd.connected_centralizer(gl42, D8)
    with pytest.raises(DefiningCharacteristic):
        rd.connected_centralizer(gl42, groups.subgroup_closure(gl42.group, [D8.generators[0]]))


def test_block_scalar_action_order(gl42):
    # every block's scalar action is a generator of F_{q^d}^x
    pos = posets.enumerate_ell_subgroups(gl42.group, 3)
    ab = posets.ab_filter(pos, "ab")
    for h in ab.members[::97] + [ab.members[-1]]:
        L = rd.connected_centralizer(gl42, h)
        for b in L.blocks:
            full = gl42.q**b.d - 1
            eye = np.eye(b.dim, dtype=np.uint8)
            assert (mat_pow(b.scalar_action, full, gl42.field) == eye).all()
            if full > 1:
                for r in {p for p in range(2, full + 1) if full % p == 0 and _is_prime(p)}:
                    assert not (mat_pow(b.scalar_action, full // r, gl42.field) == eye).all()


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def test_levi_order_polynomial(gl24):
    P5 = groups.sylow_subgroup(gl24.group, 5)
    L = rd.connected_centralizer(gl24, P5)
    pol = L.order_polynomial()
    assert pol.coeffs == (-1, 0, 1)  # x^2 - 1
    assert pol(4) == L.subgroup.order
    G_datum = rd.connected_centralizer(gl24, groups.trivial_subgroup(gl24.group))
    assert G_datum.order_polynomial()(4) == 180


def test_phi_e_center_part(gl24):
    P5 = groups.sylow_subgroup(gl24.group, 5)
    L = rd.connected_centralizer(gl24, P5)
    tp = rd.phi_e_center_part(L, 2)
    assert tp.flagged == [0] and tp.fixed_orders == [cyclotomic_poly(2)(4)]
    assert rd.phi_e_center_part(L, 4).flagged == []
    G_datum = rd.connected_centralizer(gl24, groups.trivial_subgroup(gl24.group))
    assert rd.phi_e_center_part(G_datum, 1).flagged == [0]
    assert rd.phi_e_center_part(G_datum, 1).fixed_orders == [3]  # q - 1


def test_e_split_centralizer_merge(gl42):
    # an A with blocks (d=2,m=1) + (d=1,m=2) closes up to GL1(4) x GL2(2)
    pos = posets.enumerate_ell_subgroups(gl42.group, 3)
    sample = next(
        h
        for h in pos.members
        if h.order == 3
        and [(b.d, b.m) for b in rd.connected_centralizer(gl42, h).blocks] == [(1, 2), (2, 1)]
    )
    M = rd.eclosure_levi(gl42, sample, 2)
    assert sorted((b.d, b.m) for b in M.blocks) == [(1, 2), (2, 1)]
    assert M.subgroup.order == 18
    # trivial torus part: the whole group
    triv = rd.eclosure_levi(gl42, groups.trivial_subgroup(gl42.group), 2)
    assert triv.subgroup.order == gl42.group.order


def test_z_ell_part(gl24, gl42):
    G_datum = rd.connected_centralizer(gl24, groups.trivial_subgroup(gl24.group))
    assert G_datum.z_ell_part(5).order == 1  # 5 does not divide q - 1 = 3
    assert G_datum.z_ell_part(3).order == 3
    P5 = groups.sylow_subgroup(gl24.group, 5)
    T = rd.connected_centralizer(gl24, P5)
    assert T.z_ell_part(5) == P5  # the 5-part of the order-15 torus
    # a GL2(4)-block inside GL4(2): scalars of order 3
    fam = rd.enumerate_e_split_levis(gl42, 2)
    block = next(d for d in fam.reps if d.signature() == ((2, 2),))
    assert block.z_ell_part(3).order == 3


def test_gamma_omega_basics(gl24):
    P5 = groups.sylow_subgroup(gl24.group, 5)
    assert rd.gamma(gl24, P5, 5, 2) == P5
    assert rd.is_e_closed(gl24, P5, 5, 2)
    triv = groups.trivial_subgroup(gl24.group)
    assert rd.gamma(gl24, triv, 5, 2).order == 1
    rep = rd.stabilize(gl24, P5, 5, 2)
    assert rep.e_closed and rep.weakly_e_closed and rep.t_index == 0 and rep.r_index == 0


def test_gamma_nontrivial_closure(gl28):
    # GL2(8), ell=3, e=2: a C3 inside the Coxeter torus closes up to C9
    G = gl28.group
    P9 = groups.sylow_subgroup(G, 3)
    assert P9.order == 9
    C3 = next(
        s for s in groups.all_subgroups_of(P9) if s.order == 3
    )
    g = rd.gamma(gl28, C3, 3, 2)
    assert g.order == 9 and g.contains(C3)
    assert not rd.is_weakly_e_closed(gl28, C3, 3, 2)
    w, t = rd.omega_stabilize(gl28, C3, 3, 2)
    assert w == g and t == 1
    rep = rd.stabilize(gl28, C3, 3, 2)
    assert not rep.e_closed and not rep.weakly_e_closed
    assert rd.is_e_closed(gl28, P9, 3, 2)


def test_enumerate_levis_counts(gl24, gl32):
    fam = rd.enumerate_e_split_levis(gl24, 2)
    assert sorted(fam.orbit_sizes.values()) == [1, 6]
    fam3 = rd.enumerate_e_split_levis(gl32, 3)
    assert sorted(fam3.orbit_sizes.values()) == [1, 8]
    fam1 = rd.enumerate_e_split_levis(gl24, 1)
    assert sorted(fam1.orbit_sizes.values()) == [1, 10]
    # count = |G| / |N(L)| per type
    for fam_, ctx in ((fam, gl24), (fam3, gl32)):
        for datum in fam_.reps:
            N = groups.normalizer_in(ctx.group, datum.subgroup)
            assert fam_.orbit_sizes[datum.signature()] * N.order == ctx.group.order


def test_levi_subgroup_is_centralizer_of_z_ell(gl42):
    # for every enumerated 2-split Levi: L^F = C_G(Z(L)^F_3) (ell coprime to q-1)
    fam = rd.enumerate_e_split_levis(gl42, 2)
    for datum in fam.reps:
        z = datum.z_ell_part(3)
        cent = groups.centralizer_in(gl42.group, z)
        assert cent == datum.subgroup


def test_iota_delta(gl24):
    lp = rd.levi_poset(gl24, 2)
    data = lp.meta["data"]
    tab = posets.chains_of(lp)
    for c in tab.chains:
        chain = [data[lp.members[m].fingerprint] for m in c]
        ab = rd.iota(gl24, chain, 5)
        assert len(ab) == len(chain)
        back = rd.delta(gl24, ab, 5, 2)
        assert [d.subgroup.fingerprint for d in back] == [d.subgroup.fingerprint for d in chain]
    # delta({1}) = {G}
    Z = gl24.center_ell_part(5)
    out = rd.delta(gl24, [Z], 5, 2)
    assert len(out) == 1 and out[0].subgroup.order == 180
    # iota({G > T15}) = {1 < C5}
    t15 = next(d for d in rd.enumerate_e_split_levis(gl24, 2).reps if d.subgroup.order == 15)
    g_dat = next(d for d in rd.enumerate_e_split_levis(gl24, 2).reps if d.subgroup.order == 180)
    chain = rd.iota(gl24, [t15, g_dat], 5)
    assert [h.order for h in chain] == [1, 5]
    # delta on a non-e-closed term
    with pytest.raises(NotEClosed):
        C3 = groups.sylow_subgroup(gl24.group, 3)
        rd.delta(gl24, [Z, C3], 5, 2)


def test_hypothesis_check(gl24):
    assert rd.hypothesis_check(gl24, 5).theorem_a_ok
    h3 = rd.hypothesis_check(gl24, 3)
    assert h3.pi_ok and not h3.theorem_a_ok  # 3 | q - 1
    assert not rd.hypothesis_check(gl24, 2).pi_ok
    ctx7 = rd.GLContext(2, 7)
    rep = rd.hypothesis_check(ctx7, 3)
    assert not rep.theorem_a_ok
    assert not rd.hypothesis_check(ctx7, 7).pi_ok  # defining characteristic


def test_gamma_properties_sweep(gl42):
    """Lemma-level properties of gamma/omega over all abelian 3-subgroups."""
    ell, e = 3, 2
    ab = rd.abelian_poset(gl42, ell)
    G = gl42.group
    gammas = {i: rd.gamma(gl42, h, ell, e) for i, h in enumerate(ab.members)}
    Z = gl42.center_ell_part(ell)
    for i, h in enumerate(ab.members):
        gA = gammas[i]
        # Z(G)^F_ell <= gamma(A) and [A, gamma(A)] = 1
        assert gA.contains(Z)
        for a in h.generators:
            for b in gA.generators:
                assert G.matmul_idx(a, b)[0] == G.matmul_idx(b, a)[0]
        # centre detection
        assert (gA.order == 1) == (h.order == 1)
        # e-closed implies weakly e-closed
        if gA == h:
            assert rd.omega(gl42, h, ell, e) == h
    # monotonicity over comparable pairs
    for i in range(len(ab)):
        for j in range(len(ab)):
            if i != j and ab.leq[i, j]:
                assert gammas[j].contains(gammas[i])
    # equivariance under the standard automorphisms
    for alpha in groups.standard_automorphisms(G):
        for i in (0, 1, len(ab) // 2, len(ab) - 1):
            h = ab.members[i]
            img = groups.apply_automorphism(alpha, h)
            assert rd.gamma(gl42, img, ell, e) == groups.apply_automorphism(alpha, gammas[i])


def test_fiber_poset(gl42):
    fam = rd.enumerate_e_split_levis(gl42, 2)
    block = next(d for d in fam.reps if d.signature() == ((2, 2),))  # GL2(4) block
    pos, a0, norm = rd.fiber_poset(gl42, block, 3, 2)
    # scalars C3 plus the ten order-9 tori of the block
    assert sorted(h.order for h in pos.members) == [3] + [9] * 10
    assert norm.order == 360
    cert = posets.join_contractibility_certificate(pos, a0, sym=norm)
    assert cert.passed and cert.chi_checks_pass and cert.all_subgroups_checked
