"""Mutation of decorated representations: the four constructions, the
composition identity, annihilation, pullbacks, and round trips."""

import random

import pytest

from conftest import a2_qp, markov_qp, MARKOV_K
from qpmut import (
    CONSTRUCTIONS,
    DecRep,
    Mat,
    QQ,
    check_beta_alpha,
    check_module,
    constructions_agree,
    cyclic_derivative,
    is_isomorphic,
    mutate_qp,
    mutate_rep,
    negative_simple_rep,
    path_action,
    premutate_rep,
    pullback_reduction,
    simple_rep,
    zero_rep,
)
from qpmut.generate import base_change, random_valid_module
from qpmut.homs import YES
from qpmut.mutation import involution_pullback, transport_iso


def a2_p1():
    qp = a2_qp()
    return DecRep(qp, {1: 1, 2: 1}, {"a": Mat.identity(QQ, 1)}, {1: 0, 2: 0})


def test_premutate_a2_projective_gives_simple():
    pm = premutate_rep(a2_p1(), 2)
    assert pm.rep.dims == {1: 1, 2: 0}
    assert pm.rep.dec_dims == {1: 0, 2: 0}


def test_premutate_simple_gives_negative_simple(markov):
    m = simple_rep(markov, MARKOV_K)
    pm = premutate_rep(m, MARKOV_K)
    assert pm.rep.dims[MARKOV_K] == 0
    assert pm.rep.dec_dims[MARKOV_K] == 1


def test_premutate_negative_simple_gives_simple(markov):
    m = negative_simple_rep(markov, MARKOV_K)
    pm = premutate_rep(m, MARKOV_K)
    assert pm.rep.dims[MARKOV_K] == 1
    assert pm.rep.dec_dims[MARKOV_K] == 0


def test_dimension_bookkeeping_all_constructions(markov):
    rng = random.Random(101)
    for _ in range(4):
        m = random_valid_module(markov, rng, max_dim=4)
        t = None
        for kind in CONSTRUCTIONS:
            pm = premutate_rep(m, MARKOV_K, kind)
            t = pm.triangle
            expected_mk = (
                (t.ker_gamma.cols - t.im_beta.cols)
                + t.im_gamma.cols
                + (t.ker_alpha.cols - t.im_gamma.cols)
                + m.dec_dims[MARKOV_K]
            )
            assert pm.rep.dims[MARKOV_K] == expected_mk
            expected_vk = t.ker_beta.cols - t.kerbeta_cap_imalpha.cols
            assert pm.rep.dec_dims[MARKOV_K] == expected_vk


def test_beta_alpha_identity_all_constructions(markov):
    rng = random.Random(103)
    for _ in range(4):
        m = random_valid_module(markov, rng, max_dim=4)
        for kind in CONSTRUCTIONS:
            pm = premutate_rep(m, MARKOV_K, kind)
            assert check_beta_alpha(pm).ok


def test_beta_alpha_zero_gamma_case():
    # zero potential on the line quiver: the derivative matrix vanishes
    from conftest import a3_line_qp
    qp = a3_line_qp()
    m = DecRep(
        qp,
        {1: 1, 2: 1, 3: 1},
        {"a": Mat.identity(QQ, 1), "b": Mat.identity(QQ, 1)},
        {1: 0, 2: 0, 3: 0},
    )
    pm = premutate_rep(m, 2)
    assert pm.triangle.gamma.is_zero()
    assert check_beta_alpha(pm).ok
    prod = pm.beta_bar @ pm.alpha_bar
    assert prod.is_zero()


def test_beta_alpha_negative_control(markov):
    rng = random.Random(107)
    m = random_valid_module(markov, rng, max_dim=3)
    pm = premutate_rep(m, MARKOV_K)
    if pm.triangle.gamma.is_zero():
        pytest.skip("needs a nonzero derivative matrix")
    # flip the sign of one reversed-arrow action
    bad_maps = dict(pm.rep.maps)
    for b in pm.triangle.out_arrows:
        name = b + "*"
        if not bad_maps[name].is_zero():
            bad_maps[name] = -bad_maps[name]
            break
    bad = DecRep(pm.rep.qp, dict(pm.rep.dims), bad_maps, dict(pm.rep.dec_dims))
    from qpmut.mutation import PremutedRep

    bad_pm = PremutedRep(
        rep=bad, k=pm.k, construction=pm.construction,
        triangle=pm.triangle, block_dims=pm.block_dims,
    )
    assert not check_beta_alpha(bad_pm).ok


def test_annihilation_by_premuted_derivatives(markov):
    rng = random.Random(109)
    for _ in range(3):
        m = random_valid_module(markov, rng, max_dim=3)
        pm = premutate_rep(m, MARKOV_K)
        qpt = pm.rep.qp
        for a in qpt.quiver.arrows:
            d = cyclic_derivative(qpt.potential, a.id)
            assert path_action(pm.rep, d).is_zero()


def test_constructions_agree_zero_module(markov):
    m = zero_rep(markov)
    rpt = constructions_agree(m, MARKOV_K)
    assert rpt.ok


def test_constructions_agree_random(markov):
    rng = random.Random(113)
    for _ in range(3):
        m = random_valid_module(markov, rng, max_dim=3)
        rpt = constructions_agree(m, MARKOV_K)
        assert rpt.ok, rpt.failures


def test_pullback_forgetful_on_markov(markov):
    rng = random.Random(127)
    m = random_valid_module(markov, rng, max_dim=3)
    reduced, phi, trivial = mutate_qp(markov, MARKOV_K)
    pm = premutate_rep(m, MARKOV_K)
    red = pullback_reduction(pm.rep, phi, reduced)
    # the splitting is the identity on every surviving arrow here, so the
    # reduced action literally forgets the trivial arrows
    for a in reduced.quiver.arrows:
        assert red.maps[a.id] == pm.rep.maps[a.id]
    assert check_module(red).ok


def test_mutate_rep_valid_over_mutated_qp(markov):
    rng = random.Random(131)
    for _ in range(3):
        m = random_valid_module(markov, rng, max_dim=3)
        out = mutate_rep(m, MARKOV_K)
        assert check_module(out).ok
        assert out.qp == mutate_qp(markov, MARKOV_K)[0]


def test_negative_simple_round_trip(markov):
    m = negative_simple_rep(markov, MARKOV_K)
    out = mutate_rep(m, MARKOV_K)
    assert out.dims == {1: 0, 2: 0, MARKOV_K: 1}
    assert out.dec_dims[MARKOV_K] == 0
    back = mutate_rep(out, MARKOV_K)
    assert back.dims == {1: 0, 2: 0, MARKOV_K: 0}
    assert back.dec_dims[MARKOV_K] == 1


def test_mutate_rep_a2_projective_to_simple():
    out = mutate_rep(a2_p1(), 2)
    assert out.dims == {1: 1, 2: 0}
    assert out.dec_dims == {1: 0, 2: 0}


def test_scrambled_choices_give_isomorphic_premutation(markov):
    rng = random.Random(137)
    m = random_valid_module(markov, rng, max_dim=3)
    reduced, phi, _ = mutate_qp(markov, MARKOV_K)
    out1 = pullback_reduction(premutate_rep(m, MARKOV_K).rep, phi, reduced)
    out2 = pullback_reduction(
        premutate_rep(m, MARKOV_K, scramble_seed=99).rep, phi, reduced
    )
    res = is_isomorphic(out1, out2, seed=5)
    assert res.verdict == YES


def test_transport_iso_identity(markov):
    rng = random.Random(139)
    m = random_valid_module(markov, rng, max_dim=3)
    ident = {v: Mat.identity(QQ, m.dims[v]) for v in markov.quiver.vertices}
    pm_m, pm_n, f = transport_iso(m, m, ident, MARKOV_K)
    for v in markov.quiver.vertices:
        assert f[v] == Mat.identity(QQ, pm_m.rep.dims[v])


def test_transport_iso_scalar(markov):
    rng = random.Random(149)
    m = random_valid_module(markov, rng, max_dim=3)
    lam = QQ.of(3)
    g = {v: Mat.identity(QQ, m.dims[v]).scale(lam) for v in markov.quiver.vertices}
    pm_m, pm_n, f = transport_iso(m, m, g, MARKOV_K)
    t = pm_m.triangle
    c = t.dim_cokerbeta
    q2 = t.dim_keralpha_mod_imgamma
    # the correction block vanishes for scalar maps
    eps_block = [
        f[MARKOV_K].data[i][c + j] for i in range(c) for j in range(q2)
    ]
    assert all(x == QQ.zero for x in eps_block)


def test_transport_iso_random_base_change(markov):
    rng = random.Random(151)
    for _ in range(3):
        m = random_valid_module(markov, rng, max_dim=3)
        n, g = base_change(m, rng)
        pm_m, pm_n, f = transport_iso(m, n, g, MARKOV_K)
        # already verified inside; transported map stays an iso after pullback
        reduced, phi, _ = mutate_qp(markov, MARKOV_K)
        red_m = pullback_reduction(pm_m.rep, phi, reduced)
        red_n = pullback_reduction(pm_n.rep, phi, reduced)
        from qpmut.mutation import is_intertwiner

        assert is_intertwiner(red_m, red_n, f)


def test_involution_pullback_markov(markov):
    rng = random.Random(157)
    for _ in range(2):
        m = random_valid_module(markov, rng, max_dim=2)
        w = involution_pullback(m, MARKOV_K)
        assert w.qp == markov
        res = is_isomorphic(w, m, seed=9)
        assert res.verdict == YES
        assert w.dec_dims == m.dec_dims


def test_involution_pullback_simples(markov):
    for j in markov.quiver.vertices:
        m = simple_rep(markov, j)
        w = involution_pullback(m, MARKOV_K)
        assert is_isomorphic(w, m).verdict == YES
    m = negative_simple_rep(markov, MARKOV_K)
    w = involution_pullback(m, MARKOV_K)
    assert is_isomorphic(w, m).verdict == YES
