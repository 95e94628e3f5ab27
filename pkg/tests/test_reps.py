"""Decorated representations: module checks, jet actions, triangles."""

import random

import pytest

from conftest import a2_qp, markov_qp, MARKOV_K
from qpmut import (
    DecRep,
    Mat,
    QQ,
    TruncationTooSmall,
    build_triangle,
    check_module,
    component_action,
    cyclic_derivative,
    path_action,
    simple_rep,
)
from qpmut.generate import random_valid_module, truncated_projective
from qpmut.reps import path_matrix


def a2_p1():
    """The projective at the source of the one-arrow quiver: k -> k."""
    qp = a2_qp()
    return DecRep(qp, {1: 1, 2: 1}, {"a": Mat.identity(QQ, 1)}, {1: 0, 2: 0})


def test_simple_module_passes():
    qp = markov_qp()
    for j in qp.quiver.vertices:
        assert check_module(simple_rep(qp, j)).ok


def test_violating_module_fails_with_witness():
    qp = markov_qp()
    dims = {1: 1, 2: 1, 3: 1}
    maps = {
        "a1": Mat.identity(QQ, 1),
        "b1": Mat.identity(QQ, 1),
    }
    rep = DecRep(qp, dims, maps, {1: 0, 2: 0, 3: 0})
    rpt = check_module(rep)
    assert not rpt.ok
    # d/d(c1) = b1 a1 acts by 1 on the 1 -> ... -> 2 route
    assert any("c1" in f for f in rpt.failures)


def test_generated_modules_pass(markov):
    rng = random.Random(17)
    for _ in range(5):
        m = random_valid_module(markov, rng, max_dim=4)
        assert check_module(m).ok


def test_truncated_projective_is_valid(markov):
    for ell in markov.quiver.vertices:
        for power in (1, 2, 3):
            m = truncated_projective(markov, ell, power)
            assert check_module(m).ok
            assert m.nilpotency_index() <= power


def test_nilpotency_rejects_invertible_cycle():
    qp = markov_qp()
    dims = {1: 1, 2: 1, 3: 1}
    maps = {
        "a1": Mat.identity(QQ, 1),
        "b1": Mat.identity(QQ, 1),
        "c1": Mat.identity(QQ, 1),
    }
    rep = DecRep(qp, dims, maps, {1: 0, 2: 0, 3: 0})
    assert not rep.is_nilpotent()
    assert not check_module(rep).ok


def test_markov_module_solved_by_linear_algebra(markov):
    """Build a module by solving the derivative relations linearly:
    random maps into the mutation vertex, outgoing maps from the left
    annihilator, and return maps from the two-sided linear solution space."""
    from qpmut.linalg import hstack, vstack

    rng = random.Random(47)
    built = 0
    attempts = 0
    while built < 3 and attempts < 200:
        attempts += 1
        d1, d2, d3 = rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3)
        maps = {}
        ok = True
        for i in ("1", "2"):
            a = Mat(QQ, [[QQ.of(rng.randint(-1, 1)) for _ in range(d1)] for _ in range(d3)])
            # rows of b must kill the image of a
            left_null = a.T.kernel_basis()  # columns: vectors v with v^T a = 0
            if left_null.cols == 0:
                b = Mat.zero(QQ, d2, d3)
            else:
                coeffs = Mat(QQ, [[QQ.of(rng.randint(-1, 1)) for _ in range(left_null.cols)]
                                  for _ in range(d2)])
                b = coeffs @ left_null.T
            # c solves a @ c = 0 and c @ b = 0, a linear system in c's entries
            rows = []
            for p in range(d3):
                for q in range(d2):
                    row = [QQ.zero] * (d1 * d2)
                    for r in range(d1):
                        if a.data[p][r]:
                            row[r * d2 + q] += a.data[p][r]
                    rows.append(row)
            for p in range(d1):
                for q in range(d3):
                    row = [QQ.zero] * (d1 * d2)
                    for s in range(d2):
                        if b.data[s][q]:
                            row[p * d2 + s] += b.data[s][q]
                    rows.append(row)
            system = Mat(QQ, rows) if rows else Mat.zero(QQ, 0, d1 * d2)
            sol = system.kernel_basis()
            c = Mat.zero(QQ, d1, d2)
            if sol.cols:
                weights = [QQ.of(rng.randint(-1, 1)) for _ in range(sol.cols)]
                vec = [sum((w * sol.data[idx][j] for j, w in enumerate(weights)), QQ.zero)
                       for idx in range(d1 * d2)]
                c = Mat(QQ, [[vec[p * d2 + s] for s in range(d2)] for p in range(d1)])
            maps[f"a{i}"] = a
            maps[f"b{i}"] = b
            maps[f"c{i}"] = c
        rep = DecRep(markov, {1: d1, 2: d2, 3: d3}, maps, {1: 0, 2: 0, 3: 0})
        if not rep.is_nilpotent():
            continue
        assert check_module(rep).ok
        built += 1
    assert built == 3


def test_path_action_idempotent_is_projection(markov):
    rng = random.Random(23)
    m = random_valid_module(markov, rng, max_dim=3)
    u = markov.space.idempotent(1)
    act = path_action(m, u)
    total = m.total_dim()
    assert act.rows == total == act.cols
    assert act @ act == act
    assert act.rank() == m.dims[1]


def test_path_action_lengths_beyond_nilpotency_vanish(markov):
    rng = random.Random(29)
    m = random_valid_module(markov, rng, max_dim=3)
    idx = m.nilpotency_index()
    word = ("c1", "b1", "a1") * ((idx // 3) + 1)
    word = word[: max(idx, 1)]
    # build a valid path of length >= idx by walking the triangle cycle
    long_word = ("c1", "b1", "a1") * (idx + 1)
    mat = path_matrix(m, long_word[: 3 * (idx // 3 + 1)], 1, 1)
    assert mat.is_zero()


def test_path_action_annihilates_derivatives(markov):
    rng = random.Random(31)
    m = random_valid_module(markov, rng, max_dim=4)
    for a in markov.quiver.arrows:
        d = cyclic_derivative(markov.potential, a.id)
        assert component_action(m, d, a.tail, a.head).is_zero()
        assert path_action(m, d).is_zero()


def test_path_action_guards_truncation():
    from qpmut import JetSpace, Potential, QP
    from conftest import markov_quiver
    from qpmut.cycles import cyclic_normalize

    q = markov_quiver()
    space = JetSpace(q, 3, QQ)
    qp = QP(q, cyclic_normalize(space.path(("c1", "b1", "a1")) + space.path(("c2", "b2", "a2"))))
    m = truncated_projective(qp, 1, 5)
    if m.nilpotency_index() > 3:
        with pytest.raises(TruncationTooSmall):
            path_action(m, qp.space.idempotent(1))


def test_triangle_simple_at_vertex(markov):
    m = simple_rep(markov, MARKOV_K)
    t = build_triangle(m, MARKOV_K)
    assert t.d_in == 0 and t.d_out == 0
    assert t.ker_alpha.cols == 0
    assert t.dim_cokerbeta == 0
    assert t.dim_new_decoration == 1  # ker beta = M_k


def test_triangle_a2_projective():
    m = a2_p1()
    t = build_triangle(m, 2)
    assert t.alpha == Mat.identity(QQ, 1)
    assert t.beta.rows == 0
    assert t.gamma.cols == 0
    assert t.ker_alpha.cols == 0


def test_triangle_identities_markov(markov):
    rng = random.Random(37)
    for _ in range(5):
        m = random_valid_module(markov, rng, max_dim=4)
        t = build_triangle(m, MARKOV_K)
        assert (t.alpha @ t.gamma).is_zero()
        assert (t.gamma @ t.beta).is_zero()
        # retraction/section one-sided identities
        if t.ker_gamma.cols:
            assert t.rho @ t.ker_gamma == Mat.identity(QQ, t.ker_gamma.cols)
        if t.pi2.rows:
            assert t.pi2 @ t.sigma == Mat.identity(QQ, t.pi2.rows)
        if t.coker_p.rows:
            assert t.coker_p @ t.coker_sec == Mat.identity(QQ, t.coker_p.rows)
        # the section of the derivative map splits it exactly
        if t.im_gamma.cols:
            assert t.gamma @ t.s_section == t.im_gamma
            assert (t.rho @ t.s_section).is_zero()


def test_path_action_is_ring_morphism(markov):
    rng = random.Random(41)
    m = random_valid_module(markov, rng, max_dim=3)
    space = markov.space
    words = [("a1",), ("b1",), ("c1",), ("b1", "a1"), ("c1", "b1", "a1"), ()]
    for _ in range(20):
        w1, w2 = rng.choice(words), rng.choice(words)
        u = space.idempotent(rng.choice((1, 2, 3))) if w1 == () else space.path(w1)
        v = space.idempotent(rng.choice((1, 2, 3))) if w2 == () else space.path(w2)
        assert path_action(m, u * v) == path_action(m, u) @ path_action(m, v)
