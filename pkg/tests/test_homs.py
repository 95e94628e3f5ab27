"""Intertwiner spaces and the certified isomorphism test."""

import random

import pytest

from conftest import markov_qp
from qpmut import (
    ContextError,
    DecRep,
    Mat,
    NO,
    QQ,
    UNDECIDED,
    YES,
    hom_space,
    is_isomorphic,
    simple_rep,
)
from qpmut.generate import base_change, random_valid_module


def test_self_iso_is_yes(markov):
    rng = random.Random(201)
    m = random_valid_module(markov, rng, max_dim=3)
    res = is_isomorphic(m, m)
    assert res.verdict == YES
    # certificate re-verified: it intertwines and inverts
    for v in markov.quiver.vertices:
        assert res.certificate[v].is_invertible()


def test_different_dim_vectors_is_no(markov):
    s1 = simple_rep(markov, 1)
    s2 = simple_rep(markov, 2)
    res = is_isomorphic(s1, s2)
    assert res.verdict == NO
    assert "dimension" in res.obstruction


def test_different_decorations_is_no(markov):
    m1 = DecRep(markov, {1: 0, 2: 0, 3: 0}, {}, {1: 1, 2: 0, 3: 0})
    m2 = DecRep(markov, {1: 0, 2: 0, 3: 0}, {}, {1: 0, 2: 1, 3: 0})
    assert is_isomorphic(m1, m2).verdict == NO


def test_base_change_is_yes(markov):
    rng = random.Random(203)
    for _ in range(5):
        m = random_valid_module(markov, rng, max_dim=4)
        n, g = base_change(m, rng)
        # the conjugating map itself is a planted certificate
        from qpmut.mutation import is_intertwiner
        assert is_intertwiner(m, n, g)
        assert all(g[v].is_invertible() for v in markov.quiver.vertices)
        res = is_isomorphic(m, n, seed=1)
        assert res.verdict == YES


def test_nonisomorphic_same_dims(markov):
    # the direct sum of two simples never matches an indecomposable with the
    # same dimension vector
    from conftest import a2_qp
    qp = a2_qp()
    split = DecRep(qp, {1: 1, 2: 1}, {"a": Mat.zero(QQ, 1, 1)}, {1: 0, 2: 0})
    joined = DecRep(qp, {1: 1, 2: 1}, {"a": Mat.identity(QQ, 1)}, {1: 0, 2: 0})
    res = is_isomorphic(split, joined)
    assert res.verdict == NO


def test_hom_space_counts(markov):
    rng = random.Random(207)
    m = random_valid_module(markov, rng, max_dim=3)
    h = hom_space(m, m)
    assert h.dim >= 1  # contains the identity
    for b in h.basis:
        for a in markov.quiver.arrows:
            assert b[a.head] @ m.maps[a.id] == m.maps[a.id] @ b[a.tail]


def test_context_mismatch_raises(markov):
    from conftest import a2_qp
    m = simple_rep(markov, 1)
    n = simple_rep(a2_qp(), 1)
    with pytest.raises(ContextError):
        is_isomorphic(m, n)


def test_zero_modules_isomorphic(markov):
    from qpmut import zero_rep
    assert is_isomorphic(zero_rep(markov), zero_rep(markov)).verdict == YES
