"""The whole pipeline over a prime field."""

import random

from conftest import markov_qp, MARKOV_K
from qpmut import (
    GF,
    YES,
    check_module,
    cyclic_derivative,
    duality_witness,
    is_isomorphic,
    mutate_qp,
    mutate_rep,
    split_reduce,
    premutate_qp,
)
from qpmut.generate import random_qp, random_valid_module
from qpmut.mutation import involution_pullback


F7 = GF(7)


def test_field_arithmetic():
    a = F7.of(3)
    b = F7.of(5)
    assert a + b == F7.of(1)
    assert a * b == F7.of(1)
    assert a / b == a * F7.of(3)  # 5^{-1} = 3 mod 7
    assert -a == F7.of(4)
    assert bool(F7.of(7)) is False


def test_markov_reduction_over_f7():
    qp = markov_qp(field=F7)
    red, phi, triv = mutate_qp(qp, MARKOV_K)
    assert {a.id for a in triv.quiver.arrows} == {"c1", "c2", "[b1a1]", "[b2a2]"}
    s = premutate_qp(qp, MARKOV_K).space
    assert phi.images["c1"] == s.arrow("c1") + s.path(("a1*", "b1*"))


def test_random_reductions_over_f7():
    rng = random.Random(401)
    for _ in range(10):
        qp = random_qp(rng, max_vertices=4, max_arrows=7, max_terms=5,
                       max_len=4, order=10, field=F7)
        assert split_reduce(qp).certificate.ok


def test_module_mutation_over_f7():
    rng = random.Random(403)
    qp = markov_qp(field=F7)
    m = random_valid_module(qp, rng, max_dim=2)
    assert check_module(m).ok
    out = mutate_rep(m, MARKOV_K)
    assert check_module(out).ok
    w = involution_pullback(m, MARKOV_K)
    assert is_isomorphic(w, m, seed=11).verdict == YES
    assert duality_witness(m, MARKOV_K).ok
