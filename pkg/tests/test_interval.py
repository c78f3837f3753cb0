import random

import pytest

from cubical.interval import (
    IONE,
    IZERO,
    Interval,
    fresh_name,
    iand,
    ieq,
    ineg,
    inorm,
    ior,
    isubst,
    ivar,
)

from oracles import interval_table, random_interval_expr

I, J, K = fresh_name("i"), fresh_name("j"), fresh_name("k")
vi, vj, vk = ("var", I), ("var", J), ("var", K)


def test_de_morgan_push():
    # 1 - (i \/ j) = -i /\ -j
    assert inorm(("neg", ("or", vi, vj))) == iand(ineg(ivar(I)), ineg(ivar(J)))


def test_lattice_units():
    assert inorm(("and", vi, ("one",))) == ivar(I)
    assert inorm(("or", vi, ("zero",))) == ivar(I)
    assert inorm(("and", vi, ("zero",))) == IZERO
    assert inorm(("or", vi, ("one",))) == IONE


def test_absorption():
    # i \/ (i /\ j) = i, checked against the independent-literal oracle too
    e = ("or", vi, ("and", vi, vj))
    assert inorm(e) == ivar(I)
    assert interval_table(e, [I, J]) == interval_table(vi, [I, J])


def test_meet_of_complements_not_zero():
    r = inorm(("and", vi, ("neg", vi)))
    assert not ieq(r, IZERO)
    assert not ieq(inorm(("or", vi, ("neg", vi))), IONE)


def test_distributivity():
    lhs = inorm(("and", vi, ("or", vj, vk)))
    rhs = inorm(("or", ("and", vi, vj), ("and", vi, vk)))
    assert ieq(lhs, rhs)


def test_involution():
    for e in [vi, ("and", vi, vj), ("or", ("neg", vi), vj)]:
        r = inorm(e)
        assert ineg(ineg(r)) == r


def test_subst_endpoint():
    # (i /\ j)[i:=1] = j
    assert isubst(iand(ivar(I), ivar(J)), I, IONE) == ivar(J)
    assert isubst(iand(ivar(I), ivar(J)), I, IZERO) == IZERO


def test_subst_identity():
    r = inorm(("or", ("and", vi, ("neg", vj)), vk))
    assert isubst(r, I, ivar(I)) == r


def test_subst_expand():
    # (i \/ -i)[i := j /\ k] = (j /\ k) \/ -j \/ -k
    r = ior(ivar(I), ineg(ivar(I)))
    expected = ior(iand(ivar(J), ivar(K)), ior(ineg(ivar(J)), ineg(ivar(K))))
    assert isubst(r, I, iand(ivar(J), ivar(K))) == expected


def test_subst_is_endomorphism():
    rng = random.Random(7)
    for _ in range(200):
        r = random_interval_expr(rng, [I, J], 3)
        s = random_interval_expr(rng, [I, J], 3)
        t = random_interval_expr(rng, [J, K], 3)
        rn, sn, tn = inorm(r), inorm(s), inorm(t)
        assert isubst(iand(rn, sn), I, tn) == iand(isubst(rn, I, tn), isubst(sn, I, tn))
        assert isubst(ior(rn, sn), I, tn) == ior(isubst(rn, I, tn), isubst(sn, I, tn))
        assert isubst(ineg(rn), I, tn) == ineg(isubst(rn, I, tn))


def test_subst_composition():
    rng = random.Random(11)
    for _ in range(200):
        r = inorm(random_interval_expr(rng, [I, J], 4))
        s = inorm(random_interval_expr(rng, [J], 2))
        t = inorm(random_interval_expr(rng, [K], 2))
        # i and j distinct, i not in support(t)
        lhs = isubst(isubst(r, I, s), J, t)
        rhs = isubst(isubst(r, J, t), I, isubst(s, J, t))
        assert lhs == rhs


def test_idempotent_on_random_expressions():
    rng = random.Random(3)
    for _ in range(300):
        e = random_interval_expr(rng, [I, J, K], 4)
        r = inorm(e)
        assert inorm(r) == r


def test_oracle_completeness_random():
    """ieq must agree with the monotone truth-table oracle."""
    rng = random.Random(5)
    names = [I, J, K]
    for _ in range(400):
        e1 = random_interval_expr(rng, names, 4)
        e2 = random_interval_expr(rng, names, 4)
        assert ieq(inorm(e1), inorm(e2)) == (
            interval_table(e1, names) == interval_table(e2, names)
        )


def test_canonical_invariants():
    rng = random.Random(13)
    for _ in range(300):
        r = inorm(random_interval_expr(rng, [I, J], 4))
        if r.is_const():
            continue
        assert r.clauses, "DNF must be non-empty"
        for c in r.clauses:
            assert c, "clauses must be non-empty"
            assert not any(o < c for o in r.clauses), "antichain violated"
