import random

from cubical.face import (
    FBOT,
    FTOP,
    boundary,
    fand,
    fatom,
    feq,
    ffaces,
    fforall,
    fleq,
    fnorm,
    for_,
    fsubst,
    toface,
)
from cubical.interval import IONE, IZERO, fresh_name, iand, ineg, inorm, isubst, ivar

from oracles import face_table, random_face_expr, random_interval_expr, interval_table

I, J, K = fresh_name("i"), fresh_name("j"), fresh_name("k")


def test_contradictory_atoms_collapse():
    assert fand(fatom(I, 0), fatom(I, 1)) == FBOT


def test_lattice_units():
    phi = for_(fatom(I, 0), fatom(J, 1))
    assert for_(phi, FBOT) == phi
    assert fand(phi, FTOP) == phi
    assert fand(phi, FBOT) == FBOT
    assert for_(phi, FTOP) == FTOP


def test_distribution_with_collapse():
    # ((i=0) \/ (j=1)) /\ ((i=0) \/ (j=0)) = (i=0)
    lhs = fand(for_(fatom(I, 0), fatom(J, 1)), for_(fatom(I, 0), fatom(J, 0)))
    assert lhs == fatom(I, 0)


def test_fleq_examples():
    assert fleq(fand(fatom(I, 0), fatom(J, 1)), fatom(I, 0))
    assert not fleq(fatom(I, 0), fatom(I, 1))


def test_fleq_restriction_vs_subst():
    # phi /\ (i=0) <= phi(i0) on random formulas
    rng = random.Random(23)
    for _ in range(300):
        phi = fnorm(random_face_expr(rng, [I, J, K], 4))
        assert fleq(fand(phi, fatom(I, 0)), fsubst(phi, I, IZERO))
        assert fleq(fand(phi, fatom(I, 1)), fsubst(phi, I, IONE))


def test_toface():
    assert toface(ivar(I)) == fatom(I, 1)
    assert toface(ineg(ivar(I))) == fatom(I, 0)
    assert toface(iand(ivar(I), ineg(ivar(I)))) == FBOT
    assert toface(IZERO) == FBOT and toface(IONE) == FTOP


def test_toface_homomorphism():
    rng = random.Random(29)
    for _ in range(200):
        r = inorm(random_interval_expr(rng, [I, J], 3))
        s = inorm(random_interval_expr(rng, [I, J], 3))
        assert toface(iand(r, s)) == fand(toface(r), toface(s))
        assert toface(ineg(r)) == toface(ineg(r))
        assert fand(toface(r), toface(ineg(r))) == FBOT


def test_fsubst():
    assert fsubst(fatom(I, 1), I, iand(ivar(J), ivar(K))) == fand(fatom(J, 1), fatom(K, 1))
    assert fsubst(fatom(J, 0), I, ivar(K)) == fatom(J, 0)
    assert fsubst(for_(fatom(I, 0), fatom(I, 1)), I, IZERO) == FTOP


def test_fsubst_commutes_with_toface():
    rng = random.Random(31)
    for _ in range(200):
        r = inorm(random_interval_expr(rng, [I, J], 3))
        s = inorm(random_interval_expr(rng, [J, K], 3))
        assert toface(isubst(r, I, s)) == fsubst(toface(r), I, s)


def test_forall_golden():
    phi = for_(fatom(I, 0), for_(fand(fatom(I, 1), fatom(J, 0)), fatom(J, 1)))
    assert fforall(I, phi) == fatom(J, 1)


def test_forall_trivial():
    assert fforall(I, fatom(J, 1)) == fatom(J, 1)
    assert fforall(I, fatom(I, 0)) == FBOT


def test_decomposition_lemma():
    # phi = forall i.phi \/ (phi /\ (i=0)) \/ (phi /\ (i=1))
    rng = random.Random(37)
    for _ in range(500):
        phi = fnorm(random_face_expr(rng, [I, J, K], 4))
        rebuilt = for_(fforall(I, phi), for_(fand(phi, fatom(I, 0)), fand(phi, fatom(I, 1))))
        assert feq(phi, rebuilt)


def test_galois():
    rng = random.Random(41)
    for _ in range(500):
        phi = fnorm(random_face_expr(rng, [I, J, K], 4))
        psi = fnorm(random_face_expr(rng, [J, K], 3))  # independent of I
        assert fleq(psi, phi) == fleq(psi, fforall(I, phi))


def test_ffaces():
    phi = for_(fatom(I, 0), fatom(J, 1))
    assert ffaces(phi) == [frozenset({(I, 0)}), frozenset({(J, 1)})]
    assert ffaces(FTOP) == [frozenset()]
    assert ffaces(FBOT) == []
    assert ffaces(boundary([I, J])) == [
        frozenset({(I, 0)}),
        frozenset({(I, 1)}),
        frozenset({(J, 0)}),
        frozenset({(J, 1)}),
    ]


def test_oracle_equivalence_random():
    rng = random.Random(43)
    names = [I, J, K]
    for _ in range(400):
        e1 = random_face_expr(rng, names, 4)
        e2 = random_face_expr(rng, names, 4)
        t1, t2 = face_table(e1, names), face_table(e2, names)
        assert feq(fnorm(e1), fnorm(e2)) == (t1 == t2)
        assert fleq(fnorm(e1), fnorm(e2)) == (t1 & ~t2 == 0)


def test_idempotent():
    rng = random.Random(47)
    for _ in range(200):
        phi = fnorm(random_face_expr(rng, [I, J], 4))
        assert fnorm(phi) == phi
