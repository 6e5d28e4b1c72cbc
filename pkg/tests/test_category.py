import random

import pytest

from karex.category import FreeModCategory, MorProblem
from karex.karoubi import KaroubiCategory, WhcCategory, whc_member
from karex.zmod import Mat


@pytest.fixture
def F6():
    return FreeModCategory(6)


@pytest.fixture
def K6(F6):
    return KaroubiCategory(F6)


def test_freemod_compose_and_laws(F6):
    f = F6.make(1, 1, [[3]])
    g = F6.make(1, 1, [[2]])
    assert (g @ f).data == Mat.from_rows(6, [[0]])
    assert F6.identity(2).data == Mat.identity(6, 2)
    rng = random.Random(0)
    for _ in range(40):
        a, b, c, d = (rng.randrange(0, 3) for _ in range(4))
        f = F6.random_mor(a, b, rng)
        g = F6.random_mor(b, c, rng)
        h = F6.random_mor(c, d, rng)
        assert (h @ g) @ f == h @ (g @ f)
        assert F6.identity(b) @ f == f
        assert f @ F6.identity(a) == f
        f2 = F6.random_mor(a, b, rng)
        assert g @ (f + f2) == g @ f + g @ f2


def test_freemod_biproduct(F6):
    bp = F6.biproduct(1, 2)
    assert bp.obj == 3
    assert bp.check()
    bp0 = F6.biproduct(2, 0)
    assert bp0.obj == 2 and bp0.check()


def test_hom_enumeration(F6):
    assert len(F6.hom_elements(1, 1)) == 6
    F2 = FreeModCategory(2)
    assert len(F2.hom_elements(2, 1)) == 4
    with pytest.raises(ValueError):
        F6.hom_elements(2, 2, cap=10)


def test_pre_post_matrices_agree_with_composition(F6):
    rng = random.Random(1)
    for _ in range(30):
        a, b, c = (rng.randrange(1, 3) for _ in range(3))
        f = F6.random_mor(a, b, rng)
        h = F6.random_mor(b, c, rng)
        # h o f via pre-matrix applied to raw(h)
        raw = F6.raw_of(h) @ F6.pre_matrix(f, c)
        assert F6.mor_from_raw(a, c, raw) == h @ f
        raw2 = F6.raw_of(f) @ F6.post_matrix(h, a)
        assert F6.mor_from_raw(a, c, raw2) == h @ f


def test_mor_problem_solves_conjugation(F6):
    # find x with 2x = 4 (mod 6): solutions {2, 5}; canonical first
    prob = MorProblem(F6)
    x = prob.unknown(1, 1)
    prob.add_eq([(x, F6.make(1, 1, [[2]]), None, 1)], F6.make(1, 1, [[4]]))
    sol = prob.solve()
    got = sol.mor(x)
    assert F6.make(1, 1, [[2]]) @ got == F6.make(1, 1, [[4]])


def test_find_splitting_freemod(F6):
    # identity splits through itself
    e = F6.identity(2)
    sp = F6.find_splitting(e, bound=2)
    assert sp is not None and sp.obj == 2
    # [3] over Z/6 admits no splitting with ranks <= 3
    e3 = F6.make(1, 1, [[3]])
    assert F6.find_splitting(e3, bound=3) is None
    # diag(1, 0) splits through rank 1
    e10 = F6.make(2, 2, [[1, 0], [0, 0]])
    sp = F6.find_splitting(e10, bound=2)
    assert sp is not None and sp.obj == 1 and sp.check(e10)


def test_karoubi_composition_and_identity(F6, K6):
    X = K6.obj(1, F6.make(1, 1, [[3]]))
    idX = K6.identity(X)
    assert K6.underlying(idX) == F6.make(1, 1, [[3]])
    # (e, e, e) o (e, r, e) = (e, re, e)
    r = K6.induced(X, X, F6.make(1, 1, [[3]]))
    assert idX @ r == r
    # hom((1,3),(1,3)) = 3 Z/6 3 = {0, 3}
    assert len(K6.hom_elements(X, X)) == 2


def test_karoubi_biproduct_blocks(F6, K6):
    X = K6.obj(1, F6.make(1, 1, [[3]]))
    Y = K6.obj(1, F6.make(1, 1, [[4]]))
    bp = K6.biproduct(X, Y)
    assert bp.obj.base == 2
    assert K6.underlying(K6.identity(bp.obj)) == F6.make(2, 2, [[3, 0], [0, 4]])
    assert bp.check()


def test_karoubi_idempotents_split_constructively(F6, K6):
    Xfull = K6.include_obj(1)
    e = K6.induced(Xfull, Xfull, F6.make(1, 1, [[3]]))
    assert e.is_idempotent()
    sp = K6.find_splitting(e)
    assert sp is not None
    assert sp.obj == K6.obj(1, F6.make(1, 1, [[3]]))
    assert sp.check(e)


def test_iota_pi_summand_witnesses(F6, K6):
    X = K6.obj(1, F6.make(1, 1, [[3]]))
    iota, pi = K6.iota(X), K6.pi(X)
    assert pi @ iota == K6.identity(X)
    comp = K6.obj(1, F6.make(1, 1, [[4]]))  # id - e
    iota2, pi2 = K6.iota(comp), K6.pi(comp)
    full = K6.include_obj(1)
    assert iota @ pi + iota2 @ pi2 == K6.identity(full)


def test_whc_membership(F6, K6):
    # (X, id): complement 0 splits through zero object
    assert whc_member(K6, K6.include_obj(1), bound=3) is not None
    # (1, [3]): complement [4] has image Z/3, not free -> not a member
    X3 = K6.obj(1, F6.make(1, 1, [[3]]))
    assert whc_member(K6, X3, bound=3) is None
    # (2, diag(3,4)): complement diag(4,3) has image Z/3+Z/2 = Z/6 free -> member
    Xd = K6.obj(2, F6.make(2, 2, [[3, 0], [0, 4]]))
    w = whc_member(K6, Xd, bound=3)
    assert w is not None and w.obj == 1


def test_whc_category_objects(F6):
    W = WhcCategory(F6, member_bound=3)
    objs = W.objects_upto(1)
    # rank 1 idempotents are 0,1,3,4; only (1,0) and (1,1) are members,
    # plus the rank-0 zero object
    assert len(objs) == 3
    assert all(X.e.data.entries() not in {(3,), (4,)} for X in objs)
    X = W.include_obj(1)
    assert W.identity(X) @ W.identity(X) == W.identity(X)


def test_karoubi_inverse_of(F6, K6):
    # (1,[1]) and (2, diag(1,0)) are isomorphic
    X = K6.include_obj(1)
    Y = K6.obj(2, F6.make(2, 2, [[1, 0], [0, 0]]))
    f = K6.make(X, Y, F6.make(1, 2, [[1], [0]]))
    inv = K6.inverse_of(f)
    assert inv is not None
    assert inv @ f == K6.identity(X)
    assert f @ inv == K6.identity(Y)
