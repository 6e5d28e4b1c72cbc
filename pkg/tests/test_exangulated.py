import random

import pytest

from karex.category import FreeModCategory
from karex.complexes import ComplexN, direct_sum, identity_chain_map, triv, zero_chain_map
from karex.exangulated import (
    Exangle,
    Scope,
    act_left,
    act_right,
    check_axioms,
    ext_direct_sum,
    find_lift,
    is_attached,
    is_ext_morphism,
    is_good_lift,
    is_n_exangle,
    is_realization,
)
from karex.kb import KbCategory
from karex.structures import KbStructure, SplitStructure
from karex.zmod import Mat


@pytest.fixture
def F6():
    return FreeModCategory(6)


@pytest.fixture
def S6(F6):
    return SplitStructure(F6, 1)


@pytest.fixture
def Kb6():
    return KbCategory(6, len_bound=2, rank_bound=1)


@pytest.fixture
def SK(Kb6):
    return KbStructure(Kb6)


def test_split_realize_is_split_complex(S6, F6):
    d = S6.zero_ext(1, 1)
    X = S6.realize(d)
    assert X.objs == (1, 2, 1)
    # R2 shapes collapse to trivial complexes
    z = S6.zero_ext(0, 1)
    assert S6.realize(z) == triv(F6, 1, 0, 1)
    z2 = S6.zero_ext(1, 0)
    assert S6.realize(z2) == triv(F6, 1, 1, 1)


def test_split_exangle_checks(S6, F6):
    d = S6.zero_ext(1, 1)
    x = Exangle(S6.realize(d), d)
    assert is_attached(x)
    ok, why = is_n_exangle(x, [1])
    assert ok, why
    # zero complex with zero extension is an exangle
    zx = Exangle(triv(F6, 1, 0, 0), S6.zero_ext(0, 0))
    assert is_n_exangle(zx, [1])[0]
    # complex with d_0 = 0 and X_0 != 0 is not an exangle
    bad = ComplexN(F6, 1, [1, 0, 0], [F6.zero_mor(1, 0), F6.zero_mor(0, 0)])
    badx = Exangle(bad, S6.zero_ext(0, 1))
    ok, why = is_n_exangle(badx, [1])
    assert not ok


def test_split_inflation_witness(S6, F6):
    # split mono [1 0]^T : 1 -> 2
    f = F6.make(1, 2, [[1], [0]])
    w = S6.inflation_witness(f)
    assert w is not None and w.inflation == f
    assert is_n_exangle(w, [1])[0]
    # [3] is not an inflation: not even a split mono
    assert S6.inflation_witness(F6.make(1, 1, [[3]])) is None
    # identity is an inflation with zero complement
    w2 = S6.inflation_witness(F6.identity(1))
    assert w2 is not None


def test_split_find_lift_diagonal(S6, F6):
    a = F6.make(1, 1, [[2]])
    c = F6.make(1, 1, [[5]])
    d = S6.zero_ext(1, 1)
    rho = S6.zero_ext(1, 1)
    assert is_ext_morphism(a, c, d, rho)
    f = find_lift(a, c, d, rho)
    assert f is not None
    assert f.mors[0] == a and f.mors[2] == c


def test_split_good_lift(S6, F6):
    d = S6.zero_ext(1, 1)
    c = F6.make(1, 1, [[4]])
    f = S6.good_lift(d, c)
    assert f is not None
    assert is_good_lift(f, d)
    # identity lift on c = id is good
    fid = S6.good_lift(d, F6.identity(1))
    assert fid is not None and is_good_lift(fid, d)


def test_kb_extension_group_nonzero(SK, Kb6):
    A = Kb6.stalk(1, 0)
    # E(A, A) = [A, Sigma A] = 0 for stalks in the same degree...
    assert SK.ext_group(A, A).size() == 1
    # ...but E(C, A) is a full group when A sits one degree above C
    A1 = Kb6.stalk(1, 1)
    assert SK.ext_group(A, A1).size() == 6


def test_kb_actions_commute(SK, Kb6):
    rng = random.Random(0)
    A = Kb6.stalk(1, 1)
    B = Kb6.complex(1, [1, 1], [[[2]]])
    C = Kb6.stalk(1, 0)
    D = Kb6.complex(0, [1, 1], [[[3]]])
    for _ in range(25):
        delta = SK.random_extension(C, A, rng)
        a = Kb6.random_mor(A, B, rng)
        d = Kb6.random_mor(D, C, rng)
        lhs = act_right(d, act_left(a, delta))
        rhs = act_left(a, act_right(d, delta))
        assert lhs == rhs
        assert act_left(Kb6.identity(A), delta) == delta
        assert act_left(Kb6.zero_mor(A, B), delta).is_zero()


def test_kb_realize_r2_and_exangles(SK, Kb6):
    A = Kb6.stalk(1, 0)
    z = SK.zero_ext(Kb6.zero_obj(), A)
    assert SK.realize(z) == triv(Kb6, 1, 0, A)
    z2 = SK.zero_ext(A, Kb6.zero_obj())
    assert SK.realize(z2) == triv(Kb6, 1, 1, A)
    # a nonzero extension realises to an exangle
    A1 = Kb6.stalk(1, 1)
    tobs = [o for o in Kb6.objects_upto(2) if o.ranks][:6]
    for delta in SK.extensions_of(A, A1)[:6]:
        x = Exangle(SK.realize(delta), delta)
        ok, why = is_n_exangle(x, tobs)
        assert ok, f"{delta}: {why}"


def test_kb_inflation_witness_distinguished(SK, Kb6):
    A = Kb6.stalk(1, 0)
    f = Kb6.scale(Kb6.identity(A), 2)
    w = SK.inflation_witness(f)
    assert w is not None and w.inflation == f
    tobs = [o for o in Kb6.objects_upto(2) if o.ranks][:4]
    ok, why = is_n_exangle(w, tobs)
    assert ok, why
    assert is_realization(SK, w.complex, w.ext)


def test_kb_deflation_witness_distinguished(SK, Kb6):
    A = Kb6.stalk(1, 0)
    f = Kb6.scale(Kb6.identity(A), 3)
    w = SK.deflation_witness(f)
    assert w is not None and w.deflation == f
    assert is_attached(w)
    assert is_realization(SK, w.complex, w.ext)


def test_kb_good_lift(SK, Kb6):
    rng = random.Random(1)
    A = Kb6.stalk(1, 1)
    D = Kb6.stalk(1, 0)
    C = Kb6.complex(0, [1, 1], [[[2]]])
    for _ in range(5):
        delta = SK.random_extension(D, A, rng)
        c = Kb6.random_mor(C, D, rng)
        f = SK.good_lift(delta, c)
        assert f is not None
        assert is_good_lift(f, delta)


def test_ext_direct_sum_equations(SK, Kb6):
    rng = random.Random(2)
    A = Kb6.stalk(1, 1)
    B = Kb6.complex(1, [1, 1], [[[2]]])
    C = Kb6.stalk(1, 0)
    D = Kb6.complex(0, [1, 1], [[[3]]])
    for _ in range(10):
        delta = SK.random_extension(C, A, rng)
        rho = SK.random_extension(D, B, rng)
        total, bpC, bpA = ext_direct_sum(delta, rho)  # verifies restrictions internally
        assert total.C == bpC.obj and total.A == bpA.obj


def test_split_axioms_small(S6):
    scope = Scope(obj_bound=2, test_bound=1, max_exts=4, max_mors=40, max_tuples=400)
    report = check_axioms(S6, scope)
    assert report.ok, report.render()


def test_split_axioms_freemod2_n2():
    F2 = FreeModCategory(2)
    S = SplitStructure(F2, 2)
    scope = Scope(obj_bound=1, test_bound=1, max_exts=4, max_mors=16, max_tuples=200)
    report = check_axioms(S, scope)
    assert report.ok, report.render()
