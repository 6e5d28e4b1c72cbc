import json

import pytest

from karex.category import FreeModCategory
from karex.completion import CompletedStructure, extend_functor, gamma, inclusion_functor, whisker_nat_iso
from karex.exangulated import Exangle, Scope, check_axioms, check_functor, check_nat_trans, is_n_exangle
from karex.exangulated import FunctorData, NatTransData, act_left, act_right, Extension
from karex.kb import KbCategory
from karex.presented import PresentedGroup
from karex.structures import KbStructure, SplitStructure
from karex.tabulated import (
    TableError,
    cyclic_decomposition,
    export_structure,
    export_text,
    load_table,
    smith_normal_form,
)
from karex.zmod import Mat


def small_table_text():
    """Free rank-1 modules over Z/6 with one generator, split structure data."""
    doc = {
        "format": "karex-category-v1",
        "modulus": 6,
        "n": 1,
        "objects": ["A"],
        "hom": {"A|A": {"orders": [6]}},
        "identity": {"A": [1]},
        "compose": {"A|A|A": [[[1]]]},
    }
    return json.dumps(doc)


def test_load_category_and_compose():
    cat, struct = load_table(small_table_text())
    assert struct is None
    X = ("A",)
    f = cat.mor_from_raw(X, X, Mat.row(6, [2]))
    g = cat.mor_from_raw(X, X, Mat.row(6, [3]))
    assert (g @ f).data == Mat.row(6, [0])
    bp = cat.biproduct(X, X)
    assert bp.check()
    assert cat.hom(X, bp.obj).dim == 2


def test_loader_rejects_bad_data():
    doc = json.loads(small_table_text())
    doc["compose"]["A|A|A"] = [[[2]]]  # breaks the identity law
    with pytest.raises(TableError):
        load_table(json.dumps(doc))
    doc = json.loads(small_table_text())
    doc["hom"]["A|A"]["orders"] = [4]  # 4 does not divide 6
    with pytest.raises(TableError):
        load_table(json.dumps(doc))
    with pytest.raises(TableError) as err:
        load_table("{not json")
    assert "line" in str(err.value)


def test_nonassociative_rejected():
    # basis id, a, b with a o a = b, b o a = id, a o b = b: then
    # (b o a) o a = a but b o (a o a) = b o b = 0, so composition is not associative
    doc = {
        "format": "karex-category-v1",
        "modulus": 2,
        "objects": ["A"],
        "hom": {"A|A": {"orders": [2, 2, 2]}},
        "identity": {"A": [1, 0, 0]},
        "compose": {
            "A|A|A": [
                [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
                [[0, 0, 1], [0, 0, 1], [0, 0, 0]],
            ]
        },
    }
    with pytest.raises(TableError) as err:
        load_table(json.dumps(doc))
    assert "associativity" in str(err.value) or "identity" in str(err.value)


def test_smith_normal_form_small():
    diag, V, Vinv = smith_normal_form([[2, 0], [0, 3]])
    assert sorted(diag) == [2, 3]
    # V @ Vinv = identity
    import numpy as np

    assert (np.array(V) @ np.array(Vinv) == np.eye(2, dtype=int)).all()


def test_cyclic_decomposition_matches_group_size():
    # subgroup of (Z/6)^2 generated by (3,0) and (2,2), no nulls
    grp = PresentedGroup(6, 2, Mat.from_rows(6, [[3, 0], [2, 2]]), Mat.zeros(6, 0, 2))
    dec = cyclic_decomposition(grp)
    size = 1
    for d in dec.orders:
        size *= d
    assert size == grp.size()
    for g, d in zip(dec.gens, dec.orders):
        acc = grp.zero()
        for _ in range(d):
            acc = grp.canon(acc + g)
        assert acc.is_zero()
    # coordinates round-trip
    for v in grp.elements():
        coords = dec.coords_of(grp, v)
        acc = grp.zero()
        for c, g in zip(coords, dec.gens):
            acc = acc + g.scale(c)
        assert grp.canon(acc) == grp.canon(v)


def test_export_and_reload_kb_fragment():
    kb = KbCategory(6, len_bound=2, rank_bound=1)
    S = KbStructure(kb)
    A1 = kb.stalk(1, 1)
    A0 = kb.stalk(1, 0)
    doc = export_structure(S, [A0, A1], ext_cap=8)
    cat, struct = load_table(json.dumps(doc))
    assert struct is not None
    # the extension group with a full cyclic factor survives the round trip
    names = doc["objects"]
    nonzero_pairs = [k for k in doc.get("E", {})]
    assert nonzero_pairs, "expected a nonzero extension group in the export"
    # realisations of nonzero extensions are attached complexes (validated on load)
    total = sum(len(v) for v in doc.get("realize", {}).values())
    assert total >= 1


def test_mutated_realization_detected():
    kb = KbCategory(6, len_bound=2, rank_bound=1)
    S = KbStructure(kb)
    A1 = kb.stalk(1, 1)
    A0 = kb.stalk(1, 0)
    doc = export_structure(S, [A0, A1], ext_cap=8)
    # corrupt one realisation entry: swap it with the realisation of a different extension
    rkey = next(iter(doc["realize"]))
    entries = doc["realize"][rkey]
    keys = sorted(entries)
    assert len(keys) >= 2
    entries[keys[0]], entries[keys[1]] = entries[keys[1]], entries[keys[0]]
    try:
        cat, struct = load_table(json.dumps(doc))
    except TableError:
        return  # already caught at load time: attached-complex validation
    scope = Scope(obj_bound=1, test_bound=1, max_objects=6, max_exts=8, max_mors=10, max_tuples=60)
    from karex.exangulated import check_r1
    from karex.report import Report

    rep = Report("mutation")
    check_r1(struct, scope, rep)
    assert not rep.ok
    fail = rep.first_failure()
    assert fail is not None and fail.detail


def test_extend_functor_universal(capsys):
    F6 = FreeModCategory(6)
    S = SplitStructure(F6, 1)
    CS = CompletedStructure(S)
    incl = inclusion_functor(CS)
    ext = extend_functor(CS, incl)
    scope = Scope(obj_bound=1, test_bound=1, max_objects=5, max_exts=2, max_mors=8, max_tuples=60, samples=6, seed=5)
    rep = check_functor(ext.functor, scope)
    assert rep.ok, rep.render()
    # tsadi is an n-exangulated natural isomorphism F => (E, Psi) o (I, Gamma)
    beta = NatTransData(src=incl, dst=ext.composite_with_inclusion, component=lambda X: ext.iso_components(X))
    rep2 = check_nat_trans(beta, scope)
    assert rep2.ok, rep2.render()
    # components are isomorphisms in the target category
    for X in S.objects(scope):
        comp = ext.iso_components(X)
        inv = ext.iso_inverses(X)
        assert inv @ comp == CS.cat.identity(comp.src)
        assert comp @ inv == CS.cat.identity(comp.dst)


def test_extend_functor_mutation_detected():
    F6 = FreeModCategory(6)
    S = SplitStructure(F6, 1)
    CS = CompletedStructure(S)
    kb = KbCategory(6, len_bound=2, rank_bound=1)
    # mutate: negate one component of the extension transformation of the
    # inclusion functor and watch naturality/realisation checks fail
    incl = inclusion_functor(CS)
    bad = FunctorData(
        src=incl.src,
        dst=incl.dst,
        obj_map=incl.obj_map,
        mor_map=lambda f: -incl.mor_map(f),
        ext_map=incl.ext_map,
    )
    scope = Scope(obj_bound=1, test_bound=1, max_objects=4, max_exts=2, max_mors=8, max_tuples=40, samples=6, seed=5)
    rep = check_functor(bad, scope)
    assert not rep.ok


def test_whisker_component_shape():
    F6 = FreeModCategory(6)
    S = SplitStructure(F6, 1)
    CS = CompletedStructure(S)
    incl = inclusion_functor(CS)
    ext = extend_functor(CS, incl)
    G = ext.functor
    M = whisker_nat_iso(CS, G, G, ext.iso_components, ext.iso_inverses, ext.iso_components)
    kar = CS.cat
    X = kar.obj(1, F6.make(1, 1, [[3]]))
    comp = M(X)
    assert comp.src == G.obj_map(X) and comp.dst == G.obj_map(X)
