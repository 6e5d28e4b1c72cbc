"""Formal opposites of categories and of n-exangulated structures.

Dual constructions (composing deflations, right-sided lifting) reuse the
primal implementations by passing through the opposite structure: a
deflation of S is an inflation of op(S), and the completion of op(S) is
the opposite of the completion of S up to relabelling.
"""

from __future__ import annotations

from typing import List, Optional

from .category import Biproduct, Category, Mor
from .complexes import ChainMap, ComplexN
from .exangulated import Exangle, ExangStructure, Extension
from .zmod import Mat


class OpCategory(Category):
    """Same objects, reversed arrows; payload of an op-morphism is the inner Mor."""

    def __init__(self, inner: Category):
        super().__init__(inner.mod)
        self.inner = inner

    def __repr__(self):
        return f"Op({self.inner!r})"

    def wrap(self, f: Mor) -> Mor:
        """Inner f : X -> Y as an op-morphism Y -> X."""
        return Mor(self, f.dst, f.src, f)

    def unwrap(self, f: Mor) -> Mor:
        return f.data

    def zero_obj(self):
        return self.inner.zero_obj()

    def is_zero_obj(self, X):
        return self.inner.is_zero_obj(X)

    def obj_label(self, X):
        return self.inner.obj_label(X)

    def objects_upto(self, bound: int):
        return self.inner.objects_upto(bound)

    def additive_generators(self, bound: int):
        return self.inner.additive_generators(bound)

    def splitting_candidates(self, X, bound: int):
        return self.inner.splitting_candidates(X, bound)

    def hom_data(self, X, Y):
        grp = self.inner.hom(Y, X)
        return grp.dim, grp.gens, grp.nulls

    def raw_of(self, f: Mor) -> Mat:
        return self.inner.raw_of(f.data)

    def mor_from_raw(self, X, Y, raw: Mat) -> Mor:
        return Mor(self, X, Y, self.inner.mor_from_raw(Y, X, raw))

    def identity_raw(self, X) -> Mat:
        return self.inner.identity_raw(X)

    def compose_raw(self, X, Y, Z, g_raw: Mat, f_raw: Mat) -> Mat:
        # (g o_op f) = inner f o g
        return self.inner.compose_raw(Z, Y, X, f_raw, g_raw)

    def compose(self, g: Mor, f: Mor) -> Mor:
        if f.dst != g.src:
            raise ValueError("not composable")
        return Mor(self, f.src, g.dst, f.data @ g.data)

    def pre_matrix(self, f: Mor, Z) -> Mat:
        return self.inner.post_matrix(f.data, Z)

    def post_matrix(self, g: Mor, W) -> Mat:
        return self.inner.pre_matrix(g.data, W)

    def biproduct(self, X, Y) -> Biproduct:
        bp = self.inner.biproduct(X, Y)
        return Biproduct(bp.obj, self.wrap(bp.p1), self.wrap(bp.p2), self.wrap(bp.i1), self.wrap(bp.i2))

    def find_splitting(self, e: Mor, bound: int = 0, cap: int = 100_000):
        split = self.inner.find_splitting(self.unwrap(e), bound, cap)
        if split is None:
            return None
        from .category import Splitting

        return Splitting(split.obj, self.wrap(split.s), self.wrap(split.r))


def reverse_complex(opcat: OpCategory, X: ComplexN) -> ComplexN:
    """Inner complex read backwards as a complex over the opposite category."""
    n = X.n
    objs = tuple(reversed(X.objs))
    diffs = [opcat.wrap(X.diffs[n - i]) for i in range(n + 1)]
    return ComplexN(opcat, n, objs, diffs, check=False)


def unreverse_complex(X: ComplexN) -> ComplexN:
    opcat: OpCategory = X.cat
    n = X.n
    objs = tuple(reversed(X.objs))
    diffs = [opcat.unwrap(X.diffs[n - i]) for i in range(n + 1)]
    return ComplexN(opcat.inner, n, objs, diffs, check=False)


def reverse_chain_map(f: ChainMap, src_rev: ComplexN, dst_rev: ComplexN) -> ChainMap:
    opcat: OpCategory = src_rev.cat
    n = f.src.n
    mors = [opcat.wrap(f.mors[n + 1 - i]) for i in range(n + 2)]
    return ChainMap(src_rev, dst_rev, mors, check=False)


class OpStructure(ExangStructure):
    """E_op(C, A) = E(A, C) with the two actions exchanged."""

    def __init__(self, inner: ExangStructure):
        super().__init__(OpCategory(inner.cat), inner.n)
        self.inner = inner

    def __repr__(self):
        return f"Op({self.inner!r})"

    def _to_inner_ext(self, delta: Extension) -> Extension:
        return Extension(self.inner, delta.A, delta.C, delta.raw)

    def _from_inner_ext(self, delta: Extension) -> Extension:
        return Extension(self, delta.A, delta.C, delta.raw)

    def ext_data(self, C, A):
        grp = self.inner.ext_group(A, C)
        return grp.dim, grp.gens, grp.nulls

    def act_left_matrix(self, a: Mor, C) -> Mat:
        return self.inner.act_right_matrix(self.cat.unwrap(a), C)

    def act_right_matrix(self, d: Mor, A) -> Mat:
        return self.inner.act_left_matrix(self.cat.unwrap(d), A)

    def coact_left_matrix(self, delta: Extension, T) -> Mat:
        return self.inner.coact_right_matrix(self._to_inner_ext(delta), T)

    def coact_right_matrix(self, delta: Extension, T) -> Mat:
        return self.inner.coact_left_matrix(self._to_inner_ext(delta), T)

    def _realize(self, delta: Extension) -> ComplexN:
        inner_X = self.inner.realize(self._to_inner_ext(delta))
        return reverse_complex(self.cat, inner_X)

    def reverse_exangle(self, x: Exangle) -> Exangle:
        """Inner exangle as an exangle of the opposite structure."""
        return Exangle(reverse_complex(self.cat, x.complex), self._from_inner_ext(x.ext))

    def unreverse_exangle(self, x: Exangle) -> Exangle:
        return Exangle(unreverse_complex(x.complex), self._to_inner_ext(x.ext))

    def inflation_witness(self, f: Mor) -> Optional[Exangle]:
        w = self.inner.deflation_witness(self.cat.unwrap(f))
        return None if w is None else self.reverse_exangle(w)

    def deflation_witness(self, f: Mor) -> Optional[Exangle]:
        w = self.inner.inflation_witness(self.cat.unwrap(f))
        return None if w is None else self.reverse_exangle(w)

    def compose_inflations(self, wf: Exangle, wg: Exangle) -> Optional[Exangle]:
        w = self.inner.compose_deflations(self.unreverse_exangle(wg), self.unreverse_exangle(wf))
        return None if w is None else self.reverse_exangle(w)

    def compose_deflations(self, wf: Exangle, wg: Exangle) -> Optional[Exangle]:
        w = self.inner.compose_inflations(self.unreverse_exangle(wg), self.unreverse_exangle(wf))
        return None if w is None else self.reverse_exangle(w)

    def good_lift(self, delta: Extension, c: Mor) -> Optional[ChainMap]:
        f = self.inner.good_lift_op(self._to_inner_ext(delta), self.cat.unwrap(c))
        if f is None:
            return None
        from .exangulated import act_right

        rho = act_right(c, delta)
        return reverse_chain_map(f, self.realize(rho), self.realize(delta))

    def good_lift_op(self, delta: Extension, a: Mor) -> Optional[ChainMap]:
        f = self.inner.good_lift(self._to_inner_ext(delta), self.cat.unwrap(a))
        if f is None:
            return None
        from .exangulated import act_left

        rho = act_left(a, delta)
        return reverse_chain_map(f, self.realize(delta), self.realize(rho))

    def objects(self, scope):
        return self.inner.objects(scope)

    def test_objects(self, scope):
        return self.inner.test_objects(scope)
