"""Built-in n-exangulated structures: split structures and bounded complexes.

The split structure puts the zero bifunctor on any of our additive
categories; its distinguished exangles are exactly the complexes homotopy
equivalent (rel ends) to triv_0(A) + triv_n(C).  The Kb structure is the
1-exangulated shape of the homotopy category of bounded complexes, with
E(C, A) the homotopy classes C -> Sigma A and cocone realisations.
"""

from __future__ import annotations

from typing import Dict, List, Optional

import numpy as np

from .category import Category, Mor
from .complexes import ChainMap, ComplexN, direct_sum, lift_with_ends, triv
from .exangulated import (
    Exangle,
    ExangStructure,
    Extension,
    act_left,
    act_right,
    is_good_lift,
    is_good_lift_op,
    search_good_lift,
    search_good_lift_op,
)
from .kb import KbCategory, KbObj
from .zmod import Mat


class SplitStructure(ExangStructure):
    """E = 0: every extension group is trivial, realisations are split."""

    def __init__(self, cat: Category, n: int, witness_bound: int = 4):
        super().__init__(cat, n)
        self.witness_bound = witness_bound

    def __repr__(self):
        return f"Split({self.cat!r}, n={self.n})"

    def ext_data(self, C, A):
        m = self.cat.mod
        return 0, Mat.zeros(m, 0, 0), Mat.zeros(m, 0, 0)

    def act_left_matrix(self, a: Mor, C) -> Mat:
        return Mat.zeros(self.cat.mod, 0, 0)

    def act_right_matrix(self, d: Mor, A) -> Mat:
        return Mat.zeros(self.cat.mod, 0, 0)

    def coact_left_matrix(self, delta: Extension, T) -> Mat:
        return Mat.zeros(self.cat.mod, self.cat.hom(delta.A, T).dim, 0)

    def coact_right_matrix(self, delta: Extension, T) -> Mat:
        return Mat.zeros(self.cat.mod, self.cat.hom(T, delta.C).dim, 0)

    def _realize(self, delta: Extension) -> ComplexN:
        X, _, _, _, _ = direct_sum(triv(self.cat, self.n, 0, delta.A), triv(self.cat, self.n, self.n, delta.C))
        return X

    def inflation_witness(self, f: Mor) -> Optional[Exangle]:
        """f is an inflation iff it is a split mono whose complement splits."""
        cat = self.cat
        from .category import MorProblem

        prob = MorProblem(cat)
        s = prob.unknown(f.dst, f.src)
        prob.add_eq([(s, None, f, 1)], cat.identity(f.src))  # s o f = id
        sol = prob.solve()
        if sol is None:
            return None
        s = sol.mor(s)
        comp = cat.identity(f.dst) - f @ s
        split = cat.find_splitting(comp, self.witness_bound)
        if split is None:
            return None
        C, r = split.obj, split.r
        Z = cat.zero_obj()
        objs = [f.src, f.dst, C] + [Z] * (self.n - 1)
        diffs = [f, r] + [cat.zero_mor(objs[i], objs[i + 1]) for i in range(2, self.n + 1)]
        X = ComplexN(cat, self.n, objs, diffs)
        return Exangle(X, self.zero_ext(objs[-1], f.src))

    def deflation_witness(self, g: Mor) -> Optional[Exangle]:
        cat = self.cat
        from .category import MorProblem

        prob = MorProblem(cat)
        t = prob.unknown(g.dst, g.src)
        prob.add_eq([(t, g, None, 1)], cat.identity(g.dst))  # g o t = id
        sol = prob.solve()
        if sol is None:
            return None
        t = sol.mor(t)
        comp = cat.identity(g.src) - t @ g
        split = cat.find_splitting(comp, self.witness_bound)
        if split is None:
            return None
        Y, j = split.obj, split.s
        Z = cat.zero_obj()
        objs = [Z] * (self.n - 1) + [Y, g.src, g.dst]
        diffs = [cat.zero_mor(objs[i], objs[i + 1]) for i in range(self.n - 1)] + [j, g]
        X = ComplexN(cat, self.n, objs, diffs)
        return Exangle(X, self.zero_ext(g.dst, objs[0]))

    def good_lift(self, delta: Extension, c: Mor) -> Optional[ChainMap]:
        rho = act_right(c, delta)
        Y = self.realize(rho)
        X = self.realize(delta)
        cat = self.cat
        f = lift_with_ends(Y, X, {0: cat.identity(X.objs[0]), self.n + 1: c})
        if f is not None and is_good_lift(f, delta):
            return f
        return search_good_lift(self, delta, c)

    def good_lift_op(self, delta: Extension, a: Mor) -> Optional[ChainMap]:
        rho = act_left(a, delta)
        X = self.realize(delta)
        Y = self.realize(rho)
        cat = self.cat
        f = lift_with_ends(X, Y, {0: a, self.n + 1: cat.identity(X.objs[-1])})
        if f is not None and is_good_lift_op(f, delta):
            return f
        return search_good_lift_op(self, delta, a)


class KbStructure(ExangStructure):
    """Homotopy classes of bounded complexes with E(C, A) = [C, Sigma A]; n = 1."""

    def __init__(self, cat: KbCategory):
        super().__init__(cat, 1)

    def __repr__(self):
        return f"KbStructure({self.cat!r})"

    # extensions are homotopy classes C -> Sigma A

    def ext_data(self, C: KbObj, A: KbObj):
        kb: KbCategory = self.cat
        grp = kb.hom(C, kb.shift(A, 1))
        return grp.dim, grp.gens, grp.nulls

    def ext_mor(self, delta: Extension) -> Mor:
        kb: KbCategory = self.cat
        return Mor(kb, delta.C, kb.shift(delta.A, 1), delta.raw)

    def from_mor(self, C: KbObj, A: KbObj, f: Mor) -> Extension:
        return self.extension(C, A, f.data)

    def act_left_matrix(self, a: Mor, C) -> Mat:
        kb: KbCategory = self.cat
        sa = Mor(kb, kb.shift(a.src, 1), kb.shift(a.dst, 1), kb.shift_mor_raw(a.src, a.dst, kb.raw_of(a), 1))
        return kb.post_matrix(sa, C)

    def act_right_matrix(self, d: Mor, A) -> Mat:
        kb: KbCategory = self.cat
        return kb.pre_matrix(d, kb.shift(A, 1))

    def coact_left_matrix(self, delta: Extension, T) -> Mat:
        kb: KbCategory = self.cat
        A = delta.A
        dim = kb.hom(A, T).dim
        sT = kb.shift(T, 1)
        sA = kb.shift(A, 1)
        rows = []
        for i in range(dim):
            e = np.zeros((1, dim), dtype=np.int64)
            e[0, i] = 1
            rows.append(kb.shift_mor_raw(A, T, Mat(kb.mod, e), 1).a[0])
        shift_mx = Mat(kb.mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(kb.mod, 0, kb.hom(sA, sT).dim)
        return shift_mx @ kb.pre_matrix(self.ext_mor(delta), sT)

    def coact_right_matrix(self, delta: Extension, T) -> Mat:
        kb: KbCategory = self.cat
        return kb.post_matrix(self.ext_mor(delta), T)

    # realisation: A -> cocone -> C carrying delta

    def _cocone(self, delta: Extension):
        kb: KbCategory = self.cat
        C, A = delta.C, delta.A
        u_raw = kb.shift_mor_raw(C, kb.shift(A, 1), (-delta.raw), -1)
        u = Mor(kb, kb.shift(C, -1), A, u_raw)
        return kb.cone(u)

    def _realize(self, delta: Extension) -> ComplexN:
        kb: KbCategory = self.cat
        cone, incl, proj = self._cocone(delta)
        return ComplexN(kb, 1, [delta.A, cone, delta.C], [incl, proj])

    def inflation_witness(self, f: Mor) -> Optional[Exangle]:
        kb: KbCategory = self.cat
        cone, incl, proj = kb.cone(f)
        delta = self.from_mor(cone, f.src, proj)
        X = ComplexN(kb, 1, [f.src, f.dst, cone], [f, incl])
        return Exangle(X, delta)

    def deflation_witness(self, f: Mor) -> Optional[Exangle]:
        kb: KbCategory = self.cat
        cone, incl, proj = kb.cone(f)
        fib = kb.shift(cone, -1)
        # d_0 : Sigma^{-1} cone -> src projects onto the first block
        d0_levels = {}
        for d in fib.support:
            a = f.src.rank(d)
            tot = fib.rank(d)
            if a:
                M = np.zeros((a, tot), dtype=np.int64)
                M[:, :a] = np.eye(a, dtype=np.int64)
                d0_levels[d] = Mat(kb.mod, M)
        d0 = kb.make(fib, f.src, d0_levels)
        delta = self.from_mor(f.dst, fib, incl)
        X = ComplexN(kb, 1, [fib, f.src, f.dst], [d0, f])
        return Exangle(X, delta)

    def _functorial_mid(self, delta: Extension, rho: Extension, end_map: Mor, side: str) -> Optional[Mor]:
        """Middle map between cocones induced by a map of one end."""
        kb: KbCategory = self.cat
        src_cone, _, _ = self._cocone(rho if side == "right" else delta)
        dst_cone, _, _ = self._cocone(delta if side == "right" else rho)
        levels: Dict[int, Mat] = {}
        for d in src_cone.support:
            if side == "right":
                # [c 0; 0 1] : C^d + A^d -> D^d + A^d
                c_lv = kb.level(end_map.src, end_map.dst, end_map.data, d)
                a_r = delta.A.rank(d)
                M = np.zeros((dst_cone.rank(d), src_cone.rank(d)), dtype=np.int64)
                M[: c_lv.rows, : c_lv.cols] = c_lv.a
                M[c_lv.rows :, c_lv.cols :] = np.eye(a_r, dtype=np.int64)
            else:
                # [1 0; 0 a] : D^d + A^d -> D^d + B^d
                a_lv = kb.level(end_map.src, end_map.dst, end_map.data, d)
                c_r = delta.C.rank(d)
                M = np.zeros((dst_cone.rank(d), src_cone.rank(d)), dtype=np.int64)
                M[:c_r, :c_r] = np.eye(c_r, dtype=np.int64)
                M[c_r:, c_r:] = a_lv.a
            levels[d] = Mat(kb.mod, M)
        return kb.make(src_cone, dst_cone, levels)

    def good_lift(self, delta: Extension, c: Mor) -> Optional[ChainMap]:
        kb = self.cat
        rho = act_right(c, delta)
        Y = self.realize(rho)
        X = self.realize(delta)
        try:
            mid = self._functorial_mid(delta, rho, c, side="right")
            f = ChainMap(Y, X, [kb.identity(delta.A), mid, c])
            if is_good_lift(f, delta):
                return f
        except ValueError:
            pass
        f = lift_with_ends(Y, X, {0: kb.identity(delta.A), 2: c})
        if f is not None and is_good_lift(f, delta):
            return f
        return search_good_lift(self, delta, c)

    def good_lift_op(self, delta: Extension, a: Mor) -> Optional[ChainMap]:
        kb = self.cat
        rho = act_left(a, delta)
        X = self.realize(delta)
        Y = self.realize(rho)
        try:
            mid = self._functorial_mid(delta, rho, a, side="left")
            f = ChainMap(X, Y, [a, mid, kb.identity(delta.C)])
            if is_good_lift_op(f, delta):
                return f
        except ValueError:
            pass
        f = lift_with_ends(X, Y, {0: a, 2: kb.identity(delta.C)})
        if f is not None and is_good_lift_op(f, delta):
            return f
        return search_good_lift_op(self, delta, a)
