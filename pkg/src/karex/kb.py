"""Bounded complexes of free Z/m-modules up to homotopy.

Objects are bounded cochain complexes of free modules; morphisms are
homotopy classes of chain maps, stored by the canonical representative
modulo null-homotopic maps.  This is the one built-in category with
genuinely quotient hom-groups and nonzero extension groups, used to
exercise every construction on a triangulated-flavoured instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .category import Biproduct, Category, Mor
from .zmod import Mat, vstack


@dataclass(frozen=True)
class KbObj:
    """Complex concentrated in degrees lo..lo+len(ranks)-1, zero ranks stripped."""

    lo: int
    ranks: Tuple[int, ...]
    diffs: Tuple[Mat, ...]  # diffs[i] : degree lo+i -> lo+i+1

    def rank(self, d: int) -> int:
        i = d - self.lo
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    def diff(self, d: int, mod: int) -> Mat:
        i = d - self.lo
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return Mat.zeros(mod, self.rank(d + 1), self.rank(d))

    @property
    def support(self):
        return range(self.lo, self.lo + len(self.ranks))

    def __repr__(self):
        return f"Kb[{self.lo}:{self.ranks}]"


def _normalize(mod: int, lo: int, ranks: List[int], diffs: List[Mat]) -> KbObj:
    while ranks and ranks[0] == 0:
        ranks.pop(0)
        diffs.pop(0) if diffs else None
        lo += 1
    while ranks and ranks[-1] == 0:
        ranks.pop()
        diffs.pop() if diffs else None
    if not ranks:
        return KbObj(0, (), ())
    return KbObj(lo, tuple(ranks), tuple(diffs[: len(ranks) - 1]))


class KbCategory(Category):
    def __init__(self, mod: int, len_bound: int = 2, rank_bound: int = 1):
        super().__init__(mod)
        self.len_bound = len_bound
        self.rank_bound = rank_bound
        self._layout_cache = {}

    def __repr__(self):
        return f"Kb(Z/{self.mod}, len<={self.len_bound}, rank<={self.rank_bound})"

    # -- object constructors --------------------------------------------

    def complex(self, lo: int, ranks, diffs_rows) -> KbObj:
        ranks = list(ranks)
        diffs = []
        for i in range(len(ranks) - 1):
            rows = diffs_rows[i] if i < len(diffs_rows) else []
            M = Mat.from_rows(self.mod, rows) if rows else Mat.zeros(self.mod, ranks[i + 1], ranks[i])
            if M.shape != (ranks[i + 1], ranks[i]):
                raise ValueError(f"differential {i} shape {M.shape} != {(ranks[i + 1], ranks[i])}")
            diffs.append(M)
        for i in range(len(diffs) - 1):
            if not (diffs[i + 1] @ diffs[i]).is_zero():
                raise ValueError(f"d_{i + 1} d_{i} != 0 in complex data")
        return _normalize(self.mod, lo, ranks, diffs)

    def stalk(self, rank: int, degree: int = 0) -> KbObj:
        if rank == 0:
            return KbObj(0, (), ())
        return KbObj(degree, (rank,), ())

    def shift(self, X: KbObj, k: int) -> KbObj:
        """Suspension: shift(X, k) has X_{d+k} in degree d, differentials scaled by (-1)^k."""
        if not X.ranks:
            return X
        sign = -1 if k % 2 else 1
        return KbObj(X.lo - k, X.ranks, tuple(d.scale(sign) for d in X.diffs))

    def shift_mor_raw(self, X: KbObj, Y: KbObj, raw: Mat, k: int) -> Mat:
        """Raw of the shifted morphism Sigma^k f (levelwise identical components)."""
        return self._relayout(X, Y, raw, self.shift(X, k), self.shift(Y, k), shift=k)

    def zero_obj(self) -> KbObj:
        return KbObj(0, (), ())

    def obj_label(self, X: KbObj) -> str:
        return f"[{X.lo}:" + ",".join(map(str, X.ranks)) + "]"

    # -- morphism layout --------------------------------------------------

    def _layout(self, X: KbObj, Y: KbObj):
        """Ordered degree list and offsets for levelwise components of hom(X, Y)."""
        key = (X, Y)
        got = self._layout_cache.get(key)
        if got is None:
            degs = [d for d in X.support if Y.rank(d) > 0]
            offs = {}
            pos = 0
            for d in degs:
                offs[d] = pos
                pos += X.rank(d) * Y.rank(d)
            got = (degs, offs, pos)
            self._layout_cache[key] = got
        return got

    def level(self, X: KbObj, Y: KbObj, raw: Mat, d: int) -> Mat:
        degs, offs, dim = self._layout(X, Y)
        rX, rY = X.rank(d), Y.rank(d)
        if d not in offs:
            return Mat.zeros(self.mod, rY, rX)
        o = offs[d]
        return Mat(self.mod, raw.a[0, o : o + rX * rY].reshape(rY, rX))

    def from_levels(self, X: KbObj, Y: KbObj, levels: Dict[int, Mat]) -> Mat:
        degs, offs, dim = self._layout(X, Y)
        out = np.zeros((1, dim), dtype=np.int64)
        for d in degs:
            M = levels.get(d)
            if M is not None:
                out[0, offs[d] : offs[d] + M.rows * M.cols] = M.a.reshape(-1)
        return Mat(self.mod, out)

    def _relayout(self, X: KbObj, Y: KbObj, raw: Mat, X2: KbObj, Y2: KbObj, shift: int) -> Mat:
        levels = {d - shift: self.level(X, Y, raw, d) for d in self._layout(X, Y)[0]}
        return self.from_levels(X2, Y2, levels)

    # -- category protocol -------------------------------------------------

    def hom_data(self, X: KbObj, Y: KbObj):
        degs, offs, dim = self._layout(X, Y)
        # chain-map constraint: f^{d+1} d_X^d - d_Y^d f^d = 0 whenever the
        # target slot (X_d -> Y_{d+1}) is nonzero
        cdims = []
        cdegs = []
        for d in X.support:
            if X.rank(d) and Y.rank(d + 1):
                cdegs.append(d)
                cdims.append(X.rank(d) * Y.rank(d + 1))
        total_c = sum(cdims)
        rows = []
        for i in range(dim):
            e = np.zeros((1, dim), dtype=np.int64)
            e[0, i] = 1
            ev = Mat(self.mod, e)
            out = np.zeros(total_c, dtype=np.int64)
            pos = 0
            for d, cd in zip(cdegs, cdims):
                f_d = self.level(X, Y, ev, d)
                f_d1 = self.level(X, Y, ev, d + 1)
                viol = f_d1 @ X.diff(d, self.mod) - Y.diff(d, self.mod) @ f_d
                out[pos : pos + cd] = viol.a.reshape(-1)
                pos += cd
            rows.append(out)
        if dim:
            C = Mat(self.mod, np.array(rows, dtype=np.int64))
            from .zmod import kernel_basis

            gens = kernel_basis(C).mat if total_c else Mat.identity(self.mod, dim)
        else:
            gens = Mat.zeros(self.mod, 0, 0)
        # null-homotopic subgroup: boundaries of levelwise homotopies
        nrows = []
        for d in X.support:
            rX, rH = X.rank(d), Y.rank(d - 1)
            for i in range(rH):
                for j in range(rX):
                    s = np.zeros((rH, rX), dtype=np.int64)
                    s[i, j] = 1
                    sM = Mat(self.mod, s)
                    levels = {}
                    lv = Y.diff(d - 1, self.mod) @ sM
                    if lv.rows and lv.cols:
                        levels[d] = levels.get(d, Mat.zeros(self.mod, Y.rank(d), rX)) + lv
                    lv2 = sM @ X.diff(d - 1, self.mod)
                    if lv2.rows and lv2.cols:
                        prev = levels.get(d - 1, Mat.zeros(self.mod, Y.rank(d - 1), X.rank(d - 1)))
                        levels[d - 1] = prev + lv2
                    nrows.append(self.from_levels(X, Y, levels).a[0])
        nulls = Mat(self.mod, np.array(nrows, dtype=np.int64)) if nrows else Mat.zeros(self.mod, 0, dim)
        return dim, gens, nulls

    def raw_of(self, f: Mor) -> Mat:
        return f.data

    def mor_from_raw(self, X: KbObj, Y: KbObj, raw: Mat) -> Mor:
        return Mor(self, X, Y, self.hom(X, Y).canon(raw))

    def identity_raw(self, X: KbObj) -> Mat:
        return self.from_levels(X, X, {d: Mat.identity(self.mod, X.rank(d)) for d in X.support})

    def compose_raw(self, X: KbObj, Y: KbObj, Z: KbObj, g_raw: Mat, f_raw: Mat) -> Mat:
        levels = {}
        for d in X.support:
            if Z.rank(d):
                levels[d] = self.level(Y, Z, g_raw, d) @ self.level(X, Y, f_raw, d)
        return self.from_levels(X, Z, levels)

    def make(self, X: KbObj, Y: KbObj, levels: Dict[int, Mat]) -> Mor:
        raw = self.from_levels(X, Y, levels)
        # representatives must be honest chain maps before passing to classes
        for d in X.support:
            if X.rank(d) and Y.rank(d + 1):
                lhs = self.level(X, Y, raw, d + 1) @ X.diff(d, self.mod)
                rhs = Y.diff(d, self.mod) @ self.level(X, Y, raw, d)
                if lhs != rhs:
                    raise ValueError(f"levelwise data is not a chain map at degree {d}")
        return self.mor_from_raw(X, Y, raw)

    def pre_matrix(self, f: Mor, Z: KbObj) -> Mat:
        key = (f, Z)
        M = self._pre_cache.get(key)
        if M is None:
            X, Y = f.src, f.dst
            degs_in, offs_in, dim_in = self._layout(Y, Z)
            degs_out, offs_out, dim_out = self._layout(X, Z)
            out = np.zeros((dim_in, dim_out), dtype=np.int64)
            for d in degs_in:
                if d in offs_out:
                    Fd = self.level(X, Y, f.data, d)
                    blk = np.kron(np.eye(Z.rank(d), dtype=np.int64), Fd.a) % self.mod
                    o_in, o_out = offs_in[d], offs_out[d]
                    out[o_in : o_in + blk.shape[0], o_out : o_out + blk.shape[1]] = blk
            M = Mat._wrap(self.mod, out % self.mod)
            self._pre_cache[key] = M
        return M

    def post_matrix(self, g: Mor, W: KbObj) -> Mat:
        key = (g, W)
        M = self._post_cache.get(key)
        if M is None:
            X, Y = g.src, g.dst
            degs_in, offs_in, dim_in = self._layout(W, X)
            degs_out, offs_out, dim_out = self._layout(W, Y)
            out = np.zeros((dim_in, dim_out), dtype=np.int64)
            for d in degs_in:
                if d in offs_out:
                    Gd = self.level(X, Y, g.data, d)
                    blk = np.kron(Gd.a.T, np.eye(W.rank(d), dtype=np.int64)) % self.mod
                    o_in, o_out = offs_in[d], offs_out[d]
                    out[o_in : o_in + blk.shape[0], o_out : o_out + blk.shape[1]] = blk
            M = Mat._wrap(self.mod, out % self.mod)
            self._post_cache[key] = M
        return M

    def biproduct(self, X: KbObj, Y: KbObj) -> Biproduct:
        if not X.ranks and not Y.ranks:
            Z = self.zero_obj()
            z = self.identity(Z)
            return Biproduct(Z, z, z, z, z)
        los = [o.lo for o in (X, Y) if o.ranks]
        his = [o.lo + len(o.ranks) for o in (X, Y) if o.ranks]
        lo, hi = min(los), max(his)
        ranks = [X.rank(d) + Y.rank(d) for d in range(lo, hi)]
        diffs = []
        for d in range(lo, hi - 1):
            from .zmod import block_diag

            diffs.append(block_diag([X.diff(d, self.mod), Y.diff(d, self.mod)], self.mod))
        Z = _normalize(self.mod, lo, ranks, diffs)
        iX, iY, pX, pY = {}, {}, {}, {}
        for d in Z.support:
            rx, ry = X.rank(d), Y.rank(d)
            iX[d] = Mat(self.mod, np.vstack([np.eye(rx, dtype=np.int64), np.zeros((ry, rx), dtype=np.int64)]))
            iY[d] = Mat(self.mod, np.vstack([np.zeros((rx, ry), dtype=np.int64), np.eye(ry, dtype=np.int64)]))
            pX[d] = iX[d].t
            pY[d] = iY[d].t
        return Biproduct(
            Z,
            self.make(X, Z, {d: iX[d] for d in X.support}),
            self.make(Y, Z, {d: iY[d] for d in Y.support}),
            self.make(Z, X, {d: pX[d] for d in X.support}),
            self.make(Z, Y, {d: pY[d] for d in Y.support}),
        )

    # -- cones -------------------------------------------------------------

    def cone(self, f: Mor):
        """Cone(f: X -> Y) with degree-d part X_{d+1} + Y_d; returns (cone, incl, proj).

        incl : Y -> cone, proj : cone -> shift(X, 1); the triangle
        X -> Y -> cone -> Sigma X is the built-in distinguished shape.
        """
        X, Y = f.src, f.dst
        m = self.mod
        lo_cands = [X.lo - 1] if X.ranks else []
        if Y.ranks:
            lo_cands.append(Y.lo)
        if not lo_cands:
            Z = self.zero_obj()
            zid = self.identity(Z)
            return Z, zid, zid
        lo = min(lo_cands)
        hi = max(([X.lo + len(X.ranks) - 1] if X.ranks else [lo]) + ([Y.lo + len(Y.ranks)] if Y.ranks else [lo]))
        ranks = []
        diffs = []
        for d in range(lo, hi):
            ranks.append(X.rank(d + 1) + Y.rank(d))
        for d in range(lo, hi - 1):
            a = X.rank(d + 1)
            b = Y.rank(d)
            a2 = X.rank(d + 2)
            b2 = Y.rank(d + 1)
            M = np.zeros((a2 + b2, a + b), dtype=np.int64)
            M[:a2, :a] = (-X.diff(d + 1, m).a) % m
            M[a2:, :a] = self.level(X, Y, f.data, d + 1).a
            M[a2:, a:] = Y.diff(d, m).a
            diffs.append(Mat(m, M))
        cone = _normalize(m, lo, ranks, diffs)
        incl = self.make(Y, cone, {
            d: Mat(m, np.vstack([np.zeros((X.rank(d + 1), Y.rank(d)), dtype=np.int64), np.eye(Y.rank(d), dtype=np.int64)]))
            for d in Y.support
        })
        sx = self.shift(X, 1)
        proj = self.make(cone, sx, {
            d: Mat(m, np.hstack([np.eye(X.rank(d + 1), dtype=np.int64), np.zeros((X.rank(d + 1), Y.rank(d)), dtype=np.int64)]))
            for d in cone.support if X.rank(d + 1)
        })
        return cone, incl, proj

    # -- enumeration ---------------------------------------------------------

    def objects_upto(self, bound: int) -> List[KbObj]:
        L = min(self.len_bound, max(1, bound)) if bound else self.len_bound
        R = self.rank_bound
        out = [self.zero_obj()]
        for lo in range(0, L):
            for length in range(1, L - lo + 1):
                for ranks in itertools.product(range(1, R + 1), repeat=length):
                    slots = [(ranks[i + 1], ranks[i]) for i in range(length - 1)]
                    choices = [
                        list(itertools.product(range(self.mod), repeat=r * c)) for (r, c) in slots
                    ]
                    for combo in itertools.product(*choices):
                        diffs = [
                            Mat(self.mod, np.array(c, dtype=np.int64).reshape(slots[i]))
                            for i, c in enumerate(combo)
                        ]
                        ok = all((diffs[i + 1] @ diffs[i]).is_zero() for i in range(len(diffs) - 1))
                        if ok:
                            out.append(KbObj(lo, tuple(ranks), tuple(diffs)))
        return out

    def additive_generators(self, bound: int) -> List[KbObj]:
        return [X for X in self.objects_upto(bound) if X.ranks]

    def splitting_candidates(self, X: KbObj, bound: int) -> List[KbObj]:
        # shifted copies of the enumerated window so complements at X's degrees exist
        base = self.objects_upto(bound)
        lo = X.lo - 1 if X.ranks else 0
        out = []
        seen = set()
        for sh in (0, lo):
            for Y in base:
                Ys = KbObj(Y.lo + sh, Y.ranks, Y.diffs) if Y.ranks else Y
                if Ys not in seen:
                    seen.add(Ys)
                    out.append(Ys)
        return out
