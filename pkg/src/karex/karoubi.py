"""Idempotent completion and weak idempotent completion of a category.

Objects of the completion are pairs (X, e) with e an idempotent endomorphism
of X in the base category; a morphism (X, e) -> (Y, e') is a triplet
(e', r, e) with r a base morphism satisfying r e = r = e' r, stored here by
its underlying morphism r with canonical payload.  Composition, equality and
all linear structure are inherited from the base category.

The weak completion is the full subcategory of pairs whose complementary
idempotent id - e splits in the base; membership is decided by the base
category's bounded splitting search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .category import Biproduct, Category, Mor, Splitting
from .zmod import Mat


@dataclass(frozen=True)
class KarObj:
    base: object
    e: Mor  # idempotent endomorphism in the base category, canonical payload

    def __repr__(self):
        return f"({self.base}, {self.e.data!r})"


class KaroubiCategory(Category):
    def __init__(self, inner: Category):
        super().__init__(inner.mod)
        self.inner = inner

    def __repr__(self):
        return f"Karoubi({self.inner!r})"

    # -- objects -------------------------------------------------------

    def obj(self, X, e: Mor) -> KarObj:
        if e.src != X or e.dst != X:
            raise ValueError("idempotent must be an endomorphism of the base object")
        if not e.is_idempotent():
            raise ValueError("pair requires an idempotent endomorphism")
        return KarObj(X, e)

    def include_obj(self, X) -> KarObj:
        return KarObj(X, self.inner.identity(X))

    def include_mor(self, r: Mor) -> Mor:
        return Mor(self, self.include_obj(r.src), self.include_obj(r.dst), r)

    def zero_obj(self) -> KarObj:
        Z = self.inner.zero_obj()
        return KarObj(Z, self.inner.identity(Z))

    def obj_label(self, X: KarObj) -> str:
        return f"({self.inner.obj_label(X.base)},{X.e.data!r})"

    def is_zero_obj(self, X: KarObj) -> bool:
        return X.e.is_zero()

    def objects_upto(self, bound: int) -> List[KarObj]:
        out = []
        for X in self.inner.objects_upto(bound):
            for e in self.inner.hom_elements(X, X):
                if e.is_idempotent():
                    out.append(KarObj(X, e))
        return out

    def additive_generators(self, bound: int) -> List[KarObj]:
        out = []
        for X in self.inner.additive_generators(bound):
            for e in self.inner.hom_elements(X, X):
                if e.is_idempotent() and not e.is_zero():
                    out.append(KarObj(X, e))
        return out

    def splitting_candidates(self, X: KarObj, bound: int) -> List[KarObj]:
        return self.objects_upto(bound)

    # -- morphisms -----------------------------------------------------

    def make(self, src: KarObj, dst: KarObj, r: Mor) -> Mor:
        """Triplet morphism with underlying r; requires r e = r = e' r."""
        if r @ src.e != r or dst.e @ r != r:
            raise ValueError("underlying morphism must absorb both idempotents")
        return Mor(self, src, dst, r)

    def induced(self, src: KarObj, dst: KarObj, r: Mor) -> Mor:
        """The morphism with underlying e' r e, defined for any base r."""
        return Mor(self, src, dst, dst.e @ r @ src.e)

    def underlying(self, f: Mor) -> Mor:
        return f.data

    def hom_data(self, X: KarObj, Y: KarObj):
        base = self.inner.hom(X.base, Y.base)
        proj = self.inner.pre_matrix(X.e, Y.base) @ self.inner.post_matrix(Y.e, X.base)
        gens = base.gens @ proj
        return base.dim, gens, base.nulls

    def raw_of(self, f: Mor) -> Mat:
        return self.inner.raw_of(f.data)

    def mor_from_raw(self, X: KarObj, Y: KarObj, raw: Mat) -> Mor:
        r = self.inner.mor_from_raw(X.base, Y.base, raw)
        return Mor(self, X, Y, Y.e @ r @ X.e)

    def identity_raw(self, X: KarObj) -> Mat:
        return self.inner.raw_of(X.e)

    def compose_raw(self, X: KarObj, Y: KarObj, Z: KarObj, g_raw: Mat, f_raw: Mat) -> Mat:
        return self.inner.compose_raw(X.base, Y.base, Z.base, g_raw, f_raw)

    def compose(self, g: Mor, f: Mor) -> Mor:
        if f.dst != g.src:
            raise ValueError("not composable")
        return Mor(self, f.src, g.dst, g.data @ f.data)

    def add(self, f: Mor, g: Mor) -> Mor:
        if f.src != g.src or f.dst != g.dst:
            raise ValueError("cannot add non-parallel morphisms")
        return Mor(self, f.src, f.dst, f.data + g.data)

    def negate(self, f: Mor) -> Mor:
        return Mor(self, f.src, f.dst, -f.data)

    def pre_matrix(self, f: Mor, Z: KarObj) -> Mat:
        return self.inner.pre_matrix(f.data, Z.base)

    def post_matrix(self, g: Mor, W: KarObj) -> Mat:
        return self.inner.post_matrix(g.data, W.base)

    def biproduct(self, X: KarObj, Y: KarObj) -> Biproduct:
        bp = self.inner.biproduct(X.base, Y.base)
        e = bp.i1 @ X.e @ bp.p1 + bp.i2 @ Y.e @ bp.p2
        XY = KarObj(bp.obj, e)
        i1 = Mor(self, X, XY, e @ bp.i1 @ X.e)
        i2 = Mor(self, Y, XY, e @ bp.i2 @ Y.e)
        p1 = Mor(self, XY, X, X.e @ bp.p1 @ e)
        p2 = Mor(self, XY, Y, Y.e @ bp.p2 @ e)
        return Biproduct(XY, i1, i2, p1, p2)

    # -- canonical summand inclusion / projection ----------------------

    def iota(self, X: KarObj) -> Mor:
        """Canonical inclusion (id, e, e): (X, e) -> (X, id)."""
        return Mor(self, X, self.include_obj(X.base), X.e)

    def pi(self, X: KarObj) -> Mor:
        """Canonical projection (e, e, id): (X, id) -> (X, e)."""
        return Mor(self, self.include_obj(X.base), X, X.e)

    def find_splitting(self, e: Mor, bound: int = 0, cap: int = 100_000) -> Optional[Splitting]:
        """Idempotents split by construction: (X, e) |> (X, f) via the triplets."""
        if not e.is_idempotent():
            raise ValueError("find_splitting requires an idempotent endomorphism")
        X: KarObj = e.src
        f = e.data  # underlying base idempotent (as a class)
        Y = KarObj(X.base, f)
        r = Mor(self, X, Y, f)
        s = Mor(self, Y, X, f)
        split = Splitting(Y, r, s)
        assert split.check(e)
        return split


def whc_member(kar: KaroubiCategory, X: KarObj, bound: int) -> Optional[Splitting]:
    """Splitting of id - e in the base category, or None (bounded search)."""
    comp = kar.inner.identity(X.base) - X.e
    return kar.inner.find_splitting(comp, bound)


class WhcCategory(Category):
    """Full subcategory of the Karoubi envelope on pairs with split complement."""

    def __init__(self, inner: Category, member_bound: int, karoubi: Optional[KaroubiCategory] = None):
        super().__init__(inner.mod)
        self.inner = inner
        self.karoubi = karoubi if karoubi is not None else KaroubiCategory(inner)
        self.member_bound = member_bound
        self._member_cache = {}

    def register_member(self, X: KarObj, witness: Splitting):
        self._member_cache[X] = witness

    def __repr__(self):
        return f"Whc({self.inner!r})"

    def member_witness(self, X: KarObj) -> Optional[Splitting]:
        if X not in self._member_cache:
            self._member_cache[X] = whc_member(self.karoubi, X, self.member_bound)
        return self._member_cache[X]

    def is_member(self, X: KarObj) -> bool:
        return self.member_witness(X) is not None

    def check_member(self, X: KarObj) -> KarObj:
        if not self.is_member(X):
            raise ValueError(f"object {self.karoubi.obj_label(X)} is not in the weak completion (bound {self.member_bound})")
        return X

    # delegate everything object/morphism level to the Karoubi envelope

    def zero_obj(self):
        return self.karoubi.zero_obj()

    def obj_label(self, X):
        return self.karoubi.obj_label(X)

    def is_zero_obj(self, X):
        return self.karoubi.is_zero_obj(X)

    def objects_upto(self, bound: int):
        return [X for X in self.karoubi.objects_upto(bound) if self.is_member(X)]

    def additive_generators(self, bound: int):
        return [X for X in self.karoubi.additive_generators(bound) if self.is_member(X)]

    def include_obj(self, X):
        return self.karoubi.include_obj(X)

    def include_mor(self, r: Mor) -> Mor:
        g = self.karoubi.include_mor(r)
        return Mor(self, g.src, g.dst, g.data)

    def obj(self, X, e: Mor) -> KarObj:
        return self.karoubi.obj(X, e)

    def induced(self, src: KarObj, dst: KarObj, r: Mor) -> Mor:
        g = self.karoubi.induced(src, dst, r)
        return Mor(self, g.src, g.dst, g.data)

    def iota(self, X: KarObj) -> Mor:
        g = self.karoubi.iota(X)
        return Mor(self, g.src, g.dst, g.data)

    def pi(self, X: KarObj) -> Mor:
        g = self.karoubi.pi(X)
        return Mor(self, g.src, g.dst, g.data)

    def make(self, src, dst, r):
        return Mor(self, src, dst, r)

    def underlying(self, f):
        return f.data

    def _rewrap(self, f: Mor) -> Mor:
        return Mor(self, f.src, f.dst, f.data)

    def biproduct(self, X, Y):
        bp = self.karoubi.biproduct(X, Y)
        return Biproduct(bp.obj, self._rewrap(bp.i1), self._rewrap(bp.i2), self._rewrap(bp.p1), self._rewrap(bp.p2))

    def hom_data(self, X, Y):
        return self.karoubi.hom_data(X, Y)

    def raw_of(self, f):
        return self.inner.raw_of(f.data)

    def mor_from_raw(self, X, Y, raw):
        g = self.karoubi.mor_from_raw(X, Y, raw)
        return Mor(self, X, Y, g.data)

    def identity_raw(self, X):
        return self.karoubi.identity_raw(X)

    def compose_raw(self, X, Y, Z, g_raw, f_raw):
        return self.karoubi.compose_raw(X, Y, Z, g_raw, f_raw)

    def compose(self, g, f):
        if f.dst != g.src:
            raise ValueError("not composable")
        return Mor(self, f.src, g.dst, g.data @ f.data)

    def pre_matrix(self, f, Z):
        return self.inner.pre_matrix(f.data, Z.base)

    def post_matrix(self, g, W):
        return self.inner.post_matrix(g.data, W.base)

    def find_splitting(self, e, bound: int = 0, cap: int = 100_000):
        split = self.karoubi.find_splitting(self._as_karoubi(e))
        if split is None or not self.is_member(split.obj):
            return None
        return Splitting(split.obj, self._rewrap(split.r), self._rewrap(split.s))

    def _as_karoubi(self, f: Mor) -> Mor:
        return Mor(self.karoubi, f.src, f.dst, f.data)
