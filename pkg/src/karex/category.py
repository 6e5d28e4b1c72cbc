"""Additive categories with enumerable, linearisable hom-groups.

Every category here exposes its hom-groups as presented Z/m-modules on raw
row vectors (see presented.py), together with rep-level bilinear composition.
That single interface powers all generic machinery downstream: solving for
morphisms subject to linear conditions, enumerating hom-groups, checking
exactness of induced sequences, and searching for splittings of idempotents.

Morphisms are stored with canonical payloads, so `==` on Mor is equality in
the category (for quotient-style categories: equality of classes).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .presented import LinearProblem, PresentedGroup
from .zmod import Mat, hstack, vstack


class Mor:
    """Morphism handle: category, source, target and a canonical payload."""

    __slots__ = ("cat", "src", "dst", "data", "_hash")

    def __init__(self, cat: "Category", src, dst, data):
        self.cat = cat
        self.src = src
        self.dst = dst
        self.data = data
        self._hash = None

    def __eq__(self, other):
        if not isinstance(other, Mor):
            return NotImplemented
        return self.cat is other.cat and self.src == other.src and self.dst == other.dst and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.cat), self.src, self.dst, self.data))
        return self._hash

    def __matmul__(self, other: "Mor") -> "Mor":
        return self.cat.compose(self, other)

    def __add__(self, other: "Mor") -> "Mor":
        return self.cat.add(self, other)

    def __sub__(self, other: "Mor") -> "Mor":
        return self.cat.add(self, self.cat.negate(other))

    def __neg__(self) -> "Mor":
        return self.cat.negate(self)

    def is_zero(self) -> bool:
        return self.cat.is_zero_mor(self)

    def is_idempotent(self) -> bool:
        return self.src == self.dst and self @ self == self

    def __repr__(self):
        return f"Mor({self.cat.obj_label(self.src)} -> {self.cat.obj_label(self.dst)}, {self.data!r})"


@dataclass(frozen=True)
class Biproduct:
    obj: object
    i1: Mor
    i2: Mor
    p1: Mor
    p2: Mor

    def check(self) -> bool:
        cat = self.i1.cat
        X, Y = self.i1.src, self.i2.src
        ok = self.p1 @ self.i1 == cat.identity(X)
        ok &= self.p2 @ self.i2 == cat.identity(Y)
        ok &= (self.p2 @ self.i1).is_zero()
        ok &= (self.p1 @ self.i2).is_zero()
        ok &= self.i1 @ self.p1 + self.i2 @ self.p2 == cat.identity(self.obj)
        return ok


@dataclass(frozen=True)
class Splitting:
    """Witness that an idempotent e on X splits: s @ r == e and r @ s == id_Y."""

    obj: object  # Y
    r: Mor  # X -> Y
    s: Mor  # Y -> X

    def check(self, e: Mor) -> bool:
        cat = e.cat
        return self.s @ self.r == e and self.r @ self.s == cat.identity(self.obj)


class Category:
    """Base class; subclasses provide raw hom data and rep-level composition."""

    def __init__(self, mod: int):
        self.mod = mod
        self._hom_cache = {}
        self._pre_cache = {}
        self._post_cache = {}

    # -- subclass protocol --------------------------------------------

    def zero_obj(self):
        raise NotImplementedError

    def biproduct(self, X, Y) -> Biproduct:
        raise NotImplementedError

    def hom_data(self, X, Y) -> Tuple[int, Mat, Mat]:
        """(raw dimension, generator rows spanning all valid raws, null rows)."""
        raise NotImplementedError

    def raw_of(self, f: Mor) -> Mat:
        raise NotImplementedError

    def mor_from_raw(self, X, Y, raw: Mat) -> Mor:
        raise NotImplementedError

    def compose_raw(self, X, Y, Z, g_raw: Mat, f_raw: Mat) -> Mat:
        """Rep-level composite raw(g o f); must be bilinear in the raws."""
        raise NotImplementedError

    def identity_raw(self, X) -> Mat:
        raise NotImplementedError

    def obj_label(self, X) -> str:
        return str(X)

    def objects_upto(self, bound: int) -> List[object]:
        raise NotImplementedError

    def additive_generators(self, bound: int) -> List[object]:
        """Objects whose finite sums reach every enumerated object up to iso."""
        return self.objects_upto(bound)

    def splitting_candidates(self, X, bound: int) -> List[object]:
        return self.objects_upto(bound)

    # -- derived machinery --------------------------------------------

    def hom(self, X, Y) -> PresentedGroup:
        key = (X, Y)
        g = self._hom_cache.get(key)
        if g is None:
            dim, gens, nulls = self.hom_data(X, Y)
            g = PresentedGroup(self.mod, dim, gens, nulls)
            self._hom_cache[key] = g
        return g

    def identity(self, X) -> Mor:
        return self.mor_from_raw(X, X, self.identity_raw(X))

    def zero_mor(self, X, Y) -> Mor:
        return self.mor_from_raw(X, Y, self.hom(X, Y).zero())

    def compose(self, g: Mor, f: Mor) -> Mor:
        if f.dst != g.src:
            raise ValueError(f"not composable: {self.obj_label(f.dst)} vs {self.obj_label(g.src)}")
        raw = self.compose_raw(f.src, f.dst, g.dst, self.raw_of(g), self.raw_of(f))
        return self.mor_from_raw(f.src, g.dst, raw)

    def add(self, f: Mor, g: Mor) -> Mor:
        if f.src != g.src or f.dst != g.dst:
            raise ValueError("cannot add non-parallel morphisms")
        return self.mor_from_raw(f.src, f.dst, self.raw_of(f) + self.raw_of(g))

    def negate(self, f: Mor) -> Mor:
        return self.mor_from_raw(f.src, f.dst, -self.raw_of(f))

    def scale(self, f: Mor, k: int) -> Mor:
        return self.mor_from_raw(f.src, f.dst, self.raw_of(f).scale(k))

    def is_zero_mor(self, f: Mor) -> bool:
        return self.hom(f.src, f.dst).is_zero(self.raw_of(f))

    def is_zero_obj(self, X) -> bool:
        return self.identity(X).is_zero()

    def eq_mor(self, f: Mor, g: Mor) -> bool:
        return f == g

    def pre_matrix(self, f: Mor, Z) -> Mat:
        """Matrix of h |-> h o f from raw hom(f.dst, Z) to raw hom(f.src, Z)."""
        key = (f, Z)
        M = self._pre_cache.get(key)
        if M is None:
            dim_in = self.hom(f.dst, Z).dim
            fraw = self.raw_of(f)
            rows = [
                self.compose_raw(f.src, f.dst, Z, _basis_row(self.mod, dim_in, i), fraw)
                for i in range(dim_in)
            ]
            M = vstack(rows) if rows else Mat.zeros(self.mod, 0, self.hom(f.src, Z).dim)
            self._pre_cache[key] = M
        return M

    def post_matrix(self, g: Mor, W) -> Mat:
        """Matrix of h |-> g o h from raw hom(W, g.src) to raw hom(W, g.dst)."""
        key = (g, W)
        M = self._post_cache.get(key)
        if M is None:
            dim_in = self.hom(W, g.src).dim
            graw = self.raw_of(g)
            rows = [
                self.compose_raw(W, g.src, g.dst, graw, _basis_row(self.mod, dim_in, i))
                for i in range(dim_in)
            ]
            M = vstack(rows) if rows else Mat.zeros(self.mod, 0, self.hom(W, g.dst).dim)
            self._post_cache[key] = M
        return M

    def hom_elements(self, X, Y, cap: int = 100_000) -> List[Mor]:
        return [self.mor_from_raw(X, Y, v) for v in self.hom(X, Y).elements(cap)]

    def random_mor(self, X, Y, rng: random.Random) -> Mor:
        return self.mor_from_raw(X, Y, self.hom(X, Y).random_element(rng))

    def inverse_of(self, f: Mor) -> Optional[Mor]:
        """Two-sided inverse, or None; a single linear solve."""
        prob = MorProblem(self)
        g = prob.unknown(f.dst, f.src)
        prob.add_eq([(g, f, None, 1)], self.identity(f.dst))  # f o g = id
        prob.add_eq([(g, None, f, 1)], self.identity(f.src))  # g o f = id
        sol = prob.solve()
        return None if sol is None else sol.mor(g)

    def is_isomorphism(self, f: Mor) -> bool:
        return self.inverse_of(f) is not None

    def find_splitting(self, e: Mor, bound: int, cap: int = 100_000) -> Optional[Splitting]:
        """Deterministic exhaustive splitting search within the object bound.

        Enumerates candidate objects Y and retraction candidates r in the
        subgroup {r : r o e = r}, solving linearly for the section s.  An
        absent result is exhaustive for the candidates within `bound`.
        """
        if not e.is_idempotent():
            raise ValueError("find_splitting requires an idempotent endomorphism")
        X = e.src
        for Y in self.splitting_candidates(X, bound):
            prob = MorProblem(self)
            r = prob.unknown(X, Y)
            prob.add_eq([(r, None, e, 1), (r, None, None, -1)], self.zero_mor(X, Y))
            for rmor in prob.solution_mors(r, cap=cap):
                sprob = MorProblem(self)
                s = sprob.unknown(Y, X)
                sprob.add_eq([(s, None, rmor, 1)], e)  # s o r = e
                sprob.add_eq([(s, rmor, None, 1)], self.identity(Y))  # r o s = id
                sol = sprob.solve()
                if sol is not None:
                    smor = sol.mor(s)
                    split = Splitting(Y, rmor, smor)
                    assert split.check(e)
                    return split
        return None


def _basis_row(mod: int, dim: int, i: int) -> Mat:
    import numpy as np

    v = np.zeros((1, dim), dtype=np.int64)
    v[0, i] = 1
    return Mat(mod, v)


def _local_image_basis(e, p: int, q: int):
    """Unit-pivot basis of the column span of an idempotent matrix over Z/q, q = p^k.

    Over the local ring the image of an idempotent is free; the basis is
    extracted by repeated unit-pivot column reduction.
    """
    import numpy as np

    n = e.shape[0]
    cols = [np.array(e[:, j]) % q for j in range(n)]
    basis = []  # (pivot_row, column)
    changed = True
    while changed:
        changed = False
        for idx, v in enumerate(cols):
            if v is None:
                continue
            w = v.copy()
            for (pr, b) in basis:
                w = (w - int(w[pr]) * b) % q
            unit_rows = [i for i in range(n) if int(w[i]) % p != 0]
            if unit_rows:
                pr = unit_rows[0]
                inv = pow(int(w[pr]), -1, q)
                b = (w * inv) % q
                # keep the basis reduced: clear the new pivot row everywhere
                basis = [(opr, (ob - int(ob[pr]) * b) % q) for (opr, ob) in basis]
                basis.append((pr, b))
                cols[idx] = None
                changed = True
            elif not w.any():
                cols[idx] = None
                changed = True
    for v in cols:
        if v is not None:
            raise ValueError("idempotent image over a local ring failed to be free")
    return [b for (_, b) in basis]


# -- morphism-level linear problems ----------------------------------


@dataclass(frozen=True)
class UnknownHom:
    index: int
    src: object
    dst: object


class MorProblem:
    """Joint linear system whose unknowns are morphisms of one category.

    A term (u, post, pre, k) contributes k * (post o u o pre); None means
    identity on that side.  Equations hold in the hom-group of the target
    pair, i.e. modulo its null subgroup.
    """

    def __init__(self, cat: Category):
        self.cat = cat
        self.lp = LinearProblem(cat.mod)
        self._unknowns: List[UnknownHom] = []
        self._eq_pairs: List[Tuple[object, object]] = []

    def unknown(self, X, Y) -> UnknownHom:
        grp = self.cat.hom(X, Y)
        idx = self.lp.unknown(grp.gens)
        u = UnknownHom(idx, X, Y)
        self._unknowns.append(u)
        return u

    def _term_matrix(self, u: UnknownHom, post: Optional[Mor], pre: Optional[Mor], k: int) -> Tuple[Mat, object, object]:
        cat = self.cat
        src, dst = u.src, u.dst
        M = None
        if post is not None:
            if post.src != dst:
                raise ValueError("post-composition source mismatch")
            M = cat.post_matrix(post, src)
            dst = post.dst
        if pre is not None:
            if pre.dst != src:
                raise ValueError("pre-composition target mismatch")
            P = cat.pre_matrix(pre, dst)
            M = P if M is None else M @ P
            src = pre.src
        if M is None:
            M = Mat.identity(cat.mod, cat.hom(src, dst).dim)
        if k % cat.mod != 1:
            M = M.scale(k)
        return M, src, dst

    def add_eq(self, terms: Sequence[Tuple[UnknownHom, Optional[Mor], Optional[Mor], int]], rhs: Mor):
        cat = self.cat
        lp_terms = []
        pair = (rhs.src, rhs.dst)
        for (u, post, pre, k) in terms:
            M, src, dst = self._term_matrix(u, post, pre, k)
            if (src, dst) != pair:
                raise ValueError(
                    f"term lands in hom({cat.obj_label(src)},{cat.obj_label(dst)}) "
                    f"but equation is in hom({cat.obj_label(pair[0])},{cat.obj_label(pair[1])})"
                )
            lp_terms.append((u.index, M))
        grp = cat.hom(*pair)
        self.lp.equation(lp_terms, cat.raw_of(rhs), grp.nulls if grp.nulls.rows else None)
        self._eq_pairs.append(pair)

    def solve(self, rng: Optional[random.Random] = None) -> Optional["MorSolution"]:
        sol = self.lp.solve(rng)
        return None if sol is None else MorSolution(self, sol)

    def solution_mors(self, u: UnknownHom, cap: int = 100_000) -> Iterable[Mor]:
        """All values of one unknown over the full solution set, deduplicated."""
        sol, kernel = self.lp.solution_space()
        if sol is None:
            return []
        base = MorSolution(self, sol).mor(u)
        if kernel is None or kernel.nrows == 0:
            return [base]
        seen = {}
        for krow in kernel.enumerate(cap):
            v = MorSolution(self, sol.shifted(krow)).mor(u)
            seen.setdefault((v.src, v.dst, v.data), v)
        out = [seen[k] for k in sorted(seen, key=lambda t: repr(t))]
        return out


class MorSolution:
    def __init__(self, problem: MorProblem, sol):
        self.problem = problem
        self.sol = sol

    def mor(self, u: UnknownHom) -> Mor:
        raw = self.sol.value(u.index)
        return self.problem.cat.mor_from_raw(u.src, u.dst, raw)


# -- free modules over Z/m -------------------------------------------


class FreeModCategory(Category):
    """Finitely generated free Z/m-modules; objects are ranks, morphisms matrices.

    A morphism r -> s is an s x r matrix acting on column vectors, so
    composition is matrix multiplication.
    """

    def __init__(self, mod: int):
        super().__init__(mod)

    def __repr__(self):
        return f"FreeMod({self.mod})"

    def zero_obj(self):
        return 0

    def obj_label(self, X) -> str:
        return f"F{X}"

    def objects_upto(self, bound: int) -> List[int]:
        return list(range(bound + 1))

    def additive_generators(self, bound: int) -> List[int]:
        return [1] if bound >= 1 else []

    def make(self, src: int, dst: int, rows) -> Mor:
        M = Mat.from_rows(self.mod, rows) if rows else Mat.zeros(self.mod, dst, src)
        if M.shape != (dst, src):
            raise ValueError(f"expected shape {(dst, src)}, got {M.shape}")
        return Mor(self, src, dst, M)

    def matrix(self, f: Mor) -> Mat:
        return f.data

    def hom_data(self, X, Y):
        dim = X * Y
        return dim, Mat.identity(self.mod, dim), Mat.zeros(self.mod, 0, dim)

    def raw_of(self, f: Mor) -> Mat:
        return f.data.flat()

    def mor_from_raw(self, X, Y, raw: Mat) -> Mor:
        return Mor(self, X, Y, raw.reshape(Y, X))

    def identity_raw(self, X) -> Mat:
        return Mat.identity(self.mod, X).flat()

    def compose_raw(self, X, Y, Z, g_raw: Mat, f_raw: Mat) -> Mat:
        g = g_raw.reshape(Z, Y)
        f = f_raw.reshape(Y, X)
        return (g @ f).flat()

    def compose(self, g: Mor, f: Mor) -> Mor:
        if f.dst != g.src:
            raise ValueError(f"not composable: {f.dst} vs {g.src}")
        return Mor(self, f.src, g.dst, g.data @ f.data)

    def add(self, f: Mor, g: Mor) -> Mor:
        if f.src != g.src or f.dst != g.dst:
            raise ValueError("cannot add non-parallel morphisms")
        return Mor(self, f.src, f.dst, f.data + g.data)

    def negate(self, f: Mor) -> Mor:
        return Mor(self, f.src, f.dst, -f.data)

    def pre_matrix(self, f: Mor, Z) -> Mat:
        key = (f, Z)
        M = self._pre_cache.get(key)
        if M is None:
            import numpy as np

            M = Mat._wrap(self.mod, np.kron(np.eye(Z, dtype=np.int64), f.data.a) % self.mod)
            self._pre_cache[key] = M
        return M

    def post_matrix(self, g: Mor, W) -> Mat:
        key = (g, W)
        M = self._post_cache.get(key)
        if M is None:
            import numpy as np

            M = Mat._wrap(self.mod, np.kron(g.data.a.T, np.eye(W, dtype=np.int64)) % self.mod)
            self._post_cache[key] = M
        return M

    def biproduct(self, X, Y) -> Biproduct:
        XY = X + Y
        i1 = Mor(self, X, XY, vstack([Mat.identity(self.mod, X), Mat.zeros(self.mod, Y, X)]))
        i2 = Mor(self, Y, XY, vstack([Mat.zeros(self.mod, X, Y), Mat.identity(self.mod, Y)]))
        p1 = Mor(self, XY, X, hstack([Mat.identity(self.mod, X), Mat.zeros(self.mod, X, Y)]))
        p2 = Mor(self, XY, Y, hstack([Mat.zeros(self.mod, Y, X), Mat.identity(self.mod, Y)]))
        return Biproduct(XY, i1, i2, p1, p2)

    def find_splitting(self, e: Mor, bound: int = 0, cap: int = 100_000) -> Optional[Splitting]:
        """Exact decision via prime-local images: an idempotent matrix splits
        iff its image is free, iff the local image ranks agree across the
        prime factors of m.  Decides for all ranks, independent of `bound`."""
        if not e.is_idempotent():
            raise ValueError("find_splitting requires an idempotent endomorphism")
        import math

        m = self.mod
        n = e.src
        factors = []
        rest = m
        p = 2
        while rest > 1:
            if rest % p == 0:
                q = 1
                while rest % p == 0:
                    q *= p
                    rest //= p
                factors.append((p, q))
            p += 1
        locals_ = []
        rank = None
        for (p, q) in factors:
            basis = _local_image_basis(e.data.a % q, p, q)
            if rank is None:
                rank = len(basis)
            elif rank != len(basis):
                return None  # image not free: local ranks disagree
            locals_.append((q, basis))
        if rank is None:
            rank = 0
        import numpy as np

        s_arr = np.zeros((n, rank), dtype=np.int64)
        for (q, basis) in locals_:
            c = (m // q) * pow(m // q, -1, q)  # CRT idempotent: 1 mod q, 0 elsewhere
            if basis:
                s_arr = (s_arr + c * np.column_stack(basis)) % m
        s = Mor(self, rank, n, Mat(self.mod, s_arr))
        from .zmod import solve_linear

        r_mat = None
        if rank:
            r_mat = solve_linear(Mat(self.mod, s_arr), e.data, side="right")
            if r_mat is None:
                return None
        r = Mor(self, n, rank, r_mat if r_mat is not None else Mat.zeros(self.mod, 0, n))
        split = Splitting(rank, r, s)
        if not split.check(e):
            return None
        return split
