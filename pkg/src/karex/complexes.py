"""Complexes concentrated in degrees 0..n+1, chain maps, homotopies, cones.

All solving (homotopies, factorisations through weak (co)kernels, lifts with
prescribed end components) is done by assembling one joint linear system over
the category's hom-groups rather than greedily per degree: per-degree solving
can fail on instances where a joint solution exists.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .category import Biproduct, Category, Mor, MorProblem
from .zmod import Mat


class ComplexN:
    """X_0 -> X_1 -> ... -> X_{n+1} with d_{i+1} o d_i = 0."""

    __slots__ = ("cat", "n", "objs", "diffs", "_hash")

    def __init__(self, cat: Category, n: int, objs: Sequence[object], diffs: Sequence[Mor], check: bool = True):
        if n < 1:
            raise ValueError("n must be >= 1")
        if len(objs) != n + 2 or len(diffs) != n + 1:
            raise ValueError(f"need {n + 2} objects and {n + 1} differentials")
        self.cat = cat
        self.n = n
        self.objs = tuple(objs)
        self.diffs = tuple(diffs)
        self._hash = None
        if check:
            for i, d in enumerate(self.diffs):
                if d.src != self.objs[i] or d.dst != self.objs[i + 1]:
                    raise ValueError(f"differential {i} has wrong endpoints")
            for i in range(n):
                if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                    raise ValueError(f"d_{i + 1} o d_{i} != 0")

    def __eq__(self, other):
        return (
            isinstance(other, ComplexN)
            and self.cat is other.cat
            and self.n == other.n
            and self.objs == other.objs
            and self.diffs == other.diffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.cat), self.n, self.objs, self.diffs))
        return self._hash

    @property
    def ends(self):
        return self.objs[0], self.objs[-1]

    def __repr__(self):
        labels = " -> ".join(self.cat.obj_label(X) for X in self.objs)
        return f"ComplexN[{labels}]"


class ChainMap:
    __slots__ = ("src", "dst", "mors", "_hash")

    def __init__(self, src: ComplexN, dst: ComplexN, mors: Sequence[Mor], check: bool = True):
        if src.n != dst.n or len(mors) != src.n + 2:
            raise ValueError("levelwise morphism count mismatch")
        self.src = src
        self.dst = dst
        self.mors = tuple(mors)
        self._hash = None
        if check:
            for i, f in enumerate(self.mors):
                if f.src != src.objs[i] or f.dst != dst.objs[i]:
                    raise ValueError(f"level {i} morphism has wrong endpoints")
            for i in range(src.n + 1):
                if self.mors[i + 1] @ src.diffs[i] != dst.diffs[i] @ self.mors[i]:
                    raise ValueError(f"square {i} does not commute")

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self.src == other.src and self.dst == other.dst and self.mors == other.mors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.src, self.dst, self.mors))
        return self._hash

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.dst != self.src:
            raise ValueError("chain maps not composable")
        return ChainMap(other.src, self.dst, [f @ g for f, g in zip(self.mors, other.mors)], check=False)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.src, self.dst, [f + g for f, g in zip(self.mors, other.mors)], check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.src, self.dst, [f - g for f, g in zip(self.mors, other.mors)], check=False)

    def __neg__(self):
        return ChainMap(self.src, self.dst, [-f for f in self.mors], check=False)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.mors)

    def is_idempotent(self) -> bool:
        return self.src == self.dst and self @ self == self

    def has_fixed_ends(self) -> bool:
        cat = self.src.cat
        return self.mors[0] == cat.identity(self.src.objs[0]) and self.mors[-1] == cat.identity(self.src.objs[-1])

    def __repr__(self):
        return f"ChainMap({self.src!r} => {self.dst!r})"


def identity_chain_map(X: ComplexN) -> ChainMap:
    return ChainMap(X, X, [X.cat.identity(O) for O in X.objs], check=False)


def zero_chain_map(X: ComplexN, Y: ComplexN) -> ChainMap:
    return ChainMap(X, Y, [X.cat.zero_mor(a, b) for a, b in zip(X.objs, Y.objs)], check=False)


class Homotopy:
    """h_i : X_i -> Y_{i-1} for 1 <= i <= n+1, witnessing f ~ g."""

    __slots__ = ("src", "dst", "mors")

    def __init__(self, src: ComplexN, dst: ComplexN, mors: Sequence[Mor]):
        if len(mors) != src.n + 1:
            raise ValueError("homotopy needs n+1 components")
        self.src = src
        self.dst = dst
        self.mors = tuple(mors)

    def component(self, i: int) -> Mor:
        """h_i for 1 <= i <= n+1."""
        return self.mors[i - 1]

    def boundary(self) -> ChainMap:
        """The null-homotopic chain map h d + d h this homotopy bounds."""
        X, Y = self.src, self.dst
        n = X.n
        out = []
        for i in range(n + 2):
            t = X.cat.zero_mor(X.objs[i], Y.objs[i])
            if i <= n:
                t = t + self.component(i + 1) @ X.diffs[i]
            if i >= 1:
                t = t + Y.diffs[i - 1] @ self.component(i)
            out.append(t)
        return ChainMap(X, Y, out, check=False)

    def witnesses(self, f: ChainMap, g: ChainMap) -> bool:
        return (f - g) == self.boundary()


def triv(cat: Category, n: int, i: int, X) -> ComplexN:
    """X in degrees i, i+1 with identity differential, zero elsewhere."""
    if not 0 <= i <= n:
        raise ValueError(f"degree must be in 0..{n}, got {i}")
    Z = cat.zero_obj()
    objs = [X if j in (i, i + 1) else Z for j in range(n + 2)]
    diffs = []
    for j in range(n + 1):
        if j == i:
            diffs.append(cat.identity(X))
        else:
            diffs.append(cat.zero_mor(objs[j], objs[j + 1]))
    return ComplexN(cat, n, objs, diffs, check=False)


def direct_sum(X: ComplexN, Y: ComplexN):
    """(X + Y, inj_X, inj_Y, proj_X, proj_Y) with levelwise biproducts."""
    cat = X.cat
    bps = [cat.biproduct(a, b) for a, b in zip(X.objs, Y.objs)]
    objs = [bp.obj for bp in bps]
    diffs = []
    for i in range(X.n + 1):
        d = bps[i + 1].i1 @ X.diffs[i] @ bps[i].p1 + bps[i + 1].i2 @ Y.diffs[i] @ bps[i].p2
        diffs.append(d)
    XY = ComplexN(cat, X.n, objs, diffs, check=False)
    iX = ChainMap(X, XY, [bp.i1 for bp in bps], check=False)
    iY = ChainMap(Y, XY, [bp.i2 for bp in bps], check=False)
    pX = ChainMap(XY, X, [bp.p1 for bp in bps], check=False)
    pY = ChainMap(XY, Y, [bp.p2 for bp in bps], check=False)
    return XY, iX, iY, pX, pY


def mapping_cone(f: ChainMap) -> Tuple[ComplexN, List[Biproduct]]:
    """Cone of f : X -> Y with f_0 = id; degrees X_1, X_2+Y_1, ..., X_{n+1}+Y_n, Y_{n+1}.

    Returns the cone together with the biproduct witnesses of its middle
    terms (index i holds the biproduct X_{i+1} + Y_i for 1 <= i <= n).
    """
    X, Y = f.src, f.dst
    cat = X.cat
    n = X.n
    if f.mors[0] != cat.identity(X.objs[0]):
        raise ValueError("mapping cone needs f_0 = id")
    bps: List[Optional[Biproduct]] = [None] * (n + 1)
    objs = [X.objs[1]]
    for i in range(1, n + 1):
        bp = cat.biproduct(X.objs[i + 1], Y.objs[i])
        bps[i] = bp
        objs.append(bp.obj)
    objs.append(Y.objs[n + 1])
    diffs = []
    if n == 1:
        d0 = bps[1].i1 @ (-X.diffs[1]) + bps[1].i2 @ f.mors[1]
        dn = f.mors[2] @ bps[1].p1 + Y.diffs[1] @ bps[1].p2
        diffs = [d0, dn]
    else:
        d0 = bps[1].i1 @ (-X.diffs[1]) + bps[1].i2 @ f.mors[1]
        diffs.append(d0)
        for i in range(1, n):
            d = (
                bps[i + 1].i1 @ (-X.diffs[i + 1]) @ bps[i].p1
                + bps[i + 1].i2 @ f.mors[i + 1] @ bps[i].p1
                + bps[i + 1].i2 @ Y.diffs[i] @ bps[i].p2
            )
            diffs.append(d)
        dn = f.mors[n + 1] @ bps[n].p1 + Y.diffs[n] @ bps[n].p2
        diffs.append(dn)
    return ComplexN(cat, n, objs, diffs), bps


def mapping_cocone(f: ChainMap) -> Tuple[ComplexN, List[Biproduct]]:
    """Dual cone of f : X -> Y with f_{n+1} = id; degrees X_0, Y_0+X_1, ..., Y_{n-1}+X_n, Y_n."""
    X, Y = f.src, f.dst
    cat = X.cat
    n = X.n
    if f.mors[n + 1] != cat.identity(X.objs[n + 1]):
        raise ValueError("mapping cocone needs f_{n+1} = id")
    bps: List[Optional[Biproduct]] = [None] * (n + 1)
    objs = [X.objs[0]]
    for i in range(1, n + 1):
        bp = cat.biproduct(Y.objs[i - 1], X.objs[i])
        bps[i] = bp
        objs.append(bp.obj)
    objs.append(Y.objs[n])
    diffs = []
    d0 = bps[1].i1 @ f.mors[0] + bps[1].i2 @ X.diffs[0]
    diffs.append(d0)
    for i in range(1, n):
        d = (
            bps[i + 1].i1 @ (-Y.diffs[i - 1]) @ bps[i].p1
            + bps[i + 1].i1 @ f.mors[i] @ bps[i].p2
            + bps[i + 1].i2 @ X.diffs[i] @ bps[i].p2
        )
        diffs.append(d)
    dn = (-Y.diffs[n - 1]) @ bps[n].p1 + f.mors[n] @ bps[n].p2
    diffs.append(dn)
    return ComplexN(cat, n, objs, diffs), bps


# -- solving -----------------------------------------------------------


def find_homotopy(f: ChainMap, g: ChainMap, rng: Optional[random.Random] = None) -> Optional[Homotopy]:
    """A homotopy f ~ g, or None.  Decides, since hom-groups are finite."""
    if f.src != g.src or f.dst != g.dst:
        raise ValueError("homotopy requires parallel chain maps")
    X, Y = f.src, f.dst
    cat = X.cat
    n = X.n
    prob = MorProblem(cat)
    hs = [prob.unknown(X.objs[i], Y.objs[i - 1]) for i in range(1, n + 2)]
    for i in range(n + 2):
        terms = []
        if i <= n:
            terms.append((hs[i], None, X.diffs[i], 1))  # h_{i+1} o d_i
        if i >= 1:
            terms.append((hs[i - 1], Y.diffs[i - 1], None, 1))  # d_{i-1} o h_i
        prob.add_eq(terms, f.mors[i] - g.mors[i])
    sol = prob.solve(rng)
    if sol is None:
        return None
    h = Homotopy(X, Y, [sol.mor(u) for u in hs])
    assert h.witnesses(f, g)
    return h


def is_null_homotopic(f: ChainMap) -> bool:
    return find_homotopy(f, zero_chain_map(f.src, f.dst)) is not None


def lift_with_ends(
    X: ComplexN,
    Y: ComplexN,
    fixed: Dict[int, Mor],
    rng: Optional[random.Random] = None,
) -> Optional[ChainMap]:
    """A chain map X -> Y with prescribed components at the given degrees."""
    cat = X.cat
    n = X.n
    prob = MorProblem(cat)
    unknowns = {}
    for i in range(n + 2):
        if i not in fixed:
            unknowns[i] = prob.unknown(X.objs[i], Y.objs[i])

    def term_or_const(i, post, pre, sign, terms, const_parts):
        if i in fixed:
            m = fixed[i]
            if post is not None:
                m = post @ m
            if pre is not None:
                m = m @ pre
            const_parts.append(m if sign > 0 else -m)
        else:
            terms.append((unknowns[i], post, pre, sign))

    for i in range(n + 1):
        # f_{i+1} d_i - d_i f_i = 0
        terms: list = []
        consts: list = []
        term_or_const(i + 1, None, X.diffs[i], 1, terms, consts)
        term_or_const(i, Y.diffs[i], None, -1, terms, consts)
        rhs = cat.zero_mor(X.objs[i], Y.objs[i + 1])
        for c in consts:
            rhs = rhs - c
        prob.add_eq(terms, rhs)
    sol = prob.solve(rng)
    if sol is None:
        return None
    mors = [fixed[i] if i in fixed else sol.mor(unknowns[i]) for i in range(n + 2)]
    return ChainMap(X, Y, mors)


def chain_maps_with_ends(X: ComplexN, Y: ComplexN, fixed: Dict[int, Mor], cap: int = 200_000) -> List[ChainMap]:
    """All chain maps with the prescribed fixed components (bounded enumeration)."""
    cat = X.cat
    n = X.n
    prob = MorProblem(cat)
    unknowns = {}
    for i in range(n + 2):
        if i not in fixed:
            unknowns[i] = prob.unknown(X.objs[i], Y.objs[i])
    for i in range(n + 1):
        terms = []
        rhs = cat.zero_mor(X.objs[i], Y.objs[i + 1])
        if i + 1 in fixed:
            rhs = rhs - fixed[i + 1] @ X.diffs[i]
        else:
            terms.append((unknowns[i + 1], None, X.diffs[i], 1))
        if i in fixed:
            rhs = rhs + Y.diffs[i] @ fixed[i]
        else:
            terms.append((unknowns[i], Y.diffs[i], None, -1))
        prob.add_eq(terms, rhs)
    sol, kernel = prob.lp.solution_space()
    if sol is None:
        return []
    from .category import MorSolution

    out = {}
    solutions = [sol]
    if kernel is not None and kernel.nrows:
        solutions = [sol.shifted(k) for k in kernel.enumerate(cap)]
    for s in solutions:
        ms = MorSolution(prob, s)
        mors = [fixed[i] if i in fixed else ms.mor(unknowns[i]) for i in range(n + 2)]
        cm = ChainMap(X, Y, mors, check=False)
        out.setdefault(tuple(m.data for m in cm.mors), cm)
    return [out[k] for k in sorted(out, key=repr)]


def weak_cokernel_factor(d_prev: Mor, d: Mor, g: Mor) -> Mor:
    """h with h o d = g, given g o d_prev = 0 and d a weak cokernel of d_prev."""
    cat = g.cat
    if not (g @ d_prev).is_zero():
        raise ValueError("weak cokernel factorisation requires g o d_prev = 0")
    prob = MorProblem(cat)
    h = prob.unknown(d.dst, g.dst)
    prob.add_eq([(h, None, d, 1)], g)
    sol = prob.solve()
    if sol is None:
        raise ValueError("weak cokernel factorisation unsolvable; ambient complex is not an n-exangle")
    return sol.mor(h)


def weak_kernel_factor(d: Mor, d_next: Mor, g: Mor) -> Mor:
    """h with d o h = g, given d_next o g = 0 and d a weak kernel of d_next."""
    cat = g.cat
    if not (d_next @ g).is_zero():
        raise ValueError("weak kernel factorisation requires d_next o g = 0")
    prob = MorProblem(cat)
    h = prob.unknown(g.src, d.src)
    prob.add_eq([(h, d, None, 1)], g)
    sol = prob.solve()
    if sol is None:
        raise ValueError("weak kernel factorisation unsolvable; ambient complex is not an n-exangle")
    return sol.mor(h)


# -- homotopy equivalence ----------------------------------------------


@dataclass
class HomotopyEquivalence:
    fwd: ChainMap  # X -> Y
    bwd: ChainMap  # Y -> X
    h_src: Homotopy  # bwd o fwd ~ id_X
    h_dst: Homotopy  # fwd o bwd ~ id_Y

    def check(self) -> bool:
        ok = self.h_src.witnesses(self.bwd @ self.fwd, identity_chain_map(self.fwd.src))
        ok &= self.h_dst.witnesses(self.fwd @ self.bwd, identity_chain_map(self.fwd.dst))
        return ok


def inverse_up_to_homotopy(f: ChainMap, fixed_ends: bool = True) -> Optional[HomotopyEquivalence]:
    """Given f, find g with g f ~ id and f g ~ id (g with identity ends if asked).

    Linear in g jointly with the two homotopies, so this is a single solve.
    """
    X, Y = f.src, f.dst
    cat = X.cat
    n = X.n
    prob = MorProblem(cat)
    fixed = {}
    if fixed_ends:
        fixed = {0: cat.identity(Y.objs[0]), n + 1: cat.identity(Y.objs[n + 1])}
        if Y.objs[0] != X.objs[0] or Y.objs[n + 1] != X.objs[n + 1]:
            raise ValueError("fixed-ends inverse requires equal end objects")
    gs = {}
    for i in range(n + 2):
        if i not in fixed:
            gs[i] = prob.unknown(Y.objs[i], X.objs[i])

    def g_term(i, post, pre, sign, terms, rhs):
        if i in fixed:
            m = fixed[i]
            if post is not None:
                m = post @ m
            if pre is not None:
                m = m @ pre
            return rhs - (m if sign > 0 else -m)
        terms.append((gs[i], post, pre, sign))
        return rhs

    # chain-map law for g
    for i in range(n + 1):
        terms = []
        rhs = cat.zero_mor(Y.objs[i], X.objs[i + 1])
        rhs = g_term(i + 1, None, Y.diffs[i], 1, terms, rhs)
        rhs = g_term(i, X.diffs[i], None, -1, terms, rhs)
        prob.add_eq(terms, rhs)
    # homotopies: g f - id = boundary(h), f g - id = boundary(k)
    hs = [prob.unknown(X.objs[i], X.objs[i - 1]) for i in range(1, n + 2)]
    ks = [prob.unknown(Y.objs[i], Y.objs[i - 1]) for i in range(1, n + 2)]
    for i in range(n + 2):
        terms = []
        rhs = cat.identity(X.objs[i])
        rhs = g_term(i, None, f.mors[i], 1, terms, rhs)  # g_i o f_i
        if i <= n:
            terms.append((hs[i], None, X.diffs[i], -1))
        if i >= 1:
            terms.append((hs[i - 1], X.diffs[i - 1], None, -1))
        prob.add_eq(terms, rhs)
    for i in range(n + 2):
        terms = []
        rhs = cat.identity(Y.objs[i])
        rhs = g_term(i, f.mors[i], None, 1, terms, rhs)  # f_i o g_i
        if i <= n:
            terms.append((ks[i], None, Y.diffs[i], -1))
        if i >= 1:
            terms.append((ks[i - 1], Y.diffs[i - 1], None, -1))
        prob.add_eq(terms, rhs)
    sol = prob.solve()
    if sol is None:
        return None
    gmors = [fixed[i] if i in fixed else sol.mor(gs[i]) for i in range(n + 2)]
    g = ChainMap(Y, X, gmors)
    h = Homotopy(X, X, [sol.mor(u) for u in hs])
    k = Homotopy(Y, Y, [sol.mor(u) for u in ks])
    eq = HomotopyEquivalence(f, g, h, k)
    assert eq.check()
    return eq


def find_homotopy_equivalence(
    X: ComplexN,
    Y: ComplexN,
    fixed_ends: bool = True,
    cap: int = 20_000,
) -> Optional[HomotopyEquivalence]:
    """Search for a homotopy equivalence X ~ Y (with identity end components).

    Enumerates candidates f with the prescribed ends (bounded), then tries to
    invert each one up to homotopy; the inversion is a single linear solve.
    """
    if fixed_ends and (X.objs[0] != Y.objs[0] or X.objs[-1] != Y.objs[-1]):
        return None
    cat = X.cat
    n = X.n
    fixed = {}
    if fixed_ends:
        fixed = {0: cat.identity(X.objs[0]), n + 1: cat.identity(X.objs[n + 1])}
    for f in chain_maps_with_ends(X, Y, fixed, cap=cap):
        eq = inverse_up_to_homotopy(f, fixed_ends)
        if eq is not None:
            return eq
    return None


# -- induced complexes in the idempotent completion ---------------------


def induce_karoubi_complex(kar, X: ComplexN, e: ChainMap) -> ComplexN:
    """Complex over the completion with objects (X_i, e_i), differentials e d e."""
    if not e.is_idempotent():
        raise ValueError("inducing a completion complex requires an idempotent chain map")
    if e.src != X:
        raise ValueError("idempotent must be an endomorphism of the complex")
    objs = [kar.obj(X.objs[i], e.mors[i]) for i in range(X.n + 2)]
    diffs = [kar.induced(objs[i], objs[i + 1], X.diffs[i]) for i in range(X.n + 1)]
    return ComplexN(kar, X.n, objs, diffs)


def induce_karoubi_chain_map(kar, src: ComplexN, dst: ComplexN, r: ChainMap) -> ChainMap:
    """Levelwise e' r e between induced complexes; verifies the chain-map law."""
    mors = [kar.induced(src.objs[i], dst.objs[i], r.mors[i]) for i in range(src.n + 2)]
    return ChainMap(src, dst, mors)


def include_complex(kar, X: ComplexN) -> ComplexN:
    objs = [kar.include_obj(O) for O in X.objs]
    diffs = [kar.include_mor(d) for d in X.diffs]
    return ComplexN(kar, X.n, objs, diffs, check=False)
