"""Table-driven categories and structures, with a JSON interchange format.

A table lists generator objects, hom-module orders, composition structure
constants, and optionally an extension bifunctor with its actions plus a
realisation table.  The category served to the rest of the package is the
additive closure: objects are finite tuples of generators and morphisms are
matrices of coordinate vectors, so biproducts exist by construction.

Hom modules are quotients: a module with orders (d_1, ..., d_k), each
dividing m, is carried on (Z/m)^k with null rows d_i * e_i.  Free modules
are the special case with every order equal to m, and completed-category
exports use the general case.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .category import Biproduct, Category, Mor
from .complexes import ComplexN, direct_sum, triv
from .exangulated import Exangle, ExangStructure, Extension, act_left, act_right
from .presented import PresentedGroup
from .zmod import Mat


class TableError(ValueError):
    """Invalid table data; carries a slash-separated location tag."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _orders_nulls(mod: int, orders: Sequence[int]) -> Mat:
    rows = []
    for i, d in enumerate(orders):
        if d != mod:
            row = np.zeros(len(orders), dtype=np.int64)
            row[i] = d
            rows.append(row)
    return Mat(mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(mod, 0, len(orders))


class TabCategory(Category):
    """Additive closure of a composition table; objects are generator tuples."""

    def __init__(self, mod: int, generators: Sequence[str], hom_orders, identity_coords, compose_tensors):
        super().__init__(mod)
        self.generators = list(generators)
        self.hom_orders = {k: tuple(v) for k, v in hom_orders.items()}  # (g, h) -> orders
        self.identity_coords = {g: tuple(v) for g, v in identity_coords.items()}
        self.compose_tensors = compose_tensors  # (g, h, k) -> tensor[i][j] = coords
        self._layout_cache = {}

    def __repr__(self):
        return f"Tab(Z/{self.mod}, {len(self.generators)} generators)"

    def orders(self, g: str, h: str) -> Tuple[int, ...]:
        return self.hom_orders.get((g, h), ())

    def zero_obj(self):
        return ()

    def obj_label(self, X) -> str:
        return "0" if not X else "+".join(X)

    def objects_upto(self, bound: int) -> List[tuple]:
        import itertools

        out = [()]
        for length in range(1, bound + 1):
            for combo in itertools.product(self.generators, repeat=length):
                out.append(tuple(combo))
        return out

    def additive_generators(self, bound: int) -> List[tuple]:
        return [(g,) for g in self.generators]

    def _layout(self, X: tuple, Y: tuple):
        key = (X, Y)
        got = self._layout_cache.get(key)
        if got is None:
            offs = {}
            pos = 0
            for i, y in enumerate(Y):
                for j, x in enumerate(X):
                    k = len(self.orders(x, y))
                    offs[(i, j)] = (pos, k)
                    pos += k
            got = (offs, pos)
            self._layout_cache[key] = got
        return got

    def hom_data(self, X: tuple, Y: tuple):
        offs, dim = self._layout(X, Y)
        nulls_rows = []
        for i, y in enumerate(Y):
            for j, x in enumerate(X):
                pos, k = offs[(i, j)]
                for t, d in enumerate(self.orders(x, y)):
                    if d != self.mod:
                        row = np.zeros(dim, dtype=np.int64)
                        row[pos + t] = d
                        nulls_rows.append(row)
        nulls = Mat(self.mod, np.array(nulls_rows, dtype=np.int64)) if nulls_rows else Mat.zeros(self.mod, 0, dim)
        return dim, Mat.identity(self.mod, dim), nulls

    def block(self, X, Y, raw: Mat, i: int, j: int) -> Tuple[int, ...]:
        offs, _ = self._layout(X, Y)
        pos, k = offs[(i, j)]
        return tuple(int(v) for v in raw.a[0, pos : pos + k])

    def from_blocks(self, X, Y, blocks: Dict[Tuple[int, int], Sequence[int]]) -> Mat:
        offs, dim = self._layout(X, Y)
        out = np.zeros(dim, dtype=np.int64)
        for (i, j), coords in blocks.items():
            pos, k = offs[(i, j)]
            if len(coords) != k:
                raise ValueError("block coordinate length mismatch")
            out[pos : pos + k] = [int(c) for c in coords]
        return Mat(self.mod, out.reshape(1, -1))

    def raw_of(self, f: Mor) -> Mat:
        return f.data

    def mor_from_raw(self, X, Y, raw: Mat) -> Mor:
        return Mor(self, X, Y, self.hom(X, Y).canon(raw))

    def identity_raw(self, X) -> Mat:
        blocks = {}
        for j, x in enumerate(X):
            blocks[(j, j)] = self.identity_coords[x]
        return self.from_blocks(X, X, blocks)

    def _pair_compose(self, x: str, y: str, z: str, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
        """coords of (b o a) for a : x -> y, b : y -> z."""
        out = np.zeros(len(self.orders(x, z)), dtype=np.int64)
        tensor = self.compose_tensors.get((x, y, z))
        if tensor is None:
            return out
        for i, ai in enumerate(a):
            if ai % self.mod == 0:
                continue
            for j, bj in enumerate(b):
                if bj % self.mod == 0:
                    continue
                out = (out + ai * bj * np.array(tensor[i][j], dtype=np.int64)) % self.mod
        return out

    def compose_raw(self, X, Y, Z, g_raw: Mat, f_raw: Mat) -> Mat:
        blocks = {}
        for i, z in enumerate(Z):
            for j, x in enumerate(X):
                k = len(self.orders(x, z))
                acc = np.zeros(k, dtype=np.int64)
                for t, y in enumerate(Y):
                    a = self.block(X, Y, f_raw, t, j)
                    b = self.block(Y, Z, g_raw, i, t)
                    acc = (acc + self._pair_compose(x, y, z, a, b)) % self.mod
                blocks[(i, j)] = acc
        return self.from_blocks(X, Z, blocks)

    def biproduct(self, X, Y) -> Biproduct:
        XY = tuple(X) + tuple(Y)
        i1 = self.from_blocks(X, XY, {(j, j): self.identity_coords[x] for j, x in enumerate(X)})
        i2 = self.from_blocks(Y, XY, {(len(X) + j, j): self.identity_coords[y] for j, y in enumerate(Y)})
        p1 = self.from_blocks(XY, X, {(j, j): self.identity_coords[x] for j, x in enumerate(X)})
        p2 = self.from_blocks(XY, Y, {(j, len(X) + j): self.identity_coords[y] for j, y in enumerate(Y)})
        return Biproduct(
            XY,
            self.mor_from_raw(X, XY, i1),
            self.mor_from_raw(Y, XY, i2),
            self.mor_from_raw(XY, X, p1),
            self.mor_from_raw(XY, Y, p2),
        )


class TabStructure(ExangStructure):
    """Extension data over a table category, biadditively extended to sums."""

    def __init__(self, cat: TabCategory, n: int, ext_orders, act_left_tensors, act_right_tensors, realize_table):
        super().__init__(cat, n)
        self.ext_orders = {k: tuple(v) for k, v in ext_orders.items()}  # (c, a) -> orders
        self.act_left_tensors = act_left_tensors  # (c, a, b) -> tensor[hom basis][ext basis] = coords
        self.act_right_tensors = act_right_tensors  # (d, c, a) -> tensor[hom basis][ext basis] = coords
        self.realize_table = realize_table  # (c, a) -> {coords tuple: ComplexN}
        self._ext_layout_cache = {}

    def __repr__(self):
        return f"TabStructure({self.cat!r}, n={self.n})"

    def eorders(self, c: str, a: str) -> Tuple[int, ...]:
        return self.ext_orders.get((c, a), ())

    def _ext_layout(self, C: tuple, A: tuple):
        key = (C, A)
        got = self._ext_layout_cache.get(key)
        if got is None:
            offs = {}
            pos = 0
            for i, c in enumerate(C):
                for j, a in enumerate(A):
                    k = len(self.eorders(c, a))
                    offs[(i, j)] = (pos, k)
                    pos += k
            got = (offs, pos)
            self._ext_layout_cache[key] = got
        return got

    def ext_data(self, C: tuple, A: tuple):
        offs, dim = self._ext_layout(C, A)
        rows = []
        for i, c in enumerate(C):
            for j, a in enumerate(A):
                pos, k = offs[(i, j)]
                for t, d in enumerate(self.eorders(c, a)):
                    if d != self.cat.mod:
                        row = np.zeros(dim, dtype=np.int64)
                        row[pos + t] = d
                        rows.append(row)
        nulls = Mat(self.cat.mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(self.cat.mod, 0, dim)
        return dim, Mat.identity(self.cat.mod, dim), nulls

    def ext_block(self, delta: Extension, i: int, j: int) -> Tuple[int, ...]:
        offs, _ = self._ext_layout(delta.C, delta.A)
        pos, k = offs[(i, j)]
        return tuple(int(v) for v in delta.raw.a[0, pos : pos + k])

    def _tensor_apply(self, tensor, mcoords, ecoords, out_len: int) -> np.ndarray:
        out = np.zeros(out_len, dtype=np.int64)
        if tensor is None:
            return out
        for i, mi in enumerate(mcoords):
            if mi % self.cat.mod == 0:
                continue
            for j, ej in enumerate(ecoords):
                if ej % self.cat.mod == 0:
                    continue
                out = (out + mi * ej * np.array(tensor[i][j], dtype=np.int64)) % self.cat.mod
        return out

    def _act_left_raw(self, A, B, a_raw: Mat, C, e_raw: Mat) -> Mat:
        cat: TabCategory = self.cat
        offs_out, dim_out = self._ext_layout(C, B)
        out = np.zeros(dim_out, dtype=np.int64)
        for i, c in enumerate(C):
            for jb, b in enumerate(B):
                pos, k = offs_out[(i, jb)]
                acc = np.zeros(k, dtype=np.int64)
                for ja, a in enumerate(A):
                    m = cat.block(A, B, a_raw, jb, ja)
                    offs_in, _ = self._ext_layout(C, A)
                    p_in, k_in = offs_in[(i, ja)]
                    e = tuple(int(v) for v in e_raw.a[0, p_in : p_in + k_in])
                    acc = (acc + self._tensor_apply(self.act_left_tensors.get((c, a, b)), m, e, k)) % cat.mod
                out[pos : pos + k] = acc
        return Mat(cat.mod, out.reshape(1, -1))

    def _act_right_raw(self, D, C, d_raw: Mat, A, e_raw: Mat) -> Mat:
        cat: TabCategory = self.cat
        offs_out, dim_out = self._ext_layout(D, A)
        out = np.zeros(dim_out, dtype=np.int64)
        for idd, dg in enumerate(D):
            for j, a in enumerate(A):
                pos, k = offs_out[(idd, j)]
                acc = np.zeros(k, dtype=np.int64)
                for ic, c in enumerate(C):
                    m = cat.block(D, C, d_raw, ic, idd)
                    offs_in, _ = self._ext_layout(C, A)
                    p_in, k_in = offs_in[(ic, j)]
                    e = tuple(int(v) for v in e_raw.a[0, p_in : p_in + k_in])
                    acc = (acc + self._tensor_apply(self.act_right_tensors.get((dg, c, a)), m, e, k)) % cat.mod
                out[pos : pos + k] = acc
        return Mat(cat.mod, out.reshape(1, -1))

    def act_left_matrix(self, a: Mor, C) -> Mat:
        grp = self.ext_group(C, a.src)
        rows = []
        for i in range(grp.dim):
            e = np.zeros((1, grp.dim), dtype=np.int64)
            e[0, i] = 1
            rows.append(self._act_left_raw(a.src, a.dst, a.data, C, Mat(self.cat.mod, e)).a[0])
        out_dim = self.ext_group(C, a.dst).dim
        return Mat(self.cat.mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(self.cat.mod, 0, out_dim)

    def act_right_matrix(self, d: Mor, A) -> Mat:
        grp = self.ext_group(d.dst, A)
        rows = []
        for i in range(grp.dim):
            e = np.zeros((1, grp.dim), dtype=np.int64)
            e[0, i] = 1
            rows.append(self._act_right_raw(d.src, d.dst, d.data, A, Mat(self.cat.mod, e)).a[0])
        out_dim = self.ext_group(d.src, A).dim
        return Mat(self.cat.mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(self.cat.mod, 0, out_dim)

    def coact_left_matrix(self, delta: Extension, T) -> Mat:
        cat = self.cat
        hdim = cat.hom(delta.A, T).dim
        rows = []
        for i in range(hdim):
            e = np.zeros((1, hdim), dtype=np.int64)
            e[0, i] = 1
            rows.append(self._act_left_raw(delta.A, T, Mat(cat.mod, e), delta.C, delta.raw).a[0])
        out_dim = self.ext_group(delta.C, T).dim
        return Mat(cat.mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(cat.mod, 0, out_dim)

    def coact_right_matrix(self, delta: Extension, T) -> Mat:
        cat = self.cat
        hdim = cat.hom(T, delta.C).dim
        rows = []
        for i in range(hdim):
            e = np.zeros((1, hdim), dtype=np.int64)
            e[0, i] = 1
            rows.append(self._act_right_raw(T, delta.C, Mat(cat.mod, e), delta.A, delta.raw).a[0])
        out_dim = self.ext_group(T, delta.A).dim
        return Mat(cat.mod, np.array(rows, dtype=np.int64)) if rows else Mat.zeros(cat.mod, 0, out_dim)

    def _realize(self, delta: Extension) -> ComplexN:
        cat = self.cat
        if delta.is_zero():
            X, _, _, _, _ = direct_sum(triv(cat, self.n, 0, delta.A), triv(cat, self.n, self.n, delta.C))
            return X
        if len(delta.C) == 1 and len(delta.A) == 1:
            table = self.realize_table.get((delta.C[0], delta.A[0]))
            if table is not None:
                got = table.get(delta.raw.entries())
                if got is not None:
                    return got
        raise ValueError(
            f"extension outside the realization table: E({cat.obj_label(delta.C)}, {cat.obj_label(delta.A)}) value {delta.raw.entries()}"
        )


# -- loading ---------------------------------------------------------------------


def _parse_pair(key: str, parts: int, location: str) -> Tuple[str, ...]:
    bits = key.split("|")
    if len(bits) != parts:
        raise TableError(location, f"key {key!r} must have {parts} '|'-separated parts")
    return tuple(bits)


def load_table(text: str, validate: bool = True) -> Tuple[TabCategory, Optional[TabStructure]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableError(f"line {exc.lineno} column {exc.colno}", f"invalid JSON: {exc.msg}")
    for field in ("modulus", "objects"):
        if field not in doc:
            raise TableError(field, "missing required field")
    mod = int(doc["modulus"])
    gens = list(doc["objects"])
    if mod < 2:
        raise TableError("modulus", "must be at least 2")
    if len(set(gens)) != len(gens):
        raise TableError("objects", "duplicate generator names")
    hom_orders = {}
    for key, spec in doc.get("hom", {}).items():
        pair = _parse_pair(key, 2, f"hom/{key}")
        orders = [int(x) for x in spec["orders"]]
        for d in orders:
            if d < 1 or mod % d != 0:
                raise TableError(f"hom/{key}", f"order {d} does not divide the modulus")
        hom_orders[pair] = orders
    identity_coords = {}
    for g, coords in doc.get("identity", {}).items():
        identity_coords[g] = [int(x) for x in coords]
        if len(identity_coords[g]) != len(hom_orders.get((g, g), ())):
            raise TableError(f"identity/{g}", "identity coordinate length mismatch")
    for g in gens:
        if g not in identity_coords:
            raise TableError(f"identity/{g}", "missing identity element")
    compose_tensors = {}
    for key, tensor in doc.get("compose", {}).items():
        triple = _parse_pair(key, 3, f"compose/{key}")
        x, y, z = triple
        kin = len(hom_orders.get((x, y), ()))
        kmid = len(hom_orders.get((y, z), ()))
        kout = len(hom_orders.get((x, z), ()))
        if len(tensor) != kin or any(len(row) != kmid for row in tensor):
            raise TableError(f"compose/{key}", "tensor shape mismatch")
        for row in tensor:
            for cell in row:
                if len(cell) != kout:
                    raise TableError(f"compose/{key}", "tensor cell length mismatch")
        compose_tensors[triple] = tensor
    cat = TabCategory(mod, gens, hom_orders, identity_coords, compose_tensors)
    if validate:
        _validate_category(cat)
    if "E" not in doc and "realize" not in doc:
        return cat, None
    n = int(doc.get("n", 1))
    ext_orders = {}
    for key, spec in doc.get("E", {}).items():
        pair = _parse_pair(key, 2, f"E/{key}")
        ext_orders[pair] = [int(x) for x in spec["orders"]]
    act_left_tensors = {}
    for key, tensor in doc.get("act_left", {}).items():
        act_left_tensors[_parse_pair(key, 3, f"act_left/{key}")] = tensor
    act_right_tensors = {}
    for key, tensor in doc.get("act_right", {}).items():
        act_right_tensors[_parse_pair(key, 3, f"act_right/{key}")] = tensor
    struct = TabStructure(cat, n, ext_orders, act_left_tensors, act_right_tensors, {})
    realize_table = {}
    for key, entries in doc.get("realize", {}).items():
        pair = _parse_pair(key, 2, f"realize/{key}")
        table = {}
        for coord_key, comp in entries.items():
            coords = tuple(int(x) for x in coord_key.split(",")) if coord_key else ()
            objs = [tuple(o) for o in comp["objects"]]
            diffs = []
            for idx in range(len(objs) - 1):
                blocks = {}
                mat = comp["diffs"][idx]
                for i, row in enumerate(mat):
                    for j, cell in enumerate(row):
                        blocks[(i, j)] = cell
                raw = cat.from_blocks(objs[idx], objs[idx + 1], blocks)
                diffs.append(cat.mor_from_raw(objs[idx], objs[idx + 1], raw))
            try:
                table[coords] = ComplexN(cat, n, objs, diffs)
            except ValueError as exc:
                raise TableError(f"realize/{key}/{coord_key}", str(exc))
        realize_table[pair] = table
    struct.realize_table = realize_table
    if validate:
        _validate_structure(struct)
    return cat, struct


def _validate_category(cat: TabCategory, cap: int = 20000):
    mod = cat.mod
    # identity and associativity on basis morphisms
    count = 0
    for g in cat.generators:
        idg = cat.identity((g,))
        for h in cat.generators:
            for b in range(len(cat.orders(g, h))):
                raw = cat.from_blocks((g,), (h,), {(0, 0): [1 if i == b else 0 for i in range(len(cat.orders(g, h)))]})
                f = cat.mor_from_raw((g,), (h,), raw)
                if f @ idg != f or cat.identity((h,)) @ f != f:
                    raise TableError(f"identity/{g}", "identity law fails")
    for x in cat.generators:
        for y in cat.generators:
            for z in cat.generators:
                for w in cat.generators:
                    kxy = len(cat.orders(x, y))
                    kyz = len(cat.orders(y, z))
                    kzw = len(cat.orders(z, w))
                    for i in range(kxy):
                        for j in range(kyz):
                            for t in range(kzw):
                                count += 1
                                if count > cap:
                                    return
                                f = cat.mor_from_raw((x,), (y,), cat.from_blocks((x,), (y,), {(0, 0): _unit(kxy, i)}))
                                gm = cat.mor_from_raw((y,), (z,), cat.from_blocks((y,), (z,), {(0, 0): _unit(kyz, j)}))
                                hm = cat.mor_from_raw((z,), (w,), cat.from_blocks((z,), (w,), {(0, 0): _unit(kzw, t)}))
                                if (hm @ gm) @ f != hm @ (gm @ f):
                                    raise TableError(f"compose/{x}|{y}|{z}", "associativity fails on basis morphisms")


def _unit(k: int, i: int):
    return [1 if j == i else 0 for j in range(k)]


def _validate_structure(S: TabStructure, cap: int = 4000):
    cat = S.cat
    count = 0
    for c in cat.generators:
        for a in cat.generators:
            grp = S.ext_group((c,), (a,))
            for delta in S.extensions_of((c,), (a,), 10000)[:8]:
                ida = cat.identity((a,))
                idc = cat.identity((c,))
                if act_left(ida, delta) != delta or act_right(idc, delta) != delta:
                    raise TableError(f"act_left/{c}|{a}|{a}", "identity action fails")
                count += 1
                if count > cap:
                    return
    # realisation entries must be attached complexes with matching ends
    for (c, a), table in S.realize_table.items():
        for coords, comp in table.items():
            if comp.objs[0] != (a,) or comp.objs[-1] != (c,):
                raise TableError(f"realize/{c}|{a}", "realisation ends do not match the extension pair")
            delta = Extension(S, (c,), (a,), S.ext_group((c,), (a,)).canon(Mat.row(cat.mod, list(coords))))
            x = Exangle(comp, delta)
            from .exangulated import is_attached

            if not is_attached(x):
                raise TableError(f"realize/{c}|{a}", "realisation is not an attached complex")


# -- integer Smith form and export -------------------------------------------------


def smith_normal_form(rows: List[List[int]]):
    """(diag, V, Vinv) with U * A * V diagonal for some unimodular U.

    Only the column transform is tracked; it is what cyclic decompositions
    need.  Entries are exact integers.
    """
    A = [list(map(int, r)) for r in rows]
    if not A:
        return [], [], []
    mrows = len(A)
    ncols = len(A[0])
    V = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    Vinv = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_op(j1, j2, a, b, c, d):
        # (col j1, col j2) <- (a col j1 + b col j2, c col j1 + d col j2); det = ad - bc = +-1
        for r in A:
            r[j1], r[j2] = a * r[j1] + b * r[j2], c * r[j1] + d * r[j2]
        for r in V:
            r[j1], r[j2] = a * r[j1] + b * r[j2], c * r[j1] + d * r[j2]
        det = a * d - b * c
        for i in range(ncols):
            Vinv[j1][i], Vinv[j2][i] = (d * Vinv[j1][i] - c * Vinv[j2][i]) * det, (-b * Vinv[j1][i] + a * Vinv[j2][i]) * det

    def row_op(i1, i2, a, b, c, d):
        A[i1], A[i2] = [a * x + b * y for x, y in zip(A[i1], A[i2])], [c * x + d * y for x, y in zip(A[i1], A[i2])]

    from math import gcd

    k = 0
    while k < min(mrows, ncols):
        # find a nonzero pivot
        piv = None
        for i in range(k, mrows):
            for j in range(k, ncols):
                if A[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        if i0 != k:
            A[k], A[i0] = A[i0], A[k]
        if j0 != k:
            col_op(k, j0, 0, 1, 1, 0)
        changed = True
        while changed:
            changed = False
            for i in range(k + 1, mrows):
                if A[i][k]:
                    g, x, y = _xgcd(A[k][k], A[i][k])
                    p, q = A[k][k] // g, A[i][k] // g
                    row_op(k, i, x, y, -q, p)
                    changed = True
            for j in range(k + 1, ncols):
                if A[k][j]:
                    g, x, y = _xgcd(A[k][k], A[k][j])
                    p, q = A[k][k] // g, A[k][j] // g
                    col_op(k, j, x, -q, y, p)
                    changed = True
        k += 1
    diag = [A[i][i] if i < ncols else 0 for i in range(min(mrows, ncols))]
    diag += [0] * (ncols - len(diag))
    return [abs(d) for d in diag[:ncols]], V, Vinv


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass
class CyclicDecomposition:
    orders: List[int]
    gens: List[Mat]  # raw representatives, one per cyclic factor

    def coords_of(self, grp: PresentedGroup, v: Mat) -> Tuple[int, ...]:
        """Coordinates of the class of v with respect to the cyclic generators."""
        from .zmod import solve_linear, vstack

        if not self.orders:
            return ()
        G = vstack(self.gens + [grp.nulls]) if grp.nulls.rows else vstack(self.gens)
        x = solve_linear(G, grp.canon(v))
        if x is None:
            raise ValueError("element outside the decomposed group")
        return tuple(int(x.a[0, i]) % self.orders[i] for i in range(len(self.orders)))


def cyclic_decomposition(grp: PresentedGroup) -> CyclicDecomposition:
    """Invariant-style cyclic decomposition of span(gens)/span(nulls) over Z/m."""
    from .presented import LinearProblem

    mod = grp.mod
    g = grp.gens.rows
    if g == 0:
        return CyclicDecomposition([], [])
    lp = LinearProblem(mod)
    t = lp.unknown(Mat.identity(mod, g))
    lp.equation([(t, grp.gens)], Mat.zeros(mod, 1, grp.dim), grp.nulls if grp.nulls.rows else None)
    _, kernel = lp.solution_space()
    krows = []
    if kernel is not None:
        for i in range(kernel.nrows):
            krows.append([int(v) for v in kernel.mat.a[i, :g]])
    for i in range(g):
        krows.append([mod if j == i else 0 for j in range(g)])
    diag, V, Vinv = smith_normal_form(krows)
    orders = []
    gens = []
    for i, d in enumerate(diag):
        if d <= 1:
            continue
        z = Mat.row(mod, [Vinv[i][j] % mod for j in range(g)])
        rep = grp.canon(z @ grp.gens)
        orders.append(d)
        gens.append(rep)
    return CyclicDecomposition(orders, gens)


# -- export of a structure to the table format ---------------------------------------


def export_structure(S: ExangStructure, objects: Sequence[object], ext_cap: int = 64) -> dict:
    """Serialise a structure over the listed objects to the table format.

    The object list is closed under the objects appearing in realisations of
    the enumerable extensions between listed objects; realisation entries
    whose middles would leave the closure are omitted.
    """
    cat = S.cat
    mod = cat.mod
    closure: List[object] = []

    def register(X) -> int:
        for i, Y in enumerate(closure):
            if Y == X:
                return i
        closure.append(X)
        return len(closure) - 1

    realizations = {}
    for X in objects:
        register(X)
    pairs = [(C, A) for C in list(closure) for A in list(closure)]
    for (C, A) in pairs:
        try:
            exts = S.extensions_of(C, A, 100_000)[:ext_cap]
        except ValueError:
            continue
        for delta in exts:
            R = S.realize(delta)
            for O in R.objs:
                register(O)
            realizations[(C, A, delta.raw.entries())] = R

    names = {i: f"X{i}" for i in range(len(closure))}

    def name_of(X) -> str:
        for i, Y in enumerate(closure):
            if Y == X:
                return names[i]
        raise ValueError("object escaped the export closure")

    hom_dec = {}
    for X in closure:
        for Y in closure:
            hom_dec[(name_of(X), name_of(Y))] = (X, Y, cyclic_decomposition(cat.hom(X, Y)))
    doc = {
        "format": "karex-category-v1",
        "modulus": mod,
        "n": S.n,
        "objects": [names[i] for i in range(len(closure))],
        "hom": {},
        "identity": {},
        "compose": {},
        "E": {},
        "act_left": {},
        "act_right": {},
        "realize": {},
    }
    for (xn, yn), (X, Y, dec) in hom_dec.items():
        if dec.orders:
            doc["hom"][f"{xn}|{yn}"] = {"orders": dec.orders}
    for X in closure:
        xn = name_of(X)
        _, _, dec = hom_dec[(xn, xn)]
        doc["identity"][xn] = list(dec.coords_of(cat.hom(X, X), cat.raw_of(cat.identity(X))))
    for X in closure:
        for Y in closure:
            for Z in closure:
                xn, yn, zn = name_of(X), name_of(Y), name_of(Z)
                _, _, dxy = hom_dec[(xn, yn)]
                _, _, dyz = hom_dec[(yn, zn)]
                _, _, dxz = hom_dec[(xn, zn)]
                if not dxy.orders or not dyz.orders or not dxz.orders:
                    continue
                tensor = []
                for gi in dxy.gens:
                    row = []
                    f = cat.mor_from_raw(X, Y, gi)
                    for gj in dyz.gens:
                        g = cat.mor_from_raw(Y, Z, gj)
                        row.append(list(dxz.coords_of(cat.hom(X, Z), cat.raw_of(g @ f))))
                    tensor.append(row)
                doc["compose"][f"{xn}|{yn}|{zn}"] = tensor
    ext_dec = {}
    for C in closure:
        for A in closure:
            cn, an = name_of(C), name_of(A)
            dec = cyclic_decomposition(S.ext_group(C, A))
            ext_dec[(cn, an)] = (C, A, dec)
            if dec.orders:
                doc["E"][f"{cn}|{an}"] = {"orders": dec.orders}
    for C in closure:
        for A in closure:
            for B in closure:
                cn, an, bn = name_of(C), name_of(A), name_of(B)
                _, _, dab = hom_dec[(an, bn)]
                _, _, dca = ext_dec[(cn, an)]
                _, _, dcb = ext_dec[(cn, bn)]
                if not dab.orders or not dca.orders or not dcb.orders:
                    continue
                tensor = []
                for gm in dab.gens:
                    row = []
                    a = cat.mor_from_raw(A, B, gm)
                    for ge in dca.gens:
                        delta = Extension(S, C, A, ge)
                        row.append(list(dcb.coords_of(S.ext_group(C, B), act_left(a, delta).raw)))
                    tensor.append(row)
                doc["act_left"][f"{cn}|{an}|{bn}"] = tensor
    for D in closure:
        for C in closure:
            for A in closure:
                dn, cn, an = name_of(D), name_of(C), name_of(A)
                _, _, ddc = hom_dec[(dn, cn)]
                _, _, dca = ext_dec[(cn, an)]
                _, _, dda = ext_dec[(dn, an)]
                if not ddc.orders or not dca.orders or not dda.orders:
                    continue
                tensor = []
                for gm in ddc.gens:
                    row = []
                    d = cat.mor_from_raw(D, C, gm)
                    for ge in dca.gens:
                        delta = Extension(S, C, A, ge)
                        row.append(list(dda.coords_of(S.ext_group(D, A), act_right(d, delta).raw)))
                    tensor.append(row)
                doc["act_right"][f"{dn}|{cn}|{an}"] = tensor
    for (C, A, raw_entries), R in realizations.items():
        cn, an = name_of(C), name_of(A)
        _, _, dca = ext_dec[(cn, an)]
        if not dca.orders:
            continue
        delta = Extension(S, C, A, Mat.row(mod, list(raw_entries)))
        if delta.is_zero():
            continue  # zero extensions realise to the canonical split complexes
        coords = dca.coords_of(S.ext_group(C, A), delta.raw)
        comp = {"objects": [[name_of(O)] for O in R.objs], "diffs": []}
        ok = True
        for i in range(S.n + 1):
            src, dst = R.objs[i], R.objs[i + 1]
            _, _, dsd = hom_dec[(name_of(src), name_of(dst))]
            if cat.hom(src, dst).dim and not dsd.orders and not cat.raw_of(R.diffs[i]).is_zero():
                ok = False
                break
            cell = list(dsd.coords_of(cat.hom(src, dst), cat.raw_of(R.diffs[i]))) if dsd.orders else []
            comp["diffs"].append([[cell]])
        if ok:
            doc["realize"].setdefault(f"{cn}|{an}", {})[",".join(map(str, coords))] = comp
    return doc


def export_text(S: ExangStructure, objects: Sequence[object], ext_cap: int = 64) -> str:
    return json.dumps(export_structure(S, objects, ext_cap), indent=1, sort_keys=True)
