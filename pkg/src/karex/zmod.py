"""Exact linear algebra over Z/m.

Matrices are immutable, hashable wrappers around small numpy int64 arrays
with all entries reduced to {0..m-1}.  The canonical row form used for
solving and span comparison is the Howell normal form: unlike plain row
echelon form it is a complete invariant of the row span over Z/m, which
is what makes subgroup membership, kernel computation and canonical coset
representatives decidable when m is composite.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np


def _xgcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def unit_multiplier(a: int, m: int) -> int:
    """A unit u of Z/m with u*a = gcd(a, m) mod m.  For a = 0 returns 1."""
    a %= m
    if a == 0:
        return 1
    g = math.gcd(a, m)
    b = a // g
    mg = m // g
    u = pow(b, -1, mg) if mg > 1 else 1
    # lift to a unit mod m; some lift u + k*mg is coprime to m
    while math.gcd(u, m) != 1:
        u += mg
    return u % m


def gcd_transform(a: int, b: int, m: int):
    """(g, s, t, u, v) with s*a + t*b = g, u*a + v*b = 0 and det [[s,t],[u,v]] = 1."""
    g, x, y = _xgcd(a, b)
    if g == 0:
        return 0, 1, 0, 0, 1
    return g % m, x % m, y % m, (-(b // g)) % m, (a // g) % m


def annihilator(a: int, m: int) -> int:
    """Generator of {x : x*a = 0 in Z/m}, i.e. m // gcd(a, m)."""
    return m // math.gcd(a % m, m)


class Mat:
    """Matrix over Z/m; treated as immutable (the numpy buffer is locked)."""

    __slots__ = ("mod", "a", "_hash")

    def __init__(self, mod: int, array):
        if mod < 2:
            raise ValueError(f"modulus must be >= 2, got {mod}")
        a = np.asarray(array, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"expected 2-d array, got shape {a.shape}")
        a = np.mod(a, mod)
        a.flags.writeable = False
        self.mod = mod
        self.a = a
        self._hash = None

    @classmethod
    def _wrap(cls, mod: int, reduced: "np.ndarray") -> "Mat":
        """Fast path for arrays already reduced mod m (takes ownership)."""
        out = object.__new__(cls)
        reduced.flags.writeable = False
        out.mod = mod
        out.a = reduced
        out._hash = None
        return out

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(mod: int, rows: int, cols: int) -> "Mat":
        return Mat(mod, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(mod: int, n: int) -> "Mat":
        return Mat(mod, np.eye(n, dtype=np.int64))

    @staticmethod
    def from_rows(mod: int, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "Mat":
        if len(rows) == 0:
            return Mat.zeros(mod, 0, 0 if cols is None else cols)
        return Mat(mod, np.array([list(r) for r in rows], dtype=np.int64))

    @staticmethod
    def row(mod: int, entries: Iterable[int]) -> "Mat":
        data = list(entries)
        return Mat(mod, np.array([data], dtype=np.int64))

    @staticmethod
    def scalar(mod: int, value: int, n: int) -> "Mat":
        return Mat(mod, value * np.eye(n, dtype=np.int64))

    # -- basic queries -------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def is_zero(self) -> bool:
        return not self.a.size or not self.a.any()

    def is_square(self) -> bool:
        return self.rows == self.cols

    def entries(self):
        return tuple(int(x) for x in self.a.ravel())

    def tolist(self):
        return [[int(x) for x in row] for row in self.a]

    def flat(self) -> "Mat":
        """This matrix as a single row vector (row-major)."""
        return Mat._wrap(self.mod, self.a.reshape(1, -1))

    def reshape(self, rows: int, cols: int) -> "Mat":
        return Mat._wrap(self.mod, self.a.reshape(rows, cols))

    def __getitem__(self, idx):
        return int(self.a[idx])

    def row_at(self, i: int) -> "Mat":
        return Mat(self.mod, self.a[i : i + 1])

    # -- algebra -------------------------------------------------------

    def _check(self, other: "Mat"):
        if self.mod != other.mod:
            raise ValueError(f"modulus mismatch: {self.mod} vs {other.mod}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Mat._wrap(self.mod, (self.a + other.a) % self.mod)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Mat._wrap(self.mod, (self.a - other.a) % self.mod)

    def __neg__(self) -> "Mat":
        return Mat._wrap(self.mod, (-self.a) % self.mod)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Mat.zeros(self.mod, self.rows, other.cols)
        return Mat._wrap(self.mod, (self.a @ other.a) % self.mod)

    def scale(self, k: int) -> "Mat":
        return Mat._wrap(self.mod, (self.a * (k % self.mod)) % self.mod)

    @property
    def t(self) -> "Mat":
        return Mat(self.mod, self.a.T)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.mod == other.mod and self.a.shape == other.a.shape and self.a.tobytes() == other.a.tobytes()

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.mod, self.shape, self.a.tobytes()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Mat({self.mod}, {self.tolist()})"

    def is_idempotent(self) -> bool:
        return self.is_square() and self @ self == self


# -- block constructors ----------------------------------------------


def hstack(mats: Sequence[Mat]) -> Mat:
    mats = list(mats)
    mod = mats[0].mod
    return Mat(mod, np.hstack([m.a for m in mats]))


def vstack(mats: Sequence[Mat]) -> Mat:
    mats = list(mats)
    mod = mats[0].mod
    return Mat(mod, np.vstack([m.a for m in mats]))


def block_diag(mats: Sequence[Mat], mod: Optional[int] = None) -> Mat:
    mats = list(mats)
    if not mats:
        if mod is None:
            raise ValueError("block_diag of empty list needs explicit modulus")
        return Mat.zeros(mod, 0, 0)
    mod = mats[0].mod
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for m in mats:
        out[i : i + m.rows, j : j + m.cols] = m.a
        i += m.rows
        j += m.cols
    return Mat(mod, out)


def block(rows_of_blocks: Sequence[Sequence[Mat]]) -> Mat:
    return vstack([hstack(list(row)) for row in rows_of_blocks])


# -- Howell normal form ----------------------------------------------


class HowellBasis:
    """Howell normal form of a row span over Z/m.

    Two row spans are equal iff their Howell forms are equal, and every
    coset of the span has a unique fully reduced representative, which is
    what `reduce` computes.
    """

    __slots__ = ("mod", "cols", "mat", "pivots")

    def __init__(self, mod: int, cols: int, mat: Mat, pivots):
        self.mod = mod
        self.cols = cols
        self.mat = mat
        self.pivots = tuple(pivots)  # (row, col) pairs, rows ordered

    def __eq__(self, other):
        return isinstance(other, HowellBasis) and self.mat == other.mat and self.cols == other.cols

    def __hash__(self):
        return hash((self.mat, self.cols))

    def __repr__(self):
        return f"HowellBasis({self.mat.tolist()}, pivots={self.pivots})"

    @property
    def nrows(self) -> int:
        return self.mat.rows

    def reduce(self, v: Mat) -> Mat:
        """Canonical representative of v modulo the row span."""
        if v.cols != self.cols:
            raise ValueError("column count mismatch")
        w = np.array(v.a[0], dtype=np.int64)
        H = self.mat.a
        for i, c in self.pivots:
            p = int(H[i, c])
            q = int(w[c]) // p
            if q:
                w = (w - q * H[i]) % self.mod
        return Mat(self.mod, w.reshape(1, -1))

    def contains(self, v: Mat) -> bool:
        return self.reduce(v).is_zero()

    def express(self, v: Mat) -> Optional[Mat]:
        """Coefficients c with c @ mat = v, or None if v is outside the span."""
        w = np.array(v.a[0], dtype=np.int64)
        H = self.mat.a
        coeffs = np.zeros(self.nrows, dtype=np.int64)
        for i, c in self.pivots:
            p = int(H[i, c])
            q = int(w[c]) // p
            coeffs[i] = q
            if q:
                w = (w - q * H[i]) % self.mod
        if w.any():
            return None
        return Mat(self.mod, coeffs.reshape(1, -1))

    def enumerate(self, cap: int = 100_000):
        """All elements of the span, in a deterministic order.

        Uses the unique-representation property of the Howell form: every
        element is sum(c_i * row_i) with 0 <= c_i < m / pivot_i.
        """
        m = self.mod
        H = self.mat.a
        ranges = [m // math.gcd(int(H[i, c]), m) for i, c in self.pivots]
        total = 1
        for r in ranges:
            total *= r
            if total > cap:
                raise ValueError(f"span enumeration exceeds cap {cap}")
        out = []
        zero = np.zeros(self.cols, dtype=np.int64)

        def rec(i, acc):
            if i == len(ranges):
                out.append(Mat(m, acc.reshape(1, -1).copy()))
                return
            for c in range(ranges[i]):
                rec(i + 1, (acc + c * H[i]) % m)

        rec(0, zero)
        return out

    def size(self) -> int:
        m = self.mod
        H = self.mat.a
        total = 1
        for i, c in self.pivots:
            total *= m // math.gcd(int(H[i, c]), m)
        return total


def howell_complete(A: Mat):
    """(H, T, K) with T @ A = H in Howell form and K spanning {x : x @ A = 0}."""
    m = A.mod
    ncols = A.cols
    W = [np.array(r, dtype=np.int64) for r in A.a]
    T = [np.array(r, dtype=np.int64) for r in np.eye(A.rows, dtype=np.int64)]

    r = 0
    for c in range(ncols):
        j = r
        while j < len(W) and W[j][c] % m == 0:
            j += 1
        if j == len(W):
            continue
        if j > r:
            W[r], W[j] = W[j], W[r]
            T[r], T[j] = T[j], T[r]
        # normalise the pivot to the canonical divisor of m
        u = unit_multiplier(int(W[r][c]), m)
        if u != 1:
            W[r] = (W[r] * u) % m
            T[r] = (T[r] * u) % m
        # clear below
        for i in range(r + 1, len(W)):
            if W[i][c] % m:
                g, s, t, u2, v2 = gcd_transform(int(W[r][c]), int(W[i][c]), m)
                Wr, Wi = W[r], W[i]
                W[r], W[i] = (s * Wr + t * Wi) % m, (u2 * Wr + v2 * Wi) % m
                Tr, Ti = T[r], T[i]
                T[r], T[i] = (s * Tr + t * Ti) % m, (u2 * Tr + v2 * Ti) % m
        # reduce above
        p = int(W[r][c])
        for i in range(r):
            q = int(W[i][c]) // p
            if q:
                W[i] = (W[i] - q * W[r]) % m
                T[i] = (T[i] - q * T[r]) % m
        # append annihilator row to saturate the span; if it vanishes in W it
        # still witnesses a kernel element through T
        x = annihilator(p, m)
        if x % m:
            W.append((x * W[r]) % m)
            T.append((x * T[r]) % m)
        r += 1

    piv_rows = []
    pivots = []
    kernel_rows = []
    for i, w in enumerate(W):
        if w.any():
            lead = int(np.nonzero(w)[0][0])
            piv_rows.append((lead, w, T[i]))
        else:
            if T[i].any():
                kernel_rows.append(T[i])
    piv_rows.sort(key=lambda t: t[0])
    Hrows = [w for (_, w, _) in piv_rows]
    Trows = [t for (_, _, t) in piv_rows]
    pivots = [(i, lead) for i, (lead, _, _) in enumerate(piv_rows)]

    H = Mat(m, np.array(Hrows, dtype=np.int64)) if Hrows else Mat.zeros(m, 0, ncols)
    Tm = Mat(m, np.array(Trows, dtype=np.int64)) if Trows else Mat.zeros(m, 0, A.rows)
    K = Mat(m, np.array(kernel_rows, dtype=np.int64)) if kernel_rows else Mat.zeros(m, 0, A.rows)
    return HowellBasis(m, ncols, H, pivots), Tm, K


def howell(A: Mat) -> HowellBasis:
    H, _, _ = howell_complete(A)
    return H


def kernel_basis(A: Mat, side: str = "left") -> HowellBasis:
    """Howell basis of the left kernel {x : x A = 0} (or right: {x : A x = 0})."""
    if side == "right":
        return kernel_basis(A.t, "left")
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    _, _, K = howell_complete(A)
    return howell(K)


def solve_linear(A: Mat, b: Mat, side: str = "left") -> Optional[Mat]:
    """Canonical solution x of x A = b (side='left') or A x = b (side='right').

    Returns None when no solution exists.  The solution returned is the
    canonical coset representative modulo the kernel, so it is deterministic.
    """
    if side == "right":
        x = solve_linear(A.t, b.t, "left")
        return None if x is None else x.t
    if side != "left":
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    A._check(b)
    if b.cols != A.cols:
        raise ValueError(f"needs b with {A.cols} columns, got {b.cols}")
    H, T, K = howell_complete(A)
    xs = []
    for i in range(b.rows):
        coeffs = H.express(b.row_at(i))
        if coeffs is None:
            return None
        x = coeffs @ T if T.rows else Mat.zeros(A.mod, 1, A.rows)
        xs.append(howell(K).reduce(x) if K.rows else x)
    return vstack(xs) if xs else Mat.zeros(A.mod, 0, A.rows)


def span_contains(gens: Mat, v: Mat) -> bool:
    return howell(gens).contains(v)


def spans_equal(g1: Mat, g2: Mat) -> bool:
    return howell(g1) == howell(g2)
