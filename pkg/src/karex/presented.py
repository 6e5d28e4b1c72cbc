"""Finite Z/m-modules presented by generators and nulls, plus a joint solver.

Every hom-group and extension group in this package is a finite Z/m-module
carried on raw row vectors: the group is span(gens) / span(nulls) inside
(Z/m)^dim.  Morphism equality is equality of canonical coset representatives,
and every "find h such that ..." question becomes one joint linear system
over Z/m with one block of parameters per unknown plus one block of slack
parameters per quotient-valued equation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .zmod import Mat, HowellBasis, howell, kernel_basis, solve_linear, vstack


class PresentedGroup:
    """span(gens)/span(nulls) in (Z/m)^dim, with canonical representatives."""

    __slots__ = ("mod", "dim", "gens", "nulls", "_hnulls", "_hall")

    def __init__(self, mod: int, dim: int, gens: Mat, nulls: Mat):
        self.mod = mod
        self.dim = dim
        self.gens = gens
        self.nulls = nulls
        self._hnulls = None
        self._hall = None

    @property
    def hnulls(self) -> HowellBasis:
        if self._hnulls is None:
            self._hnulls = howell(self.nulls)
        return self._hnulls

    @property
    def hall(self) -> HowellBasis:
        """Howell basis of span(gens) + span(nulls)."""
        if self._hall is None:
            self._hall = howell(vstack([self.gens, self.nulls]))
        return self._hall

    def canon(self, v: Mat) -> Mat:
        """Canonical representative of the class of v."""
        if self.nulls.rows == 0:
            return v
        return self.hnulls.reduce(v)

    def is_zero(self, v: Mat) -> bool:
        return self.canon(v).is_zero()

    def eq(self, v: Mat, w: Mat) -> bool:
        return self.canon(v) == self.canon(w)

    def contains(self, v: Mat) -> bool:
        return self.hall.contains(v)

    def zero(self) -> Mat:
        return Mat.zeros(self.mod, 1, self.dim)

    def size(self) -> int:
        denom = self.hnulls.size()
        return self.hall.size() // denom

    def elements(self, cap: int = 100_000) -> List[Mat]:
        """Canonical representatives of all classes, deterministically ordered."""
        seen = {}
        for v in self.hall.enumerate(cap):
            c = self.canon(v)
            seen.setdefault(c.entries(), c)
        return [seen[k] for k in sorted(seen)]

    def random_element(self, rng: random.Random) -> Mat:
        H = self.hall
        v = self.zero()
        for i in range(H.nrows):
            v = v + H.mat.row_at(i).scale(rng.randrange(self.mod))
        return self.canon(v)


def free_group(mod: int, dim: int) -> PresentedGroup:
    return PresentedGroup(mod, dim, Mat.identity(mod, dim), Mat.zeros(mod, 0, dim))


@dataclass
class _Unknown:
    index: int
    gens: Mat  # parametrisation rows; unknown value = params @ gens


@dataclass
class _Equation:
    terms: List[Tuple[int, Optional[Mat]]]  # (unknown index, coefficient matrix)
    rhs: Mat
    nulls: Optional[Mat]  # None = exact equation
    dim: int


class LinearProblem:
    """sum_i value(u_i) @ M_i + const = 0 (mod span(nulls)) over several unknowns.

    Unknowns range over span(gens_i); a coefficient matrix of None means the
    identity.  solve() returns canonical values; with an rng it returns a
    uniformly shifted solution (used to exercise independence-of-choices
    lemmas).  Slack coefficients per equation are retained so callers can
    recover homotopy witnesses.
    """

    def __init__(self, mod: int):
        self.mod = mod
        self.unknowns: List[_Unknown] = []
        self.equations: List[_Equation] = []

    def unknown(self, gens: Mat) -> int:
        u = _Unknown(len(self.unknowns), gens)
        self.unknowns.append(u)
        return u.index

    def free_unknown(self, dim: int) -> int:
        return self.unknown(Mat.identity(self.mod, dim))

    def equation(self, terms, rhs: Mat, nulls: Optional[Mat] = None):
        """sum_i value(u_i) @ M_i = rhs, modulo span(nulls) when given."""
        dim = rhs.cols
        self.equations.append(_Equation(list(terms), rhs, nulls, dim))

    def _assemble(self):
        m = self.mod
        blocks_rows = []  # per unknown/slack: row offset and size
        row_sizes = [u.gens.rows for u in self.unknowns]
        slack_sizes = []
        for eq in self.equations:
            slack_sizes.append(eq.nulls.rows if eq.nulls is not None else 0)
        total_rows = sum(row_sizes) + sum(slack_sizes)
        col_sizes = [eq.dim for eq in self.equations]
        total_cols = sum(col_sizes)

        import numpy as np

        A = np.zeros((total_rows, total_cols), dtype=np.int64)
        b = np.zeros((1, total_cols), dtype=np.int64)

        row_off = [0]
        for s in row_sizes:
            row_off.append(row_off[-1] + s)
        slack_off = [row_off[-1]]
        for s in slack_sizes:
            slack_off.append(slack_off[-1] + s)
        col_off = [0]
        for s in col_sizes:
            col_off.append(col_off[-1] + s)

        for j, eq in enumerate(self.equations):
            c0, c1 = col_off[j], col_off[j + 1]
            for idx, coef in eq.terms:
                u = self.unknowns[idx]
                contrib = u.gens if coef is None else u.gens @ coef
                if contrib.cols != eq.dim:
                    raise ValueError("equation term has wrong dimension")
                A[row_off[idx] : row_off[idx] + u.gens.rows, c0:c1] = (
                    A[row_off[idx] : row_off[idx] + u.gens.rows, c0:c1] + contrib.a
                ) % m
            if eq.nulls is not None and eq.nulls.rows:
                A[slack_off[j] : slack_off[j] + eq.nulls.rows, c0:c1] = (-eq.nulls.a) % m
            b[0, c0:c1] = eq.rhs.a[0]

        return Mat(m, A), Mat(m, b), row_off, slack_off

    def solve(self, rng: Optional[random.Random] = None) -> Optional["Solution"]:
        A, b, row_off, slack_off = self._assemble()
        if A.rows == 0:
            return Solution(self, Mat.zeros(self.mod, 1, 0), row_off, slack_off) if b.is_zero() else None
        x = solve_linear(A, b)
        if x is None:
            return None
        if rng is not None:
            K = kernel_basis(A)
            for i in range(K.nrows):
                x = x + K.mat.row_at(i).scale(rng.randrange(self.mod))
            x = Mat(self.mod, x.a % self.mod)
        return Solution(self, x, row_off, slack_off)

    def solution_space(self):
        """(particular Solution or None, kernel HowellBasis over the parameter row space)."""
        A, b, row_off, slack_off = self._assemble()
        if A.rows == 0:
            sol = Solution(self, Mat.zeros(self.mod, 1, 0), row_off, slack_off) if b.is_zero() else None
            return sol, None
        x = solve_linear(A, b)
        sol = Solution(self, x, row_off, slack_off) if x is not None else None
        return sol, kernel_basis(A)


class Solution:
    def __init__(self, problem: LinearProblem, x: Mat, row_off, slack_off):
        self.problem = problem
        self.x = x
        self._row_off = row_off
        self._slack_off = slack_off

    def value(self, idx: int) -> Mat:
        u = self.problem.unknowns[idx]
        params = Mat(self.problem.mod, self.x.a[:, self._row_off[idx] : self._row_off[idx] + u.gens.rows])
        return params @ u.gens if u.gens.rows else Mat.zeros(self.problem.mod, 1, u.gens.cols)

    def params(self, idx: int) -> Mat:
        u = self.problem.unknowns[idx]
        return Mat(self.problem.mod, self.x.a[:, self._row_off[idx] : self._row_off[idx] + u.gens.rows])

    def slack(self, eq_index: int) -> Mat:
        lo = self._slack_off[eq_index]
        hi = self._slack_off[eq_index + 1]
        return Mat(self.problem.mod, self.x.a[:, lo:hi])

    def shifted(self, kernel_row: Mat) -> "Solution":
        return Solution(self.problem, Mat(self.problem.mod, (self.x.a + kernel_row.a)), self._row_off, self._slack_off)
