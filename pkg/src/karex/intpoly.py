"""Exact integer polynomials and the idempotent-lifting polynomials.

The key construction: for each m >= 1 there are p', q' in Z[x] with

    x^m * p'(x) + (x - 1)^m * q'(x) = 1

obtained by expanding 1 = (x + (1 - x))^(2m-1) binomially and splitting
the sum at k = m; every term with k >= m carries a factor x^m and every
term with k < m carries (1 - x)^m.  Keeping the split exact in Z[x] is
what makes p_m := x^m * p' usable for lifting idempotents through
square-zero style perturbations: p_m(e) = e for idempotent e, and p_m(r)
is idempotent whenever (r^2 - r)^m = 0.
"""

from __future__ import annotations

from math import comb
from typing import Sequence, Tuple

from .zmod import Mat


class IntPolynomial:
    """Polynomial with exact integer coefficients; index = degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, *a):
        raise AttributeError("IntPolynomial is immutable")

    @staticmethod
    def zero() -> "IntPolynomial":
        return IntPolynomial(())

    @staticmethod
    def one() -> "IntPolynomial":
        return IntPolynomial((1,))

    @staticmethod
    def x() -> "IntPolynomial":
        return IntPolynomial((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial.zero()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        out = IntPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def eval_int(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __repr__(self):
        if not self.coeffs:
            return "IntPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return "IntPolynomial(" + " + ".join(terms) + ")"


def bezout_powers(m: int) -> Tuple[IntPolynomial, IntPolynomial]:
    """(p', q') with x^m * p' + (x-1)^m * q' = 1 exactly in Z[x].

    Expand 1 = (x + (1-x))^(2m-1) and split the binomial sum at k = m; the
    coefficients stay integral by construction.  For m = 2 this yields
    p' = -2x + 3 and q' = 2x + 1.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    x = IntPolynomial.x()
    one_minus_x = IntPolynomial((1, -1))
    n = 2 * m - 1
    p = IntPolynomial.zero()  # sum over k >= m of C(n,k) x^(k-m) (1-x)^(n-k)
    q0 = IntPolynomial.zero()  # sum over k < m of C(n,k) x^k (1-x)^(m-1-k)
    for k in range(n + 1):
        c = comb(n, k)
        if k >= m:
            p = p + c * (x ** (k - m)) * (one_minus_x ** (n - k))
        else:
            q0 = q0 + c * (x ** k) * (one_minus_x ** (m - 1 - k))
    q = q0 if m % 2 == 0 else -q0  # (1-x)^m = (-1)^m (x-1)^m
    return p, q


def lift_polynomial(m: int) -> IntPolynomial:
    """p_m = x^m * p'_m; satisfies p_m(0) = 0, p_m(1) = 1 and lies in (x^m)."""
    p, _ = bezout_powers(m)
    return p.shift(m)


def eval_polynomial(p: IntPolynomial, r: Mat) -> Mat:
    """Evaluate p at a square matrix over Z/m (Horner; coefficients reduced mod m)."""
    if not r.is_square():
        raise ValueError(f"matrix argument must be square, got {r.shape}")
    n = r.rows
    out = Mat.zeros(r.mod, n, n)
    for c in reversed(p.coeffs):
        out = out @ r + Mat.scalar(r.mod, c, n)
    return out


def verify_bezout_identity(m: int, p: IntPolynomial, q: IntPolynomial) -> bool:
    """Check x^m p + (x-1)^m q = 1 exactly in Z[x]."""
    x = IntPolynomial.x()
    xm1 = IntPolynomial((-1, 1))
    total = (x ** m) * p + (xm1 ** m) * q
    return total == IntPolynomial.one()
