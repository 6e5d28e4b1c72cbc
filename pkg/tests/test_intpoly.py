import random

import pytest

from karex.intpoly import (
    IntPolynomial,
    bezout_powers,
    eval_polynomial,
    lift_polynomial,
    verify_bezout_identity,
)
from karex.zmod import Mat


def test_polynomial_arithmetic():
    x = IntPolynomial.x()
    p = (x + IntPolynomial.one()) * (x - IntPolynomial.one())
    assert p == IntPolynomial((-1, 0, 1))
    assert p.eval_int(3) == 8
    assert (x ** 3).shift(2) == x ** 5
    assert IntPolynomial.zero().degree == -1


def test_bezout_powers_known_values():
    # m = 2 reproduces the published pair p' = -2x + 3, q' = 2x + 1
    p2, q2 = bezout_powers(2)
    assert p2 == IntPolynomial((3, -2))
    assert q2 == IntPolynomial((1, 2))
    # m = 1: x*1 + (x-1)*(-1) = 1
    p1, q1 = bezout_powers(1)
    assert p1 == IntPolynomial.one()
    assert q1 == IntPolynomial((-1,))


@pytest.mark.parametrize("m", range(1, 9))
def test_bezout_identity_exact(m):
    p, q = bezout_powers(m)
    assert verify_bezout_identity(m, p, q)


def test_lift_polynomial_values():
    # p_2 = x^2 p'_2 = 3x^2 - 2x^3
    assert lift_polynomial(2) == IntPolynomial((0, 0, 3, -2))
    assert lift_polynomial(1) == IntPolynomial((0, 1))
    for m in range(1, 7):
        pm = lift_polynomial(m)
        assert pm.eval_int(0) == 0
        assert pm.eval_int(1) == 1
        # p_m lies in the ideal (x^m)
        assert all(c == 0 for c in pm.coeffs[:m])


def test_eval_polynomial_examples():
    p2 = lift_polynomial(2)
    # idempotent 3 over Z/6 is fixed
    assert eval_polynomial(p2, Mat.from_rows(6, [[3]])) == Mat.from_rows(6, [[3]])
    # r = 2 over Z/4: (r^2 - r)^2 = 4 = 0, p_2(2) = 12 - 16 = -4 = 0
    assert eval_polynomial(p2, Mat.from_rows(4, [[2]])) == Mat.from_rows(4, [[0]])
    # r = 3 over Z/9: (r^2 - r)^2 = 36 = 0, p_2(3) = 27 - 54 = -27 = 0
    assert eval_polynomial(p2, Mat.from_rows(9, [[3]])) == Mat.from_rows(9, [[0]])
    with pytest.raises(ValueError):
        eval_polynomial(p2, Mat.from_rows(6, [[1, 2]]))


def random_idempotent(rng, m, n):
    """Conjugate of a random 0/1-and-central-idempotent diagonal by a random unit."""
    import math

    idems = [e for e in range(m) if (e * e) % m == e]
    while True:
        d = Mat(m, [[rng.choice(idems) if i == j else 0 for j in range(n)] for i in range(n)])
        u = Mat(m, [[rng.randrange(m) for _ in range(n)] for _ in range(n)])
        # invertible iff determinant is a unit; test by solving u x = id
        from karex.zmod import solve_linear

        inv = solve_linear(u, Mat.identity(m, n), side="right")
        if inv is not None and (u @ inv == Mat.identity(m, n)) and (inv @ u == Mat.identity(m, n)):
            return u @ d @ inv


def test_lift_polynomial_fixes_random_idempotents():
    rng = random.Random(5)
    p = {m: lift_polynomial(m) for m in (2, 4, 6, 9)}
    for _ in range(200):
        m = rng.choice([2, 4, 6, 9])
        n = rng.randrange(1, 4)
        e = random_idempotent(rng, m, n)
        assert e.is_idempotent()
        assert eval_polynomial(p[m], e) == e


def test_lift_polynomial_idempotent_on_near_idempotents():
    rng = random.Random(6)
    found = 0
    for m in (2, 4, 6, 9):
        pm = lift_polynomial(m)
        tries = 0
        while found % 50 or tries == 0:
            tries += 1
            n = rng.randrange(1, 4)
            r = Mat(m, [[rng.randrange(m) for _ in range(n)] for _ in range(n)])
            s = r @ r - r
            nil = s
            for _ in range(m - 1):
                nil = nil @ s
            if not nil.is_zero():
                continue
            v = eval_polynomial(pm, r)
            assert v.is_idempotent()
            found += 1
            if tries > 3000:
                break
