import random

import pytest

from karex.zmod import (
    Mat,
    HowellBasis,
    annihilator,
    gcd_transform,
    howell,
    howell_complete,
    kernel_basis,
    solve_linear,
    spans_equal,
    unit_multiplier,
)


def brute_left_solutions(A, b):
    """All x with x @ A == b, by brute force.  Only for tiny shapes."""
    m = A.mod
    n = A.rows
    sols = []

    def rec(prefix):
        if len(prefix) == n:
            x = Mat.row(m, prefix)
            if x @ A == b:
                sols.append(x)
            return
        for v in range(m):
            rec(prefix + [v])

    rec([])
    return sols


def test_unit_multiplier_produces_canonical_divisor():
    import math

    for m in (2, 4, 6, 9, 12):
        for a in range(m):
            u = unit_multiplier(a, m)
            assert math.gcd(u, m) == 1
            if a:
                assert (u * a) % m == math.gcd(a, m)


def test_gcd_transform_is_unimodular():
    for m in (4, 6, 9):
        for a in range(m):
            for b in range(m):
                g, s, t, u, v = gcd_transform(a, b, m)
                assert (s * a + t * b) % m == g % m
                assert (u * a + v * b) % m == 0
                det = (s * v - t * u) % m
                import math

                assert math.gcd(det, m) == 1


def test_annihilator():
    assert annihilator(3, 6) == 2
    assert annihilator(2, 6) == 3
    assert annihilator(0, 6) == 1  # m/gcd(0,m) = 1, ann ideal is everything
    assert annihilator(4, 12) == 3


def test_matrix_basics():
    A = Mat.from_rows(6, [[2, 3], [1, 5]])
    B = Mat.from_rows(6, [[1, 0], [0, 1]])
    assert A @ B == A
    assert (A + (-A)).is_zero()
    assert A.t.t == A
    assert Mat.from_rows(6, [[2]]) @ Mat.from_rows(6, [[3]]) == Mat.from_rows(6, [[0]])
    with pytest.raises(ValueError):
        A @ Mat.from_rows(6, [[1, 2, 3]])
    with pytest.raises(ValueError):
        A + Mat.from_rows(5, [[1, 1], [1, 1]])


def test_howell_canonical_for_span():
    # same span, different generators -> same Howell form
    g1 = Mat.from_rows(4, [[2, 1]])
    g2 = Mat.from_rows(4, [[2, 1], [0, 2], [2, 3]])
    assert spans_equal(g1, g2)
    H = howell(g1)
    assert sorted(v.entries() for v in H.enumerate()) == sorted(
        {(0, 0), (2, 1), (0, 2), (2, 3)}
    )


def test_howell_reduce_is_canonical_on_cosets():
    rng = random.Random(0)
    for _ in range(60):
        m = rng.choice([4, 6, 9])
        rows = rng.randrange(1, 3)
        cols = rng.randrange(1, 4)
        G = Mat.from_rows(m, [[rng.randrange(m) for _ in range(cols)] for _ in range(rows)])
        H = howell(G)
        elems = H.enumerate()
        v = Mat.row(m, [rng.randrange(m) for _ in range(cols)])
        r0 = H.reduce(v)
        for g in elems:
            assert H.reduce(v + g) == r0
        assert H.contains(v) == (r0.is_zero())


def test_transform_and_kernel_of_howell_complete():
    rng = random.Random(1)
    for _ in range(80):
        m = rng.choice([2, 4, 6, 9])
        r = rng.randrange(1, 4)
        c = rng.randrange(1, 4)
        A = Mat.from_rows(m, [[rng.randrange(m) for _ in range(c)] for _ in range(r)])
        H, T, K = howell_complete(A)
        if T.rows:
            assert T @ A == H.mat
        if K.rows:
            assert (K @ A).is_zero()
        # kernel rows generate the full left kernel (brute force check)
        zero = Mat.zeros(m, 1, c)
        brute = brute_left_solutions(A, zero)
        KB = kernel_basis(A)
        assert KB.size() == len(brute)
        for x in brute:
            assert KB.contains(x)


def test_solve_linear_examples_over_z6():
    # identity system
    A = Mat.from_rows(6, [[1]])
    assert solve_linear(A, Mat.row(6, [5])) == Mat.row(6, [5])
    # 3 not in 2*Z/6
    assert solve_linear(Mat.from_rows(6, [[2]]), Mat.row(6, [3])) is None
    # x*3 = 3 has solutions {1,3,5}; canonical least representative is 1
    x = solve_linear(Mat.from_rows(6, [[3]]), Mat.row(6, [3]))
    assert x == Mat.row(6, [1])


def test_solve_linear_matches_brute_force():
    rng = random.Random(2)
    for _ in range(120):
        m = rng.choice([2, 4, 6])
        r = rng.randrange(1, 3)
        c = rng.randrange(1, 3)
        A = Mat.from_rows(m, [[rng.randrange(m) for _ in range(c)] for _ in range(r)])
        b = Mat.row(m, [rng.randrange(m) for _ in range(c)])
        sols = brute_left_solutions(A, b)
        x = solve_linear(A, b)
        if sols:
            assert x is not None and x @ A == b
            assert x in sols
        else:
            assert x is None


def test_solve_right_side():
    A = Mat.from_rows(6, [[2, 1], [0, 3]])
    b = Mat.from_rows(6, [[5], [3]])
    x = solve_linear(A, b, side="right")
    assert x is not None and A @ x == b
    with pytest.raises(ValueError):
        solve_linear(A, b, side="down")
