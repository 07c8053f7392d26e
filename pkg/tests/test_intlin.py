import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torhyp.intlin import (
    IntMat,
    UnderdeterminedSystemError,
    integer_kernel,
    rational_rank,
    smith_normal_form,
    solve_3x3,
    solve_exact,
)


def check_snf(m: IntMat) -> None:
    snf = smith_normal_form(m)
    assert snf.u.mul(m).mul(snf.v).entries == snf.s.entries
    assert abs(snf.u.det()) == 1
    assert abs(snf.v.det()) == 1
    diag = snf.diagonal()
    for i in range(m.rows):
        for j in range(m.cols):
            if i != j:
                assert snf.s[i, j] == 0
    for x, y in zip(diag, diag[1:]):
        if x != 0:
            assert y % x == 0
        else:
            assert y == 0
    assert all(d >= 0 for d in diag)


def test_snf_identity():
    m = IntMat.identity(3)
    snf = smith_normal_form(m)
    assert snf.s.entries == m.entries
    assert snf.u.entries == m.entries
    assert snf.v.entries == m.entries


def test_snf_diag_2_4():
    m = IntMat.from_rows([[2, 0], [0, 4]])
    snf = smith_normal_form(m)
    assert snf.diagonal() == (2, 4)
    check_snf(m)


def test_snf_divisibility_forced():
    m = IntMat.from_rows([[4, 0], [0, 6]])
    snf = smith_normal_form(m)
    assert snf.diagonal() == (2, 12)
    check_snf(m)


def test_snf_case_201_ray_matrix_free_cokernel():
    # Rays of the rank-2 family with one twist parameter, as rows; the
    # cokernel must be free of rank 2 whatever the twist.
    for twist in range(0, 5):
        m = IntMat.from_rows([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, 0, 1], [twist, -1, -1]])
        snf = smith_normal_form(m)
        assert snf.diagonal() == (1, 1, 1)
        check_snf(m)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 5),
    st.integers(1, 5),
    st.data(),
)
def test_snf_random(nr, nc, data):
    entries = [data.draw(st.integers(-9, 9)) for _ in range(nr * nc)]
    m = IntMat(nr, nc, tuple(entries))
    check_snf(m)


def test_kernel_identity_empty():
    assert integer_kernel(IntMat.identity(4)) == []


def test_kernel_case_201_gale():
    for twist in range(0, 4):
        b = IntMat.from_rows([[1, 1, 0, 0, 0], [-twist, 0, 1, 1, 1]])
        basis = integer_kernel(b)
        assert len(basis) == 3
        for v in basis:
            assert b.mul_vec(v) == (0, 0)
        # The displayed generators must lie in the span of the basis.
        targets = [(1, -1, 0, 0, twist), (0, 0, 1, 0, -1), (0, 0, 0, 1, -1)]
        span = IntMat.from_rows(basis)
        for tvec in targets:
            ext = IntMat.from_rows(list(span.to_rows()) + [list(tvec)])
            assert rational_rank(ext) == rational_rank(span)


def rational_nullspace_dim(m: IntMat) -> int:
    return m.cols - rational_rank(m)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_kernel_random_2x4(data):
    entries = [data.draw(st.integers(-6, 6)) for _ in range(8)]
    m = IntMat(2, 4, tuple(entries))
    basis = integer_kernel(m)
    for v in basis:
        assert m.mul_vec(v) == (0, 0)
    assert len(basis) == rational_nullspace_dim(m)
    if basis:
        assert rational_rank(IntMat.from_rows(basis)) == len(basis)


def test_solve_exact_identity():
    m = IntMat.identity(3)
    assert solve_exact(m, [5, -7, 2]) == (5, -7, 2)


def test_solve_exact_smooth_cone_is_integral():
    rng = random.Random(7)
    for _ in range(50):
        # Build a unimodular matrix from elementary operations.
        m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(6):
            i, j = rng.sample(range(3), 2)
            q = rng.randint(-3, 3)
            m[i] = [x + q * y for x, y in zip(m[i], m[j])]
        mat = IntMat.from_rows(m)
        assert abs(mat.det()) == 1
        b = [rng.randint(-9, 9) for _ in range(3)]
        x = solve_exact(mat, b)
        assert all(xi.denominator == 1 for xi in x)
        # Cramer oracle.
        cramer = solve_3x3(m, b)
        assert cramer is not None
        nums, den = cramer
        assert tuple(Fraction(n, den) for n in nums) == x


def test_solve_exact_inconsistent():
    m = IntMat.from_rows([[1, 0], [1, 0], [0, 1]])
    assert solve_exact(m, [1, 2, 0]) is None


def test_solve_exact_underdetermined():
    m = IntMat.from_rows([[1, 1], [2, 2]])
    with pytest.raises(UnderdeterminedSystemError):
        solve_exact(m, [3, 6])


def test_solve_exact_substitution_roundtrip():
    rng = random.Random(11)
    for _ in range(100):
        rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(4)]
        m = IntMat.from_rows(rows)
        b = [rng.randint(-5, 5) for _ in range(4)]
        try:
            x = solve_exact(m, b)
        except UnderdeterminedSystemError:
            continue
        if x is None:
            continue
        for i in range(4):
            assert sum(Fraction(m[i, j]) * x[j] for j in range(3)) == b[i]
