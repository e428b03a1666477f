from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricpairs import exactlin
from toricpairs.exactlin import IntMatrix, smith_normal_form


def fraction_rank(rows):
    """Plain Gaussian elimination over Q; independent of the library kernels."""
    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c] / a[rank][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def check_snf(rows):
    A = IntMatrix.from_rows(rows)
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert abs(s.U.det()) == 1 and abs(s.V.det()) == 1
    divs = s.elementary_divisors
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert s.D[i, j] == 0
    assert all(d >= 0 for d in divs)
    nz = [d for d in divs if d]
    assert divs[: len(nz)] == tuple(nz), "zeros must trail"
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert s.rank == fraction_rank(rows) == exactlin.rank(A)
    return s


def test_snf_small_examples():
    assert smith_normal_form([[2, 4], [6, 8]]).elementary_divisors == (2, 4)
    assert smith_normal_form([[1, 0], [0, 1], [-1, -1]]).elementary_divisors == (1, 1)
    assert smith_normal_form([[1, 1], [1, -1]]).elementary_divisors == (1, 2)
    assert smith_normal_form([[0, 0], [0, 0]]).elementary_divisors == (0, 0)


def test_snf_wide_and_tall():
    check_snf([[2, 4, 6]])
    check_snf([[3], [6], [9]])
    check_snf([[0, 0, 5], [0, 0, 0]])


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    check_snf(rows)


def test_kernel_basis_is_saturated():
    # 2x + 4y = 0 has kernel generated by (2, -1), not (4, -2)
    (v,) = exactlin.kernel_basis([[2, 4]])
    assert v in ((2, -1), (-2, 1))
    K = exactlin.kernel_basis([[1, 1, 1]])
    assert len(K) == 2
    for v in K:
        assert sum(v) == 0


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_kernel_basis_dimension(rows):
    A = IntMatrix.from_rows(rows)
    K = exactlin.kernel_basis(A)
    assert len(K) == A.cols - fraction_rank(rows)
    for v in K:
        assert all(x == 0 for x in A.apply(v))


def test_hermite_rows():
    H, W = exactlin.hermite_rows([[2, 4], [3, 5]])
    assert H == [[1, 1], [0, 2]]
    Wm = IntMatrix.from_rows(W)
    assert abs(Wm.det()) == 1
    assert (Wm @ IntMatrix.from_rows([[2, 4], [3, 5]])).to_rows() == H


def test_det_and_transpose():
    A = IntMatrix.from_rows([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert A.det() == 18
    assert A.transpose().det() == 18
    assert IntMatrix.identity(3).det() == 1
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2]]).det()


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_solve_rational():
    assert exactlin.solve_rational([[1, 1], [1, -1]], [-1, 0]) == (Fraction(-1, 2), Fraction(-1, 2))
    assert exactlin.solve_rational([[1, 1], [2, 2]], [1, 3]) is None
    x = exactlin.solve_rational([[1, 1, 1]], [3])
    assert sum(x) == 3


def test_feasible_point():
    # x + y <= 1, x >= 2, y >= 0 -> infeasible; without y >= 0 it is feasible
    assert exactlin.find_feasible_point([[1, 1], [-1, 0], [0, -1]], [1, -2, 0], nvars=2) is None
    p = exactlin.find_feasible_point([[1, 1], [-1, 0]], [1, -2], nvars=2)
    assert p[0] + p[1] <= 1 and p[0] >= 2
    p = exactlin.find_feasible_point([[1, 1], [-1, 0], [0, -1]], [1, -Fraction(1, 3), -Fraction(1, 3)], nvars=2)
    assert p[0] + p[1] <= 1 and p[0] >= Fraction(1, 3) and p[1] >= Fraction(1, 3)
    # equalities and free (negative) variables
    p = exactlin.find_feasible_point([[1, 0]], [-5], [[1, 1]], [0], nvars=2)
    assert p[0] <= -5 and p[0] + p[1] == 0


def test_primitive_and_denominators():
    assert exactlin.primitive([4, -6, 8]) == (2, -3, 4)
    with pytest.raises(ValueError):
        exactlin.primitive([0, 0])
    assert exactlin.clear_denominators([Fraction(1, 2), Fraction(2, 3)]) == (3, 4)
    assert exactlin.rank_rational([[Fraction(1, 2), 1], [1, 2]]) == 1


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(-4, 4), min_size=n, max_size=n),
            st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=n, max_size=n), st.integers(0, 3)), max_size=8),
            st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), max_size=2),
        )
    )
)
def test_feasible_point_on_systems_with_a_known_solution(data):
    x0, ineqs, eqs = data
    A_ub = [r for r, _ in ineqs]
    b_ub = [sum(a * x for a, x in zip(r, x0)) + slack for r, slack in ineqs]
    b_eq = [sum(a * x for a, x in zip(r, x0)) for r in eqs]
    p = exactlin.find_feasible_point(A_ub, b_ub, eqs, b_eq, nvars=len(x0))
    assert p is not None
    for r, b in zip(A_ub, b_ub):
        assert sum(a * x for a, x in zip(r, p)) <= b
    for r, b in zip(eqs, b_eq):
        assert sum(a * x for a, x in zip(r, p)) == b
