"""Exact integer and rational linear algebra.

Matrices are small (desk scale), so everything is dense and row-major.  No
floating point is used anywhere; integers are Python ints and rationals are
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import kernels


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, k: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(k)] for i in range(k)], k)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = [other.col(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), oc)) for oc in ocols] for i in range(self.rows)],
            other.cols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det(self.to_rows())


@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    elementary_divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.elementary_divisors if d)


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)


def smith_normal_form(A) -> SmithDecomposition:
    """Smith normal form ``U @ A @ V == D`` with unimodular ``U`` and ``V``.

    The diagonal of ``D`` is nonnegative, each entry divides the next, and
    zeros come last.  The cokernel ``Z^rows / A Z^cols`` is
    ``Z^(rows - rank) + sum Z/d_i``.

    >>> smith_normal_form([[2, 4], [6, 8]]).elementary_divisors
    (2, 4)
    """
    A = as_matrix(A)
    m, n = A.rows, A.cols
    U, D, V = kernels.smith(A.to_rows(), m, n)
    divisors = tuple(D[i][i] for i in range(min(m, n)))
    return SmithDecomposition(
        IntMatrix.from_rows(U, m), IntMatrix.from_rows(D, n), IntMatrix.from_rows(V, n), divisors
    )


def rank(A) -> int:
    """Rank over the rationals."""
    A = as_matrix(A)
    if A.rows == 0 or A.cols == 0:
        return 0
    return kernels.bareiss_rank(A.to_rows())


def kernel_basis(A) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice ``{v in Z^cols : A v = 0}``."""
    A = as_matrix(A)
    snf = smith_normal_form(A)
    k = snf.rank
    return [snf.V.col(j) for j in range(k, A.cols)]


def hermite_rows(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form ``H = W @ A`` with ``W`` unimodular.

    Pivots are positive, entries above a pivot are reduced into
    ``[0, pivot)``, and zero rows come last.  Returns ``(H, W)``.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    W = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            W[r], W[p] = W[p], W[r]
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                W[r] = [-x for x in W[r]]
            done = True
            for i in range(r + 1, m):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[r])]
                if a[i][c]:
                    done = False
            if done:
                break
        if r < m and a[r][c]:
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    W[i] = [x - q * y for x, y in zip(W[i], W[r])]
            r += 1
    return a, W


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def lcm_denominator(values) -> int:
    L = 1
    for x in values:
        d = Fraction(x).denominator
        L = L * d // gcd(L, d)
    return L


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    L = lcm_denominator(v)
    return tuple(int(Fraction(x) * L) for x in v)


def rank_rational(rows: Sequence[Sequence]) -> int:
    """Rank over Q of a matrix with Fraction entries (rows are rescaled to ints)."""
    rows = [clear_denominators(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return kernels.bareiss_rank([list(r) for r in rows])


def solve_rational(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``A x = b`` over Q (free variables set to 0), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return tuple(x)


def find_feasible_point(
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvars: int | None = None,
) -> tuple[Fraction, ...] | None:
    """A rational point with ``A_ub x <= b_ub`` and ``A_eq x == b_eq``, or None.

    Variables are free.  Phase-one simplex on an exact tableau.  Pivots use
    the most negative reduced cost and switch to Bland's rule after a run of
    degenerate steps, so the method terminates and stays deterministic.
    """
    if nvars is None:
        nvars = len(A_ub[0]) if len(A_ub) else len(A_eq[0])
    # x = xp - xm, one slack per inequality, then one artificial per row
    rows = []
    rhs = []
    n_ub = len(A_ub)
    for i, r in enumerate(A_ub):
        slack = [Fraction(int(k == i)) for k in range(n_ub)]
        rows.append([Fraction(v) for v in r] + [-Fraction(v) for v in r] + slack)
        rhs.append(Fraction(b_ub[i]))
    for i, r in enumerate(A_eq):
        rows.append([Fraction(v) for v in r] + [-Fraction(v) for v in r] + [Fraction(0)] * n_ub)
        rhs.append(Fraction(b_eq[i]))
    m = len(rows)
    if m == 0:
        return (Fraction(0),) * nvars
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    nstruct = 2 * nvars + n_ub
    ntot = nstruct + m
    T = [rows[i] + [Fraction(int(k == i)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [nstruct + i for i in range(m)]
    # reduced costs of the phase-one objective sum(artificials)
    cost = [Fraction(0)] * (ntot + 1)
    for i in range(m):
        for k in range(nstruct):
            cost[k] -= T[i][k]
        cost[ntot] -= T[i][ntot]
    degenerate = 0
    while True:
        if degenerate > 2 * m:
            enter = next((k for k in range(ntot) if cost[k] < 0), None)
        else:
            enter = min(range(ntot), key=lambda k: (cost[k], k))
            if cost[enter] >= 0:
                enter = None
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][ntot] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            break  # unbounded direction cannot occur in phase one
        degenerate = degenerate + 1 if best == 0 else 0
        pv = T[leave][enter]
        prow = T[leave] = [v / pv if v else v for v in T[leave]]
        nz = [k for k, v in enumerate(prow) if v]
        for i in range(m):
            f = T[i][enter]
            if i != leave and f:
                row = T[i]
                for k in nz:
                    row[k] -= f * prow[k]
        f = cost[enter]
        for k in nz:
            cost[k] -= f * prow[k]
        basis[leave] = enter
    if cost[ntot] != 0:
        return None
    vals = [Fraction(0)] * ntot
    for i, bv in enumerate(basis):
        vals[bv] = T[i][ntot]
    return tuple(vals[k] - vals[nvars + k] for k in range(nvars))
