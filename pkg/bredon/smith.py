"""
Exact integer linear algebra.

Smith normal form with unimodular transforms, integer system solving with
infeasibility certificates, saturated kernels, and finitely generated
abelian groups in invariant-factor normal form. Matrices are row-major
lists of Python ints and act on column vectors.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from bredon.exceptions import InputError, VerificationError
from bredon.typing import Matrix, Vector

logger = logging.getLogger(__name__)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def mat_mul(A: Matrix, B: Matrix, cols: Optional[int] = None) -> Matrix:
    """``A·B``; ``cols`` gives the width when ``B`` has no rows."""
    if cols is None:
        cols = len(B[0]) if B else 0
    if not A:
        return []
    result = []
    for row in A:
        out = [0] * cols
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        out[j] += a * b
        result.append(out)
    return result


def mat_vec(A: Matrix, v: Sequence[int]) -> Vector:
    return [sum(a * x for a, x in zip(row, v) if a) for row in A]


def vec_mat(v: Sequence[int], A: Matrix, cols: int) -> Vector:
    out = [0] * cols
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] += x * a
    return out


def transpose(A: Matrix, cols: int) -> Matrix:
    return [[row[j] for row in A] for j in range(cols)]


def _rows(M: Matrix, i1: int, i2: int, a: int, b: int, c: int, d: int) -> None:
    # (r1, r2) <- (a r1 + b r2, c r1 + d r2)
    r1, r2 = M[i1], M[i2]
    M[i1] = [a * x + b * y for x, y in zip(r1, r2)]
    M[i2] = [c * x + d * y for x, y in zip(r1, r2)]


def _cols(M: Matrix, j1: int, j2: int, a: int, b: int, c: int, d: int) -> None:
    # (c1, c2) <- (a c1 + b c2, c c1 + d c2)
    for row in M:
        x, y = row[j1], row[j2]
        if x or y:
            row[j1] = a * x + b * y
            row[j2] = c * x + d * y


@dataclass
class SmithForm:
    """
    ``S = U·A·V`` with ``U``, ``V`` unimodular and ``S`` diagonal.

    Attributes
    ----------
    diagonal : list of int
        The nonnegative diagonal of ``S``; the first ``rank`` entries are
        nonzero and form a divisibility chain.
    U, V : Matrix or None
        The transforms (``None`` when not requested).
    U_inv, V_inv : Matrix or None
        Their inverses.
    """

    rows: int
    cols: int
    diagonal: List[int]
    rank: int
    U: Optional[Matrix] = None
    V: Optional[Matrix] = None
    U_inv: Optional[Matrix] = None
    V_inv: Optional[Matrix] = None

    @property
    def invariant_factors(self) -> List[int]:
        return self.diagonal[: self.rank]

    def matrix(self) -> Matrix:
        S = zero_matrix(self.rows, self.cols)
        for i, d in enumerate(self.diagonal):
            S[i][i] = d
        return S


def smith_normal_form(A: Matrix, cols: Optional[int] = None, transforms: bool = True) -> SmithForm:
    """Smith normal form by smallest-absolute-value pivoting.

    Args:
        A: An ``m x n`` integer matrix, not modified.
        cols: ``n``, required when ``A`` has no rows.
        transforms: Whether to accumulate ``U``, ``V`` and their inverses.
    """
    m = len(A)
    n = cols if cols is not None else (len(A[0]) if A else 0)
    D = [list(row) for row in A]
    for row in D:
        if len(row) != n:
            raise InputError("Ragged matrix: expected %s columns", n)
    U, U_inv = identity_matrix(m), identity_matrix(m)
    V, V_inv = identity_matrix(n), identity_matrix(n)

    def row_op(i1: int, i2: int, a: int, b: int, c: int, d: int) -> None:
        _rows(D, i1, i2, a, b, c, d)
        if transforms:
            _rows(U, i1, i2, a, b, c, d)
            e = a * d - b * c
            # U_inv <- U_inv E^-1, E^-1 = e [[d, -b], [-c, a]]
            _cols(U_inv, i1, i2, e * d, -e * c, -e * b, e * a)

    def col_op(j1: int, j2: int, a: int, b: int, c: int, d: int) -> None:
        _cols(D, j1, j2, a, b, c, d)
        if transforms:
            _cols(V, j1, j2, a, b, c, d)
            e = a * d - b * c
            # F = [[a, c], [b, d]]; V_inv <- F^-1 V_inv
            _rows(V_inv, j1, j2, e * d, -e * c, -e * b, e * a)

    def negate_row(k: int) -> None:
        D[k] = [-x for x in D[k]]
        if transforms:
            U[k] = [-x for x in U[k]]
            for row in U_inv:
                row[k] = -row[k]

    k = 0
    while k < min(m, n):
        pivot = None
        for i in range(k, m):
            row = D[i]
            for j in range(k, n):
                x = row[j]
                if x and (pivot is None or abs(x) < pivot[0]):
                    pivot = (abs(x), i, j)
                    if pivot[0] == 1:
                        break
            if pivot is not None and pivot[0] == 1:
                break
        if pivot is None:
            break
        _, i, j = pivot
        if i != k:
            row_op(k, i, 0, 1, 1, 0)
        if j != k:
            col_op(k, j, 0, 1, 1, 0)

        while True:
            p = D[k][k]
            done = True
            for i in range(k + 1, m):
                x = D[i][k]
                if x:
                    q = x // p
                    row_op(k, i, 1, 0, -q, 1)
                    if D[i][k]:
                        done = False
            for j in range(k + 1, n):
                x = D[k][j]
                if x:
                    q = x // p
                    col_op(k, j, 1, 0, -q, 1)
                    if D[k][j]:
                        done = False
            if done:
                bad = next(
                    (i for i in range(k + 1, m) if any(x % p for x in D[i][k + 1 :])), None
                )
                if bad is None:
                    break
                row_op(k, bad, 1, 1, 0, 1)
                done = False
            # move the smallest nonzero entry of row/column k to the pivot
            best = (abs(D[k][k]), k, k)
            for i in range(k + 1, m):
                if D[i][k] and abs(D[i][k]) < best[0]:
                    best = (abs(D[i][k]), i, k)
            for j in range(k + 1, n):
                if D[k][j] and abs(D[k][j]) < best[0]:
                    best = (abs(D[k][j]), k, j)
            if best[1] != k:
                row_op(k, best[1], 0, 1, 1, 0)
            if best[2] != k:
                col_op(k, best[2], 0, 1, 1, 0)
        if D[k][k] < 0:
            negate_row(k)
        k += 1

    diagonal = [D[i][i] for i in range(min(m, n))]
    form = SmithForm(m, n, diagonal, sum(1 for d in diagonal if d))
    if transforms:
        form.U, form.V, form.U_inv, form.V_inv = U, V, U_inv, V_inv
    return form


def invariant_factors(A: Matrix, cols: Optional[int] = None) -> List[int]:
    return smith_normal_form(A, cols, transforms=False).invariant_factors


def rank(A: Matrix, cols: Optional[int] = None) -> int:
    return smith_normal_form(A, cols, transforms=False).rank


def kernel_basis(A: Matrix, cols: int) -> Matrix:
    """A basis of the (saturated) lattice ``{x : A x = 0}``, as rows."""
    form = smith_normal_form(A, cols)
    V = form.V
    return [[V[i][j] for i in range(cols)] for j in range(form.rank, cols)]


# ______________________ Solving ___________________________


@dataclass
class Certificate:
    """
    Infeasibility witness for ``A x = b`` over the integers.

    The row vector ``w = numerator / denominator`` satisfies ``w·A``
    integral and ``w·b`` not integral. ``denominator == 0`` encodes the
    rational case ``numerator·A = 0``, ``numerator·b != 0``.
    """

    numerator: Vector
    denominator: int

    def to_json(self) -> dict:
        return {"numerator": self.numerator, "denominator": self.denominator}


def check_certificate(A: Matrix, b: Sequence[int], cols: int, cert: Certificate) -> bool:
    wA = vec_mat(cert.numerator, A, cols)
    wb = sum(u * x for u, x in zip(cert.numerator, b))
    if cert.denominator == 0:
        return all(x == 0 for x in wA) and wb != 0
    d = cert.denominator
    return all(x % d == 0 for x in wA) and wb % d != 0


@dataclass
class Solution:
    """Result of :func:`solve`: exactly one of ``x`` and ``certificate`` is set."""

    x: Optional[Vector]
    certificate: Optional[Certificate] = None

    @property
    def feasible(self) -> bool:
        return self.x is not None


def solve(A: Matrix, b: Sequence[int], cols: int, form: Optional[SmithForm] = None) -> Solution:
    """Finds an integer ``x`` with ``A x = b`` or a certificate that none exists."""
    if form is None:
        form = smith_normal_form(A, cols)
    U, V = form.U, form.V
    if U is None or V is None:
        raise InputError("solve needs a Smith form with transforms")
    c = mat_vec(U, b)
    y = [0] * cols
    for i, ci in enumerate(c):
        if i < form.rank:
            d = form.diagonal[i]
            if ci % d:
                return Solution(None, Certificate(list(U[i]), d))
            y[i] = ci // d
        elif ci:
            return Solution(None, Certificate(list(U[i]), 0))
    x = mat_vec(V, y)
    if mat_vec(A, x) != list(b):
        raise VerificationError("Smith solve produced a wrong solution")
    return Solution(x)


def rational_combination(cert: Certificate) -> List[Fraction]:
    d = cert.denominator or 1
    return [Fraction(u, d) for u in cert.numerator]


# __________________ Abelian groups ________________________


@dataclass(frozen=True)
class AbGroupInvariants:
    """
    A finitely generated abelian group in invariant-factor normal form.

    ``factors`` lists the torsion invariant factors ``d1 | d2 | ...``
    (all > 1) ascending, followed by one ``0`` per infinite cyclic factor.
    ``(2, 0)`` is ``Z ⊕ Z/2``; ``()`` is the trivial group.
    """

    factors: Tuple[int, ...] = ()

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "AbGroupInvariants":
        """Normalizes any list of cyclic orders (``0`` meaning ``Z``)."""
        factors = list(factors)
        if any(f < 0 for f in factors):
            raise InputError("Cyclic orders must be nonnegative: %s", factors)
        free = factors.count(0)
        torsion = [f for f in factors if f > 1]
        if len(torsion) > 1:
            D = [[f if i == j else 0 for j in range(len(torsion))] for i, f in enumerate(torsion)]
            torsion = invariant_factors(D)
        torsion = [d for d in torsion if d != 1]
        return cls(tuple(sorted(torsion)) + (0,) * free)

    @classmethod
    def cokernel(cls, relations: Matrix, rank: int) -> "AbGroupInvariants":
        """``Z^rank`` modulo the span of the relation rows."""
        form = smith_normal_form(relations, rank, transforms=False)
        torsion = [d for d in form.invariant_factors if d != 1]
        return cls(tuple(torsion) + (0,) * (rank - form.rank))

    @classmethod
    def free(cls, rank: int) -> "AbGroupInvariants":
        return cls((0,) * rank)

    @property
    def free_rank(self) -> int:
        return self.factors.count(0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(f for f in self.factors if f)

    def is_zero(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join("Z" if f == 0 else f"Z/{f}" for f in self.factors)

    def to_json(self) -> List[int]:
        return list(self.factors)


# ______________________ Lattices ___________________________


def lattice_basis(vectors: Matrix, n: int) -> Matrix:
    """A basis (as rows) of the lattice spanned by ``vectors`` in ``Z^n``."""
    if not vectors:
        return []
    form = smith_normal_form(vectors, n)
    V_inv = form.V_inv
    assert V_inv is not None
    return [[form.diagonal[i] * x for x in V_inv[i]] for i in range(form.rank)]


def right_inverse(A: Matrix, cols: int) -> Matrix:
    """``R`` with ``A·R = I`` for a surjective ``A: Z^cols -> Z^rows``.

    Raises:
        VerificationError: If ``A`` is not surjective over the integers.
    """
    rows = len(A)
    form = smith_normal_form(A, cols)
    if form.rank != rows or any(d != 1 for d in form.invariant_factors):
        raise VerificationError("Map is not surjective over the integers")
    V, U = form.V, form.U
    assert V is not None and U is not None
    left = [row[:rows] for row in V]
    return mat_mul(left, U, rows)


def left_inverse(B: Matrix, cols: int) -> Matrix:
    """``L`` with ``L·B = I`` for ``B`` with saturated independent columns."""
    form = smith_normal_form(B, cols)
    if form.rank != cols or any(d != 1 for d in form.invariant_factors):
        raise VerificationError("Columns do not span a saturated sublattice")
    V, U = form.V, form.U
    assert V is not None and U is not None
    return mat_mul(V, U[:cols], len(B))


def subquotient(cycles: Matrix, boundaries: Matrix, n: int) -> AbGroupInvariants:
    """``span(cycles) / span(boundaries)`` for rows in ``Z^n``.

    Raises:
        VerificationError: If a boundary is not in the span of the cycles.
    """
    basis = lattice_basis(cycles, n)
    r = len(basis)
    if r == 0:
        if any(any(b) for b in boundaries):
            raise VerificationError("Boundary outside the cycle lattice")
        return AbGroupInvariants()
    columns = transpose(basis, n)
    form = smith_normal_form(columns, r)
    coords = []
    for b in boundaries:
        if not any(b):
            continue
        solution = solve(columns, b, r, form)
        if solution.x is None:
            raise VerificationError("Boundary outside the cycle lattice")
        coords.append(solution.x)
    return AbGroupInvariants.cokernel(coords, r)
