"""Exact rational linear algebra on lists of Fractions, backed by sympy's DomainMatrix over QQ."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def to_dm(rows: Sequence[Sequence], ncols: int = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(x) for x in r] for r in rows], (len(rows), ncols), QQ)


def from_dm(M: DomainMatrix) -> list:
    nrows, ncols = M.shape
    if nrows == 0 or ncols == 0:
        return [[] for _ in range(nrows)]
    return [[_frac(x) for x in r] for r in M.to_list()]


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A, B, inner: int = None) -> list:
    if inner is None:
        inner = len(B)
    ncols = len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(inner)), Fraction(0)) for j in range(ncols)] for i in range(len(A))]


def matvec(A, v) -> list:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def sub(A, B) -> list:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def power(A, k: int) -> list:
    n = len(A)
    if k < 0:
        A, k = inverse(A), -k
    result = identity(n)
    base = A
    while k:
        if k & 1:
            result = matmul(result, base, n)
        base = matmul(base, base, n)
        k >>= 1
    return result


def transpose(A, nrows: int = None, ncols: int = None) -> list:
    if nrows is None:
        nrows = len(A)
    if ncols is None:
        ncols = len(A[0]) if A else 0
    return [[A[i][j] for i in range(nrows)] for j in range(ncols)]


def rank(A, ncols: int = None) -> int:
    if not A:
        return 0
    return to_dm(A, ncols).rank()


def det(A) -> Fraction:
    if not A:
        return Fraction(1)
    return _frac(to_dm(A).det())


def inverse(A) -> list:
    return from_dm(to_dm(A).inv())


def kernel(A, ncols: int) -> list:
    """Basis vectors of ``{x : A x = 0}``."""
    if not A:
        return [list(v) for v in identity(ncols)]
    N = to_dm(A, ncols).nullspace()
    if N.shape[0] == 0:
        return []
    return from_dm(N)


def column_basis(vectors: Sequence[Sequence], dim: int) -> list:
    """A maximal linearly independent subset of ``vectors`` (each of length ``dim``)."""
    vectors = [list(v) for v in vectors]
    if not vectors or dim == 0:
        return []
    M = to_dm(transpose(vectors, len(vectors), dim), len(vectors))
    _, pivots = M.rref()
    return [vectors[j] for j in pivots]


def solve(A, b, ncols: int) -> Optional[list]:
    """Some ``x`` with ``A x = b``, or ``None``."""
    nrows = len(A)
    if nrows == 0:
        return [Fraction(0)] * ncols
    aug = [list(A[i]) + [b[i]] for i in range(nrows)]
    R, pivots = to_dm(aug, ncols + 1).rref()
    if ncols in pivots:
        return None
    R = from_dm(R)
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = R[r][ncols]
    return x
