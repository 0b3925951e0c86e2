"""Exact integer / rational linear algebra used by the geometry and lattice code.

Everything here works on plain Python ints and ``Fraction`` so results are
exact; matrices are lists of rows.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

IntVec = Tuple[int, ...]


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def primitive(vec: Sequence[Fraction | int]) -> IntVec:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    fr = [Fraction(x) for x in vec]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q. Returns (matrix, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of the rational right kernel {x : rows @ x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """Unique rational solution of a square system, or None if singular."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [R[i][n] for i in range(n)]


def _ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row-style Hermite normal form of the lattice spanned by integer rows.

    Pivots move left to right, are positive, and entries above each pivot are
    reduced into ``[0, pivot)``. Zero rows are dropped, so the output is the
    unique HNF basis of the row lattice.
    """
    H = [list(map(int, r)) for r in rows]
    if not H:
        return []
    ncols = len(H[0])
    r = 0
    for c in range(ncols):
        if r == len(H):
            break
        nz = [i for i in range(r, len(H)) if H[i][c] != 0]
        if not nz:
            continue
        i0 = nz[0]
        H[r], H[i0] = H[i0], H[r]
        for i in range(r + 1, len(H)):
            if H[i][c] == 0:
                continue
            g, x, y = _ext_gcd(H[r][c], H[i][c])
            a, b = H[r][c] // g, H[i][c] // g
            top = [x * p + y * q for p, q in zip(H[r], H[i])]
            bot = [-b * p + a * q for p, q in zip(H[r], H[i])]
            H[r], H[i] = top, bot
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
        r += 1
    return [row for row in H[:r] if any(row)]


class IntegerSystem:
    """Integer solutions of ``A k = u`` for a fixed integer matrix ``A`` (rows).

    Built once by unimodular row reduction of ``A^T`` augmented with the
    identity; gives a basis of the integer kernel and particular solutions.
    """

    def __init__(self, A: Sequence[Sequence[int]]):
        self.A = [list(map(int, r)) for r in A]
        nrows = len(self.A)
        ncols = len(self.A[0]) if nrows else 0
        self.nrows, self.ncols = nrows, ncols
        # rows of E = U A^T, tracked together with U
        E = [[self.A[i][j] for i in range(nrows)] for j in range(ncols)]
        U = [[int(i == j) for i in range(ncols)] for j in range(ncols)]
        r = 0
        pivots = []
        for c in range(nrows):
            if r == ncols:
                break
            nz = [i for i in range(r, ncols) if E[i][c] != 0]
            if not nz:
                continue
            i0 = nz[0]
            E[r], E[i0] = E[i0], E[r]
            U[r], U[i0] = U[i0], U[r]
            for i in range(r + 1, ncols):
                if E[i][c] == 0:
                    continue
                g, x, y = _ext_gcd(E[r][c], E[i][c])
                a, b = E[r][c] // g, E[i][c] // g
                E[r], E[i] = (
                    [x * p + y * q for p, q in zip(E[r], E[i])],
                    [-b * p + a * q for p, q in zip(E[r], E[i])],
                )
                U[r], U[i] = (
                    [x * p + y * q for p, q in zip(U[r], U[i])],
                    [-b * p + a * q for p, q in zip(U[r], U[i])],
                )
            pivots.append(c)
            r += 1
        self.rank = r
        self._E = E[:r]
        self._pivots = pivots
        self._U = U
        self.kernel_basis = [tuple(row) for row in U[r:]]

    def particular(self, u: Sequence[int]) -> Optional[IntVec]:
        """An integer k with A k = u, or None if u is not in the image lattice."""
        resid = [int(x) for x in u]
        if len(resid) != self.nrows:
            raise ValueError("target has wrong length")
        y = [0] * self.ncols
        for idx, c in enumerate(self._pivots):
            e = self._E[idx]
            q, rem = divmod(resid[c], e[c])
            if rem:
                return None
            y[idx] = q
            if q:
                resid = [a - q * b for a, b in zip(resid, e)]
        if any(resid):
            return None
        k = [0] * self.ncols
        for idx in range(self.rank):
            if y[idx]:
                row = self._U[idx]
                k = [a + y[idx] * b for a, b in zip(k, row)]
        return tuple(k)
