"""Exact linear algebra over Q.

Ranks are computed by fraction-free row elimination on sparse integer rows
(denominators cleared up front, rows kept primitive by gcd stripping), so no
rational pivots ever appear and results are deterministic: rows are processed
in input order and each pivot sits at the smallest live column index.
Kernels and solves use dense Fraction RREF; they only run on the small
matrices that show up when cohomology bases are needed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

SparseRow = dict[int, int]


def _clear_row(row: dict[int, Fraction | int]) -> SparseRow:
    if not row:
        return {}
    denom = 1
    for v in row.values():
        f = Fraction(v)
        denom = denom * f.denominator // gcd(denom, f.denominator)
    out = {}
    for c, v in row.items():
        f = Fraction(v) * denom
        if f:
            out[c] = int(f)
    return _strip_content(out)


def _strip_content(row: SparseRow) -> SparseRow:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g in (0, 1):
        return row
    return {c: v // g for c, v in row.items()}


class RowSpace:
    """Incrementally maintained echelon of sparse integer rows."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, SparseRow] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction | int]) -> SparseRow:
        """Eliminate the row against stored pivots (fraction-free)."""
        r = _clear_row(row)
        while r:
            lead = min(r)
            piv = self.pivots.get(lead)
            if piv is None:
                return r
            a, b = piv[lead], r[lead]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            nxt: SparseRow = {}
            for c, v in r.items():
                nxt[c] = v * ma
            for c, v in piv.items():
                w = nxt.get(c, 0) - v * mb
                if w:
                    nxt[c] = w
                else:
                    nxt.pop(c, None)
            r = _strip_content(nxt)
        return r

    def add(self, row: dict[int, Fraction | int]) -> bool:
        """Reduce and absorb the row; True when it enlarges the span."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True


def sparse_rank(rows: Iterable[dict[int, Fraction | int]]) -> int:
    space = RowSpace()
    for row in rows:
        space.add(row)
    return space.rank


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Dense reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    mat = [list(map(Fraction, row)) for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                sel = i
                break
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : M x = 0}, with free coordinates in ascending column order."""
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(red, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """One solution of M x = rhs, or None when inconsistent."""
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    red, pivots = rref(aug)
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        if p == ncols:
            return None
        x[p] = row[-1]
    return x
