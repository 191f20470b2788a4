"""Degreewise cohomology of a wellformed model, by exact rational linear algebra.

For each degree k the differential is written out in the canonical monomial
bases of A^k and A^{k+1}; Betti numbers come from exact ranks, cohomology
bases from kernels modulo boundaries.  Representatives are picked
deterministically: kernel vectors in free-column order, kept when they extend
the span of the coboundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ellipticity import formal_dimension_bound
from .graded import Element, Monomial, monomial_basis
from .linalg import RowSpace, kernel_basis, solve, sparse_rank
from .model import Morphism, SullivanModel, apply_d


@dataclass
class BettiTable:
    """dim H^k for k = 0..max_degree."""

    entries: tuple[tuple[int, int], ...]
    max_degree: int

    def dim(self, k: int) -> int:
        for deg, d in self.entries:
            if deg == k:
                return d
        raise KeyError(f"degree {k} not tabulated")

    def total(self) -> int:
        return sum(d for _, d in self.entries)

    def nonzero(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, d) for k, d in self.entries if d)


def _element_vector(elem: Element, index: dict[Monomial, int]) -> dict[int, Fraction]:
    vec = {}
    for m, c in elem.terms.items():
        vec[index[m]] = c
    return vec


def _d_rows(model: SullivanModel, basis_k: list[Monomial], index_k1: dict[Monomial, int]):
    """One sparse row per degree-k basis monomial: its differential in degree k+1."""
    rows = []
    for m in basis_k:
        img = apply_d(model, Element.monomial(model.gens, m))
        rows.append(_element_vector(img, index_k1))
    return rows


def _d_rank(model: SullivanModel, k: int) -> int:
    basis_k = monomial_basis(model.gens, k)
    if not basis_k:
        return 0
    basis_k1 = monomial_basis(model.gens, k + 1)
    index_k1 = {m: i for i, m in enumerate(basis_k1)}
    return sparse_rank(_d_rows(model, basis_k, index_k1))


def betti(model: SullivanModel, k: int) -> int:
    """dim ker(D: A^k -> A^{k+1}) - dim im(D: A^{k-1} -> A^k)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    dim_k = len(monomial_basis(model.gens, k))
    rank_k = _d_rank(model, k)
    rank_prev = _d_rank(model, k - 1) if k > 0 else 0
    return dim_k - rank_k - rank_prev


def total_cohomology(model: SullivanModel, cutoff: int | None = None) -> BettiTable:
    """Betti table for degrees 0..cutoff (default: the formal-dimension bound)."""
    if cutoff is None:
        cutoff = formal_dimension_bound(model)
        if cutoff <= 0:
            raise ValueError(
                "formal-dimension bound is not positive; pass an explicit cutoff"
            )
    entries = []
    rank_prev = 0
    for k in range(cutoff + 1):
        dim_k = len(monomial_basis(model.gens, k))
        rank_k = _d_rank(model, k)
        entries.append((k, dim_k - rank_k - rank_prev))
        rank_prev = rank_k
    return BettiTable(tuple(entries), cutoff)


@dataclass
class CohomologyBasis:
    """Cocycle representatives whose classes form a basis of H^k."""

    degree: int
    representatives: tuple[Element, ...]


def cohomology_basis(model: SullivanModel, k: int) -> CohomologyBasis:
    gens = model.gens
    basis_k = monomial_basis(gens, k)
    if not basis_k:
        return CohomologyBasis(k, ())
    n = len(basis_k)
    basis_k1 = monomial_basis(gens, k + 1)
    index_k1 = {m: i for i, m in enumerate(basis_k1)}

    # kernel of D restricted to degree k, as a dense (dim A^{k+1}) x n matrix
    cols = _d_rows(model, basis_k, index_k1)
    mat = [[Fraction(0)] * n for _ in range(len(basis_k1))]
    for i, col in enumerate(cols):
        for j, c in col.items():
            mat[j][i] = c
    cocycles = kernel_basis(mat, n)

    boundaries = RowSpace()
    if k > 0:
        index_k = {m: i for i, m in enumerate(basis_k)}
        for row in _d_rows(model, monomial_basis(gens, k - 1), index_k):
            boundaries.add(row)

    reps = []
    for vec in cocycles:
        if boundaries.add({i: c for i, c in enumerate(vec) if c}):
            reps.append(
                Element.from_terms(gens, ((basis_k[i], c) for i, c in enumerate(vec) if c))
            )
    return CohomologyBasis(k, tuple(reps))


def induced_map(phi: Morphism, k: int):
    """Matrix of H^k(phi) in the computed bases, plus its rank.

    Rows are indexed by the target representatives, columns by the source
    representatives, so matrices of composable maps multiply.
    """
    src = cohomology_basis(phi.source, k)
    tgt = cohomology_basis(phi.target, k)
    ncols = len(src.representatives)
    nrows = len(tgt.representatives)
    if ncols == 0 or nrows == 0:
        return [[Fraction(0)] * ncols for _ in range(nrows)], 0

    tgt_gens = phi.target.gens
    basis_k = monomial_basis(tgt_gens, k)
    index_k = {m: i for i, m in enumerate(basis_k)}
    n = len(basis_k)

    # columns: target representatives, then an echelon basis of the coboundaries
    boundary_rows = []
    if k > 0:
        space = RowSpace()
        for row in _d_rows(phi.target, monomial_basis(tgt_gens, k - 1), index_k):
            if space.add(row):
                pass
        boundary_rows = [dict(r) for r in space.pivots.values()]
    columns = [
        _element_vector(rep, index_k) for rep in tgt.representatives
    ] + boundary_rows

    mat = [[Fraction(0)] * len(columns) for _ in range(n)]
    for j, col in enumerate(columns):
        for i, c in col.items():
            mat[i][j] = Fraction(c)

    matrix = [[Fraction(0)] * ncols for _ in range(nrows)]
    for j, rep in enumerate(src.representatives):
        image = phi.apply(rep)
        rhs = [Fraction(0)] * n
        for m, c in image.terms.items():
            rhs[index_k[m]] = c
        coeffs = solve(mat, rhs)
        if coeffs is None:
            raise ValueError("image of a cocycle is not a cocycle; morphism is not a chain map")
        for i in range(nrows):
            matrix[i][j] = coeffs[i]
    rank = sparse_rank([{j: v for j, v in enumerate(row) if v} for row in matrix])
    return matrix, rank


def total_image_dimension(phi: Morphism, cutoff: int | None = None) -> int:
    """Sum over degrees 0..cutoff of rank H^k(phi)."""
    if cutoff is None:
        bounds = [formal_dimension_bound(phi.source), formal_dimension_bound(phi.target)]
        cutoff = max(bounds)
        if cutoff <= 0:
            raise ValueError("formal-dimension bounds are not positive; pass an explicit cutoff")
    total = 0
    for k in range(cutoff + 1):
        _, rank = induced_map(phi, k)
        total += rank
    return total
