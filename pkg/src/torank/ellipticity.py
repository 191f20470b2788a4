"""Finiteness certification for the cohomology of a Sullivan model.

The decision runs through the associated pure model: dim H*(model) is finite
exactly when the graded quotient of the even polynomial subalgebra by the
ideal of pure odd images is finite-dimensional.  That quotient is a cyclic
graded algebra generated in the even generator degrees, so once a window of
consecutive even degrees of width max(even degree) vanishes, everything above
it vanishes too; the certificate records that window.  Infinite verdicts are
issued only on proof (an even generator untouched by the ideal survives in
every power), everything else below the scan cutoff is reported as unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .graded import Element, GeneratorSet, Monomial, monomial_key
from .linalg import sparse_rank
from .model import SullivanModel, pure_part

FINITE = "finite"
INFINITE = "infinite"
UNKNOWN = "unknown"


@dataclass
class FinitenessCertificate:
    verdict: str
    formal_dimension: int
    ideal: tuple[Element, ...] = ()
    window: Optional[tuple[int, ...]] = None  # even degrees with vanishing quotient
    untouched: Optional[str] = None  # even generator the ideal never touches
    cutoff: Optional[int] = None  # scan bound that left the question open

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE


def formal_dimension_bound(model_or_gens) -> int:
    """Sum of odd generator degrees minus sum of (even degree - 1).

    The standard elliptic upper bound for nonvanishing cohomology; used as
    the default cutoff of total computations when positive.
    """
    gens = model_or_gens.gens if isinstance(model_or_gens, SullivanModel) else model_or_gens
    bound = 0
    for g in gens:
        if g.is_odd:
            bound += g.degree
        else:
            bound -= g.degree - 1
    return bound


def even_monomials(gens: GeneratorSet, k: int) -> list[Monomial]:
    """Canonical monomials of degree k in the even generators only."""
    evens = gens.even_indices
    out: list[Monomial] = []

    def walk(pos: int, remaining: int, acc: list[tuple[int, int]]):
        if remaining == 0:
            out.append(Monomial((), tuple(acc)))
            return
        if pos >= len(evens):
            return
        i = evens[pos]
        deg = gens.degree(i)
        walk(pos + 1, remaining, acc)
        e = 1
        while e * deg <= remaining:
            acc.append((i, e))
            walk(pos + 1, remaining - e * deg, acc)
            acc.pop()
            e += 1

    if k >= 0:
        walk(0, k, [])
    out.sort(key=monomial_key)
    return out


def _check_even_ideal(ideal_gens: Sequence[Element]):
    for g in ideal_gens:
        deg = g.degree()
        if isinstance(deg, int):
            if deg % 2 == 1:
                raise ValueError(f"ideal generator {g} has odd degree {deg}")
        elif not g.is_zero():
            raise ValueError(f"ideal generator {g} is not homogeneous")
        for m in g.terms:
            if m.odd:
                raise ValueError(f"ideal generator {g} does not lie in the even subalgebra")


def quotient_dim(gens: GeneratorSet, ideal_gens: Sequence[Element], k: int) -> int:
    """dim of the degree-k piece of (even polynomial subalgebra)/(ideal)."""
    _check_even_ideal(ideal_gens)
    basis = even_monomials(gens, k)
    if not basis:
        return 0
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for g in ideal_gens:
        deg = g.degree()
        if not isinstance(deg, int) or deg > k:
            continue
        for m in even_monomials(gens, k - deg):
            prod = Element.monomial(gens, m) * g
            rows.append({index[mm]: c for mm, c in prod.terms.items()})
    return len(basis) - sparse_rank(rows)


def decide_finite(model: SullivanModel, max_degree: int | None = None) -> FinitenessCertificate:
    """Certify dim H*(model) < infinity, via the associated pure quotient."""
    sigma = pure_part(model)
    gens = model.gens
    fd = formal_dimension_bound(model)
    ideal = tuple(
        sigma.images[i]
        for i in gens.odd_indices
        if not sigma.images[i].is_zero()
    )
    evens = gens.even_indices
    if not evens:
        return FinitenessCertificate(FINITE, fd, ideal, window=())

    touched: set[int] = set()
    for g in ideal:
        for m in g.terms:
            touched.update(i for i, _ in m.even)
    for i in evens:
        if i not in touched:
            return FinitenessCertificate(INFINITE, fd, ideal, untouched=gens[i].name)

    g_max = max(gens.degree(i) for i in evens)
    needed = g_max // 2
    if max_degree is None:
        max_degree = (
            sum(g.degree() for g in ideal)
            + sum(gens.degree(i) for i in evens)
            + g_max
        )
    run: list[int] = []
    k = 2
    while k <= max_degree:
        if quotient_dim(gens, ideal, k) == 0:
            run.append(k)
            if len(run) >= needed:
                return FinitenessCertificate(FINITE, fd, ideal, window=tuple(run))
        else:
            run = []
        k += 2
    return FinitenessCertificate(UNKNOWN, fd, ideal, cutoff=max_degree)
