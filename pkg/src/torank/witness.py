"""Toral-rank witnesses and their verification.

A rank witness packages a base model with rank-r Borel perturbation data; it
certifies r0(X) >= r when the perturbed extension is a valid differential
with finite-dimensional cohomology.  A map rank witness adds a strict chain
map F between the two Borel extensions, fixing every t_i and lifting the
model morphism of the map; it certifies r0(f) >= r.

Searches enumerate perturbation candidates deterministically: canonical
monomial order with pure t-powers first, the coefficient list in order, and
increasing term count; the first certified witness wins.  A NotFound result
reports the exhausted space and is never a nonexistence proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .cohomology import total_cohomology, total_image_dimension
from .ellipticity import FinitenessCertificate, decide_finite, formal_dimension_bound
from .graded import BOREL, Element, GeneratorSet, Monomial, monomial_basis, monomial_key
from .model import (
    BorelModel,
    Morphism,
    SullivanModel,
    Violation,
    borel_generator_set,
    build_borel,
    check_chain_map,
    check_differential,
    check_lift,
    embed_in_borel,
    restrict_fiber,
)


@dataclass
class RankWitness:
    """Borel extension data certifying a lower bound for the toral rank of a space."""

    base: SullivanModel
    r: int
    perturbations: dict[int, Element]  # base generator index -> Element over the Borel generators

    @classmethod
    def from_named(cls, base: SullivanModel, r: int, named: Mapping[str, Element]) -> "RankWitness":
        return cls(base, r, {base.gens.index(k): v for k, v in named.items()})

    def borel_gens(self) -> GeneratorSet:
        return borel_generator_set(self.base.gens, self.r)

    def build(self) -> Union[BorelModel, Violation]:
        return build_borel(self.base, self.r, self.perturbations)


@dataclass
class MapRankWitness:
    """Compatible Borel extensions of both ends of a map, joined by a strict chain map.

    ``f_model`` is the model morphism of the underlying map (contravariant:
    for a map of spaces X -> Y it goes from the model of Y to the model of X).
    ``F`` maps the Borel extension of the source model to that of the target
    model and must fix every t_i.
    """

    f_model: Morphism
    witness_source: RankWitness
    witness_target: RankWitness
    F: Morphism


@dataclass
class CertifiedRank:
    witness: RankWitness
    borel: BorelModel
    finiteness: FinitenessCertificate


@dataclass
class CertifiedMap:
    witness: MapRankWitness
    source: CertifiedRank
    target: CertifiedRank


@dataclass
class Rejected:
    reason: str
    violation: Optional[Violation] = None
    finiteness: Optional[FinitenessCertificate] = None

    def __str__(self):
        return self.reason


@dataclass
class NotFound:
    rank: int
    examined: int
    space: "SearchSpace"

    def __str__(self):
        return f"no rank-{self.rank} witness among {self.examined} candidate assignments"


@dataclass(frozen=True)
class SearchSpace:
    """Bounds for the deterministic witness search."""

    coefficients: tuple[Fraction, ...] = (Fraction(1), Fraction(-1))
    max_terms: int = 2


DEFAULT_SPACE = SearchSpace()


def verify_rank_witness(w: RankWitness, max_degree: int | None = None) -> Union[CertifiedRank, Rejected]:
    built = w.build()
    if isinstance(built, Violation):
        return Rejected(str(built), violation=built)
    if restrict_fiber(built) != w.base:
        return Rejected("restriction of the Borel extension does not recover the base model")
    cert = decide_finite(built.total, max_degree)
    if not cert.finite:
        return Rejected(
            f"cohomology of the Borel extension is not certified finite ({cert.verdict})",
            finiteness=cert,
        )
    return CertifiedRank(w, built, cert)


def verify_map_rank_witness(w: MapRankWitness, max_degree: int | None = None) -> Union[CertifiedMap, Rejected]:
    if w.witness_source.r != w.witness_target.r:
        return Rejected(
            f"rank mismatch: source witness has rank {w.witness_source.r}, "
            f"target witness has rank {w.witness_target.r}"
        )
    if w.witness_source.base != w.f_model.source:
        return Rejected("source witness is not a witness on the morphism's source model")
    if w.witness_target.base != w.f_model.target:
        return Rejected("target witness is not a witness on the morphism's target model")
    src = verify_rank_witness(w.witness_source, max_degree)
    if isinstance(src, Rejected):
        return Rejected(f"source witness rejected: {src.reason}", src.violation, src.finiteness)
    tgt = verify_rank_witness(w.witness_target, max_degree)
    if isinstance(tgt, Rejected):
        return Rejected(f"target witness rejected: {tgt.reason}", tgt.violation, tgt.finiteness)
    F = w.F
    if F.source.gens != src.borel.total.gens or F.target.gens != tgt.borel.total.gens:
        return Rejected("F does not map between the witnesses' Borel extensions")
    F = Morphism(src.borel.total, tgt.borel.total, dict(enumerate(F.images)))
    r = w.witness_source.r
    for i in range(r):
        if F.images[i] != Element.generator(tgt.borel.total.gens, i):
            return Rejected(
                f"F({src.borel.total.gens[i].name}) = {F.images[i]}; Borel maps must fix every t_i"
            )
    bad = check_chain_map(F)
    if bad is not None:
        return Rejected(f"F is not a chain map: {bad}", violation=bad)
    bad = check_lift(F, w.f_model)
    if bad is not None:
        return Rejected(f"F does not lift the model morphism: {bad}", violation=bad)
    return CertifiedMap(w, src, tgt)


# ---------------------------------------------------------------------------
# Witness transport: fiber transplant and sphere adjunction
# ---------------------------------------------------------------------------


def _fiber_split(relative: SullivanModel, fiber: SullivanModel):
    """Indices of fiber generators inside the relative model, matched by name and degree."""
    fiber_idx = []
    for g in fiber.gens:
        try:
            i = relative.gens.index(g.name)
        except KeyError:
            raise ValueError(f"fiber generator {g.name!r} does not occur in the relative model")
        if relative.gens.degree(i) != g.degree:
            raise ValueError(f"fiber generator {g.name!r} has mismatched degrees")
        fiber_idx.append(i)
    base_idx = [i for i in range(len(relative.gens)) if i not in set(fiber_idx)]
    return fiber_idx, base_idx


def transplant_fiber_witness(
    relative: SullivanModel, fiber_witness: RankWitness
) -> Union[RankWitness, Violation]:
    """Push a witness on the fiber of a pure-over-the-base relative model up to the total model.

    The total differential becomes D_t(v) = D(v) + (d_t - d)(v) on fiber
    generators and is unchanged on base generators; validity and finiteness
    are re-checked on the result.
    """
    fiber = fiber_witness.base
    fiber_idx, base_idx = _fiber_split(relative, fiber)
    fiber_pos = {i: p for p, i in enumerate(fiber_idx)}

    # the relative model must restrict to the fiber model (base generators to zero)
    to_fiber = {i: fiber_pos[i] for i in fiber_idx}
    for i in fiber_idx:
        killed = relative.images[i].kill_generators(base_idx)
        if killed.map_indices(fiber.gens, to_fiber) != fiber.images[fiber_pos[i]]:
            return Violation(
                relative.gens[i].name,
                "fiber",
                "relative model does not restrict to the fiber witness's base model",
            )

    # purity over the base: odd fiber images avoid odd fiber generators, even fiber images vanish
    odd_fiber = {i for i in fiber_idx if relative.gens.is_odd(i)}
    for i in fiber_idx:
        img = relative.images[i]
        if relative.gens.is_odd(i):
            for m in img.terms:
                if odd_fiber.intersection(m.odd):
                    return Violation(
                        relative.gens[i].name,
                        "purity",
                        f"image {img} of {relative.gens[i].name} involves an odd fiber generator",
                    )
        elif not img.is_zero():
            return Violation(
                relative.gens[i].name,
                "purity",
                f"even fiber generator {relative.gens[i].name} has nonzero image {img}",
            )

    r = fiber_witness.r
    total_bgens = borel_generator_set(relative.gens, r)
    fiber_bgens = fiber_witness.borel_gens()
    index_map = {j: j for j in range(r)}
    for i in fiber_idx:
        index_map[fiber_pos[i] + r] = i + r
    perts = {
        i: fiber_witness.perturbations[fiber_pos[i]].map_indices(total_bgens, index_map)
        for i in fiber_idx
        if fiber_pos[i] in fiber_witness.perturbations
        and not fiber_witness.perturbations[fiber_pos[i]].is_zero()
    }
    witness = RankWitness(relative, r, perts)
    result = verify_rank_witness(witness)
    if isinstance(result, Rejected):
        if result.violation is not None:
            return result.violation
        return Violation("-", "transplant", result.reason)
    return witness


def adjoin_sphere_variable(b: BorelModel, y: str, n: int) -> Union[BorelModel, Violation]:
    """Extend a Borel model by one torus generator, perturbing the odd sphere class y.

    y must be a base generator of degree 2n-1 and every other base generator
    must have degree at most 2n; the new differential maps y to its old image
    plus t_{r+1}^n.
    """
    base = b.base
    try:
        yi = base.gens.index(y)
    except KeyError:
        raise ValueError(f"{y!r} is not a generator of the base model") from None
    if base.gens.degree(yi) != 2 * n - 1:
        raise ValueError(f"generator {y!r} has degree {base.gens.degree(yi)}, expected {2 * n - 1}")
    for i, g in enumerate(base.gens):
        if i != yi and g.degree > 2 * n:
            return Violation(
                g.name,
                "degree-bound",
                f"generator {g.name} has degree {g.degree} > {2 * n}; the sphere adjunction "
                f"hypothesis requires every other generator in degrees <= {2 * n}",
            )
    r = b.r
    new_bgens = borel_generator_set(base.gens, r + 1)
    index_map = {j: j for j in range(r)}
    index_map.update({j + r: j + r + 1 for j in range(len(base.gens))})
    perts: dict[int, Element] = {}
    for i in range(len(base.gens)):
        p = b.perturbation(i)
        if not p.is_zero():
            perts[i] = p.map_indices(new_bgens, index_map)
    t_new = Element.generator(new_bgens, r)
    t_pow = Element.unit(new_bgens)
    for _ in range(n):
        t_pow = t_pow * t_new
    perts[yi] = perts.get(yi, Element.zero(new_bgens)) + t_pow
    return build_borel(base, r + 1, perts)


# ---------------------------------------------------------------------------
# Deterministic bounded search
# ---------------------------------------------------------------------------


def _candidate_group(m: Monomial, r: int) -> int:
    if m.odd or any(i >= r for i, _ in m.even):
        return 2  # involves base generators
    if len(m.even) == 1:
        return 0  # a pure power of a single t_i
    return 1  # mixed monomial in the t_i only


def candidate_monomials(bgens: GeneratorSet, degree: int, r: int) -> list[Monomial]:
    """Degree-correct monomials in the ideal (t_1..t_r), pure t-powers first."""
    out = [
        m
        for m in monomial_basis(bgens, degree)
        if any(i < r for i, _ in m.even)
    ]
    out.sort(key=lambda m: (_candidate_group(m, r), monomial_key(m)))
    return out


def candidate_elements(
    bgens: GeneratorSet, degree: int, r: int, space: SearchSpace
) -> list[Element]:
    """Zero, then single terms, then multi-term combinations, in search order."""
    monos = candidate_monomials(bgens, degree, r)
    out = [Element.zero(bgens)]
    for count in range(1, space.max_terms + 1):
        for combo in itertools.combinations(monos, count):
            for coeffs in itertools.product(space.coefficients, repeat=count):
                out.append(Element.from_terms(bgens, zip(combo, coeffs)))
    return out


def _perturbation_slots(base: SullivanModel, r: int, space: SearchSpace):
    bgens = borel_generator_set(base.gens, r)
    slots = []
    for i, g in enumerate(base.gens):
        slots.append(candidate_elements(bgens, g.degree + 1, r, space))
    return bgens, slots


def _iter_rank_witnesses(base: SullivanModel, r: int, space: SearchSpace):
    """Yield (examined_count, witness, certified) over the assignment space."""
    _, slots = _perturbation_slots(base, r, space)
    examined = 0
    for assignment in itertools.product(*slots):
        examined += 1
        perts = {i: e for i, e in enumerate(assignment) if not e.is_zero()}
        w = RankWitness(base, r, perts)
        result = verify_rank_witness(w)
        if isinstance(result, CertifiedRank):
            yield examined, w, result
    yield examined, None, None


def search_rank_witness(
    base: SullivanModel, r: int, space: SearchSpace = DEFAULT_SPACE
) -> Union[RankWitness, NotFound]:
    """First certified witness in the deterministic enumeration, else NotFound."""
    examined = 0
    for examined, w, _ in _iter_rank_witnesses(base, r, space):
        if w is not None:
            return w
    return NotFound(r, examined, space)


def _certified_witnesses(base: SullivanModel, r: int, space: SearchSpace):
    found = []
    for _, w, cert in _iter_rank_witnesses(base, r, space):
        if w is not None:
            found.append((w, cert))
    return found


def search_map_witness(
    f_model: Morphism, r: int, space: SearchSpace = DEFAULT_SPACE
) -> Union[MapRankWitness, NotFound]:
    """Search pairs of certified witnesses plus F-images lifting the model morphism.

    F is constrained to the model-morphism image plus a correction in the
    ideal (t); the first assignment passing the chain-map and lift checks
    wins.
    """
    sources = _certified_witnesses(f_model.source, r, space)
    targets = _certified_witnesses(f_model.target, r, space)
    examined = 0
    for (ws, src_cert), (wt, tgt_cert) in itertools.product(sources, targets):
        src_total = src_cert.borel.total
        tgt_total = tgt_cert.borel.total
        tgt_bgens = tgt_total.gens

        f_slots = []
        for j, g in enumerate(f_model.source.gens):
            baseline = embed_in_borel(f_model.images[j], tgt_bgens, r)
            options = [
                baseline + corr
                for corr in candidate_elements(tgt_bgens, g.degree, r, space)
            ]
            f_slots.append(options)

        t_images = {i: Element.generator(tgt_bgens, i) for i in range(r)}
        for combo in itertools.product(*f_slots):
            examined += 1
            images = dict(t_images)
            images.update({j + r: img for j, img in enumerate(combo)})
            F = Morphism(src_total, tgt_total, images)
            if check_chain_map(F) is not None:
                continue
            if check_lift(F, f_model) is not None:
                continue
            return MapRankWitness(f_model, ws, wt, F)
    return NotFound(r, examined, space)


# ---------------------------------------------------------------------------
# Toral-rank-conjecture style reports
# ---------------------------------------------------------------------------


@dataclass
class TrcReport:
    subject: str  # "space" | "map"
    rank: int
    lower_bound: int  # 2**rank
    measured: int
    satisfied: bool
    description: str

    def __str__(self):
        rel = ">=" if self.satisfied else "<"
        return f"{self.description}: {self.measured} {rel} {self.lower_bound} (2^{self.rank})"


def trc_report(cert: Union[CertifiedRank, CertifiedMap], cutoff: int | None = None) -> TrcReport:
    """Compare dim H*(base) (spaces) or dim Im H*(f) (maps) against 2^rank."""
    if isinstance(cert, CertifiedRank):
        base = cert.witness.base
        if cutoff is None:
            cutoff = formal_dimension_bound(base)
            if cutoff <= 0:
                raise ValueError("formal-dimension bound is not positive; pass an explicit cutoff")
        measured = total_cohomology(base, cutoff).total()
        r = cert.witness.r
        return TrcReport(
            "space",
            r,
            2**r,
            measured,
            measured >= 2**r,
            "dim H*(base) against 2^rank",
        )
    if isinstance(cert, CertifiedMap):
        measured = total_image_dimension(cert.witness.f_model, cutoff)
        r = cert.witness.witness_source.r
        return TrcReport(
            "map",
            r,
            2**r,
            measured,
            measured >= 2**r,
            "dim Im H*(f) against 2^rank",
        )
    raise TypeError("trc_report expects a certified witness")
