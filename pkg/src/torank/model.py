"""Sullivan models: free graded-commutative algebras with a differential.

A model stores the differential on generators only; ``apply_d`` extends it to
arbitrary elements by the Leibniz rule d(xy) = d(x)y + (-1)^|x| x d(y).
Construction is deliberately permissive (any generator images over the same
generator set are accepted) so that ill-formed candidates can be represented
and then diagnosed by ``check_differential``, which enforces the two
wellformedness clauses: every image homogeneous of degree |v|+1, and
D(D(v)) = 0 for every generator.

Borel extensions Q[t_1..t_r] (x) Lambda(V) are modelled by ``BorelModel``:
the t_i are degree-2 generators declared before the base generators, with
D(t_i) = 0 and D(v) congruent to d(v) modulo the ideal (t_1,..,t_r).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .graded import (
    BOREL,
    Element,
    Generator,
    GeneratorSet,
    Monomial,
    NOT_HOMOGENEOUS,
    ANY_DEGREE,
    monomial_degree,
    monomial_key,
)


def _resolve_images(gens: GeneratorSet, images: Mapping) -> tuple[Element, ...]:
    out = [Element.zero(gens) for _ in range(len(gens))]
    for key, elem in images.items():
        i = key if isinstance(key, int) else gens.index(key)
        if not isinstance(elem, Element):
            raise TypeError(f"image of {gens[i].name!r} is not an Element")
        if elem.gens != gens:
            raise ValueError(f"image of {gens[i].name!r} lives over a foreign generator set")
        out[i] = elem
    return tuple(out)


class SullivanModel:
    """A generator set plus a differential given on generators."""

    __slots__ = ("gens", "images")

    def __init__(self, gens: GeneratorSet, images: Mapping | None = None):
        self.gens = gens
        self.images = _resolve_images(gens, images or {})

    def d_image(self, i: int) -> Element:
        return self.images[i]

    def d_image_of(self, name: str) -> Element:
        return self.images[self.gens.index(name)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SullivanModel)
            and self.gens == other.gens
            and self.images == other.images
        )

    def __hash__(self):
        return hash((self.gens, self.images))

    def __repr__(self):
        diffs = ", ".join(
            f"d{self.gens[i].name}={img}" for i, img in enumerate(self.images) if not img.is_zero()
        )
        return f"SullivanModel({self.gens!r}{'; ' + diffs if diffs else ''})"


def apply_d(model: SullivanModel, a: Element) -> Element:
    """Leibniz extension of the generator images to an arbitrary element."""
    if a.gens != model.gens:
        raise ValueError("element lives over a foreign generator set")
    gens = model.gens
    out = Element.zero(gens)
    for mono, coeff in a.terms.items():
        # factor list in canonical order; even powers handled via d(g^e) = e g^(e-1) dg
        factors: list[tuple[int, int]] = sorted([(i, 1) for i in mono.odd] + list(mono.even))
        sign_deg = 0
        for pos, (i, e) in enumerate(factors):
            dgi = model.images[i]
            if not dgi.is_zero():
                prefix = Monomial(
                    tuple(j for j, _ in factors[:pos] if gens.is_odd(j)),
                    tuple((j, ee) for j, ee in factors[:pos] if not gens.is_odd(j)),
                )
                if gens.is_odd(i):
                    suffix_factors = factors[pos + 1 :]
                    middle = dgi
                else:
                    suffix_factors = ([(i, e - 1)] if e > 1 else []) + factors[pos + 1 :]
                    middle = dgi.scale(e)
                suffix = Monomial(
                    tuple(j for j, _ in suffix_factors if gens.is_odd(j)),
                    tuple((j, ee) for j, ee in suffix_factors if not gens.is_odd(j)),
                )
                sign = -1 if sign_deg % 2 else 1
                term = Element.monomial(gens, prefix, coeff * sign) * middle * Element.monomial(gens, suffix)
                out = out + term
            sign_deg += e * gens.degree(i)
    return out


@dataclass
class Violation:
    """A wellformedness failure, reported as a value rather than an exception."""

    generator: str
    kind: str  # "degree" | "square" | "perturbation" | "purity" | "chain" | "lift" | ...
    message: str
    residue: Optional[Element] = None

    def __str__(self):
        return f"{self.kind} violation at {self.generator}: {self.message}"


def check_differential(model: SullivanModel) -> Optional[Violation]:
    """None when the model is wellformed, else the first Violation in declaration order."""
    gens = model.gens
    for i, g in enumerate(gens):
        img = model.images[i]
        if not img.is_zero():
            deg = img.degree()
            want = g.degree + 1
            if deg is NOT_HOMOGENEOUS or deg != want:
                bad = [
                    (img._render_monomial(m), monomial_degree(gens, m))
                    for m, _ in img.terms_sorted()
                    if monomial_degree(gens, m) != want
                ]
                detail = ", ".join(f"term {t} has degree {d}" for t, d in bad)
                return Violation(
                    g.name,
                    "degree",
                    f"image of {g.name} must be homogeneous of degree {want}: {detail}",
                    residue=img,
                )
    for i, g in enumerate(gens):
        residue = apply_d(model, model.images[i])
        if not residue.is_zero():
            return Violation(
                g.name,
                "square",
                f"D(D({g.name})) = {residue} is nonzero",
                residue=residue,
            )
    return None


def has_decomposable_differential(model: SullivanModel) -> bool:
    """Advisory minimality check: every image lands in products of positive-degree elements."""
    for img in model.images:
        for m in img.terms:
            if len(m.odd) + sum(e for _, e in m.even) < 2:
                return False
    return True


class Morphism:
    """A degree-0 algebra map between models, given on generators.

    Unspecified generators map to zero.  Every image must be homogeneous of
    the generator's degree (or zero), which makes the multiplicative
    extension well-defined.
    """

    __slots__ = ("source", "target", "images")

    def __init__(self, source: SullivanModel, target: SullivanModel, images: Mapping | None = None):
        self.source = source
        self.target = target
        resolved = [Element.zero(target.gens) for _ in range(len(source.gens))]
        for key, elem in (images or {}).items():
            i = key if isinstance(key, int) else source.gens.index(key)
            if not isinstance(elem, Element) or elem.gens != target.gens:
                raise ValueError(
                    f"image of {source.gens[i].name!r} must be an Element over the target generator set"
                )
            resolved[i] = elem
        self.images = tuple(resolved)
        for i, img in enumerate(self.images):
            deg = img.degree()
            if deg is ANY_DEGREE:
                continue
            if deg is NOT_HOMOGENEOUS or deg != source.gens.degree(i):
                raise ValueError(
                    f"image of {source.gens[i].name!r} must be homogeneous of degree "
                    f"{source.gens.degree(i)}, got {img}"
                )

    @classmethod
    def identity(cls, model: SullivanModel) -> "Morphism":
        return cls(
            model,
            model,
            {i: Element.generator(model.gens, i) for i in range(len(model.gens))},
        )

    def image(self, i: int) -> Element:
        return self.images[i]

    def image_of(self, name: str) -> Element:
        return self.images[self.source.gens.index(name)]

    def apply(self, elem: Element) -> Element:
        """Multiplicative extension; the factor order of canonical monomials incurs no extra signs."""
        if elem.gens != self.source.gens:
            raise ValueError("element lives over a foreign generator set")
        tgt = self.target.gens
        out = Element.zero(tgt)
        for mono, coeff in elem.terms.items():
            prod = Element.unit(tgt, coeff)
            for i in mono.odd:
                prod = prod * self.images[i]
                if prod.is_zero():
                    break
            if not prod.is_zero():
                for i, e in mono.even:
                    for _ in range(e):
                        prod = prod * self.images[i]
                        if prod.is_zero():
                            break
                    if prod.is_zero():
                        break
            out = out + prod
        return out

    def compose(self, inner: "Morphism") -> "Morphism":
        """self o inner, defined when inner.target == self.source."""
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("morphisms are not composable")
        return Morphism(
            inner.source,
            self.target,
            {i: self.apply(img) for i, img in enumerate(inner.images)},
        )

    def __repr__(self):
        parts = ", ".join(
            f"{self.source.gens[i].name}->{img}" for i, img in enumerate(self.images) if not img.is_zero()
        )
        return f"Morphism({parts})"


def check_chain_map(phi: Morphism) -> Optional[Violation]:
    """None when phi commutes with the differentials on every generator."""
    for i, g in enumerate(phi.source.gens):
        lhs = phi.apply(phi.source.images[i])
        rhs = apply_d(phi.target, phi.images[i])
        diff = lhs - rhs
        if not diff.is_zero():
            return Violation(
                g.name,
                "chain",
                f"phi(d({g.name})) - d(phi({g.name})) = {diff}",
                residue=diff,
            )
    return None


# ---------------------------------------------------------------------------
# Borel extensions
# ---------------------------------------------------------------------------


def borel_generator_names(r: int) -> tuple[str, ...]:
    return tuple(f"t{i + 1}" for i in range(r))


def borel_generator_set(base: GeneratorSet, r: int) -> GeneratorSet:
    """t_1..t_r of degree 2 declared before the base generators."""
    for g in base:
        if g.kind == BOREL:
            raise ValueError("base generator set already contains Borel generators")
    ts = [Generator(name, 2, BOREL) for name in borel_generator_names(r)]
    return GeneratorSet(ts + list(base))


def embed_in_borel(elem: Element, borel_gens: GeneratorSet, r: int) -> Element:
    """Reindex a base element into the Borel generator set (base offset r)."""
    index_map = {i: i + r for i in range(len(elem.gens))}
    return elem.map_indices(borel_gens, index_map)


@dataclass
class BorelModel:
    """A rank-r Borel extension of a base model."""

    base: SullivanModel
    r: int
    total: SullivanModel

    @property
    def gens(self) -> GeneratorSet:
        return self.total.gens

    @property
    def borel_indices(self) -> tuple[int, ...]:
        return tuple(range(self.r))

    def t_element(self, i: int) -> Element:
        return Element.generator(self.total.gens, i)

    def perturbation(self, base_index: int) -> Element:
        """D(v) minus the embedded base differential, a class in the ideal (t)."""
        embedded = embed_in_borel(self.base.images[base_index], self.total.gens, self.r)
        return self.total.images[base_index + self.r] - embedded


def make_borel_total(base: SullivanModel, r: int, perturbations: Mapping) -> SullivanModel:
    """Assemble the (unvalidated) total differential D(t_i)=0, D(v)=d(v)+pert(v)."""
    bgens = borel_generator_set(base.gens, r)
    pert = _resolve_images(bgens, {
        (k if isinstance(k, int) else base.gens.index(k)) + r: v for k, v in perturbations.items()
    })
    images = {}
    for i in range(len(base.gens)):
        img = embed_in_borel(base.images[i], bgens, r) + pert[i + r]
        images[i + r] = img
    return SullivanModel(bgens, images)


def build_borel(base: SullivanModel, r: int, perturbations: Mapping) -> Union[BorelModel, Violation]:
    """Construct and validate a Borel extension.

    Perturbations not lying in the ideal (t_1,..,t_r) are rejected before any
    differential validation; degree and D*D failures come back as the first
    Violation in declaration order.
    """
    if r < 0:
        raise ValueError("rank must be nonnegative")
    total = make_borel_total(base, r, perturbations)
    t_idx = range(r)
    for i in range(len(base.gens)):
        pert = total.images[i + r] - embed_in_borel(base.images[i], total.gens, r)
        if not pert.is_zero() and not pert.monomials_in_ideal(t_idx):
            return Violation(
                base.gens[i].name,
                "perturbation",
                f"perturbation {pert} of {base.gens[i].name} does not lie in the ideal (t_1..t_{r})",
                residue=pert,
            )
    bad = check_differential(total)
    if bad is not None:
        return bad
    return BorelModel(base, r, total)


def restrict_fiber(b: BorelModel) -> SullivanModel:
    """Set every t_i to zero; for a valid Borel extension this recovers the base."""
    r = b.r
    total_gens = b.total.gens
    base_gens = b.base.gens
    index_map = {i + r: i for i in range(len(base_gens))}
    images = {}
    for i in range(len(base_gens)):
        killed = b.total.images[i + r].kill_generators(range(r))
        images[i] = killed.map_indices(base_gens, index_map)
    return SullivanModel(base_gens, images)


def pure_part(m: SullivanModel) -> SullivanModel:
    """Associated pure model: even generators become cocycles, odd images are
    projected onto the subalgebra generated by the even generators.

    The input must be wellformed; the output is re-validated (its square must
    vanish, which the degree filtration guarantees).
    """
    images = {}
    for i, g in enumerate(m.gens):
        if g.is_odd:
            images[i] = m.images[i].even_subalgebra_part()
    sigma = SullivanModel(m.gens, images)
    bad = check_differential(sigma)
    if bad is not None:
        raise ValueError(f"pure part of an ill-formed model: {bad}")
    return sigma


def check_lift(phi_t: Morphism, phi_0: Morphism) -> Optional[Violation]:
    """Does the Borel-level map phi_t restrict to phi_0 when every t_i is set to zero?

    phi_t maps Borel totals (same rank on both sides, t_i -> t_i); phi_0 maps
    the corresponding bases.
    """
    src_gens = phi_t.source.gens
    tgt_gens = phi_t.target.gens
    r = len(src_gens.borel_indices)
    if len(tgt_gens.borel_indices) != r:
        return Violation("t1", "lift", "Borel ranks of source and target differ")
    for i in range(r):
        want = Element.generator(tgt_gens, i)
        if phi_t.images[i] != want:
            return Violation(
                src_gens[i].name,
                "lift",
                f"F({src_gens[i].name}) = {phi_t.images[i]} but Borel maps must fix the t_i",
            )
    base_src = phi_0.source.gens
    base_tgt = phi_0.target.gens
    embed = {j: j + r for j in range(len(base_tgt))}
    for j in range(len(base_src)):
        restricted = phi_t.images[j + r].kill_generators(range(r))
        expected = phi_0.images[j].map_indices(tgt_gens, embed)
        diff = restricted - expected
        if not diff.is_zero():
            return Violation(
                base_src[j].name,
                "lift",
                f"setting t=0 in F({base_src[j].name}) gives {restricted}, not {expected}",
                residue=diff,
            )
    return None
