"""Free graded-commutative algebras over Q.

An algebra is Lambda(odd generators) tensor Q[even generators], presented by
a fixed ordered generator set.  Elements are finite Q-linear combinations of
canonical monomials; all arithmetic is exact (``fractions.Fraction``, no
floats anywhere).  Monomials are kept in a unique normal form: the odd part
is a strictly increasing tuple of generator indices (a repeated odd generator
squares to zero and is never stored), the even part a sorted tuple of
(generator index, exponent) pairs.  The Koszul sign of a product is computed
by counting transpositions needed to merge the odd parts.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

Scalar = Union[int, Fraction]

BASE = "base"
BOREL = "borel"


class _DegreeMarker:
    """Singleton results of homogeneous_degree for degenerate inputs."""

    __slots__ = ("label",)

    def __init__(self, label: str):
        self.label = label

    def __repr__(self):
        return self.label


NOT_HOMOGENEOUS = _DegreeMarker("NotHomogeneous")
ANY_DEGREE = _DegreeMarker("AnyDegree")


class Generator(NamedTuple):
    name: str
    degree: int
    kind: str = BASE

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


class GeneratorSet:
    """An immutable, ordered list of generators with unique names.

    Declaration order fixes the canonical monomial order and every
    deterministic enumeration downstream.
    """

    __slots__ = ("gens", "_index")

    def __init__(self, gens: Iterable[Generator]):
        gens = tuple(gens)
        index: dict[str, int] = {}
        for i, g in enumerate(gens):
            if not isinstance(g.degree, int) or g.degree < 2:
                raise ValueError(f"generator {g.name!r} has degree {g.degree}; degrees must be integers >= 2")
            if g.kind == BOREL and g.degree != 2:
                raise ValueError(f"Borel generator {g.name!r} must have degree 2")
            if g.name in index:
                raise ValueError(f"duplicate generator name {g.name!r}")
            index[g.name] = i
        self.gens = gens
        self._index = index

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.gens)

    def __getitem__(self, i: int) -> Generator:
        return self.gens[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneratorSet) and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(self.gens)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.gens)
        return f"GeneratorSet({inner})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree(self, i: int) -> int:
        return self.gens[i].degree

    def is_odd(self, i: int) -> bool:
        return self.gens[i].degree % 2 == 1

    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.gens)

    @property
    def odd_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if g.is_odd)

    @property
    def even_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if not g.is_odd)

    @property
    def borel_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if g.kind == BOREL)


def free_generators(spec: Iterable[tuple[str, int]], kind: str = BASE) -> GeneratorSet:
    """Build a GeneratorSet from (name, degree) pairs."""
    return GeneratorSet(Generator(name, degree, kind) for name, degree in spec)


class Monomial(NamedTuple):
    """Canonical monomial: sorted odd index tuple, sorted (index, exp) even part."""

    odd: tuple[int, ...]
    even: tuple[tuple[int, int], ...]


UNIT_MONOMIAL = Monomial((), ())


def monomial_degree(gens: GeneratorSet, m: Monomial) -> int:
    d = sum(gens.degree(i) for i in m.odd)
    d += sum(e * gens.degree(i) for i, e in m.even)
    return d


def monomial_key(m: Monomial) -> tuple:
    """Canonical order: odd part by declaration index, then even part."""
    return (m.odd, m.even)


def _merge_odd(a: tuple[int, ...], b: tuple[int, ...]):
    """Merge two sorted odd index tuples, counting inversions.

    Returns (sign, merged) or None when a generator repeats.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    merged = []
    inversions = 0
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            merged.append(b[j])
            inversions += len(a) - i
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return (-1 if inversions % 2 else 1), tuple(merged)


def monomial_mul(m1: Monomial, m2: Monomial):
    """Product of canonical monomials: (sign, monomial), or None if it vanishes."""
    res = _merge_odd(m1.odd, m2.odd)
    if res is None:
        return None
    sign, odd = res
    if not m2.even:
        even = m1.even
    elif not m1.even:
        even = m2.even
    else:
        exps = dict(m1.even)
        for i, e in m2.even:
            exps[i] = exps.get(i, 0) + e
        even = tuple(sorted(exps.items()))
    return sign, Monomial(odd, even)


class Element:
    """A finite rational linear combination of canonical monomials.

    Immutable by convention; all operations return fresh Elements with zero
    coefficients dropped.  Two Elements are equal iff they share a generator
    set and have identical term maps.
    """

    __slots__ = ("gens", "terms")

    def __init__(self, gens: GeneratorSet, terms: Mapping[Monomial, Fraction]):
        self.gens = gens
        self.terms = dict(terms)

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, gens: GeneratorSet) -> "Element":
        return cls(gens, {})

    @classmethod
    def unit(cls, gens: GeneratorSet, coeff: Scalar = 1) -> "Element":
        c = Fraction(coeff)
        return cls(gens, {UNIT_MONOMIAL: c} if c else {})

    @classmethod
    def generator(cls, gens: GeneratorSet, name_or_index) -> "Element":
        i = name_or_index if isinstance(name_or_index, int) else gens.index(name_or_index)
        if gens.is_odd(i):
            m = Monomial((i,), ())
        else:
            m = Monomial((), ((i, 1),))
        return cls(gens, {m: Fraction(1)})

    @classmethod
    def monomial(cls, gens: GeneratorSet, m: Monomial, coeff: Scalar = 1) -> "Element":
        c = Fraction(coeff)
        return cls(gens, {m: c} if c else {})

    @classmethod
    def from_terms(cls, gens: GeneratorSet, pairs: Iterable[tuple[Monomial, Scalar]]) -> "Element":
        acc: dict[Monomial, Fraction] = {}
        for m, c in pairs:
            c = Fraction(c)
            if not c:
                continue
            c0 = acc.get(m)
            c = c if c0 is None else c0 + c
            if c:
                acc[m] = c
            elif c0 is not None:
                del acc[m]
        return cls(gens, acc)

    # ---- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def terms_sorted(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(
            self.terms.items(),
            key=lambda t: (monomial_degree(self.gens, t[0]), monomial_key(t[0])),
        )

    def degree(self):
        """Common degree of all terms, ANY_DEGREE for zero, NOT_HOMOGENEOUS if mixed."""
        if not self.terms:
            return ANY_DEGREE
        degs = {monomial_degree(self.gens, m) for m in self.terms}
        if len(degs) > 1:
            return NOT_HOMOGENEOUS
        return degs.pop()

    def monomials_in_ideal(self, idxs: Sequence[int]) -> bool:
        """True when every term is divisible by one of the given generators."""
        wanted = set(idxs)
        for m in self.terms:
            if wanted.intersection(m.odd):
                continue
            if any(i in wanted for i, _ in m.even):
                continue
            return False
        return True

    def even_subalgebra_part(self) -> "Element":
        """The terms whose monomials contain no odd generators."""
        return Element(self.gens, {m: c for m, c in self.terms.items() if not m.odd})

    def kill_generators(self, idxs: Sequence[int]) -> "Element":
        """Substitute 0 for the given generators."""
        dead = set(idxs)
        kept = {}
        for m, c in self.terms.items():
            if dead.intersection(m.odd) or any(i in dead for i, _ in m.even):
                continue
            kept[m] = c
        return Element(self.gens, kept)

    def map_indices(self, new_gens: GeneratorSet, index_map: Mapping[int, int]) -> "Element":
        """Re-house the element on another generator set via an index map.

        Every generator occurring in a term must be in the map; degrees and
        parities must agree (the caller guarantees this for embeddings and
        restrictions between a base and its Borel extension).
        """
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            odd = tuple(sorted(index_map[i] for i in m.odd))
            even = tuple(sorted((index_map[i], e) for i, e in m.even))
            out[Monomial(odd, even)] = c
        return Element(new_gens, out)

    # ---- arithmetic ----------------------------------------------------

    def _require_same_gens(self, other: "Element"):
        if self.gens != other.gens:
            raise ValueError("elements live over different generator sets")

    def __add__(self, other: "Element") -> "Element":
        self._require_same_gens(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return Element(self.gens, acc)

    def __neg__(self) -> "Element":
        return Element(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, coeff: Scalar) -> "Element":
        c = Fraction(coeff)
        if not c:
            return Element.zero(self.gens)
        return Element(self.gens, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._require_same_gens(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                res = monomial_mul(m1, m2)
                if res is None:
                    continue
                sign, m = res
                s = acc.get(m, Fraction(0)) + sign * c1 * c2
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return Element(self.gens, acc)

    def __rmul__(self, coeff: Scalar) -> "Element":
        return self.scale(coeff)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.gens == other.gens
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.gens, tuple(sorted(self.terms.items(), key=lambda t: monomial_key(t[0])))))

    # ---- rendering ------------------------------------------------------

    def _render_monomial(self, m: Monomial) -> str:
        factors = []
        merged: list[tuple[int, int]] = sorted(
            [(i, 1) for i in m.odd] + list(m.even)
        )
        for i, e in merged:
            name = self.gens[i].name
            factors.append(name if e == 1 else f"{name}^{e}")
        return "*".join(factors) if factors else "1"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms_sorted():
            body = self._render_monomial(m)
            if body == "1":
                text = str(c)
            elif c == 1:
                text = body
            elif c == -1:
                text = f"-{body}"
            else:
                text = f"{c}*{body}"
            parts.append(text)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"Element({self})"


def multiply(a: Element, b: Element) -> Element:
    """Normalized product of two elements over the same generator set."""
    return a * b


def homogeneous_degree(a: Element):
    return a.degree()


def monomial_basis(gens: GeneratorSet, k: int) -> list[Monomial]:
    """All canonical monomials of total degree exactly k, in canonical order.

    Finite because every generator degree is >= 2.
    """
    if k < 0:
        raise ValueError("degree must be nonnegative")
    out: list[Monomial] = []
    n = len(gens)

    def walk(i: int, remaining: int, odd: list[int], even: list[tuple[int, int]]):
        if remaining == 0:
            out.append(Monomial(tuple(odd), tuple(even)))
            return
        if i >= n:
            return
        g = gens[i]
        walk(i + 1, remaining, odd, even)
        if g.is_odd:
            if g.degree <= remaining:
                odd.append(i)
                walk(i + 1, remaining - g.degree, odd, even)
                odd.pop()
        else:
            e = 1
            while e * g.degree <= remaining:
                even.append((i, e))
                walk(i + 1, remaining - e * g.degree, odd, even)
                even.pop()
                e += 1

    walk(0, k, [], [])
    out.sort(key=monomial_key)
    return out
