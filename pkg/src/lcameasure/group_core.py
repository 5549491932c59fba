"""Finite abelian groups in product-of-cyclic normal form.

Both the group ``Gamma`` carrying the measures and its dual ``G`` are modelled
as ``Z(m_1) x ... x Z(m_s)``; elements are plain integer tuples. The pairing

    <gamma, x> = exp(2 pi i sum_j gamma_j x_j / m_j)

identifies one with the dual of the other.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Element = tuple[int, ...]
GroupElement = Element
DualElement = Element
Transversal = tuple[Element, ...]

__all__ = [
    "Element",
    "GroupElement",
    "DualElement",
    "Transversal",
    "GroupError",
    "InvalidGroupError",
    "InvalidElementError",
    "InvalidSubgroupError",
    "FiniteAbelianGroup",
    "Subgroup",
    "make_group",
    "elem_op",
    "pairing_exponent",
    "character_pair",
    "subgroup_generate",
    "annihilator",
    "coset_partition",
    "canonical_transversal",
    "is_transversal",
    "all_subgroups",
    "all_transversals",
]


class GroupError(ValueError):
    pass


class InvalidGroupError(GroupError):
    pass


class InvalidElementError(GroupError):
    pass


class InvalidSubgroupError(GroupError):
    pass


@dataclass(frozen=True)
class FiniteAbelianGroup:
    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.moduli:
            raise InvalidGroupError("moduli list is empty")
        for m in self.moduli:
            if isinstance(m, bool) or not isinstance(m, int) or m < 1:
                raise InvalidGroupError(f"modulus {m!r} is not a positive integer")

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def exponent_lcm(self) -> int:
        return math.lcm(*self.moduli)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order."""
        return itertools.product(*(range(m) for m in self.moduli))

    def check(self, a: Sequence[int]) -> Element:
        """Validate that ``a`` is a reduced element of this group."""
        a = tuple(a)
        if len(a) != self.rank:
            raise InvalidElementError(
                f"element {a} has {len(a)} components, group has {self.rank}"
            )
        for r, m in zip(a, self.moduli):
            if isinstance(r, bool) or not isinstance(r, int) or not 0 <= r < m:
                raise InvalidElementError(f"element {a} is not reduced modulo {self.moduli}")
        return a

    def reduce(self, a: Sequence[int]) -> Element:
        if len(a) != self.rank:
            raise InvalidElementError(
                f"element {tuple(a)} has {len(a)} components, group has {self.rank}"
            )
        return tuple(int(r) % m for r, m in zip(a, self.moduli))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a: Element) -> Element:
        return tuple(-x % m for x, m in zip(a, self.moduli))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % m for x, y, m in zip(a, b, self.moduli))

    def translate(self, elems: Iterable[Element], shift: Element) -> frozenset[Element]:
        return frozenset(self.add(e, shift) for e in elems)


def make_group(moduli: Iterable[int]) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(moduli))


def elem_op(
    group: FiniteAbelianGroup, op: str, a: Sequence[int], b: Sequence[int] | None = None
) -> Element:
    a = group.check(a)
    if op == "add":
        if b is None:
            raise InvalidElementError("add needs two operands")
        return group.add(a, group.check(b))
    if op == "neg":
        return group.neg(a)
    raise ValueError(f"unknown group operation {op!r}")


def pairing_exponent(group: FiniteAbelianGroup, gamma: Element, x: Element) -> int:
    """Exact phase of ``<gamma, x>`` as ``k`` with value ``exp(2 pi i k / L)``.

    ``L`` is ``group.exponent_lcm`` and ``k`` lies in ``[0, L)``.
    """
    if len(gamma) != group.rank or len(x) != group.rank:
        raise InvalidElementError("pairing arguments do not match the group shape")
    L = group.exponent_lcm
    return sum(g * y * (L // m) for g, y, m in zip(gamma, x, group.moduli)) % L


def character_pair(group: FiniteAbelianGroup, gamma: Element, x: Element) -> complex:
    k = pairing_exponent(group, gamma, x)
    L = group.exponent_lcm
    # quarter turns are returned exactly
    if (4 * k) % L == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[4 * k // L]
    return cmath.exp(2j * math.pi * k / L)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored as its lexicographically sorted element list."""

    group: FiniteAbelianGroup
    elements: tuple[Element, ...]

    @cached_property
    def _members(self) -> frozenset[Element]:
        return frozenset(self.elements)

    def __contains__(self, a: object) -> bool:
        return a in self._members

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def nonzero(self) -> tuple[Element, ...]:
        z = self.group.zero
        return tuple(e for e in self.elements if e != z)

    def is_closed(self) -> bool:
        g = self.group
        m = self._members
        if g.zero not in m:
            return False
        return all(g.add(a, b) in m for a in m for b in m)


def _closure(group: FiniteAbelianGroup, seed: Iterable[Element]) -> frozenset[Element]:
    gens = [e for e in set(seed) if e != group.zero]
    members = {group.zero}
    frontier = [group.zero]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = group.add(a, s)
                if b not in members:
                    members.add(b)
                    nxt.append(b)
        frontier = nxt
    # in a finite group the additive closure is already closed under negation
    return frozenset(members)


def subgroup_generate(group: FiniteAbelianGroup, generators: Iterable[Sequence[int]]) -> Subgroup:
    gens = [group.check(g) for g in generators]
    return Subgroup(group, tuple(sorted(_closure(group, gens))))


def annihilator(group: FiniteAbelianGroup, H: Subgroup) -> Subgroup:
    """Characters of ``group`` trivial on every element of ``H``.

    Membership is the integer congruence ``sum_j gamma_j y_j (L / m_j) = 0 mod L``.
    """
    if H.group != group:
        raise InvalidSubgroupError("subgroup belongs to a different group")
    for y in H.elements:
        group.check(y)
    if not H.is_closed():
        raise InvalidSubgroupError("H is not closed under addition")
    # a generating set suffices for the congruence test
    gens = _small_generating_set(group, H)
    lam = tuple(
        gamma for gamma in group.elements()
        if all(pairing_exponent(group, gamma, y) == 0 for y in gens)
    )
    return Subgroup(group, lam)


def _small_generating_set(group: FiniteAbelianGroup, H: Subgroup) -> list[Element]:
    gens: list[Element] = []
    span = frozenset([group.zero])
    for y in H.elements:
        if y not in span:
            gens.append(y)
            span = _closure(group, gens)
            if len(span) == len(H):
                break
    return gens


def coset_partition(group: FiniteAbelianGroup, lam: Subgroup) -> list[list[Element]]:
    """Cosets of ``lam``, each sorted, listed by their smallest element."""
    seen: set[Element] = set()
    cosets = []
    for a in group.elements():
        if a in seen:
            continue
        coset = sorted(group.add(a, l) for l in lam)
        seen.update(coset)
        cosets.append(coset)
    return cosets


def canonical_transversal(group: FiniteAbelianGroup, lam: Subgroup) -> Transversal:
    return tuple(c[0] for c in coset_partition(group, lam))


def is_transversal(group: FiniteAbelianGroup, lam: Subgroup, candidate: Iterable[Sequence[int]]) -> bool:
    try:
        reps = [group.check(c) for c in candidate]
    except InvalidElementError:
        return False
    covered: set[Element] = set()
    for t in reps:
        for l in lam:
            b = group.add(t, l)
            if b in covered:
                return False
            covered.add(b)
    return len(covered) == group.order


def all_subgroups(group: FiniteAbelianGroup) -> list[Subgroup]:
    """Every subgroup, found by joining cyclic subgroups until nothing new appears."""
    cyclic = {_closure(group, [a]) for a in group.elements()}
    found = set(cyclic) | {frozenset([group.zero])}
    frontier = set(found)
    while frontier:
        new = set()
        for s in frontier:
            for c in cyclic:
                if c <= s:
                    continue
                j = _closure(group, s | c)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    subs = [Subgroup(group, tuple(sorted(s))) for s in found]
    subs.sort(key=lambda s: (len(s), s.elements))
    return subs


def all_transversals(group: FiniteAbelianGroup, lam: Subgroup) -> Iterator[Transversal]:
    for choice in itertools.product(*coset_partition(group, lam)):
        yield tuple(sorted(choice))
