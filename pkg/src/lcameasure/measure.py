"""Atomic measures with exact rational weights and the measures derived from them.

Translation follows the convention ``(translate(mu, s))(B) = mu(s + B)``, so an
atom of ``mu`` at ``p`` lands at ``p - s``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Callable, Iterable, Union

from .group_core import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    Transversal,
    is_transversal,
)

Rational = Fraction
RationalLike = Union[Fraction, int, str]
PointFunction = Union[Callable[[Element], complex], Mapping]

__all__ = [
    "Rational",
    "MeasureError",
    "InvalidTransversalError",
    "DegenerateInputError",
    "to_rational",
    "AtomicMeasure",
    "measure_algebra",
    "DerivedBundle",
    "RhoBundle",
    "derive_bundle",
    "rho_bundle",
    "lemma2_evaluate",
    "lemma2_holds",
]


class MeasureError(ValueError):
    pass


class InvalidTransversalError(MeasureError):
    pass


class DegenerateInputError(MeasureError):
    pass


def to_rational(value: RationalLike) -> Fraction:
    """Exact conversion; decimal strings keep their base-10 denominator."""
    if isinstance(value, bool):
        raise MeasureError(f"not a rational weight: {value!r}")
    if isinstance(value, (Fraction, int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MeasureError(f"not a rational weight: {value!r}") from exc
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise MeasureError(f"not a rational weight: {value!r}")
        return Fraction(value)
    if isinstance(value, float):
        # floats are taken through their shortest decimal repr, not their binary value
        return Fraction(repr(value))
    raise MeasureError(f"not a rational weight: {value!r}")


@dataclass(frozen=True)
class AtomicMeasure:
    group: FiniteAbelianGroup
    atoms: Mapping[Element, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for p, w in self.atoms.items():
            p = self.group.check(p)
            w = to_rational(w)
            if w < 0:
                raise MeasureError(f"negative weight {w} at {p}")
            if w:
                clean[p] = w
        object.__setattr__(self, "atoms", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, group: FiniteAbelianGroup) -> "AtomicMeasure":
        return cls(group, {})

    @classmethod
    def uniform(cls, group: FiniteAbelianGroup, weight: RationalLike = 1) -> "AtomicMeasure":
        return cls(group, {p: to_rational(weight) for p in group.elements()})

    @classmethod
    def dirac(cls, group: FiniteAbelianGroup, *points: Element) -> "AtomicMeasure":
        atoms: dict[Element, Fraction] = {}
        for p in points:
            atoms[p] = atoms.get(p, Fraction(0)) + 1
        return cls(group, atoms)

    def __call__(self, points: Iterable[Element]) -> Fraction:
        """Mass of a set of points."""
        return sum((self.atoms.get(p, Fraction(0)) for p in set(points)), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return self.group == other.group and dict(self.atoms) == dict(other.atoms)

    def __hash__(self) -> int:
        return hash((self.group, tuple(self.atoms.items())))

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        return self.add(other)

    def __bool__(self) -> bool:
        return bool(self.atoms)

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {w}" for p, w in self.atoms.items())
        return f"AtomicMeasure({self.group.moduli}, {{{body}}})"

    def weight(self, p: Element) -> Fraction:
        return self.atoms.get(p, Fraction(0))

    @property
    def support(self) -> tuple[Element, ...]:
        return tuple(self.atoms)

    @property
    def total_mass(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def is_zero(self) -> bool:
        return not self.atoms

    def translate(self, shift: Element) -> "AtomicMeasure":
        shift = self.group.check(shift)
        return AtomicMeasure(self.group, {self.group.sub(p, shift): w for p, w in self.atoms.items()})

    def restrict(self, points: Iterable[Element]) -> "AtomicMeasure":
        keep = {self.group.check(p) for p in points}
        return AtomicMeasure(self.group, {p: w for p, w in self.atoms.items() if p in keep})

    def add(self, other: "AtomicMeasure") -> "AtomicMeasure":
        if other.group != self.group:
            raise MeasureError("measures live on different groups")
        atoms = dict(self.atoms)
        for p, w in other.atoms.items():
            atoms[p] = atoms.get(p, Fraction(0)) + w
        return AtomicMeasure(self.group, atoms)

    def scale(self, c: RationalLike) -> "AtomicMeasure":
        c = to_rational(c)
        if c < 0:
            raise MeasureError(f"negative scale factor {c}")
        return AtomicMeasure(self.group, {p: c * w for p, w in self.atoms.items()})


def measure_algebra(op: str, mu: AtomicMeasure, arg) -> AtomicMeasure:
    if op == "translate":
        return mu.translate(arg)
    if op == "restrict":
        return mu.restrict(arg)
    if op == "add":
        return mu.add(arg)
    if op == "scale":
        return mu.scale(arg)
    raise MeasureError(f"unknown measure operation {op!r}")


def _sum_measures(group: FiniteAbelianGroup, parts: Iterable[AtomicMeasure]) -> AtomicMeasure:
    total: dict[Element, Fraction] = {}
    for m in parts:
        for p, w in m.atoms.items():
            total[p] = total.get(p, Fraction(0)) + w
    return AtomicMeasure(group, total)


def _coset_owner(group: FiniteAbelianGroup, lam: Subgroup, T: Transversal) -> dict[Element, tuple[Element, Element]]:
    """Map each element to ``(t, l)`` with ``element = t + l``, ``t`` in ``T``."""
    return {group.add(t, l): (t, l) for t in T for l in lam}


@dataclass(frozen=True)
class DerivedBundle:
    """Translate-and-fold data of ``mu`` along a transversal ``T`` of ``lam``.

    ``h`` holds the nonzero values of ``h[(l, t)] = nu_l({t}) / nu({t})``;
    :meth:`h_value` returns 0 for any other pair.
    """

    mu: AtomicMeasure
    lam: Subgroup
    transversal: Transversal
    mu_lambda: dict[Element, AtomicMeasure]
    nu_lambda: dict[Element, AtomicMeasure]
    nu: AtomicMeasure
    h: dict[tuple[Element, Element], Fraction]
    owner: dict[Element, tuple[Element, Element]] = field(repr=False)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.mu.group

    def h_value(self, l: Element, t: Element) -> Fraction:
        return self.h.get((l, t), Fraction(0))

    def h_table(self) -> list[tuple[Element, Element, Fraction]]:
        """Full ``(l, t, h)`` table over ``lam x supp(nu)``, zeros included."""
        return [(l, t, self.h_value(l, t)) for l in self.lam for t in self.nu.support]


def derive_bundle(mu: AtomicMeasure, lam: Subgroup, T: Iterable[Element]) -> DerivedBundle:
    group = mu.group
    T = tuple(sorted(group.check(t) for t in T))
    if not is_transversal(group, lam, T):
        raise InvalidTransversalError(f"{T} is not a transversal of the subgroup")
    owner = _coset_owner(group, lam, T)

    mu_atoms: dict[Element, dict[Element, Fraction]] = {l: {} for l in lam}
    nu_atoms: dict[Element, dict[Element, Fraction]] = {l: {} for l in lam}
    for p, w in mu.atoms.items():
        t, l = owner[p]
        mu_atoms[l][p] = w
        nu_atoms[l][t] = w
    mu_lambda = {l: AtomicMeasure(group, a) for l, a in mu_atoms.items()}
    nu_lambda = {l: AtomicMeasure(group, a) for l, a in nu_atoms.items()}
    nu = _sum_measures(group, nu_lambda.values())

    h = {}
    for l, part in nu_lambda.items():
        for t, w in part.atoms.items():
            h[(l, t)] = w / nu.weight(t)
    return DerivedBundle(mu, lam, T, mu_lambda, nu_lambda, nu, h, owner)


@dataclass(frozen=True)
class RhoBundle:
    """Periodization ``rho = sum_l rho_l`` with ``rho_l(B) = mu(l + B)``.

    ``g`` holds the nonzero values of ``mu({p}) / rho({p})`` on ``supp(rho)``.
    """

    mu: AtomicMeasure
    lam: Subgroup
    rho_lambda: dict[Element, AtomicMeasure]
    rho: AtomicMeasure
    g: dict[Element, Fraction]

    def g_value(self, p: Element) -> Fraction:
        return self.g.get(p, Fraction(0))


def rho_bundle(mu: AtomicMeasure, lam: Subgroup) -> RhoBundle:
    group = mu.group
    rho_lambda = {l: mu.translate(l) for l in lam}
    rho = _sum_measures(group, rho_lambda.values())
    g = {p: w / rho.weight(p) for p, w in mu.atoms.items()}
    return RhoBundle(mu, lam, rho_lambda, rho, g)


def _as_function(f: PointFunction) -> Callable[[Element], complex]:
    if isinstance(f, Mapping):
        return lambda p: f.get(p, 0)
    return f


def lemma2_evaluate(
    mu: AtomicMeasure, lam: Subgroup, T: Iterable[Element], f: PointFunction, kappa: Element
) -> tuple[complex, complex]:
    """Both sides of the fold identity

        sum_p f(p) mu({p}) = sum_{q in T + kappa} sum_l f(q + l) g(q + l) rho({q}).
    """
    group = mu.group
    T = tuple(group.check(t) for t in T)
    if not is_transversal(group, lam, T):
        raise InvalidTransversalError(f"{T} is not a transversal of the subgroup")
    if kappa not in lam:
        raise MeasureError(f"{kappa} is not in the subgroup")
    fn = _as_function(f)
    rb = rho_bundle(mu, lam)

    lhs = sum((complex(fn(p)) * float(w) for p, w in mu.atoms.items()), 0j)
    rhs = 0j
    for t in T:
        q = group.add(t, kappa)
        rq = rb.rho.weight(q)
        if not rq:
            continue
        inner = 0j
        for l in lam:
            ql = group.add(q, l)
            gq = rb.g_value(ql)
            if gq:
                inner += complex(fn(ql)) * float(gq)
        rhs += inner * float(rq)
    return lhs, rhs


def lemma2_holds(lhs: complex, rhs: complex, rtol: float = 1e-10) -> bool:
    return abs(lhs - rhs) <= rtol * (1 + abs(lhs))

