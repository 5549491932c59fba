"""Regular / singular classification, Wold-type splitting and orthogonality tests.

Everything here is decided by exact rational comparisons on the tables built
in :mod:`lcameasure.measure`; no floating point enters a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .group_core import Element, Subgroup, is_transversal
from .measure import (
    AtomicMeasure,
    DegenerateInputError,
    DerivedBundle,
    InvalidTransversalError,
    derive_bundle,
)

__all__ = [
    "DegenerateInputError",
    "SingularVerdict",
    "RegularVerdict",
    "WoldResult",
    "OrthogonalityVerdict",
    "is_h_singular",
    "is_h_regular",
    "wold_decompose",
    "orthogonality_test",
    "is_periodic",
    "saturate",
]


@dataclass(frozen=True)
class SingularVerdict:
    singular: bool
    witness: Optional[frozenset[Element]] = None
    # lexicographically first (p, l) with p and p + l both atoms
    violation: Optional[tuple[Element, Element]] = None

    def __bool__(self) -> bool:
        return self.singular


@dataclass(frozen=True)
class RegularVerdict:
    regular: bool
    violations: tuple[tuple[Element, Element], ...] = ()

    def __bool__(self) -> bool:
        return self.regular


@dataclass(frozen=True)
class WoldResult:
    mu_rho: AtomicMeasure
    mu_sigma: AtomicMeasure
    B_rho: frozenset[Element]
    B_sigma: frozenset[Element]


@dataclass(frozen=True)
class OrthogonalityVerdict:
    orthogonal: bool
    n: int
    deviations: tuple[tuple[Element, Element, Fraction], ...] = ()

    def __bool__(self) -> bool:
        return self.orthogonal


def saturate(mu: AtomicMeasure, lam: Subgroup, points: Iterable[Element]) -> frozenset[Element]:
    """Union of the ``lam``-cosets meeting ``points``."""
    g = mu.group
    return frozenset(g.add(p, l) for p in points for l in lam)


def is_h_singular(mu: AtomicMeasure, lam: Subgroup) -> SingularVerdict:
    support = frozenset(mu.support)
    g = mu.group
    for p in mu.support:
        for l in lam.nonzero:
            if g.add(p, l) in support:
                return SingularVerdict(False, violation=(p, l))
    return SingularVerdict(True, witness=support)


def is_h_regular(mu: AtomicMeasure, lam: Subgroup, T: Iterable[Element]) -> RegularVerdict:
    bundle = derive_bundle(mu, lam, T)
    return _regular_from_bundle(bundle)


def _regular_from_bundle(bundle: DerivedBundle) -> RegularVerdict:
    violations = tuple(sorted(key for key, h in bundle.h.items() if h == 1))
    return RegularVerdict(not violations, violations)


def wold_decompose(mu: AtomicMeasure, lam: Subgroup, T: Iterable[Element]) -> WoldResult:
    bundle = derive_bundle(mu, lam, T)
    sigma_reps = {t for (_, t), h in bundle.h.items() if h == 1}
    rho_reps = [t for t in bundle.transversal if t not in sigma_reps]
    B_sigma = saturate(mu, lam, sigma_reps)
    B_rho = saturate(mu, lam, rho_reps)
    return WoldResult(mu.restrict(B_rho), mu.restrict(B_sigma), B_rho, B_sigma)


def orthogonality_test(mu: AtomicMeasure, lam: Subgroup, T: Iterable[Element]) -> OrthogonalityVerdict:
    if mu.is_zero():
        raise DegenerateInputError("orthogonality is vacuous for the zero measure")
    bundle = derive_bundle(mu, lam, T)
    n = len(lam)
    target = Fraction(1, n)
    deviations = tuple(
        (l, t, h) for l, t, h in bundle.h_table() if h != target
    )
    return OrthogonalityVerdict(not deviations, n, deviations)


def is_periodic(mu: AtomicMeasure, lam: Subgroup, T: Iterable[Element]) -> bool:
    """``mu(l + B) == mu(B)`` for all ``B`` inside ``T``, checked one atom at a time."""
    g = mu.group
    T = tuple(g.check(t) for t in T)
    if not is_transversal(g, lam, T):
        raise InvalidTransversalError(f"{T} is not a transversal of the subgroup")
    return all(mu.weight(g.add(t, l)) == mu.weight(t) for t in T for l in lam.nonzero)
