"""Finite-dimensional L^alpha spaces over atomic measures.

A function in ``L^alpha(mu)`` is stored by its values on ``supp(mu)``; vectors
use the order of ``mu.support``. The L^2 inner product is

    <u, v> = sum_p u(p) conj(v(p)) mu({p}).

On a finite atom set every span is closed in every ``L^alpha``, so the closure
of a polynomial space is just its span.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .group_core import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    canonical_transversal,
    character_pair,
)
from .measure import (
    AtomicMeasure,
    DegenerateInputError,
    DerivedBundle,
    MeasureError,
    rho_bundle,
)

RANK_TOL = 1e-10
RANGE_TOL = 1e-10
COND_LIMIT = 1e12

__all__ = [
    "LpError",
    "WrongBaseError",
    "RangeViolationError",
    "InconsistentBasesError",
    "ConditioningWarning",
    "FunctionOnAtoms",
    "SubspaceBasis",
    "inner",
    "lp_integral",
    "lp_norm",
    "lp_distance",
    "quotient_representatives",
    "poly_space_basis",
    "polynomial",
    "intersection_dimension",
    "cross_gram",
    "v_apply",
    "v_inverse",
    "project_closed_form",
    "project_oracle",
    "random_function",
    "norm_bound_check",
]


class LpError(MeasureError):
    pass


class WrongBaseError(LpError):
    pass


class InconsistentBasesError(LpError):
    pass


class RangeViolationError(LpError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ConditioningWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class FunctionOnAtoms:
    base: AtomicMeasure
    values: Mapping[Element, complex]

    def __post_init__(self) -> None:
        if set(self.values) != set(self.base.support):
            raise WrongBaseError("function values must be given exactly on the support of its measure")
        object.__setattr__(
            self, "values", {p: complex(self.values[p]) for p in self.base.support}
        )

    def __call__(self, p: Element) -> complex:
        return self.values.get(p, 0j)

    @classmethod
    def from_vector(cls, base: AtomicMeasure, vec: Sequence[complex]) -> "FunctionOnAtoms":
        if len(vec) != len(base.support):
            raise WrongBaseError("vector length does not match the support size")
        return cls(base, dict(zip(base.support, (complex(v) for v in vec))))

    @classmethod
    def from_callable(cls, base: AtomicMeasure, fn: Callable[[Element], complex]) -> "FunctionOnAtoms":
        return cls(base, {p: fn(p) for p in base.support})

    def as_vector(self) -> np.ndarray:
        return np.array([self.values[p] for p in self.base.support], dtype=complex)

    def sup_distance(self, other: "FunctionOnAtoms") -> float:
        _same_base(self.base, other.base)
        if not self.values:
            return 0.0
        return float(np.max(np.abs(self.as_vector() - other.as_vector())))


def _same_base(a: AtomicMeasure, b: AtomicMeasure) -> None:
    if a != b:
        raise WrongBaseError("functions live over different measures")


def _weights(mu: AtomicMeasure) -> np.ndarray:
    return np.array([float(w) for w in mu.atoms.values()])


def inner(mu: AtomicMeasure, u: FunctionOnAtoms, v: FunctionOnAtoms) -> complex:
    _same_base(mu, u.base)
    _same_base(mu, v.base)
    return complex(np.sum(u.as_vector() * np.conj(v.as_vector()) * _weights(mu)))


def lp_integral(mu: AtomicMeasure, f: FunctionOnAtoms, alpha: float) -> float:
    """``sum_p |f(p)|^alpha mu({p})``."""
    _same_base(mu, f.base)
    return float(np.sum(np.abs(f.as_vector()) ** alpha * _weights(mu)))


def lp_norm(mu: AtomicMeasure, f: FunctionOnAtoms, alpha: float) -> float:
    if alpha <= 0:
        raise LpError(f"alpha must be positive, got {alpha}")
    s = lp_integral(mu, f, alpha)
    return s ** (1.0 / alpha) if alpha >= 1 else s


def lp_distance(mu: AtomicMeasure, f: FunctionOnAtoms, g: FunctionOnAtoms, alpha: float) -> float:
    """L^alpha metric; for ``alpha < 1`` the metric carries no root."""
    if alpha <= 0:
        raise LpError(f"alpha must be positive, got {alpha}")
    _same_base(f.base, g.base)
    diff = FunctionOnAtoms.from_vector(mu, f.as_vector() - g.as_vector())
    return lp_norm(mu, diff, alpha)


def quotient_representatives(group: FiniteAbelianGroup, H: Subgroup) -> tuple[Element, ...]:
    """One canonical representative per ``H``-coset of the dual group."""
    return canonical_transversal(group, H)


@dataclass(frozen=True)
class SubspaceBasis:
    """Independent characters ``p -> <p, x + y>`` restricted to ``supp(base)``.

    ``frequencies[i]`` is the dual element whose character gives ``vectors[i]``.
    """

    base: AtomicMeasure
    vectors: tuple[FunctionOnAtoms, ...]
    label: Element
    frequencies: tuple[Element, ...]

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """Columns are the basis vectors."""
        n = len(self.base.support)
        if not self.vectors:
            return np.zeros((n, 0), dtype=complex)
        return np.column_stack([v.as_vector() for v in self.vectors])

    def orthonormal(self) -> np.ndarray:
        """Orthonormal basis of the span, in sqrt-weighted Euclidean coordinates."""
        sw = np.sqrt(_weights(self.base))
        q, _ = np.linalg.qr(sw[:, None] * self.matrix())
        return q


def _mgs_select(columns: list[np.ndarray], weights: np.ndarray, tol: float) -> list[int]:
    """Indices of a maximal independent prefix-greedy subset of ``columns``.

    Modified Gram-Schmidt in the weighted inner product, with one
    re-orthogonalization pass per column.
    """
    kept: list[int] = []
    q: list[np.ndarray] = []
    for i, c in enumerate(columns):
        v = c.astype(complex)
        scale = np.sqrt(np.sum(np.abs(v) ** 2 * weights))
        if scale == 0:
            continue
        for _ in range(2):
            for e in q:
                v = v - np.sum(v * np.conj(e) * weights) * e
        nrm = np.sqrt(np.sum(np.abs(v) ** 2 * weights))
        if nrm > tol * scale:
            kept.append(i)
            q.append(v / nrm)
    return kept


def poly_space_basis(group: FiniteAbelianGroup, H: Subgroup, x: Element, mu: AtomicMeasure) -> SubspaceBasis:
    if mu.is_zero():
        raise DegenerateInputError("polynomial spaces over the zero measure are trivial")
    x = group.check(x)
    freqs = [group.add(x, y) for y in H]
    cols = [np.array([character_pair(group, p, s) for p in mu.support]) for s in freqs]
    kept = _mgs_select(cols, _weights(mu), RANK_TOL)
    vectors = tuple(FunctionOnAtoms.from_vector(mu, cols[i]) for i in kept)
    return SubspaceBasis(mu, vectors, x, tuple(freqs[i] for i in kept))


def polynomial(group: FiniteAbelianGroup, frequencies: Iterable[Element], coeffs: Iterable[complex]) -> Callable[[Element], complex]:
    """The trigonometric polynomial ``p -> sum_k a_k <p, s_k>`` on the whole group."""
    terms = list(zip(frequencies, coeffs))
    return lambda p: sum((a * character_pair(group, p, s) for s, a in terms), 0j)


def _intersect(a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of ``span(a) & span(b)`` for orthonormal column blocks."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return a[:, :0]
    m = np.hstack([a, b])
    _, s, vh = np.linalg.svd(m)
    k = m.shape[1]
    s_full = np.zeros(k)
    s_full[: len(s)] = s
    null = vh[s_full <= tol].conj().T
    if null.shape[1] == 0:
        return a[:, :0]
    q, r = np.linalg.qr(a @ null[: a.shape[1]])
    return q[:, np.abs(np.diag(r)) > tol]


def intersection_dimension(bases: Sequence[SubspaceBasis], mu: AtomicMeasure) -> int:
    if not bases:
        raise InconsistentBasesError("no bases given")
    for b in bases:
        if b.base != mu:
            raise InconsistentBasesError(f"basis labelled {b.label} is over a different measure")
    cur = bases[0].orthonormal()
    for b in bases[1:]:
        cur = _intersect(cur, b.orthonormal(), RANK_TOL)
        if cur.shape[1] == 0:
            break
    return int(cur.shape[1])


def cross_gram(mu: AtomicMeasure, b1: SubspaceBasis, b2: SubspaceBasis) -> np.ndarray:
    """Matrix of ``<u_i, v_j>`` between the vectors of two bases."""
    if b1.base != mu or b2.base != mu:
        raise InconsistentBasesError("bases are over a different measure")
    w = _weights(mu)
    return b1.matrix().T @ (w[:, None] * np.conj(b2.matrix()))


def v_apply(bundle: DerivedBundle, x: Element, phi: FunctionOnAtoms) -> FunctionOnAtoms:
    """Unfold ``phi`` on ``nu`` to ``mu``: value ``<l, x> phi(p - l)`` on ``l + T``."""
    if phi.base != bundle.nu:
        raise WrongBaseError("phi must be a function over the folded measure nu")
    g = bundle.group
    x = g.check(x)
    values = {}
    for p in bundle.mu.support:
        t, l = bundle.owner[p]
        values[p] = character_pair(g, l, x) * phi(t)
    return FunctionOnAtoms(bundle.mu, values)


def v_inverse(bundle: DerivedBundle, f: FunctionOnAtoms, x: Element) -> FunctionOnAtoms:
    """Fold ``f`` back onto ``nu``; raises if ``f`` is not in the range of :func:`v_apply`.

    At a representative ``t`` that is itself an atom of ``mu`` the value is
    ``f(t)``. A representative carrying ``nu``-mass but no ``mu``-mass takes
    ``<-l, x> f(t + l)`` from the first atom ``t + l`` of its coset.
    """
    if f.base != bundle.mu:
        raise WrongBaseError("f must be a function over mu")
    g = bundle.group
    x = g.check(x)
    values = {}
    for t in bundle.nu.support:
        if bundle.mu.weight(t):
            values[t] = f(t)
            continue
        for l in bundle.lam:
            p = g.add(t, l)
            if bundle.mu.weight(p):
                values[t] = character_pair(g, g.neg(l), x) * f(p)
                break
    phi = FunctionOnAtoms(bundle.nu, values)
    back = v_apply(bundle, x, phi)
    residual = back.sup_distance(f)
    if residual > RANGE_TOL * (1 + max((abs(v) for v in f.values.values()), default=0.0)):
        raise RangeViolationError(
            f"function is not in the range of the unfolding map (residual {residual:.3g})",
            residual,
        )
    return phi


def project_closed_form(mu: AtomicMeasure, lam: Subgroup, x: Element, f: FunctionOnAtoms) -> FunctionOnAtoms:
    """``(Pf)(p) = sum_l <-l, x> f(p + l) g(p + l)`` with ``g = d mu / d rho``."""
    if mu.is_zero():
        raise DegenerateInputError("projection onto a space over the zero measure")
    _same_base(mu, f.base)
    g = mu.group
    x = g.check(x)
    rb = rho_bundle(mu, lam)
    phase = {l: character_pair(g, g.neg(l), x) for l in lam}
    values = {}
    for p in mu.support:
        acc = 0j
        for l in lam:
            q = g.add(p, l)
            w = rb.g_value(q)
            if w:
                acc += phase[l] * f(q) * float(w)
        values[p] = acc
    return FunctionOnAtoms(mu, values)


def project_oracle(basis: SubspaceBasis, mu: AtomicMeasure, f: FunctionOnAtoms) -> FunctionOnAtoms:
    """Orthogonal projection onto ``span(basis)`` from the weighted normal equations."""
    if basis.base != mu:
        raise InconsistentBasesError("basis is over a different measure")
    _same_base(mu, f.base)
    w = _weights(mu)
    a = basis.matrix()
    fv = f.as_vector()
    if a.shape[1] == 0:
        return FunctionOnAtoms.from_vector(mu, np.zeros(len(fv)))
    gram = a.conj().T @ (w[:, None] * a)
    rhs = a.conj().T @ (w * fv)
    if np.linalg.cond(gram) > COND_LIMIT:
        warnings.warn("ill-conditioned Gram matrix; re-orthonormalizing", ConditioningWarning)
        sw = np.sqrt(w)
        q, _ = np.linalg.qr(sw[:, None] * a)
        proj = q @ (q.conj().T @ (sw * fv))
        return FunctionOnAtoms.from_vector(mu, proj / sw)
    coef = np.linalg.solve(gram, rhs)
    return FunctionOnAtoms.from_vector(mu, a @ coef)


def random_function(base: AtomicMeasure, rng: np.random.Generator) -> FunctionOnAtoms:
    """Real and imaginary parts uniform in [-1, 1]."""
    n = len(base.support)
    vec = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    return FunctionOnAtoms.from_vector(base, vec)


def norm_bound_check(
    mu: AtomicMeasure, lam: Subgroup, x: Element, alpha: float, trials: int, seed: int = 0
) -> float:
    """Largest ``||Pf||_alpha / ||f||_alpha`` over ``trials`` random ``f``."""
    if alpha not in (1, 2):
        raise LpError("norm bounds are checked at alpha = 1 and alpha = 2 only")
    if trials < 1:
        raise LpError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_function(mu, rng)
        nf = lp_norm(mu, f, alpha)
        if nf == 0:
            continue
        worst = max(worst, lp_norm(mu, project_closed_form(mu, lam, x, f), alpha) / nf)
    return worst
