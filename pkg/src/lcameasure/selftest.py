"""Built-in invariant suite behind ``lcameasure selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .classify import (
    is_h_regular,
    is_h_singular,
    is_periodic,
    orthogonality_test,
    wold_decompose,
)
from .group_core import (
    FiniteAbelianGroup,
    Subgroup,
    all_transversals,
    annihilator,
    canonical_transversal,
    is_transversal,
    make_group,
    subgroup_generate,
)
from .lp_spaces import (
    intersection_dimension,
    lp_integral,
    norm_bound_check,
    poly_space_basis,
    project_closed_form,
    project_oracle,
    quotient_representatives,
    random_function,
    v_apply,
    v_inverse,
)
from .measure import AtomicMeasure, derive_bundle, lemma2_evaluate, lemma2_holds, rho_bundle


@dataclass(frozen=True)
class Case:
    name: str
    group: FiniteAbelianGroup
    H: Subgroup
    mu: AtomicMeasure

    @property
    def lam(self) -> Subgroup:
        return annihilator(self.group, self.H)


def builtin_cases() -> list[Case]:
    z4 = make_group([4])
    h4 = subgroup_generate(z4, [(2,)])
    z24 = make_group([2, 4])
    z6 = make_group([6])
    F = Fraction
    return [
        Case("z4-dirac", z4, h4, AtomicMeasure.dirac(z4, (0,))),
        Case("z4-uniform", z4, h4, AtomicMeasure.uniform(z4)),
        Case("z4-mixed", z4, h4, AtomicMeasure.dirac(z4, (0,), (1,), (3,))),
        Case("z4-periodic", z4, h4, AtomicMeasure(z4, {(0,): 2, (1,): 3, (2,): 2, (3,): 3})),
        Case("z2xz4-weighted", z24, subgroup_generate(z24, [(1, 0)]),
             AtomicMeasure(z24, {(0, 0): F(1, 3), (0, 1): F(5, 2), (1, 1): 1, (0, 3): F(7, 4), (1, 2): 2})),
        Case("z6-order3", z6, subgroup_generate(z6, [(2,)]),
             AtomicMeasure(z6, {(0,): 1, (2,): 4, (3,): F(1, 2)})),
        Case("trivial", make_group([1]), subgroup_generate(make_group([1]), []),
             AtomicMeasure(make_group([1]), {(0,): 3})),
    ]


def _wold(case: Case) -> bool:
    lam = case.lam
    results = []
    for T in list(all_transversals(case.group, lam))[:4]:
        w = wold_decompose(case.mu, lam, T)
        if w.mu_rho + w.mu_sigma != case.mu or w.B_rho & w.B_sigma:
            return False
        if not is_h_regular(w.mu_rho, lam, T) or not is_h_singular(w.mu_sigma, lam):
            return False
        results.append(w)
    return all(r == results[0] for r in results)


def _normalizations(case: Case) -> bool:
    lam = case.lam
    T = canonical_transversal(case.group, lam)
    b = derive_bundle(case.mu, lam, T)
    ok = all(sum((b.h_value(l, t) for l in lam), Fraction(0)) == 1 for t in b.nu.support)
    ok &= b.nu.total_mass == case.mu.total_mass
    rb = rho_bundle(case.mu, lam)
    g = case.group
    ok &= all(
        sum((rb.g_value(g.add(p, l)) for l in lam), Fraction(0)) == 1 for p in rb.rho.support
    )
    ok &= rb.rho.total_mass == len(lam) * case.mu.total_mass
    return ok


def _definition_agreement(case: Case) -> bool:
    if case.mu.is_zero():
        return True
    lam = case.lam
    T = canonical_transversal(case.group, lam)
    bases = [poly_space_basis(case.group, case.H, x, case.mu) for x in quotient_representatives(case.group, case.H)]
    full = all(b.rank == len(case.mu.support) for b in bases)
    singular = is_h_singular(case.mu, lam).singular
    regular = is_h_regular(case.mu, lam, T).regular
    return full == singular and (intersection_dimension(bases, case.mu) == 0) == regular


def _periodicity(case: Case) -> bool:
    lam = case.lam
    verdicts = {is_periodic(case.mu, lam, T) for T in all_transversals(case.group, lam)}
    T = canonical_transversal(case.group, lam)
    return len(verdicts) == 1 and verdicts.pop() == orthogonality_test(case.mu, lam, T).orthogonal


def _projection(case: Case, rng: np.random.Generator, trials: int) -> bool:
    lam = case.lam
    for x in quotient_representatives(case.group, case.H):
        basis = poly_space_basis(case.group, case.H, x, case.mu)
        for _ in range(trials):
            f = random_function(case.mu, rng)
            if project_closed_form(case.mu, lam, x, f).sup_distance(project_oracle(basis, case.mu, f)) > 1e-9:
                return False
    return True


def _isometry(case: Case, rng: np.random.Generator, trials: int) -> bool:
    lam = case.lam
    T = canonical_transversal(case.group, lam)
    b = derive_bundle(case.mu, lam, T)
    for x in quotient_representatives(case.group, case.H):
        for _ in range(trials):
            phi = random_function(b.nu, rng)
            f = v_apply(b, x, phi)
            for alpha in (0.5, 1.0, 2.0, 3.0):
                lhs, rhs = lp_integral(case.mu, f, alpha), lp_integral(b.nu, phi, alpha)
                if abs(lhs - rhs) > 1e-9 * max(abs(rhs), 1e-300):
                    return False
            if v_inverse(b, f, x).sup_distance(phi) > 1e-12:
                return False
    return True


def _fold_identity(case: Case, rng: np.random.Generator, trials: int) -> bool:
    lam = case.lam
    T = canonical_transversal(case.group, lam)
    for _ in range(trials):
        f = random_function(case.mu, rng)
        for kappa in lam:
            if not lemma2_holds(*lemma2_evaluate(case.mu, lam, T, f, kappa)):
                return False
    return True


def _contraction(case: Case, seed: int, trials: int) -> bool:
    lam = case.lam
    return all(
        norm_bound_check(case.mu, lam, x, alpha, trials, seed) <= 1 + 1e-9
        for x in quotient_representatives(case.group, case.H)
        for alpha in (1, 2)
    )


def run_selftest(seed: int = 0, trials: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    checks: list[tuple[str, Callable[[Case], bool]]] = [
        ("transversal", lambda c: is_transversal(c.group, c.lam, canonical_transversal(c.group, c.lam))),
        ("wold", _wold),
        ("normalizations", _normalizations),
        ("definition-agreement", _definition_agreement),
        ("periodicity", _periodicity),
        ("projection", lambda c: _projection(c, rng, trials)),
        ("isometry", lambda c: _isometry(c, rng, trials)),
        ("fold-identity", lambda c: _fold_identity(c, rng, trials)),
        ("contraction", lambda c: _contraction(c, seed, trials)),
    ]
    rows = []
    for case in builtin_cases():
        for name, check in checks:
            try:
                ok = bool(check(case))
                error = None
            except Exception as exc:  # a crash counts as a failed check
                ok, error = False, f"{type(exc).__name__}: {exc}"
            row = {"case": case.name, "check": name, "ok": ok}
            if error:
                row["error"] = error
            rows.append(row)
    passed = sum(r["ok"] for r in rows)
    return {"passed": passed, "failed": len(rows) - passed, "checks": rows}
