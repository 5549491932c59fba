"""Assemble the JSON result documents emitted by the command line.

Every builder re-checks the invariants its document asserts and raises
:class:`CrossCheckError` instead of returning an inconsistent result.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .classify import (
    is_h_regular,
    is_h_singular,
    is_periodic,
    orthogonality_test,
    wold_decompose,
)
from .group_core import Element
from .lp_spaces import (
    FunctionOnAtoms,
    cross_gram,
    lp_norm,
    poly_space_basis,
    project_closed_form,
    project_oracle,
    quotient_representatives,
)
from .measure import derive_bundle
from .problem import ProblemSpec, elements_json, function_json, measure_json

PROJECTION_TOL = 1e-9
GRAM_TOL = 1e-10


class CrossCheckError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def _context(spec: ProblemSpec) -> dict[str, Any]:
    return {
        "group": list(spec.moduli),
        "H": elements_json(spec.H),
        "lambda": elements_json(spec.lam),
        "transversal": elements_json(spec.T),
    }


def h_table_document(spec: ProblemSpec) -> dict[str, Any]:
    bundle = derive_bundle(spec.mu, spec.lam, spec.T)
    return {
        **_context(spec),
        "nu": measure_json(bundle.nu),
        "h_table": [
            {"lambda": list(l), "point": list(t), "h": str(h)} for l, t, h in bundle.h_table()
        ],
    }


def decompose_document(spec: ProblemSpec) -> dict[str, Any]:
    mu, lam, T = spec.mu, spec.lam, spec.T
    w = wold_decompose(mu, lam, T)
    if w.mu_rho + w.mu_sigma != mu:
        raise CrossCheckError("regular and singular parts do not add up to the measure")
    if not is_h_regular(w.mu_rho, lam, T) or not is_h_singular(w.mu_sigma, lam):
        raise CrossCheckError("a part of the decomposition fails its own classifier")
    if w.B_rho & w.B_sigma:
        raise CrossCheckError("decomposition sets overlap")
    return {
        **_context(spec),
        "mu_rho": measure_json(w.mu_rho),
        "mu_sigma": measure_json(w.mu_sigma),
        "B_rho": elements_json(w.B_rho),
        "B_sigma": elements_json(w.B_sigma),
    }


def classify_document(spec: ProblemSpec) -> dict[str, Any]:
    mu, lam, T = spec.mu, spec.lam, spec.T
    sing = is_h_singular(mu, lam)
    reg = is_h_regular(mu, lam, T)
    if (sing.singular and reg.regular) != mu.is_zero():
        raise CrossCheckError("measure is both regular and singular but nonzero")
    orth = None if mu.is_zero() else orthogonality_test(mu, lam, T).orthogonal
    periodic = is_periodic(mu, lam, T)
    wold = decompose_document(spec)
    return {
        **_context(spec),
        "regular": reg.regular,
        "singular": sing.singular,
        "orthogonal": orth,
        "periodic": periodic,
        "singular_witness": None if sing.witness is None else elements_json(sing.witness),
        "singular_violation": None
        if sing.violation is None
        else {"point": list(sing.violation[0]), "lambda": list(sing.violation[1])},
        "regular_violations": [
            {"lambda": list(l), "point": list(t)} for l, t in reg.violations
        ],
        "h_table": h_table_document(spec)["h_table"],
        "wold": {k: wold[k] for k in ("mu_rho", "mu_sigma", "B_rho", "B_sigma")},
        "diagnostics": {
            "total_mass": str(mu.total_mass),
            "atoms": len(mu.support),
            "cosets": len(T),
        },
    }


def max_cross_gram(spec: ProblemSpec) -> float:
    """Largest ``|<u, v>|`` between polynomial bases of distinct quotient classes."""
    reps = quotient_representatives(spec.group, spec.H)
    bases = [poly_space_basis(spec.group, spec.H, x, spec.mu) for x in reps]
    worst = 0.0
    for i, b1 in enumerate(bases):
        for b2 in bases[i + 1:]:
            g = cross_gram(spec.mu, b1, b2)
            if g.size:
                worst = max(worst, float(np.max(np.abs(g))))
    return worst


def orthogonality_document(spec: ProblemSpec) -> dict[str, Any]:
    mu, lam, T = spec.mu, spec.lam, spec.T
    verdict = orthogonality_test(mu, lam, T)
    periodic = is_periodic(mu, lam, T)
    gram = max_cross_gram(spec)
    if verdict.orthogonal != periodic:
        raise CrossCheckError("orthogonality verdict disagrees with periodicity")
    if verdict.orthogonal != (gram <= GRAM_TOL):
        raise CrossCheckError(f"orthogonality verdict disagrees with cross-Gram entries (max {gram:.3g})")
    return {
        **_context(spec),
        "orthogonal": verdict.orthogonal,
        "periodic": periodic,
        "n": verdict.n,
        "deviations": [
            {"lambda": list(l), "point": list(t), "h": str(h)} for l, t, h in verdict.deviations
        ],
        "max_cross_gram": gram,
    }


def project_document(spec: ProblemSpec, x: Element, f: FunctionOnAtoms, alpha: float = 2.0) -> dict[str, Any]:
    mu = spec.mu
    x = spec.group.check(x)
    closed = project_closed_form(mu, spec.lam, x, f)
    oracle = project_oracle(poly_space_basis(spec.group, spec.H, x, mu), mu, f)
    diff = closed.sup_distance(oracle)
    if diff > PROJECTION_TOL:
        raise CrossCheckError(f"closed-form and oracle projections differ by {diff:.3g}")
    nf = lp_norm(mu, f, alpha)
    return {
        **_context(spec),
        "x": list(x),
        "alpha": alpha,
        "closed_form": function_json(closed),
        "oracle": function_json(oracle),
        "sup_difference": diff,
        "norm_ratio": None if nf == 0 else lp_norm(mu, closed, alpha) / nf,
    }
