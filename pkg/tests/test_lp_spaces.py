import cmath
import math

import numpy as np
import pytest

from lcameasure.classify import is_h_regular, is_h_singular, orthogonality_test
from lcameasure.group_core import (
    all_subgroups,
    annihilator,
    canonical_transversal,
    character_pair,
    make_group,
    subgroup_generate,
)
from lcameasure.lp_spaces import (
    FunctionOnAtoms,
    InconsistentBasesError,
    LpError,
    RangeViolationError,
    WrongBaseError,
    cross_gram,
    inner,
    intersection_dimension,
    lp_distance,
    lp_integral,
    norm_bound_check,
    poly_space_basis,
    polynomial,
    project_closed_form,
    project_oracle,
    quotient_representatives,
    random_function,
    v_apply,
    v_inverse,
)
from lcameasure.measure import AtomicMeasure, DegenerateInputError, derive_bundle

from instances import instance_stream


def vec(f):
    return [f.values[p] for p in f.base.support]


def test_lp_distance_examples(z4, uniform):
    one = FunctionOnAtoms.from_callable(uniform, lambda p: 1)
    zero = FunctionOnAtoms.from_callable(uniform, lambda p: 0)
    assert lp_distance(uniform, one, one, 2) == 0
    assert lp_distance(uniform, one, zero, 2) == pytest.approx(2)
    assert lp_distance(uniform, one, zero, 1) == pytest.approx(4)
    # no root below alpha = 1
    assert lp_distance(uniform, one, zero, 0.5) == pytest.approx(4)
    with pytest.raises(LpError):
        lp_distance(uniform, one, zero, 0)


def test_function_base_checked(z4, uniform, dirac0):
    with pytest.raises(WrongBaseError):
        FunctionOnAtoms(dirac0, {(0,): 1, (1,): 2})
    f = FunctionOnAtoms.from_callable(uniform, lambda p: 1)
    g = FunctionOnAtoms.from_callable(dirac0, lambda p: 1)
    with pytest.raises(WrongBaseError):
        lp_distance(uniform, f, g, 2)


def test_poly_space_basis_examples(z4_setup, z4, uniform, dirac0):
    _, H, _, _ = z4_setup
    b = poly_space_basis(z4, H, (0,), uniform)
    assert b.rank == 2
    assert np.allclose(vec(b.vectors[0]), [1, 1, 1, 1])
    assert np.allclose(vec(b.vectors[1]), [1, -1, 1, -1])
    assert poly_space_basis(z4, H, (0,), dirac0).rank == 1
    full = subgroup_generate(z4, [(1,)])
    for mu in (uniform, dirac0, AtomicMeasure.dirac(z4, (1,), (3,))):
        assert poly_space_basis(z4, full, (0,), mu).rank == len(mu.support)
    with pytest.raises(DegenerateInputError):
        poly_space_basis(z4, H, (0,), AtomicMeasure.zero(z4))


def test_intersection_dimension_examples(z4_setup, z4, uniform, dirac0):
    _, H, _, _ = z4_setup
    reps = quotient_representatives(z4, H)
    assert reps == ((0,), (1,))
    bases = [poly_space_basis(z4, H, x, uniform) for x in reps]
    assert intersection_dimension(bases, uniform) == 0
    bases = [poly_space_basis(z4, H, x, dirac0) for x in reps]
    assert intersection_dimension(bases, dirac0) == 1
    b = poly_space_basis(z4, H, (1,), uniform)
    assert intersection_dimension([b], uniform) == b.rank
    with pytest.raises(InconsistentBasesError):
        intersection_dimension([b, bases[0]], uniform)


def _rank(m):
    return np.linalg.matrix_rank(m, tol=1e-9) if m.size else 0


def test_pairwise_intersection_matches_rank_formula():
    cases, _ = instance_stream(21, 40)
    for group, H, _, mu in cases:
        reps = quotient_representatives(group, H)
        bases = [poly_space_basis(group, H, x, mu) for x in reps]
        sw = np.sqrt([float(w) for w in mu.atoms.values()])
        for b1 in bases[:3]:
            for b2 in bases[:3]:
                a1, a2 = sw[:, None] * b1.matrix(), sw[:, None] * b2.matrix()
                expected = _rank(a1) + _rank(a2) - _rank(np.hstack([a1, a2]))
                assert intersection_dimension([b1, b2], mu) == expected


def test_v_apply_examples(z4_setup, z4, uniform):
    _, H, lam, T = z4_setup
    b = derive_bundle(uniform, lam, T)
    phi = FunctionOnAtoms(b.nu, {(0,): 1, (1,): 0})
    f = v_apply(b, (1,), phi)
    assert vec(f) == [1, 0, -1, 0]
    f0 = v_apply(b, (0,), phi)
    assert vec(f0) == [1, 0, 1, 0]
    with pytest.raises(WrongBaseError):
        v_apply(b, (0,), FunctionOnAtoms.from_callable(uniform, lambda p: 1))


def test_v_inverse_examples(z4_setup, uniform):
    _, _, lam, T = z4_setup
    b = derive_bundle(uniform, lam, T)
    f = FunctionOnAtoms.from_vector(uniform, [1, 0, -1, 0])
    phi = v_inverse(b, f, (1,))
    assert phi.base == b.nu and phi.values == {(0,): 1, (1,): 0}
    bad = FunctionOnAtoms.from_vector(uniform, [0, 0, 1, 0])
    with pytest.raises(RangeViolationError) as err:
        v_inverse(b, bad, (1,))
    assert err.value.residual == pytest.approx(1)


def test_v_inverse_when_representative_is_not_an_atom(z4_setup, z4):
    _, _, lam, T = z4_setup
    mu = AtomicMeasure.dirac(z4, (2,), (3,))
    b = derive_bundle(mu, lam, T)
    phi = FunctionOnAtoms(b.nu, {(0,): 2, (1,): 1j})
    f = v_apply(b, (1,), phi)
    assert v_inverse(b, f, (1,)).sup_distance(phi) <= 1e-15


def _eq1_residual(group, H, lam, mu, x, rng):
    T = canonical_transversal(group, lam)
    b = derive_bundle(mu, lam, T)
    freqs = [group.add(x, y) for y in H]
    coeffs = rng.normal(size=len(freqs)) + 1j * rng.normal(size=len(freqs))
    p = polynomial(group, freqs, coeffs)
    phi = FunctionOnAtoms.from_callable(b.nu, p)
    unfolded = v_apply(b, x, phi)
    return unfolded.sup_distance(FunctionOnAtoms.from_callable(mu, p))


def test_unfold_fixes_polynomials():
    cases, _ = instance_stream(22, 40)
    rng = np.random.default_rng(22)
    for group, H, lam, mu in cases:
        for x in quotient_representatives(group, H):
            assert _eq1_residual(group, H, lam, mu, x, rng) <= 1e-10


@pytest.mark.parametrize("alpha", [0.5, 1, 2, 3])
def test_unfold_is_isometric(alpha):
    cases, _ = instance_stream(23, 25)
    rng = np.random.default_rng(23)
    for group, H, lam, mu in cases:
        b = derive_bundle(mu, lam, canonical_transversal(group, lam))
        x = quotient_representatives(group, H)[-1]
        for _ in range(4):
            phi = random_function(b.nu, rng)
            f = v_apply(b, x, phi)
            assert lp_integral(mu, f, alpha) == pytest.approx(lp_integral(b.nu, phi, alpha), rel=1e-9)
            back = v_inverse(b, f, x)
            assert back.base == b.nu and back.sup_distance(phi) <= 1e-12


def test_unfold_range_is_polynomial_space():
    """Range of the unfolding map equals the span of the coset characters."""
    cases, _ = instance_stream(24, 30)
    rng = np.random.default_rng(24)
    for group, H, lam, mu in cases:
        b = derive_bundle(mu, lam, canonical_transversal(group, lam))
        for x in quotient_representatives(group, H)[:3]:
            basis = poly_space_basis(group, H, x, mu)
            assert basis.rank == len(b.nu.support)
            f = v_apply(b, x, random_function(b.nu, rng))
            assert project_oracle(basis, mu, f).sup_distance(f) <= 1e-10


def _lstsq_projection(group, H, x, mu, f):
    # independent route: full character system over x + H, weighted least squares
    atoms = mu.support
    w = np.sqrt([float(mu.weight(p)) for p in atoms])
    A = np.array([[cmath.exp(2j * math.pi * sum(a * (xi + y) / m for a, xi, y, m in zip(p, x, h, group.moduli)))
                   for h in H] for p in atoms])
    c, *_ = np.linalg.lstsq(w[:, None] * A, w * np.array(vec(f)), rcond=1e-12)
    return A @ c


def test_projection_examples(z4_setup, z4, uniform):
    _, H, lam, _ = z4_setup
    f = FunctionOnAtoms.from_vector(uniform, [1, 0, 0, 0])
    p0 = project_closed_form(uniform, lam, (0,), f)
    assert np.allclose(vec(p0), [0.5, 0, 0.5, 0], atol=1e-15)
    assert np.allclose(_lstsq_projection(z4, H, (0,), uniform, f), [0.5, 0, 0.5, 0])
    oracle = project_oracle(poly_space_basis(z4, H, (0,), uniform), uniform, f)
    assert np.allclose(vec(oracle), [0.5, 0, 0.5, 0], atol=1e-12)

    ones = FunctionOnAtoms.from_vector(uniform, [1, 1, 1, 1])
    assert np.allclose(vec(project_closed_form(uniform, lam, (1,), ones)), 0, atol=1e-15)

    with pytest.raises(DegenerateInputError):
        project_closed_form(AtomicMeasure.zero(z4), lam, (0,), FunctionOnAtoms(AtomicMeasure.zero(z4), {}))


def test_projection_oracle_trivial_cases(z4_setup, z4, uniform):
    _, H, _, _ = z4_setup
    basis = poly_space_basis(z4, H, (0,), uniform)
    inside = FunctionOnAtoms.from_vector(uniform, [3, 1j, 3, 1j])
    assert project_oracle(basis, uniform, inside).sup_distance(inside) <= 1e-12
    ortho = FunctionOnAtoms.from_vector(uniform, [1, 1, -1, -1])
    assert np.allclose(vec(project_oracle(basis, uniform, ortho)), 0, atol=1e-12)


def test_projection_agrees_with_oracles():
    cases, _ = instance_stream(25, 60)
    rng = np.random.default_rng(25)
    for group, H, lam, mu in cases:
        for x in quotient_representatives(group, H)[:4]:
            basis = poly_space_basis(group, H, x, mu)
            f = random_function(mu, rng)
            pf = project_closed_form(mu, lam, x, f)
            assert pf.sup_distance(project_oracle(basis, mu, f)) <= 1e-9
            assert np.max(np.abs(np.array(vec(pf)) - _lstsq_projection(group, H, x, mu, f))) <= 1e-9
            # idempotent and self-adjoint
            assert project_closed_form(mu, lam, x, pf).sup_distance(pf) <= 1e-10
            g = random_function(mu, rng)
            pg = project_closed_form(mu, lam, x, g)
            assert abs(inner(mu, pf, g) - inner(mu, f, pg)) <= 1e-10


def test_shift_law():
    """Characters and projections pick up the phase <l, x> under shifts by l."""
    cases, _ = instance_stream(26, 40)
    rng = np.random.default_rng(26)
    for group, H, lam, mu in cases:
        for x in quotient_representatives(group, H)[:3]:
            basis = poly_space_basis(group, H, x, mu)
            for s in basis.frequencies:
                for l in lam:
                    phase = character_pair(group, l, x)
                    for p in group.elements():
                        lhs = character_pair(group, group.add(p, l), s)
                        assert abs(lhs - phase * character_pair(group, p, s)) <= 1e-12
            F = project_closed_form(mu, lam, x, random_function(mu, rng))
            for p in mu.support:
                for l in lam:
                    q = group.add(p, l)
                    if mu.weight(q):
                        assert abs(character_pair(group, l, x) * F(p) - F(q)) <= 1e-10


def test_norm_bound_examples(z4_setup, uniform, mixed):
    _, _, lam, _ = z4_setup
    for mu in (uniform, mixed):
        for x in ((0,), (1,)):
            for alpha in (1, 2):
                assert norm_bound_check(mu, lam, x, alpha, 100, seed=3) <= 1 + 1e-9
    # fixed points of the projection keep their norm
    rng = np.random.default_rng(0)
    f = project_closed_form(mixed, lam, (1,), random_function(mixed, rng))
    ff = project_closed_form(mixed, lam, (1,), f)
    assert lp_distance(mixed, f, ff, 2) <= 1e-12
    with pytest.raises(LpError):
        norm_bound_check(uniform, lam, (0,), 3, 10)


def test_norm_bound_reproducible(z4_setup, mixed):
    _, _, lam, _ = z4_setup
    assert norm_bound_check(mixed, lam, (1,), 1, 30, seed=9) == norm_bound_check(mixed, lam, (1,), 1, 30, seed=9)


@pytest.mark.parametrize("moduli", [[4], [6], [2, 4], [2, 2]])
def test_definition_cross_checks(moduli):
    g = make_group(moduli)
    rng = np.random.default_rng(sum(moduli))
    for H in all_subgroups(g):
        lam = annihilator(g, H)
        T = canonical_transversal(g, lam)
        reps = quotient_representatives(g, H)
        for _ in range(6):
            k = int(rng.integers(1, g.order + 1))
            pts = [tuple(int(v) for v in p) for p in rng.permutation(list(g.elements()))[:k]]
            mu = AtomicMeasure(g, {p: int(rng.integers(1, 4)) for p in pts})
            bases = [poly_space_basis(g, H, x, mu) for x in reps]
            assert all(b.rank == k for b in bases) == is_h_singular(mu, lam).singular
            assert (intersection_dimension(bases, mu) == 0) == is_h_regular(mu, lam, T).regular
            worst = max(
                (np.max(np.abs(cross_gram(mu, b1, b2))) for i, b1 in enumerate(bases) for b2 in bases[i + 1:]),
                default=0.0,
            )
            assert (worst <= 1e-10) == orthogonality_test(mu, lam, T).orthogonal
