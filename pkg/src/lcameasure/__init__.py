"""Atomic measures on finite abelian groups: regular/singular classification
relative to a subgroup, Wold-type splitting, and projections onto
coset polynomial spaces."""

from .classify import (
    is_h_regular,
    is_h_singular,
    is_periodic,
    orthogonality_test,
    wold_decompose,
)
from .group_core import (
    annihilator,
    canonical_transversal,
    character_pair,
    coset_partition,
    is_transversal,
    make_group,
    subgroup_generate,
)
from .lp_spaces import (
    FunctionOnAtoms,
    intersection_dimension,
    poly_space_basis,
    project_closed_form,
    project_oracle,
    v_apply,
    v_inverse,
)
from .measure import AtomicMeasure, derive_bundle, rho_bundle

__version__ = "0.1.0"
